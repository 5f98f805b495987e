//! Difference operators `Σ_j a_j(x, ε) Λ^j` with `Λ = e^{ε∂_x}`.
//!
//! Coefficients are [`EpsFamily`] values so that odd powers of `ε`, which
//! appear in intermediate products, are carried exactly; callers convert
//! back to [`GenusFamily`] and thereby assert that odd grades cancel.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::exact::{bernoulli, big, factorial, int, Rational};
use crate::series::{EpsFamily, GenusFamily, XSeries, EXACT};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    terms: BTreeMap<i64, EpsFamily>,
    max_grade: usize,
}

impl DiffOp {
    pub fn new(terms: BTreeMap<i64, EpsFamily>) -> Result<Self> {
        let mut grades = terms.values().map(EpsFamily::max_grade);
        let Some(max_grade) = grades.next() else {
            return Err(Error::InvalidInput("empty difference operator".into()));
        };
        if grades.any(|g| g != max_grade) {
            return Err(Error::InvalidInput(
                "operator coefficients with different ε-caps".into(),
            ));
        }
        Ok(DiffOp { terms, max_grade })
    }

    /// `Λ + V + WΛ^{-1}`.
    pub fn lax(v: &EpsFamily, w: &EpsFamily) -> Result<Self> {
        if v.max_grade() != w.max_grade() {
            return Err(Error::InvalidInput(format!(
                "V and W have different ε-caps ({} vs {})",
                v.max_grade(),
                w.max_grade()
            )));
        }
        let one = EpsFamily::from_grade0(XSeries::one(), v.max_grade());
        DiffOp::new(BTreeMap::from([(1, one), (0, v.clone()), (-1, w.clone())]))
    }

    /// [`DiffOp::lax`] from genus families; the caps must agree.
    pub fn lax_genus(v: &GenusFamily, w: &GenusFamily) -> Result<Self> {
        if v.genus_cap() != w.genus_cap() {
            return Err(Error::InvalidInput(format!(
                "V and W have different genus caps ({} vs {})",
                v.genus_cap(),
                w.genus_cap()
            )));
        }
        DiffOp::lax(&v.to_eps(), &w.to_eps())
    }

    pub fn max_grade(&self) -> usize {
        self.max_grade
    }

    pub fn coefficient(&self, offset: i64) -> Option<&EpsFamily> {
        self.terms.get(&offset)
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    /// Offset-0 coefficient.
    pub fn residue(&self) -> EpsFamily {
        self.terms
            .get(&0)
            .cloned()
            .unwrap_or_else(|| EpsFamily::new(vec![XSeries::zero(EXACT); self.max_grade + 1]))
    }

    /// Operator product; `Λ^i ∘ b = (Λ^i b) Λ^i`.
    pub fn mul(&self, other: &DiffOp) -> DiffOp {
        self.mul_pruned(other, &mut HashMap::new(), None)
    }

    fn mul_pruned(
        &self,
        other: &DiffOp,
        shifted: &mut HashMap<(i64, i64), EpsFamily>,
        keep: Option<i64>,
    ) -> DiffOp {
        let mut out: BTreeMap<i64, EpsFamily> = BTreeMap::new();
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                let k = i + j;
                if keep.is_some_and(|m| k.abs() > m) {
                    continue;
                }
                let sb = shifted.entry((j, i)).or_insert_with(|| {
                    if i == 0 {
                        b.clone()
                    } else {
                        b.shift(&int(i))
                    }
                });
                let prod = a.mul(sb);
                match out.get_mut(&k) {
                    Some(acc) => *acc = acc.add(&prod),
                    None => {
                        out.insert(k, prod);
                    }
                }
            }
        }
        let max_grade = self.max_grade.min(other.max_grade);
        DiffOp {
            terms: out,
            max_grade,
        }
    }
}

/// `res Lⁿ`, keeping only the offsets that can still return to 0.
pub fn op_power_residue(l: &DiffOp, n: u32) -> Result<EpsFamily> {
    if n == 0 {
        return Err(Error::InvalidInput("power residue needs n ≥ 1".into()));
    }
    let reach = l.offsets().map(i64::abs).max().unwrap_or(0);
    let mut shifted = HashMap::new();
    let mut p = l.clone();
    for step in 2..=n {
        let remaining = (n - step) as i64;
        p = p.mul_pruned(l, &mut shifted, Some(reach * remaining));
    }
    Ok(p.residue())
}

/// `h_j = res L^{j+2} / (j+2)`, with `h_{-1} = V`.
pub fn h(l: &DiffOp, j: i64) -> Result<EpsFamily> {
    if j < -1 {
        return Err(Error::InvalidInput(format!("h_{j} is undefined")));
    }
    let r = op_power_residue(l, (j + 2) as u32)?;
    Ok(r.scale(&Rational::new(1.into(), (j + 2).into())))
}

/// Coefficients `c_k` of `(Λ+1)^{-1} = Σ_k c_k (ε∂)^k`, from `1/(e^z+1)`:
/// `c_k = (1 − 2^{k+1}) B_{k+1}/(k+1)!`.
pub fn inv_shift_plus_one_coefficients(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            let two = Rational::from_integer(num_bigint::BigInt::from(2).pow(k as u32 + 1));
            (Rational::one() - two) * bernoulli(k + 1) / big(&factorial(k as u32 + 1))
        })
        .collect()
}

/// Coefficients of `ε²∂²/(Λ + Λ^{-1} − 2) = Σ_k (1−2k) B_{2k}/(2k)! ε^{2k}∂^{2k}`,
/// indexed by the full `ε`-power.
pub fn inv_discrete_laplacian_coefficients(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|m| {
            if m % 2 == 1 {
                return Rational::zero();
            }
            let k = (m / 2) as i64;
            int(1 - 2 * k) * bernoulli(m) / big(&factorial(m as u32))
        })
        .collect()
}

pub fn inv_shift_plus_one(f: &EpsFamily) -> EpsFamily {
    f.apply_eps_operator(&inv_shift_plus_one_coefficients(f.max_grade()))
}

pub fn inv_shift_plus_one_genus(f: &GenusFamily) -> Result<GenusFamily> {
    GenusFamily::from_eps(&inv_shift_plus_one(&f.to_eps()))
}

/// `(Λ + 1) f`.
pub fn shift_plus_one(f: &EpsFamily) -> EpsFamily {
    f.shift(&Rational::one()).add(f)
}

pub fn inv_discrete_laplacian(f: &EpsFamily) -> EpsFamily {
    f.apply_eps_operator(&inv_discrete_laplacian_coefficients(f.max_grade()))
}

pub fn inv_discrete_laplacian_genus(f: &GenusFamily) -> Result<GenusFamily> {
    GenusFamily::from_eps(&inv_discrete_laplacian(&f.to_eps()))
}

/// `(Λ + Λ^{-1} − 2)/ε²`, i.e. `Σ_{k≥1} 2/(2k)! ε^{2k-2}∂^{2k}`.
pub fn discrete_laplacian_over_eps2(f: &EpsFamily) -> EpsFamily {
    let top = f.max_grade();
    let mut grades = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut acc = XSeries::zero(EXACT);
        for k in 1..=(n / 2 + 1) {
            let src = n + 2 - 2 * k;
            if src > top {
                continue;
            }
            let c = int(2) / big(&factorial(2 * k as u32));
            acc = &acc + &f.grade(src).nth_derivative(2 * k).scale(&c);
        }
        grades.push(acc);
    }
    EpsFamily::new(grades)
}
