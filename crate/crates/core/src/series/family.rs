//! Families of series indexed by powers of the string coupling `ε`.

use super::XSeries;
use crate::exact::{int, Rational};
use crate::{Error, Result};

/// `Σ_m ε^m f_m(x)` truncated after a maximal grade; odd grades allowed.
///
/// Intermediate expressions of the difference operators (residues, half
/// shifts) carry odd powers of `ε`, which cancel only in final results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsFamily {
    grades: Vec<XSeries>,
}

impl EpsFamily {
    pub fn new(grades: Vec<XSeries>) -> Self {
        assert!(!grades.is_empty(), "an ε-family needs at least grade 0");
        EpsFamily { grades }
    }

    /// A series placed in grade 0, with zeros (of its validity) above.
    pub fn from_grade0(f: XSeries, max_grade: usize) -> Self {
        let z = XSeries::zero(f.valid_order());
        let mut grades = vec![f];
        grades.resize(max_grade + 1, z);
        EpsFamily { grades }
    }

    pub fn max_grade(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, m: usize) -> &XSeries {
        &self.grades[m]
    }

    pub fn grades(&self) -> &[XSeries] {
        &self.grades
    }

    pub fn into_grades(self) -> Vec<XSeries> {
        self.grades
    }

    pub fn truncate_grade(&self, max_grade: usize) -> EpsFamily {
        EpsFamily::new(self.grades[..=max_grade.min(self.max_grade())].to_vec())
    }

    pub fn truncate_x(&self, order: i64) -> EpsFamily {
        EpsFamily::new(self.grades.iter().map(|g| g.truncate(order)).collect())
    }

    pub fn add(&self, other: &EpsFamily) -> EpsFamily {
        EpsFamily::new(
            self.grades
                .iter()
                .zip(&other.grades)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &EpsFamily) -> EpsFamily {
        EpsFamily::new(
            self.grades
                .iter()
                .zip(&other.grades)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> EpsFamily {
        EpsFamily::new(self.grades.iter().map(|a| a.scale(c)).collect())
    }

    pub fn mul_series(&self, f: &XSeries) -> EpsFamily {
        EpsFamily::new(self.grades.iter().map(|a| a * f).collect())
    }

    pub fn mul(&self, other: &EpsFamily) -> EpsFamily {
        let top = self.max_grade().min(other.max_grade());
        let grades = (0..=top)
            .map(|n| {
                let mut acc = &self.grades[0] * &other.grades[n];
                for i in 1..=n {
                    acc = &acc + &(&self.grades[i] * &other.grades[n - i]);
                }
                acc
            })
            .collect();
        EpsFamily::new(grades)
    }

    pub fn derivative(&self) -> EpsFamily {
        EpsFamily::new(self.grades.iter().map(XSeries::derivative).collect())
    }

    /// Applies `Σ_k c_k ε^k ∂^k`; grade `n` of the result is
    /// `Σ_k c_k ∂^k f_{n-k}`.
    pub fn apply_eps_operator(&self, c: &[Rational]) -> EpsFamily {
        let top = self.max_grade();
        let mut derivs: Vec<Vec<XSeries>> = self.grades.iter().map(|f| vec![f.clone()]).collect();
        let grades = (0..=top)
            .map(|n| {
                let mut acc = XSeries::zero(super::EXACT);
                for k in 0..=n.min(c.len().saturating_sub(1)) {
                    let src = n - k;
                    while derivs[src].len() <= k {
                        let next = derivs[src].last().unwrap().derivative();
                        derivs[src].push(next);
                    }
                    acc = &acc + &derivs[src][k].scale(&c[k]);
                }
                acc
            })
            .collect();
        EpsFamily::new(grades)
    }

    /// The shift `Λ^j : f(x) ↦ f(x + jε)` for rational `j`.
    pub fn shift(&self, j: &Rational) -> EpsFamily {
        let mut c = Vec::with_capacity(self.max_grade() + 1);
        let mut term = Rational::from_integer(1.into());
        for k in 0..=self.max_grade() {
            if k > 0 {
                term = term * j / int(k as i64);
            }
            c.push(term.clone());
        }
        self.apply_eps_operator(&c)
    }

    /// Checks that all odd grades vanish through their validity orders.
    pub fn odd_grades_vanish(&self) -> std::result::Result<(), (usize, i64)> {
        for (m, g) in self.grades.iter().enumerate().skip(1).step_by(2) {
            if let Some((e, _)) = g.terms().next() {
                return Err((m, e));
            }
            if g.has_log() {
                return Err((m, i64::MIN));
            }
        }
        Ok(())
    }
}

/// `Σ_g ε^{2g} f_g(x)` for `g = 0..=genus_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusFamily {
    entries: Vec<XSeries>,
}

impl GenusFamily {
    pub fn new(entries: Vec<XSeries>) -> Self {
        assert!(!entries.is_empty(), "a genus family needs genus 0");
        GenusFamily { entries }
    }

    pub fn genus_cap(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, g: usize) -> &XSeries {
        &self.entries[g]
    }

    pub fn entries(&self) -> &[XSeries] {
        &self.entries
    }

    pub fn push(&mut self, f: XSeries) {
        self.entries.push(f);
    }

    pub fn to_eps(&self) -> EpsFamily {
        let mut grades = Vec::with_capacity(2 * self.entries.len() - 1);
        for (g, f) in self.entries.iter().enumerate() {
            if g > 0 {
                grades.push(XSeries::zero(super::EXACT));
            }
            grades.push(f.clone());
        }
        EpsFamily::new(grades)
    }

    /// Even grades of `e`; fails if an odd grade is nonzero.
    pub fn from_eps(e: &EpsFamily) -> Result<GenusFamily> {
        if let Err((m, x)) = e.odd_grades_vanish() {
            return Err(Error::Identity(format!(
                "odd ε-grade {m} does not cancel (first term x^{x})"
            )));
        }
        Ok(GenusFamily::new(
            e.grades().iter().step_by(2).cloned().collect(),
        ))
    }

    /// `log` of the family: `L_0 = log f_0` and, with `u_g = f_g / f_0`,
    /// `g L_g = g u_g − Σ_{j=1}^{g-1} j L_j u_{g-j}`.
    pub fn log(&self) -> Result<GenusFamily> {
        let f0 = &self.entries[0];
        let mut out = vec![f0.log()?];
        let u: Vec<XSeries> = self
            .entries
            .iter()
            .map(|f| f.checked_div(f0))
            .collect::<Result<_>>()?;
        for g in 1..self.entries.len() {
            let mut acc = u[g].scale(&int(g as i64));
            for j in 1..g {
                acc = &acc - &(&out[j] * &u[g - j]).scale(&int(j as i64));
            }
            out.push(acc.scale(&Rational::new(1.into(), (g as i64).into())));
        }
        Ok(GenusFamily::new(out))
    }
}
