//! Constants `C_g` of the formal solution `U = Σ C_g X^{(1−5g)/2}` of
//! `U″ + U²/16 − X/16 = 0`, and the Bernoulli identity behind the constant
//! term of the even-valence free energies.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::exact::{bernoulli, big, factorial, fmt_rational, int, rat, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PainleveTable {
    values: Vec<Rational>,
}

impl PainleveTable {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, g: usize) -> &Rational {
        &self.values[g]
    }

    pub fn gmax(&self) -> usize {
        self.values.len() - 1
    }
}

impl Serialize for PainleveTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<usize, String> = self
            .values
            .iter()
            .enumerate()
            .map(|(g, c)| (g, fmt_rational(c)))
            .collect();
        map.serialize(s)
    }
}

/// The table with `C_0 = −1`.
pub fn painleve_constants(gmax: usize) -> PainleveTable {
    painleve_constants_with(-Rational::one(), gmax)
}

/// The table on the branch with the given `C_0 = ±1`. At order `X^{(2−5n)/2}`,
/// `p(p−1) C_{n−1} + (1/16) Σ_{i=0}^{n} C_i C_{n−i} = 0` with `p = (6−5n)/2`,
/// solved for `C_n`.
pub fn painleve_constants_with(c0: Rational, gmax: usize) -> PainleveTable {
    assert!(
        c0 == Rational::one() || c0 == -Rational::one(),
        "C_0 must be ±1"
    );
    let mut values = vec![c0.clone()];
    for n in 1..=gmax {
        let p = rat(6 - 5 * n as i64, 2);
        let mut rest = &p * (&p - Rational::one()) * &values[n - 1];
        let mut cross = Rational::zero();
        for i in 1..n {
            cross += &values[i] * &values[n - i];
        }
        rest += cross / int(16);
        // (2 C_0 / 16) C_n + rest = 0
        values.push(-rest * int(8) / &c0);
    }
    PainleveTable { values }
}

/// Substitutes the table into the ODE. With `X = Z^{−2}` every term is a power
/// `X^{e/2}`; the check covers every `e` down to the last one fully
/// determined by the table.
pub fn painleve_residual(table: &PainleveTable) -> Result<()> {
    // doubled exponent → coefficient
    let mut res: BTreeMap<i64, Rational> = BTreeMap::new();
    let u: Vec<(i64, &Rational)> = table
        .values
        .iter()
        .enumerate()
        .map(|(g, c)| (1 - 5 * g as i64, c))
        .collect();
    for &(e, c) in &u {
        let p = rat(e, 2);
        *res.entry(e - 4).or_insert_with(Rational::zero) += &p * (&p - Rational::one()) * c;
    }
    for &(e1, c1) in &u {
        for &(e2, c2) in &u {
            *res.entry(e1 + e2).or_insert_with(Rational::zero) += c1 * c2 / int(16);
        }
    }
    *res.entry(2).or_insert_with(Rational::zero) -= rat(1, 16);
    let lowest = 2 - 5 * table.gmax() as i64;
    for (e, c) in res.iter().rev() {
        if *e < lowest {
            break;
        }
        if !c.is_zero() {
            return Err(Error::Identity(format!(
                "Painlevé I residual {} at X^({e}/2)",
                fmt_rational(c)
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BernoulliReport {
    pub gmax: usize,
    pub checked: usize,
}

/// `C̃_0 = 1`, `C̃_1 = 1/6`, `C̃_k = B_{2k}` for `k ≥ 2`.
fn c_tilde(k: usize) -> Rational {
    match k {
        0 => Rational::one(),
        1 => rat(1, 6),
        _ => bernoulli(2 * k),
    }
}

/// `Σ_{k=0}^{g} 1/(2g−2k+2)! · (2k−1)/(2k)! · C̃_k = −½ δ_{g0}` for `g ≤ gmax`.
pub fn verify_bernoulli_recursion(gmax: usize) -> Result<BernoulliReport> {
    for g in 0..=gmax {
        let mut sum = Rational::zero();
        for k in 0..=g {
            let a = big(&factorial((2 * g - 2 * k + 2) as u32));
            let b = big(&factorial(2 * k as u32));
            sum += int(2 * k as i64 - 1) * c_tilde(k) / (a * b);
        }
        let expected = if g == 0 { rat(-1, 2) } else { Rational::zero() };
        if sum != expected {
            return Err(Error::Identity(format!(
                "Bernoulli recursion fails at g = {g}: {}",
                fmt_rational(&sum)
            )));
        }
    }
    Ok(BernoulliReport {
        gmax,
        checked: gmax + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_constants() {
        let t = painleve_constants(6);
        assert_eq!(&t.values()[..3], &[int(-1), int(2), int(98)]);
        painleve_residual(&t).unwrap();
    }

    #[test]
    fn residual_detects_tampering() {
        let mut t = painleve_constants(4);
        t.values[3] += rat(1, 7);
        assert!(painleve_residual(&t).is_err());
    }

    #[test]
    fn other_branch() {
        // C_1 agrees on both branches; C_2 does not
        let t = painleve_constants_with(int(1), 3);
        painleve_residual(&t).unwrap();
        assert_eq!(t.get(1), &int(2));
        assert_eq!(t.get(2), &int(-98));
    }

    #[test]
    fn bernoulli_recursion() {
        assert_eq!(verify_bernoulli_recursion(20).unwrap().checked, 21);
    }
}
