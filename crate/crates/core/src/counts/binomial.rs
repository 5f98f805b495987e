use num_traits::{Pow, Zero};
use serde::Serialize;

use super::{face_count, to_count, CountEngine, MapCountRecord, Provenance};
use crate::exact::{big, binomial, factorial, int, pochhammer, rat, Rational};
use crate::free_energy::{fit_ansatz, Variable};
use crate::solver::Model;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinomialForm {
    /// from the expansion in `q` (`(3−q)^{−ℓ}` for b = 3, `(ν−(ν−1)q)^{−ℓ}` for even b)
    QForm,
    /// from the expansion in `p = Kw/(1−Kw)` (b = 3, 4)
    PForm,
}

fn pow_i(base: i64, e: i64) -> Rational {
    Pow::pow(int(base), e as i32)
}

fn fact(n: usize) -> Rational {
    big(&factorial(n as u32))
}

/// `n_g(b^k)` as a finite sum over the coefficients of a closed form of `F_g`.
/// For b = 3, `k = 2j`.
pub fn count_binomial(
    engine: &mut CountEngine,
    g: usize,
    k: usize,
    which: BinomialForm,
) -> Result<MapCountRecord> {
    let model = engine.model();
    let b = model.valence();
    if g < 2 {
        return Err(Error::InvalidInput(format!(
            "binomial sums need g ≥ 2, got {g}"
        )));
    }
    let record = |count| MapCountRecord {
        g,
        b,
        k,
        count,
        provenance: Provenance::BinomialFormula,
    };
    if face_count(b, g, k).is_none() {
        return Ok(record(num_bigint::BigInt::zero()));
    }
    let sol = engine.solution();
    let value = match (model, which) {
        (Model::Tri, BinomialForm::QForm) => {
            let r = fit_ansatz(sol, g, Variable::QTri)?;
            let j = k / 2;
            let upper = rat(3 * j as i64, 2) - int(1);
            let mut sum = Rational::zero();
            for m in 0..=j {
                let bin = binomial(&upper, (j - m) as u32);
                for (&l, c) in &r.coefficients {
                    let t = pochhammer(&int(l - 1), m as u32) / (pow_i(2, m as i64 + l) * fact(m));
                    sum += t * &bin * c;
                }
            }
            pow_i(72, j as i64) * fact(2 * j) * sum
        }
        (Model::Tri, BinomialForm::PForm) => {
            let c = fit_ansatz(sol, g, Variable::PTri)?;
            let j = k / 2;
            let ji = j as i64;
            let mut sum = Rational::zero();
            for l in (2 * g - 1)..=j {
                let cl = c.coefficient(l as i64);
                if cl.is_zero() {
                    continue;
                }
                for m in 0..=(j - l) {
                    let n = j - l - m;
                    let a = pochhammer(&(rat(3 * ji, 2) - int(m as i64)), m as u32) / fact(m);
                    let bb = pochhammer(&(rat(ji, 2) + int(1)), n as u32) / fact(n);
                    sum += a * bb * pow_i(-3, -(n as i64)) * &cl;
                }
            }
            pow_i(108, j as i64) * fact(2 * j) * sum
        }
        (Model::Even { nu: 2 }, BinomialForm::PForm) => {
            let c = fit_ansatz(sol, g, Variable::PQuad)?;
            let ki = k as i64;
            let mut sum = Rational::zero();
            for l in (2 * g - 1)..=k {
                let cl = c.coefficient(l as i64);
                if cl.is_zero() {
                    continue;
                }
                for m in 0..=(k - l) {
                    let n = k - l - m;
                    let a = pochhammer(&int(2 * ki - m as i64), m as u32) / fact(m);
                    let bb = pochhammer(&int(ki + 1), n as u32) / fact(n);
                    sum += a * bb * pow_i(-2, -(n as i64)) * &cl;
                }
            }
            pow_i(24, k as i64) * fact(k) * sum
        }
        (Model::Even { nu }, BinomialForm::QForm) => {
            let r = fit_ansatz(sol, g, Variable::QNu)?;
            let coefficients: Vec<(i64, Rational)> = r
                .coefficients
                .iter()
                .map(|(l, c)| (*l, c.clone()))
                .collect();
            let s = super::nu::s_value(nu, k, &coefficients);
            let base = fact(2 * nu as usize) / (fact(nu as usize + 1) * fact(nu as usize));
            Pow::pow(base, k as i32) * s
        }
        (Model::Even { .. }, BinomialForm::PForm) => {
            return Err(Error::InvalidInput(
                "the p-form sum exists for b = 3, 4 only".into(),
            ))
        }
    };
    let n = to_count(&value, 0, || format!("binomial n_{g}({b}^{k})"))?;
    Ok(record(n))
}
