//! Exact overdetermined fitting of series against a finite basis.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::linalg::{solve_exact, SolveFailure};
use crate::exact::Rational;
use crate::series::XSeries;
use crate::{Error, Result};

/// Surplus equations demanded of every certified fit.
pub const MIN_SURPLUS: usize = 10;

/// How much evidence backs a fit: equations used, unknowns, and the highest
/// x-exponent at which agreement was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub equations: usize,
    pub unknowns: usize,
    pub surplus: usize,
    pub checked_through: i64,
}

#[derive(Clone, Debug)]
pub struct Fit {
    pub coefficients: Vec<Rational>,
    pub certificate: Certificate,
}

/// Finds the unique `c` with `Σ c_j basis_j = target` on every known
/// coefficient. Exponents where all of target and basis vanish are not
/// counted as equations.
pub fn fit_linear(
    target: &XSeries,
    basis: &[XSeries],
    min_surplus: usize,
    context: &str,
) -> Result<Fit> {
    if target.has_log() || basis.iter().any(XSeries::has_log) {
        return Err(Error::LogTerm("fit"));
    }
    let lo = basis.iter().map(XSeries::val).fold(target.val(), i64::min);
    let hi = basis
        .iter()
        .map(XSeries::valid_order)
        .fold(target.valid_order(), i64::min);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut exps = Vec::new();
    for e in lo..=hi {
        let row: Vec<Rational> = basis.iter().map(|b| b.at(e)).collect();
        let t = target.at(e);
        if row.iter().all(Zero::is_zero) && t.is_zero() {
            continue;
        }
        rows.push(row);
        rhs.push(t);
        exps.push(e);
    }
    let unknowns = basis.len();
    let equations = rows.len();
    if equations < unknowns + min_surplus {
        return Err(Error::InsufficientSurplus {
            found: equations.saturating_sub(unknowns),
            required: min_surplus,
            context: context.to_string(),
        });
    }
    match solve_exact(&rows, &rhs) {
        Ok(coefficients) => Ok(Fit {
            coefficients,
            certificate: Certificate {
                equations,
                unknowns,
                surplus: equations - unknowns,
                checked_through: hi,
            },
        }),
        Err(SolveFailure::Inconsistent { row }) => Err(Error::FitResidual {
            exponent: exps[row],
            context: context.to_string(),
        }),
        Err(SolveFailure::RankDeficient { rank, unknowns }) => Err(Error::Singular(format!(
            "{context}: rank {rank} for {unknowns} unknowns"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn geometric(a: i64, order: i64) -> XSeries {
        XSeries::one()
            .truncate(order)
            .checked_div(&XSeries::from_ints(0, &[1, -a], crate::series::EXACT))
            .unwrap()
    }

    #[test]
    fn recovers_combination_and_flags_residual() {
        let b = vec![geometric(2, 30), geometric(3, 30), geometric(5, 30)];
        let t = &(&b[0].scale(&rat(1, 3)) - &b[1]) + &b[2].scale(&int(7));
        let fit = fit_linear(&t, &b, 10, "test").unwrap();
        assert_eq!(fit.coefficients, vec![rat(1, 3), int(-1), int(7)]);
        assert_eq!(fit.certificate.surplus, 28);

        let bad = &t + &XSeries::monomial(int(1), 17, 30);
        match fit_linear(&bad, &b, 10, "test") {
            Err(Error::FitResidual { exponent, .. }) => assert_eq!(exponent, 17),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            fit_linear(&t.truncate(8), &b, 10, "test"),
            Err(Error::InsufficientSurplus { .. })
        ));
    }
}
