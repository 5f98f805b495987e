use num_traits::Zero;

use super::XSeries;
use crate::exact::Rational;
use crate::{Error, Result};

fn horner(coeffs: &[XSeries], y: &XSeries, order: i64) -> XSeries {
    let mut acc = XSeries::zero(order);
    for c in coeffs.iter().rev() {
        acc = (&(&acc * y) + c).truncate(order);
    }
    acc
}

/// Solves `Σ_i coeffs[i](x) · y^i = 0` for the power-series branch with
/// `y(0) = seed`, through `x^order`, by Newton iteration with precision doubling.
///
/// The seed must be a simple root of the relation at `x = 0`.
pub fn solve_algebraic(coeffs: &[XSeries], seed: Rational, order: i64) -> Result<XSeries> {
    if coeffs.iter().any(XSeries::has_log) {
        return Err(Error::LogTerm("algebraic relation"));
    }
    if coeffs.iter().any(|c| c.val() < 0) {
        return Err(Error::BranchObstruction(
            "relation has negative powers of x".into(),
        ));
    }
    let order = coeffs
        .iter()
        .map(XSeries::valid_order)
        .fold(order, i64::min);
    let dcoeffs: Vec<XSeries> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
        .collect();

    let mut y = XSeries::constant(seed, super::EXACT);
    let r0 = horner(coeffs, &y, 0);
    if !r0.at(0).is_zero() {
        return Err(Error::BranchObstruction(
            "seed is not a root at x = 0".into(),
        ));
    }
    if horner(&dcoeffs, &y, 0).at(0).is_zero() {
        return Err(Error::Singular("seed is a multiple root at x = 0".into()));
    }
    let mut prec = 0i64;
    while prec < order {
        let target = (2 * prec + 1).min(order);
        let p = horner(coeffs, &y, target);
        let dp = horner(&dcoeffs, &y, target);
        let delta = p.checked_div(&dp)?.truncate(target);
        y = (&y - &delta).truncate(target).assume_exact();
        prec = target;
    }
    let residual = horner(coeffs, &y, order);
    if let Some((e, _)) = residual.terms().next() {
        return Err(Error::PrecisionExhausted(format!(
            "algebraic solve left a residual at x^{e}"
        )));
    }
    Ok(y.with_valid(order))
}
