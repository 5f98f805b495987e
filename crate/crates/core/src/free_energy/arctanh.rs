use std::ops::RangeInclusive;

use num_traits::Pow;
use serde::Serialize;

use crate::exact::{big, factorial, int, Rational};
use crate::series::{SqrtExt, SqrtField, XSeries, EXACT};
use crate::solver::{solve_genus0, Model, ModelSpec};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArctanhReport {
    pub x_order: i64,
    /// `(k, highest x-exponent checked)` for each verified `k`
    pub checked: Vec<(usize, i64)>,
}

fn first_term(s: &XSeries) -> Option<i64> {
    s.terms().next().map(|(e, _)| e)
}

/// Checks, for each `k ≥ 4`, that
/// `972(−2)^k ((k−2)!)²/(2k−4)! (1−108w)^{−k}`
/// equals `∂²(72w s arctanh s − 72w + Σ_{i=1}^{k−4} β_i (1−108w)^{−i})`
/// with `s = √(3−216w)`, `β_i = (−2)^{i+2}/(i(i+2)) · ((i+2)!)²/(2i+4)!`.
///
/// `arctanh s` is kept formal: only `T′ = s′/(1−s²)` enters, and
/// `72w s = 72√3 x` has vanishing second derivative.
pub fn verify_arctanh_identity(ks: RangeInclusive<usize>, x_order: i64) -> Result<ArctanhReport> {
    if *ks.start() < 4 {
        return Err(Error::InvalidInput(format!(
            "the identity holds for k ≥ 4, got k = {}",
            ks.start()
        )));
    }
    let spec = ModelSpec::for_model(Model::Tri, 0, x_order + 4)?;
    let w = solve_genus0(&spec)?.w;
    let d = &XSeries::constant(int(3), EXACT) - &w.scale(&int(216));
    let field = SqrtField::new(d.clone())?;
    let s = SqrtExt::s(&field);

    let p = s.mul_series(&w.scale(&int(72)));
    let p1 = p.derivative();
    let p2 = p1.derivative();
    if let Some(e) = first_term(&p2.a).or_else(|| first_term(&p2.b)) {
        return Err(Error::Identity(format!("∂²(72w·s) nonzero at x^{e}")));
    }
    let one_minus_d = &XSeries::one() - &d;
    let t1 = s.derivative().mul_series(&one_minus_d.recip()?);
    let t2 = t1.derivative();
    let transcendental = p1
        .mul(&t1)
        .mul_series(&XSeries::constant(int(2), EXACT))
        .add(&p.mul(&t2));
    if let Some(e) = first_term(&transcendental.b) {
        return Err(Error::Identity(format!(
            "odd part of the arctanh term nonzero at x^{e}"
        )));
    }

    let pole = (&XSeries::one() - &w.scale(&int(108))).recip()?;
    let beta = |i: usize| -> Rational {
        let i64_ = i as i64;
        let f = big(&factorial(i as u32 + 2));
        int((-2i64).pow(i as u32 + 2)) / int(i64_ * (i64_ + 2)) * &f * &f
            / big(&factorial(2 * i as u32 + 4))
    };
    let mut checked = Vec::new();
    for k in ks {
        let f = big(&factorial(k as u32 - 2));
        let c = int(972) * int(-2).pow(k as i32) * &f * &f / big(&factorial(2 * k as u32 - 4));
        let lhs = pole.powi(k as i64)?.scale(&c);
        let mut rational = w.scale(&int(-72));
        for i in 1..=k.saturating_sub(4) {
            rational = &rational + &pole.powi(i as i64)?.scale(&beta(i));
        }
        let rhs = &transcendental.a + &rational.nth_derivative(2);
        let diff = (&lhs - &rhs).truncate(x_order);
        if let Some(e) = first_term(&diff) {
            return Err(Error::Identity(format!("k = {k}: sides differ at x^{e}")));
        }
        checked.push((k, diff.valid_order()));
    }
    Ok(ArctanhReport { x_order, checked })
}
