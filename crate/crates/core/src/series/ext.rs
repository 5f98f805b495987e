//! Quadratic extension `R[s]`, `s² = D(x)`, of the series ring.

use std::sync::Arc;

use super::XSeries;
use crate::Result;

/// The square class `D` and the logarithmic half-derivative `D′/(2D)`,
/// so that `s′ = (D′/(2D)) · s`.
#[derive(Debug)]
pub struct SqrtField {
    d: XSeries,
    half_log_deriv: XSeries,
}

impl SqrtField {
    pub fn new(d: XSeries) -> Result<Arc<SqrtField>> {
        let half_log_deriv = d
            .derivative()
            .checked_div(&d.scale(&crate::exact::int(2)))?;
        Ok(Arc::new(SqrtField { d, half_log_deriv }))
    }

    pub fn square(&self) -> &XSeries {
        &self.d
    }
}

/// `a + b·s`.
#[derive(Clone, Debug)]
pub struct SqrtExt {
    pub a: XSeries,
    pub b: XSeries,
    field: Arc<SqrtField>,
}

impl SqrtExt {
    pub fn new(a: XSeries, b: XSeries, field: &Arc<SqrtField>) -> Self {
        SqrtExt {
            a,
            b,
            field: field.clone(),
        }
    }

    pub fn from_rational(a: XSeries, field: &Arc<SqrtField>) -> Self {
        let z = XSeries::zero(super::EXACT);
        SqrtExt::new(a, z, field)
    }

    /// The generator `s` itself.
    pub fn s(field: &Arc<SqrtField>) -> Self {
        SqrtExt::new(XSeries::zero(super::EXACT), XSeries::one(), field)
    }

    pub fn add(&self, o: &SqrtExt) -> SqrtExt {
        SqrtExt::new(&self.a + &o.a, &self.b + &o.b, &self.field)
    }

    pub fn sub(&self, o: &SqrtExt) -> SqrtExt {
        SqrtExt::new(&self.a - &o.a, &self.b - &o.b, &self.field)
    }

    pub fn mul(&self, o: &SqrtExt) -> SqrtExt {
        let bb = &(&self.b * &o.b) * &self.field.d;
        SqrtExt::new(
            &(&self.a * &o.a) + &bb,
            &(&self.a * &o.b) + &(&self.b * &o.a),
            &self.field,
        )
    }

    pub fn mul_series(&self, f: &XSeries) -> SqrtExt {
        SqrtExt::new(&self.a * f, &self.b * f, &self.field)
    }

    pub fn recip(&self) -> Result<SqrtExt> {
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * &self.field.d);
        Ok(SqrtExt::new(
            self.a.checked_div(&norm)?,
            (-&self.b).checked_div(&norm)?,
            &self.field,
        ))
    }

    pub fn derivative(&self) -> SqrtExt {
        SqrtExt::new(
            self.a.derivative(),
            &self.b.derivative() + &(&self.b * &self.field.half_log_deriv),
            &self.field,
        )
    }

    pub fn truncate(&self, order: i64) -> SqrtExt {
        SqrtExt::new(self.a.truncate(order), self.b.truncate(order), &self.field)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}
