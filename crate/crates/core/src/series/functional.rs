//! Transcendental and compositional operations on [`XSeries`].

use num_traits::{One, Zero};

use super::{is_exact, XSeries, EXACT};
use crate::exact::{gcd_i64, int, rational_sqrt, Rational};
use crate::{Error, Result};

impl XSeries {
    /// Dense coefficients of `self · x^{-start}` along index `n ↦ x^{n·stride}`,
    /// for `n` up to the relative validity order.
    fn unit_profile(&self, stride: i64) -> (Vec<Rational>, i64) {
        let rel = self.valid - self.start;
        let len = (rel / stride + 1) as usize;
        let mut out = vec![Rational::zero(); len];
        for (e, c) in self.terms() {
            let k = ((e - self.start) / stride) as usize;
            if k < len {
                out[k] = c.clone();
            }
        }
        (out, rel)
    }

    /// `log(self)`. The leading coefficient must be 1; a leading `x^d`
    /// becomes `d · log x` in the log slot.
    pub fn log(&self) -> Result<XSeries> {
        if self.has_log() {
            return Err(Error::LogTerm("log"));
        }
        let Some(c0) = self.leading_coeff() else {
            return Err(Error::BranchObstruction(
                "log of a series with no known term".into(),
            ));
        };
        if !c0.is_one() {
            return Err(Error::BranchObstruction(format!(
                "log needs leading coefficient 1, found {c0}"
            )));
        }
        let d = self.start;
        if self.coeffs.len() == 1 {
            let rel = if self.is_exact() {
                EXACT
            } else {
                self.valid - d
            };
            let mut z = XSeries::zero(rel);
            z.log_coeff = int(d);
            return Ok(z);
        }
        if self.is_exact() {
            return Err(Error::Unbounded("log of an exact non-monomial"));
        }
        let s = self.stride;
        let (f, rel) = self.unit_profile(s);
        let n_max = f.len();
        let mut l = vec![Rational::zero(); n_max];
        for n in 1..n_max {
            let mut acc = &f[n] * int(n as i64);
            for k in 1..n {
                if !l[k].is_zero() && !f[n - k].is_zero() {
                    acc -= &l[k] * &f[n - k] * int(k as i64);
                }
            }
            l[n] = acc / int(n as i64);
        }
        let mut out = XSeries::from_terms(
            l.into_iter().enumerate().map(|(n, c)| (n as i64 * s, c)),
            rel,
        );
        out.log_coeff = int(d);
        Ok(out)
    }

    /// `exp(self)` for a series with vanishing constant term.
    pub fn exp(&self) -> Result<XSeries> {
        if self.has_log() {
            return Err(Error::LogTerm("exp"));
        }
        if self.coeffs.is_empty() {
            return Ok(XSeries::constant(Rational::one(), self.valid));
        }
        if self.start < 1 {
            return Err(Error::BranchObstruction(
                "exp needs a series without constant or negative terms".into(),
            ));
        }
        if self.is_exact() {
            return Err(Error::Unbounded("exp of an exact nonzero series"));
        }
        let g = gcd_i64(self.start, self.stride);
        let len = (self.valid / g + 1) as usize;
        let mut a = vec![Rational::zero(); len];
        for (e, c) in self.terms() {
            let k = (e / g) as usize;
            if k < len {
                a[k] = c.clone();
            }
        }
        let mut ex = vec![Rational::zero(); len];
        ex[0] = Rational::one();
        for n in 1..len {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !a[k].is_zero() && !ex[n - k].is_zero() {
                    acc += &a[k] * &ex[n - k] * int(k as i64);
                }
            }
            ex[n] = acc / int(n as i64);
        }
        Ok(XSeries::from_terms(
            ex.into_iter().enumerate().map(|(n, c)| (n as i64 * g, c)),
            self.valid,
        ))
    }

    /// Principal square root: leading term `c x^{2d}` with `c` a rational square.
    pub fn sqrt(&self) -> Result<XSeries> {
        if self.has_log() {
            return Err(Error::LogTerm("sqrt"));
        }
        let Some(c0) = self.leading_coeff() else {
            return Err(Error::BranchObstruction(
                "sqrt of a series with no known term".into(),
            ));
        };
        if self.start % 2 != 0 {
            return Err(Error::BranchObstruction(format!(
                "sqrt of a series with odd leading exponent {}",
                self.start
            )));
        }
        let root = rational_sqrt(c0).ok_or_else(|| {
            Error::BranchObstruction(format!("leading coefficient {c0} is not a rational square"))
        })?;
        let d = self.start / 2;
        if self.coeffs.len() == 1 {
            let valid = if self.is_exact() {
                EXACT
            } else {
                self.valid - d
            };
            return Ok(XSeries::monomial(root, d, valid));
        }
        if self.is_exact() {
            return Err(Error::Unbounded("sqrt of an exact non-monomial"));
        }
        let s = self.stride;
        let (raw, rel) = self.unit_profile(s);
        let inv = c0.recip();
        let h: Vec<Rational> = raw.iter().map(|c| c * &inv).collect();
        let len = h.len();
        let mut y = vec![Rational::zero(); len];
        y[0] = Rational::one();
        let half = Rational::new(1.into(), 2.into());
        for n in 1..len {
            let mut acc = h[n].clone();
            for i in 1..n {
                if !y[i].is_zero() && !y[n - i].is_zero() {
                    acc -= &y[i] * &y[n - i];
                }
            }
            y[n] = acc * &half;
        }
        Ok(XSeries::from_terms(
            y.into_iter()
                .enumerate()
                .map(|(n, c)| (d + n as i64 * s, c * &root)),
            d + rel,
        ))
    }

    /// `arctanh(self) = ½ (log(1+s) − log(1−s))`, for `s(0) = 0`.
    pub fn arctanh(&self) -> Result<XSeries> {
        if self.val() < 1 {
            return Err(Error::BranchObstruction("arctanh needs s(0) = 0".into()));
        }
        let one = XSeries::constant(Rational::one(), EXACT);
        let plus = (&one + self).log()?;
        let minus = (&one - self).log()?;
        Ok((&plus - &minus).scale(&Rational::new(1.into(), 2.into())))
    }

    /// `self(inner(x))` for `inner(0) = 0` and no negative powers in `self`.
    pub fn compose(&self, inner: &XSeries) -> Result<XSeries> {
        if self.has_log() || inner.has_log() {
            return Err(Error::LogTerm("composition"));
        }
        if self.val() < 0 {
            return Err(Error::BranchObstruction(
                "composition of a Laurent tail".into(),
            ));
        }
        let vb = inner.val();
        if vb < 1 {
            return Err(Error::BranchObstruction(
                "composition needs an inner series without constant term".into(),
            ));
        }
        let v1 = if self.is_exact() {
            EXACT
        } else {
            (self.valid + 1).saturating_mul(vb) - 1
        };
        let valid = v1.min(inner.valid).min(EXACT);
        if is_exact(valid) && inner.coeffs.is_empty() {
            return Ok(XSeries::constant(
                self.coeff(0).unwrap_or_else(Rational::zero),
                EXACT,
            ));
        }
        let mut result = XSeries::zero(valid);
        let mut power = XSeries::one();
        let mut at = 0i64;
        for (e, c) in self.terms() {
            if e > 0 && vb.saturating_mul(e) > valid {
                break;
            }
            while at < e {
                power = (&power * inner).truncate(valid);
                at += 1;
            }
            result = &result + &power.scale(c);
        }
        Ok(result.truncate(valid))
    }

    /// Compositional inverse of a series `a₁x + O(x²)` with `a₁ ≠ 0`.
    pub fn revert(&self) -> Result<XSeries> {
        if self.has_log() {
            return Err(Error::LogTerm("reversion"));
        }
        if self.val() != 1 {
            return Err(Error::BranchObstruction(
                "reversion needs valuation 1".into(),
            ));
        }
        if self.is_exact() {
            return Err(Error::Unbounded("reversion of an exact polynomial"));
        }
        let order = self.valid;
        let a1 = self.at(1);
        let mut y = XSeries::monomial(a1.recip(), 1, EXACT);
        let deriv = self.derivative();
        let x = XSeries::x();
        let mut prec = 1i64;
        while prec < order {
            let target = (2 * prec).min(order);
            let r = &self.truncate(target).compose(&y)? - &x;
            let d = deriv.truncate(target - 1).compose(&y)?;
            let delta = r.checked_div(&d)?.truncate(target);
            y = (&y - &delta).truncate(target).assume_exact();
            prec = target;
        }
        Ok(y.with_valid(order))
    }
}
