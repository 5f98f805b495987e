//! Truncated Laurent series in `x` over the rationals.
//!
//! Every series carries an explicit validity order: coefficients are known
//! for all exponents `≤ valid`, unknown above. Arithmetic propagates validity
//! exactly, so no operation can silently claim more precision than its inputs.
//! Storage is sparse along an arithmetic progression of exponents (`stride`),
//! which keeps series in `x^{ν-1}` as cheap as ordinary power series.

mod ext;
mod family;
mod functional;
mod solve;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{fmt_rational, gcd_i64, int, Poly, Rational};
use crate::{Error, Result};

pub use ext::{SqrtExt, SqrtField};
pub use family::{EpsFamily, GenusFamily};
pub use solve::solve_algebraic;

/// Validity marker for series that are exact (polynomials, Laurent polynomials).
pub const EXACT: i64 = 1 << 60;

fn clamp(v: i64) -> i64 {
    v.min(EXACT)
}

fn is_exact(v: i64) -> bool {
    v >= EXACT / 2
}

#[derive(Clone, PartialEq, Eq)]
pub struct XSeries {
    /// exponent of `coeffs[0]`
    start: i64,
    /// exponent gap between stored coefficients; 0 when at most one is stored
    stride: i64,
    coeffs: Vec<Rational>,
    valid: i64,
    /// coefficient of the formal symbol `log x`
    log_coeff: Rational,
}

impl XSeries {
    // ----- construction -------------------------------------------------

    pub fn zero(valid: i64) -> Self {
        XSeries {
            start: 0,
            stride: 0,
            coeffs: Vec::new(),
            valid: clamp(valid),
            log_coeff: Rational::zero(),
        }
    }

    pub fn monomial(c: Rational, exponent: i64, valid: i64) -> Self {
        let mut s = XSeries {
            start: exponent,
            stride: 0,
            coeffs: vec![c],
            valid: clamp(valid),
            log_coeff: Rational::zero(),
        };
        s.normalize();
        s
    }

    pub fn constant(c: Rational, valid: i64) -> Self {
        Self::monomial(c, 0, valid)
    }

    /// The exact constant 1.
    pub fn one() -> Self {
        Self::constant(Rational::one(), EXACT)
    }

    /// The exact variable `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, EXACT)
    }

    /// Dense coefficients for exponents `start, start+1, ...`.
    pub fn from_coeffs(start: i64, coeffs: Vec<Rational>, valid: i64) -> Self {
        let stride = if coeffs.len() > 1 { 1 } else { 0 };
        let mut s = XSeries {
            start,
            stride,
            coeffs,
            valid: clamp(valid),
            log_coeff: Rational::zero(),
        };
        s.normalize();
        s
    }

    pub fn from_ints(start: i64, coeffs: &[i64], valid: i64) -> Self {
        Self::from_coeffs(start, coeffs.iter().map(|&c| int(c)).collect(), valid)
    }

    /// Arbitrary `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I, valid: i64) -> Self {
        let mut terms: Vec<(i64, Rational)> = terms.into_iter().collect();
        terms.sort_by_key(|(e, _)| *e);
        let Some(start) = terms.first().map(|t| t.0) else {
            return Self::zero(valid);
        };
        let stride = terms.iter().fold(0, |g, (e, _)| gcd_i64(g, e - start));
        let len = if stride == 0 {
            1
        } else {
            ((terms.last().unwrap().0 - start) / stride + 1) as usize
        };
        let mut coeffs = vec![Rational::zero(); len];
        for (e, c) in terms {
            let idx = if stride == 0 {
                0
            } else {
                ((e - start) / stride) as usize
            };
            coeffs[idx] += c;
        }
        let mut s = XSeries {
            start,
            stride,
            coeffs,
            valid: clamp(valid),
            log_coeff: Rational::zero(),
        };
        s.normalize();
        s
    }

    /// `c · log x`, exact.
    pub fn log_x(c: Rational) -> Self {
        let mut s = Self::zero(EXACT);
        s.log_coeff = c;
        s
    }

    fn normalize(&mut self) {
        let valid = self.valid;
        let (start, stride) = (self.start, self.stride);
        if stride == 0 {
            self.coeffs.truncate(1);
            if start > valid {
                self.coeffs.clear();
            }
        } else if start > valid {
            self.coeffs.clear();
        } else {
            let keep = ((valid - start) / stride + 1) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64 * self.stride;
        }
        if self.coeffs.len() <= 1 {
            self.stride = 0;
            if self.coeffs.is_empty() {
                self.start = 0;
            }
            return;
        }
        let step = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0i64, |g, (i, _)| gcd_i64(g, i as i64));
        if step > 1 {
            let step = step as usize;
            self.coeffs = self.coeffs.iter().step_by(step).cloned().collect();
            self.stride *= step as i64;
        }
    }

    // ----- inspection ---------------------------------------------------

    /// Highest exponent whose coefficient is known.
    pub fn valid_order(&self) -> i64 {
        self.valid
    }

    pub fn is_exact(&self) -> bool {
        is_exact(self.valid)
    }

    /// Exponent of the leading nonzero coefficient, or `valid + 1` if none is known.
    pub fn val(&self) -> i64 {
        if self.coeffs.is_empty() {
            clamp(self.valid + 1)
        } else {
            self.start
        }
    }

    pub fn log_coeff(&self) -> &Rational {
        &self.log_coeff
    }

    pub fn has_log(&self) -> bool {
        !self.log_coeff.is_zero()
    }

    /// True when every known coefficient (and the log term) vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.log_coeff.is_zero()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// Coefficient of `x^e`; `None` beyond the validity order.
    pub fn coeff(&self, e: i64) -> Option<Rational> {
        if e > self.valid {
            return None;
        }
        Some(self.stored(e).cloned().unwrap_or_else(Rational::zero))
    }

    fn stored(&self, e: i64) -> Option<&Rational> {
        if self.coeffs.is_empty() || e < self.start {
            return None;
        }
        if self.stride == 0 {
            return (e == self.start).then(|| &self.coeffs[0]);
        }
        let off = e - self.start;
        if off % self.stride != 0 {
            return None;
        }
        self.coeffs.get((off / self.stride) as usize)
    }

    /// Coefficient of `x^e`, panicking past the validity order.
    pub fn at(&self, e: i64) -> Rational {
        self.coeff(e).unwrap_or_else(|| {
            panic!(
                "coefficient x^{e} requested beyond validity order {}",
                self.valid
            )
        })
    }

    /// Nonzero stored terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.start + i as i64 * self.stride, c))
            .filter(|(_, c)| !c.is_zero())
    }

    fn last_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.start + (self.coeffs.len() as i64 - 1) * self.stride)
    }

    /// First exponent `≤ min(valid)` where the two series differ.
    pub fn first_mismatch(&self, other: &XSeries) -> Option<i64> {
        if self.log_coeff != other.log_coeff {
            return Some(i64::MIN);
        }
        let d = self - other;
        d.coeffs.first().map(|_| d.start)
    }

    /// Dense coefficient vector for exponents `from ..= to` (all must be known).
    pub fn dense(&self, from: i64, to: i64) -> Vec<Rational> {
        (from..=to).map(|e| self.at(e)).collect()
    }

    // ----- truncation ---------------------------------------------------

    pub fn truncate(&self, order: i64) -> XSeries {
        let mut s = self.clone();
        s.valid = s.valid.min(order);
        s.normalize();
        s
    }

    /// Declares the stored terms to be the exact series.
    pub(crate) fn assume_exact(mut self) -> XSeries {
        self.valid = EXACT;
        self
    }

    /// Overrides the validity order; caller guarantees correctness.
    pub(crate) fn with_valid(mut self, valid: i64) -> XSeries {
        self.valid = clamp(valid);
        self.normalize();
        self
    }

    // ----- linear operations --------------------------------------------

    fn lattice(parts: &[&XSeries]) -> Option<(i64, i64)> {
        let nonempty: Vec<&&XSeries> = parts.iter().filter(|s| !s.coeffs.is_empty()).collect();
        let start = nonempty.iter().map(|s| s.start).min()?;
        let stride = nonempty
            .iter()
            .fold(0, |g, s| gcd_i64(gcd_i64(g, s.stride), s.start - start));
        Some((start, stride))
    }

    fn add_scaled(&self, other: &XSeries, sign: bool) -> XSeries {
        let valid = self.valid.min(other.valid);
        let log_coeff = if sign {
            &self.log_coeff + &other.log_coeff
        } else {
            &self.log_coeff - &other.log_coeff
        };
        let Some((start, stride)) = Self::lattice(&[self, other]) else {
            let mut z = XSeries::zero(valid);
            z.log_coeff = log_coeff;
            return z;
        };
        let top = self
            .last_exponent()
            .into_iter()
            .chain(other.last_exponent())
            .max()
            .unwrap()
            .min(valid);
        if top < start {
            let mut z = XSeries::zero(valid);
            z.log_coeff = log_coeff;
            return z;
        }
        let len = if stride == 0 {
            1
        } else {
            ((top - start) / stride + 1) as usize
        };
        let mut out = vec![Rational::zero(); len];
        let idx = |e: i64| {
            if stride == 0 {
                0
            } else {
                ((e - start) / stride) as usize
            }
        };
        for (e, c) in self.terms() {
            if e <= top {
                out[idx(e)] += c;
            }
        }
        for (e, c) in other.terms() {
            if e <= top {
                if sign {
                    out[idx(e)] += c;
                } else {
                    out[idx(e)] -= c;
                }
            }
        }
        let mut s = XSeries {
            start,
            stride,
            coeffs: out,
            valid,
            log_coeff,
        };
        s.normalize();
        s
    }

    pub fn scale(&self, c: &Rational) -> XSeries {
        let mut s = XSeries {
            start: self.start,
            stride: self.stride,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            valid: self.valid,
            log_coeff: &self.log_coeff * c,
        };
        s.normalize();
        s
    }

    /// Multiplication by `x^m` (log term not allowed).
    pub fn shift_exponent(&self, m: i64) -> XSeries {
        assert!(
            !self.has_log(),
            "shift_exponent on a series with a log term"
        );
        let mut s = self.clone();
        s.start += m;
        s.valid = if is_exact(s.valid) {
            s.valid
        } else {
            s.valid + m
        };
        s.normalize();
        s
    }

    /// `d/dx`; sends `log x` to `x^{-1}` and lowers the validity order by one.
    pub fn derivative(&self) -> XSeries {
        let valid = if self.is_exact() {
            self.valid
        } else {
            self.valid - 1
        };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * int(self.start + i as i64 * self.stride))
            .collect();
        let mut s = XSeries {
            start: self.start - 1,
            stride: self.stride,
            coeffs,
            valid,
            log_coeff: Rational::zero(),
        };
        s.normalize();
        if self.has_log() {
            s = &s + &XSeries::monomial(self.log_coeff.clone(), -1, EXACT);
        }
        s
    }

    pub fn nth_derivative(&self, n: usize) -> XSeries {
        (0..n).fold(self.clone(), |acc, _| acc.derivative())
    }

    // ----- multiplicative operations --------------------------------------

    pub fn checked_mul(&self, other: &XSeries) -> Result<XSeries> {
        if self.has_log() || other.has_log() {
            return Err(Error::LogTerm("multiplication"));
        }
        let valid = clamp((self.valid + other.val()).min(other.valid + self.val()));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(XSeries::zero(valid));
        }
        let start = self.start + other.start;
        let stride = gcd_i64(self.stride, other.stride);
        let top = (self.last_exponent().unwrap() + other.last_exponent().unwrap()).min(valid);
        if top < start {
            return Ok(XSeries::zero(valid));
        }
        let len = if stride == 0 {
            1
        } else {
            ((top - start) / stride + 1) as usize
        };
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.start + i as i64 * self.stride;
            if ea + other.start > top {
                break;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = ea + other.start + j as i64 * other.stride;
                if e > top {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let idx = if stride == 0 {
                    0
                } else {
                    ((e - start) / stride) as usize
                };
                out[idx] += a * b;
            }
        }
        let mut s = XSeries {
            start,
            stride,
            coeffs: out,
            valid,
            log_coeff: Rational::zero(),
        };
        s.normalize();
        Ok(s)
    }

    pub fn checked_div(&self, other: &XSeries) -> Result<XSeries> {
        if self.has_log() || other.has_log() {
            return Err(Error::LogTerm("division"));
        }
        let Some(b0) = other.coeffs.first() else {
            return Err(Error::DivisionByZero);
        };
        let vb = other.start;
        let va = self.val();
        let rel = (self.valid - va).min(other.valid - vb);
        let valid = clamp(va - vb + rel);

        if other.coeffs.len() == 1 {
            // division by a monomial is termwise
            let mut s = self.scale(&b0.recip());
            s.start -= vb;
            s.valid = if is_exact(self.valid) {
                self.valid
            } else {
                clamp(self.valid - vb)
            };
            s.normalize();
            return Ok(s);
        }
        if is_exact(valid) {
            return Err(Error::Unbounded("division by a non-monomial exact series"));
        }
        if self.coeffs.is_empty() {
            return Ok(XSeries::zero(valid));
        }
        let qstart = self.start - vb;
        let stride = gcd_i64(self.stride, other.stride);
        if valid < qstart {
            return Ok(XSeries::zero(valid));
        }
        let len = ((valid - qstart) / stride + 1) as usize;
        let mut a = vec![Rational::zero(); len];
        for (e, c) in self.terms() {
            let k = (e - self.start) / stride;
            if (k as usize) < len {
                a[k as usize] = c.clone();
            }
        }
        let b: Vec<(usize, &Rational)> = other
            .terms()
            .skip(1)
            .map(|(e, c)| (((e - vb) / stride) as usize, c))
            .take_while(|(k, _)| *k < len)
            .collect();
        let inv = b0.recip();
        let mut q: Vec<Rational> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = std::mem::take(&mut a[n]);
            for &(k, bk) in &b {
                if k > n {
                    break;
                }
                if !q[n - k].is_zero() {
                    acc -= bk * &q[n - k];
                }
            }
            q.push(acc * &inv);
        }
        let mut s = XSeries {
            start: qstart,
            stride,
            coeffs: q,
            valid,
            log_coeff: Rational::zero(),
        };
        s.normalize();
        Ok(s)
    }

    /// `self / other`; panics on division by zero or a log term, for call
    /// sites where the divisor is known to be a unit.
    pub fn div(&self, other: &XSeries) -> XSeries {
        self.checked_div(other)
            .unwrap_or_else(|e| panic!("series division: {e}"))
    }

    pub fn recip(&self) -> Result<XSeries> {
        XSeries::one().checked_div(self)
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, n: i64) -> Result<XSeries> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut result = XSeries::one();
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }
}

/// `p(s)` by Horner's rule.
pub fn eval_poly(p: &Poly, s: &XSeries) -> XSeries {
    let mut acc = XSeries::zero(EXACT);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * s) + &XSeries::constant(c.clone(), EXACT);
    }
    acc
}

impl Add for &XSeries {
    type Output = XSeries;
    fn add(self, rhs: &XSeries) -> XSeries {
        self.add_scaled(rhs, true)
    }
}

impl Sub for &XSeries {
    type Output = XSeries;
    fn sub(self, rhs: &XSeries) -> XSeries {
        self.add_scaled(rhs, false)
    }
}

impl Mul for &XSeries {
    type Output = XSeries;
    fn mul(self, rhs: &XSeries) -> XSeries {
        self.checked_mul(rhs)
            .unwrap_or_else(|e| panic!("series multiplication: {e}"))
    }
}

impl Neg for &XSeries {
    type Output = XSeries;
    fn neg(self) -> XSeries {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for XSeries {
            type Output = XSeries;
            fn $m(self, rhs: XSeries) -> XSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&XSeries> for XSeries {
            type Output = XSeries;
            fn $m(self, rhs: &XSeries) -> XSeries {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for XSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(e, c)| format!("{}:{}", e, fmt_rational(c)))
            .collect();
        write!(f, "XSeries[")?;
        if self.has_log() {
            write!(f, "log:{} ", fmt_rational(&self.log_coeff))?;
        }
        write!(f, "{}", terms.join(" "))?;
        if self.is_exact() {
            write!(f, " | exact]")
        } else {
            write!(f, " | O(x^{})]", self.valid + 1)
        }
    }
}

impl fmt::Display for XSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.has_log() {
            parts.push(format!("{}*log(x)", fmt_rational(&self.log_coeff)));
        }
        for (e, c) in self.terms() {
            parts.push(match e {
                0 => fmt_rational(c),
                1 => format!("{}*x", fmt_rational(c)),
                _ => format!("{}*x^{}", fmt_rational(c), e),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        if !self.is_exact() {
            parts.push(format!("O(x^{})", self.valid + 1));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests;
