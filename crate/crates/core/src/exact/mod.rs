//! Exact scalars: rationals, Bernoulli numbers, rising factorials, generalized
//! binomials, univariate polynomials and dense exact linear algebra.

mod bernoulli;
pub mod linalg;
mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use bernoulli::bernoulli;
pub use poly::Poly;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Formats a rational as `"num/den"`, or `"num"` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`fmt_rational`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Constants that are never given a numeric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymbolicConstant {
    /// ζ′(−1), the additive constant of the genus-one free energy.
    ZetaPrimeMinusOne,
}

impl std::fmt::Display for SymbolicConstant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymbolicConstant::ZetaPrimeMinusOne => f.write_str("zeta'(-1)"),
        }
    }
}

/// Rising factorial `a (a+1) ... (a+m-1)`.
pub fn pochhammer(a: &Rational, m: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..m {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Generalized binomial `a (a-1) ... (a-m+1) / m!` for any rational `a`.
pub fn binomial(a: &Rational, m: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for i in 1..=m {
        acc *= &term;
        acc /= int(i as i64);
        term -= Rational::one();
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `m!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> crate::Result<BigInt> {
    if m < -1 {
        return Err(crate::Error::InvalidInput(format!(
            "double factorial undefined for {m}"
        )));
    }
    let mut acc = BigInt::one();
    let mut k = m;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    Ok(acc)
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Converts a rational known to be an integer; `None` otherwise.
pub fn to_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.numer().clone())
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&int(2), 3), int(24));
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
        assert_eq!(pochhammer(&int(-1), 3), int(0));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&rat(3, 2), 2), rat(3, 8));
        assert_eq!(binomial(&rat(-4, 9), 0), int(1));
        assert_eq!(binomial(&int(3), 5), int(0));
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(-1).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        // 17!! = 17·15·13·11·9·7·5·3
        let direct: i64 = [17, 15, 13, 11, 9, 7, 5, 3].iter().product();
        assert_eq!(direct, 34459425);
        assert_eq!(double_factorial(17).unwrap(), BigInt::from(direct));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn pochhammer_matches_binomial_times_factorial() {
        for a in 1..8i64 {
            for m in 0..7u32 {
                let lhs = pochhammer(&int(a), m);
                let rhs = binomial(&int(a + m as i64 - 1), m) * big(&factorial(m));
                assert_eq!(lhs, rhs, "a={a} m={m}");
            }
        }
    }

    #[test]
    fn rational_text_round_trip() {
        for r in [rat(-351, 8), int(0), int(178605), rat(1, 1008)] {
            assert_eq!(parse_rational(&fmt_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&int(3)), None);
        assert_eq!(rational_sqrt(&int(-4)), None);
    }
}
