use num_traits::One;

use super::{Model, ModelSpec};
use crate::exact::{big, factorial, int, Rational};
use crate::series::{solve_algebraic, XSeries, EXACT};
use crate::{Error, Result};

/// Genus-zero data: `w = W_0`, `v = Ṽ_0` (b = 3 only) and `q = w/x`.
#[derive(Clone, Debug)]
pub struct Genus0 {
    pub w: XSeries,
    pub v: Option<XSeries>,
    pub q: XSeries,
}

/// `(2ν)!/(ν!(ν−1)!)`
pub fn even_genus0_constant(nu: u32) -> Rational {
    big(&factorial(2 * nu)) / big(&(factorial(nu) * factorial(nu - 1)))
}

fn check(name: &str, residual: XSeries) -> Result<()> {
    match residual.terms().next() {
        None => Ok(()),
        Some((e, _)) => Err(Error::Identity(format!("{name} fails at x^{e}"))),
    }
}

pub fn solve_genus0(spec: &ModelSpec) -> Result<Genus0> {
    let n = spec.x_order;
    let x = XSeries::x();
    match spec.model {
        Model::Tri => {
            // 6x = (1 − 9v + 18v²) v
            let rel = [
                XSeries::monomial(int(-6), 1, EXACT),
                XSeries::one(),
                XSeries::constant(int(-9), EXACT),
                XSeries::constant(int(18), EXACT),
            ];
            let v = solve_algebraic(&rel, int(0), n)?;
            let one_minus_6v = &XSeries::one() - &v.scale(&int(6));
            let w = x.truncate(n).checked_div(&one_minus_6v)?;
            let w2 = &w * &w;
            check(
                "x² = w² − 72w³",
                &(&w2 - &(&w2 * &w).scale(&int(72))) - &(&x * &x),
            )?;
            let root = (&XSeries::one() - &w.scale(&int(72))).sqrt()?;
            let v_alt = (&XSeries::one() - &root).scale(&Rational::new(1.into(), 6.into()));
            check("v = (1 − √(1−72w))/6", &v - &v_alt)?;
            let q = w.checked_div(&x)?;
            Ok(Genus0 { w, v: Some(v), q })
        }
        Model::Even { nu } => {
            // 1 − q + c x^{ν−1} q^ν = 0
            let c = even_genus0_constant(nu);
            let mut rel = vec![XSeries::one(), XSeries::constant(-Rational::one(), EXACT)];
            rel.resize(nu as usize + 1, XSeries::zero(EXACT));
            rel[nu as usize] = XSeries::monomial(c.clone(), nu as i64 - 1, EXACT);
            let q = solve_algebraic(&rel, int(1), n - 1)?;
            let w = &q * &x;
            let wn = w.powi(nu as i64)?;
            check("x = w − c w^ν", &(&w - &wn.scale(&c)) - &x)?;
            Ok(Genus0 { w, v: None, q })
        }
    }
}
