use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{big, factorial, int, pochhammer, Poly, Rational};
use crate::free_energy::{fit_ansatz, fit_linear, Certificate, Variable, MIN_SURPLUS};
use crate::painleve::painleve_constants;
use crate::series::{XSeries, EXACT};
use crate::solver::{solve, Model, ModelSpec, StringSolution};
use crate::{Error, Result};

/// A polynomial in the half-valence `ν`.
pub type NuPolynomial = Poly;

/// Lattice terms solved per ν-sample; enough for ten surplus equations in
/// both the q-form of `F_g` and the q-form of `x^{2g−1}W_g` through g = 4.
pub const NU_TERMS: i64 = 24;

type SolutionCache = Mutex<HashMap<u32, Arc<StringSolution>>>;

fn cache() -> &'static SolutionCache {
    static CACHE: OnceLock<SolutionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Coefficients `ℓ ↦ p_ℓ(ν)` interpolated from exact samples at integer ν
/// and confirmed at held-out points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuFamily {
    pub g: usize,
    pub polynomials: BTreeMap<i64, NuPolynomial>,
    pub samples: Vec<u32>,
    pub verified_at: Vec<u32>,
    pub degree_bound: usize,
}

impl NuFamily {
    pub fn get(&self, l: i64) -> NuPolynomial {
        self.polynomials.get(&l).cloned().unwrap_or_else(Poly::zero)
    }
}

fn fact(n: usize) -> Rational {
    big(&factorial(n as u32))
}

/// Solution at `ν` through genus `g`, shared across the process.
pub fn nu_solution(nu: u32, g: usize) -> Result<Arc<StringSolution>> {
    if let Some(s) = cache().lock().unwrap().get(&nu) {
        if s.spec.genus_cap >= g {
            return Ok(s.clone());
        }
    }
    let sol = Arc::new(solve(ModelSpec::planned_terms(
        Model::from_nu(nu)?,
        g,
        NU_TERMS,
    )?)?);
    let mut c = cache().lock().unwrap();
    let entry = c.entry(nu).or_insert_with(|| sol.clone());
    if entry.spec.genus_cap < g {
        *entry = sol.clone();
    }
    Ok(entry.clone())
}

/// `r_{g,ℓ}(ν)` at one integer ν, from the certified q-form of `F_g`.
pub fn r_sample(nu: u32, g: usize) -> Result<BTreeMap<i64, Rational>> {
    let sol = nu_solution(nu, g)?;
    Ok(fit_ansatz(&sol, g, Variable::QNu)?.coefficients)
}

/// The fitted `t_{g,ℓ}(ν)` at one ν, with
/// `x^{2g−1}W_g = q Σ_{ℓ=2g}^{5g−1} t_ℓ (ν−(ν−1)q)^{−ℓ}`.
pub fn t_coefficients(g: usize, nu: u32) -> Result<(BTreeMap<i64, Rational>, Certificate)> {
    if g < 1 {
        return Err(Error::InvalidInput(
            "t-coefficients start at genus 1".into(),
        ));
    }
    let sol = nu_solution(nu, g)?;
    let gi = g as i64;
    let target = sol.w.entry(g).shift_exponent(2 * gi - 1);
    let n = nu as i64;
    let base = (&XSeries::constant(int(n), EXACT) - &sol.q0().scale(&int(n - 1))).recip()?;
    let exps: Vec<i64> = (2 * gi..=5 * gi - 1).collect();
    let mut basis = Vec::with_capacity(exps.len());
    let mut p = sol.q0().clone();
    for l in 1..=5 * gi - 1 {
        p = &p * &base;
        if l >= 2 * gi {
            basis.push(p.clone());
        }
    }
    let context = format!("x^{}W_{g} at ν = {nu}", 2 * g - 1);
    let fit = fit_linear(&target, &basis, MIN_SURPLUS, &context)?;
    let t: BTreeMap<i64, Rational> = exps.into_iter().zip(fit.coefficients).collect();
    let c = painleve_constants(g);
    let expected = Pow::pow(int(n), (3 * g - 1) as i32) * c.get(g) / Pow::pow(int(12), g as i32);
    if t[&(5 * gi - 1)] != expected {
        return Err(Error::Identity(format!(
            "{context}: t_{{g,5g−1}} = {} but ν^(3g−1) C_g/12^g = {expected}",
            t[&(5 * gi - 1)]
        )));
    }
    Ok((t, fit.certificate))
}

fn interpolate_family(
    g: usize,
    samples: Vec<u32>,
    verify: Vec<u32>,
    degree_bound: usize,
    what: &str,
    sample: impl Fn(u32) -> Result<BTreeMap<i64, Rational>> + Sync,
) -> Result<NuFamily> {
    let all: Vec<u32> = samples.iter().chain(&verify).copied().collect();
    let values: Vec<BTreeMap<i64, Rational>> = all
        .par_iter()
        .map(|&nu| sample(nu))
        .collect::<Result<_>>()?;
    let keys: Vec<i64> = values.iter().flat_map(|m| m.keys().copied()).collect();
    let lo = keys.iter().copied().min().unwrap_or(0);
    let hi = keys.iter().copied().max().unwrap_or(-1);
    let at = |i: usize, l: i64| values[i].get(&l).cloned().unwrap_or_else(Rational::zero);
    let mut polynomials = BTreeMap::new();
    for l in lo..=hi {
        let pts: Vec<(Rational, Rational)> = (0..samples.len())
            .map(|i| (int(samples[i] as i64), at(i, l)))
            .collect();
        let p = Poly::interpolate(&pts);
        if p.degree().is_some_and(|d| d > degree_bound) {
            return Err(Error::Identity(format!(
                "{what}_{{{g},{l}}}(ν) has degree {} > {degree_bound}",
                p.degree().unwrap()
            )));
        }
        for (j, &nu) in verify.iter().enumerate() {
            if p.eval(&int(nu as i64)) != at(samples.len() + j, l) {
                return Err(Error::Identity(format!(
                    "{what}_{{{g},{l}}}(ν) interpolant misses the sample at ν = {nu}"
                )));
            }
        }
        polynomials.insert(l, p);
    }
    Ok(NuFamily {
        g,
        polynomials,
        samples,
        verified_at: verify,
        degree_bound,
    })
}

/// All `r_{g,ℓ}(ν)`, `ℓ = 2g−2..5g−5`: sampled at ν = 2..3g, checked at 3g+1, 3g+2.
pub fn r_polynomials(g: usize) -> Result<NuFamily> {
    if g < 2 {
        return Err(Error::InvalidInput(format!(
            "r-polynomials need g ≥ 2, got {g}"
        )));
    }
    let top = 3 * g as u32;
    interpolate_family(
        g,
        (2..=top).collect(),
        vec![top + 1, top + 2],
        3 * g - 3,
        "r",
        |nu| r_sample(nu, g),
    )
}

pub fn r_polynomial(g: usize, l: i64) -> Result<NuPolynomial> {
    let gi = g as i64;
    if !(2 * gi - 2..=5 * gi - 5).contains(&l) {
        return Err(Error::InvalidInput(format!("ℓ = {l} outside [2g−2, 5g−5]")));
    }
    Ok(r_polynomials(g)?.get(l))
}

/// All `t_{g,ℓ}(ν)`, `ℓ = 2g..5g−1`: sampled at ν = 2..3g+1, checked at 3g+2, 3g+3.
pub fn t_polynomials(g: usize) -> Result<NuFamily> {
    let top = 3 * g as u32 + 1;
    interpolate_family(
        g,
        (2..=top).collect(),
        vec![top + 1, top + 2],
        3 * g - 1,
        "t",
        |nu| t_coefficients(g, nu).map(|(t, _)| t),
    )
}

/// `binom(aν + c, n)` as a polynomial in ν.
fn binomial_poly(a: i64, c: i64, n: usize) -> Poly {
    let mut p = Poly::constant(Rational::one());
    for i in 0..n as i64 {
        p = &p * &Poly::linear(int(c - i), int(a));
    }
    p.scale(&fact(n).recip())
}

fn pochhammer_int(a: i64, m: usize) -> Rational {
    pochhammer(&int(a), m as u32)
}

/// `k! (ν(ν+1))^k Σ_m binom(νk−1, k−m) (ν−1)^m/m! Σ_ℓ r_ℓ (ℓ−1)_m` as a polynomial.
pub fn s_polynomial(r: &NuFamily, k: usize) -> Result<NuPolynomial> {
    let g = r.g;
    let mut sum = Poly::zero();
    for m in 0..=k {
        let mut inner = Poly::zero();
        for (l, p) in &r.polynomials {
            inner = &inner + &p.scale(&pochhammer_int(l - 1, m));
        }
        let term = &(&binomial_poly(k as i64, -1, k - m)
            * &Poly::from_ints(&[-1, 1]).pow(m as u32))
            * &inner;
        sum = &sum + &term.scale(&fact(m).recip());
    }
    let s = (&Poly::from_ints(&[0, 1, 1]).pow(k as u32) * &sum).scale(&fact(k));
    let expected = 3 * g + 3 * k - 3;
    if s.degree() != Some(expected) {
        return Err(Error::Identity(format!(
            "deg S_{{{g},{k}}} = {:?}, expected {expected}",
            s.degree()
        )));
    }
    Ok(s)
}

/// `S_{g,k}(ν)` at one ν from the coefficients `(ℓ, r_ℓ(ν))`.
pub(crate) fn s_value(nu: u32, k: usize, r: &[(i64, Rational)]) -> Rational {
    let n = nu as i64;
    let mut sum = Rational::zero();
    for m in 0..=k {
        let inner: Rational = r.iter().map(|(l, c)| c * pochhammer_int(l - 1, m)).sum();
        sum += binomial_poly(k as i64, -1, k - m).eval(&int(n)) * Pow::pow(int(n - 1), m as i32)
            / fact(m)
            * inner;
    }
    fact(k) * Pow::pow(int(n * (n + 1)), k as i32) * sum
}

/// `k! Σ_m binom(νk, k−m) (ν−1)^m/m! Σ_ℓ t_ℓ (ℓ−1)_m` as a polynomial.
pub fn q_polynomial(t: &NuFamily, k: usize) -> Result<NuPolynomial> {
    let g = t.g;
    let mut sum = Poly::zero();
    for m in 0..=k {
        let mut inner = Poly::zero();
        for (l, p) in &t.polynomials {
            inner = &inner + &p.scale(&pochhammer_int(l - 1, m));
        }
        let term = &(&binomial_poly(k as i64, 0, k - m) * &Poly::from_ints(&[-1, 1]).pow(m as u32))
            * &inner;
        sum = &sum + &term.scale(&fact(m).recip());
    }
    let q = sum.scale(&fact(k));
    let expected = 3 * g + k - 1;
    if q.degree() != Some(expected) {
        return Err(Error::Identity(format!(
            "deg Q_{{{g},{k}}} = {:?}, expected {expected}",
            q.degree()
        )));
    }
    Ok(q)
}

/// `k! [x^{1−2g+(ν−1)k}] W_g / ((2ν)!/(ν!(ν−1)!))^k` from a direct solve.
pub fn q_numeric(nu: u32, g: usize, k: usize) -> Result<Rational> {
    let n = nu as i64;
    let e = 1 - 2 * g as i64 + (n - 1) * k as i64;
    let mut sol = nu_solution(nu, g)?;
    if sol.w.entry(g).valid_order() < e {
        let spec = ModelSpec::for_model(Model::from_nu(nu)?, g, e + 2 * g as i64 + 6)?;
        sol = Arc::new(solve(spec)?);
    }
    let wg = sol.w.entry(g);
    if wg.valid_order() < e {
        return Err(Error::PrecisionExhausted(format!(
            "W_{g} known through x^{}",
            wg.valid_order()
        )));
    }
    let c = fact(2 * nu as usize) / (fact(nu as usize) * fact(nu as usize - 1));
    Ok(wg.at(e) * fact(k) / Pow::pow(c, k as i32))
}
