use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::fit::{fit_linear, Certificate, MIN_SURPLUS};
use super::{bernoulli_coefficient, d2f, leading_constant};
use crate::exact::{fmt_rational, int, parse_rational, Rational};
use crate::series::{XSeries, EXACT};
use crate::solver::{solve_genus0, Genus0, Model, ModelSpec, StringSolution};
use crate::{Error, Result};

/// The variable (and hence the basis) of a closed form for `F_g`, `g ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    /// b = 3: Bernoulli term + `Σ_{ℓ=3g−3}^{5g−5} a_ℓ (1−108w)^{−ℓ}`
    WPole108,
    /// b = 4: Bernoulli term + `Σ_{ℓ=4g−4}^{5g−5} ã_ℓ (1−24w)^{−ℓ}`
    WPole24,
    /// b = 3: `x^{2g−2}F_g = Σ_{m=0}^{5g−5} c_m p^m`, `p = 108w/(1−108w)`
    PTri,
    /// b = 4: same with `p = 24w/(1−24w)`
    PQuad,
    /// b = 3: `x^{2g−2}F_g = Σ_{k=g−1}^{5g−5} r_k (3−q)^{−k}`, `q = 1/(1−72w)`
    QTri,
    /// b = 4: `x^{2g−2}F_g = Σ_{k=2g−2}^{5g−5} r̃_k (2−q)^{−k}`, `q = w/x`
    QQuad,
    /// b = 2ν: `x^{2g−2}F_g = Σ_{ℓ=2g−2}^{5g−5} r_ℓ (ν−(ν−1)q)^{−ℓ}`
    QNu,
    /// b ∈ {3, 4}: `Σ_{k=1}^{5g−5} b_k (1−Kw)^{−k} + Σ_{k=1}^{2g−2} b′_k w^{−k}`;
    /// `b′_k` is stored under exponent `−k`
    WPartialFraction,
}

impl Variable {
    pub const ALL: [Variable; 8] = [
        Variable::WPole108,
        Variable::WPole24,
        Variable::PTri,
        Variable::PQuad,
        Variable::QTri,
        Variable::QQuad,
        Variable::QNu,
        Variable::WPartialFraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::WPole108 => "w_pole_108",
            Variable::WPole24 => "w_pole_24",
            Variable::PTri => "p_tri",
            Variable::PQuad => "p_quad",
            Variable::QTri => "q_tri",
            Variable::QQuad => "q_quad",
            Variable::QNu => "q_nu",
            Variable::WPartialFraction => "w_partial_fraction",
        }
    }

    pub fn supports(self, model: Model) -> bool {
        match (self, model) {
            (Variable::WPole108 | Variable::PTri | Variable::QTri, Model::Tri) => true,
            (Variable::WPartialFraction, Model::Tri | Model::Even { nu: 2 }) => true,
            (Variable::WPole24 | Variable::PQuad | Variable::QQuad, Model::Even { nu: 2 }) => true,
            (Variable::QNu, Model::Even { .. }) => true,
            _ => false,
        }
    }

    /// Resolves a short name (`w`, `p`, `q`, `partial`) for a model.
    pub fn for_model(model: Model, short: &str) -> Result<Variable> {
        let v = match (short, model) {
            ("w", Model::Tri) => Variable::WPole108,
            ("w", Model::Even { nu: 2 }) => Variable::WPole24,
            ("p", Model::Tri) => Variable::PTri,
            ("p", Model::Even { nu: 2 }) => Variable::PQuad,
            ("q", Model::Tri) => Variable::QTri,
            ("q", Model::Even { nu: 2 }) => Variable::QQuad,
            ("q", Model::Even { .. }) => Variable::QNu,
            ("partial", _) => Variable::WPartialFraction,
            (other, _) => other.parse()?,
        };
        if !v.supports(model) {
            return Err(Error::InvalidInput(format!(
                "variable {} is not available for b = {}",
                v.name(),
                model.valence()
            )));
        }
        Ok(v)
    }

    pub fn has_bernoulli_term(self) -> bool {
        matches!(self, Variable::WPole108 | Variable::WPole24)
    }

    /// Exponents of the basis at genus `g`.
    pub fn exponents(self, g: usize) -> Vec<i64> {
        let g = g as i64;
        match self {
            Variable::WPole108 => (3 * g - 3..=5 * g - 5).collect(),
            Variable::WPole24 => (4 * g - 4..=5 * g - 5).collect(),
            Variable::PTri | Variable::PQuad => (0..=5 * g - 5).collect(),
            Variable::QTri => (g - 1..=5 * g - 5).collect(),
            Variable::QQuad | Variable::QNu => (2 * g - 2..=5 * g - 5).collect(),
            Variable::WPartialFraction => {
                (1..=5 * g - 5).chain((1..=2 * g - 2).map(|k| -k)).collect()
            }
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Variable> {
        Variable::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {s:?}")))
    }
}

/// A certified closed form of `F_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzForm {
    pub model: Model,
    pub genus: usize,
    pub variable: Variable,
    pub bernoulli_term: bool,
    pub coefficients: BTreeMap<i64, Rational>,
    pub certificate: Option<Certificate>,
}

#[derive(Serialize, Deserialize)]
struct AnsatzRecord {
    model: Model,
    genus: usize,
    variable: Variable,
    bernoulli_term: bool,
    coefficients: Vec<(i64, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
}

impl Serialize for AnsatzForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AnsatzRecord {
            model: self.model,
            genus: self.genus,
            variable: self.variable,
            bernoulli_term: self.bernoulli_term,
            coefficients: self
                .coefficients
                .iter()
                .map(|(e, c)| (*e, fmt_rational(c)))
                .collect(),
            certificate: self.certificate.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AnsatzForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AnsatzRecord::deserialize(d)?;
        let coefficients = r
            .coefficients
            .into_iter()
            .map(|(e, c)| {
                parse_rational(&c)
                    .map(|c| (e, c))
                    .ok_or_else(|| D::Error::custom(format!("bad rational {c:?}")))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(AnsatzForm {
            model: r.model,
            genus: r.genus,
            variable: r.variable,
            bernoulli_term: r.bernoulli_term,
            coefficients,
            certificate: r.certificate,
        })
    }
}

impl AnsatzForm {
    pub fn coefficient(&self, e: i64) -> Rational {
        self.coefficients
            .get(&e)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

fn powers(base_inv: &XSeries, exps: &[i64]) -> Result<BTreeMap<i64, XSeries>> {
    let mut out = BTreeMap::new();
    let top = exps.iter().copied().max().unwrap_or(0);
    let mut p = XSeries::one();
    for e in 0..=top {
        if exps.contains(&e) {
            out.insert(e, p.clone());
        }
        p = &p * base_inv;
    }
    Ok(out)
}

fn affine(a: i64, b: i64, s: &XSeries) -> XSeries {
    &XSeries::constant(int(a), EXACT) + &s.scale(&int(b))
}

/// `F_g`-level basis functions `(exponent, series)` for a variable.
fn basis(model: Model, g: usize, variable: Variable, g0: &Genus0) -> Result<Vec<(i64, XSeries)>> {
    let exps = variable.exponents(g);
    let w = &g0.w;
    let xpow = 2 - 2 * g as i64;
    let pole = |k: i64| affine(1, -k, w);
    let list = match variable {
        Variable::WPole108 | Variable::WPole24 => {
            let k = if variable == Variable::WPole108 {
                108
            } else {
                24
            };
            powers(&pole(k).recip()?, &exps)?.into_iter().collect()
        }
        Variable::PTri | Variable::PQuad => {
            let k = if variable == Variable::PTri { 108 } else { 24 };
            let p = w.scale(&int(k)).checked_div(&pole(k))?;
            powers(&p, &exps)?
                .into_iter()
                .map(|(e, s)| (e, s.shift_exponent(xpow)))
                .collect()
        }
        Variable::QTri => {
            let q = pole(72).recip()?;
            let base = affine(3, -1, &q);
            powers(&base.recip()?, &exps)?
                .into_iter()
                .map(|(e, s)| (e, s.shift_exponent(xpow)))
                .collect()
        }
        Variable::QQuad | Variable::QNu => {
            let nu = model.nu().expect("q-form needs even valence") as i64;
            let base = affine(nu, -(nu - 1), &g0.q);
            powers(&base.recip()?, &exps)?
                .into_iter()
                .map(|(e, s)| (e, s.shift_exponent(xpow)))
                .collect()
        }
        Variable::WPartialFraction => {
            let k = if model == Model::Tri { 108 } else { 24 };
            let pos: Vec<i64> = exps.iter().copied().filter(|e| *e > 0).collect();
            let neg: Vec<i64> = exps.iter().filter(|e| **e < 0).map(|e| -e).collect();
            let mut list: Vec<(i64, XSeries)> =
                powers(&pole(k).recip()?, &pos)?.into_iter().collect();
            list.extend(powers(&w.recip()?, &neg)?.into_iter().map(|(e, s)| (-e, s)));
            list
        }
    };
    Ok(list)
}

/// `(1−2g)B_{2g}/(2g)! ∂^{2g−2} log w`
fn bernoulli_part(g: usize, g0: &Genus0) -> Result<XSeries> {
    Ok(g0
        .w
        .log()?
        .nth_derivative(2 * g - 2)
        .scale(&bernoulli_coefficient(g)))
}

/// Fits the closed form of `F_g` in `variable` against `∂²F_g` of `sol`.
/// The structural side conditions of each form are asserted.
pub fn fit_ansatz(sol: &StringSolution, g: usize, variable: Variable) -> Result<AnsatzForm> {
    let model = sol.spec.model;
    if g < 2 {
        return Err(Error::InvalidInput(format!(
            "genus {g} has a closed form; fitting starts at genus 2"
        )));
    }
    if !variable.supports(model) {
        return Err(Error::InvalidInput(format!(
            "variable {variable} is not available for b = {}",
            model.valence()
        )));
    }
    let context = format!("b = {}, g = {g}, {variable}", model.valence());
    let mut target = d2f(sol, g)?;
    if variable.has_bernoulli_term() {
        target = &target - &bernoulli_part(g, &sol.genus0)?.nth_derivative(2);
    }
    let basis = basis(model, g, variable, &sol.genus0)?;
    let images: Vec<XSeries> = basis.iter().map(|(_, s)| s.nth_derivative(2)).collect();
    let fit = fit_linear(&target, &images, MIN_SURPLUS, &context)?;
    let coefficients: BTreeMap<i64, Rational> = basis
        .iter()
        .map(|(e, _)| *e)
        .zip(fit.coefficients)
        .collect();
    let form = AnsatzForm {
        model,
        genus: g,
        variable,
        bernoulli_term: variable.has_bernoulli_term(),
        coefficients,
        certificate: Some(fit.certificate),
    };
    side_conditions(&form, &context)?;
    Ok(form)
}

fn side_conditions(form: &AnsatzForm, context: &str) -> Result<()> {
    let g = form.genus as i64;
    let fail = |what: String| Err(Error::Identity(format!("{context}: {what}")));
    match form.variable {
        Variable::PTri | Variable::PQuad => {
            if form.coefficient(0) != leading_constant(form.genus) {
                return fail(format!(
                    "constant term {} ≠ B_2g/(4g(g−1))",
                    form.coefficient(0)
                ));
            }
            for m in 1..=2 * g - 2 {
                if !form.coefficient(m).is_zero() {
                    return fail(format!("c_{m} = {} should vanish", form.coefficient(m)));
                }
            }
        }
        Variable::QNu | Variable::QQuad => {
            let total: Rational = form.coefficients.values().sum();
            if total != leading_constant(form.genus) {
                return fail(format!("Σ r_ℓ = {total} ≠ B_2g/(4g(g−1))"));
            }
        }
        Variable::WPartialFraction if form.model != Model::Tri => {
            for k in (2..=4 * g - 6).step_by(2) {
                if !form.coefficient(k).is_zero() {
                    return fail(format!("b̃_{k} = {} should vanish", form.coefficient(k)));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Expands a form as a Laurent series in `x` from the given genus-0 data.
pub fn fg_series_with(form: &AnsatzForm, g0: &Genus0) -> Result<XSeries> {
    let basis = basis(form.model, form.genus, form.variable, g0)?;
    let mut acc = XSeries::zero(EXACT);
    for (e, s) in &basis {
        acc = &acc + &s.scale(&form.coefficient(*e));
    }
    if form.bernoulli_term {
        acc = &acc + &bernoulli_part(form.genus, g0)?;
    }
    Ok(acc)
}

/// Expands a form through (at least) `x^order`, solving genus 0 as needed.
pub fn fg_series(form: &AnsatzForm, order: i64) -> Result<XSeries> {
    let g = form.genus as i64;
    let spec = ModelSpec::for_model(form.model, 0, order + 4 * g + 4)?;
    let s = fg_series_with(form, &solve_genus0(&spec)?)?;
    if s.valid_order() < order {
        return Err(Error::PrecisionExhausted(format!(
            "F_{g} expansion reached x^{} < x^{order}",
            s.valid_order()
        )));
    }
    Ok(s.truncate(order))
}
