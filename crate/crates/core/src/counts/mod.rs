//! The integers `n_g(b^k)`: coefficient extraction from `F_g`, the closed
//! binomial sums, and the ν-polynomial families.

mod binomial;
mod emit;
mod nu;
mod poles;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::exact::{big, factorial, fmt_rational, to_integer, Rational};
use crate::free_energy::{
    closed_form, closed_series, fg_series_with, fit_ansatz, AnsatzForm, Variable,
};
use crate::series::XSeries;
use crate::solver::{
    solve, solve_genus0, Genus0, Model, ModelSpec, StringSolution, DEFAULT_X_ORDER,
};
use crate::{Error, Result};

pub use binomial::{count_binomial, BinomialForm};
pub use emit::{
    grid_k, to_csv, to_json, triangulation_grid, TriangulationGrid, PUBLISHED_GRID, SCHEMA_VERSION,
};
pub use nu::{
    nu_solution, q_numeric, q_polynomial, r_polynomial, r_polynomials, r_sample, s_polynomial,
    t_coefficients, t_polynomials, NuFamily, NuPolynomial, NU_TERMS,
};
pub use poles::{w_pole_coefficients, WPoleFit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Series,
    BinomialFormula,
    Oracle,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Series => "series",
            Provenance::BinomialFormula => "binomial_formula",
            Provenance::Oracle => "oracle",
        })
    }
}

/// `n_g(b^k)` with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapCountRecord {
    pub g: usize,
    pub b: u32,
    pub k: usize,
    #[serde(serialize_with = "ser_bigint")]
    pub count: BigInt,
    pub provenance: Provenance,
}

fn ser_bigint<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Number of faces `2 − 2g − k + bk/2`, if it is a positive integer.
pub fn face_count(b: u32, g: usize, k: usize) -> Option<i64> {
    let twice = 4 - 4 * g as i64 - 2 * k as i64 + (b as i64) * k as i64;
    (twice > 0 && twice % 2 == 0).then_some(twice / 2)
}

/// Exponent of `x` carrying `n_g(b^k)/k!` in `F_g`. For the models here it
/// coincides with the face count.
pub fn count_exponent(model: Model, g: usize, k: usize) -> Option<i64> {
    face_count(model.valence(), g, k)
}

/// Converts `k!·c` to a count, asserting integrality and sign.
pub(crate) fn to_count(c: &Rational, k: usize, context: impl Fn() -> String) -> Result<BigInt> {
    let v = c * big(&factorial(k as u32));
    let n = to_integer(&v).ok_or_else(|| {
        Error::Identity(format!(
            "{}: k!·coefficient = {} is not an integer",
            context(),
            fmt_rational(&v)
        ))
    })?;
    if n.is_negative() {
        return Err(Error::Identity(format!(
            "{}: negative count {n}",
            context()
        )));
    }
    Ok(n)
}

/// The variable used to extend `F_g`, `g ≥ 2`, beyond the solved order.
pub fn primary_variable(model: Model) -> Variable {
    match model {
        Model::Tri => Variable::WPole108,
        Model::Even { nu: 2 } => Variable::WPole24,
        Model::Even { .. } => Variable::QNu,
    }
}

/// Cached pipeline for one model: a string solution for fitting, the
/// certified forms of `F_g`, and genus-0 data at the largest order asked for.
pub struct CountEngine {
    sol: StringSolution,
    forms: BTreeMap<usize, AnsatzForm>,
    g0: Genus0,
    g0_order: i64,
}

impl CountEngine {
    pub fn new(spec: ModelSpec) -> Result<CountEngine> {
        let sol = solve(spec)?;
        let g0 = sol.genus0.clone();
        Ok(CountEngine {
            g0_order: spec.x_order,
            g0,
            sol,
            forms: BTreeMap::new(),
        })
    }

    /// Engine with a fitting order adequate for `genus_cap`.
    pub fn planned(model: Model, genus_cap: usize) -> Result<CountEngine> {
        let spec = match model {
            Model::Even { nu } if nu > 2 => ModelSpec::planned_terms(model, genus_cap, NU_TERMS)?,
            _ => ModelSpec::for_model(
                model,
                genus_cap,
                DEFAULT_X_ORDER.max(16 * genus_cap as i64 - 12),
            )?,
        };
        CountEngine::new(spec)
    }

    pub fn model(&self) -> Model {
        self.sol.spec.model
    }

    pub fn solution(&self) -> &StringSolution {
        &self.sol
    }

    /// The certified closed form of `F_g`, `g ≥ 2`.
    pub fn form(&mut self, g: usize) -> Result<&AnsatzForm> {
        if !self.forms.contains_key(&g) {
            let f = fit_ansatz(&self.sol, g, primary_variable(self.model()))?;
            self.forms.insert(g, f);
        }
        Ok(&self.forms[&g])
    }

    fn genus0_through(&mut self, order: i64) -> Result<&Genus0> {
        if order > self.g0_order {
            let spec = ModelSpec::for_model(self.model(), 0, order)?;
            self.g0 = solve_genus0(&spec)?;
            self.g0_order = order;
        }
        Ok(&self.g0)
    }

    /// `F_g` (without its logarithmic and constant part at g ≤ 1) through `x^order`.
    pub fn free_energy(&mut self, g: usize, order: i64) -> Result<XSeries> {
        let pad = order + 2 * g as i64 + 4;
        let series = match g {
            0 => {
                let lw = self.genus0_through(pad)?.w.log()?;
                let terms: Vec<(i64, Rational)> = lw
                    .terms()
                    .filter(|(e, _)| *e >= 1)
                    .map(|(e, c)| {
                        (
                            e + 2,
                            c / Rational::from_integer(((e + 2) * (e + 1)).into()),
                        )
                    })
                    .collect();
                XSeries::from_terms(terms, lw.valid_order() + 2)
            }
            1 => {
                let form = closed_form(self.model(), 1)?;
                let s = closed_series(&form, self.genus0_through(pad)?)?;
                XSeries::from_terms(s.terms().map(|(e, c)| (e, c.clone())), s.valid_order())
            }
            _ => {
                let form = self.form(g)?.clone();
                fg_series_with(&form, self.genus0_through(pad)?)?
            }
        };
        if series.valid_order() < order {
            return Err(Error::PrecisionExhausted(format!(
                "F_{g} known through x^{}, x^{order} requested",
                series.valid_order()
            )));
        }
        Ok(series.truncate(order))
    }

    pub fn count(&mut self, g: usize, k: usize) -> Result<MapCountRecord> {
        let model = self.model();
        let b = model.valence();
        let record = |count| MapCountRecord {
            g,
            b,
            k,
            count,
            provenance: Provenance::Series,
        };
        let Some(e) = count_exponent(model, g, k) else {
            return Ok(record(BigInt::zero()));
        };
        let f = self.free_energy(g, e)?;
        let n = to_count(&f.at(e), k, || format!("n_{g}({b}^{k})"))?;
        Ok(record(n))
    }

    /// `n_g(b^k)` for `k = 1..=k_max`.
    pub fn counts(&mut self, g: usize, k_max: usize) -> Result<Vec<MapCountRecord>> {
        (1..=k_max).map(|k| self.count(g, k)).collect()
    }
}

/// `n_g(b^k)` from the genus-g free energy.
pub fn count_from_series(model: Model, g: usize, k: usize) -> Result<MapCountRecord> {
    CountEngine::planned(model, g.max(1))?.count(g, k)
}

#[cfg(test)]
mod tests;
