//! Genus-by-genus solution of the string equations for `Ṽ` and `W`.

mod even;
mod genus0;
mod tables;
mod tri;

use serde::{Deserialize, Serialize};

use crate::exact::{big, factorial, Rational};
use crate::series::{GenusFamily, XSeries, EXACT};
use crate::{Error, Result};

pub use even::{even_residual, solve_even, tri_lattice_residual};
pub use genus0::{even_genus0_constant, solve_genus0, Genus0};
pub use tables::{dx_to_dw_table, even_log_table, quad_dx_table, tri_dx_table, DxTable};
pub use tri::{solve_quad, solve_tri, tri_residual};

/// Default x-order used by the CLI and the table pipeline.
pub const DEFAULT_X_ORDER: i64 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// b = 3
    Tri,
    /// b = 2ν, ν ≥ 2 (ν = 2 is the quadrangulation model)
    Even { nu: u32 },
}

impl Model {
    pub fn from_valence(b: u32) -> Result<Model> {
        match b {
            3 => Ok(Model::Tri),
            b if b >= 4 && b % 2 == 0 => Ok(Model::Even { nu: b / 2 }),
            b if b >= 5 => Err(Error::InvalidInput(format!(
                "odd valence {b} is not supported (only b = 3 among odd valences)"
            ))),
            b => Err(Error::InvalidInput(format!(
                "valence must be at least 3, got {b}"
            ))),
        }
    }

    pub fn from_nu(nu: u32) -> Result<Model> {
        if nu < 2 {
            return Err(Error::InvalidInput(format!(
                "ν must be at least 2, got {nu}"
            )));
        }
        Ok(Model::Even { nu })
    }

    pub fn valence(&self) -> u32 {
        match self {
            Model::Tri => 3,
            Model::Even { nu } => 2 * nu,
        }
    }

    pub fn nu(&self) -> Option<u32> {
        match self {
            Model::Tri => None,
            Model::Even { nu } => Some(*nu),
        }
    }

    /// Gap between consecutive exponents of `w(x)/x`.
    pub fn stride(&self) -> i64 {
        match self {
            Model::Tri => 1,
            Model::Even { nu } => *nu as i64 - 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    pub genus_cap: usize,
    pub x_order: i64,
}

impl ModelSpec {
    pub fn new(valence: u32, genus_cap: usize, x_order: i64) -> Result<Self> {
        Self::for_model(Model::from_valence(valence)?, genus_cap, x_order)
    }

    pub fn for_model(model: Model, genus_cap: usize, x_order: i64) -> Result<Self> {
        if x_order < 3 {
            return Err(Error::InvalidInput(format!(
                "x_order must be at least 3, got {x_order}"
            )));
        }
        Ok(ModelSpec {
            model,
            genus_cap,
            x_order,
        })
    }

    /// Order needed so that every `F_g`, `g ≤ genus_cap`, is certified through
    /// `x^{n_target}` after the derivative towers of the recursions.
    pub fn planned(model: Model, genus_cap: usize, n_target: i64) -> Result<Self> {
        Self::for_model(model, genus_cap, n_target + 2 * genus_cap as i64 + 4)
    }

    /// Plan for `terms` coefficients of the `x^{ν-1}` lattice beyond the leading one.
    pub fn planned_terms(model: Model, genus_cap: usize, terms: i64) -> Result<Self> {
        Self::planned(model, genus_cap, 1 + model.stride() * terms)
    }

    pub fn valence(&self) -> u32 {
        self.model.valence()
    }
}

#[derive(Clone, Debug)]
pub struct StringSolution {
    pub spec: ModelSpec,
    /// `Ṽ_g`; identically zero for even valence
    pub v_tilde: GenusFamily,
    pub w: GenusFamily,
    pub genus0: Genus0,
}

impl StringSolution {
    pub fn w0(&self) -> &XSeries {
        &self.genus0.w
    }

    pub fn q0(&self) -> &XSeries {
        &self.genus0.q
    }
}

/// Solves the model's string equations through `spec.genus_cap`.
pub fn solve(spec: ModelSpec) -> Result<StringSolution> {
    match spec.model {
        Model::Tri => solve_tri(spec),
        Model::Even { nu: 2 } => solve_quad(spec),
        Model::Even { .. } => solve_even(spec),
    }
}

/// `1/(2^{2k}(2k)!)`
pub(crate) fn half_taylor(k: usize) -> Rational {
    let den = big(&(factorial(2 * k as u32) * num_bigint::BigInt::from(4).pow(k as u32)));
    den.recip()
}

/// `1/(2k)!`
pub(crate) fn taylor(k: usize) -> Rational {
    big(&factorial(2 * k as u32)).recip()
}

pub(crate) fn zero_family(cap: usize) -> GenusFamily {
    GenusFamily::new(vec![XSeries::zero(EXACT); cap + 1])
}

#[cfg(test)]
mod tests;
