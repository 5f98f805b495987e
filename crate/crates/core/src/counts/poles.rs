use std::collections::BTreeMap;

use serde::Serialize;

use crate::exact::{int, Rational};
use crate::free_energy::{fit_linear, Certificate, MIN_SURPLUS};
use crate::series::XSeries;
use crate::solver::{Model, StringSolution};
use crate::{Error, Result};

/// `W_g = Σ_ℓ A_{g,ℓ} (1−Kw)^{−ℓ}` with `K = 108` (b = 3, ℓ = 3g−1..5g−1)
/// or `K = 24` (b = 4, ℓ = 4g−1..5g−1).
#[derive(Clone, Debug, Serialize)]
pub struct WPoleFit {
    pub model: Model,
    pub g: usize,
    #[serde(skip)]
    pub coefficients: BTreeMap<i64, Rational>,
    pub certificate: Certificate,
}

pub fn w_pole_coefficients(sol: &StringSolution, g: usize) -> Result<WPoleFit> {
    let model = sol.spec.model;
    let gi = g as i64;
    let (k, lo) = match model {
        Model::Tri => (108, 3 * gi - 1),
        Model::Even { nu: 2 } => (24, 4 * gi - 1),
        _ => {
            return Err(Error::InvalidInput(
                "pole form of W_g exists for b = 3, 4".into(),
            ))
        }
    };
    if g < 1 || g > sol.spec.genus_cap {
        return Err(Error::InvalidInput(format!(
            "genus {g} outside 1..={}",
            sol.spec.genus_cap
        )));
    }
    let pole = (&XSeries::one() - &sol.w0().scale(&int(k))).recip()?;
    let hi = 5 * gi - 1;
    let mut basis = Vec::new();
    let mut p = XSeries::one();
    for l in 1..=hi {
        p = &p * &pole;
        if l >= lo {
            basis.push(p.clone());
        }
    }
    let context = format!("W_{g} pole form, b = {}", model.valence());
    let fit = fit_linear(sol.w.entry(g), &basis, MIN_SURPLUS, &context)?;
    Ok(WPoleFit {
        model,
        g,
        coefficients: (lo..=hi).zip(fit.coefficients).collect(),
        certificate: fit.certificate,
    })
}
