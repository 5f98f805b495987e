//! Genus-g free energies: `∂²F_g` from `log W`, closed forms certified by
//! exact fitting, and their re-expansion.

mod ansatz;
mod arctanh;
mod closed;
mod fit;

use crate::exact::{bernoulli, big, factorial, int, Rational};
use crate::series::XSeries;
use crate::solver::StringSolution;
use crate::{Error, Result};

pub use ansatz::{fg_series, fg_series_with, fit_ansatz, AnsatzForm, Variable};
pub use arctanh::{verify_arctanh_identity, ArctanhReport};
pub use closed::{certify_closed, closed_form, closed_series, ClosedForm, LogArgument, LogTerm};
pub use fit::{fit_linear, Certificate, Fit, MIN_SURPLUS};

/// `(1−2k) B_{2k}/(2k)!`
pub fn bernoulli_coefficient(k: usize) -> Rational {
    int(1 - 2 * k as i64) * bernoulli(2 * k) / big(&factorial(2 * k as u32))
}

/// `B_{2g}/(4g(g−1))`, the constant term of `x^{2g−2}F_g`.
pub fn leading_constant(g: usize) -> Rational {
    bernoulli(2 * g) / int(4 * g as i64 * (g as i64 - 1))
}

/// `∂²F_g = Σ_{k=0}^{g} (1−2k)B_{2k}/(2k)! ∂^{2k} L_{g−k}`, `L = log W` by genus,
/// for all `g ≤ genus_cap`. Grade 0 is `log w` and carries `log x`.
pub fn d2f_all(sol: &StringSolution) -> Result<Vec<XSeries>> {
    let l = sol.w.log()?;
    let cap = sol.spec.genus_cap;
    let mut towers: Vec<Vec<XSeries>> = l.entries().iter().map(|e| vec![e.clone()]).collect();
    let mut out = Vec::with_capacity(cap + 1);
    for g in 0..=cap {
        let mut acc = XSeries::zero(crate::series::EXACT);
        for k in 0..=g {
            let tower = &mut towers[g - k];
            while tower.len() <= k {
                let next = tower.last().unwrap().nth_derivative(2);
                tower.push(next);
            }
            acc = &acc + &tower[k].scale(&bernoulli_coefficient(k));
        }
        out.push(acc);
    }
    Ok(out)
}

pub fn d2f(sol: &StringSolution, g: usize) -> Result<XSeries> {
    if g > sol.spec.genus_cap {
        return Err(Error::InvalidInput(format!(
            "genus {g} exceeds the solution's cap {}",
            sol.spec.genus_cap
        )));
    }
    Ok(d2f_all(sol)?.swap_remove(g))
}

#[cfg(test)]
mod tests;
