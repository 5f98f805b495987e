use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::d2f;
use crate::exact::{fmt_rational, int, rat, Rational, SymbolicConstant};
use crate::series::{XSeries, EXACT};
use crate::solver::{Genus0, Model, StringSolution};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogArgument {
    W,
    X,
    /// `1 − k·w`
    OneMinus {
        k: i64,
    },
    /// `ν − (ν−1)q`
    NuBase {
        nu: u32,
    },
}

impl fmt::Display for LogArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogArgument::W => f.write_str("w"),
            LogArgument::X => f.write_str("x"),
            LogArgument::OneMinus { k } => write!(f, "1-{k}*w"),
            LogArgument::NuBase { nu } => write!(f, "{nu}-{}*q", nu - 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogTerm {
    #[serde(serialize_with = "ser_rational")]
    pub coefficient: Rational,
    pub argument: LogArgument,
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Genus 0 and 1 free energies, which are logarithmic rather than rational in `w`.
/// `derivative_order` says whether the terms give `F_g` (0) or `∂²F_g` (2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub model: Model,
    pub genus: usize,
    pub derivative_order: usize,
    pub terms: Vec<LogTerm>,
    pub constants: Vec<SymbolicConstant>,
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.derivative_order > 0 {
            write!(
                f,
                "d^{}F_{}/dx^{} = ",
                self.derivative_order, self.genus, self.derivative_order
            )?;
        } else {
            write!(f, "F_{} = ", self.genus)?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})*log({})", fmt_rational(&t.coefficient), t.argument)?;
        }
        for c in &self.constants {
            write!(f, " + {c}")?;
        }
        Ok(())
    }
}

fn term(c: Rational, argument: LogArgument) -> LogTerm {
    LogTerm {
        coefficient: c,
        argument,
    }
}

pub fn closed_form(model: Model, g: usize) -> Result<ClosedForm> {
    let (derivative_order, terms, constants) = match g {
        0 => (2, vec![term(int(1), LogArgument::W)], vec![]),
        1 => {
            let terms = match model {
                Model::Tri => vec![
                    term(rat(-1, 12), LogArgument::W),
                    term(rat(-1, 24), LogArgument::OneMinus { k: 108 }),
                ],
                Model::Even { nu: 2 } => vec![
                    term(rat(-1, 12), LogArgument::W),
                    term(rat(-1, 12), LogArgument::OneMinus { k: 24 }),
                ],
                Model::Even { nu } => vec![
                    term(rat(-1, 12), LogArgument::X),
                    term(rat(-1, 12), LogArgument::NuBase { nu }),
                ],
            };
            (0, terms, vec![SymbolicConstant::ZetaPrimeMinusOne])
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "genus {g} has no logarithmic closed form; use an ansatz fit"
            )))
        }
    };
    Ok(ClosedForm {
        model,
        genus: g,
        derivative_order,
        terms,
        constants,
    })
}

/// The logarithmic part of a closed form as an x-series (symbolic constants dropped).
pub fn closed_series(form: &ClosedForm, g0: &Genus0) -> Result<XSeries> {
    let mut acc = XSeries::zero(EXACT);
    for t in &form.terms {
        let arg = match t.argument {
            LogArgument::W => g0.w.clone(),
            LogArgument::X => XSeries::x(),
            LogArgument::OneMinus { k } => &XSeries::one() - &g0.w.scale(&int(k)),
            LogArgument::NuBase { nu } => {
                let nu = nu as i64;
                &XSeries::constant(int(nu), EXACT) - &g0.q.scale(&int(nu - 1))
            }
        };
        acc = &acc + &arg.log()?.scale(&t.coefficient);
    }
    Ok(acc)
}

/// Checks `∂^{2−derivative_order}` of the closed form against `∂²F_g` of `sol`.
pub fn certify_closed(sol: &StringSolution, form: &ClosedForm) -> Result<()> {
    let lhs = closed_series(form, &sol.genus0)?.nth_derivative(2 - form.derivative_order);
    let diff = &lhs - &d2f(sol, form.genus)?;
    if !diff.log_coeff().is_zero() {
        return Err(Error::Identity(format!(
            "genus {} closed form: log x coefficient {} left over",
            form.genus,
            diff.log_coeff()
        )));
    }
    let first = diff.terms().next().map(|(e, _)| e);
    match first {
        None => Ok(()),
        Some(e) => Err(Error::FitResidual {
            exponent: e,
            context: format!(
                "genus {} closed form for b = {}",
                form.genus,
                form.model.valence()
            ),
        }),
    }
}
