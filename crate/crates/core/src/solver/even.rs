use super::{solve_genus0, zero_family, Model, ModelSpec, StringSolution};
use crate::exact::{binomial, int, rat};
use crate::lattice::{inv_shift_plus_one, op_power_residue, DiffOp};
use crate::series::{EpsFamily, GenusFamily, XSeries, EXACT};
use crate::{Error, Result};

/// `x + 2ν (Λ+1)^{-1} res L^{2ν}` for `L = Λ + WΛ^{-1}`, as an ε-family.
fn even_rhs(w: &EpsFamily, nu: u32) -> Result<EpsFamily> {
    let zero = EpsFamily::new(vec![XSeries::zero(EXACT); w.max_grade() + 1]);
    let l = DiffOp::lax(&zero, w)?;
    let r = op_power_residue(&l, 2 * nu)?;
    let mut out = inv_shift_plus_one(&r).scale(&int(2 * nu as i64));
    let mut grades = out.clone().into_grades();
    grades[0] = &grades[0] + &XSeries::x();
    out = EpsFamily::new(grades);
    Ok(out)
}

/// Generic even valence `b = 2ν`: at genus g the equation
/// `W = x + 2ν(Λ+1)^{-1} res L^{2ν}` is linear in `W_g` with coefficient
/// `1 − ν² binom(2ν,ν) w^{ν−1}`.
pub fn solve_even(spec: ModelSpec) -> Result<StringSolution> {
    let Model::Even { nu } = spec.model else {
        return Err(Error::InvalidInput("solve_even needs even valence".into()));
    };
    let g0 = solve_genus0(&spec)?;
    let w0 = g0.w.clone();
    let lin = int(nu as i64 * nu as i64) * binomial(&int(2 * nu as i64), nu);
    let unit = &XSeries::one() - &w0.powi(nu as i64 - 1)?.scale(&lin);
    let mut ws = vec![w0];
    for g in 1..=spec.genus_cap {
        let mut entries = ws.clone();
        entries.push(XSeries::zero(EXACT));
        let rhs = even_rhs(&GenusFamily::new(entries).to_eps(), nu)?;
        let rhs = GenusFamily::from_eps(&rhs)?;
        ws.push(rhs.entry(g).checked_div(&unit)?);
    }
    Ok(StringSolution {
        spec,
        v_tilde: zero_family(spec.genus_cap),
        w: GenusFamily::new(ws),
        genus0: g0,
    })
}

/// Genus-graded residual `x + 2ν(Λ+1)^{-1} res L^{2ν} − W` of an even solution.
pub fn even_residual(sol: &StringSolution) -> Result<GenusFamily> {
    let Model::Even { nu } = sol.spec.model else {
        return Err(Error::InvalidInput(
            "even residual needs even valence".into(),
        ));
    };
    let rhs = even_rhs(&sol.w.to_eps(), nu)?;
    GenusFamily::from_eps(&rhs.sub(&sol.w.to_eps()))
}

/// Residuals of the unshifted b = 3 equations written through the Lax
/// operator: `3 res L² − V` and `x + 3(Λ+1)^{-1}(res L³ − V res L²) − W`,
/// with `V(x) = Ṽ(x + ε/2)`. Both are returned as full ε-families.
pub fn tri_lattice_residual(sol: &StringSolution) -> Result<(EpsFamily, EpsFamily)> {
    if sol.spec.model != Model::Tri {
        return Err(Error::InvalidInput(
            "b = 3 lattice residual needs b = 3".into(),
        ));
    }
    let v = sol.v_tilde.to_eps().shift(&rat(1, 2));
    let w = sol.w.to_eps();
    let l = DiffOp::lax(&v, &w)?;
    let r2 = op_power_residue(&l, 2)?;
    let r3 = op_power_residue(&l, 3)?;
    let e1 = r2.scale(&int(3)).sub(&v);
    let inner = r3.sub(&v.mul(&r2));
    let mut grades = inv_shift_plus_one(&inner)
        .scale(&int(3))
        .sub(&w)
        .into_grades();
    grades[0] = &grades[0] + &XSeries::x();
    Ok((e1, EpsFamily::new(grades)))
}
