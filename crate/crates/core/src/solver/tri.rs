use super::{half_taylor, solve_genus0, taylor, zero_family, Model, ModelSpec, StringSolution};
use crate::exact::int;
use crate::series::{GenusFamily, XSeries, EXACT};
use crate::{Error, Result};

/// b = 3: at each genus the pair `(Ṽ_g, W_g)` solves
/// `(1−6v)Ṽ_g − 6W_g = R₁`, `−6wṼ_g + (1−6v)W_g = R₂`.
pub fn solve_tri(spec: ModelSpec) -> Result<StringSolution> {
    if spec.model != Model::Tri {
        return Err(Error::InvalidInput("solve_tri needs b = 3".into()));
    }
    let g0 = solve_genus0(&spec)?;
    let v = g0.v.clone().expect("b = 3 genus 0 carries v");
    let w = g0.w.clone();
    let a = &XSeries::one() - &v.scale(&int(6));
    let det = &(&a * &a) - &w.scale(&int(36));

    let mut vt = vec![v];
    let mut ws = vec![w.clone()];
    // derivative towers ∂^{2k} of each genus entry, extended on demand
    let mut dv: Vec<Vec<XSeries>> = vec![vec![vt[0].clone()]];
    let mut dw: Vec<Vec<XSeries>> = vec![vec![ws[0].clone()]];
    let even_deriv = |tower: &mut Vec<XSeries>, k: usize| -> XSeries {
        while tower.len() <= k {
            let next = tower.last().unwrap().nth_derivative(2);
            tower.push(next);
        }
        tower[k].clone()
    };

    for g in 1..=spec.genus_cap {
        let mut r1 = XSeries::zero(EXACT);
        for g1 in 1..g {
            r1 = &r1 + &(&vt[g1] * &vt[g - g1]).scale(&int(3));
        }
        for k in 1..=g {
            let d = even_deriv(&mut dw[g - k], k);
            r1 = &r1 + &d.scale(&(half_taylor(k) * int(6)));
        }
        let mut r2 = XSeries::zero(EXACT);
        for k in 0..=g {
            for g1 in 0..=(g - k) {
                let g2 = g - k - g1;
                if g1 == g || g2 == g {
                    continue;
                }
                let d = even_deriv(&mut dv[g2], k);
                r2 = &r2 + &(&ws[g1] * &d).scale(&(half_taylor(k) * int(6)));
            }
        }
        let vg = (&(&a * &r1) + &r2.scale(&int(6))).checked_div(&det)?;
        let wg = (&(&w * &r1).scale(&int(6)) + &(&a * &r2)).checked_div(&det)?;
        dv.push(vec![vg.clone()]);
        dw.push(vec![wg.clone()]);
        vt.push(vg);
        ws.push(wg);
    }
    Ok(StringSolution {
        spec,
        v_tilde: GenusFamily::new(vt),
        w: GenusFamily::new(ws),
        genus0: g0,
    })
}

/// Genus-graded residuals of the shifted b = 3 string equations, i.e. the
/// ε^{2g} parts of `3(Ṽ² + W(x−ε/2) + W(x+ε/2)) − Ṽ` and
/// `x + 3W(Ṽ(x−ε/2) + Ṽ(x+ε/2)) − W`.
pub fn tri_residual(sol: &StringSolution) -> Result<(GenusFamily, GenusFamily)> {
    let cap = sol.spec.genus_cap;
    let vt = sol.v_tilde.entries();
    let w = sol.w.entries();
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for g in 0..=cap {
        let mut a = vt[g].scale(&int(-1));
        for g1 in 0..=g {
            a = &a + &(&vt[g1] * &vt[g - g1]).scale(&int(3));
        }
        for k in 0..=g {
            a = &a
                + &w[g - k]
                    .nth_derivative(2 * k)
                    .scale(&(half_taylor(k) * int(6)));
        }
        let mut b = w[g].scale(&int(-1));
        if g == 0 {
            b = &b + &XSeries::x();
        }
        for k in 0..=g {
            for g1 in 0..=(g - k) {
                let d = vt[g - k - g1].nth_derivative(2 * k);
                b = &b + &(&w[g1] * &d).scale(&(half_taylor(k) * int(6)));
            }
        }
        e1.push(a);
        e2.push(b);
    }
    Ok((GenusFamily::new(e1), GenusFamily::new(e2)))
}

/// b = 4: `W_g = 4/(1−24w) (Σ_{g₂=1}^{g−1} W_{g₂}W_{g−g₂}
/// + 2 Σ_{g₁+g₂+j=g, g₁,g₂≤g−1} W_{g₂} ∂^{2j}W_{g₁}/(2j)!)`.
pub fn solve_quad(spec: ModelSpec) -> Result<StringSolution> {
    if spec.model != (Model::Even { nu: 2 }) {
        return Err(Error::InvalidInput("solve_quad needs b = 4".into()));
    }
    let g0 = solve_genus0(&spec)?;
    let w = g0.w.clone();
    let denom = &XSeries::one() - &w.scale(&int(24));
    let mut ws = vec![w];
    let mut towers: Vec<Vec<XSeries>> = vec![vec![ws[0].clone()]];
    for g in 1..=spec.genus_cap {
        let mut acc = XSeries::zero(EXACT);
        for g2 in 1..g {
            acc = &acc + &(&ws[g2] * &ws[g - g2]);
        }
        for j in 0..=g {
            for g1 in 0..=(g - j) {
                let g2 = g - j - g1;
                if g1 == g || g2 == g {
                    continue;
                }
                let tower = &mut towers[g1];
                while tower.len() <= j {
                    let next = tower.last().unwrap().nth_derivative(2);
                    tower.push(next);
                }
                acc = &acc + &(&ws[g2] * &tower[j]).scale(&(taylor(j) * int(2)));
            }
        }
        let wg = acc.scale(&int(4)).checked_div(&denom)?;
        towers.push(vec![wg.clone()]);
        ws.push(wg);
    }
    Ok(StringSolution {
        spec,
        v_tilde: zero_family(spec.genus_cap),
        w: GenusFamily::new(ws),
        genus0: g0,
    })
}
