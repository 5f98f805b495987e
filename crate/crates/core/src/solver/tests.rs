use super::*;
use crate::exact::{int, Poly};
use crate::series::eval_poly;

fn spec(b: u32, cap: usize, order: i64) -> ModelSpec {
    ModelSpec::new(b, cap, order).unwrap()
}

fn lin(a: i64, b: i64) -> Poly {
    Poly::from_ints(&[a, b])
}

/// `p(w)/(a + b w)^e` as an x-series
fn over_power(p: &Poly, w: &XSeries, base: &Poly, e: i64) -> XSeries {
    eval_poly(p, w)
        .checked_div(&eval_poly(base, w).powi(e).unwrap())
        .unwrap()
}

fn assert_same(a: &XSeries, b: &XSeries) {
    assert_eq!(a.first_mismatch(b), None, "\n{a:?}\n{b:?}");
}

#[test]
fn rejects_unsupported_valences() {
    assert!(Model::from_valence(5).is_err());
    assert!(Model::from_valence(2).is_err());
    assert!(Model::from_nu(1).is_err());
    assert_eq!(Model::from_valence(8).unwrap(), Model::Even { nu: 4 });
    assert!(ModelSpec::new(3, 1, 2).is_err());
}

#[test]
fn genus0_series() {
    let t = solve_genus0(&spec(3, 0, 10)).unwrap();
    assert_eq!(t.w.dense(1, 3), vec![int(1), int(36), int(3240)]);
    assert_eq!(t.v.unwrap().dense(1, 3), vec![int(6), int(324), int(31104)]);
    let q = solve_genus0(&spec(4, 0, 10)).unwrap();
    assert_eq!(q.w.dense(1, 3), vec![int(1), int(12), int(288)]);
    assert_eq!(q.q.dense(0, 2), vec![int(1), int(12), int(288)]);
    // ν = 3: x = w − 60 w³
    let s = solve_genus0(&spec(6, 0, 12)).unwrap();
    assert_eq!(
        s.w.dense(1, 5),
        vec![int(1), int(0), int(60), int(0), int(10800)]
    );
    assert_eq!(genus0::even_genus0_constant(3), int(60));
}

#[test]
fn tri_genus_one() {
    let sol = solve_tri(spec(3, 2, 20)).unwrap();
    let w = sol.w0();
    let d = lin(1, -108);
    let w1 = over_power(&Poly::from_ints(&[0, 810, -162 * 324]), w, &d, 4);
    assert_same(sol.w.entry(1), &w1);
    let root = (&XSeries::one() - &w.scale(&int(72))).sqrt().unwrap();
    let v1 = root
        .scale(&int(54))
        .checked_div(&eval_poly(&d, w).powi(4).unwrap())
        .unwrap();
    assert_same(sol.v_tilde.entry(1), &v1);
    let (e1, e2) = tri_residual(&sol).unwrap();
    for g in 0..=2 {
        assert!(e1.entry(g).is_zero() && e2.entry(g).is_zero(), "g={g}");
    }
}

#[test]
fn quad_genus_one() {
    let sol = solve_quad(spec(4, 2, 20)).unwrap();
    let w1 = over_power(&lin(0, 96), sol.w0(), &lin(1, -24), 4);
    assert_same(sol.w.entry(1), &w1);
}

#[test]
fn generic_even_matches_quad() {
    let q = solve_quad(spec(4, 3, 24)).unwrap();
    let e = solve_even(spec(4, 3, 24)).unwrap();
    for g in 0..=3 {
        assert_eq!(q.w.entry(g), e.w.entry(g), "g={g}");
    }
    let res = even_residual(&e).unwrap();
    assert!(res.entries().iter().all(XSeries::is_zero));
}

#[test]
fn generic_even_residual_nu3() {
    let e = solve_even(ModelSpec::planned_terms(Model::Even { nu: 3 }, 2, 8).unwrap()).unwrap();
    let res = even_residual(&e).unwrap();
    assert!(res.entries().iter().all(XSeries::is_zero));
}

#[test]
fn tri_through_the_lax_operator() {
    let sol = solve_tri(spec(3, 2, 16)).unwrap();
    let (e1, e2) = tri_lattice_residual(&sol).unwrap();
    for g in e1.grades().iter().chain(e2.grades()) {
        assert!(g.is_zero(), "{g:?}");
    }
}

#[test]
fn tri_table_first_rows_and_series() {
    let t = tri_dx_table(4).unwrap();
    assert_eq!(
        t[0],
        vec![Poly::from_ints(&[72, -3888]), Poly::from_ints(&[1, -72])]
    );
    let sol = solve_genus0(&spec(3, 0, 30)).unwrap();
    let w = &sol.w;
    let d = lin(1, -108);
    // test function f = w^7: ∂_w^i f = 7!/(7−i)! w^{7−i}
    let f = w.powi(7).unwrap();
    for (k, row) in t.iter().enumerate().map(|(i, r)| (i + 1, r)) {
        let direct = f.nth_derivative(2 * k);
        let mut via = XSeries::zero(EXACT);
        for (i, tk) in row.iter().enumerate().map(|(i, r)| (i + 1, r)) {
            let fall: i64 = (0..i as i64).map(|j| 7 - j).product();
            let dw = w.powi(7 - i as i64).unwrap().scale(&int(fall));
            let coeff = over_power(tk, w, &d, (4 * k - i) as i64);
            via = &via + &(&coeff * &dw);
        }
        assert_same(&direct, &via);
        assert!(row.iter().all(|p| p.degree().map_or(true, |d| d <= k)));
    }
}

#[test]
fn quad_table_series() {
    let t = quad_dx_table(5);
    assert_eq!(t[1], vec![int(24), int(1)]);
    let sol = solve_genus0(&spec(4, 0, 24)).unwrap();
    let w = &sol.w;
    let f = w.powi(6).unwrap();
    for (k, row) in t.iter().enumerate().map(|(i, r)| (i + 1, r)) {
        let direct = f.nth_derivative(k);
        let mut via = XSeries::zero(EXACT);
        for (i, c) in row.iter().enumerate().map(|(i, r)| (i + 1, r)) {
            let fall: i64 = (0..i as i64).map(|j| 6 - j).product();
            let dw = w.powi(6 - i as i64).unwrap().scale(&(c * int(fall)));
            via = &via
                + &over_power(&Poly::from_ints(&[1]), w, &lin(1, -24), (2 * k - i) as i64)
                    .checked_mul(&dw)
                    .unwrap();
        }
        assert_same(&direct, &via);
    }
}

#[test]
fn even_log_table_series() {
    let table = even_log_table(8).unwrap();
    for nu in [3u32, 4] {
        let sol =
            solve_genus0(&ModelSpec::planned_terms(Model::Even { nu }, 0, 14).unwrap()).unwrap();
        let base = &XSeries::constant(int(nu as i64), EXACT) - &sol.q.scale(&int(nu as i64 - 1));
        let mut d = sol.w.log().unwrap();
        for (k, row) in table.iter().enumerate().take(6).map(|(i, r)| (i + 1, r)) {
            d = d.derivative();
            let lhs = d.shift_exponent(k as i64);
            let mut rhs = XSeries::zero(EXACT);
            for (l, e) in row.iter().enumerate() {
                let sign = if (k + l + 1) % 2 == 0 { 1 } else { -1 };
                let c = e.eval(&int(nu as i64)) * int(sign);
                rhs = &rhs + &base.powi(-((k + l) as i64)).unwrap().scale(&c);
            }
            assert_same(&lhs, &rhs);
        }
    }
}
