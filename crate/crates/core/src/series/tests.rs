use super::*;
use crate::exact::{int, rat};

fn geometric(order: i64) -> XSeries {
    // 1/(1-x)
    XSeries::from_ints(0, &vec![1; order as usize + 1], order)
}

#[test]
fn normalization_compacts_stride() {
    let s = XSeries::from_terms([(2, int(1)), (5, int(0)), (8, int(3))], 20);
    assert_eq!(s.terms().count(), 2);
    assert_eq!(s.at(8), int(3));
    assert_eq!(s.at(5), int(0));
    assert_eq!(s.coeff(21), None);
}

#[test]
fn validity_of_products() {
    let a = XSeries::from_ints(1, &[1, 1], 5); // x + x^2 + O(x^6)
    let b = XSeries::from_ints(2, &[1], 4); // x^2 + O(x^5)
    let p = &a * &b;
    assert_eq!(p.valid_order(), 5);
    assert_eq!(p.at(3), int(1));
    assert_eq!(p.at(4), int(1));
}

#[test]
fn division_inverts_multiplication() {
    let g = geometric(12);
    let one_minus_x = XSeries::from_ints(0, &[1, -1], EXACT);
    let prod = &g * &one_minus_x;
    assert_eq!(prod.first_mismatch(&XSeries::one()), None);
    assert_eq!(prod.valid_order(), 12);
    let back = XSeries::one().checked_div(&one_minus_x);
    assert!(matches!(back, Err(Error::Unbounded(_))));
    let back = XSeries::one()
        .truncate(12)
        .checked_div(&one_minus_x)
        .unwrap();
    assert_eq!(back, g);
}

#[test]
fn log_of_geometric() {
    // log(1/(1-x)) = Σ x^n/n
    let l = geometric(10).log().unwrap();
    for n in 1..=10 {
        assert_eq!(l.at(n), rat(1, n));
    }
    let lx = XSeries::from_ints(1, &[1, 1], 8).log().unwrap();
    assert_eq!(lx.log_coeff(), &int(1));
    assert_eq!(lx.at(2), rat(-1, 2));
}

#[test]
fn derivative_of_log_term() {
    let s = XSeries::log_x(rat(-1, 12));
    let d = s.derivative();
    assert!(!d.has_log());
    assert_eq!(d.at(-1), rat(-1, 12));
}

#[test]
fn sqrt_and_compose_and_revert() {
    let f = XSeries::from_ints(0, &[1, -72], EXACT).truncate(15);
    let r = f.sqrt().unwrap();
    assert_eq!((&r * &r).first_mismatch(&f), None);

    // x = w - 12 w^2 inverts to w = x + 12 x^2 + 288 x^3 + ...
    let x_of_w = XSeries::from_ints(1, &[1, -12], EXACT).truncate(10);
    let w = x_of_w.revert().unwrap();
    assert_eq!(w.at(2), int(12));
    assert_eq!(w.at(3), int(288));
    let id = x_of_w.compose(&w).unwrap();
    assert_eq!(id.first_mismatch(&XSeries::x()), None);
}

#[test]
fn algebraic_solve_triangulation_genus0() {
    // 6x = v - 9v^2 + 18v^3
    let rel = vec![
        XSeries::monomial(int(-6), 1, EXACT),
        XSeries::one(),
        XSeries::constant(int(-9), EXACT),
        XSeries::constant(int(18), EXACT),
    ];
    let v = solve_algebraic(&rel, int(0), 12).unwrap();
    assert_eq!(v.at(1), int(6));
    assert_eq!(v.at(2), int(324));
    assert_eq!(v.at(3), int(31104));
    assert_eq!(v.valid_order(), 12);
}

#[test]
fn algebraic_solve_on_a_stride() {
    // 1 - q + 6 x^2 q^3 = 0, a series in x^2
    let rel = vec![
        XSeries::one(),
        XSeries::constant(int(-1), EXACT),
        XSeries::zero(EXACT),
        XSeries::monomial(int(6), 2, EXACT),
    ];
    let q = solve_algebraic(&rel, int(1), 20).unwrap();
    assert_eq!(q.at(1), int(0));
    assert_eq!(q.at(2), int(6));
    assert_eq!(q.at(4), int(108));
}

#[test]
fn shift_is_taylor() {
    // Λ^{1/2} x^2 = x^2 + ε x + ε^2/4
    let e = EpsFamily::from_grade0(XSeries::monomial(int(1), 2, EXACT), 3);
    let s = e.shift(&rat(1, 2));
    assert_eq!(s.grade(1).at(1), int(1));
    assert_eq!(s.grade(2).at(0), rat(1, 4));
    assert!(s.grade(3).is_zero());
}

#[test]
fn genus_log_matches_direct_log() {
    // family w_0 + ε^2 w_1 with w_1 = w_0^2: log(w0(1+ε² w0)) = log w0 + ε² w0 - ε⁴ w0²/2
    let w0 = XSeries::from_ints(1, &[1, 3, 1], EXACT).truncate(12);
    let fam = GenusFamily::new(vec![w0.clone(), &w0 * &w0, XSeries::zero(12)]);
    let l = fam.log().unwrap();
    assert_eq!(l.entry(1).first_mismatch(&w0), None);
    assert_eq!(
        l.entry(2).first_mismatch(&(&w0 * &w0).scale(&rat(-1, 2))),
        None
    );
}

#[test]
fn sqrt_extension_derivative() {
    // D = 1 + x, s = √D; (s)' = 1/(2s) = s/(2D)
    let d = XSeries::from_ints(0, &[1, 1], EXACT).truncate(10);
    let field = SqrtField::new(d.clone()).unwrap();
    let s = SqrtExt::s(&field);
    let ds = s.derivative();
    assert!(ds.a.is_zero());
    let expect = d.scale(&int(2)).recip().unwrap();
    assert_eq!(ds.b.first_mismatch(&expect), None);
    let sq = s.mul(&s);
    assert_eq!(sq.a.first_mismatch(&d), None);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn series(lo: i64) -> impl Strategy<Value = XSeries> {
        proptest::collection::vec(-20i64..20, 1..8).prop_map(move |c| XSeries::from_ints(lo, &c, 9))
    }

    proptest! {
        #[test]
        fn exp_inverts_log(a in series(1)) {
            let one = XSeries::one();
            let l = (&one + &a).log().unwrap();
            let back = l.exp().unwrap();
            prop_assert_eq!(back.first_mismatch(&(&one + &a)), None);
        }

        #[test]
        fn leibniz(a in series(0), b in series(0)) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs.first_mismatch(&rhs), None);
        }

        #[test]
        fn division_round_trip(a in series(0), b in series(0)) {
            prop_assume!(b.val() == 0);
            let q = a.checked_div(&b).unwrap();
            prop_assert_eq!((&q * &b).first_mismatch(&a), None);
        }
    }
}
