use std::collections::BTreeMap;

use super::*;
use crate::exact::{int, rat, Rational};
use crate::solver::{solve, Model, ModelSpec};

fn coeffs(form: &AnsatzForm) -> BTreeMap<i64, Rational> {
    form.coefficients
        .iter()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(e, c)| (*e, c.clone()))
        .collect()
}

fn expect(pairs: &[(i64, Rational)]) -> BTreeMap<i64, Rational> {
    pairs.iter().cloned().collect()
}

fn tri(cap: usize, order: i64) -> crate::solver::StringSolution {
    solve(ModelSpec::for_model(Model::Tri, cap, order).unwrap()).unwrap()
}

#[test]
fn genus_two_triangulation_forms() {
    let sol = tri(2, 36);
    let w = fit_ansatz(&sol, 2, Variable::WPole108).unwrap();
    assert_eq!(
        coeffs(&w),
        expect(&[(3, rat(-351, 8)), (4, rat(27, 8)), (5, rat(189, 10))])
    );
    assert!(w.certificate.as_ref().unwrap().surplus >= MIN_SURPLUS);

    let q = fit_ansatz(&sol, 2, Variable::QTri).unwrap();
    assert_eq!(
        coeffs(&q),
        expect(&[
            (1, rat(3, 64)),
            (2, rat(-29, 32)),
            (3, rat(191, 48)),
            (4, rat(-55, 8)),
            (5, rat(21, 5)),
        ])
    );

    let p = fit_ansatz(&sol, 2, Variable::PTri).unwrap();
    assert_eq!(
        coeffs(&p),
        expect(&[
            (0, rat(-1, 240)),
            (3, rat(35, 10368)),
            (4, rat(29, 10368)),
            (5, rat(7, 12960)),
        ])
    );

    // all three are the same function
    let fw = fg_series_with(&w, &sol.genus0).unwrap();
    for other in [&q, &p] {
        let f = fg_series_with(other, &sol.genus0).unwrap();
        assert_eq!((&f - &fw).truncate(30).terms().next(), None);
    }
}

#[test]
fn genus_three_triangulation_forms() {
    let sol = tri(3, 44);
    let w = fit_ansatz(&sol, 3, Variable::WPole108).unwrap();
    assert_eq!(
        coeffs(&w),
        expect(&[
            (6, rat(589761, 4)),
            (7, rat(-8203437, 28)),
            (8, rat(-448335, 2)),
            (9, int(324405)),
            (10, int(178605)),
        ])
    );
    let p = fit_ansatz(&sol, 3, Variable::PTri).unwrap();
    assert_eq!(
        coeffs(&p),
        expect(&[
            (0, rat(1, 1008)),
            (5, rat(5005, 746496)),
            (6, rat(29969, 1679616)),
            (7, rat(813587, 47029248)),
            (8, rat(2945, 373248)),
            (9, rat(965, 559872)),
            (10, rat(245, 1679616)),
        ])
    );
    let q = fit_ansatz(&sol, 3, Variable::QTri).unwrap();
    assert_eq!(
        coeffs(&q),
        expect(&[
            (2, rat(63, 256)),
            (3, rat(-22765, 1152)),
            (4, rat(7925, 24)),
            (5, rat(-39311, 16)),
            (6, rat(1443995, 144)),
            (7, rat(-4055053, 168)),
            (8, rat(68625, 2)),
            (9, int(-26730)),
            (10, int(8820)),
        ])
    );
    fit_ansatz(&sol, 3, Variable::WPartialFraction).unwrap();
}

#[test]
fn quadrangulation_forms_agree() {
    let sol = solve(ModelSpec::for_model(Model::Even { nu: 2 }, 3, 44).unwrap()).unwrap();
    for g in 2..=3 {
        let reference = fg_series_with(
            &fit_ansatz(&sol, g, Variable::WPole24).unwrap(),
            &sol.genus0,
        )
        .unwrap();
        for v in [
            Variable::PQuad,
            Variable::QQuad,
            Variable::QNu,
            Variable::WPartialFraction,
        ] {
            let f = fg_series_with(&fit_ansatz(&sol, g, v).unwrap(), &sol.genus0).unwrap();
            assert_eq!(
                (&f - &reference).truncate(30).terms().next(),
                None,
                "g = {g}, {v}"
            );
        }
    }
}

#[test]
fn closed_forms_certify() {
    for model in [Model::Tri, Model::Even { nu: 2 }, Model::Even { nu: 3 }] {
        let sol = solve(ModelSpec::for_model(model, 1, 30).unwrap()).unwrap();
        for g in 0..=1 {
            let form = closed_form(model, g).unwrap();
            certify_closed(&sol, &form).unwrap_or_else(|e| panic!("{model:?} g={g}: {e}"));
        }
    }
    assert!(closed_form(Model::Tri, 2).is_err());
}

#[test]
fn wrong_variable_is_rejected() {
    let sol = tri(2, 30);
    assert!(matches!(
        fit_ansatz(&sol, 2, Variable::QNu),
        Err(crate::Error::InvalidInput(_))
    ));
    assert!(fit_ansatz(&sol, 1, Variable::WPole108).is_err());
}

#[test]
fn ansatz_json_round_trip() {
    let sol = tri(2, 32);
    let form = fit_ansatz(&sol, 2, Variable::WPole108).unwrap();
    let json = serde_json::to_string(&form).unwrap();
    assert!(json.contains("\"-351/8\""));
    let back: AnsatzForm = serde_json::from_str(&json).unwrap();
    assert_eq!(back, form);
}

#[test]
fn fg_series_extends_beyond_fit_order() {
    let sol = tri(2, 32);
    let form = fit_ansatz(&sol, 2, Variable::WPole108).unwrap();
    let long = fg_series(&form, 60).unwrap();
    let direct = fg_series_with(&form, &sol.genus0).unwrap();
    assert_eq!((&long - &direct).terms().next(), None);
    assert!(long.valid_order() >= 60);
}

#[test]
fn arctanh_identity() {
    let report = verify_arctanh_identity(4..=8, 30).unwrap();
    assert_eq!(report.checked.len(), 5);
    assert!(verify_arctanh_identity(3..=5, 30).is_err());
}
