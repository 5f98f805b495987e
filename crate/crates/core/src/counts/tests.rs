use num_bigint::BigInt;

use super::*;
use crate::exact::{int, rat};

fn n(s: &str) -> BigInt {
    s.parse().unwrap()
}

#[test]
fn faces_and_parity() {
    assert_eq!(face_count(3, 0, 2), Some(3));
    assert_eq!(face_count(3, 1, 3), None);
    assert_eq!(face_count(3, 2, 2), None);
    assert_eq!(face_count(4, 0, 1), Some(3));
    let rec = count_from_series(Model::Tri, 1, 5).unwrap();
    assert_eq!(rec.count, BigInt::from(0));
}

#[test]
fn small_series_counts() {
    assert_eq!(
        count_from_series(Model::Tri, 2, 6).unwrap().count,
        n("3061800")
    );
    assert_eq!(count_from_series(Model::Tri, 0, 2).unwrap().count, n("12"));
    assert_eq!(count_from_series(Model::Tri, 1, 2).unwrap().count, n("3"));
    assert_eq!(
        count_from_series(Model::Even { nu: 2 }, 0, 1)
            .unwrap()
            .count,
        n("2")
    );
    assert_eq!(
        count_from_series(Model::Even { nu: 3 }, 0, 1)
            .unwrap()
            .count,
        n("5")
    );
    assert_eq!(
        count_from_series(Model::Even { nu: 3 }, 1, 1)
            .unwrap()
            .count,
        n("10")
    );
}

#[test]
fn binomial_sums_match_series() {
    let mut tri = CountEngine::planned(Model::Tri, 2).unwrap();
    for which in [BinomialForm::QForm, BinomialForm::PForm] {
        for k in [6, 8, 10, 12] {
            let a = count_binomial(&mut tri, 2, k, which).unwrap();
            assert_eq!(a.count, tri.count(2, k).unwrap().count, "{which:?} k = {k}");
        }
    }
    assert_eq!(
        count_binomial(&mut tri, 2, 6, BinomialForm::PForm)
            .unwrap()
            .count,
        n("3061800")
    );

    let mut quad = CountEngine::planned(Model::Even { nu: 2 }, 2).unwrap();
    for which in [BinomialForm::QForm, BinomialForm::PForm] {
        for k in 1..=6 {
            let a = count_binomial(&mut quad, 2, k, which).unwrap();
            assert_eq!(
                a.count,
                quad.count(2, k).unwrap().count,
                "{which:?} k = {k}"
            );
        }
    }
}

#[test]
fn genus_one_pole_forms() {
    let sol = crate::solver::solve(crate::solver::ModelSpec::new(3, 1, 30).unwrap()).unwrap();
    let a = w_pole_coefficients(&sol, 1).unwrap();
    assert_eq!(a.coefficients[&4], int(3));
    let sol = crate::solver::solve(crate::solver::ModelSpec::new(4, 1, 30).unwrap()).unwrap();
    let a = w_pole_coefficients(&sol, 1).unwrap();
    assert_eq!(a.coefficients[&4], int(4));
    assert_eq!(a.coefficients[&3], int(-4));
}

#[test]
fn genus_one_t_at_nu_two() {
    // x W_1 = (2/3) q (q−1)²/(2−q)⁴ for b = 4
    let (t, _) = t_coefficients(1, 2).unwrap();
    assert_eq!(t[&2], rat(2, 3));
    assert_eq!(t[&3], rat(-4, 3));
    assert_eq!(t[&4], rat(2, 3));
}

#[test]
fn q_polynomial_genus_one() {
    let t = t_polynomials(1).unwrap();
    for k in 1..=2 {
        let q = q_polynomial(&t, k).unwrap();
        for nu in 2..=4 {
            assert_eq!(
                q.eval(&int(nu)),
                q_numeric(nu as u32, 1, k).unwrap(),
                "k = {k}, ν = {nu}"
            );
        }
    }
}

#[test]
fn emitters() {
    let recs = vec![count_from_series(Model::Tri, 0, 2).unwrap()];
    assert_eq!(to_csv(&recs), "b,g,k,count,provenance\n3,0,2,12,series\n");
    let j = serde_json::to_string(&to_json(&recs)).unwrap();
    assert_eq!(
        j,
        r#"{"records":[{"b":3,"count":"12","g":0,"k":2,"provenance":"series"}],"schema_version":1}"#
    );
}
