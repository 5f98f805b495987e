//! Named invariant suites, each check reporting pass/fail with a detail line.

use std::fmt;
use std::str::FromStr;

use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::counts::{
    count_from_series, q_numeric, q_polynomial, r_polynomials, s_polynomial, t_polynomials,
    w_pole_coefficients,
};
use crate::exact::{fmt_rational, int, rat, Rational};
use crate::free_energy::{
    certify_closed, closed_form, fit_ansatz, verify_arctanh_identity, Variable,
};
use crate::oracle::{enumerate, enumerate_count, OracleOptions, ValencyProfile};
use crate::painleve::{painleve_constants, painleve_residual, verify_bernoulli_recursion};
use crate::series::XSeries;
use crate::solver::{
    dx_to_dw_table, even_residual, solve, solve_even, solve_quad, tri_lattice_residual,
    tri_residual, Model, ModelSpec,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Toda,
    Ansatz,
    Painleve,
    Oracle,
    Nu,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Toda,
        Suite::Ansatz,
        Suite::Painleve,
        Suite::Oracle,
        Suite::Nu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Toda => "toda",
            Suite::Ansatz => "ansatz",
            Suite::Painleve => "painleve",
            Suite::Oracle => "oracle",
            Suite::Nu => "nu",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `all` or one suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    One(Suite),
}

impl FromStr for Selection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Selection> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(Selection::One)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn run(&mut self, suite: Suite, name: impl Into<String>, f: impl FnOnce() -> Result<String>) {
        let (passed, detail) = match f() {
            Ok(d) => (true, d),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check {
            suite,
            name: name.into(),
            passed,
            detail,
        });
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub oracle: OracleOptions,
    /// Largest genus of the ν-polynomial checks.
    pub nu_genus_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            oracle: OracleOptions::default(),
            nu_genus_max: 2,
        }
    }
}

pub fn run(selection: Selection, opts: &VerifyOptions) -> Report {
    let suites: Vec<Suite> = match selection {
        Selection::All => Suite::ALL.to_vec(),
        Selection::One(s) => vec![s],
    };
    let mut report = Report::default();
    for s in suites {
        match s {
            Suite::Toda => toda(&mut report),
            Suite::Ansatz => ansatz(&mut report),
            Suite::Painleve => painleve(&mut report),
            Suite::Oracle => oracle(&mut report, &opts.oracle),
            Suite::Nu => nu(&mut report, opts.nu_genus_max),
        }
    }
    report
}

fn zero_or(s: &XSeries, what: &str) -> Result<()> {
    match s.terms().next() {
        None => Ok(()),
        Some((e, _)) => Err(Error::Identity(format!("{what} nonzero at x^{e}"))),
    }
}

fn same(a: &Rational, b: &Rational, what: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Identity(format!(
            "{what}: {} ≠ {}",
            fmt_rational(a),
            fmt_rational(b)
        )))
    }
}

fn borrow<T>(r: &Result<T>) -> Result<&T> {
    r.as_ref().map_err(|e| Error::Identity(e.to_string()))
}

fn toda(r: &mut Report) {
    let s = Suite::Toda;
    r.run(s, "b=3 string equations, genus ≤ 3", || {
        let sol = solve(ModelSpec::new(3, 3, 30)?)?;
        let (e1, e2) = tri_residual(&sol)?;
        for g in 0..=3 {
            zero_or(e1.entry(g), "first equation")?;
            zero_or(e2.entry(g), "second equation")?;
        }
        Ok("residual zero through x^30".into())
    });
    r.run(s, "b=3 Lax-operator form, genus ≤ 3", || {
        let sol = solve(ModelSpec::new(3, 3, 24)?)?;
        let (a, b) = tri_lattice_residual(&sol)?;
        for g in a.grades().iter().chain(b.grades()) {
            zero_or(g, "Lax residual")?;
        }
        Ok("all ε-grades vanish".into())
    });
    r.run(
        s,
        "generic even solver at ν=2 equals b=4 solver, genus ≤ 3",
        || {
            let spec = ModelSpec::new(4, 3, 30)?;
            let (q, e) = (solve_quad(spec)?, solve_even(spec)?);
            for g in 0..=3 {
                if q.w.entry(g) != e.w.entry(g) {
                    return Err(Error::Identity(format!("W_{g} differs")));
                }
            }
            Ok("W_0..W_3 identical".into())
        },
    );
    for nu in [2u32, 3, 4] {
        r.run(s, format!("even string equation residual, ν={nu}"), || {
            let sol = solve(ModelSpec::new(2 * nu, 2, 30)?)?;
            for g in even_residual(&sol)?.entries() {
                zero_or(g, "residual")?;
            }
            Ok("zero through genus 2".into())
        });
    }
    r.run(
        s,
        "∂_x→∂_w tables and degree bounds (k ≤ 8)",
        || {
            for m in [Model::Tri, Model::Even { nu: 2 }, Model::Even { nu: 5 }] {
                dx_to_dw_table(m, 8)?;
            }
            Ok("b=3, b=4 and ν tables built with bounds asserted".into())
        },
    );
    for b in [3u32, 4, 6] {
        r.run(s, format!("genus 0 and 1 closed forms, b={b}"), || {
            let sol = solve(ModelSpec::new(b, 1, 30)?)?;
            for g in 0..=1 {
                certify_closed(&sol, &closed_form(sol.spec.model, g)?)?;
            }
            Ok("∂² of the closed forms matches".into())
        });
    }
}

fn expect_coefficients(
    sol: &crate::solver::StringSolution,
    g: usize,
    v: Variable,
    expected: &[(i64, Rational)],
) -> Result<String> {
    let form = fit_ansatz(sol, g, v)?;
    for (e, c) in expected {
        same(&form.coefficient(*e), c, &format!("{v} coefficient {e}"))?;
    }
    let nonzero = form.coefficients.values().filter(|c| !c.is_zero()).count();
    let expected_nonzero = expected.iter().filter(|(_, c)| !c.is_zero()).count();
    if nonzero != expected_nonzero {
        return Err(Error::Identity(format!(
            "{v}: unexpected extra coefficients"
        )));
    }
    let cert = form.certificate.expect("fitted form");
    Ok(format!(
        "{} equations, surplus {}",
        cert.equations, cert.surplus
    ))
}

/// The triangulation and quadrangulation closed-form coefficients at g = 2, 3.
pub fn tri_expectations() -> Vec<(usize, Variable, Vec<(i64, Rational)>)> {
    vec![
        (
            2,
            Variable::WPole108,
            vec![(3, rat(-351, 8)), (4, rat(27, 8)), (5, rat(189, 10))],
        ),
        (
            3,
            Variable::WPole108,
            vec![
                (6, rat(589761, 4)),
                (7, rat(-8203437, 28)),
                (8, rat(-448335, 2)),
                (9, int(324405)),
                (10, int(178605)),
            ],
        ),
        (
            2,
            Variable::QTri,
            vec![
                (1, rat(3, 64)),
                (2, rat(-29, 32)),
                (3, rat(191, 48)),
                (4, rat(-55, 8)),
                (5, rat(21, 5)),
            ],
        ),
        (
            3,
            Variable::QTri,
            vec![
                (2, rat(63, 256)),
                (3, rat(-22765, 1152)),
                (4, rat(7925, 24)),
                (5, rat(-39311, 16)),
                (6, rat(1443995, 144)),
                (7, rat(-4055053, 168)),
                (8, rat(68625, 2)),
                (9, int(-26730)),
                (10, int(8820)),
            ],
        ),
        (
            2,
            Variable::PTri,
            vec![
                (0, rat(-1, 240)),
                (3, rat(35, 10368)),
                (4, rat(29, 10368)),
                (5, rat(7, 12960)),
            ],
        ),
        (
            3,
            Variable::PTri,
            vec![
                (0, rat(1, 1008)),
                (5, rat(5005, 746496)),
                (6, rat(29969, 1679616)),
                (7, rat(813587, 47029248)),
                (8, rat(2945, 373248)),
                (9, rat(965, 559872)),
                (10, rat(245, 1679616)),
            ],
        ),
    ]
}

/// `(a_{g,5g−5}, A_{g,5g−1})` predictions from `C_g` for b = 3 and b = 4.
pub fn top_coefficient_predictions(model: Model, g: usize) -> (Rational, Rational) {
    let c = painleve_constants(g).get(g).clone();
    let gi = g as i64;
    let (base, f_den, w_den) = match model {
        Model::Tri => (162, 3888, 108),
        _ => (48, 576, 24),
    };
    let pow = Pow::pow(int(base), g as i32);
    let f = if g >= 2 {
        &pow * &c / int(f_den * (5 * gi - 3) * (5 * gi - 5))
    } else {
        Rational::zero()
    };
    (f, pow * c / int(w_den))
}

fn ansatz(r: &mut Report) {
    let s = Suite::Ansatz;
    let tri = match solve(ModelSpec::new(3, 4, 56).expect("valid spec")) {
        Ok(t) => t,
        Err(e) => {
            r.run(s, "b=3 solve through genus 4", || Err(e));
            return;
        }
    };
    for (g, v, expected) in tri_expectations() {
        r.run(s, format!("b=3 genus {g} {v} coefficients"), || {
            expect_coefficients(&tri, g, v, &expected)
        });
    }
    r.run(s, "b=3 partial-fraction form, genus 2..3", || {
        for g in 2..=3 {
            fit_ansatz(&tri, g, Variable::WPartialFraction)?;
        }
        Ok("fits certified".into())
    });
    let quad = solve(ModelSpec::new(4, 4, 56).expect("valid spec"));
    for (model, sol) in [(Model::Tri, Ok(tri.clone())), (Model::Even { nu: 2 }, quad)] {
        let b = model.valence();
        let Ok(sol) = sol else {
            r.run(s, format!("b={b} solve through genus 4"), || {
                Err(Error::Identity("solve failed".into()))
            });
            continue;
        };
        r.run(
            s,
            format!("b={b} top F-coefficients from C_g, g=2..4"),
            || {
                let v = if b == 3 {
                    Variable::WPole108
                } else {
                    Variable::WPole24
                };
                for g in 2..=4 {
                    let (f, _) = top_coefficient_predictions(model, g);
                    same(
                        &fit_ansatz(&sol, g, v)?.coefficient(5 * g as i64 - 5),
                        &f,
                        &format!("g = {g}"),
                    )?;
                }
                Ok("exact".into())
            },
        );
        r.run(
            s,
            format!("b={b} top W-coefficients from C_g, g=1..4"),
            || {
                for g in 1..=4 {
                    let (_, a) = top_coefficient_predictions(model, g);
                    same(
                        &w_pole_coefficients(&sol, g)?.coefficients[&(5 * g as i64 - 1)],
                        &a,
                        &format!("g = {g}"),
                    )?;
                }
                Ok("exact".into())
            },
        );
    }
    r.run(s, "b=4 closed forms agree across variables, g=2..3", || {
        let sol = solve(ModelSpec::new(4, 3, 44)?)?;
        for g in 2..=3 {
            let base = crate::free_energy::fg_series_with(
                &fit_ansatz(&sol, g, Variable::WPole24)?,
                &sol.genus0,
            )?;
            for v in [Variable::PQuad, Variable::QQuad, Variable::WPartialFraction] {
                let f = crate::free_energy::fg_series_with(&fit_ansatz(&sol, g, v)?, &sol.genus0)?;
                zero_or(&(&f - &base).truncate(30), &format!("g = {g} {v}"))?;
            }
        }
        Ok("identical expansions".into())
    });
    r.run(s, "arctanh identity, k = 4..8, x-order 30", || {
        let rep = verify_arctanh_identity(4..=8, 30)?;
        Ok(format!("{} values of k", rep.checked.len()))
    });
}

fn painleve(r: &mut Report) {
    let s = Suite::Painleve;
    r.run(s, "C_0 = −1, C_1 = 2, C_2 = 98", || {
        let t = painleve_constants(2);
        same(t.get(0), &int(-1), "C_0")?;
        same(t.get(1), &int(2), "C_1")?;
        same(t.get(2), &int(98), "C_2")?;
        Ok("exact".into())
    });
    r.run(s, "Painlevé I residual through g = 12", || {
        painleve_residual(&painleve_constants(12))?;
        Ok("zero".into())
    });
    r.run(s, "Bernoulli recursion, g ≤ 20", || {
        let rep = verify_bernoulli_recursion(20)?;
        Ok(format!("{} identities", rep.checked))
    });
}

fn oracle(r: &mut Report, opts: &OracleOptions) {
    let s = Suite::Oracle;
    for (p, expected) in [
        ("3,3", vec![(0, 12), (1, 3)]),
        ("3,3,3,3", vec![(0, 5184), (1, 4536)]),
        ("6", vec![(0, 5), (1, 10)]),
    ] {
        r.run(s, format!("histogram of ({p})"), || {
            let h = enumerate(&p.parse()?, opts)?.histogram;
            for (g, c) in &expected {
                if h.get(*g) != *c {
                    return Err(Error::Identity(format!("genus {g}: {} ≠ {c}", h.get(*g))));
                }
            }
            if h.total() != expected.iter().map(|(_, c)| c).sum::<u64>() {
                return Err(Error::Identity("unexpected genera".into()));
            }
            Ok("exact".into())
        });
    }
    for (b, kmax) in [(4u32, 3usize), (6, 2)] {
        r.run(s, format!("({b})^k, k ≤ {kmax}, against series"), || {
            let model = Model::from_valence(b)?;
            for k in 1..=kmax {
                let p = ValencyProfile::uniform(b as usize, k)?;
                let h = enumerate(&p, opts)?.histogram;
                for (&g, &c) in &h.counts {
                    let n = count_from_series(model, g, k)?.count;
                    if n != c.into() {
                        return Err(Error::Identity(format!(
                            "k = {k}, g = {g}: oracle {c}, series {n}"
                        )));
                    }
                }
            }
            Ok("exact".into())
        });
    }
    r.run(s, "genus filter on (3,3,3,3)", || {
        let p: ValencyProfile = "3,3,3,3".parse()?;
        let n = enumerate_count(&p, 1, opts)?;
        (n == 4536)
            .then(|| "4536".to_string())
            .ok_or_else(|| Error::Identity(format!("{n}")))
    });
}

fn nu(r: &mut Report, genus_max: usize) {
    let s = Suite::Nu;
    for g in (2..=genus_max.max(2)).rev() {
        let fam = r_polynomials(g);
        r.run(
            s,
            format!("r_{{{g},ℓ}}(ν) polynomial, degree ≤ {}", 3 * g - 3),
            || {
                let fam = borrow(&fam)?;
                let c = painleve_constants(g).get(g).clone();
                let gi = g as i64;
                let top = fam.get(5 * gi - 5);
                let mut expect = vec![Rational::zero(); 3 * g - 2];
                expect[3 * g - 3] =
                    c / (Pow::pow(int(12), g as i32) * int((5 * gi - 3) * (5 * gi - 5)));
                if top != crate::exact::Poly::new(expect) {
                    return Err(Error::Identity(format!("r_{{g,5g−5}} = {top}")));
                }
                Ok(format!(
                    "sampled at ν = {:?}, confirmed at {:?}",
                    fam.samples, fam.verified_at
                ))
            },
        );
        r.run(s, format!("r_{{{g},ℓ}}(2) equals the b=4 q-form"), || {
            let fam = borrow(&fam)?;
            let quad = solve(ModelSpec::new(4, g, 48)?)?;
            let form = fit_ansatz(&quad, g, Variable::QQuad)?;
            for (l, p) in &fam.polynomials {
                same(&p.eval(&int(2)), &form.coefficient(*l), &format!("ℓ = {l}"))?;
            }
            Ok("exact".into())
        });
        r.run(s, format!("S_{{{g},k}}(ν) degrees and counts"), || {
            let fam = borrow(&fam)?;
            let ks: &[usize] = if g == 2 { &[1, 2] } else { &[1] };
            for &k in ks {
                let sp = s_polynomial(&fam, k)?;
                for nu in 2..=4u32 {
                    let base =
                        crate::solver::even_genus0_constant(nu) / int(nu as i64 * (nu as i64 + 1));
                    let n = Pow::pow(base, k as i32) * sp.eval(&int(nu as i64));
                    let c = count_from_series(Model::from_nu(nu)?, g, k)?.count;
                    same(
                        &n,
                        &Rational::from_integer(c),
                        &format!("k = {k}, ν = {nu}"),
                    )?;
                }
            }
            Ok("deg 3g−3+3k; specializations match".into())
        });
    }
    r.run(s, "Q_{g,k}(ν) degrees and direct values, g = 1..2", || {
        for g in 1..=genus_max.max(2) {
            let t = t_polynomials(g)?;
            for k in 1..=2 {
                let q = q_polynomial(&t, k)?;
                for nu in 2..=3u32 {
                    same(
                        &q.eval(&int(nu as i64)),
                        &q_numeric(nu, g, k)?,
                        &format!("g = {g}, k = {k}, ν = {nu}"),
                    )?;
                }
            }
        }
        Ok("deg 3g−1+k; specializations match".into())
    });
}
