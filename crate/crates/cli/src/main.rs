mod config;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use angulata::counts::{
    count_binomial, grid_k, to_csv, to_json, triangulation_grid, BinomialForm, CountEngine,
    MapCountRecord, TriangulationGrid, SCHEMA_VERSION,
};
use angulata::exact::fmt_rational;
use angulata::free_energy::{closed_form, fit_ansatz, AnsatzForm, ClosedForm, Variable};
use angulata::oracle::{enumerate, oracle_record, OracleOptions, OracleResult, ValencyProfile};
use angulata::painleve::{painleve_constants, PainleveTable};
use angulata::solver::{Model, ModelSpec};
use angulata::verify::{self, Report, Selection, VerifyOptions};
use angulata::Error;

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "angulata",
    version,
    about = "Exact counts of b-angulations of closed oriented surfaces"
)]
struct Cli {
    /// key=value file with defaults for the options below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// write to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    genus_cap: Option<usize>,
    /// x-order of the string solution used for fitting
    #[arg(long, global = true)]
    x_order: Option<i64>,
    /// largest total valence handed to the oracle
    #[arg(long, global = true)]
    oracle_cap: Option<usize>,
    /// oracle threads (also ANGULATA_WORKERS)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map counts n_g(b^k)
    Counts(CountsArgs),
    /// Closed form of F_g in one of its variables
    FreeEnergy(FreeEnergyArgs),
    /// Run invariant suites
    Verify(VerifyArgs),
    /// Brute-force genus histogram of a valency profile
    Oracle(OracleArgs),
    /// Painlevé I constants C_0..C_gmax
    Painleve(PainleveArgs),
}

#[derive(Args, Debug)]
#[group(id = "valence", required = true, multiple = false)]
struct ModelArgs {
    /// vertex valence (3 or even)
    #[arg(long, group = "valence")]
    b: Option<u32>,
    /// half the valence, b = 2ν
    #[arg(long, group = "valence")]
    nu: Option<u32>,
}

impl ModelArgs {
    fn model(&self) -> angulata::Result<Model> {
        match (self.b, self.nu) {
            (Some(b), None) => Model::from_valence(b),
            (None, Some(nu)) => Model::from_nu(nu),
            _ => Err(Error::InvalidInput("give exactly one of --b, --nu".into())),
        }
    }
}

#[derive(Args, Debug)]
struct CountsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    g: Option<usize>,
    /// number of vertices
    #[arg(long, conflicts_with_all = ["k_max", "d", "table_1"])]
    k: Option<usize>,
    /// all k = 1..=k_max
    #[arg(long, conflicts_with_all = ["d", "table_1"])]
    k_max: Option<usize>,
    /// b = 3 only: k = 4g − 4 + 2d
    #[arg(long, conflicts_with = "table_1")]
    d: Option<usize>,
    /// the b = 3 grid g = 0..min(genus-cap, 4), d = 1..5
    #[arg(long)]
    table_1: bool,
    /// cross-check against the binomial sums and, within the cap, the oracle
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Debug)]
struct FreeEnergyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    g: usize,
    /// w, p, q, partial, or a full variable name
    #[arg(long)]
    var: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// all, toda, ansatz, painleve, oracle or nu
    #[arg(long, default_value = "all")]
    suite: String,
    /// largest genus for the ν-polynomial suite
    #[arg(long, default_value_t = 2)]
    nu_genus_max: usize,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// comma-separated vertex valences, e.g. 3,3,3,3
    #[arg(long)]
    profile: String,
    #[arg(long)]
    genus: Option<usize>,
    /// also walk disconnected gluings (reported separately)
    #[arg(long)]
    include_disconnected: bool,
}

#[derive(Args, Debug)]
struct PainleveArgs {
    #[arg(long, default_value_t = 10)]
    gmax: usize,
}

enum Failure {
    /// a cross-check or suite failed; the output was still written
    Verification,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::InvalidInput(msg.into()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted(_) => 3,
        Error::InvalidInput(_) => 4,
        Error::FitResidual { .. } | Error::InsufficientSurplus { .. } | Error::Identity(_) => 2,
        _ => 1,
    }
}

fn config(cli: &Cli) -> Outcome<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.output.is_some() {
        cfg.output = cli.output.clone();
    }
    for (flag, v) in [
        ("genus-cap", cli.genus_cap),
        ("oracle-cap", cli.oracle_cap),
        ("workers", cli.workers),
    ] {
        if v == Some(0) {
            return Err(bad(format!("--{flag} must be positive")));
        }
    }
    cfg.genus_cap = cli.genus_cap.unwrap_or(cfg.genus_cap);
    cfg.oracle_cap = cli.oracle_cap.unwrap_or(cfg.oracle_cap);
    cfg.workers = cli.workers.or(cfg.workers);
    if let Some(x) = cli.x_order {
        if x <= 0 {
            return Err(bad("--x-order must be positive"));
        }
        cfg.x_order = Some(x);
    }
    Ok(cfg)
}

fn oracle_options(cfg: &RunConfig) -> OracleOptions {
    OracleOptions {
        cap: cfg.oracle_cap,
        workers: cfg.workers,
        ..OracleOptions::default()
    }
}

fn engine(model: Model, genus: usize, cfg: &RunConfig) -> Outcome<CountEngine> {
    Ok(match cfg.x_order {
        Some(x) => CountEngine::new(ModelSpec::for_model(model, genus, x)?)?,
        None => CountEngine::planned(model, genus)?,
    })
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn records_out(records: &[MapCountRecord], format: Format) -> String {
    match format {
        Format::Json => json_text(&to_json(records)),
        Format::Csv => to_csv(records),
        Format::Text => records
            .iter()
            .map(|r| format!("n_{}({}^{}) = {}\n", r.g, r.b, r.k, r.count))
            .collect(),
    }
}

fn table_out(t: &TriangulationGrid, format: Format) -> String {
    match format {
        Format::Json => {
            let cells: Vec<Value> = t
                .records
                .iter()
                .map(|(g, d, r)| json!({"g": g, "d": d, "k": r.k, "count": r.count.to_string()}))
                .collect();
            json_text(&json!({"schema_version": SCHEMA_VERSION, "grid": cells}))
        }
        Format::Csv => {
            let mut s = String::from("g,d,k,count\n");
            for (g, d, r) in &t.records {
                let _ = writeln!(s, "{g},{d},{},{}", r.k, r.count);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let gmax = t.records.iter().map(|r| r.0).max().unwrap_or(0);
            let dmax = t.records.iter().map(|r| r.1).max().unwrap_or(0);
            let w = t
                .records
                .iter()
                .map(|r| r.2.count.to_string().len())
                .max()
                .unwrap_or(1)
                + 2;
            let _ = writeln!(
                s,
                "g\\d{}",
                (1..=dmax).map(|d| format!("{d:>w$}")).collect::<String>()
            );
            for g in 0..=gmax {
                let row: String = (1..=dmax).map(|d| format!("{:>w$}", t.get(g, d))).collect();
                let _ = writeln!(s, "{g:<3}{row}");
            }
            s
        }
    }
}

fn cmd_counts(a: &CountsArgs, cfg: &RunConfig) -> Outcome<(String, bool)> {
    let model = a.model.model()?;
    if a.table_1 {
        if model != Model::Tri {
            return Err(bad("--table-1 needs --b 3"));
        }
        let gmax = cfg.genus_cap.min(4);
        let mut e = engine(model, gmax, cfg)?;
        let t = triangulation_grid(&mut e, gmax, 5)?;
        let ok = !a.verify || t.mismatches().is_empty();
        return Ok((table_out(&t, cfg.format), ok));
    }
    let g =
        a.g.ok_or_else(|| bad("--g is required without --table-1"))?;
    let ks: Vec<usize> = match (a.k, a.k_max, a.d) {
        (Some(k), None, None) => vec![k],
        (None, Some(m), None) => (1..=m).collect(),
        (None, None, Some(d)) => {
            if model != Model::Tri {
                return Err(bad("--d is defined for b = 3 only"));
            }
            vec![grid_k(g, d).ok_or_else(|| bad(format!("4g − 4 + 2d ≤ 0 for g = {g}, d = {d}")))?]
        }
        _ => return Err(bad("give one of --k, --k-max, --d")),
    };
    if ks.contains(&0) {
        return Err(bad("k must be positive"));
    }
    let mut e = engine(model, g, cfg)?;
    let mut records = Vec::new();
    let mut ok = true;
    for &k in &ks {
        let r = e.count(g, k)?;
        if a.verify {
            ok &= cross_check(&mut e, &r, cfg)?;
        }
        records.push(r);
    }
    Ok((records_out(&records, cfg.format), ok))
}

/// Recomputes a record along the other paths; mismatches go to stderr.
fn cross_check(e: &mut CountEngine, r: &MapCountRecord, cfg: &RunConfig) -> Outcome<bool> {
    let mut others = Vec::new();
    if r.g >= 2 {
        others.push(count_binomial(e, r.g, r.k, BinomialForm::QForm)?);
        if matches!(e.model(), Model::Tri | Model::Even { nu: 2 }) {
            others.push(count_binomial(e, r.g, r.k, BinomialForm::PForm)?);
        }
    }
    if r.b as usize * r.k <= cfg.oracle_cap {
        let opts = OracleOptions {
            genus: Some(r.g),
            ..oracle_options(cfg)
        };
        others.push(oracle_record(r.b, r.g, r.k, &opts)?);
    }
    let mut ok = true;
    for o in others {
        if o.count != r.count {
            eprintln!(
                "mismatch n_{}({}^{}): {} {} vs {} {}",
                r.g, r.b, r.k, r.provenance, r.count, o.provenance, o.count
            );
            ok = false;
        }
    }
    Ok(ok)
}

fn ansatz_out(f: &AnsatzForm, format: Format) -> String {
    match format {
        Format::Json => json_text(&serde_json::to_value(f).expect("form serializes")),
        Format::Csv => {
            let mut s = String::from("exponent,coefficient\n");
            for (e, c) in &f.coefficients {
                let _ = writeln!(s, "{e},{}", fmt_rational(c));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "F_{} for b = {} in {}\n",
                f.genus,
                f.model.valence(),
                f.variable
            );
            for (e, c) in &f.coefficients {
                let _ = writeln!(s, "  [{e}] {}", fmt_rational(c));
            }
            if f.bernoulli_term {
                s.push_str("  plus the Bernoulli term\n");
            }
            s
        }
    }
}

fn closed_out(f: &ClosedForm, format: Format) -> String {
    match format {
        Format::Json => json_text(&serde_json::to_value(f).expect("form serializes")),
        Format::Csv => {
            let mut s = String::from("coefficient,argument\n");
            for t in &f.terms {
                let _ = writeln!(s, "{},{}", fmt_rational(&t.coefficient), t.argument);
            }
            s
        }
        Format::Text => format!("{f}\n"),
    }
}

fn cmd_free_energy(a: &FreeEnergyArgs, cfg: &RunConfig) -> Outcome<String> {
    let model = a.model.model()?;
    if a.g < 2 {
        if a.var.is_some() {
            return Err(bad(
                "--var applies to g ≥ 2; genus 0 and 1 have one closed form",
            ));
        }
        return Ok(closed_out(&closed_form(model, a.g)?, cfg.format));
    }
    let variable = match &a.var {
        Some(v) => Variable::for_model(model, v)?,
        None => angulata::counts::primary_variable(model),
    };
    let e = engine(model, a.g, cfg)?;
    let form = fit_ansatz(e.solution(), a.g, variable)?;
    Ok(ansatz_out(&form, cfg.format))
}

fn report_out(r: &Report, format: Format) -> String {
    match format {
        Format::Json => json_text(&json!({"passed": r.passed(), "checks": r.checks})),
        Format::Csv => {
            let mut s = String::from("suite,check,passed,detail\n");
            for c in &r.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},\"{}\"",
                    c.suite,
                    c.name,
                    c.passed,
                    c.detail.replace('"', "\"\"")
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &r.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{tag} {}/{}: {}", c.suite, c.name, c.detail);
            }
            let failed = r.failures().count();
            let _ = writeln!(s, "{} checks, {failed} failed", r.checks.len());
            s
        }
    }
}

fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig) -> Outcome<(String, bool)> {
    let selection: Selection = a.suite.parse()?;
    let opts = VerifyOptions {
        oracle: oracle_options(cfg),
        nu_genus_max: a.nu_genus_max,
    };
    let report = verify::run(selection, &opts);
    Ok((report_out(&report, cfg.format), report.passed()))
}

fn oracle_out(r: &OracleResult, format: Format) -> String {
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(r).expect("result serializes");
            // wall time would make the output non-reproducible
            if let Some(m) = v.as_object_mut() {
                m.remove("elapsed_ms");
            }
            json_text(&v)
        }
        Format::Csv => {
            let mut s = String::from("genus,count\n");
            for (g, n) in &r.histogram.counts {
                let _ = writeln!(s, "{g},{n}");
            }
            s
        }
        Format::Text => {
            let mut s = format!("profile {}\n", r.profile);
            for (g, n) in &r.histogram.counts {
                let _ = writeln!(s, "  genus {g}: {n}");
            }
            if let Some(d) = r.disconnected {
                let _ = writeln!(s, "  disconnected: {d}");
            }
            if let Some(w) = &r.warning {
                let _ = writeln!(s, "  warning: {w}");
            }
            s
        }
    }
}

fn cmd_oracle(a: &OracleArgs, cfg: &RunConfig) -> Outcome<String> {
    let profile: ValencyProfile = a.profile.parse()?;
    let opts = OracleOptions {
        genus: a.genus,
        include_disconnected: a.include_disconnected,
        ..oracle_options(cfg)
    };
    Ok(oracle_out(&enumerate(&profile, &opts)?, cfg.format))
}

fn painleve_out(t: &PainleveTable, format: Format) -> String {
    match format {
        Format::Json => json_text(&serde_json::to_value(t).expect("table serializes")),
        Format::Csv => {
            let mut s = String::from("g,C\n");
            for (g, c) in t.values().iter().enumerate() {
                let _ = writeln!(s, "{g},{}", fmt_rational(c));
            }
            s
        }
        Format::Text => t
            .values()
            .iter()
            .enumerate()
            .map(|(g, c)| format!("C_{g} = {}\n", fmt_rational(c)))
            .collect(),
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    let cfg = config(cli)?;
    let (text, ok) = match &cli.command {
        Command::Counts(a) => cmd_counts(a, &cfg)?,
        Command::FreeEnergy(a) => (cmd_free_energy(a, &cfg)?, true),
        Command::Verify(a) => cmd_verify(a, &cfg)?,
        Command::Oracle(a) => (cmd_oracle(a, &cfg)?, true),
        Command::Painleve(a) => (painleve_out(&painleve_constants(a.gmax), cfg.format), true),
    };
    match &cfg.output {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| bad(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            let code = exit_code(&e);
            eprintln!("{}", json!({"error": e.to_string(), "exit_code": code}));
            ExitCode::from(code)
        }
    }
}
