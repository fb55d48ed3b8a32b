//! Command-line front end. [`run`] parses arguments and returns the exit
//! status with the text destined for stdout and stderr, so the binary stays
//! a thin wrapper and tests can drive commands in-process.

use std::ffi::OsString;
use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{GenKind, NcPoly};
use crate::brackets::{
    check_cyclic_antisymmetry, check_moment_map, check_quasi_poisson, check_typing, qp_anomaly, triple_bracket, Bundle,
    BracketError, CheckReport, MomentCheckMode,
};
use crate::catalog::{self, CatalogError};
use crate::fusion::{fuse, fuse_algebra, kappa_check};
use crate::json::{self as dj, JsonError};
use crate::representation::{
    equivariance_check, jacobiator_check, moment_map_numeric_check, qp_rep_check, trivector_check, DimVector, TupleSelection,
};
use crate::suite::{self, SuiteConfig};

pub const PASS: i32 = 0;
pub const FAIL: i32 = 1;
pub const ERROR: i32 = 2;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "dqp", version, about = "Exact checks for double quasi-Poisson brackets")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List catalog families or build one as a bundle.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Typing, cyclic antisymmetry, quasi-Poisson and (if present) moment-map checks.
    Check {
        #[command(flatten)]
        source: Source,
        /// Random word pairs for the antisymmetry check.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Dimension vector for numeric moment-map checks, e.g. "1:2,2:1"; default all ones.
        #[arg(long)]
        dim: Option<String>,
    },
    /// Fuse idempotents, one `--step kept:absorbed` at a time.
    Fuse {
        /// Fusion request JSON: {algebra, bracket, moment_map?, kept, absorbed, steps?}.
        #[arg(long, conflicts_with_all = ["bundle", "catalog", "algebra"])]
        request: Option<String>,
        #[command(flatten)]
        source: Source,
        #[arg(long = "step", value_name = "KEPT:ABSORBED")]
        steps: Vec<String>,
        /// Re-check quasi-Poisson and κ after every step.
        #[arg(long)]
        check: bool,
    },
    /// Identities on representation spaces.
    #[command(alias = "rep-check")]
    Rep {
        #[command(flatten)]
        source: Source,
        /// Dimension vector, e.g. "1:2,2:1", or "2" for one idempotent.
        #[arg(long)]
        dim: String,
        #[arg(long, value_enum, default_value_t = RepMode::Qp)]
        mode: RepMode,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sampled index tuples; default: exhaustive up to N = 3, else 256.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run the acceptance matrix.
    Suite {
        /// Minimum sample sizes that meet every criterion.
        #[arg(long)]
        quick: bool,
        /// Only rows whose name contains this, or a criterion number.
        #[arg(long)]
        row: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        verbose: bool,
    },
    /// Print the triple bracket of three elements and its anomaly residual.
    Triple {
        #[command(flatten)]
        source: Source,
        /// Elements as words ("t s^-1") or JSON term lists.
        a: String,
        b: String,
        c: String,
    },
    /// Pretty-print a bundle, or a tensor file against a bundle's algebra.
    Emit {
        #[command(flatten)]
        source: Source,
        /// JSON list of {coeff, word} / {coeff, w1, w2} / {coeff, w1, w2, w3} terms.
        #[arg(long)]
        tensor: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Build {
        family: String,
        #[arg(long, default_value = "{}")]
        params: String,
        /// Skip the coefficient constraints.
        #[arg(long)]
        unchecked: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepMode {
    Jacobi,
    Qp,
    Moment,
    Trivector,
    Equivariance,
}

/// Where the bundle comes from: a bundle file, a catalog entry, or separate files.
#[derive(Args, Debug, Default)]
pub struct Source {
    /// Bundle JSON file ("-" for stdin).
    #[arg(long)]
    pub bundle: Option<String>,
    #[arg(long, conflicts_with = "bundle")]
    pub catalog: Option<String>,
    #[arg(long, requires = "catalog")]
    pub params: Option<String>,
    #[arg(long, conflicts_with_all = ["bundle", "catalog"], requires = "bracket")]
    pub algebra: Option<String>,
    #[arg(long, requires = "algebra")]
    pub bracket: Option<String>,
    #[arg(long = "moment-map", requires = "algebra")]
    pub moment_map: Option<String>,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A structural or parameter problem; always exit status 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        CliError(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError(e.to_string())
    }
}

impl From<BracketError> for CliError {
    fn from(e: BracketError) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError(format!("{path}: {e}")))
    }
}

fn parse_json(text: &str, what: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError(format!("{what}: {}", JsonError::from(e))))
}

impl Source {
    pub fn load(&self) -> CliResult<Bundle> {
        if let Some(p) = &self.bundle {
            return dj::bundle_from_str(&read_input(p)?).map_err(|e| CliError(format!("{p}: {e}")));
        }
        if let Some(f) = &self.catalog {
            let params = parse_json(self.params.as_deref().unwrap_or("{}"), "--params")?;
            return Ok(catalog::build(f, &params)?);
        }
        if let (Some(a), Some(b)) = (&self.algebra, &self.bracket) {
            let alg = dj::algebra_from_str(&read_input(a)?).map_err(|e| CliError(format!("{a}: {e}")))?;
            let mm = match &self.moment_map {
                Some(m) => {
                    let repr: dj::MomentMapRepr = serde_json::from_str(&read_input(m)?).map_err(|e| CliError(format!("{m}: {}", JsonError::from(e))))?;
                    Some(dj::moment_map_from_repr(&alg, &repr).map_err(|e| CliError(format!("{m}: {e}")))?)
                }
                None => None,
            };
            let br = dj::bracket_from_str(alg, &read_input(b)?).map_err(|e| CliError(format!("{b}: {e}")))?;
            return Ok(Bundle::new(br, mm));
        }
        Err(CliError("no input: give --bundle, --catalog or --algebra with --bracket".into()))
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn status_of(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(|r| r.passed) {
        PASS
    } else {
        FAIL
    }
}

fn report_doc(reports: &[CheckReport]) -> Value {
    json!({"passed": reports.iter().all(|r| r.passed), "reports": reports})
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { status: ERROR, stdout: String::new(), stderr: text }
            } else {
                Outcome { status: PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    let out = match execute(&cli.command) {
        Ok(o) => o,
        Err(CliError(msg)) => Outcome { status: ERROR, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    match &cli.output {
        Some(path) if out.status != ERROR => match fs::write(path, &out.stdout) {
            Ok(()) => Outcome { stdout: String::new(), ..out },
            Err(e) => Outcome { status: ERROR, stdout: String::new(), stderr: format!("error: {path}: {e}\n") },
        },
        _ => out,
    }
}

fn ok(status: i32, stdout: String) -> CliResult<Outcome> {
    Ok(Outcome { status, stdout, stderr: String::new() })
}

fn execute(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Catalog { action } => cmd_catalog(action),
        Command::Check { source, samples, seed, trials, dim } => cmd_check(source, *samples, *seed, *trials, dim.as_deref()),
        Command::Fuse { request, source, steps, check } => cmd_fuse(request.as_deref(), source, steps, *check),
        Command::Rep { source, dim, mode, trials, seed, samples } => cmd_rep(source, dim, *mode, *trials, *seed, *samples),
        Command::Suite { quick, row, seed, json, verbose } => {
            let cfg = SuiteConfig { quick: *quick, seed: *seed, filter: row.clone() };
            let outcomes = suite::run(&cfg).map_err(CliError)?;
            let status = if outcomes.iter().all(|o| o.passed) { PASS } else { FAIL };
            let text = if *json { pretty(&outcomes) } else { suite::render(&outcomes, *verbose) };
            ok(status, text)
        }
        Command::Triple { source, a, b, c } => cmd_triple(source, a, b, c),
        Command::Emit { source, tensor } => cmd_emit(source, tensor.as_deref()),
    }
}

fn cmd_catalog(action: &CatalogAction) -> CliResult<Outcome> {
    match action {
        CatalogAction::List { json } => {
            if *json {
                let v: Vec<Value> = catalog::families()
                    .iter()
                    .map(|f| {
                        let params: serde_json::Map<String, Value> =
                            f.params.iter().map(|(k, d)| (k.to_string(), Value::String(d.to_string()))).collect();
                        json!({"name": f.name, "summary": f.summary, "params": params})
                    })
                    .collect();
                return ok(PASS, pretty(&v));
            }
            let mut out = String::new();
            for f in catalog::families() {
                out.push_str(&format!("{}\n  {}\n", f.name, f.summary));
                for (k, d) in f.params {
                    out.push_str(&format!("    {k}: {d}\n"));
                }
            }
            ok(PASS, out)
        }
        CatalogAction::Build { family, params, unchecked } => {
            let p = parse_json(params, "--params")?;
            let b = if *unchecked { catalog::build_unchecked(family, &p)? } else { catalog::build(family, &p)? };
            ok(PASS, pretty(&dj::bundle_to_value(&b)))
        }
    }
}

fn numeric_dims(b: &Bundle, dim: Option<&str>) -> CliResult<DimVector> {
    Ok(match dim {
        Some(d) => DimVector::parse(b.algebra(), d)?,
        None => DimVector::uniform(b.algebra(), 1)?,
    })
}

pub fn check_bundle(b: &Bundle, samples: usize, seed: u64, trials: usize, dim: Option<&str>) -> CliResult<Vec<CheckReport>> {
    let mut reports = vec![check_typing(&b.bracket)];
    if !reports[0].passed {
        return Ok(reports);
    }
    let anti = check_cyclic_antisymmetry(&b.bracket, samples, seed)?;
    let anti_ok = anti.passed;
    reports.push(anti);
    if !anti_ok {
        return Ok(reports);
    }
    reports.push(check_quasi_poisson(&b.bracket)?);
    if let Some(mm) = &b.moment_map {
        let r = match check_moment_map(&b.bracket, mm, &MomentCheckMode::Symbolic) {
            Err(BracketError::DeferToNumeric(_)) => {
                let dims = numeric_dims(b, dim)?;
                check_moment_map(&b.bracket, mm, &MomentCheckMode::Numeric { dims, trials, seed })?
            }
            r => r?,
        };
        reports.push(r);
    }
    Ok(reports)
}

fn cmd_check(source: &Source, samples: usize, seed: u64, trials: usize, dim: Option<&str>) -> CliResult<Outcome> {
    let b = source.load()?;
    let reports = check_bundle(&b, samples, seed, trials, dim)?;
    ok(status_of(&reports), pretty(&report_doc(&reports)))
}

fn parse_step(s: &str) -> CliResult<(String, String)> {
    let (k, a) = s.split_once(':').ok_or_else(|| CliError(format!("--step `{s}`: expected KEPT:ABSORBED")))?;
    Ok((k.trim().to_string(), a.trim().to_string()))
}

fn cmd_fuse(request: Option<&str>, source: &Source, steps: &[String], check: bool) -> CliResult<Outcome> {
    let (mut b, mut all) = match request {
        Some(path) => {
            let text = read_input(path)?;
            let req: dj::FusionRequest =
                serde_json::from_str(&text).map_err(|e| CliError(format!("{path}: {}", JsonError::from(e))))?;
            (req.bundle()?, req.all_steps()?)
        }
        None => (source.load()?, Vec::new()),
    };
    for s in steps {
        all.push(parse_step(s)?);
    }
    if all.is_empty() {
        return Err(CliError("no fusion step given".into()));
    }
    let mut reports = Vec::new();
    for (k, a) in &all {
        let ctx = fuse_algebra(b.algebra(), k, a)?;
        let (_, br, mm) = fuse(&b.bracket, b.moment_map.as_ref(), k, a)?;
        if check {
            let mut qp = check_quasi_poisson(&br)?;
            qp.name = format!("quasi-poisson after fusing {a} onto {k}");
            let (mut kp, _) = kappa_check(&ctx, &b.bracket)?;
            kp.name = format!("kappa after fusing {a} onto {k}");
            reports.push(qp);
            reports.push(kp);
        }
        b = Bundle::new(br, mm);
    }
    let doc = if check {
        json!({"bundle": dj::bundle_to_value(&b), "passed": reports.iter().all(|r| r.passed), "reports": reports})
    } else {
        dj::bundle_to_value(&b)
    };
    ok(status_of(&reports), pretty(&doc))
}

fn cmd_rep(source: &Source, dim: &str, mode: RepMode, trials: usize, seed: u64, samples: Option<usize>) -> CliResult<Outcome> {
    let b = source.load()?;
    let dims = DimVector::parse(b.algebra(), dim)?;
    let sel = match samples {
        Some(count) => TupleSelection::Sampled { count, seed },
        None => TupleSelection::auto(&dims, seed),
    };
    let rep = match mode {
        RepMode::Jacobi => jacobiator_check(&b.bracket, &dims, &sel)?,
        RepMode::Qp => qp_rep_check(&b.bracket, &dims, &sel)?,
        RepMode::Trivector => trivector_check(&b.bracket, &dims, &sel)?,
        RepMode::Equivariance => equivariance_check(&b.bracket, &dims)?,
        RepMode::Moment => {
            let mm = b.moment_map.as_ref().ok_or_else(|| CliError("the bundle has no moment map".into()))?;
            moment_map_numeric_check(&b.bracket, mm, &dims, trials, seed)?
        }
    };
    let reports = [rep];
    ok(status_of(&reports), pretty(&report_doc(&reports)))
}

fn cmd_triple(source: &Source, a: &str, b: &str, c: &str) -> CliResult<Outcome> {
    let bundle = source.load()?;
    let alg = bundle.algebra();
    let elem = |s: &str, name: &str| -> CliResult<NcPoly> {
        let v = if s.trim_start().starts_with('[') { parse_json(s, name)? } else { Value::String(s.to_string()) };
        Ok(dj::element_from_value(alg, &v, name)?)
    };
    let (x, y, z) = (elem(a, "a")?, elem(b, "b")?, elem(c, "c")?);
    let t = triple_bracket(&bundle.bracket, &x, &y, &z)?;
    let anomaly = qp_anomaly(alg, &x, &y, &z);
    let diff = &t - &anomaly;
    let doc = json!({
        "triple": dj::t3_to_terms(alg, &t),
        "anomaly": dj::t3_to_terms(alg, &anomaly),
        "residual": dj::t3_to_terms(alg, &diff),
        "text": alg.fmt_t3(&t),
    });
    ok(PASS, pretty(&doc))
}

fn cmd_emit(source: &Source, tensor: Option<&str>) -> CliResult<Outcome> {
    let b = source.load()?;
    let alg = b.algebra();
    if let Some(path) = tensor {
        let v = parse_json(&read_input(path)?, path)?;
        let first = v.as_array().and_then(|xs| xs.first()).cloned().unwrap_or(Value::Null);
        let text = if first.get("w3").is_some() {
            let terms: Vec<dj::Tensor3Term> = serde_json::from_value(v).map_err(|e| CliError(format!("{path}: {e}")))?;
            alg.fmt_t3(&dj::t3_from_terms(alg, &terms, path)?)
        } else if first.get("w1").is_some() {
            let terms: Vec<dj::Tensor2Term> = serde_json::from_value(v).map_err(|e| CliError(format!("{path}: {e}")))?;
            alg.fmt_t2(&dj::t2_from_terms(alg, &terms, path)?)
        } else {
            let terms: Vec<dj::PolyTerm> = serde_json::from_value(v).map_err(|e| CliError(format!("{path}: {e}")))?;
            alg.fmt_poly(&dj::poly_from_terms(alg, &terms, path)?)
        };
        return ok(PASS, format!("{text}\n"));
    }
    ok(PASS, render_bundle(&b))
}

/// Human-readable bundle: idempotents, generators, nonzero bracket pairs, Φ.
pub fn render_bundle(b: &Bundle) -> String {
    let alg = b.algebra();
    let mut out = format!("idempotents: {}\n", alg.idempotents().join(", "));
    for g in alg.generators() {
        let kind = match &g.kind {
            GenKind::Plain => String::new(),
            GenKind::Invertible => "  invertible".into(),
            GenKind::Nilpotent(k) => format!("  nilpotent {k}"),
            GenKind::Cyclic(n) => format!("  cyclic {n}"),
            GenKind::FormalInverse(d) => format!("  inverse of {}", alg.fmt_poly(d)),
        };
        out.push_str(&format!("  {}: {} -> {}{kind}\n", g.name, alg.label(g.tail), alg.label(g.head)));
    }
    for (&(g, h), v) in b.bracket.values() {
        if !v.is_zero() {
            out.push_str(&format!("⟪{},{}⟫ = {}\n", alg.generator(g).name, alg.generator(h).name, alg.fmt_t2(v)));
        }
    }
    if let Some(mm) = &b.moment_map {
        for (s, p) in mm.components().iter().enumerate() {
            out.push_str(&format!("Φ_{} = {}\n", alg.label(s), alg.fmt_poly(p)));
        }
    }
    out
}
