//! The acceptance matrix. Each row is a batch of exact checks; rows run on
//! separate threads and are reported in declaration order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Display, Write as _};
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{tau, AlgebraSpec, Cycle3, Letter, NcPoly};
use crate::brackets::{
    check_cyclic_antisymmetry, check_moment_map, check_quasi_poisson, direct_sum_bundles, triple_bracket_with, Bundle,
    BracketError, CheckReport, MomentCheckMode, MomentMapSpec,
};
use crate::catalog::{self, QuiverSpec, SurfaceSpec};
use crate::fusion::{fuse_algebra, fused_bracket, kappa_check, table_check, FusionType};
use crate::representation::{cp_const, cp_mul, cp_var, jacobiator_check, qp_rep_check, CoordPoly, DimVector, RepSpace, TupleSelection};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Minimum sample sizes that meet the criteria; otherwise four times as many.
    pub quick: bool,
    pub seed: u64,
    /// Substring of a row name, or a criterion number.
    pub filter: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { quick: false, seed: 42, filter: None }
    }
}

impl SuiteConfig {
    fn property_cases(&self) -> usize {
        if self.quick {
            500
        } else {
            2000
        }
    }

    fn rep_samples(&self) -> usize {
        if self.quick {
            200
        } else {
            800
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowOutcome {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub lines: Vec<String>,
}

pub struct Row {
    pub criterion: u8,
    pub name: &'static str,
    pub summary: &'static str,
    run: fn(&SuiteConfig) -> Log,
}

impl Row {
    pub fn matches(&self, filter: &str) -> bool {
        self.name.contains(filter) || self.criterion.to_string() == filter
    }
}

#[derive(Default)]
struct Log {
    lines: Vec<String>,
    checks: usize,
    failures: usize,
}

impl Log {
    fn check(&mut self, what: impl Display, ok: bool, detail: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if ok {
            self.lines.push(format!("ok   {what}"));
        } else {
            self.failures += 1;
            self.lines.push(format!("FAIL {what}: {}", detail()));
        }
        ok
    }

    fn report<E: Display>(&mut self, what: impl Display, r: Result<CheckReport, E>) -> bool {
        match r {
            Ok(rep) => {
                let first = rep.witnesses.first().map(|w| format!("{} -> {}", w.inputs.join(", "), w.residual));
                self.check(format!("{what} [{} {}]", rep.checked, rep.name), rep.passed, || {
                    format!("{} witnesses, first {}", rep.witnesses.len(), first.unwrap_or_default())
                })
            }
            Err(e) => self.check(what, false, || e.to_string()),
        }
    }

    fn error(&mut self, what: impl Display, e: impl Display) {
        self.check(what, false, || e.to_string());
    }
}

const ROWS: &[Row] = &[
    Row {
        criterion: 1,
        name: "classification",
        summary: "one- and two-generator families pass; unit perturbations fail",
        run: classification_row,
    },
    Row {
        criterion: 2,
        name: "fusion-kappa",
        summary: "fused brackets stay quasi-Poisson and κ vanishes on all 20 type classes",
        run: kappa_row,
    },
    Row {
        criterion: 3,
        name: "fusion-table",
        summary: "closed-form fusion terms equal −½Tr(E₁)Tr(E₂) on all 16 type pairs",
        run: table_row,
    },
    Row {
        criterion: 4,
        name: "fused-moment-map",
        summary: "fused moment maps of localized q1 and the surface chains pass",
        run: fused_moment_row,
    },
    Row {
        criterion: 5,
        name: "vdb-quiver",
        summary: "quiver brackets from fused blocks equal the closed form; moment maps pass",
        run: vdb_row,
    },
    Row {
        criterion: 6,
        name: "surface",
        summary: "surface brackets from fused tori and annuli equal the closed form",
        run: surface_row,
    },
    Row {
        criterion: 7,
        name: "representation",
        summary: "Jacobiator and quasi-Poisson identities on representation spaces",
        run: representation_row,
    },
    Row {
        criterion: 8,
        name: "properties",
        summary: "randomized Leibniz, antisymmetry, τ-invariance, confluence and induced-bracket properties",
        run: properties_row,
    },
];

pub fn rows() -> &'static [Row] {
    ROWS
}

/// Runs the selected rows concurrently; the result follows declaration order.
pub fn run(cfg: &SuiteConfig) -> Result<Vec<RowOutcome>, String> {
    let selected: Vec<&Row> = ROWS.iter().filter(|r| cfg.filter.as_deref().is_none_or(|f| r.matches(f))).collect();
    if selected.is_empty() {
        return Err(format!("no suite row matches `{}`", cfg.filter.as_deref().unwrap_or("")));
    }
    let outcomes = thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|row| s.spawn(move || (row.run)(cfg))).collect();
        handles
            .into_iter()
            .zip(&selected)
            .map(|(h, row)| {
                let log = h.join().unwrap_or_else(|_| {
                    let mut l = Log::default();
                    l.error("row", "panicked");
                    l
                });
                RowOutcome {
                    criterion: row.criterion,
                    name: row.name.to_string(),
                    passed: log.failures == 0,
                    checks: log.checks,
                    failures: log.failures,
                    lines: log.lines,
                }
            })
            .collect()
    });
    Ok(outcomes)
}

pub fn run_row(criterion: u8, cfg: &SuiteConfig) -> RowOutcome {
    let cfg = SuiteConfig { filter: Some(criterion.to_string()), ..cfg.clone() };
    run(&cfg).expect("every criterion has a row").remove(0)
}

/// Summary table, followed by the lines of failing rows (all rows when `verbose`).
pub fn render(outcomes: &[RowOutcome], verbose: bool) -> String {
    let mut out = String::new();
    for o in outcomes {
        let _ = writeln!(
            out,
            "{:<2} {:<18} {:<4} {:>5} checks {:>3} failed",
            o.criterion,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.checks,
            o.failures
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(out, "{passed}/{} rows passed", outcomes.len());
    for o in outcomes {
        if verbose || !o.passed {
            let _ = writeln!(out, "\n[{}] {}", o.criterion, o.name);
            for l in &o.lines {
                if verbose || l.starts_with("FAIL") {
                    let _ = writeln!(out, "  {l}");
                }
            }
        }
    }
    out
}

fn describe(family: &str, p: &Value) -> String {
    format!("{family} {p}")
}

fn qp(b: &Bundle) -> Result<CheckReport, BracketError> {
    check_quasi_poisson(&b.bracket)
}

/// Symbolic when possible; with formal inverses, exact evaluation at seeded points.
fn moment(br: &crate::brackets::DoubleBracketSpec, mm: &MomentMapSpec, d: usize, seed: u64) -> Result<CheckReport, BracketError> {
    match check_moment_map(br, mm, &MomentCheckMode::Symbolic) {
        Err(BracketError::DeferToNumeric(_)) => {
            let dims = DimVector::uniform(br.algebra(), d)?;
            check_moment_map(br, mm, &MomentCheckMode::Numeric { dims, trials: 5, seed })
        }
        r => r,
    }
}

struct Fixture {
    group: &'static str,
    family: &'static str,
    params: Value,
}

fn fx(group: &'static str, family: &'static str, params: Value) -> Fixture {
    Fixture { group, family, params }
}

fn classification_fixtures() -> Vec<Fixture> {
    let mut v = vec![
        fx("free1", "free1", json!({"lambda": "0", "mu": "1/2", "nu": "0"})),
        fx("free1", "free1", json!({"lambda": "0", "mu": "-1/2", "nu": "0"})),
        fx("free1", "free1", json!({"lambda": "1", "mu": "0", "nu": "-1/4"})),
        fx("free1", "free1", json!({"lambda": "1", "mu": "1", "nu": "3/4"})),
        fx("free1", "free1", json!({"lambda": "2", "mu": "3/2", "nu": "1"})),
        fx("q1 case 1a", "q1", json!({"case": "1a", "delta": "1"})),
        fx("q1 case 1a", "q1", json!({"case": "1a", "delta": "-1"})),
        fx("q1 case 1a", "q1_fusion", json!({"delta": "-1", "delta_prime": "1"})),
        fx("q1 case 1b", "q1", json!({"case": "1b", "gamma": "0", "phi": "0", "alpha": "1/2"})),
        fx("q1 case 1b", "q1", json!({"case": "1b", "gamma": "2", "phi": "1", "alpha": "3/2"})),
        fx("q1 case 1b", "q1", json!({"case": "1b", "gamma": "1", "phi": "2", "alpha": "-3/2"})),
    ];
    for (group, case) in [("q1 case 2", "2"), ("q1 case 3", "3")] {
        for (d, l) in [("1", "1"), ("-1", "1"), ("1", "-2")] {
            v.push(fx(group, "q1", json!({"case": case, "delta": d, "lambda": l})));
        }
    }
    let free2: [(&'static str, [Value; 2]); 7] = [
        ("free2 case 1", [json!({"case": 1}), json!({"case": 1, "mu": "-1/2", "gamma0": "2", "gamma1": "1", "alpha": "3/2"})]),
        ("free2 case 2", [json!({"case": 2}), json!({"case": 2, "mu": "-1/2", "gamma": "3"})]),
        ("free2 case 3", [json!({"case": 3}), json!({"case": 3, "m": "-1/2"})]),
        ("free2 case 4", [json!({"case": 4}), json!({"case": 4, "m": "-1/2", "mu": "-1/2"})]),
        ("free2 case 5", [json!({"case": 5}), json!({"case": 5, "n": "2", "mu": "-1/2"})]),
        ("free2 case 6", [json!({"case": 6}), json!({"case": 6, "n": "-3"})]),
        ("free2 case 7", [json!({"case": 7}), json!({"case": 7, "n": "2", "nu": "-1"})]),
    ];
    for (group, ps) in free2 {
        for p in ps {
            v.push(fx(group, "free2", p));
        }
    }
    v
}

fn classification_row(cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    let mut perturbed: BTreeMap<&str, usize> = BTreeMap::new();
    for f in classification_fixtures() {
        let label = describe(f.family, &f.params);
        perturbed.entry(f.group).or_default();
        match catalog::build(f.family, &f.params) {
            Ok(b) => {
                log.report(&label, qp(&b));
                log.report(&label, check_cyclic_antisymmetry(&b.bracket, 20, cfg.seed));
            }
            Err(e) => log.error(&label, e),
        }
        let fam = catalog::family(f.family).expect("fixture family exists");
        let Ok(p) = catalog::Params::from_json(&f.params) else { continue };
        if (fam.perturb)(&p).is_none() {
            continue;
        }
        let (key, shifted) = match catalog::perturbation(f.family, &f.params) {
            Ok(x) => x,
            Err(e) => {
                log.error(format!("{label} perturbation"), e);
                continue;
            }
        };
        // A shift that lands on another admissible point is not a perturbation.
        if catalog::build(f.family, &shifted).is_ok() {
            continue;
        }
        let what = format!("{} ({key} + 1) is not quasi-Poisson", describe(f.family, &shifted));
        match catalog::build_unchecked(f.family, &shifted).map_err(|e| e.to_string()).and_then(|b| qp(&b).map_err(|e| e.to_string())) {
            Ok(rep) => {
                log.check(what, !rep.passed, || "still quasi-Poisson".into());
            }
            Err(e) => log.error(what, e),
        }
        *perturbed.entry(f.group).or_default() += 1;
    }
    for (group, n) in perturbed {
        log.check(format!("{group}: {n} perturbed points"), n > 0, || "no admissible perturbation".into());
    }
    log
}

fn relabeled(b: Bundle, label: &str, renames: &[(&str, &str)]) -> Result<Bundle, BracketError> {
    b.with_labels(&[label])?.with_generator_names(renames)
}

/// Multi-idempotent inputs to the fusion rows.
fn fusion_fixtures() -> Vec<(String, Result<Bundle, String>)> {
    let mut out: Vec<(String, Result<Bundle, String>)> = Vec::new();
    let cat = [
        ("q1", json!({"case": "1a", "delta": "1"})),
        ("q1", json!({"case": "1b", "gamma": "2", "phi": "1", "alpha": "3/2"})),
        ("q1", json!({"case": "1b", "alpha": "-1/2", "moment_map": true})),
        ("q1", json!({"case": "2", "delta": "-1", "lambda": "2"})),
        ("q1", json!({"case": "3", "delta": "1", "lambda": "1"})),
        ("q1_fusion", json!({"delta": "1", "delta_prime": "1"})),
        ("vdb_quiver", json!({"vertices": ["1", "2"], "arrows": [["a", "1", "2"]], "weights": {"a": "0"}})),
        (
            "vdb_quiver",
            json!({"vertices": ["0", "1", "2"], "arrows": [["a", "1", "0"], ["b", "2", "0"]], "weights": {"a": "0", "b": "0"}}),
        ),
        (
            "vdb_quiver",
            json!({"vertices": ["1", "2"], "arrows": [["p", "1", "1"], ["r", "1", "2"], ["s", "2", "2"]],
                   "weights": {"p": "0", "r": "0", "s": "0"}}),
        ),
    ];
    for (f, p) in cat {
        out.push((describe(f, &p), catalog::build(f, &p).map_err(|e| e.to_string())));
    }
    let sum = |a: Result<Bundle, String>, b: Result<Bundle, String>| -> Result<Bundle, String> {
        direct_sum_bundles(&a?, &b?).map_err(|e| e.to_string())
    };
    let free2 = catalog::build("free2", &json!({"case": 1})).map_err(|e| e.to_string());
    let free1 = catalog::build("free1", &json!({}))
        .map_err(|e| e.to_string())
        .and_then(|b| relabeled(b, "2", &[("t", "u")]).map_err(|e| e.to_string()));
    out.push(("free2 case 1 ⊕ free1".into(), sum(free2, free1)));
    let torus = catalog::surface(&SurfaceSpec::new(1, 0)).map_err(|e| e.to_string());
    let annulus = catalog::surface(&SurfaceSpec::new(0, 1))
        .map_err(|e| e.to_string())
        .and_then(|b| relabeled(b, "2", &[]).map_err(|e| e.to_string()));
    out.push(("torus ⊕ annulus".into(), sum(torus, annulus)));
    out
}

fn ordered_pairs(alg: &AlgebraSpec) -> Vec<(String, String)> {
    let labels = alg.idempotents();
    let mut out = Vec::new();
    for k in labels {
        for a in labels {
            if k != a {
                out.push((k.clone(), a.clone()));
            }
        }
    }
    out
}

fn kappa_row(_cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    let mut classes: BTreeSet<[FusionType; 3]> = BTreeSet::new();
    for (label, b) in fusion_fixtures() {
        let b = match b {
            Ok(b) => b,
            Err(e) => {
                log.error(&label, e);
                continue;
            }
        };
        log.report(&label, qp(&b));
        for (k, a) in ordered_pairs(b.algebra()) {
            let what = format!("{label} fuse {a} onto {k}");
            let ctx = match fuse_algebra(b.algebra(), &k, &a) {
                Ok(c) => c,
                Err(e) => {
                    log.error(&what, e);
                    continue;
                }
            };
            match fused_bracket(&ctx, &b.bracket) {
                Ok(f) => {
                    log.report(&what, check_quasi_poisson(&f));
                }
                Err(e) => log.error(&what, e),
            }
            match kappa_check(&ctx, &b.bracket) {
                Ok((rep, cl)) => {
                    classes.extend(cl);
                    log.report(&what, Ok::<_, BracketError>(rep));
                }
                Err(e) => log.error(&what, e),
            }
        }
    }
    log.check(format!("{} of 20 type classes reached", classes.len()), classes.len() == 20, || {
        let all: BTreeSet<[FusionType; 3]> = all_classes();
        format!("missing {:?}", all.difference(&classes).collect::<Vec<_>>())
    });
    log
}

fn all_classes() -> BTreeSet<[FusionType; 3]> {
    let mut out = BTreeSet::new();
    for a in FusionType::ALL {
        for b in FusionType::ALL {
            for c in FusionType::ALL {
                let mut k = [a, b, c];
                k.sort();
                out.insert(k);
            }
        }
    }
    out
}

fn table_row(_cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    let mut pairs = BTreeSet::new();
    for (label, b) in fusion_fixtures() {
        let Ok(b) = b else { continue };
        for (k, a) in ordered_pairs(b.algebra()) {
            let what = format!("{label} fuse {a} onto {k}");
            match fuse_algebra(b.algebra(), &k, &a) {
                Ok(ctx) => {
                    let (rep, p) = table_check(&ctx);
                    pairs.extend(p);
                    log.report(what, Ok::<_, BracketError>(rep));
                }
                Err(e) => log.error(what, e),
            }
        }
    }
    log.check(format!("{} of 16 type pairs reached", pairs.len()), pairs.len() == 16, String::new);
    log
}

fn fused_moment_row(cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    for gamma in ["0", "1"] {
        for (delta, alpha) in [("1", "1/2"), ("-1", "-1/2")] {
            let p = json!({"case": "1b", "gamma": gamma, "alpha": alpha, "moment_map": true});
            let label = format!("localized q1 γ={gamma} δ={delta}");
            let b = match catalog::build("q1", &p) {
                Ok(b) => b,
                Err(e) => {
                    log.error(&label, e);
                    continue;
                }
            };
            let mm = b.moment_map.clone().expect("moment map requested");
            log.report(format!("{label} input"), moment(&b.bracket, &mm, 1, cfg.seed));
            for (k, a, mu) in [("1", "2", "1/2"), ("2", "1", "-1/2")] {
                let what = format!("{label} fuse {a} onto {k}");
                let fused = crate::fusion::fuse(&b.bracket, Some(&mm), k, a);
                let (br, fm) = match fused {
                    Ok((_, br, Some(fm))) => (br, fm),
                    Ok(_) => {
                        log.error(&what, "no fused moment map");
                        continue;
                    }
                    Err(e) => {
                        log.error(&what, e);
                        continue;
                    }
                };
                log.report(&what, moment(&br, &fm, 2, cfg.seed));
                let expected = json!({"case": 2, "alpha": alpha, "mu": mu, "gamma": gamma, "moment_map": true});
                let got = Bundle::new(br, Some(fm));
                let renames: &[(&str, &str)] = if gamma == "0" { &[] } else { &[("inv_ts", "inv_a"), ("inv_st", "inv_b")] };
                let cmp = catalog::build("free2", &expected).map_err(|e| e.to_string()).and_then(|e| {
                    let got = relabeled(got, "1", renames).map_err(|e| e.to_string())?;
                    catalog::bundle_differences(&e, &got).map_err(|e| e.to_string())
                });
                match cmp {
                    Ok(d) => {
                        log.check(format!("{what} equals {}", describe("free2", &expected)), d.is_empty(), || d.join("; "));
                    }
                    Err(e) => log.error(&what, e),
                }
            }
        }
    }
    let mut surfaces: Vec<SurfaceSpec> = [(0, 1), (1, 0), (1, 1), (2, 0), (1, 2)].iter().map(|&(g, r)| SurfaceSpec::new(g, r)).collect();
    surfaces.push(SurfaceSpec::weighted(0, 1, vec![2]));
    for spec in surfaces {
        let what = format!("surface chain {}", surface_label(&spec));
        match catalog::surface_by_fusion(&spec) {
            Ok(b) => match &b.moment_map {
                Some(mm) => {
                    log.report(&what, check_moment_map(&b.bracket, mm, &MomentCheckMode::Symbolic));
                }
                None => log.error(&what, "no moment map"),
            },
            Err(e) => log.error(&what, e),
        }
    }
    log
}

fn surface_label(s: &SurfaceSpec) -> String {
    match &s.weights {
        Some(w) => format!("g={} r={} orders={w:?}", s.genus, s.boundaries),
        None => format!("g={} r={}", s.genus, s.boundaries),
    }
}

fn vdb_row(cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    let quivers: Vec<(&str, QuiverSpec)> = vec![
        ("one arrow", QuiverSpec::new(&["1", "2"], &[("a", "1", "2")])),
        ("one loop", QuiverSpec::new(&["1"], &[("a", "1", "1")])),
        ("star a*<b*", QuiverSpec::new(&["0", "1", "2"], &[("a", "1", "0"), ("b", "2", "0")])),
        (
            "star b*<a*",
            QuiverSpec::new(&["0", "1", "2"], &[("a", "1", "0"), ("b", "2", "0")]).with_ordering("0", &["b*", "a*"]),
        ),
    ];
    for (name, q) in quivers {
        for gamma in [0i64, 1] {
            let q = q.clone().with_all_weights(crate::algebra::qi(gamma));
            let label = format!("{name} γ={gamma}");
            let (closed, fused) = match (catalog::vdb_quiver(&q), catalog::vdb_by_fusion(&q)) {
                (Ok(c), Ok(f)) => (c, f),
                (Err(e), _) | (_, Err(e)) => {
                    log.error(&label, e);
                    continue;
                }
            };
            match catalog::bundle_differences(&closed, &fused) {
                Ok(d) => {
                    log.check(format!("{label} fused blocks equal closed form"), d.is_empty(), || d.join("; "));
                }
                Err(e) => log.error(&label, e),
            }
            log.report(&label, qp(&closed));
            let mm = closed.moment_map.as_ref().expect("quivers carry moment maps");
            if gamma == 0 {
                log.report(format!("{label} symbolic"), check_moment_map(&closed.bracket, mm, &MomentCheckMode::Symbolic));
            } else {
                for d in [1, 2] {
                    let r = DimVector::uniform(closed.algebra(), d).and_then(|dims| {
                        check_moment_map(&closed.bracket, mm, &MomentCheckMode::Numeric { dims, trials: 5, seed: cfg.seed })
                    });
                    log.report(format!("{label} α=({d},…)"), r);
                }
            }
        }
    }
    log
}

fn surface_row(_cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    let mut specs: Vec<SurfaceSpec> = [(0, 1), (1, 0), (1, 1), (2, 0)].iter().map(|&(g, r)| SurfaceSpec::new(g, r)).collect();
    specs.push(SurfaceSpec::weighted(0, 1, vec![2]));
    for spec in specs {
        let label = surface_label(&spec);
        let (closed, fused) = match (catalog::surface(&spec), catalog::surface_by_fusion(&spec)) {
            (Ok(c), Ok(f)) => (c, f),
            (Err(e), _) | (_, Err(e)) => {
                log.error(&label, e);
                continue;
            }
        };
        match catalog::bundle_differences(&closed, &fused) {
            Ok(d) => {
                log.check(format!("{label} fused blocks equal closed form"), d.is_empty(), || d.join("; "));
            }
            Err(e) => log.error(&label, e),
        }
        log.report(&label, qp(&closed));
        let mm = closed.moment_map.as_ref().expect("surfaces carry moment maps");
        log.report(&label, check_moment_map(&closed.bracket, mm, &MomentCheckMode::Symbolic));
    }
    log
}

fn representation_row(cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    let inputs: Vec<(&str, Result<Bundle, String>)> = vec![
        ("nilpotent_free1 k=3", catalog::nilpotent_free1(3, &crate::algebra::half()).map_err(|e| e.to_string())),
        ("free2 case 2", catalog::build("free2", &json!({"case": 2})).map_err(|e| e.to_string())),
        ("fused nilpotent sum [3,3]", catalog::nilpotent_sum_by_fusion(&[3, 3]).map_err(|e| e.to_string())),
    ];
    for (name, b) in inputs {
        let b = match b {
            Ok(b) => b,
            Err(e) => {
                log.error(name, e);
                continue;
            }
        };
        for n in [2usize, 3] {
            let sel = if n == 2 {
                TupleSelection::Exhaustive
            } else {
                TupleSelection::Sampled { count: cfg.rep_samples(), seed: cfg.seed }
            };
            let dims = match DimVector::uniform(b.algebra(), n) {
                Ok(d) => d,
                Err(e) => {
                    log.error(name, e);
                    continue;
                }
            };
            let what = format!("{name} N={n}");
            log.report(&what, jacobiator_check(&b.bracket, &dims, &sel));
            log.report(&what, qp_rep_check(&b.bracket, &dims, &sel));
        }
    }
    log
}

fn property_pool() -> Vec<(String, Bundle)> {
    let specs = [
        ("free1", json!({"lambda": "1", "mu": "1", "nu": "3/4"})),
        ("q1", json!({"case": "2", "delta": "1", "lambda": "2"})),
        ("q1", json!({"case": "1b", "gamma": "1", "alpha": "1/2", "moment_map": true})),
        ("free2", json!({"case": 1, "gamma0": "2", "gamma1": "1", "alpha": "3/2"})),
        ("free2", json!({"case": 7})),
        ("nilpotent_sum", json!({"orders": [3, 4]})),
        ("surface", json!({"genus": 1, "boundaries": 1})),
        ("vdb_quiver", json!({"vertices": ["0", "1", "2"], "arrows": [["a", "1", "0"], ["b", "2", "0"]], "weights": {"a": "0", "b": "0"}})),
        ("vdb_quiver", json!({"vertices": ["1", "2"], "arrows": [["a", "1", "2"]]})),
    ];
    specs
        .iter()
        .filter_map(|(f, p)| catalog::build(f, p).ok().map(|b| (describe(f, p), b)))
        .collect()
}

/// Counts cases and keeps the first failure.
struct Tally {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn finish(self, log: &mut Log, need: usize) {
        let ok = self.failure.is_none() && self.cases >= need;
        let failure = self.failure;
        let cases = self.cases;
        log.check(format!("{} [{} cases]", self.name, cases), ok, || failure.unwrap_or_else(|| format!("only {cases} cases")));
    }
}

fn properties_row(cfg: &SuiteConfig) -> Log {
    let mut log = Log::default();
    let n = cfg.property_cases();
    let pool = property_pool();
    if pool.len() < 9 {
        log.error("property pool", "a catalog entry failed to build");
        return log;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut leibniz = Tally::new("Leibniz rules");
    let mut anti = Tally::new("cyclic antisymmetry on random words");
    let mut tau_inv = Tally::new("τ-invariance of triple brackets");
    for i in 0..n {
        let (name, b) = &pool[i % pool.len()];
        let alg = b.algebra();
        let ev = b.bracket.evaluator();
        let (a, x, y) =
            (alg.sample_poly(&mut rng, 2, 3), alg.sample_poly(&mut rng, 2, 3), alg.sample_poly(&mut rng, 2, 3));
        let one = alg.one();
        let xy = alg.mul(&x, &y);
        let r: Result<bool, BracketError> = (|| {
            let outer = ev.eval(&a, &xy)? - alg.outer_act(&x, &ev.eval(&a, &y)?, &one) - alg.outer_act(&one, &ev.eval(&a, &x)?, &y);
            let inner = ev.eval(&xy, &a)? - alg.inner_act(&x, &ev.eval(&y, &a)?, &one) - alg.inner_act(&one, &ev.eval(&x, &a)?, &y);
            Ok(outer.is_zero() && inner.is_zero())
        })();
        leibniz.record(r == Ok(true), || format!("{name}: a={} b={} c={} ({r:?})", alg.fmt_poly(&a), alg.fmt_poly(&x), alg.fmt_poly(&y)));
        let (u, w) = (NcPoly::basis(alg.sample_word(&mut rng, 4)), NcPoly::basis(alg.sample_word(&mut rng, 4)));
        let r = ev.eval(&u, &w).and_then(|uw| Ok(uw + crate::algebra::flip(&ev.eval(&w, &u)?)));
        anti.record(r.as_ref().is_ok_and(|z| z.is_zero()), || format!("{name}: {} , {}", alg.fmt_poly(&u), alg.fmt_poly(&w)));
        let c = alg.sample_poly(&mut rng, 1, 2);
        let (p, q2) = (alg.sample_poly(&mut rng, 1, 2), alg.sample_poly(&mut rng, 1, 2));
        let r = triple_bracket_with(&ev, &p, &q2, &c)
            .and_then(|abc| Ok(abc - tau(Cycle3::Tau, &triple_bracket_with(&ev, &q2, &c, &p)?)));
        tau_inv.record(r.as_ref().is_ok_and(|z| z.is_zero()), || {
            format!("{name}: {} , {} , {}", alg.fmt_poly(&p), alg.fmt_poly(&q2), alg.fmt_poly(&c))
        });
    }
    leibniz.finish(&mut log, 500);
    anti.finish(&mut log, 500);
    tau_inv.finish(&mut log, 500);
    confluence(&mut log, &mut rng, n);
    induced(&mut log, &mut rng, n);
    log
}

/// Free reduction with cancellations applied at random positions, as an oracle for `normalize`.
fn reduce_randomly(letters: &[Letter], rng: &mut ChaCha8Rng) -> Vec<Letter> {
    let mut w = letters.to_vec();
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i].gen == w[i + 1].gen && w[i].inv != w[i + 1].inv).collect();
        if spots.is_empty() {
            return w;
        }
        let i = spots[rng.gen_range(0..spots.len())];
        w.drain(i..i + 2);
    }
}

fn random_walk(alg: &AlgebraSpec, rng: &mut ChaCha8Rng, len: usize) -> (usize, Vec<Letter>) {
    let letters = alg.checkable_letters();
    let s = rng.gen_range(0..alg.num_vertices());
    let mut at = s;
    let mut w: Vec<Letter> = Vec::new();
    for _ in 0..len {
        let opts: Vec<Letter> = letters.iter().copied().filter(|&l| alg.letter_tail(l) == at).collect();
        if opts.is_empty() {
            break;
        }
        // bias towards inverses of the previous letter so cancellations are frequent
        let l = match w.last() {
            Some(&p) if alg.has_inverse_letter(p.index()) && rng.gen_bool(0.3) => Letter { gen: p.gen, inv: !p.inv },
            _ => opts[rng.gen_range(0..opts.len())],
        };
        w.push(l);
        at = alg.letter_head(l);
    }
    (s, w)
}

fn confluence(log: &mut Log, rng: &mut ChaCha8Rng, n: usize) {
    let mut t = Tally::new("normalize confluence on group-like words");
    let algs: Vec<AlgebraSpec> = [
        catalog::surface(&SurfaceSpec::new(2, 1)),
        catalog::build("vdb_quiver", &json!({"vertices": ["1", "2"], "arrows": [["a", "1", "2"], ["b", "2", "2"]], "weights": {"a": "0", "b": "0"}})),
    ]
    .into_iter()
    .filter_map(|b| b.ok().map(|b| b.algebra().clone()))
    .collect();
    if algs.len() < 2 {
        log.error(t.name, "catalog entry failed to build");
        return;
    }
    for i in 0..n {
        let alg = &algs[i % algs.len()];
        let (s, w) = random_walk(alg, rng, 12);
        let oracle = reduce_randomly(&w, rng);
        let direct = alg.normalize_letters(s, &w);
        let cut = if w.is_empty() { 0 } else { rng.gen_range(0..=w.len()) };
        let mid = w.get(..cut).and_then(|l| l.last()).map_or(s, |&l| alg.letter_head(l));
        let split = match (alg.normalize_letters(s, &w[..cut]), alg.normalize_letters(mid, &w[cut..])) {
            (Some(x), Some(y)) => alg.mul_words(&x, &y),
            _ => None,
        };
        let ok = direct.as_ref().map(|d| d.letters().to_vec()) == Some(oracle.clone()) && split == direct;
        t.record(ok, || format!("{} vs oracle {}", direct.map(|d| alg.fmt_word(&d)).unwrap_or_default(), oracle.len()));
    }
    t.finish(log, 500);
}

fn random_coord(space: &RepSpace<'_>, rng: &mut ChaCha8Rng) -> CoordPoly {
    let vars = space.size() as u32;
    let mut p = cp_const(crate::algebra::qi(rng.gen_range(-2..=2)));
    for _ in 0..rng.gen_range(1..=2) {
        let mut m = cp_const(crate::algebra::qi(rng.gen_range(1..=3)));
        for _ in 0..rng.gen_range(1..=2) {
            m = cp_mul(&m, &cp_var(rng.gen_range(0..vars)));
        }
        p += m;
    }
    p
}

fn induced(log: &mut Log, rng: &mut ChaCha8Rng, n: usize) {
    let mut t = Tally::new("antisymmetry and biderivation of induced brackets");
    let bundles: Vec<(String, Bundle, usize)> = [
        ("free1", json!({"lambda": "1", "mu": "1", "nu": "3/4"}), 2),
        ("q1", json!({"case": "3", "delta": "-1", "lambda": "2"}), 1),
        ("free2", json!({"case": 4}), 2),
    ]
    .iter()
    .filter_map(|(f, p, d)| catalog::build(f, p).ok().map(|b| (describe(f, p), b, *d)))
    .collect();
    if bundles.len() < 3 {
        log.error(t.name, "catalog entry failed to build");
        return;
    }
    let spaces: Vec<(String, RepSpace<'_>)> = bundles
        .iter()
        .filter_map(|(name, b, d)| {
            let dims = DimVector::uniform(b.algebra(), *d).ok()?;
            RepSpace::new(&b.bracket, dims).ok().map(|s| (name.clone(), s))
        })
        .collect();
    if spaces.len() < 3 {
        log.error(t.name, "representation space failed to build");
        return;
    }
    for i in 0..n {
        let (name, space) = &spaces[i % spaces.len()];
        let alg = space.algebra();
        let (f, g) = (random_coord(space, rng), random_coord(space, rng));
        let anti = (|| Ok::<_, BracketError>(space.bracket(&f, &g)? + space.bracket(&g, &f)?))();
        // {a_ij, b_kl} from the double bracket against the biderivation on coordinates
        let (a, b) = (NcPoly::basis(alg.sample_word(rng, 3)), NcPoly::basis(alg.sample_word(rng, 3)));
        let (ma, mb) = (space.coord_matrix(&a), space.coord_matrix(&b));
        let nn = space.dims().total();
        let e = (rng.gen_range(0..nn), rng.gen_range(0..nn), rng.gen_range(0..nn), rng.gen_range(0..nn));
        let bider = (|| {
            let lhs = space.element_bracket(&a, (e.0, e.1), &b, (e.2, e.3))?;
            Ok::<_, BracketError>(lhs - space.bracket(ma.get(e.0, e.1), mb.get(e.2, e.3))?)
        })();
        let ok = anti.as_ref().is_ok_and(|z| z.is_zero()) && bider.as_ref().is_ok_and(|z| z.is_zero());
        t.record(ok, || format!("{name}: words {} , {} at {e:?}", alg.fmt_poly(&a), alg.fmt_poly(&b)));
    }
    t.finish(log, 500);
}
