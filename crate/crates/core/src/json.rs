//! The JSON exchange formats: algebras, brackets, moment maps, bundles,
//! fusion requests and tensors. Coefficients are fraction strings, words are
//! arrays of symbols (`"t"`, `"t^-1"`, `"e1"`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraSpec, GenKind, NcPoly, Tensor2, Tensor3, Q};
use crate::brackets::{BracketError, Bundle, CheckReport, DoubleBracketSpec, MomentMapSpec};
use crate::catalog::parse_rational;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

impl JsonError {
    fn at(path: impl Into<String>, msg: impl std::fmt::Display) -> Self {
        JsonError::Invalid { path: path.into(), msg: msg.to_string() }
    }
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let msg = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        JsonError::Syntax { line: e.line(), column: e.column(), msg }
    }
}

pub type JsonResult<T> = Result<T, JsonError>;

/// A coefficient as written: a fraction string or an integer.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffRepr {
    Text(String),
    Int(i64),
}

impl CoeffRepr {
    fn value(&self, path: &str) -> JsonResult<Q> {
        match self {
            CoeffRepr::Text(s) => parse_rational(s).map_err(|e| JsonError::at(path, e)),
            CoeffRepr::Int(i) => Ok(Q::from_integer((*i).into())),
        }
    }
}

impl From<&Q> for CoeffRepr {
    fn from(c: &Q) -> Self {
        CoeffRepr::Text(c.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub coeff: CoeffRepr,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tensor2Term {
    pub coeff: CoeffRepr,
    pub w1: Vec<String>,
    pub w2: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tensor3Term {
    pub coeff: CoeffRepr,
    pub w1: Vec<String>,
    pub w2: Vec<String>,
    pub w3: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindRepr {
    Plain,
    Invertible,
    Nilpotent(u32),
    Cyclic(u32),
    FormalInverse(Vec<PolyTerm>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRepr {
    pub name: String,
    pub tail: String,
    pub head: String,
    #[serde(default = "plain")]
    pub kind: KindRepr,
}

fn plain() -> KindRepr {
    KindRepr::Plain
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraRepr {
    pub idempotents: Vec<String>,
    pub generators: Vec<GeneratorRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRepr {
    pub left: String,
    pub right: String,
    pub value: Vec<Tensor2Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRepr {
    pub pairs: Vec<PairRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentMapRepr {
    pub components: BTreeMap<String, Vec<PolyTerm>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleRepr {
    pub algebra: AlgebraRepr,
    pub bracket: BracketRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_map: Option<MomentMapRepr>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionRequest {
    pub algebra: AlgebraRepr,
    pub bracket: BracketRepr,
    #[serde(default)]
    pub moment_map: Option<MomentMapRepr>,
    #[serde(default)]
    pub kept: Option<String>,
    #[serde(default)]
    pub absorbed: Option<String>,
    /// Several fusions `[kept, absorbed]`, applied in order after `kept`/`absorbed`.
    #[serde(default)]
    pub steps: Vec<(String, String)>,
}

impl FusionRequest {
    pub fn bundle(&self) -> JsonResult<Bundle> {
        let alg = algebra_from_repr(&self.algebra)?;
        bundle_parts(alg, &self.bracket, self.moment_map.as_ref())
    }

    pub fn all_steps(&self) -> JsonResult<Vec<(String, String)>> {
        let mut out = Vec::new();
        match (&self.kept, &self.absorbed) {
            (Some(k), Some(a)) => out.push((k.clone(), a.clone())),
            (None, None) => {}
            _ => return Err(JsonError::at("fusion", "`kept` and `absorbed` go together")),
        }
        out.extend(self.steps.iter().cloned());
        if out.is_empty() {
            return Err(JsonError::at("fusion", "no fusion step given"));
        }
        Ok(out)
    }
}

fn alg_err(path: &str, e: AlgebraError) -> JsonError {
    JsonError::at(path, e)
}

fn br_err(path: &str, e: BracketError) -> JsonError {
    JsonError::at(path, e)
}

pub fn parse_word(alg: &AlgebraSpec, syms: &[String], path: &str) -> JsonResult<NcPoly> {
    alg.parse_word(syms).map_err(|e| alg_err(path, e))
}

pub fn poly_from_terms(alg: &AlgebraSpec, terms: &[PolyTerm], path: &str) -> JsonResult<NcPoly> {
    let mut out = NcPoly::zero();
    for (i, t) in terms.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let c = t.coeff.value(&format!("{p}.coeff"))?;
        out += parse_word(alg, &t.word, &format!("{p}.word"))?.scale(&c);
    }
    Ok(out)
}

pub fn t2_from_terms(alg: &AlgebraSpec, terms: &[Tensor2Term], path: &str) -> JsonResult<Tensor2> {
    let mut out = Tensor2::zero();
    for (i, t) in terms.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let c = t.coeff.value(&format!("{p}.coeff"))?;
        let x = parse_word(alg, &t.w1, &format!("{p}.w1"))?;
        let y = parse_word(alg, &t.w2, &format!("{p}.w2"))?;
        out += alg.tensor(&x, &y).scale(&c);
    }
    Ok(out)
}

pub fn t3_from_terms(alg: &AlgebraSpec, terms: &[Tensor3Term], path: &str) -> JsonResult<Tensor3> {
    let mut out = Tensor3::zero();
    for (i, t) in terms.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let c = t.coeff.value(&format!("{p}.coeff"))?;
        let x = parse_word(alg, &t.w1, &format!("{p}.w1"))?;
        let y = parse_word(alg, &t.w2, &format!("{p}.w2"))?;
        let z = parse_word(alg, &t.w3, &format!("{p}.w3"))?;
        out += alg.tensor3(&x, &y, &z).scale(&c);
    }
    Ok(out)
}

pub fn poly_to_terms(alg: &AlgebraSpec, p: &NcPoly) -> Vec<PolyTerm> {
    p.iter().map(|(w, c)| PolyTerm { coeff: c.into(), word: alg.word_symbols(w) }).collect()
}

pub fn t2_to_terms(alg: &AlgebraSpec, t: &Tensor2) -> Vec<Tensor2Term> {
    t.iter()
        .map(|((x, y), c)| Tensor2Term { coeff: c.into(), w1: alg.word_symbols(x), w2: alg.word_symbols(y) })
        .collect()
}

pub fn t3_to_terms(alg: &AlgebraSpec, t: &Tensor3) -> Vec<Tensor3Term> {
    t.iter()
        .map(|((x, y, z), c)| Tensor3Term {
            coeff: c.into(),
            w1: alg.word_symbols(x),
            w2: alg.word_symbols(y),
            w3: alg.word_symbols(z),
        })
        .collect()
}

pub fn algebra_from_repr(r: &AlgebraRepr) -> JsonResult<AlgebraSpec> {
    let mut alg = AlgebraSpec::new(&r.idempotents).map_err(|e| alg_err("algebra.idempotents", e))?;
    for (i, g) in r.generators.iter().enumerate() {
        let path = format!("algebra.generators[{i}]");
        let kind = match &g.kind {
            KindRepr::Plain => GenKind::Plain,
            KindRepr::Invertible => GenKind::Invertible,
            KindRepr::Nilpotent(k) => GenKind::Nilpotent(*k),
            KindRepr::Cyclic(n) => GenKind::Cyclic(*n),
            KindRepr::FormalInverse(terms) => {
                GenKind::FormalInverse(poly_from_terms(&alg, terms, &format!("{path}.kind.formal_inverse"))?)
            }
        };
        alg.add_generator(&g.name, &g.tail, &g.head, kind).map_err(|e| alg_err(&path, e))?;
    }
    Ok(alg)
}

pub fn algebra_to_repr(alg: &AlgebraSpec) -> AlgebraRepr {
    let generators = alg
        .generators()
        .iter()
        .map(|g| GeneratorRepr {
            name: g.name.clone(),
            tail: alg.label(g.tail).to_string(),
            head: alg.label(g.head).to_string(),
            kind: match &g.kind {
                GenKind::Plain => KindRepr::Plain,
                GenKind::Invertible => KindRepr::Invertible,
                GenKind::Nilpotent(k) => KindRepr::Nilpotent(*k),
                GenKind::Cyclic(n) => KindRepr::Cyclic(*n),
                GenKind::FormalInverse(d) => KindRepr::FormalInverse(poly_to_terms(alg, d)),
            },
        })
        .collect();
    AlgebraRepr { idempotents: alg.idempotents().to_vec(), generators }
}

/// Missing pairs are zero. A pair given in one orientation only is completed by
/// `⟪h,g⟫ = −⟪g,h⟫°`; pairs given in both orientations, and diagonal pairs, are
/// stored as written so a broken antisymmetry remains visible to the checks.
pub fn bracket_from_repr(alg: AlgebraSpec, r: &BracketRepr) -> JsonResult<DoubleBracketSpec> {
    let mut given: BTreeMap<(usize, usize), Tensor2> = BTreeMap::new();
    for (i, p) in r.pairs.iter().enumerate() {
        let path = format!("bracket.pairs[{i}]");
        let g = alg.gen_index(&p.left).map_err(|e| alg_err(&format!("{path}.left"), e))?;
        let h = alg.gen_index(&p.right).map_err(|e| alg_err(&format!("{path}.right"), e))?;
        let v = t2_from_terms(&alg, &p.value, &format!("{path}.value"))?;
        if given.insert((g, h), v).is_some() {
            return Err(JsonError::at(path, format!("pair ({}, {}) given twice", p.left, p.right)));
        }
    }
    let mut br = DoubleBracketSpec::zero(alg);
    for (&(g, h), v) in &given {
        let res = if g == h || given.contains_key(&(h, g)) { br.set_raw(g, h, v.clone()) } else { br.set(g, h, v.clone()) };
        res.map_err(|e| br_err("bracket", e))?;
    }
    Ok(br)
}

/// Pairs in index order; a pair is written when either orientation is nonzero.
pub fn bracket_to_repr(br: &DoubleBracketSpec) -> BracketRepr {
    let alg = br.algebra();
    let pairs = br
        .values()
        .iter()
        .filter(|(&(g, h), v)| !v.is_zero() || br.get(h, g).is_some_and(|w| !w.is_zero()))
        .map(|(&(g, h), v)| PairRepr {
            left: alg.generator(g).name.clone(),
            right: alg.generator(h).name.clone(),
            value: t2_to_terms(alg, v),
        })
        .collect();
    BracketRepr { pairs }
}

pub fn moment_map_from_repr(alg: &AlgebraSpec, r: &MomentMapRepr) -> JsonResult<MomentMapSpec> {
    for label in r.components.keys() {
        alg.vertex_index(label).map_err(|e| alg_err("moment_map.components", e))?;
    }
    let mut comps = Vec::new();
    for label in alg.idempotents() {
        let path = format!("moment_map.components.{label}");
        let terms = r.components.get(label).ok_or_else(|| JsonError::at(&path, "missing component"))?;
        comps.push(poly_from_terms(alg, terms, &path)?);
    }
    MomentMapSpec::new(alg, comps).map_err(|e| br_err("moment_map", e))
}

pub fn moment_map_to_repr(alg: &AlgebraSpec, mm: &MomentMapSpec) -> MomentMapRepr {
    let components =
        alg.idempotents().iter().enumerate().map(|(s, l)| (l.clone(), poly_to_terms(alg, mm.component(s)))).collect();
    MomentMapRepr { components }
}

fn bundle_parts(alg: AlgebraSpec, br: &BracketRepr, mm: Option<&MomentMapRepr>) -> JsonResult<Bundle> {
    let mm = mm.map(|m| moment_map_from_repr(&alg, m)).transpose()?;
    let bracket = bracket_from_repr(alg, br)?;
    Ok(Bundle::new(bracket, mm))
}

pub fn bundle_from_repr(r: &BundleRepr) -> JsonResult<Bundle> {
    bundle_parts(algebra_from_repr(&r.algebra)?, &r.bracket, r.moment_map.as_ref())
}

pub fn bundle_to_repr(b: &Bundle) -> BundleRepr {
    BundleRepr {
        algebra: algebra_to_repr(b.algebra()),
        bracket: bracket_to_repr(&b.bracket),
        moment_map: b.moment_map.as_ref().map(|m| moment_map_to_repr(b.algebra(), m)),
    }
}

pub fn bundle_from_str(s: &str) -> JsonResult<Bundle> {
    bundle_from_repr(&serde_json::from_str(s)?)
}

pub fn bundle_to_value(b: &Bundle) -> Value {
    serde_json::to_value(bundle_to_repr(b)).expect("bundle serializes")
}

pub fn algebra_from_str(s: &str) -> JsonResult<AlgebraSpec> {
    algebra_from_repr(&serde_json::from_str(s)?)
}

pub fn bracket_from_str(alg: AlgebraSpec, s: &str) -> JsonResult<DoubleBracketSpec> {
    bracket_from_repr(alg, &serde_json::from_str(s)?)
}

pub fn reports_to_value(reports: &[CheckReport]) -> Value {
    serde_json::to_value(reports).expect("reports serialize")
}

/// A word given either as a symbol array or a whitespace-separated string.
pub fn element_from_value(alg: &AlgebraSpec, v: &Value, path: &str) -> JsonResult<NcPoly> {
    match v {
        Value::String(s) => alg.parse_word_str(s).map_err(|e| alg_err(path, e)),
        Value::Array(xs) if xs.iter().all(Value::is_string) => {
            let syms: Vec<String> = xs.iter().filter_map(|x| x.as_str().map(str::to_string)).collect();
            parse_word(alg, &syms, path)
        }
        Value::Array(_) => {
            let terms: Vec<PolyTerm> = serde_json::from_value(v.clone()).map_err(|e| JsonError::at(path, e))?;
            poly_from_terms(alg, &terms, path)
        }
        _ => Err(JsonError::at(path, "expected a word or a list of {coeff, word} terms")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::check_cyclic_antisymmetry;
    use crate::catalog;
    use serde_json::json;

    #[test]
    fn catalog_bundles_round_trip() {
        let cases = [
            ("free1", json!({"lambda": "0", "mu": "1/2", "nu": "0"})),
            ("q1", json!({"case": "1b", "gamma": "1", "moment_map": true})),
            ("nilpotent_free1", json!({"k": 4})),
            ("surface", json!({"genus": 1, "boundaries": 1})),
            ("vdb_quiver", json!({"vertices": ["1", "2"], "arrows": [["t", "1", "2"]]})),
        ];
        for (name, p) in cases {
            let b = catalog::build(name, &p).unwrap();
            let text = serde_json::to_string(&bundle_to_value(&b)).unwrap();
            let back = bundle_from_str(&text).unwrap();
            assert_eq!(back, b, "{name}");
        }
    }

    #[test]
    fn one_orientation_is_completed() {
        let doc = json!({
            "algebra": {"idempotents": ["1", "2"], "generators": [
                {"name": "t", "tail": "1", "head": "2", "kind": "plain"},
                {"name": "s", "tail": "2", "head": "1", "kind": "plain"}]},
            "bracket": {"pairs": [{"left": "t", "right": "s", "value": [{"coeff": "1/2", "w1": ["s", "t"], "w2": ["e1"]}]}]}
        });
        let b = bundle_from_str(&doc.to_string()).unwrap();
        let rep = check_cyclic_antisymmetry(&b.bracket, 0, 0).unwrap();
        assert!(rep.passed);
        assert!(!b.bracket.get(1, 0).unwrap().is_zero());
    }

    #[test]
    fn broken_antisymmetry_is_kept() {
        let doc = json!({
            "algebra": {"idempotents": ["1"], "generators": [{"name": "x", "tail": "1", "head": "1"}]},
            "bracket": {"pairs": [{"left": "x", "right": "x", "value": [{"coeff": 1, "w1": ["x"], "w2": ["1"]}]}]}
        });
        let b = bundle_from_str(&doc.to_string()).unwrap();
        assert!(!check_cyclic_antisymmetry(&b.bracket, 0, 0).unwrap().passed);
    }

    #[test]
    fn errors_carry_locations() {
        match bundle_from_str("{\"algebra\": [") {
            Err(JsonError::Syntax { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        let doc = json!({
            "algebra": {"idempotents": ["1"], "generators": [{"name": "x", "tail": "1", "head": "1"}]},
            "bracket": {"pairs": [{"left": "x", "right": "x", "value": [{"coeff": "1/2", "w1": ["y"], "w2": ["1"]}]}]}
        });
        let e = bundle_from_str(&doc.to_string()).unwrap_err().to_string();
        assert!(e.starts_with("bracket.pairs[0].value[0].w1"), "{e}");
    }
}
