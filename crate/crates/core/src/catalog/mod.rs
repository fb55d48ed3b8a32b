//! Parameterized constructors for the concrete brackets: the one- and
//! two-generator classifications, Van den Bergh quivers, surfaces and
//! truncated polynomial rings, each with a fusion-built counterpart where
//! one exists.

mod classification;
mod quiver;
mod surface;

use std::collections::BTreeMap;
use std::str::FromStr;

use serde_json::Value;
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraSpec, NcPoly, Tensor2, Q};
use crate::brackets::{BracketError, Bundle};

pub use classification::{
    free1, free1_unchecked, free2, free2_unchecked, nilpotent_free1, q1, q1_by_fusion, q1_unchecked, Free2Case,
    Free2Params, Q1Case, Q1Params,
};
pub use quiver::{vdb_by_fusion, vdb_quiver, QuiverSpec};
pub use surface::{nilpotent_sum, nilpotent_sum_by_fusion, surface, surface_by_fusion, SurfaceSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

impl From<AlgebraError> for CatalogError {
    fn from(e: AlgebraError) -> Self {
        CatalogError::Bracket(BracketError::Algebra(e))
    }
}

pub type CatalogResult<T> = Result<T, CatalogError>;

fn param_err(msg: impl Into<String>) -> CatalogError {
    CatalogError::Parameter(msg.into())
}

/// Named parameters from a JSON object; rationals are strings like `"3/4"` or integers.
#[derive(Clone, Debug, Default)]
pub struct Params {
    map: BTreeMap<String, Value>,
}

pub fn parse_rational(s: &str) -> Result<Q, String> {
    Q::from_str(s.trim()).map_err(|_| format!("`{s}` is not a rational number"))
}

impl Params {
    pub fn from_json(v: &Value) -> CatalogResult<Self> {
        match v {
            Value::Null => Ok(Params::default()),
            Value::Object(m) => Ok(Params { map: m.iter().map(|(k, v)| (k.clone(), v.clone())).collect() }),
            _ => Err(param_err("parameters must be a JSON object")),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.map.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.map.get(key)
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.map.insert(key.to_string(), v);
    }

    pub fn rational(&self, key: &str) -> CatalogResult<Option<Q>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => parse_rational(s).map(Some).map_err(|e| param_err(format!("{key}: {e}"))),
            Some(Value::Number(n)) => match n.as_i64() {
                Some(i) => Ok(Some(Q::from_integer(i.into()))),
                None => Err(param_err(format!("{key}: use a fraction string for non-integers"))),
            },
            Some(_) => Err(param_err(format!("{key}: expected a rational"))),
        }
    }

    pub fn rational_or(&self, key: &str, default: Q) -> CatalogResult<Q> {
        Ok(self.rational(key)?.unwrap_or(default))
    }

    pub fn required(&self, key: &str) -> CatalogResult<Q> {
        self.rational(key)?.ok_or_else(|| param_err(format!("missing parameter `{key}`")))
    }

    pub fn uint(&self, key: &str) -> CatalogResult<Option<u64>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Number(n)) => n.as_u64().map(Some).ok_or_else(|| param_err(format!("{key}: expected a non-negative integer"))),
            Some(Value::String(s)) => s.trim().parse().map(Some).map_err(|_| param_err(format!("{key}: expected a non-negative integer"))),
            Some(_) => Err(param_err(format!("{key}: expected a non-negative integer"))),
        }
    }

    pub fn string(&self, key: &str) -> CatalogResult<Option<String>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(_) => Err(param_err(format!("{key}: expected a string"))),
        }
    }

    pub fn flag(&self, key: &str) -> CatalogResult<bool> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(param_err(format!("{key}: expected true or false"))),
        }
    }

    pub fn uint_list(&self, key: &str) -> CatalogResult<Option<Vec<u64>>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| param_err(format!("{key}: expected non-negative integers"))))
                .collect::<CatalogResult<Vec<_>>>()
                .map(Some),
            Some(_) => Err(param_err(format!("{key}: expected a list of integers"))),
        }
    }
}

/// A catalog family with its parameter schema.
pub struct Family {
    pub name: &'static str,
    pub summary: &'static str,
    /// (parameter, description)
    pub params: &'static [(&'static str, &'static str)],
    /// Parameter whose unit shift breaks the quasi-Poisson property, if any.
    pub perturb: fn(&Params) -> Option<&'static str>,
    builder: fn(&Params, bool) -> CatalogResult<Bundle>,
}

const FAMILIES: &[Family] = &[
    Family {
        name: "free1",
        summary: "k[t] with ⟪t,t⟫ = λ(t⊗1−1⊗t) + μ(t²⊗1−1⊗t²) + ν(t²⊗t−t⊗t²)",
        params: &[("lambda", "rational"), ("mu", "rational"), ("nu", "rational"), ("constraint", "4(μ²−λν) = 1")],
        perturb: |_| Some("mu"),
        builder: classification::free1_family,
    },
    Family {
        name: "nilpotent_free1",
        summary: "k[x]/(x^k) with ⟪x,x⟫ = μ(x²⊗1−1⊗x²)",
        params: &[("k", "integer ≥ 3"), ("mu", "±1/2, default 1/2")],
        perturb: |_| Some("mu"),
        builder: classification::nilpotent_family,
    },
    Family {
        name: "q1",
        summary: "double of the quiver 1 → 2 with arrows t: 1→2, s: 2→1",
        params: &[
            ("case", "1a | 1b | 2 | 3"),
            ("delta", "±1 (cases 1a, 2, 3; 1b with a moment map)"),
            ("gamma", "rational (1b)"),
            ("phi", "rational (1b)"),
            ("alpha", "rational with α² = 1/4 + γφ (1b)"),
            ("lambda", "nonzero rational (2, 3)"),
            ("moment_map", "bool (1b with γφ = 0, α = δ/2)"),
        ],
        perturb: classification::q1_perturb,
        builder: classification::q1_family,
    },
    Family {
        name: "q1_fusion",
        summary: "t: 1→2 and s: 4→3 with the zero bracket, glued 1~3 and 2~4",
        params: &[("delta", "+1 fuses 3 onto 1, −1 the reverse"), ("delta_prime", "+1 fuses 4 onto 2, −1 the reverse")],
        perturb: |_| None,
        builder: classification::q1_fusion_family,
    },
    Family {
        name: "free2",
        summary: "k⟨s,t⟩ with the reduced brackets of cases 1–7",
        params: &[
            ("case", "1..7"),
            ("mu", "±1/2 (1–6)"),
            ("m", "±1/2 (3, 4)"),
            ("alpha", "±1/2 (2, 4, 5, 7) or α² = 1/4 + γ₀γ₁ (1)"),
            ("gamma0", "rational (1)"),
            ("gamma1", "rational (1)"),
            ("gamma", "rational (2)"),
            ("n", "nonzero rational (5, 6, 7)"),
            ("nu", "nonzero rational (7)"),
            ("moment_map", "bool (2): localize at a = δγ+ts, b = δγ+st with δ = 2α"),
        ],
        perturb: classification::free2_perturb,
        builder: classification::free2_family,
    },
    Family {
        name: "vdb_quiver",
        summary: "localized double quiver with the closed-form bracket and Φ_s = Π(γ_a e_s + aa*)^{ε(a)}",
        params: &[
            ("vertices", "list of labels"),
            ("arrows", "list of [name, tail, head]"),
            ("weights", "map arrow → γ_a, default 1"),
            ("orderings", "map vertex → list of arrows of the double with that tail; default a₁, a₁*, a₂, …"),
        ],
        perturb: |_| None,
        builder: quiver::vdb_family,
    },
    Family {
        name: "vdb_fusion",
        summary: "the same quiver assembled by fusing separated one-arrow blocks",
        params: &[("vertices", "as vdb_quiver"), ("arrows", "as vdb_quiver"), ("weights", "as vdb_quiver"), ("orderings", "as vdb_quiver")],
        perturb: |_| None,
        builder: quiver::vdb_fusion_family,
    },
    Family {
        name: "surface",
        summary: "group algebra of a surface group, generators alpha_i, beta_i, gamma_k, Φ = Π[alpha_i,beta_i] Π gamma_k",
        params: &[("genus", "g ≥ 0"), ("boundaries", "r ≥ 0, g + r ≥ 1"), ("weights", "optional list of r orders n_k ≥ 1")],
        perturb: |_| None,
        builder: surface::surface_family,
    },
    Family {
        name: "surface_fusion",
        summary: "the surface bracket assembled from g tori and r annuli by fusion",
        params: &[("genus", "as surface"), ("boundaries", "as surface"), ("weights", "as surface")],
        perturb: |_| None,
        builder: surface::surface_fusion_family,
    },
    Family {
        name: "nilpotent_sum",
        summary: "k⟨x_1..x_M⟩/(x_s^{k_s}) with the fused brackets",
        params: &[("orders", "list of k_s ≥ 3")],
        perturb: |_| None,
        builder: surface::nilpotent_sum_family,
    },
    Family {
        name: "nilpotent_sum_fusion",
        summary: "the same algebra built by fusing truncated polynomial rings",
        params: &[("orders", "list of k_s ≥ 3")],
        perturb: |_| None,
        builder: surface::nilpotent_sum_fusion_family,
    },
];

pub fn families() -> &'static [Family] {
    FAMILIES
}

pub fn family(name: &str) -> CatalogResult<&'static Family> {
    FAMILIES.iter().find(|f| f.name == name).ok_or_else(|| param_err(format!("unknown family `{name}`")))
}

/// Builds a family member, enforcing its constraints.
pub fn build(name: &str, params: &Value) -> CatalogResult<Bundle> {
    (family(name)?.builder)(&Params::from_json(params)?, true)
}

/// Builds without checking the coefficient constraints, for negative tests.
pub fn build_unchecked(name: &str, params: &Value) -> CatalogResult<Bundle> {
    (family(name)?.builder)(&Params::from_json(params)?, false)
}

/// The family's constrained coefficient and the parameters with it shifted by +1.
/// An absent coefficient is shifted from the family default.
pub fn perturbation(name: &str, params: &Value) -> CatalogResult<(&'static str, Value)> {
    let fam = family(name)?;
    let mut p = Params::from_json(params)?;
    let key = (fam.perturb)(&p).ok_or_else(|| param_err(format!("family `{name}` has no perturbation parameter")))?;
    let v = match p.rational(key)? {
        Some(v) => v,
        None => default_value(name, key)?,
    };
    p.set(key, Value::String((v + Q::from_integer(1.into())).to_string()));
    Ok((key, p.to_json()))
}

fn default_value(name: &str, key: &str) -> CatalogResult<Q> {
    let h = crate::algebra::half();
    match (name, key) {
        ("free1" | "nilpotent_free1", "mu") | ("q1", "alpha") | ("free2", "alpha" | "mu") => Ok(h),
        ("q1", "delta") => Ok(Q::from_integer(1.into())),
        _ => Err(param_err(format!("no default for `{key}` in `{name}`"))),
    }
}

/// Shift the family's constrained coefficient by +1 and build unchecked.
pub fn perturbed(name: &str, params: &Value) -> CatalogResult<Bundle> {
    let (_, p) = perturbation(name, params)?;
    build_unchecked(name, &p)
}

/// `Σ c · x ⊗ y` from whitespace-separated words.
pub(crate) fn t2(alg: &AlgebraSpec, terms: &[(Q, &str, &str)]) -> CatalogResult<Tensor2> {
    let mut out = Tensor2::zero();
    for (c, x, y) in terms {
        out += alg.tensor(&alg.parse_word_str(x)?, &alg.parse_word_str(y)?).scale(c);
    }
    Ok(out)
}

pub(crate) fn word(alg: &AlgebraSpec, w: &str) -> CatalogResult<NcPoly> {
    Ok(alg.parse_word_str(w)?)
}

/// `½(ba⊗1 + 1⊗ab − a⊗b − b⊗a)`: the bracket between generators of two glued components.
pub(crate) fn cross_term(alg: &AlgebraSpec, a: &str, b: &str, unit: &str) -> CatalogResult<Tensor2> {
    let h = crate::algebra::half();
    let (ba, ab) = (format!("{b} {a}"), format!("{a} {b}"));
    t2(alg, &[(h.clone(), &ba, unit), (h.clone(), unit, &ab), (-h.clone(), a, b), (-h, b, a)])
}

/// `c(x²⊗1 − 1⊗x²)`.
pub(crate) fn square_term(alg: &AlgebraSpec, x: &str, unit: &str, c: &Q) -> CatalogResult<Tensor2> {
    let xx = format!("{x} {x}");
    t2(alg, &[(c.clone(), &xx, unit), (-c.clone(), unit, &xx)])
}

/// Compares two bundles generator pair by generator pair, matching names and labels.
pub fn bundle_differences(expected: &Bundle, actual: &Bundle) -> CatalogResult<Vec<String>> {
    let (ea, aa) = (expected.algebra(), actual.algebra());
    let mut out = Vec::new();
    let mut e_labels: Vec<&String> = ea.idempotents().iter().collect();
    let mut a_labels: Vec<&String> = aa.idempotents().iter().collect();
    e_labels.sort();
    a_labels.sort();
    if e_labels != a_labels {
        out.push(format!("idempotents differ: {e_labels:?} vs {a_labels:?}"));
        return Ok(out);
    }
    let mut e_names: Vec<&str> = ea.generators().iter().map(|g| g.name.as_str()).collect();
    let mut a_names: Vec<&str> = aa.generators().iter().map(|g| g.name.as_str()).collect();
    e_names.sort();
    a_names.sort();
    if e_names != a_names {
        out.push(format!("generators differ: {e_names:?} vs {a_names:?}"));
        return Ok(out);
    }
    for g in ea.base_generators() {
        for h in ea.base_generators() {
            let (gn, hn) = (&ea.generator(g).name, &ea.generator(h).name);
            let ev = expected.bracket.get(g, h).cloned().unwrap_or_default();
            let (g2, h2) = (aa.gen_index(gn)?, aa.gen_index(hn)?);
            let av = actual.bracket.get(g2, h2).cloned().unwrap_or_default();
            let av = aa.translate_t2(ea, &av)?;
            if ev != av {
                out.push(format!("⟪{gn},{hn}⟫: expected {} got {}", ea.fmt_t2(&ev), ea.fmt_t2(&av)));
            }
        }
    }
    match (&expected.moment_map, &actual.moment_map) {
        (Some(em), Some(am)) => {
            for (s, label) in ea.idempotents().iter().enumerate() {
                let t = aa.vertex_index(label)?;
                let ap = aa.translate_poly(ea, am.component(t))?;
                if &ap != em.component(s) {
                    out.push(format!(
                        "Φ_{label}: expected {} got {}",
                        ea.fmt_poly(em.component(s)),
                        ea.fmt_poly(&ap)
                    ));
                }
            }
        }
        (None, None) => {}
        _ => out.push("only one side carries a moment map".into()),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rationals_parse() {
        let p = Params::from_json(&json!({"a": "3/4", "b": -2, "c": "x"})).unwrap();
        assert_eq!(p.required("a").unwrap(), crate::algebra::q(3, 4));
        assert_eq!(p.required("b").unwrap(), crate::algebra::qi(-2));
        assert!(p.required("c").is_err());
        assert!(p.required("d").is_err());
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(build("nope", &json!({})), Err(CatalogError::Parameter(_))));
        assert_eq!(families().len(), 11);
    }
}
