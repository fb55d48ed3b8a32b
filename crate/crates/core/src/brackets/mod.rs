//! Double brackets, their triple brackets, and the quasi-Poisson and
//! moment-map conditions.

mod checks;
mod derivation;
mod eval;
mod ops;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{flip, AlgebraError, AlgebraSpec, Letter, NcPoly, Tensor2, Word};

pub use checks::{
    check_cyclic_antisymmetry, check_moment_map, check_quasi_poisson, check_typing, qp_anomaly, triple_bracket,
    triple_bracket_with, MomentCheckMode,
};
pub use checks::moment_rhs as moment_map_rhs;
pub use derivation::{differential_double, differential_triple, gauge_element, pair_product, DoubleDerivation};
pub use eval::Evaluator;
pub use ops::{direct_sum, direct_sum_bundles, restrict_to_corner};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("bracket value for ({0}, {1}) is not stored")]
    Incomplete(String, String),
    #[error("bracket value for ({0}, {1}) violates idempotent typing")]
    Typing(String, String),
    #[error("inverse letters present; use the numeric check: {0}")]
    DeferToNumeric(String),
    #[error("{0}")]
    Invalid(String),
}

/// A double bracket given by its values on ordered pairs of base generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleBracketSpec {
    algebra: AlgebraSpec,
    values: BTreeMap<(usize, usize), Tensor2>,
}

impl DoubleBracketSpec {
    /// The zero bracket, with every base pair stored.
    pub fn zero(algebra: AlgebraSpec) -> Self {
        let gens = algebra.base_generators();
        let mut values = BTreeMap::new();
        for &g in &gens {
            for &h in &gens {
                values.insert((g, h), Tensor2::zero());
            }
        }
        DoubleBracketSpec { algebra, values }
    }

    /// No pair stored; evaluation on any generator pair is an error until set.
    pub fn empty(algebra: AlgebraSpec) -> Self {
        DoubleBracketSpec { algebra, values: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn into_algebra(self) -> AlgebraSpec {
        self.algebra
    }

    pub fn values(&self) -> &BTreeMap<(usize, usize), Tensor2> {
        &self.values
    }

    pub fn get(&self, g: usize, h: usize) -> Option<&Tensor2> {
        self.values.get(&(g, h))
    }

    fn check_pair(&self, g: usize, h: usize) -> Result<(), BracketError> {
        let n = self.algebra.num_generators();
        if g >= n || h >= n {
            return Err(BracketError::Invalid("generator index out of range".into()));
        }
        if self.algebra.is_formal(g) || self.algebra.is_formal(h) {
            return Err(BracketError::Invalid(format!(
                "values on formal inverse `{}` are derived, not stored",
                if self.algebra.is_formal(g) { &self.algebra.generator(g).name } else { &self.algebra.generator(h).name }
            )));
        }
        Ok(())
    }

    /// Sets `⟪g,h⟫ = v` and `⟪h,g⟫ = −v°`.
    pub fn set(&mut self, g: usize, h: usize, v: Tensor2) -> Result<(), BracketError> {
        self.check_pair(g, h)?;
        let back = -flip(&v);
        if g == h && back != v {
            return Err(BracketError::Invalid(format!(
                "⟪{0},{0}⟫ is not cyclically antisymmetric",
                self.algebra.generator(g).name
            )));
        }
        self.values.insert((h, g), back);
        self.values.insert((g, h), v);
        Ok(())
    }

    /// Stores one orientation only.
    pub fn set_raw(&mut self, g: usize, h: usize, v: Tensor2) -> Result<(), BracketError> {
        self.check_pair(g, h)?;
        self.values.insert((g, h), v);
        Ok(())
    }

    pub fn set_by_name(&mut self, g: &str, h: &str, v: Tensor2) -> Result<(), BracketError> {
        let gi = self.algebra.gen_index(g)?;
        let hi = self.algebra.gen_index(h)?;
        self.set(gi, hi, v)
    }

    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(self)
    }

    /// `⟪a,b⟫` for arbitrary elements.
    pub fn eval(&self, a: &NcPoly, b: &NcPoly) -> Result<Tensor2, BracketError> {
        self.evaluator().eval(a, b)
    }

    pub fn eval_letters(&self, x: Letter, y: Letter) -> Result<Tensor2, BracketError> {
        self.evaluator().letters(x, y)
    }

    pub fn scale(&self, c: &crate::algebra::Q) -> Self {
        DoubleBracketSpec {
            algebra: self.algebra.clone(),
            values: self.values.iter().map(|(k, v)| (*k, v.scale(c))).collect(),
        }
    }

    /// Pointwise sum of two brackets on the same algebra.
    pub fn add(&self, other: &DoubleBracketSpec) -> Result<Self, BracketError> {
        if self.algebra != other.algebra {
            return Err(BracketError::Invalid("brackets live on different algebras".into()));
        }
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            *values.entry(*k).or_default() += v;
        }
        Ok(DoubleBracketSpec { algebra: self.algebra.clone(), values })
    }

    /// Same values over the relation-free lift of the algebra.
    pub fn without_relations(&self) -> Self {
        DoubleBracketSpec { algebra: self.algebra.without_relations(), values: self.values.clone() }
    }

    pub(crate) fn from_parts(algebra: AlgebraSpec, values: BTreeMap<(usize, usize), Tensor2>) -> Self {
        DoubleBracketSpec { algebra, values }
    }

    pub(crate) fn pair_names(&self, g: usize, h: usize) -> (String, String) {
        (self.algebra.generator(g).name.clone(), self.algebra.generator(h).name.clone())
    }
}

/// Moment map components `Φ_s ∈ e_s A e_s`, indexed by idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMapSpec {
    components: Vec<NcPoly>,
}

impl MomentMapSpec {
    pub fn new(algebra: &AlgebraSpec, components: Vec<NcPoly>) -> Result<Self, BracketError> {
        if components.len() != algebra.num_vertices() {
            return Err(BracketError::Invalid("one moment map component per idempotent is required".into()));
        }
        for (s, p) in components.iter().enumerate() {
            if p.keys().any(|w: &Word| w.src() != s || w.dst() != s) {
                return Err(BracketError::Invalid(format!("Φ_{} is not in e_s A e_s", algebra.label(s))));
            }
        }
        Ok(MomentMapSpec { components })
    }

    /// Components `e_s Φ e_s` of a single element.
    pub fn from_element(algebra: &AlgebraSpec, phi: &NcPoly) -> Self {
        let components = (0..algebra.num_vertices())
            .map(|s| algebra.mul(&algebra.mul(&algebra.e(s), phi), &algebra.e(s)))
            .collect();
        MomentMapSpec { components }
    }

    pub fn component(&self, s: usize) -> &NcPoly {
        &self.components[s]
    }

    pub fn components(&self) -> &[NcPoly] {
        &self.components
    }

    pub fn total(&self) -> NcPoly {
        let mut out = NcPoly::zero();
        for c in &self.components {
            out += c;
        }
        out
    }
}

/// An algebra with bracket and optional moment map, the unit of exchange between commands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub bracket: DoubleBracketSpec,
    pub moment_map: Option<MomentMapSpec>,
}

impl Bundle {
    pub fn new(bracket: DoubleBracketSpec, moment_map: Option<MomentMapSpec>) -> Self {
        Bundle { bracket, moment_map }
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        self.bracket.algebra()
    }

    /// Renames the idempotents; words are unaffected.
    pub fn with_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Bundle, BracketError> {
        let alg = self.algebra().with_labels(labels)?;
        Ok(Bundle {
            bracket: DoubleBracketSpec::from_parts(alg, self.bracket.values.clone()),
            moment_map: self.moment_map.clone(),
        })
    }

    pub fn with_generator_names(&self, renames: &[(&str, &str)]) -> Result<Bundle, BracketError> {
        let alg = self.algebra().with_generator_names(renames)?;
        Ok(Bundle {
            bracket: DoubleBracketSpec::from_parts(alg, self.bracket.values.clone()),
            moment_map: self.moment_map.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub inputs: Vec<String>,
    pub residual: String,
}

/// Outcome of a check; `passed` iff there are no witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport { name: name.to_string(), passed: true, checked: 0, witnesses: Vec::new() }
    }

    pub fn record(&mut self, ok: bool, inputs: Vec<String>, residual: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.witnesses.push(Witness { inputs, residual: residual() });
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.passed &= other.passed;
        self.witnesses.extend(other.witnesses);
    }
}
