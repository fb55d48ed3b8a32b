//! Fusion of two idempotents: the fusion algebra, the correction bracket
//! `−½ Tr(E₁)Tr(E₂)`, the fused bracket and moment map, and `κ`.
//!
//! Generators keep their names and indices. A generator `u` leaving the
//! absorbed idempotent stands for `e₁₂u`, one entering it for `u e₂₁`, so
//! only endpoints are relabelled and the matrix units never appear.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{half, AlgebraSpec, GenKind, Letter, NcPoly, Tensor2, Tensor3, Word};
use crate::brackets::{
    differential_double, pair_product, triple_bracket_with, BracketError, CheckReport, DoubleBracketSpec,
    DoubleDerivation, MomentMapSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FusionType {
    /// Neither endpoint absorbed.
    First,
    /// Tail absorbed.
    Second,
    /// Head absorbed.
    Third,
    /// Both endpoints absorbed.
    Fourth,
}

impl FusionType {
    pub const ALL: [FusionType; 4] = [FusionType::First, FusionType::Second, FusionType::Third, FusionType::Fourth];

    pub fn of(tail_absorbed: bool, head_absorbed: bool) -> Self {
        match (tail_absorbed, head_absorbed) {
            (false, false) => FusionType::First,
            (true, false) => FusionType::Second,
            (false, true) => FusionType::Third,
            (true, true) => FusionType::Fourth,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FusionType::First => "first",
            FusionType::Second => "second",
            FusionType::Third => "third",
            FusionType::Fourth => "fourth",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Kept,
    Absorbed,
}

/// The data of one fusion `absorbed ↦ kept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionContext {
    pub source: AlgebraSpec,
    pub kept: usize,
    pub absorbed: usize,
    pub result: AlgebraSpec,
    /// Source idempotent index to result idempotent index.
    pub vertex_map: Vec<usize>,
    pub types: Vec<FusionType>,
}

/// Builds `A^f` by fusing `absorbed` onto `kept`.
pub fn fuse_algebra(source: &AlgebraSpec, kept: &str, absorbed: &str) -> Result<FusionContext, BracketError> {
    let k = source.vertex_index(kept)?;
    let a = source.vertex_index(absorbed)?;
    if k == a {
        return Err(BracketError::Invalid(format!("cannot fuse idempotent `{kept}` onto itself")));
    }
    let labels: Vec<String> = source.idempotents().iter().enumerate().filter(|(i, _)| *i != a).map(|(_, l)| l.clone()).collect();
    let mut vertex_map = Vec::with_capacity(source.num_vertices());
    let mut next = 0;
    for s in 0..source.num_vertices() {
        if s == a {
            vertex_map.push(usize::MAX);
        } else {
            vertex_map.push(next);
            next += 1;
        }
    }
    vertex_map[a] = vertex_map[k];
    let mut result = AlgebraSpec::new(&labels)?;
    let mut types = Vec::new();
    for g in source.generators() {
        let kind = match &g.kind {
            GenKind::FormalInverse(d) => GenKind::FormalInverse(relabel_poly(d, &vertex_map)),
            other => other.clone(),
        };
        result.add_generator_at(&g.name, vertex_map[g.tail], vertex_map[g.head], kind)?;
        types.push(FusionType::of(g.tail == a, g.head == a));
    }
    Ok(FusionContext { source: source.clone(), kept: k, absorbed: a, result, vertex_map, types })
}

fn relabel_poly(p: &NcPoly, vmap: &[usize]) -> NcPoly {
    p.map_keys(|w| Some(AlgebraSpec::relabel_word(w, vmap)))
}

impl FusionContext {
    pub fn kept_in_result(&self) -> usize {
        self.vertex_map[self.kept]
    }

    pub fn type_of(&self, g: usize) -> FusionType {
        self.types[g]
    }

    pub fn rename_word(&self, w: &Word) -> Word {
        AlgebraSpec::relabel_word(w, &self.vertex_map)
    }

    pub fn rename_poly(&self, p: &NcPoly) -> NcPoly {
        relabel_poly(p, &self.vertex_map)
    }

    pub fn rename_t2(&self, t: &Tensor2) -> Tensor2 {
        t.map_keys(|(x, y)| Some((self.rename_word(x), self.rename_word(y))))
    }

    pub fn rename_t3(&self, t: &Tensor3) -> Tensor3 {
        t.map_keys(|(x, y, z)| Some((self.rename_word(x), self.rename_word(y), self.rename_word(z))))
    }

    fn e(&self) -> NcPoly {
        self.result.e(self.kept_in_result())
    }
}

/// `Tr(E₁)` (kept side) or `Tr(E₂)` (absorbed side) on `A^f`.
pub fn tr_e(ctx: &FusionContext, side: Side) -> DoubleDerivation {
    let alg = &ctx.result;
    let e = ctx.e();
    let mut d = DoubleDerivation::zero(alg.clone());
    for g in alg.base_generators() {
        let a = alg.gen(g);
        let ae_e = || alg.tensor(&alg.mul(&a, &e), &e);
        let e_ea = || alg.tensor(&e, &alg.mul(&e, &a));
        let v = match (ctx.type_of(g), side) {
            (FusionType::First, Side::Kept) | (FusionType::Fourth, Side::Absorbed) => ae_e() - e_ea(),
            (FusionType::First, Side::Absorbed) | (FusionType::Fourth, Side::Kept) => Tensor2::zero(),
            (FusionType::Second, Side::Kept) => ae_e(),
            (FusionType::Second, Side::Absorbed) => -alg.tensor(&e, &a),
            (FusionType::Third, Side::Kept) => -e_ea(),
            (FusionType::Third, Side::Absorbed) => alg.tensor(&a, &e),
        };
        d.set(g, v);
    }
    d
}

/// `⟪a,b⟫_fus` for base generators of `A^f`, from the closed forms per type pair.
pub fn fusion_bracket_term(ctx: &FusionContext, a: usize, b: usize) -> Tensor2 {
    use FusionType::*;
    let alg = &ctx.result;
    let e = ctx.e();
    let (x, y) = (alg.gen(a), alg.gen(b));
    let m = |p: &NcPoly, q: &NcPoly| alg.mul(p, q);
    let t = |p: &NcPoly, q: &NcPoly| alg.tensor(p, q);
    let (xy, yx) = (m(&x, &y), m(&y, &x));
    let (ex, xe, ey, ye) = (m(&e, &x), m(&x, &e), m(&e, &y), m(&y, &e));
    let v = match (ctx.type_of(a), ctx.type_of(b)) {
        (First, First) | (Fourth, Fourth) => Tensor2::zero(),
        (First, Second) => t(&e, &xy) - t(&ex, &y),
        (First, Third) => t(&yx, &e) - t(&y, &xe),
        (First, Fourth) => t(&yx, &e) + t(&e, &xy) - t(&y, &xe) - t(&ex, &y),
        (Second, First) => t(&x, &ey) - t(&yx, &e),
        (Second, Second) => t(&e, &xy) - t(&yx, &e),
        (Second, Third) => t(&x, &ey) - t(&y, &xe),
        (Second, Fourth) => t(&e, &xy) - t(&y, &xe),
        (Third, First) => t(&ye, &x) - t(&e, &xy),
        (Third, Second) => t(&ye, &x) - t(&ex, &y),
        (Third, Third) => t(&yx, &e) - t(&e, &xy),
        (Third, Fourth) => t(&yx, &e) - t(&ex, &y),
        (Fourth, First) => t(&ye, &x) + t(&x, &ey) - t(&yx, &e) - t(&e, &xy),
        (Fourth, Second) => t(&ye, &x) - t(&yx, &e),
        (Fourth, Third) => t(&x, &ey) - t(&e, &xy),
    };
    v.scale(&half())
}

/// The same term as the differential bracket of `−½ Tr(E₁)Tr(E₂)`.
pub fn fusion_term_via_trace(ctx: &FusionContext, a: usize, b: usize) -> Tensor2 {
    let alg = &ctx.result;
    let (t1, t2) = (tr_e(ctx, Side::Kept), tr_e(ctx, Side::Absorbed));
    let (la, lb) = (Letter::new(a), Letter::new(b));
    let v = pair_product(alg, &t1.apply_letter(la), &t2.apply_letter(lb))
        - pair_product(alg, &t2.apply_letter(la), &t1.apply_letter(lb));
    v.scale(&-half())
}

/// `⟪−,−⟫_fus` on all base generator pairs of `A^f`.
pub fn fusion_bracket(ctx: &FusionContext) -> DoubleBracketSpec {
    let gens = ctx.result.base_generators();
    let mut values = BTreeMap::new();
    for &a in &gens {
        for &b in &gens {
            values.insert((a, b), fusion_bracket_term(ctx, a, b));
        }
    }
    DoubleBracketSpec::from_parts(ctx.result.clone(), values)
}

/// The fusion bracket as `−½ Tr(E₁)Tr(E₂)` through the generic differential bracket.
pub fn fusion_bracket_differential(ctx: &FusionContext) -> DoubleBracketSpec {
    let t1 = tr_e(ctx, Side::Kept).scale(&-half());
    differential_double(&t1, &tr_e(ctx, Side::Absorbed))
}

/// The bracket of `A` read in `A^f`.
pub fn induced_bracket(ctx: &FusionContext, br: &DoubleBracketSpec) -> Result<DoubleBracketSpec, BracketError> {
    if br.algebra() != &ctx.source {
        return Err(BracketError::Invalid("bracket is not defined on the fusion source".into()));
    }
    let values = br.values().iter().map(|(k, v)| (*k, ctx.rename_t2(v))).collect();
    Ok(DoubleBracketSpec::from_parts(ctx.result.clone(), values))
}

/// `⟪−,−⟫^f = induced + fus`.
pub fn fused_bracket(ctx: &FusionContext, br: &DoubleBracketSpec) -> Result<DoubleBracketSpec, BracketError> {
    induced_bracket(ctx, br)?.add(&fusion_bracket(ctx))
}

/// `Φ^f_kept = Tr(Φ_kept) Tr(Φ_absorbed)`, other components renamed.
pub fn fused_moment_map(ctx: &FusionContext, mm: &MomentMapSpec) -> Result<MomentMapSpec, BracketError> {
    if mm.components().len() != ctx.source.num_vertices() {
        return Err(BracketError::Invalid("moment map does not match the fusion source".into()));
    }
    let mut comps = Vec::with_capacity(ctx.result.num_vertices());
    for s in 0..ctx.source.num_vertices() {
        if s == ctx.absorbed {
            continue;
        }
        let p = ctx.rename_poly(mm.component(s));
        if s == ctx.kept {
            comps.push(ctx.result.mul(&p, &ctx.rename_poly(mm.component(ctx.absorbed))));
        } else {
            comps.push(p);
        }
    }
    MomentMapSpec::new(&ctx.result, comps)
}

/// Fusion of a bracket together with an optional moment map.
pub fn fuse(
    br: &DoubleBracketSpec,
    mm: Option<&MomentMapSpec>,
    kept: &str,
    absorbed: &str,
) -> Result<(FusionContext, DoubleBracketSpec, Option<MomentMapSpec>), BracketError> {
    let ctx = fuse_algebra(br.algebra(), kept, absorbed)?;
    let fused = fused_bracket(&ctx, br)?;
    let phi = mm.map(|m| fused_moment_map(&ctx, m)).transpose()?;
    Ok((ctx, fused, phi))
}

/// `κ(a,b,c) = ⟪a,b,c⟫^f − ⟪a,b,c⟫ − ⟪a,b,c⟫_fus` on base generators of `A^f`.
pub fn kappa(ctx: &FusionContext, br: &DoubleBracketSpec, a: usize, b: usize, c: usize) -> Result<Tensor3, BracketError> {
    let parts = KappaParts::new(ctx, br)?;
    parts.eval(a, b, c)
}

struct KappaParts {
    fused: DoubleBracketSpec,
    induced: DoubleBracketSpec,
    fus: DoubleBracketSpec,
}

impl KappaParts {
    fn new(ctx: &FusionContext, br: &DoubleBracketSpec) -> Result<Self, BracketError> {
        Ok(KappaParts { fused: fused_bracket(ctx, br)?, induced: induced_bracket(ctx, br)?, fus: fusion_bracket(ctx) })
    }

    fn eval(&self, a: usize, b: usize, c: usize) -> Result<Tensor3, BracketError> {
        let alg = self.fused.algebra();
        let (x, y, z) = (alg.gen(a), alg.gen(b), alg.gen(c));
        let f = triple_bracket_with(&self.fused.evaluator(), &x, &y, &z)?;
        let i = triple_bracket_with(&self.induced.evaluator(), &x, &y, &z)?;
        let u = triple_bracket_with(&self.fus.evaluator(), &x, &y, &z)?;
        Ok(f - i - u)
    }
}

/// `κ = 0` on all ordered base-generator triples; also returns the type classes reached.
pub fn kappa_check(ctx: &FusionContext, br: &DoubleBracketSpec) -> Result<(CheckReport, BTreeSet<[FusionType; 3]>), BracketError> {
    let parts = KappaParts::new(ctx, br)?;
    let alg = &ctx.result;
    let (fe, ie, ue) = (parts.fused.evaluator(), parts.induced.evaluator(), parts.fus.evaluator());
    let gens = alg.base_generators();
    let mut rep = CheckReport::new("kappa");
    let mut classes = BTreeSet::new();
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                let (x, y, z) = (alg.gen(a), alg.gen(b), alg.gen(c));
                let k = triple_bracket_with(&fe, &x, &y, &z)?
                    - triple_bracket_with(&ie, &x, &y, &z)?
                    - triple_bracket_with(&ue, &x, &y, &z)?;
                let mut class = [ctx.type_of(a), ctx.type_of(b), ctx.type_of(c)];
                class.sort();
                classes.insert(class);
                let names = [a, b, c].iter().map(|&g| alg.generator(g).name.clone()).collect();
                rep.record(k.is_zero(), names, || alg.fmt_t3(&k));
            }
        }
    }
    Ok((rep, classes))
}

/// Agreement of the closed forms with `−½ Tr(E₁)Tr(E₂)` on every base pair; returns the type pairs reached.
pub fn table_check(ctx: &FusionContext) -> (CheckReport, BTreeSet<(FusionType, FusionType)>) {
    let alg = &ctx.result;
    let gens = alg.base_generators();
    let mut rep = CheckReport::new("fusion-table");
    let mut pairs = BTreeSet::new();
    for &a in &gens {
        for &b in &gens {
            let closed = fusion_bracket_term(ctx, a, b);
            let trace = fusion_term_via_trace(ctx, a, b);
            pairs.insert((ctx.type_of(a), ctx.type_of(b)));
            let names = vec![alg.generator(a).name.clone(), alg.generator(b).name.clone()];
            rep.record(closed == trace, names, || alg.fmt_t2(&(closed.clone() - trace.clone())));
        }
    }
    (rep, pairs)
}

/// Applies fusions in order, each `(kept, absorbed)` by label.
pub fn fuse_sequence(
    br: &DoubleBracketSpec,
    mm: Option<&MomentMapSpec>,
    steps: &[(String, String)],
) -> Result<(DoubleBracketSpec, Option<MomentMapSpec>), BracketError> {
    let mut cur = br.clone();
    let mut phi = mm.cloned();
    for (k, a) in steps {
        let (_, b, m) = fuse(&cur, phi.as_ref(), k, a)?;
        cur = b;
        phi = m;
    }
    Ok((cur, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{check_quasi_poisson, direct_sum, gauge_element};

    fn one_arrow() -> AlgebraSpec {
        let mut a = AlgebraSpec::new(&["1", "2"]).unwrap();
        a.add_generator("t", "1", "2", GenKind::Plain).unwrap();
        a
    }

    #[test]
    fn one_arrow_becomes_loop() {
        let ctx = fuse_algebra(&one_arrow(), "1", "2").unwrap();
        assert_eq!(ctx.result.num_vertices(), 1);
        assert_eq!(ctx.type_of(0), FusionType::Third);
        let g = ctx.result.generator(0);
        assert_eq!((g.tail, g.head), (0, 0));
        assert!(fuse_algebra(&one_arrow(), "1", "1").is_err());
        assert!(fuse_algebra(&one_arrow(), "1", "9").is_err());
    }

    #[test]
    fn direct_sum_types() {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("x", "1", "1", GenKind::Plain).unwrap();
        let mut b = AlgebraSpec::new(&["2"]).unwrap();
        b.add_generator("y", "2", "2", GenKind::Plain).unwrap();
        let s = direct_sum(&DoubleBracketSpec::zero(a), &DoubleBracketSpec::zero(b)).unwrap();
        let ctx = fuse_algebra(s.algebra(), "1", "2").unwrap();
        assert_eq!(ctx.types, vec![FusionType::First, FusionType::Fourth]);
    }

    #[test]
    fn trace_of_gauge_splits() {
        let mut a = AlgebraSpec::new(&["1", "2", "3"]).unwrap();
        for (n, t, h) in [("p", "1", "1"), ("q", "2", "1"), ("r", "1", "2"), ("s", "2", "2"), ("u", "2", "3"), ("v", "3", "1")] {
            a.add_generator(n, t, h, GenKind::Plain).unwrap();
        }
        let ctx = fuse_algebra(&a, "1", "2").unwrap();
        let sum = tr_e(&ctx, Side::Kept).add(&tr_e(&ctx, Side::Absorbed));
        let f1 = gauge_element(&ctx.result, ctx.kept_in_result());
        for g in ctx.result.base_generators() {
            assert_eq!(sum.value(g), f1.value(g), "generator {}", ctx.result.generator(g).name);
        }
        let (rep, pairs) = table_check(&ctx);
        assert!(rep.passed, "{:?}", rep.witnesses);
        assert_eq!(pairs.len(), 16);
    }

    #[test]
    fn fused_zero_bracket_on_one_arrow() {
        let br = DoubleBracketSpec::zero(one_arrow());
        assert!(check_quasi_poisson(&br).unwrap().passed);
        let ctx = fuse_algebra(br.algebra(), "1", "2").unwrap();
        let f = fused_bracket(&ctx, &br).unwrap();
        let t = ctx.result.gen(0);
        let one = ctx.result.one();
        let t2 = ctx.result.mul(&t, &t);
        let expected = (ctx.result.tensor(&t2, &one) - ctx.result.tensor(&one, &t2)).scale(&half());
        assert_eq!(f.get(0, 0).unwrap(), &expected);
        assert!(check_quasi_poisson(&f).unwrap().passed);
        let (rep, _) = kappa_check(&ctx, &br).unwrap();
        assert!(rep.passed);
    }
}
