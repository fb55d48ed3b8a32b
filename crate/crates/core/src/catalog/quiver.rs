use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::algebra::{half, AlgebraSpec, GenKind, NcPoly, Q};
use crate::brackets::{direct_sum_bundles, Bundle, DoubleBracketSpec, MomentMapSpec};
use crate::fusion::fuse_sequence;

use super::{param_err, parse_rational, t2, word, CatalogError, CatalogResult, Params};

fn structural(msg: impl Into<String>) -> CatalogError {
    CatalogError::Structural(msg.into())
}

/// A quiver with weights `γ_a` and per-vertex orderings of the double.
///
/// Starred arrows are named `a*`. Without an explicit ordering, the arrows
/// with tail `s` are ordered as they appear in `a₁, a₁*, a₂, a₂*, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
    pub weights: BTreeMap<String, Q>,
    pub orderings: BTreeMap<String, Vec<String>>,
}

/// An arrow of the double quiver.
#[derive(Clone, Debug)]
struct DArrow {
    name: String,
    tail: usize,
    head: usize,
    /// Index of `a*` in the double.
    star: usize,
    original: bool,
    gamma: Q,
}

struct Double {
    arrows: Vec<DArrow>,
    /// `T_s` in order, as indices into `arrows`.
    order: Vec<Vec<usize>>,
}

impl Double {
    fn o(&self, s: usize, a: usize, b: usize) -> i64 {
        let pos = |x: usize| self.order[s].iter().position(|&y| y == x);
        match (pos(a), pos(b)) {
            (Some(i), Some(j)) if i < j => 1,
            (Some(i), Some(j)) if i > j => -1,
            _ => 0,
        }
    }

    fn all_gamma_zero(&self) -> bool {
        self.arrows.iter().all(|a| a.gamma.is_zero())
    }
}

impl QuiverSpec {
    pub fn new(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Self {
        QuiverSpec {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows.iter().map(|(a, t, h)| (a.to_string(), t.to_string(), h.to_string())).collect(),
            weights: BTreeMap::new(),
            orderings: BTreeMap::new(),
        }
    }

    pub fn with_weight(mut self, arrow: &str, gamma: Q) -> Self {
        self.weights.insert(arrow.to_string(), gamma);
        self
    }

    pub fn with_all_weights(mut self, gamma: Q) -> Self {
        for (a, _, _) in &self.arrows {
            self.weights.insert(a.clone(), gamma.clone());
        }
        self
    }

    pub fn with_ordering(mut self, vertex: &str, order: &[&str]) -> Self {
        self.orderings.insert(vertex.to_string(), order.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn from_params(p: &Params) -> CatalogResult<Self> {
        let vertices = match p.get("vertices") {
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(structural("vertices must be labels")),
                })
                .collect::<CatalogResult<Vec<_>>>()?,
            _ => return Err(structural("`vertices` must be a list of labels")),
        };
        let text = |x: &Value| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(structural("expected a label")),
        };
        let arrows = match p.get("arrows") {
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| match x {
                    Value::Array(t) if t.len() == 3 => Ok((text(&t[0])?, text(&t[1])?, text(&t[2])?)),
                    Value::Object(m) => {
                        let f = |k: &str| m.get(k).ok_or_else(|| structural(format!("arrow lacks `{k}`"))).and_then(text);
                        Ok((f("name")?, f("tail")?, f("head")?))
                    }
                    _ => Err(structural("arrows are [name, tail, head]")),
                })
                .collect::<CatalogResult<Vec<_>>>()?,
            None => Vec::new(),
            _ => return Err(structural("`arrows` must be a list")),
        };
        let mut weights = BTreeMap::new();
        match p.get("weights") {
            Some(Value::Object(m)) => {
                for (k, v) in m {
                    let q = match v {
                        Value::String(s) => parse_rational(s).map_err(param_err)?,
                        Value::Number(n) => Q::from_integer(n.as_i64().ok_or_else(|| param_err("weights: use fraction strings"))?.into()),
                        _ => return Err(param_err("weights must be rationals")),
                    };
                    weights.insert(k.clone(), q);
                }
            }
            None | Some(Value::Null) => {}
            _ => return Err(structural("`weights` must map arrows to rationals")),
        }
        let mut orderings = BTreeMap::new();
        match p.get("orderings") {
            Some(Value::Object(m)) => {
                for (k, v) in m {
                    let list = match v {
                        Value::Array(xs) => xs.iter().map(text).collect::<CatalogResult<Vec<_>>>()?,
                        _ => return Err(structural("an ordering is a list of arrow names")),
                    };
                    orderings.insert(k.clone(), list);
                }
            }
            None | Some(Value::Null) => {}
            _ => return Err(structural("`orderings` must map vertices to lists")),
        }
        Ok(QuiverSpec { vertices, arrows, weights, orderings })
    }

    fn vertex(&self, label: &str) -> CatalogResult<usize> {
        self.vertices.iter().position(|v| v == label).ok_or_else(|| structural(format!("unknown vertex `{label}`")))
    }

    fn double(&self) -> CatalogResult<Double> {
        if self.vertices.is_empty() {
            return Err(structural("a quiver needs at least one vertex"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if self.vertices[..i].contains(v) {
                return Err(structural(format!("duplicate vertex `{v}`")));
            }
        }
        let mut arrows = Vec::new();
        for (name, t, h) in &self.arrows {
            if name.ends_with('*') {
                return Err(structural(format!("arrow `{name}`: names ending in `*` are reserved for the double")));
            }
            let (t, h) = (self.vertex(t)?, self.vertex(h)?);
            let gamma = self.weights.get(name).cloned().unwrap_or_else(Q::one);
            let i = arrows.len();
            arrows.push(DArrow { name: name.clone(), tail: t, head: h, star: i + 1, original: true, gamma: gamma.clone() });
            arrows.push(DArrow { name: format!("{name}*"), tail: h, head: t, star: i, original: false, gamma });
        }
        for (i, a) in arrows.iter().enumerate() {
            if arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(structural(format!("duplicate arrow `{}`", a.name)));
            }
        }
        for k in self.weights.keys() {
            if !self.arrows.iter().any(|(a, _, _)| a == k) {
                return Err(structural(format!("weight for unknown arrow `{k}`")));
            }
        }
        let mut order = Vec::new();
        for (s, label) in self.vertices.iter().enumerate() {
            let tails: Vec<usize> = (0..arrows.len()).filter(|&i| arrows[i].tail == s).collect();
            match self.orderings.get(label) {
                None => order.push(tails),
                Some(list) => {
                    let mut idx = Vec::new();
                    for n in list {
                        let i = arrows
                            .iter()
                            .position(|a| &a.name == n)
                            .ok_or_else(|| structural(format!("ordering at `{label}`: unknown arrow `{n}`")))?;
                        if arrows[i].tail != s {
                            return Err(structural(format!("ordering at `{label}`: `{n}` does not start there")));
                        }
                        if idx.contains(&i) {
                            return Err(structural(format!("ordering at `{label}`: `{n}` repeated")));
                        }
                        idx.push(i);
                    }
                    if idx.len() != tails.len() {
                        return Err(structural(format!("ordering at `{label}` must list every arrow starting there")));
                    }
                    order.push(idx);
                }
            }
        }
        for k in self.orderings.keys() {
            self.vertex(k)?;
        }
        Ok(Double { arrows, order })
    }
}

fn e(label: &str) -> String {
    format!("e{label}")
}

fn inverse_name(a: &str) -> String {
    format!("inv_{a}")
}

/// `(γ_x e + x x*)^{±1}` as an element; `inverse` picks the `−1` power.
fn local_factor(alg: &AlgebraSpec, d: &Double, x: usize, inverse: bool, group_like: bool) -> CatalogResult<NcPoly> {
    let a = &d.arrows[x];
    let b = &d.arrows[a.star];
    if group_like {
        if inverse {
            word(alg, &format!("{}^-1 {}^-1", b.name, a.name))
        } else {
            word(alg, &format!("{} {}", a.name, b.name))
        }
    } else if inverse {
        word(alg, &inverse_name(&a.name))
    } else {
        Ok(word(alg, &e(alg.label(a.tail)))?.scale(&a.gamma) + word(alg, &format!("{} {}", a.name, b.name))?)
    }
}

fn add_localizations(alg: &mut AlgebraSpec, d: &Double, xs: &[usize]) -> CatalogResult<()> {
    for &x in xs {
        let def = local_factor(alg, d, x, false, false)?;
        let a = &d.arrows[x];
        alg.add_generator_at(&inverse_name(&a.name), a.tail, a.tail, GenKind::FormalInverse(def))?;
    }
    Ok(())
}

/// Localized double quiver with the closed-form bracket and `Φ_s = Π_{a∈T_s} (γ_a e_s + aa*)^{ε(a)}`.
///
/// With all `γ_a = 0` the arrows are group-like; otherwise each
/// `(γ_a e + aa*)` gets a formal inverse `inv_a`.
pub fn vdb_quiver(q: &QuiverSpec) -> CatalogResult<Bundle> {
    let d = q.double()?;
    let group_like = d.all_gamma_zero();
    let kind = if group_like { GenKind::Invertible } else { GenKind::Plain };
    let mut alg = AlgebraSpec::new(&q.vertices)?;
    for a in &d.arrows {
        alg.add_generator_at(&a.name, a.tail, a.head, kind.clone())?;
    }
    if !group_like {
        add_localizations(&mut alg, &d, &(0..d.arrows.len()).collect::<Vec<_>>())?;
    }
    let h = half();
    let lab = |s: usize| e(&q.vertices[s]);
    let mut br = DoubleBracketSpec::zero(alg.clone());
    for (b, ab) in d.arrows.iter().enumerate() {
        for (c, ac) in d.arrows.iter().enumerate() {
            let (bn, cn) = (ab.name.as_str(), ac.name.as_str());
            let value = if b == c {
                let o = Q::from_integer(d.o(ab.tail, b, ab.star).into()) * &h;
                if o.is_zero() {
                    crate::algebra::Tensor2::zero()
                } else {
                    let bb = format!("{bn} {bn}");
                    t2(&alg, &[(o.clone(), &bb, &lab(ab.tail)), (-o, &lab(ab.head), &bb)])?
                }
            } else if c == ab.star {
                let (orig, other) = if ab.original { (b, c) } else { (c, b) };
                let (a, s) = (&d.arrows[orig], &d.arrows[other]);
                let o = Q::from_integer(d.o(a.tail, orig, other).into()) * &h;
                let (an, sn) = (a.name.as_str(), s.name.as_str());
                let v = t2(
                    &alg,
                    &[
                        (a.gamma.clone(), &lab(a.head), &lab(a.tail)),
                        (h.clone(), &format!("{sn} {an}"), &lab(a.tail)),
                        (h.clone(), &lab(a.head), &format!("{an} {sn}")),
                        (o.clone(), sn, an),
                        (-o, an, sn),
                    ],
                )?;
                if ab.original {
                    v
                } else {
                    -crate::algebra::flip(&v)
                }
            } else {
                let star_b = ab.star;
                let star_c = ac.star;
                let c1 = Q::from_integer(d.o(ab.tail, b, c).into()) * &h;
                let c2 = Q::from_integer(d.o(ab.head, star_b, star_c).into()) * &h;
                let c3 = Q::from_integer(d.o(ab.tail, b, star_c).into()) * &h;
                let c4 = Q::from_integer(d.o(ab.head, star_b, c).into()) * &h;
                let mut terms: Vec<(Q, String, String)> = Vec::new();
                if !c1.is_zero() {
                    terms.push((-c1, bn.into(), cn.into()));
                }
                if !c2.is_zero() {
                    terms.push((-c2, cn.into(), bn.into()));
                }
                if !c3.is_zero() {
                    terms.push((c3, format!("{cn} {bn}"), lab(ab.tail)));
                }
                if !c4.is_zero() {
                    terms.push((c4, lab(ab.head), format!("{bn} {cn}")));
                }
                let refs: Vec<(Q, &str, &str)> = terms.iter().map(|(c, x, y)| (c.clone(), x.as_str(), y.as_str())).collect();
                t2(&alg, &refs)?
            };
            br.set_raw(b, c, value)?;
        }
    }
    let mut comps = Vec::new();
    for s in 0..q.vertices.len() {
        let mut phi = alg.e(s);
        for &x in &d.order[s] {
            let f = local_factor(&alg, &d, x, !d.arrows[x].original, group_like)?;
            phi = alg.mul(&phi, &f);
        }
        comps.push(phi);
    }
    let mm = MomentMapSpec::new(&alg, comps)?;
    Ok(Bundle::new(br, Some(mm)))
}

/// The same quiver built from one-arrow blocks `b: v_b → v_{b*}` with
/// `⟪b,b*⟫ = γ e_{v_b*}⊗e_{v_b} + ½ b*b⊗e_{v_b} + ½ e_{v_b*}⊗bb*`, fused
/// vertex by vertex along the orderings.
pub fn vdb_by_fusion(q: &QuiverSpec) -> CatalogResult<Bundle> {
    let d = q.double()?;
    let group_like = d.all_gamma_zero();
    let kind = if group_like { GenKind::Invertible } else { GenKind::Plain };
    // the minimal arrow of T_s carries the label s
    let mut vlabel: Vec<String> = Vec::new();
    for (x, a) in d.arrows.iter().enumerate() {
        let first = d.order[a.tail].first() == Some(&x);
        vlabel.push(if first { q.vertices[a.tail].clone() } else { format!("v({})", a.name) });
    }
    for l in &vlabel {
        if l.starts_with("v(") && q.vertices.contains(l) {
            return Err(structural(format!("vertex label `{l}` collides with an internal label")));
        }
    }
    let h = half();
    let mut blocks: Vec<Bundle> = Vec::new();
    for (x, a) in d.arrows.iter().enumerate() {
        if !a.original {
            continue;
        }
        let y = a.star;
        let (lb, ls) = (vlabel[x].as_str(), vlabel[y].as_str());
        let mut alg = AlgebraSpec::new(&[lb, ls])?;
        let (bn, sn) = (a.name.as_str(), d.arrows[y].name.as_str());
        alg.add_generator(bn, lb, ls, kind.clone())?;
        alg.add_generator(sn, ls, lb, kind.clone())?;
        if !group_like {
            for (g, v) in [(x, lb), (y, ls)] {
                let ag = &d.arrows[g];
                let def = word(&alg, &e(v))?.scale(&ag.gamma) + word(&alg, &format!("{} {}", ag.name, d.arrows[ag.star].name))?;
                alg.add_generator(&inverse_name(&ag.name), v, v, GenKind::FormalInverse(def))?;
            }
        }
        let mut br = DoubleBracketSpec::zero(alg.clone());
        br.set(
            0,
            1,
            t2(
                &alg,
                &[(a.gamma.clone(), &e(ls), &e(lb)), (h.clone(), &format!("{sn} {bn}"), &e(lb)), (h.clone(), &e(ls), &format!("{bn} {sn}"))],
            )?,
        )?;
        let phi_b = if group_like {
            word(&alg, &format!("{bn} {sn}"))?
        } else {
            word(&alg, &e(lb))?.scale(&a.gamma) + word(&alg, &format!("{bn} {sn}"))?
        };
        let phi_s = if group_like { word(&alg, &format!("{bn}^-1 {sn}^-1"))? } else { word(&alg, &inverse_name(sn))? };
        let mm = MomentMapSpec::new(&alg, vec![phi_b, phi_s])?;
        blocks.push(Bundle::new(br, Some(mm)));
    }
    for (s, label) in q.vertices.iter().enumerate() {
        if d.order[s].is_empty() {
            let alg = AlgebraSpec::new(&[label.as_str()])?;
            let mm = MomentMapSpec::new(&alg, vec![alg.e(0)])?;
            blocks.push(Bundle::new(DoubleBracketSpec::zero(alg), Some(mm)));
        }
    }
    let mut sum = blocks[0].clone();
    for b in &blocks[1..] {
        sum = direct_sum_bundles(&sum, b)?;
    }
    let mut steps = Vec::new();
    for (s, label) in q.vertices.iter().enumerate() {
        for &x in d.order[s].iter().skip(1) {
            steps.push((label.clone(), vlabel[x].clone()));
        }
    }
    let (br, mm) = fuse_sequence(&sum.bracket, sum.moment_map.as_ref(), &steps)?;
    Ok(Bundle::new(br, mm))
}

pub(super) fn vdb_family(p: &Params, _check: bool) -> CatalogResult<Bundle> {
    vdb_quiver(&QuiverSpec::from_params(p)?)
}

pub(super) fn vdb_fusion_family(p: &Params, _check: bool) -> CatalogResult<Bundle> {
    vdb_by_fusion(&QuiverSpec::from_params(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;
    use crate::brackets::{check_cyclic_antisymmetry, check_moment_map, check_quasi_poisson, MomentCheckMode};
    use crate::catalog::bundle_differences;
    use crate::representation::DimVector;

    fn agree(q: &QuiverSpec) {
        let closed = vdb_quiver(q).unwrap();
        let fused = vdb_by_fusion(q).unwrap();
        let diff = bundle_differences(&closed, &fused).unwrap();
        assert!(diff.is_empty(), "{diff:#?}");
    }

    #[test]
    fn one_arrow_basic_bracket() {
        let q = QuiverSpec::new(&["1", "2"], &[("t", "1", "2")]);
        let b = vdb_quiver(&q).unwrap();
        let alg = b.algebra();
        assert_eq!(alg.fmt_t2(b.bracket.get(0, 1).unwrap()), "e2 ⊗ e1 + 1/2 e2 ⊗ t t* + 1/2 t* t ⊗ e1");
        agree(&q);
        let mode = MomentCheckMode::Numeric { dims: DimVector::new(vec![1, 1]).unwrap(), trials: 5, seed: 11 };
        assert!(check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &mode).unwrap().passed);
    }

    #[test]
    fn loop_bracket() {
        let q = QuiverSpec::new(&["1"], &[("a", "1", "1")]).with_all_weights(qi(0));
        let b = vdb_quiver(&q).unwrap();
        let alg = b.algebra();
        assert_eq!(alg.fmt_t2(b.bracket.get(0, 0).unwrap()), "-1/2 e1 ⊗ a a + 1/2 a a ⊗ e1");
        assert!(check_quasi_poisson(&b.bracket).unwrap().passed);
        assert!(check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &MomentCheckMode::Symbolic).unwrap().passed);
        agree(&q);
        agree(&q.clone().with_ordering("1", &["a*", "a"]));
    }

    #[test]
    fn disjoint_arrows_commute() {
        let q = QuiverSpec::new(&["1", "2", "3", "4"], &[("b", "1", "2"), ("c", "3", "4")]);
        let b = vdb_quiver(&q).unwrap();
        assert!(b.bracket.get(0, 2).unwrap().is_zero());
        agree(&q);
    }

    #[test]
    fn star_orderings() {
        let base = QuiverSpec::new(&["0", "1", "2"], &[("a", "1", "0"), ("b", "2", "0")]);
        for order in [["a*", "b*"], ["b*", "a*"]] {
            let q = base.clone().with_ordering("0", &order).with_all_weights(qi(0));
            let b = vdb_quiver(&q).unwrap();
            assert!(check_quasi_poisson(&b.bracket).unwrap().passed);
            assert!(check_cyclic_antisymmetry(&b.bracket, 30, 1).unwrap().passed);
            assert!(check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &MomentCheckMode::Symbolic).unwrap().passed);
            agree(&q);
            agree(&base.clone().with_ordering("0", &order));
        }
    }

    #[test]
    fn bad_orderings() {
        let q = QuiverSpec::new(&["1", "2"], &[("t", "1", "2")]);
        assert!(matches!(vdb_quiver(&q.clone().with_ordering("1", &["t*"])), Err(CatalogError::Structural(_))));
        assert!(matches!(vdb_quiver(&q.clone().with_ordering("1", &["t", "t"])), Err(CatalogError::Structural(_))));
        assert!(matches!(vdb_quiver(&q.with_ordering("9", &[])), Err(CatalogError::Structural(_))));
    }
}
