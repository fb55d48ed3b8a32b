use std::collections::{BTreeMap, HashMap};

use crate::algebra::{AlgebraError, AlgebraSpec, GenKind, Letter, NcPoly, Tensor2, Word};

use super::{BracketError, Bundle, DoubleBracketSpec, MomentMapSpec};

fn sum_algebra(a1: &AlgebraSpec, a2: &AlgebraSpec) -> Result<AlgebraSpec, AlgebraError> {
    let mut labels: Vec<String> = a1.idempotents().to_vec();
    labels.extend(a2.idempotents().iter().cloned());
    let mut out = AlgebraSpec::new(&labels)?;
    let n1 = a1.num_vertices();
    let g1 = a1.num_generators();
    for g in a1.generators() {
        out.add_generator_at(&g.name, g.tail, g.head, g.kind.clone())?;
    }
    for g in a2.generators() {
        let kind = match &g.kind {
            GenKind::FormalInverse(d) => GenKind::FormalInverse(d.map_keys(|w| Some(AlgebraSpec::shift_word(w, g1, n1)))),
            k => k.clone(),
        };
        out.add_generator_at(&g.name, g.tail + n1, g.head + n1, kind)?;
    }
    Ok(out)
}

fn shift_t2(t: &Tensor2, gs: usize, vs: usize) -> Tensor2 {
    t.map_keys(|(x, y)| Some((AlgebraSpec::shift_word(x, gs, vs), AlgebraSpec::shift_word(y, gs, vs))))
}

/// Bracket on `A1 ⊕ A2`; mixed pairs are zero.
pub fn direct_sum(b1: &DoubleBracketSpec, b2: &DoubleBracketSpec) -> Result<DoubleBracketSpec, BracketError> {
    let (a1, a2) = (b1.algebra(), b2.algebra());
    let alg = sum_algebra(a1, a2)?;
    let (gs, vs) = (a1.num_generators(), a1.num_vertices());
    let mut values: BTreeMap<(usize, usize), Tensor2> = b1.values().clone();
    for (&(g, h), v) in b2.values() {
        values.insert((g + gs, h + gs), shift_t2(v, gs, vs));
    }
    for g in a1.base_generators() {
        for h in a2.base_generators() {
            values.insert((g, h + gs), Tensor2::zero());
            values.insert((h + gs, g), Tensor2::zero());
        }
    }
    Ok(DoubleBracketSpec::from_parts(alg, values))
}

/// Direct sum of bundles; the moment map is kept when both summands carry one.
pub fn direct_sum_bundles(x: &Bundle, y: &Bundle) -> Result<Bundle, BracketError> {
    let bracket = direct_sum(&x.bracket, &y.bracket)?;
    let moment_map = match (&x.moment_map, &y.moment_map) {
        (Some(m1), Some(m2)) => {
            let (gs, vs) = (x.algebra().num_generators(), x.algebra().num_vertices());
            let mut comps = m1.components().to_vec();
            comps.extend(m2.components().iter().map(|p| p.map_keys(|w| Some(AlgebraSpec::shift_word(w, gs, vs)))));
            Some(MomentMapSpec::new(bracket.algebra(), comps)?)
        }
        _ => None,
    };
    Ok(Bundle { bracket, moment_map })
}

/// Restriction to the corner `eAe` for `e = Σ_{s∈keep} e_s`.
///
/// `corner` lists the corner generators as paths between kept vertices
/// whose interior avoids the kept vertices; bracket values are the
/// compressions `(e⊗e)⟪a,b⟫(e⊗e)` rewritten in these generators.
pub fn restrict_to_corner(
    br: &DoubleBracketSpec,
    keep: &[usize],
    corner: &[(String, Word)],
) -> Result<DoubleBracketSpec, BracketError> {
    let alg = br.algebra();
    let mut vmap = vec![usize::MAX; alg.num_vertices()];
    let mut labels = Vec::new();
    for (i, &s) in keep.iter().enumerate() {
        if s >= alg.num_vertices() || vmap[s] != usize::MAX {
            return Err(BracketError::Invalid("invalid idempotent list".into()));
        }
        vmap[s] = i;
        labels.push(alg.label(s).to_string());
    }
    let mut out = AlgebraSpec::new(&labels)?;
    let mut lookup: HashMap<Word, Letter> = HashMap::new();
    for (i, (name, w)) in corner.iter().enumerate() {
        if w.is_empty() || vmap[w.src()] == usize::MAX || vmap[w.dst()] == usize::MAX {
            return Err(BracketError::Invalid(format!("corner generator `{name}` is not a path between kept idempotents")));
        }
        if w.letters()[..w.len() - 1].iter().any(|&l| vmap[alg.letter_head(l)] != usize::MAX) {
            return Err(BracketError::Invalid(format!("corner generator `{name}` passes through a kept idempotent")));
        }
        let kind = match w.letters() {
            [l] if !l.inv => match alg.kind(l.index()) {
                GenKind::FormalInverse(_) => {
                    return Err(BracketError::Invalid("formal inverses cannot be corner generators".into()))
                }
                k => k.clone(),
            },
            _ => GenKind::Plain,
        };
        let has_inverse = matches!(kind, GenKind::Invertible | GenKind::Cyclic(_));
        out.add_generator_at(name, vmap[w.src()], vmap[w.dst()], kind)?;
        lookup.insert(w.clone(), Letter::new(i));
        if has_inverse {
            let l = w.letters()[0];
            lookup.insert(alg.letter_word(Letter::inverse(l.index())), Letter::inverse(i));
        }
    }
    let factor = |w: &Word| -> Result<Word, BracketError> {
        if w.is_empty() {
            return Ok(Word::vertex(vmap[w.src()]));
        }
        let mut letters = Vec::new();
        let mut start = 0;
        for i in 0..w.len() {
            if vmap[alg.letter_head(w.letters()[i])] != usize::MAX {
                let piece = alg.subword(w, start, i + 1).expect("nonempty piece");
                let l = lookup.get(&piece).ok_or_else(|| {
                    BracketError::Invalid(format!("`{}` is not a product of corner generators", alg.fmt_word(w)))
                })?;
                letters.push(*l);
                start = i + 1;
            }
        }
        out.word(&letters)?.ok_or_else(|| BracketError::Invalid("corner word vanished".into()))
    };
    let e: NcPoly = keep.iter().map(|&s| (Word::vertex(s), crate::algebra::qi(1))).collect();
    let ev = br.evaluator();
    let mut values = BTreeMap::new();
    for (i, (_, wi)) in corner.iter().enumerate() {
        for (j, (_, wj)) in corner.iter().enumerate() {
            let v = ev.words(wi, wj)?;
            let v = alg.outer_act(&e, &alg.inner_act(&e, &v, &e), &e);
            let mut t = Tensor2::zero();
            for ((x, y), c) in &v {
                t.add_term((factor(x)?, factor(y)?), c.clone());
            }
            values.insert((i, j), t);
        }
    }
    Ok(DoubleBracketSpec::from_parts(out, values))
}
