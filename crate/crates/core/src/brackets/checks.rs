use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{flip, half, q, tau, AlgebraSpec, Cycle3, Letter, NcPoly, Tensor2, Tensor3};
use crate::representation::{moment_map_numeric_check, DimVector};

use super::{BracketError, CheckReport, DoubleBracketSpec, Evaluator, MomentMapSpec};

fn part(ev: &Evaluator<'_>, a: &NcPoly, bc: &Tensor2) -> Result<Tensor3, BracketError> {
    let alg = ev.bracket().algebra();
    let mut out = Tensor3::zero();
    for ((x, y), c) in bc {
        let inner = ev.eval(a, &NcPoly::basis(x.clone()))?;
        out += alg.append(&inner, y, c);
    }
    Ok(out)
}

/// `⟪a,b,c⟫ = ⟪a,⟪b,c⟫'⟫⊗⟪b,c⟫'' + τ⟪b,⟪c,a⟫'⟫⊗⟪c,a⟫'' + τ²⟪c,⟪a,b⟫'⟫⊗⟪a,b⟫''`.
pub fn triple_bracket_with(ev: &Evaluator<'_>, a: &NcPoly, b: &NcPoly, c: &NcPoly) -> Result<Tensor3, BracketError> {
    let mut out = part(ev, a, &ev.eval(b, c)?)?;
    out += tau(Cycle3::Tau, &part(ev, b, &ev.eval(c, a)?)?);
    out += tau(Cycle3::Tau2, &part(ev, c, &ev.eval(a, b)?)?);
    Ok(out)
}

pub fn triple_bracket(br: &DoubleBracketSpec, a: &NcPoly, b: &NcPoly, c: &NcPoly) -> Result<Tensor3, BracketError> {
    triple_bracket_with(&br.evaluator(), a, b, c)
}

/// The idempotent-sum expression a quasi-Poisson triple bracket must equal.
pub fn qp_anomaly(alg: &AlgebraSpec, a: &NcPoly, b: &NcPoly, c: &NcPoly) -> Tensor3 {
    let m = |x: &NcPoly, y: &NcPoly| alg.mul(x, y);
    let mut out = Tensor3::zero();
    for s in 0..alg.num_vertices() {
        let e = alg.e(s);
        let ea = m(&e, a);
        let ae = m(a, &e);
        let eb = m(&e, b);
        let be = m(b, &e);
        let ec = m(&e, c);
        let ce = m(c, &e);
        let cea = m(&ce, a);
        let aeb = m(&ae, b);
        let bec = m(&be, c);
        out += alg.tensor3(&cea, &eb, &e);
        out -= alg.tensor3(&cea, &e, &be);
        out -= alg.tensor3(&ce, &aeb, &e);
        out += alg.tensor3(&ce, &ae, &be);
        out -= alg.tensor3(&ea, &eb, &ec);
        out += alg.tensor3(&ea, &e, &bec);
        out += alg.tensor3(&e, &aeb, &ec);
        out -= alg.tensor3(&e, &ae, &bec);
    }
    out.scale(&q(1, 4))
}

/// Every stored value `v` for `(g,h)` lies in `e_{t(h)} A e_{h(g)} ⊗ e_{t(g)} A e_{h(h)}`.
pub fn check_typing(br: &DoubleBracketSpec) -> CheckReport {
    let alg = br.algebra();
    let mut rep = CheckReport::new("typing");
    for (&(g, h), v) in br.values() {
        let (gg, hh) = (alg.generator(g), alg.generator(h));
        let ok = v.keys().all(|(x, y)| x.src() == hh.tail && x.dst() == gg.head && y.src() == gg.tail && y.dst() == hh.head);
        rep.record(ok, vec![gg.name.clone(), hh.name.clone()], || alg.fmt_t2(v));
    }
    rep
}

/// Cyclic antisymmetry on stored pairs and on `samples` random word pairs.
pub fn check_cyclic_antisymmetry(br: &DoubleBracketSpec, samples: usize, seed: u64) -> Result<CheckReport, BracketError> {
    let alg = br.algebra();
    let mut rep = CheckReport::new("cyclic-antisymmetry");
    for (&(g, h), v) in br.values() {
        let (a, b) = br.pair_names(g, h);
        match br.get(h, g) {
            Some(w) => {
                let residual = v + &flip(w);
                rep.record(residual.is_zero(), vec![a, b], || alg.fmt_t2(&residual));
            }
            None => rep.record(false, vec![a.clone(), b.clone()], || format!("⟪{b},{a}⟫ not stored")),
        }
    }
    if !rep.passed {
        return Ok(rep);
    }
    let ev = br.evaluator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let u = NcPoly::basis(alg.sample_word(&mut rng, 4));
        let w = NcPoly::basis(alg.sample_word(&mut rng, 4));
        let residual = ev.eval(&u, &w)? + flip(&ev.eval(&w, &u)?);
        rep.record(residual.is_zero(), vec![alg.fmt_poly(&u), alg.fmt_poly(&w)], || alg.fmt_t2(&residual));
    }
    Ok(rep)
}

fn letter_poly(alg: &AlgebraSpec, l: Letter) -> NcPoly {
    NcPoly::basis(alg.letter_word(l))
}

/// Triple bracket equals the anomaly on all ordered triples of base generators.
pub fn check_quasi_poisson(br: &DoubleBracketSpec) -> Result<CheckReport, BracketError> {
    let alg = br.algebra();
    let reach = alg.reachability();
    let gens: Vec<Letter> = alg.base_generators().into_iter().map(Letter::new).collect();
    let ev = br.evaluator();
    let mut rep = CheckReport::new("quasi-poisson");
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                let (ta, ha) = (alg.letter_tail(a), alg.letter_head(a));
                let (tb, hb) = (alg.letter_tail(b), alg.letter_head(b));
                let (tc, hc) = (alg.letter_tail(c), alg.letter_head(c));
                if !(reach[tc][ha] && reach[ta][hb] && reach[tb][hc]) {
                    continue;
                }
                let (pa, pb, pc) = (letter_poly(alg, a), letter_poly(alg, b), letter_poly(alg, c));
                let residual = triple_bracket_with(&ev, &pa, &pb, &pc)? - qp_anomaly(alg, &pa, &pb, &pc);
                rep.record(residual.is_zero(), vec![alg.symbol(a), alg.symbol(b), alg.symbol(c)], || {
                    alg.fmt_t3(&residual)
                });
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub enum MomentCheckMode {
    Symbolic,
    /// Exact evaluation at seeded rational representation points.
    Numeric { dims: DimVector, trials: usize, seed: u64 },
}

/// `⟪Φ_s, a⟫ = ½(a e_s ⊗ Φ_s − e_s ⊗ Φ_s a + a Φ_s ⊗ e_s − Φ_s ⊗ e_s a)` for every `s` and generator `a`.
pub fn check_moment_map(br: &DoubleBracketSpec, mm: &MomentMapSpec, mode: &MomentCheckMode) -> Result<CheckReport, BracketError> {
    let alg = br.algebra();
    if mm.components().len() != alg.num_vertices() {
        return Err(BracketError::Invalid("moment map has the wrong number of components".into()));
    }
    match mode {
        MomentCheckMode::Numeric { dims, trials, seed } => moment_map_numeric_check(br, mm, dims, *trials, *seed),
        MomentCheckMode::Symbolic => {
            for (s, phi) in mm.components().iter().enumerate() {
                if alg.poly_contains_formal(phi) {
                    return Err(BracketError::DeferToNumeric(format!("Φ_{} = {}", alg.label(s), alg.fmt_poly(phi))));
                }
            }
            let ev = br.evaluator();
            let mut rep = CheckReport::new("moment-map");
            for (s, phi) in mm.components().iter().enumerate() {
                for l in alg.checkable_letters() {
                    let a = letter_poly(alg, l);
                    let residual = ev.eval(phi, &a)? - moment_rhs(alg, s, phi, &a);
                    rep.record(residual.is_zero(), vec![format!("Φ_{}", alg.label(s)), alg.symbol(l)], || {
                        alg.fmt_t2(&residual)
                    });
                }
            }
            Ok(rep)
        }
    }
}

pub fn moment_rhs(alg: &AlgebraSpec, s: usize, phi: &NcPoly, a: &NcPoly) -> Tensor2 {
    let e = alg.e(s);
    let mut out = alg.tensor(&alg.mul(a, &e), phi);
    out -= alg.tensor(&e, &alg.mul(phi, a));
    out += alg.tensor(&alg.mul(a, phi), &e);
    out -= alg.tensor(phi, &alg.mul(&e, a));
    out.scale(&half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GenKind;

    fn free1(l: Q3, m: Q3, n: Q3) -> DoubleBracketSpec {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("t", "1", "1", GenKind::Plain).unwrap();
        let t = a.gen(0);
        let one = a.one();
        let t2 = a.mul(&t, &t);
        let v = (a.tensor(&t, &one) - a.tensor(&one, &t)).scale(&q(l.0, l.1))
            + (a.tensor(&t2, &one) - a.tensor(&one, &t2)).scale(&q(m.0, m.1))
            + (a.tensor(&t2, &t) - a.tensor(&t, &t2)).scale(&q(n.0, n.1));
        let mut br = DoubleBracketSpec::zero(a);
        br.set(0, 0, v).unwrap();
        br
    }
    type Q3 = (i64, i64);

    #[test]
    fn idempotent_arguments_vanish() {
        let br = free1((0, 1), (1, 2), (0, 1));
        let a = br.algebra();
        assert!(br.eval(&a.gen(0), &a.e(0)).unwrap().is_zero());
        assert!(br.eval(&a.e(0), &a.gen(0)).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_t_squared() {
        // ⟪t,t²⟫ = ⟪t,t⟫t + t⟪t,t⟫ with ⟪t,t⟫ = ½(t²⊗1 − 1⊗t²)
        let br = free1((0, 1), (1, 2), (0, 1));
        let a = br.algebra();
        let w = |s: &str| a.parse_word_str(s).unwrap();
        let expected = (a.tensor(&w("t t"), &w("t")) - a.tensor(&w("e1"), &w("t t t")) + a.tensor(&w("t t t"), &w("e1"))
            - a.tensor(&w("t"), &w("t t")))
        .scale(&half());
        assert_eq!(br.eval(&w("t"), &w("t t")).unwrap(), expected);
    }

    #[test]
    fn localization_on_inverse() {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("t", "1", "1", GenKind::Invertible).unwrap();
        let w = |s: &str| a.parse_word_str(s).unwrap();
        let mut br = DoubleBracketSpec::zero(a.clone());
        br.set(0, 0, (a.tensor(&w("t t"), &w("e1")) - a.tensor(&w("e1"), &w("t t"))).scale(&half())).unwrap();
        let expected = -(a.tensor(&w("t"), &w("t^-1")) - a.tensor(&w("t^-1"), &w("t"))).scale(&half());
        assert_eq!(br.eval(&w("t"), &w("t^-1")).unwrap(), expected);
        assert!(br.eval(&w("t"), &w("t t^-1")).unwrap().is_zero());
    }

    #[test]
    fn free1_triple_bracket_closed_form() {
        // ⟪t,t,t⟫ = (μ²−λν)(1+τ+τ²)(1⊗t²⊗t − 1⊗t⊗t²)
        for (l, m, n) in [((1, 1), (1, 2), (0, 1)), ((2, 1), (3, 1), (1, 1)), ((0, 1), (0, 1), (0, 1))] {
            let br = free1(l, m, n);
            let a = br.algebra();
            let w = |s: &str| a.parse_word_str(s).unwrap();
            let t = w("t");
            let base = a.tensor3(&w("e1"), &w("t t"), &t) - a.tensor3(&w("e1"), &t, &w("t t"));
            let sym = &(&base + &tau(Cycle3::Tau, &base)) + &tau(Cycle3::Tau2, &base);
            let c = q(m.0, m.1) * q(m.0, m.1) - q(l.0, l.1) * q(n.0, n.1);
            assert_eq!(triple_bracket(&br, &t, &t, &t).unwrap(), sym.scale(&c));
            assert_eq!(qp_anomaly(a, &t, &t, &t), sym.scale(&q(1, 4)));
        }
    }

    #[test]
    fn anomaly_vanishes_on_idempotents_and_single_arrow() {
        let mut a = AlgebraSpec::new(&["1", "2"]).unwrap();
        a.add_generator("t", "1", "2", GenKind::Plain).unwrap();
        let t = a.gen(0);
        assert!(qp_anomaly(&a, &t, &t, &t).is_zero());
        for s in 0..2 {
            assert!(qp_anomaly(&a, &a.e(s), &t, &t).is_zero());
            assert!(qp_anomaly(&a, &t, &a.e(s), &t).is_zero());
        }
        assert!(check_quasi_poisson(&DoubleBracketSpec::zero(a)).unwrap().passed);
    }

    #[test]
    fn quasi_poisson_checker_verdicts() {
        assert!(check_quasi_poisson(&free1((0, 1), (1, 2), (0, 1))).unwrap().passed);
        assert!(check_quasi_poisson(&free1((1, 1), (0, 1), (-1, 4))).unwrap().passed);
        assert!(!check_quasi_poisson(&free1((0, 1), (1, 1), (0, 1))).unwrap().passed);
        assert!(!check_quasi_poisson(&free1((0, 1), (0, 1), (0, 1))).unwrap().passed);
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("t", "1", "1", GenKind::Plain).unwrap();
        a.add_generator("s", "1", "1", GenKind::Plain).unwrap();
        let mut br = DoubleBracketSpec::zero(a.clone());
        br.set_raw(0, 1, a.tensor(&a.gen(0), &a.one())).unwrap();
        let rep = check_cyclic_antisymmetry(&br, 10, 1).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.witnesses[0].inputs, vec!["t".to_string(), "s".to_string()]);
        assert!(check_cyclic_antisymmetry(&free1((0, 1), (1, 2), (0, 1)), 20, 3).unwrap().passed);
        assert!(check_cyclic_antisymmetry(&DoubleBracketSpec::zero(a), 5, 3).unwrap().passed);
    }

    #[test]
    fn moment_map_on_laurent_line() {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("t", "1", "1", GenKind::Invertible).unwrap();
        let w = |s: &str| a.parse_word_str(s).unwrap();
        let mut br = DoubleBracketSpec::zero(a.clone());
        br.set(0, 0, (a.tensor(&w("t t"), &w("e1")) - a.tensor(&w("e1"), &w("t t"))).scale(&half())).unwrap();
        let ok = MomentMapSpec::from_element(&a, &w("t"));
        assert!(check_moment_map(&br, &ok, &MomentCheckMode::Symbolic).unwrap().passed);
        let bad = MomentMapSpec::from_element(&a, &w("t t"));
        assert!(!check_moment_map(&br, &bad, &MomentCheckMode::Symbolic).unwrap().passed);
    }
}
