use std::sync::OnceLock;

use dqp::algebra::{flip, tau, AlgebraSpec, Cycle3, Letter, NcPoly};
use dqp::brackets::{triple_bracket_with, Bundle};
use dqp::catalog::{self, SurfaceSpec};
use dqp::json;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json as j;

fn config() -> Config {
    Config { cases: 512, rng_seed: RngSeed::Fixed(0x5eed_0042), failure_persistence: None, ..Config::default() }
}

fn pool() -> &'static [Bundle] {
    static POOL: OnceLock<Vec<Bundle>> = OnceLock::new();
    POOL.get_or_init(|| {
        [
            ("free1", j!({"lambda": "1", "mu": "1", "nu": "3/4"})),
            ("free1", j!({"mu": "-1/2"})),
            ("nilpotent_free1", j!({"k": 4})),
            ("q1", j!({"case": "2", "delta": "1", "lambda": "2"})),
            ("q1", j!({"case": "3", "delta": "-1", "lambda": "1/3"})),
            ("q1", j!({"case": "1b", "gamma": "1", "alpha": "1/2", "moment_map": true})),
            ("free2", j!({"case": 1, "gamma0": "2", "gamma1": "1", "alpha": "3/2"})),
            ("free2", j!({"case": 7})),
            ("nilpotent_sum", j!({"orders": [3, 4]})),
            ("surface", j!({"genus": 1, "boundaries": 1})),
            ("vdb_quiver", j!({"vertices": ["1", "2"], "arrows": [["a", "1", "2"]]})),
            ("vdb_quiver", j!({"vertices": ["0", "1", "2"], "arrows": [["a", "1", "0"], ["b", "2", "0"]], "weights": {"a": "0", "b": "0"}})),
        ]
        .iter()
        .map(|(f, p)| catalog::build(f, p).unwrap_or_else(|e| panic!("{f} {p}: {e}")))
        .collect()
    })
}

fn group_like() -> &'static [AlgebraSpec] {
    static ALGS: OnceLock<Vec<AlgebraSpec>> = OnceLock::new();
    ALGS.get_or_init(|| {
        vec![
            catalog::surface(&SurfaceSpec::new(2, 1)).unwrap().algebra().clone(),
            catalog::build("surface", &j!({"genus": 0, "boundaries": 2, "weights": [3, 1]})).unwrap().algebra().clone(),
            catalog::build("vdb_quiver", &j!({"vertices": ["1", "2"], "arrows": [["a", "1", "2"], ["b", "2", "2"]], "weights": {"a": "0", "b": "0"}}))
                .unwrap()
                .algebra()
                .clone(),
        ]
    })
}

fn elems(alg: &AlgebraSpec, seed: u64, n: usize, terms: usize, len: usize) -> Vec<NcPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| alg.sample_poly(&mut rng, terms, len)).collect()
}

/// A walk along the quiver steered by `choices`; no reduction applied.
fn walk(alg: &AlgebraSpec, start: usize, choices: &[u8]) -> (usize, Vec<Letter>) {
    let letters = alg.checkable_letters();
    let s = start % alg.num_vertices();
    let (mut at, mut w): (usize, Vec<Letter>) = (s, Vec::new());
    for &c in choices {
        let opts: Vec<Letter> = letters.iter().copied().filter(|&l| alg.letter_tail(l) == at).collect();
        if opts.is_empty() {
            break;
        }
        // choices divisible by 3 undo the previous letter when possible
        let l = match w.last() {
            Some(&p) if c % 3 == 0 && alg.has_inverse_letter(p.index()) => Letter { gen: p.gen, inv: !p.inv },
            _ => opts[c as usize % opts.len()],
        };
        w.push(l);
        at = alg.letter_head(l);
    }
    (s, w)
}

fn cancel_at(mut w: Vec<Letter>, picks: &[usize]) -> Vec<Letter> {
    let mut k = 0;
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i].gen == w[i + 1].gen && w[i].inv != w[i + 1].inv).collect();
        if spots.is_empty() {
            return w;
        }
        let i = spots[picks.get(k).copied().unwrap_or(0) % spots.len()];
        k += 1;
        w.drain(i..i + 2);
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn leibniz_outer_and_inner(ix in 0usize..64, seed in any::<u64>()) {
        let b = &pool()[ix % pool().len()];
        let alg = b.algebra();
        let ev = b.bracket.evaluator();
        let v = elems(alg, seed, 3, 2, 3);
        let (a, x, y) = (&v[0], &v[1], &v[2]);
        let one = alg.one();
        let xy = alg.mul(x, y);
        let outer = ev.eval(a, &xy).unwrap() - alg.outer_act(x, &ev.eval(a, y).unwrap(), &one) - alg.outer_act(&one, &ev.eval(a, x).unwrap(), y);
        let inner = ev.eval(&xy, a).unwrap() - alg.inner_act(x, &ev.eval(y, a).unwrap(), &one) - alg.inner_act(&one, &ev.eval(x, a).unwrap(), y);
        prop_assert!(outer.is_zero(), "outer: {}", alg.fmt_t2(&outer));
        prop_assert!(inner.is_zero(), "inner: {}", alg.fmt_t2(&inner));
    }

    #[test]
    fn cyclic_antisymmetry_on_elements(ix in 0usize..64, seed in any::<u64>()) {
        let b = &pool()[ix % pool().len()];
        let alg = b.algebra();
        let ev = b.bracket.evaluator();
        let v = elems(alg, seed, 2, 3, 4);
        let r = ev.eval(&v[0], &v[1]).unwrap() + flip(&ev.eval(&v[1], &v[0]).unwrap());
        prop_assert!(r.is_zero(), "{}", alg.fmt_t2(&r));
    }

    #[test]
    fn bracket_is_bilinear(ix in 0usize..64, seed in any::<u64>()) {
        let b = &pool()[ix % pool().len()];
        let alg = b.algebra();
        let ev = b.bracket.evaluator();
        let v = elems(alg, seed, 3, 2, 3);
        let sum = v[0].clone() + v[1].clone();
        let r = ev.eval(&sum, &v[2]).unwrap() - ev.eval(&v[0], &v[2]).unwrap() - ev.eval(&v[1], &v[2]).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn triple_bracket_tau_invariant(ix in 0usize..64, seed in any::<u64>()) {
        let b = &pool()[ix % pool().len()];
        let alg = b.algebra();
        let ev = b.bracket.evaluator();
        let v = elems(alg, seed, 3, 1, 2);
        let abc = triple_bracket_with(&ev, &v[0], &v[1], &v[2]).unwrap();
        let bca = triple_bracket_with(&ev, &v[1], &v[2], &v[0]).unwrap();
        let r = abc.clone() - tau(Cycle3::Tau, &bca);
        prop_assert!(r.is_zero(), "{}", alg.fmt_t3(&r));
        prop_assert_eq!(tau(Cycle3::Tau, &tau(Cycle3::Tau, &tau(Cycle3::Tau, &abc))), abc);
    }

    #[test]
    fn multiplication_associative(ix in 0usize..64, seed in any::<u64>()) {
        let alg = pool()[ix % pool().len()].algebra();
        let v = elems(alg, seed, 3, 3, 3);
        prop_assert_eq!(alg.mul(&alg.mul(&v[0], &v[1]), &v[2]), alg.mul(&v[0], &alg.mul(&v[1], &v[2])));
        prop_assert_eq!(alg.mul(&alg.one(), &v[0]), v[0].clone());
    }

    #[test]
    fn normal_form_is_confluent(ix in 0usize..3, start in 0usize..4, choices in prop::collection::vec(any::<u8>(), 0..16), picks in prop::collection::vec(any::<usize>(), 16), cut in any::<usize>()) {
        let alg = &group_like()[ix];
        let (s, w) = walk(alg, start, &choices);
        let oracle = cancel_at(w.clone(), &picks);
        let direct = alg.normalize_letters(s, &w);
        let k = if w.is_empty() { 0 } else { cut % (w.len() + 1) };
        let mid = w[..k].last().map_or(s, |&l| alg.letter_head(l));
        let split = alg.normalize_letters(s, &w[..k]).zip(alg.normalize_letters(mid, &w[k..])).and_then(|(x, y)| alg.mul_words(&x, &y));
        if alg.generators().iter().all(|g| !matches!(g.kind, dqp::algebra::GenKind::Cyclic(_))) {
            prop_assert_eq!(direct.as_ref().map(|d| d.letters().to_vec()), Some(oracle));
        }
        prop_assert_eq!(split, direct);
    }

    #[test]
    fn flip_is_an_involution(ix in 0usize..64, seed in any::<u64>()) {
        let b = &pool()[ix % pool().len()];
        let alg = b.algebra();
        let v = elems(alg, seed, 2, 2, 3);
        let t = b.bracket.eval(&v[0], &v[1]).unwrap();
        prop_assert_eq!(flip(&flip(&t)), t);
    }

    #[test]
    fn bundle_json_round_trip(ix in 0usize..64) {
        let b = &pool()[ix % pool().len()];
        let text = serde_json::to_string(&json::bundle_to_value(b)).unwrap();
        let back = json::bundle_from_str(&text).unwrap();
        prop_assert_eq!(&back, b);
    }
}
