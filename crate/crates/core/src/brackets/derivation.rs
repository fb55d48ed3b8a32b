use std::collections::BTreeMap;

use crate::algebra::{tau, AlgebraSpec, Cycle3, GenKind, Letter, NcPoly, Q, Tensor2, Tensor3, Word};

use super::DoubleBracketSpec;

/// A `B`-linear double derivation `A → A⊗A` (outer bimodule), given on base generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleDerivation {
    algebra: AlgebraSpec,
    values: BTreeMap<usize, Tensor2>,
}

impl DoubleDerivation {
    pub fn zero(algebra: AlgebraSpec) -> Self {
        DoubleDerivation { algebra, values: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn set(&mut self, g: usize, v: Tensor2) {
        self.values.insert(g, v);
    }

    pub fn value(&self, g: usize) -> Tensor2 {
        self.values.get(&g).cloned().unwrap_or_default()
    }

    pub fn apply_letter(&self, l: Letter) -> Tensor2 {
        let alg = &self.algebra;
        if l.inv {
            let w = alg.letter_word(l);
            return -alg.outer_word(Some(&w), &self.apply_letter(l.base()), Some(&w));
        }
        if let GenKind::FormalInverse(d) = alg.kind(l.index()) {
            let z = alg.letter_word(l);
            return -alg.outer_word(Some(&z), &self.apply(d), Some(&z));
        }
        self.value(l.index())
    }

    pub fn apply_word(&self, w: &Word) -> Tensor2 {
        let alg = &self.algebra;
        let mut out = Tensor2::zero();
        for j in 0..w.len() {
            let d = self.apply_letter(w.letters()[j]);
            if d.is_zero() {
                continue;
            }
            let pre = alg.subword(w, 0, j);
            let suf = alg.subword(w, j + 1, w.len());
            out += alg.outer_word(pre.as_ref(), &d, suf.as_ref());
        }
        out
    }

    pub fn apply(&self, p: &NcPoly) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (w, c) in p {
            out.add_scaled(&self.apply_word(w), c);
        }
        out
    }

    /// `(b δ c)(a) = δ(a)' c ⊗ b δ(a)''`.
    pub fn scaled(&self, b: &NcPoly, c: &NcPoly) -> Self {
        let values = self.values.iter().map(|(g, v)| (*g, self.algebra.inner_act(b, v, c))).collect();
        DoubleDerivation { algebra: self.algebra.clone(), values }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let values = self.values.iter().map(|(g, v)| (*g, v.scale(c))).collect();
        DoubleDerivation { algebra: self.algebra.clone(), values }
    }

    pub fn add(&self, other: &DoubleDerivation) -> Self {
        let mut values = self.values.clone();
        for (g, v) in &other.values {
            *values.entry(*g).or_default() += v;
        }
        DoubleDerivation { algebra: self.algebra.clone(), values }
    }
}

/// `E_s(a) = a e_s ⊗ e_s − e_s ⊗ e_s a`.
pub fn gauge_element(alg: &AlgebraSpec, s: usize) -> DoubleDerivation {
    let e = alg.e(s);
    let mut d = DoubleDerivation::zero(alg.clone());
    for g in alg.base_generators() {
        let a = alg.gen(g);
        d.set(g, alg.tensor(&alg.mul(&a, &e), &e) - alg.tensor(&e, &alg.mul(&e, &a)));
    }
    d
}

/// `Σ y'x'' ⊗ x'y''`.
pub fn pair_product(alg: &AlgebraSpec, x: &Tensor2, y: &Tensor2) -> Tensor2 {
    let mut out = Tensor2::zero();
    for ((x1, x2), a) in x {
        for ((y1, y2), b) in y {
            let (Some(l), Some(r)) = (alg.mul_words(y1, x2), alg.mul_words(x1, y2)) else { continue };
            out.add_term((l, r), a * b);
        }
    }
    out
}

/// The double bracket of the bivector `δ1 δ2`:
/// `⟪b,c⟫ = δ2(c)'δ1(b)'' ⊗ δ1(b)'δ2(c)'' − δ1(c)'δ2(b)'' ⊗ δ2(b)'δ1(c)''`.
pub fn differential_double(d1: &DoubleDerivation, d2: &DoubleDerivation) -> DoubleBracketSpec {
    let alg = d1.algebra().clone();
    let gens = alg.base_generators();
    let mut out = DoubleBracketSpec::zero(alg.clone());
    for &b in &gens {
        for &c in &gens {
            let (lb, lc) = (Letter::new(b), Letter::new(c));
            let v = pair_product(&alg, &d1.apply_letter(lb), &d2.apply_letter(lc))
                - pair_product(&alg, &d2.apply_letter(lb), &d1.apply_letter(lc));
            out.set_raw(b, c, v).expect("base generators");
        }
    }
    out
}

fn tilde(alg: &AlgebraSpec, x: &Tensor2, y: &Tensor2, z: &Tensor2) -> Tensor3 {
    let mut out = Tensor3::zero();
    for ((x1, x2), a) in x {
        for ((y1, y2), b) in y {
            let Some(m) = alg.mul_words(x1, y2) else { continue };
            let ab = a * b;
            for ((z1, z2), c) in z {
                let (Some(l), Some(r)) = (alg.mul_words(z1, x2), alg.mul_words(y1, z2)) else { continue };
                out.add_term((l, m.clone(), r), &ab * c);
            }
        }
    }
    out
}

/// Triple bracket of the trivector `δ1 δ2 δ3`.
pub fn differential_triple(
    d1: &DoubleDerivation,
    d2: &DoubleDerivation,
    d3: &DoubleDerivation,
    a: &NcPoly,
    b: &NcPoly,
    c: &NcPoly,
) -> Tensor3 {
    let alg = d1.algebra();
    let t = |x: &NcPoly, y: &NcPoly, z: &NcPoly| tilde(alg, &d1.apply(x), &d2.apply(y), &d3.apply(z));
    let mut out = t(a, b, c);
    out += tau(Cycle3::Tau, &t(b, c, a));
    out += tau(Cycle3::Tau2, &t(c, a, b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{half, q};
    use crate::brackets::{check_cyclic_antisymmetry, qp_anomaly};

    fn line() -> AlgebraSpec {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("x", "1", "1", GenKind::Plain).unwrap();
        a
    }

    #[test]
    fn gauge_on_arrow_loop_and_idempotent() {
        let mut a = AlgebraSpec::new(&["1", "2"]).unwrap();
        a.add_generator("t", "1", "2", GenKind::Plain).unwrap();
        a.add_generator("g", "1", "1", GenKind::Plain).unwrap();
        let e1 = gauge_element(&a, 0);
        assert_eq!(e1.apply(&a.gen(0)), -a.tensor(&a.e(0), &a.gen(0)));
        assert_eq!(e1.apply(&a.gen(1)), a.tensor(&a.gen(1), &a.e(0)) - a.tensor(&a.e(0), &a.gen(1)));
        for s in 0..2 {
            assert!(gauge_element(&a, s).apply(&a.e(0)).is_zero());
            assert!(gauge_element(&a, s).apply(&a.e(1)).is_zero());
        }
    }

    #[test]
    fn bivector_with_prefactor() {
        let a = line();
        let mut dx = DoubleDerivation::zero(a.clone());
        dx.set(0, a.tensor(&a.one(), &a.one()));
        assert!(differential_double(&dx, &dx).get(0, 0).unwrap().is_zero());
        let x2 = a.mul(&a.gen(0), &a.gen(0)).scale(&half());
        let br = differential_double(&dx.scaled(&x2, &a.one()), &dx);
        let expected = (a.tensor(&a.mul(&a.gen(0), &a.gen(0)), &a.one()) - a.tensor(&a.one(), &a.mul(&a.gen(0), &a.gen(0))))
            .scale(&half());
        assert_eq!(br.get(0, 0).unwrap(), &expected);
        assert!(check_cyclic_antisymmetry(&br, 20, 5).unwrap().passed);
        let zero = differential_double(&DoubleDerivation::zero(a.clone()), &dx);
        assert!(zero.values().values().all(|v| v.is_zero()));
    }

    #[test]
    fn gauge_cube_gives_anomaly_on_line() {
        let a = line();
        let e = gauge_element(&a, 0);
        let x = a.gen(0);
        let lhs = differential_triple(&e, &e, &e, &x, &x, &x).scale(&q(1, 12));
        assert_eq!(lhs, qp_anomaly(&a, &x, &x, &x));
        let z = DoubleDerivation::zero(a.clone());
        assert!(differential_triple(&z, &z, &z, &x, &x, &x).is_zero());
    }
}
