use std::collections::btree_map;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::{Q, Word};

/// Finite linear combination with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// equality of the represented elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Q>,
}

/// An element of the algebra.
pub type NcPoly = LinComb<Word>;
/// An element of `A ⊗ A`.
pub type Tensor2 = LinComb<(Word, Word)>;
/// An element of `A ⊗ A ⊗ A`.
pub type Tensor3 = LinComb<(Word, Word, Word)>;

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(key: K, coeff: Q) -> Self {
        let mut out = Self::default();
        out.add_term(key, coeff);
        out
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Q> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Q> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, key: K, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        LinComb { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Option<K2>) -> LinComb<K2> {
        let mut out = LinComb::default();
        for (k, v) in self.iter() {
            if let Some(k2) = f(k) {
                out.add_term(k2, v.clone());
            }
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut out = Self::default();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<'a, K: Ord> IntoIterator for &'a LinComb<K> {
    type Item = (&'a K, &'a Q);
    type IntoIter = btree_map::Iter<'a, K, Q>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<K: Ord + Clone> AddAssign<&LinComb<K>> for LinComb<K> {
    fn add_assign(&mut self, rhs: &LinComb<K>) {
        for (k, v) in rhs.iter() {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: Ord + Clone> AddAssign<LinComb<K>> for LinComb<K> {
    fn add_assign(&mut self, rhs: LinComb<K>) {
        for (k, v) in rhs.terms {
            self.add_term(k, v);
        }
    }
}

impl<K: Ord + Clone> SubAssign<&LinComb<K>> for LinComb<K> {
    fn sub_assign(&mut self, rhs: &LinComb<K>) {
        for (k, v) in rhs.iter() {
            self.add_term(k.clone(), -v.clone());
        }
    }
}

impl<K: Ord + Clone> SubAssign<LinComb<K>> for LinComb<K> {
    fn sub_assign(&mut self, rhs: LinComb<K>) {
        for (k, v) in rhs.terms {
            self.add_term(k, -v);
        }
    }
}

impl<K: Ord + Clone> Add for LinComb<K> {
    type Output = LinComb<K>;
    fn add(mut self, rhs: LinComb<K>) -> LinComb<K> {
        self += rhs;
        self
    }
}

impl<K: Ord + Clone> Add for &LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for LinComb<K> {
    type Output = LinComb<K>;
    fn sub(mut self, rhs: LinComb<K>) -> LinComb<K> {
        self -= rhs;
        self
    }
}

impl<K: Ord + Clone> Sub for &LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for LinComb<K> {
    type Output = LinComb<K>;
    fn neg(mut self) -> LinComb<K> {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl<K: Ord + Clone> Neg for &LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        -self.clone()
    }
}

/// Swaps the two tensor factors.
pub fn flip(d: &Tensor2) -> Tensor2 {
    d.map_keys(|(x, y)| Some((y.clone(), x.clone())))
}

/// Cyclic permutations of three tensor slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cycle3 {
    Id,
    /// `τ(123)`: `x⊗y⊗z ↦ z⊗x⊗y`.
    Tau,
    /// `τ(123)² = τ(132)`: `x⊗y⊗z ↦ y⊗z⊗x`.
    Tau2,
}

impl Cycle3 {
    pub fn inverse(self) -> Cycle3 {
        match self {
            Cycle3::Id => Cycle3::Id,
            Cycle3::Tau => Cycle3::Tau2,
            Cycle3::Tau2 => Cycle3::Tau,
        }
    }

    pub fn compose(self, other: Cycle3) -> Cycle3 {
        let n = |c: Cycle3| match c {
            Cycle3::Id => 0,
            Cycle3::Tau => 1,
            Cycle3::Tau2 => 2,
        };
        match (n(self) + n(other)) % 3 {
            0 => Cycle3::Id,
            1 => Cycle3::Tau,
            _ => Cycle3::Tau2,
        }
    }
}

pub fn tau(perm: Cycle3, t: &Tensor3) -> Tensor3 {
    match perm {
        Cycle3::Id => t.clone(),
        Cycle3::Tau => t.map_keys(|(x, y, z)| Some((z.clone(), x.clone(), y.clone()))),
        Cycle3::Tau2 => t.map_keys(|(x, y, z)| Some((y.clone(), z.clone(), x.clone()))),
    }
}

/// Exact equality of canonical sparse forms.
pub fn tensor_eq<K: Ord + Clone>(u: &LinComb<K>, v: &LinComb<K>) -> bool {
    u == v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zero_coefficients_are_purged() {
        let mut p: LinComb<u32> = LinComb::term(3, q(1, 2));
        p.add_term(3, q(-1, 2));
        assert!(p.is_zero());
        p.add_term(4, Q::zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn cancellation_gives_canonical_zero() {
        let p: LinComb<u32> = LinComb::term(1, q(2, 3)) + LinComb::term(2, q(1, 1));
        assert!(tensor_eq(&(&p - &p), &LinComb::zero()));
    }

    #[test]
    fn cycle_group_laws() {
        for c in [Cycle3::Id, Cycle3::Tau, Cycle3::Tau2] {
            assert_eq!(c.compose(c.inverse()), Cycle3::Id);
        }
        assert_eq!(Cycle3::Tau.compose(Cycle3::Tau), Cycle3::Tau2);
        assert_eq!(Cycle3::Tau2.compose(Cycle3::Tau), Cycle3::Id);
    }
}
