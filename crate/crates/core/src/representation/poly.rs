use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::algebra::{LinComb, Q};

/// Sorted `(variable, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `∂/∂v` as (multiplicity, monomial), or `None` when `v` does not occur.
    pub fn diff(&self, v: u32) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|&(x, _)| x == v)?;
        let e = self.0[pos].1;
        let mut m = self.0.clone();
        if e == 1 {
            m.remove(pos);
        } else {
            m[pos].1 -= 1;
        }
        Some((e, Monomial(m)))
    }
}

/// Commutative polynomial in the coordinate variables.
pub type CoordPoly = LinComb<Monomial>;

pub fn cp_const(c: Q) -> CoordPoly {
    CoordPoly::term(Monomial::one(), c)
}

pub fn cp_one() -> CoordPoly {
    cp_const(Q::one())
}

pub fn cp_var(v: u32) -> CoordPoly {
    CoordPoly::basis(Monomial::var(v))
}

pub fn cp_mul(p: &CoordPoly, r: &CoordPoly) -> CoordPoly {
    let mut out = CoordPoly::zero();
    for (m1, a) in p {
        for (m2, b) in r {
            out.add_term(m1.mul(m2), a * b);
        }
    }
    out
}

pub fn cp_diff(p: &CoordPoly, v: u32) -> CoordPoly {
    let mut out = CoordPoly::zero();
    for (m, c) in p {
        if let Some((e, m2)) = m.diff(v) {
            out.add_term(m2, c * Q::from_integer(e.into()));
        }
    }
    out
}

pub fn cp_vars(p: &CoordPoly) -> BTreeSet<u32> {
    p.keys().flat_map(|m| m.factors().iter().map(|&(v, _)| v)).collect()
}

/// Evaluation at a point given as a variable assignment.
pub fn cp_eval(p: &CoordPoly, value: &impl Fn(u32) -> Q) -> Q {
    let mut out = Q::zero();
    for (m, c) in p {
        let mut t = c.clone();
        for &(v, e) in m.factors() {
            let x = value(v);
            for _ in 0..e {
                t *= &x;
            }
        }
        out += t;
    }
    out
}

/// Square matrix of coordinate polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat {
    n: usize,
    data: Vec<CoordPoly>,
}

impl PolyMat {
    pub fn zeros(n: usize) -> Self {
        PolyMat { n, data: vec![CoordPoly::zero(); n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CoordPoly {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: CoordPoly) {
        self.data[i * self.n + j] = p;
    }

    pub fn add_assign_scaled(&mut self, other: &PolyMat, c: &Q) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            x.add_scaled(y, c);
        }
    }

    pub fn mul(&self, other: &PolyMat) -> PolyMat {
        let n = self.n;
        let mut out = PolyMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = cp_mul(a, b);
                    out.data[i * n + j] += p;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn trace(&self) -> CoordPoly {
        let mut out = CoordPoly::zero();
        for i in 0..self.n {
            out += self.get(i, i);
        }
        out
    }
}
