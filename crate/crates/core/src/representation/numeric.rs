use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{qi, AlgebraSpec, GenKind, Letter, NcPoly, Tensor2, Tensor3, Word, Q};
use crate::brackets::{BracketError, CheckReport, DoubleBracketSpec, MomentMapSpec};

use super::DimVector;

/// Dense square rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    n: usize,
    data: Vec<Q>,
}

impl RatMat {
    pub fn zeros(n: usize) -> Self {
        RatMat { n, data: vec![Q::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        let n = self.n;
        let mut out = RatMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &RatMat, c: &Q) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                *x += y * c;
            }
        }
    }

    /// Inverse of the block with rows `rows` and columns `cols`, placed at (cols, rows).
    pub fn block_inverse(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<RatMat> {
        let m = rows.len();
        if m != cols.len() {
            return None;
        }
        let mut a: Vec<Vec<Q>> = rows.clone().map(|i| cols.clone().map(|j| self.get(i, j).clone()).collect()).collect();
        let mut inv: Vec<Vec<Q>> = (0..m).map(|i| (0..m).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        for c in 0..m {
            let p = (c..m).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            inv.swap(c, p);
            let pivot = a[c][c].clone();
            for j in 0..m {
                a[c][j] /= &pivot;
                inv[c][j] /= &pivot;
            }
            for r in 0..m {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..m {
                        let (x, y) = (a[c][j].clone(), inv[c][j].clone());
                        a[r][j] -= &f * x;
                        inv[r][j] -= &f * y;
                    }
                }
            }
        }
        let mut out = RatMat::zeros(self.n);
        for (bi, i) in cols.clone().enumerate() {
            for (bj, j) in rows.clone().enumerate() {
                out.set(i, j, inv[bi][bj].clone());
            }
        }
        Some(out)
    }

    pub fn is_invertible_block(&self, s: std::ops::Range<usize>) -> bool {
        self.block_inverse(s.clone(), s).is_some()
    }
}

/// A representation: one rational matrix per generator, block-supported.
#[derive(Clone, Debug)]
pub struct RepPoint {
    pub dims: DimVector,
    pub seed: u64,
    mats: Vec<RatMat>,
    inverses: Vec<Option<RatMat>>,
}

impl RepPoint {
    pub fn generator_matrix(&self, g: usize) -> &RatMat {
        &self.mats[g]
    }

    pub fn letter_matrix(&self, l: Letter) -> &RatMat {
        if l.inv {
            self.inverses[l.index()].as_ref().expect("inverse sampled for invertible generator")
        } else {
            &self.mats[l.index()]
        }
    }

    pub fn word_matrix(&self, w: &Word) -> RatMat {
        let mut m = self.dims.identity_block(w.src());
        for &l in w.letters() {
            m = m.mul(self.letter_matrix(l));
        }
        m
    }

    pub fn poly_matrix(&self, p: &NcPoly) -> RatMat {
        let mut m = RatMat::zeros(self.dims.total());
        for (w, c) in p {
            m.add_scaled(&self.word_matrix(w), c);
        }
        m
    }
}

fn random_block<R: Rng>(rng: &mut R, m: &mut RatMat, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) {
    for i in rows {
        for j in cols.clone() {
            m.set(i, j, qi(rng.gen_range(-3i64..=3)));
        }
    }
}

/// Seeded random point; resamples until every required inverse exists.
pub fn random_rep_point(alg: &AlgebraSpec, dims: &DimVector, seed: u64) -> Result<RepPoint, BracketError> {
    if dims.num_vertices() != alg.num_vertices() {
        return Err(BracketError::Invalid("dimension vector does not match the idempotents".into()));
    }
    let n = dims.total();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..200 {
        let mut mats: Vec<RatMat> = Vec::new();
        let mut inverses: Vec<Option<RatMat>> = Vec::new();
        for g in alg.generators() {
            let (rows, cols) = (dims.block(g.tail), dims.block(g.head));
            let mut m = RatMat::zeros(n);
            let mut inv = None;
            match &g.kind {
                GenKind::Plain => random_block(&mut rng, &mut m, rows, cols),
                GenKind::Invertible => {
                    if rows.len() != cols.len() {
                        return Err(BracketError::Invalid(format!(
                            "invertible `{}` needs equal dimensions at its endpoints",
                            g.name
                        )));
                    }
                    random_block(&mut rng, &mut m, rows.clone(), cols.clone());
                    match m.block_inverse(rows, cols) {
                        Some(x) => inv = Some(x),
                        None => continue 'attempt,
                    }
                }
                GenKind::Nilpotent(k) => {
                    let k = *k as usize;
                    let start = rows.start;
                    for i in rows.clone() {
                        for j in cols.clone() {
                            if i < j && (i - start) / k == (j - start) / k {
                                m.set(i, j, qi(rng.gen_range(-3i64..=3)));
                            }
                        }
                    }
                }
                GenKind::Cyclic(order) => {
                    let mut p = RatMat::zeros(n);
                    random_block(&mut rng, &mut p, rows.clone(), rows.clone());
                    let Some(pinv) = p.block_inverse(rows.clone(), rows.clone()) else { continue 'attempt };
                    let mut c = RatMat::zeros(n);
                    for i in rows.clone() {
                        let sign = if order % 2 == 0 && rng.gen_bool(0.5) { -1 } else { 1 };
                        c.set(i, i, qi(sign));
                    }
                    m = p.mul(&c).mul(&pinv);
                    inv = m.block_inverse(rows.clone(), rows);
                }
                GenKind::FormalInverse(d) => {
                    let partial = RepPoint { dims: dims.clone(), seed, mats: mats.clone(), inverses: inverses.clone() };
                    let x = partial.poly_matrix(d);
                    match x.block_inverse(rows.clone(), rows.clone()) {
                        Some(z) => {
                            m = z;
                            inv = Some(x);
                        }
                        None => continue 'attempt,
                    }
                }
            }
            mats.push(m);
            inverses.push(inv);
        }
        return Ok(RepPoint { dims: dims.clone(), seed, mats, inverses });
    }
    Err(BracketError::Invalid("could not sample a point with the required inverses".into()))
}

/// Full multi-index array of a tensor evaluated at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedArray {
    pub n: usize,
    pub order: usize,
    pub data: Vec<Q>,
}

impl IndexedArray {
    pub fn first_difference(&self, other: &IndexedArray) -> Option<Vec<usize>> {
        let pos = self.data.iter().zip(&other.data).position(|(a, b)| a != b)?;
        let mut idx = Vec::new();
        let mut p = pos;
        for _ in 0..self.order {
            idx.push(p % self.n);
            p /= self.n;
        }
        idx.reverse();
        Some(idx)
    }
}

pub fn eval_tensor2_at_point(t: &Tensor2, p: &RepPoint) -> IndexedArray {
    let n = p.dims.total();
    let mut data = vec![Q::zero(); n.pow(4)];
    for ((x, y), c) in t {
        let (mx, my) = (p.word_matrix(x), p.word_matrix(y));
        for i in 0..n {
            for j in 0..n {
                let a = mx.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let ca = c * a;
                for k in 0..n {
                    for l in 0..n {
                        let b = my.get(k, l);
                        if !b.is_zero() {
                            data[((i * n + j) * n + k) * n + l] += &ca * b;
                        }
                    }
                }
            }
        }
    }
    IndexedArray { n, order: 4, data }
}

pub fn eval_tensor3_at_point(t: &Tensor3, p: &RepPoint) -> IndexedArray {
    let n = p.dims.total();
    let n2 = n * n;
    let mut data = vec![Q::zero(); n2 * n2 * n2];
    for ((x, y, z), c) in t {
        let ms = [p.word_matrix(x), p.word_matrix(y), p.word_matrix(z)];
        for a in 0..n2 {
            let va = ms[0].get(a / n, a % n);
            if va.is_zero() {
                continue;
            }
            let ca = c * va;
            for b in 0..n2 {
                let vb = ms[1].get(b / n, b % n);
                if vb.is_zero() {
                    continue;
                }
                let cab = &ca * vb;
                for d in 0..n2 {
                    let vd = ms[2].get(d / n, d % n);
                    if !vd.is_zero() {
                        data[(a * n2 + b) * n2 + d] += &cab * vd;
                    }
                }
            }
        }
    }
    IndexedArray { n, order: 6, data }
}

/// Pointwise exact comparison of both sides of the moment-map identity,
/// plus invertibility of `𝒳(Φ)` at each point.
pub fn moment_map_numeric_check(
    br: &DoubleBracketSpec,
    mm: &MomentMapSpec,
    dims: &DimVector,
    trials: usize,
    seed: u64,
) -> Result<CheckReport, BracketError> {
    let alg = br.algebra();
    let ev = br.evaluator();
    let mut sides = Vec::new();
    for (s, phi) in mm.components().iter().enumerate() {
        for l in alg.checkable_letters() {
            let a = NcPoly::basis(alg.letter_word(l));
            let lhs = ev.eval(phi, &a)?;
            let rhs = crate::brackets::moment_map_rhs(alg, s, phi, &a);
            sides.push((s, l, lhs, rhs));
        }
    }
    let mut rep = CheckReport::new("moment-map-numeric");
    for trial in 0..trials {
        let tseed = seed.wrapping_add(trial as u64);
        let point = random_rep_point(alg, dims, tseed)?;
        for (s, l, lhs, rhs) in &sides {
            let (x, y) = (eval_tensor2_at_point(lhs, &point), eval_tensor2_at_point(rhs, &point));
            let diff = x.first_difference(&y);
            rep.record(
                diff.is_none(),
                vec![format!("seed {tseed}"), format!("Φ_{}", alg.label(*s)), alg.symbol(*l)],
                || format!("first differing index {:?}", diff.clone().unwrap_or_default()),
            );
        }
        let phi = point.poly_matrix(&mm.total());
        let ok = phi.block_inverse(0..dims.total(), 0..dims.total()).is_some();
        rep.record(ok, vec![format!("seed {tseed}"), "Φ invertible".into()], || "𝒳(Φ) is singular".into());
    }
    Ok(rep)
}
