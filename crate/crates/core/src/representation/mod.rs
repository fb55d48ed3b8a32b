//! Representation spaces: the induced biderivation on coordinate rings,
//! polynomial checks of the Jacobi and quasi-Poisson identities, and exact
//! point evaluation for identities involving inverses.

mod numeric;
mod poly;

use std::cell::RefCell;
use std::collections::HashMap;
use std::ops::Range;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{qi, AlgebraSpec, GenKind, Letter, NcPoly, Q, Tensor2, Tensor3, Word};
use crate::brackets::{
    gauge_element, qp_anomaly, triple_bracket_with, BracketError, CheckReport, DoubleBracketSpec, DoubleDerivation,
    Evaluator, MomentMapSpec,
};

pub use numeric::{
    eval_tensor2_at_point, eval_tensor3_at_point, moment_map_numeric_check, random_rep_point, IndexedArray, RatMat,
    RepPoint,
};
pub use poly::{cp_const, cp_diff, cp_eval, cp_mul, cp_one, cp_var, cp_vars, CoordPoly, Monomial, PolyMat};

/// Dimension vector `α`, one positive entry per idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimVector {
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl DimVector {
    pub fn new(dims: Vec<usize>) -> Result<Self, BracketError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(BracketError::Invalid("dimension vector entries must be positive".into()));
        }
        let mut offsets = Vec::with_capacity(dims.len());
        let mut acc = 0;
        for &d in &dims {
            offsets.push(acc);
            acc += d;
        }
        Ok(DimVector { dims, offsets })
    }

    /// All entries equal to `d`.
    pub fn uniform(alg: &AlgebraSpec, d: usize) -> Result<Self, BracketError> {
        DimVector::new(vec![d; alg.num_vertices()])
    }

    /// Parses `"1:2,2:1"` (label:dimension); a bare `"2"` is accepted for a single idempotent.
    pub fn parse(alg: &AlgebraSpec, s: &str) -> Result<Self, BracketError> {
        let bad = || BracketError::Invalid(format!("bad dimension vector `{s}`"));
        let s = s.trim();
        if !s.contains(':') && alg.num_vertices() == 1 {
            return DimVector::new(vec![s.parse().map_err(|_| bad())?]);
        }
        let mut dims = vec![0; alg.num_vertices()];
        for part in s.split(',') {
            let (label, d) = part.split_once(':').ok_or_else(bad)?;
            let v = alg.vertex_index(label.trim())?;
            dims[v] = d.trim().parse().map_err(|_| bad())?;
        }
        DimVector::new(dims)
    }

    pub fn num_vertices(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim(&self, s: usize) -> usize {
        self.dims[s]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block(&self, s: usize) -> Range<usize> {
        self.offsets[s]..self.offsets[s] + self.dims[s]
    }

    pub fn vertex_of(&self, i: usize) -> usize {
        self.offsets.iter().rposition(|&o| o <= i).expect("index in range")
    }

    pub fn identity_block(&self, s: usize) -> RatMat {
        let mut m = RatMat::zeros(self.total());
        for i in self.block(s) {
            m.set(i, i, Q::one());
        }
        m
    }
}

/// Coordinate index pair `(i, j)` of a matrix entry.
pub type Entry = (usize, usize);

/// `O(Rep(A, α))` with variables `x(g,i,j)` for the base generators of `A`.
///
/// Only algebras whose words are polynomial in those variables are accepted:
/// inverse letters and formal inverses defer to the numeric route.
pub struct RepSpace<'a> {
    br: &'a DoubleBracketSpec,
    ev: Evaluator<'a>,
    dims: DimVector,
    n: usize,
    gens: Vec<Option<PolyMat>>,
    var_cache: RefCell<HashMap<(u32, u32), CoordPoly>>,
}

impl<'a> RepSpace<'a> {
    pub fn new(br: &'a DoubleBracketSpec, dims: DimVector) -> Result<Self, BracketError> {
        let alg = br.algebra();
        if dims.num_vertices() != alg.num_vertices() {
            return Err(BracketError::Invalid("dimension vector does not match the idempotents".into()));
        }
        for g in alg.generators() {
            match g.kind {
                GenKind::Plain | GenKind::Nilpotent(_) => {}
                _ => {
                    return Err(BracketError::DeferToNumeric(format!(
                        "generator `{}` has no polynomial coordinate matrix",
                        g.name
                    )))
                }
            }
        }
        let n = dims.total();
        let gens = (0..alg.num_generators())
            .map(|g| {
                let gd = alg.generator(g);
                let mut m = PolyMat::zeros(n);
                for i in dims.block(gd.tail) {
                    for j in dims.block(gd.head) {
                        m.set(i, j, cp_var(var_id(n, g, i, j)));
                    }
                }
                Some(m)
            })
            .collect();
        Ok(RepSpace { br, ev: br.evaluator(), dims, n, gens, var_cache: RefCell::new(HashMap::new()) })
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        self.br.algebra()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// The variable `x(g,i,j)`, or `None` when `(i,j)` lies outside the `(tail, head)` block.
    pub fn var(&self, g: usize, i: usize, j: usize) -> Option<u32> {
        let gd = self.algebra().generator(g);
        (self.dims.block(gd.tail).contains(&i) && self.dims.block(gd.head).contains(&j)).then(|| var_id(self.n, g, i, j))
    }

    pub fn decode(&self, v: u32) -> (usize, usize, usize) {
        let n = self.n as u32;
        ((v / (n * n)) as usize, ((v / n) % n) as usize, (v % n) as usize)
    }

    pub fn word_matrix(&self, w: &Word) -> PolyMat {
        let mut m = self.idempotent_block(w.src());
        for &l in w.letters() {
            m = m.mul(self.gens[l.index()].as_ref().expect("polynomial generator"));
        }
        m
    }

    fn idempotent_block(&self, s: usize) -> PolyMat {
        let mut m = PolyMat::zeros(self.n);
        for i in self.dims.block(s) {
            m.set(i, i, cp_one());
        }
        m
    }

    /// `𝒳(a)`.
    pub fn coord_matrix(&self, a: &NcPoly) -> PolyMat {
        let mut m = PolyMat::zeros(self.n);
        for (w, c) in a {
            m.add_assign_scaled(&self.word_matrix(w), c);
        }
        m
    }

    pub fn trace_function(&self, a: &NcPoly) -> CoordPoly {
        self.coord_matrix(a).trace()
    }

    /// Entries of `𝒳(Φ) − 𝒳(q)` for `q = Σ q_s e_s`.
    pub fn moment_ideal_generators(&self, mm: &MomentMapSpec, q: &[Q]) -> Vec<CoordPoly> {
        let alg = self.algebra();
        let mut target = NcPoly::zero();
        for (s, c) in q.iter().enumerate() {
            target.add_scaled(&alg.e(s), c);
        }
        let m = self.coord_matrix(&(mm.total() - target));
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(m.get(i, j).clone());
            }
        }
        out
    }

    /// `T_{ij,kl}` for `T ∈ A⊗A`.
    pub fn contract2(&self, t: &Tensor2, (i, j): Entry, (k, l): Entry) -> CoordPoly {
        let mut out = CoordPoly::zero();
        for ((x, y), c) in t {
            let p = cp_mul(self.word_matrix(x).get(i, j), self.word_matrix(y).get(k, l));
            out.add_scaled(&p, c);
        }
        out
    }

    /// `T_{ij,kl,uv}` for `T ∈ A⊗A⊗A`.
    pub fn contract3(&self, t: &Tensor3, a: Entry, b: Entry, c: Entry) -> CoordPoly {
        let mut out = CoordPoly::zero();
        for ((x, y, z), k) in t {
            let p = cp_mul(self.word_matrix(x).get(a.0, a.1), self.word_matrix(y).get(b.0, b.1));
            if p.is_zero() {
                continue;
            }
            out.add_scaled(&cp_mul(&p, self.word_matrix(z).get(c.0, c.1)), k);
        }
        out
    }

    /// `{a_ij, b_kl} = ⟪a,b⟫'_{kj} ⟪a,b⟫''_{il}`.
    pub fn element_bracket(&self, a: &NcPoly, (i, j): Entry, b: &NcPoly, (k, l): Entry) -> Result<CoordPoly, BracketError> {
        let v = self.ev.eval(a, b)?;
        Ok(self.contract2(&v, (k, j), (i, l)))
    }

    /// Bracket of two coordinate variables.
    pub fn var_bracket(&self, x: u32, y: u32) -> Result<CoordPoly, BracketError> {
        if let Some(p) = self.var_cache.borrow().get(&(x, y)) {
            return Ok(p.clone());
        }
        let (g, i, j) = self.decode(x);
        let (h, k, l) = self.decode(y);
        let v = self.ev.letters(Letter::new(g), Letter::new(h))?;
        let p = self.contract2(&v, (k, j), (i, l));
        self.var_cache.borrow_mut().insert((x, y), p.clone());
        Ok(p)
    }

    /// The biderivation extension to arbitrary coordinate polynomials.
    pub fn bracket(&self, f: &CoordPoly, h: &CoordPoly) -> Result<CoordPoly, BracketError> {
        let mut out = CoordPoly::zero();
        let hv = cp_vars(h);
        for x in cp_vars(f) {
            let fx = cp_diff(f, x);
            for &y in &hv {
                let b = self.var_bracket(x, y)?;
                if b.is_zero() {
                    continue;
                }
                out += cp_mul(&cp_mul(&fx, &cp_diff(h, y)), &b);
            }
        }
        Ok(out)
    }

    pub fn jacobiator(&self, f: &CoordPoly, g: &CoordPoly, h: &CoordPoly) -> Result<CoordPoly, BracketError> {
        let mut out = self.bracket(f, &self.bracket(g, h)?)?;
        out += self.bracket(g, &self.bracket(h, f)?)?;
        out += self.bracket(h, &self.bracket(f, g)?)?;
        Ok(out)
    }

    /// `T(a,b,c)_{uj,il,kv} − T(a,c,b)_{kj,iv,ul}`.
    pub fn contract_pair(&self, abc: &Tensor3, acb: &Tensor3, (i, j): Entry, (k, l): Entry, (u, v): Entry) -> CoordPoly {
        self.contract3(abc, (u, j), (i, l), (k, v)) - self.contract3(acb, (k, j), (i, v), (u, l))
    }

    /// `η_R` for the elementary matrix `η = E_{pq}`, `p, q` in one block:
    /// `η_R(x_ij) = [𝒳(x), η]_ij`, extended as a derivation.
    pub fn gl_action(&self, (p, q): Entry, f: &CoordPoly) -> CoordPoly {
        let mut out = CoordPoly::zero();
        for x in cp_vars(f) {
            let (g, i, j) = self.decode(x);
            let mut image = CoordPoly::zero();
            if j == q {
                if let Some(y) = self.var(g, i, p) {
                    image += cp_var(y);
                }
            }
            if i == p {
                if let Some(y) = self.var(g, q, j) {
                    image -= cp_var(y);
                }
            }
            if !image.is_zero() {
                out += cp_mul(&cp_diff(f, x), &image);
            }
        }
        out
    }

    /// `tr 𝒳(δ1δ2δ3)(a_ij, b_kl, c_uv)` summed directly over the matrix indices.
    pub fn trivector(
        &self,
        ds: [&DoubleDerivation; 3],
        args: [(&NcPoly, Entry); 3],
    ) -> CoordPoly {
        let n = self.n;
        // vals[q][arg][(i, j)] = δ^q_{ij}(arg) = δ^q(a)'_{uj} δ^q(a)''_{iv}
        let vals: Vec<Vec<Vec<CoordPoly>>> = ds
            .iter()
            .map(|d| {
                args.iter()
                    .map(|(a, (u, v))| {
                        let t = d.apply(a);
                        let mut out = vec![CoordPoly::zero(); n * n];
                        for ((x, y), c) in &t {
                            let (mx, my) = (self.word_matrix(x), self.word_matrix(y));
                            for i in 0..n {
                                let yi = my.get(i, *v);
                                if yi.is_zero() {
                                    continue;
                                }
                                for j in 0..n {
                                    let xj = mx.get(*u, j);
                                    if !xj.is_zero() {
                                        out[i * n + j].add_scaled(&cp_mul(xj, yi), c);
                                    }
                                }
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        let perms: [([usize; 3], i64); 6] =
            [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];
        let mut out = CoordPoly::zero();
        for (sigma, sign) in perms {
            for i1 in 0..n {
                for i2 in 0..n {
                    let f1 = &vals[0][sigma[0]][i1 * n + i2];
                    if f1.is_zero() {
                        continue;
                    }
                    for i3 in 0..n {
                        let f2 = &vals[1][sigma[1]][i2 * n + i3];
                        let f3 = &vals[2][sigma[2]][i3 * n + i1];
                        if f2.is_zero() || f3.is_zero() {
                            continue;
                        }
                        out.add_scaled(&cp_mul(&cp_mul(f1, f2), f3), &qi(sign));
                    }
                }
            }
        }
        out
    }
}

fn var_id(n: usize, g: usize, i: usize, j: usize) -> u32 {
    ((g * n + i) * n + j) as u32
}

/// Which coordinate index tuples a representation check visits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TupleSelection {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl TupleSelection {
    /// Default sample size above the exhaustive threshold.
    pub const DEFAULT_COUNT: usize = 256;

    /// Exhaustive up to `N = 3`, seeded sampling above.
    pub fn auto(dims: &DimVector, seed: u64) -> Self {
        if dims.total() <= 3 {
            TupleSelection::Exhaustive
        } else {
            TupleSelection::Sampled { count: Self::DEFAULT_COUNT, seed }
        }
    }
}

/// A generator triple with one entry per generator, each inside its block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTuple {
    pub gens: [usize; 3],
    pub entries: [Entry; 3],
}

fn entries_of(alg: &AlgebraSpec, dims: &DimVector, g: usize) -> Vec<Entry> {
    let gd = alg.generator(g);
    let mut out = Vec::new();
    for i in dims.block(gd.tail) {
        for j in dims.block(gd.head) {
            out.push((i, j));
        }
    }
    out
}

/// Index tuples over ordered base-generator triples.
pub fn index_tuples(alg: &AlgebraSpec, dims: &DimVector, sel: &TupleSelection) -> Vec<IndexTuple> {
    let gens = alg.base_generators();
    let entries: Vec<Vec<Entry>> = (0..alg.num_generators()).map(|g| entries_of(alg, dims, g)).collect();
    match sel {
        TupleSelection::Exhaustive => {
            let mut out = Vec::new();
            for &a in &gens {
                for &b in &gens {
                    for &c in &gens {
                        for &ea in &entries[a] {
                            for &eb in &entries[b] {
                                for &ec in &entries[c] {
                                    out.push(IndexTuple { gens: [a, b, c], entries: [ea, eb, ec] });
                                }
                            }
                        }
                    }
                }
            }
            out
        }
        TupleSelection::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| {
                    let g: [usize; 3] = std::array::from_fn(|_| gens[rng.gen_range(0..gens.len())]);
                    let e: [Entry; 3] = std::array::from_fn(|q| entries[g[q]][rng.gen_range(0..entries[g[q]].len())]);
                    IndexTuple { gens: g, entries: e }
                })
                .collect()
        }
    }
}

/// Relation-free lift used for polynomial checks when the algebra truncates words.
///
/// The identities are checked in the free coordinate ring of the lift; the
/// returned report certifies that the lifted triple brackets reduce to the
/// original ones, so the identities descend to the quotient.
fn lift_with_certificate(br: &DoubleBracketSpec) -> Result<(DoubleBracketSpec, CheckReport), BracketError> {
    let alg = br.algebra();
    let lifted = br.without_relations();
    let mut cert = CheckReport::new("lift-certificate");
    if !alg.has_relations() {
        return Ok((lifted, cert));
    }
    let (ev, lev) = (br.evaluator(), lifted.evaluator());
    let la = lifted.algebra();
    let gens = alg.base_generators();
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                let (x, y, z) = (alg.gen(a), alg.gen(b), alg.gen(c));
                let direct = triple_bracket_with(&ev, &x, &y, &z)?;
                let lt = triple_bracket_with(&lev, &la.gen(a), &la.gen(b), &la.gen(c))?;
                let reduced = reduce_t3(alg, &lt)?;
                let names = [a, b, c].iter().map(|&g| alg.generator(g).name.clone()).collect();
                cert.record(reduced == direct, names, || alg.fmt_t3(&(reduced.clone() - direct.clone())));
            }
        }
    }
    Ok((lifted, cert))
}

fn reduce_t3(alg: &AlgebraSpec, t: &Tensor3) -> Result<Tensor3, BracketError> {
    let mut out = Tensor3::zero();
    for ((x, y, z), c) in t {
        let p = alg.tensor3(&alg.normalize(x)?, &alg.normalize(y)?, &alg.normalize(z)?);
        out.add_scaled(&p, c);
    }
    Ok(out)
}

fn tuple_inputs(alg: &AlgebraSpec, t: &IndexTuple) -> Vec<String> {
    (0..3)
        .map(|q| format!("{}_{},{}", alg.generator(t.gens[q]).name, t.entries[q].0 + 1, t.entries[q].1 + 1))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rhs {
    Triple,
    Anomaly,
}

fn identity_check(
    br: &DoubleBracketSpec,
    dims: &DimVector,
    sel: &TupleSelection,
    rhs: Rhs,
    name: &str,
) -> Result<CheckReport, BracketError> {
    let (lifted, cert) = lift_with_certificate(br)?;
    let space = RepSpace::new(&lifted, dims.clone())?;
    let alg = lifted.algebra();
    let ev = lifted.evaluator();
    let mut cache: HashMap<[usize; 3], Tensor3> = HashMap::new();
    let mut rhs_tensor = |g: [usize; 3]| -> Result<Tensor3, BracketError> {
        if let Some(t) = cache.get(&g) {
            return Ok(t.clone());
        }
        let (a, b, c) = (alg.gen(g[0]), alg.gen(g[1]), alg.gen(g[2]));
        let t = match rhs {
            Rhs::Triple => triple_bracket_with(&ev, &a, &b, &c)?,
            Rhs::Anomaly => qp_anomaly(alg, &a, &b, &c),
        };
        cache.insert(g, t.clone());
        Ok(t)
    };
    let mut rep = CheckReport::new(name);
    for t in index_tuples(alg, dims, sel) {
        let [a, b, c] = t.gens;
        let [(i, j), (k, l), (u, v)] = t.entries;
        let x = |g: usize, e: Entry| cp_var(space.var(g, e.0, e.1).expect("entry in block"));
        let lhs = space.jacobiator(&x(a, (i, j)), &x(b, (k, l)), &x(c, (u, v)))?;
        let abc = rhs_tensor([a, b, c])?;
        let acb = rhs_tensor([a, c, b])?;
        let r = space.contract_pair(&abc, &acb, (i, j), (k, l), (u, v));
        let residual = lhs - r;
        rep.record(residual.is_zero(), tuple_inputs(alg, &t), || format!("{} nonzero terms", residual.len()));
    }
    rep.merge(cert);
    Ok(rep)
}

/// `Jac(a_ij,b_kl,c_uv) = ⟪a,b,c⟫_{uj,il,kv} − ⟪a,c,b⟫_{kj,iv,ul}` as polynomials.
pub fn jacobiator_check(br: &DoubleBracketSpec, dims: &DimVector, sel: &TupleSelection) -> Result<CheckReport, BracketError> {
    identity_check(br, dims, sel, Rhs::Triple, "jacobi-identity")
}

/// The Jacobiator equals the contraction of the quasi-Poisson anomaly.
pub fn qp_rep_check(br: &DoubleBracketSpec, dims: &DimVector, sel: &TupleSelection) -> Result<CheckReport, BracketError> {
    identity_check(br, dims, sel, Rhs::Anomaly, "quasi-poisson-rep")
}

/// `(1/12) Σ_s tr 𝒳(E_s³)` evaluated on the tuple, computed from the gauge elements directly.
pub fn half_cartan(space: &RepSpace<'_>, gauges: &[DoubleDerivation], t: &IndexTuple) -> CoordPoly {
    let alg = space.algebra();
    let mut out = CoordPoly::zero();
    let (a, b, c) = (alg.gen(t.gens[0]), alg.gen(t.gens[1]), alg.gen(t.gens[2]));
    for e in gauges {
        out += space.trivector([e, e, e], [(&a, t.entries[0]), (&b, t.entries[1]), (&c, t.entries[2])]);
    }
    out.scale(&crate::algebra::q(1, 12))
}

/// Compares the trace of the gauge trivector with the two contractions of
/// the anomaly: once through the differential triple bracket of `E_s³`,
/// once through the closed form.
pub fn trivector_check(br: &DoubleBracketSpec, dims: &DimVector, sel: &TupleSelection) -> Result<CheckReport, BracketError> {
    let (lifted, cert) = lift_with_certificate(br)?;
    let space = RepSpace::new(&lifted, dims.clone())?;
    let alg = lifted.algebra();
    let gauges: Vec<DoubleDerivation> = (0..alg.num_vertices()).map(|s| gauge_element(alg, s)).collect();
    let diff3 = |x: &NcPoly, y: &NcPoly, z: &NcPoly| {
        let mut t = Tensor3::zero();
        for e in &gauges {
            t += crate::brackets::differential_triple(e, e, e, x, y, z);
        }
        t.scale(&crate::algebra::q(1, 12))
    };
    let mut rep = CheckReport::new("trivector-trace");
    for t in index_tuples(alg, dims, sel) {
        let [a, b, c] = t.gens.map(|g| alg.gen(g));
        let [ea, eb, ec] = t.entries;
        let lhs = half_cartan(&space, &gauges, &t);
        let via_diff = space.contract_pair(&diff3(&a, &b, &c), &diff3(&a, &c, &b), ea, eb, ec);
        let via_anomaly = space.contract_pair(&qp_anomaly(alg, &a, &b, &c), &qp_anomaly(alg, &a, &c, &b), ea, eb, ec);
        let ok = lhs == via_diff && lhs == via_anomaly;
        rep.record(ok, tuple_inputs(alg, &t), || "trace, differential and closed-form contractions differ".into());
    }
    rep.merge(cert);
    Ok(rep)
}

/// `η_R{f,g} = {η_R f, g} + {f, η_R g}` on variable pairs, for elementary `η` in each block.
pub fn equivariance_check(br: &DoubleBracketSpec, dims: &DimVector) -> Result<CheckReport, BracketError> {
    let lifted = br.without_relations();
    let space = RepSpace::new(&lifted, dims.clone())?;
    let alg = lifted.algebra();
    let mut vars = Vec::new();
    for g in alg.base_generators() {
        for (i, j) in entries_of(alg, dims, g) {
            vars.push(space.var(g, i, j).expect("entry in block"));
        }
    }
    let mut rep = CheckReport::new("gl-equivariance");
    for s in 0..dims.num_vertices() {
        for p in dims.block(s) {
            for q in dims.block(s) {
                for &x in &vars {
                    for &y in &vars {
                        let (fx, fy) = (cp_var(x), cp_var(y));
                        let lhs = space.gl_action((p, q), &space.bracket(&fx, &fy)?);
                        let rhs = space.bracket(&space.gl_action((p, q), &fx), &fy)?
                            + space.bracket(&fx, &space.gl_action((p, q), &fy))?;
                        let name = |v: u32| {
                            let (g, i, j) = space.decode(v);
                            format!("{}_{},{}", alg.generator(g).name, i + 1, j + 1)
                        };
                        rep.record(lhs == rhs, vec![format!("E_{},{}", p + 1, q + 1), name(x), name(y)], || {
                            "equivariance fails".into()
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// `{a_ij, b_kl}` for generators, as a pure function of the bracket.
pub fn induced_bracket(
    br: &DoubleBracketSpec,
    dims: &DimVector,
    (g, i, j): (usize, usize, usize),
    (h, k, l): (usize, usize, usize),
) -> Result<CoordPoly, BracketError> {
    let space = RepSpace::new(br, dims.clone())?;
    let alg = br.algebra();
    if alg.t2_contains_formal(&br.eval(&alg.gen(g), &alg.gen(h))?) {
        return Err(BracketError::DeferToNumeric("bracket value contains formal inverses".into()));
    }
    space.element_bracket(&alg.gen(g), (i, j), &alg.gen(h), (k, l))
}

/// Convenience: the trace function `tr 𝒳(a)`.
pub fn trace_function(br: &DoubleBracketSpec, dims: &DimVector, a: &NcPoly) -> Result<CoordPoly, BracketError> {
    Ok(RepSpace::new(br, dims.clone())?.trace_function(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{half, q};

    fn free1(mu: Q) -> DoubleBracketSpec {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("t", "1", "1", GenKind::Plain).unwrap();
        let t2 = a.mul(&a.gen(0), &a.gen(0));
        let v = (a.tensor(&t2, &a.one()) - a.tensor(&a.one(), &t2)).scale(&mu);
        let mut br = DoubleBracketSpec::zero(a);
        br.set(0, 0, v).unwrap();
        br
    }

    #[test]
    fn induced_bracket_on_loop() {
        let br = free1(half());
        let dims = DimVector::new(vec![2]).unwrap();
        let space = RepSpace::new(&br, dims.clone()).unwrap();
        let t2 = space.coord_matrix(&br.algebra().mul(&br.algebra().gen(0), &br.algebra().gen(0)));
        for (i, j, k, l) in [(0, 0, 0, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)] {
            let got = induced_bracket(&br, &dims, (0, i, j), (0, k, l)).unwrap();
            let mut expected = CoordPoly::zero();
            if i == l {
                expected.add_scaled(t2.get(k, j), &half());
            }
            if k == j {
                expected.add_scaled(t2.get(i, l), &-half());
            }
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn coordinate_matrices_of_idempotents() {
        let mut a = AlgebraSpec::new(&["1", "2"]).unwrap();
        a.add_generator("t", "1", "2", GenKind::Plain).unwrap();
        let br = DoubleBracketSpec::zero(a.clone());
        let space = RepSpace::new(&br, DimVector::parse(&a, "1:2,2:1").unwrap()).unwrap();
        let e2 = space.coord_matrix(&a.e(1));
        assert!(e2.get(2, 2) == &cp_one() && e2.get(0, 0).is_zero());
        assert_eq!(space.trace_function(&a.one()), cp_const(qi(3)));
        assert!(space.trace_function(&a.gen(0)).is_zero());
        assert!(space.coord_matrix(&a.mul(&a.gen(0), &a.gen(0))).is_zero());
    }

    #[test]
    fn jacobi_and_qp_on_free1() {
        let dims = DimVector::new(vec![2]).unwrap();
        let br = free1(half());
        assert!(jacobiator_check(&br, &dims, &TupleSelection::Exhaustive).unwrap().passed);
        assert!(qp_rep_check(&br, &dims, &TupleSelection::Exhaustive).unwrap().passed);
        assert!(trivector_check(&br, &dims, &TupleSelection::Exhaustive).unwrap().passed);
        assert!(equivariance_check(&br, &dims).unwrap().passed);
        let zero = free1(q(0, 1));
        assert!(jacobiator_check(&zero, &dims, &TupleSelection::Exhaustive).unwrap().passed);
        // a single matrix at N = 2 spans too few tangent directions for the trivector
        assert!(qp_rep_check(&zero, &dims, &TupleSelection::Exhaustive).unwrap().passed);
        let three = DimVector::new(vec![3]).unwrap();
        let rep = qp_rep_check(&zero, &three, &TupleSelection::Sampled { count: 40, seed: 1 }).unwrap();
        assert!(!rep.passed);
    }

    #[test]
    fn inverse_generators_defer() {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("t", "1", "1", GenKind::Invertible).unwrap();
        let br = DoubleBracketSpec::zero(a);
        let err = RepSpace::new(&br, DimVector::new(vec![1]).unwrap()).err().unwrap();
        assert!(matches!(err, BracketError::DeferToNumeric(_)));
    }
}
