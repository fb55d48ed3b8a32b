//! Path algebras over a ring of orthogonal idempotents, with sparse exact
//! elements of `A`, `A⊗A` and `A⊗A⊗A`.
//!
//! Paths are read left to right: a generator `a` satisfies
//! `a = e_{t(a)} a e_{h(a)}`, so `ab` is nonzero only when `h(a) = t(b)`.

mod lincomb;

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::Rng;
use thiserror::Error;

pub use lincomb::{flip, tau, tensor_eq, Cycle3, LinComb, NcPoly, Tensor2, Tensor3};

/// Coefficient field.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn half() -> Q {
    q(1, 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown idempotent `{0}`")]
    UnknownIdempotent(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate label `{0}`")]
    Duplicate(String),
    #[error("generator `{0}` is not invertible")]
    NotInvertible(String),
    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("malformed word: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenKind {
    Plain,
    /// Group-like: an implicit inverse symbol `g^-1` with tail and head swapped.
    Invertible,
    /// Loop with `g^k = 0`.
    Nilpotent(u32),
    /// Loop with `g^n = e`; inverse letters are rewritten as `g^(n-1)`.
    Cyclic(u32),
    /// Opaque two-sided inverse of a defining element `d ∈ e_s A e_s`.
    FormalInverse(NcPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub kind: GenKind,
}

/// A signed generator symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Letter {
        Letter { gen: gen as u32, inv: false }
    }

    pub fn inverse(gen: usize) -> Letter {
        Letter { gen: gen as u32, inv: true }
    }

    pub fn index(self) -> usize {
        self.gen as usize
    }

    pub fn base(self) -> Letter {
        Letter { gen: self.gen, inv: false }
    }
}

/// A path. The empty path at `s` represents `e_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    src: u32,
    dst: u32,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.iter().map(|l| l.gen).cmp(other.letters.iter().map(|l| l.gen)))
            .then_with(|| self.letters.iter().map(|l| l.inv).cmp(other.letters.iter().map(|l| l.inv)))
            .then_with(|| self.src.cmp(&other.src))
            .then_with(|| self.dst.cmp(&other.dst))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn vertex(s: usize) -> Word {
        Word { letters: Vec::new(), src: s as u32, dst: s as u32 }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn src(&self) -> usize {
        self.src as usize
    }

    pub fn dst(&self) -> usize {
        self.dst as usize
    }

    /// Vertex of an empty word.
    pub fn idempotent(&self) -> Option<usize> {
        self.letters.is_empty().then_some(self.src as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    idempotents: Vec<String>,
    generators: Vec<Generator>,
}

impl AlgebraSpec {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self, AlgebraError> {
        if labels.is_empty() {
            return Err(AlgebraError::Malformed("at least one idempotent is required".into()));
        }
        let mut idempotents: Vec<String> = Vec::new();
        for l in labels {
            let l = l.as_ref().to_string();
            if idempotents.contains(&l) {
                return Err(AlgebraError::Duplicate(l));
            }
            idempotents.push(l);
        }
        Ok(AlgebraSpec { idempotents, generators: Vec::new() })
    }

    pub fn add_generator(&mut self, name: &str, tail: &str, head: &str, kind: GenKind) -> Result<usize, AlgebraError> {
        let t = self.vertex_index(tail)?;
        let h = self.vertex_index(head)?;
        self.add_generator_at(name, t, h, kind)
    }

    pub fn add_generator_at(&mut self, name: &str, tail: usize, head: usize, kind: GenKind) -> Result<usize, AlgebraError> {
        let bad = |reason: &str| AlgebraError::InvalidGenerator { name: name.to_string(), reason: reason.to_string() };
        if name.is_empty() || name.contains("^-1") || name.contains(char::is_whitespace) {
            return Err(bad("names must be nonempty, without whitespace or `^-1`"));
        }
        if self.generators.iter().any(|g| g.name == name) {
            return Err(AlgebraError::Duplicate(name.to_string()));
        }
        if tail >= self.idempotents.len() || head >= self.idempotents.len() {
            return Err(bad("endpoint out of range"));
        }
        match &kind {
            GenKind::Nilpotent(k) => {
                if tail != head {
                    return Err(bad("a nilpotent generator must be a loop"));
                }
                if *k < 2 {
                    return Err(bad("nilpotency order must be at least 2"));
                }
            }
            GenKind::Cyclic(n) => {
                if tail != head || *n < 1 {
                    return Err(bad("a cyclic generator must be a loop of order at least 1"));
                }
            }
            GenKind::FormalInverse(d) => {
                if tail != head {
                    return Err(bad("a formal inverse sits at a single idempotent"));
                }
                if d.is_zero() {
                    return Err(bad("defining element is zero"));
                }
                for w in d.keys() {
                    if w.src() != tail || w.dst() != tail {
                        return Err(bad("defining element is not in e_s A e_s"));
                    }
                    if w.letters().iter().any(|l| l.index() >= self.generators.len()) {
                        return Err(bad("defining element refers to a later generator"));
                    }
                }
            }
            GenKind::Plain | GenKind::Invertible => {}
        }
        self.generators.push(Generator { name: name.to_string(), tail, head, kind });
        Ok(self.generators.len() - 1)
    }

    pub fn idempotents(&self) -> &[String] {
        &self.idempotents
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: usize) -> &Generator {
        &self.generators[g]
    }

    pub fn num_vertices(&self) -> usize {
        self.idempotents.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn label(&self, s: usize) -> &str {
        &self.idempotents[s]
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize, AlgebraError> {
        self.idempotents
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| AlgebraError::UnknownIdempotent(label.to_string()))
    }

    pub fn gen_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn kind(&self, g: usize) -> &GenKind {
        &self.generators[g].kind
    }

    pub fn has_inverse_letter(&self, g: usize) -> bool {
        matches!(self.generators[g].kind, GenKind::Invertible | GenKind::Cyclic(_))
    }

    pub fn is_formal(&self, g: usize) -> bool {
        matches!(self.generators[g].kind, GenKind::FormalInverse(_))
    }

    /// Generators whose bracket values are stored (everything except formal inverses).
    pub fn base_generators(&self) -> Vec<usize> {
        (0..self.generators.len()).filter(|&g| !self.is_formal(g)).collect()
    }

    pub fn letter_tail(&self, l: Letter) -> usize {
        let g = &self.generators[l.index()];
        if l.inv {
            g.head
        } else {
            g.tail
        }
    }

    pub fn letter_head(&self, l: Letter) -> usize {
        let g = &self.generators[l.index()];
        if l.inv {
            g.tail
        } else {
            g.head
        }
    }

    /// Letters that may appear in normalized words.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            out.push(Letter::new(i));
            if matches!(g.kind, GenKind::Invertible) {
                out.push(Letter::inverse(i));
            }
        }
        out
    }

    /// Base letters together with inverse letters of group-like generators.
    pub fn checkable_letters(&self) -> Vec<Letter> {
        self.letters().into_iter().filter(|l| !self.is_formal(l.index())).collect()
    }

    pub fn validate_letter(&self, l: Letter) -> Result<(), AlgebraError> {
        if l.index() >= self.generators.len() {
            return Err(AlgebraError::Malformed(format!("generator index {} out of range", l.gen)));
        }
        if l.inv && !self.has_inverse_letter(l.index()) {
            return Err(AlgebraError::NotInvertible(self.generators[l.index()].name.clone()));
        }
        Ok(())
    }

    fn push_letter(&self, stack: &mut Vec<Letter>, x: Letter) -> bool {
        if let Some(top) = stack.last() {
            if top.gen == x.gen && top.inv != x.inv {
                stack.pop();
                return true;
            }
        }
        stack.push(x);
        match self.generators[x.index()].kind {
            GenKind::Nilpotent(k) => {
                let run = stack.iter().rev().take_while(|l| **l == x).count();
                if run >= k as usize {
                    return false;
                }
            }
            GenKind::Cyclic(n) => {
                let run = stack.iter().rev().take_while(|l| **l == x).count();
                if run == n as usize {
                    stack.truncate(stack.len() - run);
                }
            }
            _ => {}
        }
        true
    }

    /// Normal form of a product of letters starting at `src`, or `None` when it vanishes.
    /// Letters are assumed valid.
    pub fn normalize_letters(&self, src: usize, letters: &[Letter]) -> Option<Word> {
        let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
        let mut at = src;
        for &l in letters {
            if self.letter_tail(l) != at {
                return None;
            }
            at = self.letter_head(l);
            let ok = match self.generators[l.index()].kind {
                GenKind::Cyclic(n) if l.inv => (1..n).all(|_| self.push_letter(&mut stack, l.base())),
                _ => self.push_letter(&mut stack, l),
            };
            if !ok {
                return None;
            }
        }
        Some(Word { letters: stack, src: src as u32, dst: at as u32 })
    }

    /// Normalizes a word given as a letter sequence, validating every letter.
    pub fn normalize(&self, w: &Word) -> Result<NcPoly, AlgebraError> {
        if w.src() >= self.num_vertices() {
            return Err(AlgebraError::Malformed("idempotent out of range".into()));
        }
        for &l in w.letters() {
            self.validate_letter(l)?;
        }
        let src = w.letters().first().map(|&l| self.letter_tail(l)).unwrap_or(w.src());
        Ok(self.normalize_letters(src, w.letters()).map(NcPoly::basis).unwrap_or_default())
    }

    /// Builds a raw (possibly non-normalized) word; use with [`AlgebraSpec::normalize`].
    pub fn raw_word(&self, letters: Vec<Letter>, src: usize) -> Word {
        let src = letters.first().map(|&l| self.letter_tail(l)).unwrap_or(src);
        let dst = letters.last().map(|&l| self.letter_head(l)).unwrap_or(src);
        Word { letters, src: src as u32, dst: dst as u32 }
    }

    /// The unique normal form of a product of letters; `None` if zero.
    pub fn word(&self, letters: &[Letter]) -> Result<Option<Word>, AlgebraError> {
        let Some(&first) = letters.first() else {
            return Err(AlgebraError::Malformed("empty letter sequence without idempotent".into()));
        };
        for &l in letters {
            self.validate_letter(l)?;
        }
        Ok(self.normalize_letters(self.letter_tail(first), letters))
    }

    pub fn letter_word(&self, l: Letter) -> Word {
        Word { letters: vec![l], src: self.letter_tail(l) as u32, dst: self.letter_head(l) as u32 }
    }

    /// Contiguous piece of a normalized word; `None` for the empty range.
    pub fn subword(&self, w: &Word, start: usize, end: usize) -> Option<Word> {
        if start >= end {
            return None;
        }
        let letters = w.letters[start..end].to_vec();
        let src = self.letter_tail(letters[0]) as u32;
        let dst = self.letter_head(letters[letters.len() - 1]) as u32;
        Some(Word { letters, src, dst })
    }

    pub fn mul_words(&self, u: &Word, v: &Word) -> Option<Word> {
        if u.dst != v.src {
            return None;
        }
        if u.is_empty() {
            return Some(v.clone());
        }
        if v.is_empty() {
            return Some(u.clone());
        }
        let mut stack = u.letters.clone();
        for &l in &v.letters {
            let ok = match self.generators[l.index()].kind {
                GenKind::Cyclic(n) if l.inv => (1..n).all(|_| self.push_letter(&mut stack, l.base())),
                _ => self.push_letter(&mut stack, l),
            };
            if !ok {
                return None;
            }
        }
        Some(Word { letters: stack, src: u.src, dst: v.dst })
    }

    pub fn mul(&self, p: &NcPoly, r: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in p {
            for (v, b) in r {
                if let Some(w) = self.mul_words(u, v) {
                    out.add_term(w, a * b);
                }
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[&NcPoly]) -> NcPoly {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn e(&self, s: usize) -> NcPoly {
        NcPoly::basis(Word::vertex(s))
    }

    pub fn one(&self) -> NcPoly {
        (0..self.num_vertices()).map(|s| (Word::vertex(s), Q::one())).collect()
    }

    pub fn gen(&self, g: usize) -> NcPoly {
        NcPoly::basis(self.letter_word(Letter::new(g)))
    }

    pub fn inv(&self, g: usize) -> NcPoly {
        let l = Letter::inverse(g);
        NcPoly::basis(self.normalize_letters(self.letter_tail(l), &[l]).expect("inverse letter is nonzero"))
    }

    /// `p^n` for `n ≥ 0`.
    pub fn pow(&self, p: &NcPoly, n: u32) -> NcPoly {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, p);
        }
        acc
    }

    pub fn scalar(&self, c: Q) -> NcPoly {
        self.one().scale(&c)
    }

    /// Parses a generator name with optional `^-1`, or `e<label>` for an idempotent.
    pub fn parse_symbol(&self, sym: &str) -> Result<Result<Letter, usize>, AlgebraError> {
        let (name, inv) = match sym.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (sym, false),
        };
        if let Ok(g) = self.gen_index(name) {
            let l = Letter { gen: g as u32, inv };
            self.validate_letter(l)?;
            return Ok(Ok(l));
        }
        if !inv {
            if let Some(label) = sym.strip_prefix('e') {
                if let Ok(s) = self.vertex_index(label) {
                    return Ok(Err(s));
                }
            }
            if sym == "1" && self.num_vertices() == 1 {
                return Ok(Err(0));
            }
        }
        Err(AlgebraError::UnknownGenerator(sym.to_string()))
    }

    /// Parses and normalizes a word given as symbols. Idempotent symbols act by multiplication.
    pub fn parse_word<S: AsRef<str>>(&self, syms: &[S]) -> Result<NcPoly, AlgebraError> {
        if syms.is_empty() {
            return Err(AlgebraError::Malformed("empty word; use an idempotent symbol".into()));
        }
        let mut acc: Option<NcPoly> = None;
        for sym in syms {
            let factor = match self.parse_symbol(sym.as_ref())? {
                Ok(l) => NcPoly::basis(self.normalize_letters(self.letter_tail(l), &[l]).expect("single letter")),
                Err(s) => self.e(s),
            };
            acc = Some(match acc {
                None => factor,
                Some(a) => self.mul(&a, &factor),
            });
        }
        Ok(acc.unwrap_or_default())
    }

    /// Parses a whitespace-separated word, e.g. `"t s^-1"`.
    pub fn parse_word_str(&self, s: &str) -> Result<NcPoly, AlgebraError> {
        let syms: Vec<&str> = s.split_whitespace().collect();
        self.parse_word(&syms)
    }

    pub fn symbol(&self, l: Letter) -> String {
        let name = &self.generators[l.index()].name;
        if l.inv {
            format!("{name}^-1")
        } else {
            name.clone()
        }
    }

    pub fn word_symbols(&self, w: &Word) -> Vec<String> {
        if w.is_empty() {
            vec![format!("e{}", self.idempotents[w.src()])]
        } else {
            w.letters.iter().map(|&l| self.symbol(l)).collect()
        }
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        self.word_symbols(w).join(" ")
    }

    pub fn fmt_poly(&self, p: &NcPoly) -> String {
        fmt_terms(p.iter().map(|(w, c)| (c, self.fmt_word(w))))
    }

    pub fn fmt_t2(&self, t: &Tensor2) -> String {
        fmt_terms(t.iter().map(|((x, y), c)| (c, format!("{} ⊗ {}", self.fmt_word(x), self.fmt_word(y)))))
    }

    pub fn fmt_t3(&self, t: &Tensor3) -> String {
        fmt_terms(
            t.iter()
                .map(|((x, y, z), c)| (c, format!("{} ⊗ {} ⊗ {}", self.fmt_word(x), self.fmt_word(y), self.fmt_word(z)))),
        )
    }

    pub fn contains_formal(&self, w: &Word) -> bool {
        w.letters.iter().any(|l| self.is_formal(l.index()))
    }

    pub fn poly_contains_formal(&self, p: &NcPoly) -> bool {
        p.keys().any(|w| self.contains_formal(w))
    }

    pub fn t2_contains_formal(&self, t: &Tensor2) -> bool {
        t.keys().any(|(x, y)| self.contains_formal(x) || self.contains_formal(y))
    }

    pub fn contains_inverse(&self, w: &Word) -> bool {
        w.letters.iter().any(|l| l.inv || self.is_formal(l.index()))
    }

    /// `x ⊗ y` as a tensor.
    pub fn tensor(&self, x: &NcPoly, y: &NcPoly) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (u, a) in x {
            for (v, b) in y {
                out.add_term((u.clone(), v.clone()), a * b);
            }
        }
        out
    }

    pub fn tensor3(&self, x: &NcPoly, y: &NcPoly, z: &NcPoly) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (u, a) in x {
            for (v, b) in y {
                let ab = a * b;
                for (w, c) in z {
                    out.add_term((u.clone(), v.clone(), w.clone()), &ab * c);
                }
            }
        }
        out
    }

    /// `l d r = (l d') ⊗ (d'' r)` with optional word factors (`None` acts as 1).
    pub fn outer_word(&self, l: Option<&Word>, d: &Tensor2, r: Option<&Word>) -> Tensor2 {
        let mut out = Tensor2::zero();
        for ((x, y), c) in d {
            let x2 = match l {
                Some(l) => self.mul_words(l, x),
                None => Some(x.clone()),
            };
            let Some(x2) = x2 else { continue };
            let y2 = match r {
                Some(r) => self.mul_words(y, r),
                None => Some(y.clone()),
            };
            let Some(y2) = y2 else { continue };
            out.add_term((x2, y2), c.clone());
        }
        out
    }

    /// `l * d * r = (d' r) ⊗ (l d'')` with optional word factors.
    pub fn inner_word(&self, l: Option<&Word>, d: &Tensor2, r: Option<&Word>) -> Tensor2 {
        let mut out = Tensor2::zero();
        for ((x, y), c) in d {
            let x2 = match r {
                Some(r) => self.mul_words(x, r),
                None => Some(x.clone()),
            };
            let Some(x2) = x2 else { continue };
            let y2 = match l {
                Some(l) => self.mul_words(l, y),
                None => Some(y.clone()),
            };
            let Some(y2) = y2 else { continue };
            out.add_term((x2, y2), c.clone());
        }
        out
    }

    pub fn outer_act(&self, l: &NcPoly, d: &Tensor2, r: &NcPoly) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (lw, a) in l {
            for (rw, b) in r {
                out.add_scaled(&self.outer_word(Some(lw), d, Some(rw)), &(a * b));
            }
        }
        out
    }

    pub fn inner_act(&self, l: &NcPoly, d: &Tensor2, r: &NcPoly) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (lw, a) in l {
            for (rw, b) in r {
                out.add_scaled(&self.inner_word(Some(lw), d, Some(rw)), &(a * b));
            }
        }
        out
    }

    /// `d ⊗ z` appended as a third factor.
    pub fn append(&self, d: &Tensor2, z: &Word, c: &Q) -> Tensor3 {
        d.iter().map(|((x, y), a)| ((x.clone(), y.clone(), z.clone()), a * c)).collect()
    }

    /// Reachability of vertices by nonempty letter paths (`reach[s][t]`) or the empty path.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.num_vertices();
        let mut r = vec![vec![false; n]; n];
        for (s, row) in r.iter_mut().enumerate() {
            row[s] = true;
        }
        for l in self.letters() {
            r[self.letter_tail(l)][self.letter_head(l)] = true;
        }
        for k in 0..n {
            let via = r[k].clone();
            for row in r.iter_mut().filter(|row| row[k]) {
                for (x, &y) in row.iter_mut().zip(&via) {
                    *x |= y;
                }
            }
        }
        r
    }

    /// Random normalized nonzero word of length at most `max_len`, built as a random walk.
    pub fn sample_word<R: Rng>(&self, rng: &mut R, max_len: usize) -> Word {
        let letters = self.checkable_letters();
        loop {
            let s = rng.gen_range(0..self.num_vertices());
            let len = rng.gen_range(0..=max_len);
            let mut w = Vec::new();
            let mut at = s;
            for _ in 0..len {
                let options: Vec<Letter> = letters.iter().copied().filter(|&l| self.letter_tail(l) == at).collect();
                if options.is_empty() {
                    break;
                }
                let l = options[rng.gen_range(0..options.len())];
                w.push(l);
                at = self.letter_head(l);
            }
            if let Some(word) = self.normalize_letters(s, &w) {
                return word;
            }
        }
    }

    /// Random element: sum of up to `terms` sampled words with small integer coefficients.
    pub fn sample_poly<R: Rng>(&self, rng: &mut R, terms: usize, max_len: usize) -> NcPoly {
        let mut p = NcPoly::zero();
        for _ in 0..rng.gen_range(1..=terms.max(1)) {
            let c = rng.gen_range(-3i64..=3);
            p.add_term(self.sample_word(rng, max_len), qi(if c == 0 { 1 } else { c }));
        }
        p
    }

    /// Same algebra with every nilpotent relation dropped.
    pub fn without_relations(&self) -> AlgebraSpec {
        let mut out = self.clone();
        for g in &mut out.generators {
            if matches!(g.kind, GenKind::Nilpotent(_)) {
                g.kind = GenKind::Plain;
            }
        }
        out
    }

    pub fn has_relations(&self) -> bool {
        self.generators.iter().any(|g| matches!(g.kind, GenKind::Nilpotent(_) | GenKind::Cyclic(_)))
    }

    /// Word of `self` translated into `other` by matching generator names and idempotent labels.
    pub fn translate_word(&self, other: &AlgebraSpec, w: &Word) -> Result<Word, AlgebraError> {
        if w.is_empty() {
            let s = other.vertex_index(self.label(w.src()))?;
            return Ok(Word::vertex(s));
        }
        let mut letters = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let g = other.gen_index(&self.generators[l.index()].name)?;
            let l2 = Letter { gen: g as u32, inv: l.inv };
            other.validate_letter(l2)?;
            letters.push(l2);
        }
        let src = other.letter_tail(letters[0]);
        other
            .normalize_letters(src, &letters)
            .filter(|x| x.letters().len() == w.len())
            .ok_or_else(|| AlgebraError::Malformed(format!("word `{}` does not translate", self.fmt_word(w))))
    }

    pub fn translate_poly(&self, other: &AlgebraSpec, p: &NcPoly) -> Result<NcPoly, AlgebraError> {
        let mut out = NcPoly::zero();
        for (w, c) in p {
            out.add_term(self.translate_word(other, w)?, c.clone());
        }
        Ok(out)
    }

    pub fn translate_t2(&self, other: &AlgebraSpec, t: &Tensor2) -> Result<Tensor2, AlgebraError> {
        let mut out = Tensor2::zero();
        for ((x, y), c) in t {
            out.add_term((self.translate_word(other, x)?, self.translate_word(other, y)?), c.clone());
        }
        Ok(out)
    }

    /// Shifts generator and vertex indices, for embedding into a direct sum.
    pub(crate) fn shift_word(w: &Word, gen_shift: usize, vertex_shift: usize) -> Word {
        Word {
            letters: w.letters.iter().map(|l| Letter { gen: l.gen + gen_shift as u32, inv: l.inv }).collect(),
            src: w.src + vertex_shift as u32,
            dst: w.dst + vertex_shift as u32,
        }
    }

    /// Relabels endpoints of a word through a vertex map.
    pub(crate) fn relabel_word(w: &Word, vertex_map: &[usize]) -> Word {
        Word { letters: w.letters.clone(), src: vertex_map[w.src()] as u32, dst: vertex_map[w.dst()] as u32 }
    }

    /// Same algebra with the idempotents renamed, in order.
    pub fn with_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<AlgebraSpec, AlgebraError> {
        if labels.len() != self.idempotents.len() {
            return Err(AlgebraError::Malformed("one label per idempotent is required".into()));
        }
        let fresh = AlgebraSpec::new(labels)?;
        Ok(AlgebraSpec { idempotents: fresh.idempotents, generators: self.generators.clone() })
    }

    /// Same algebra with generators renamed by `(old, new)` pairs; indices are unchanged.
    pub fn with_generator_names(&self, renames: &[(&str, &str)]) -> Result<AlgebraSpec, AlgebraError> {
        let mut names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        for (old, new) in renames {
            let g = self.gen_index(old)?;
            names[g] = new.to_string();
        }
        let mut out = AlgebraSpec::new(&self.idempotents)?;
        for (gen, n) in self.generators.iter().zip(&names) {
            out.add_generator_at(n, gen.tail, gen.head, gen.kind.clone())?;
        }
        Ok(out)
    }
}

fn fmt_terms<I: Iterator<Item = (impl std::borrow::Borrow<Q>, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let c: &Q = c.borrow();
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            let _ = write!(out, "{a} ");
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver() -> AlgebraSpec {
        let mut a = AlgebraSpec::new(&["1", "2"]).unwrap();
        a.add_generator("t", "1", "2", GenKind::Plain).unwrap();
        a.add_generator("s", "2", "1", GenKind::Plain).unwrap();
        a.add_generator("g", "1", "1", GenKind::Invertible).unwrap();
        a.add_generator("x", "1", "1", GenKind::Nilpotent(3)).unwrap();
        a
    }

    #[test]
    fn orthogonal_idempotents() {
        let a = quiver();
        assert!(a.mul(&a.e(0), &a.e(1)).is_zero());
        assert_eq!(a.mul(&a.e(0), &a.e(0)), a.e(0));
    }

    #[test]
    fn inverse_cancels_to_tail_idempotent() {
        let a = quiver();
        let g = a.gen(2);
        assert_eq!(a.mul(&g, &a.inv(2)), a.e(0));
        assert_eq!(a.parse_word_str("g g^-1").unwrap(), a.e(0));
        assert_eq!(a.parse_word_str("t s g g^-1 x").unwrap(), a.parse_word_str("t s x").unwrap());
    }

    #[test]
    fn nilpotent_truncation() {
        let a = quiver();
        assert!(a.parse_word_str("x x x").unwrap().is_zero());
        assert!(!a.parse_word_str("x x g x").unwrap().is_zero());
    }

    #[test]
    fn path_composition() {
        let a = quiver();
        let ts = a.mul(&a.gen(0), &a.gen(1));
        let w = ts.keys().next().unwrap();
        assert_eq!((w.src(), w.dst()), (0, 0));
        assert!(a.mul(&a.gen(0), &a.gen(0)).is_zero());
        let p = &a.gen(0) + &a.gen(1);
        assert_eq!(a.mul(&a.e(0), &p), a.gen(0));
    }

    #[test]
    fn actions_on_tensors() {
        let a = quiver();
        let t = a.gen(0);
        let s = a.gen(1);
        let d = a.tensor(&t, &s);
        assert_eq!(a.outer_act(&a.one(), &d, &a.one()), d);
        assert_eq!(a.inner_act(&a.one(), &d, &a.one()), d);
        assert_eq!(a.outer_act(&s, &d, &t), a.tensor(&a.mul(&s, &t), &a.mul(&s, &t)));
        assert_eq!(a.inner_act(&s, &d, &t), a.tensor(&a.mul(&t, &t), &a.mul(&s, &s)));
        // t e2 = t but e1 s = 0
        assert!(a.inner_act(&a.e(0), &d, &a.e(1)).is_zero());
        assert!(a.outer_act(&a.e(1), &a.tensor(&t, &a.one()), &a.e(0)).is_zero());
    }

    #[test]
    fn tau_moves_slots() {
        let a = quiver();
        let x = a.gen(0);
        let y = a.gen(1);
        let z = a.gen(2);
        let t = a.tensor3(&x, &y, &z);
        assert_eq!(tau(Cycle3::Tau, &t), a.tensor3(&z, &x, &y));
        assert_eq!(tau(Cycle3::Tau2, &t), a.tensor3(&y, &z, &x));
        assert_eq!(tau(Cycle3::Tau, &tau(Cycle3::Tau, &tau(Cycle3::Tau, &t))), t);
        let d = a.tensor(&x, &y);
        assert_eq!(flip(&flip(&d)), d);
        assert!(flip(&Tensor2::zero()).is_zero());
        assert_ne!(a.tensor(&x, &a.one()), a.tensor(&a.one(), &x));
    }

    #[test]
    fn cyclic_generators_reduce() {
        let mut a = AlgebraSpec::new(&["1"]).unwrap();
        a.add_generator("c", "1", "1", GenKind::Cyclic(3)).unwrap();
        assert_eq!(a.parse_word_str("c c c").unwrap(), a.e(0));
        assert_eq!(a.parse_word_str("c^-1").unwrap(), a.parse_word_str("c c").unwrap());
        assert_eq!(a.parse_word_str("c c^-1").unwrap(), a.e(0));
    }

    #[test]
    fn structural_errors() {
        let a = quiver();
        assert!(matches!(a.parse_word_str("t^-1"), Err(AlgebraError::NotInvertible(_))));
        assert!(matches!(a.parse_word_str("y"), Err(AlgebraError::UnknownGenerator(_))));
        let mut b = AlgebraSpec::new(&["1", "2"]).unwrap();
        assert!(b.add_generator("x", "1", "2", GenKind::Nilpotent(3)).is_err());
        assert!(b.add_generator("x", "1", "3", GenKind::Plain).is_err());
        b.add_generator("x", "1", "2", GenKind::Plain).unwrap();
        assert!(b.add_generator("x", "1", "2", GenKind::Plain).is_err());
    }

    #[test]
    fn display() {
        let a = quiver();
        let d = a.tensor(&a.parse_word_str("s t").unwrap(), &a.e(1)).scale(&half())
            - a.tensor(&a.e(1), &a.parse_word_str("s t").unwrap());
        assert_eq!(a.fmt_t2(&d), "-e2 ⊗ s t + 1/2 s t ⊗ e2");
    }
}
