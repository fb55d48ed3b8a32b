use std::cell::RefCell;
use std::collections::HashMap;

use crate::algebra::{flip, GenKind, Letter, NcPoly, Tensor2, Word};

use super::{BracketError, DoubleBracketSpec};

/// Memoizing evaluator of `⟪−,−⟫` on arbitrary elements.
///
/// The second slot is expanded by the outer Leibniz rule, the first by the
/// inner one; inverse letters and formal inverses go through the
/// localization rule `⟪a, s⁻¹⟫ = −s⁻¹⟪a,s⟫s⁻¹`.
pub struct Evaluator<'a> {
    br: &'a DoubleBracketSpec,
    letter_cache: RefCell<HashMap<(Letter, Letter), Tensor2>>,
    word_cache: RefCell<HashMap<(Word, Word), Tensor2>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(br: &'a DoubleBracketSpec) -> Self {
        Evaluator { br, letter_cache: RefCell::new(HashMap::new()), word_cache: RefCell::new(HashMap::new()) }
    }

    pub fn bracket(&self) -> &'a DoubleBracketSpec {
        self.br
    }

    pub fn letters(&self, x: Letter, y: Letter) -> Result<Tensor2, BracketError> {
        if let Some(v) = self.letter_cache.borrow().get(&(x, y)) {
            return Ok(v.clone());
        }
        let alg = self.br.algebra();
        let v = if y.inv {
            let d = self.letters(x, y.base())?;
            let w = alg.letter_word(y);
            -alg.outer_word(Some(&w), &d, Some(&w))
        } else if let GenKind::FormalInverse(def) = alg.kind(y.index()) {
            let xw = alg.letter_word(x);
            let mut d = Tensor2::zero();
            for (w, c) in def {
                d.add_scaled(&self.words(&xw, w)?, c);
            }
            let z = alg.letter_word(y);
            -alg.outer_word(Some(&z), &d, Some(&z))
        } else if x.inv || alg.is_formal(x.index()) {
            -flip(&self.letters(y, x)?)
        } else {
            match self.br.get(x.index(), y.index()) {
                Some(v) => v.clone(),
                None => {
                    let (a, b) = self.br.pair_names(x.index(), y.index());
                    return Err(BracketError::Incomplete(a, b));
                }
            }
        };
        self.letter_cache.borrow_mut().insert((x, y), v.clone());
        Ok(v)
    }

    /// `⟪u, y⟫ = Σ_i (d'·u_{>i}) ⊗ (u_{<i}·d'')` with `d = ⟪u_i, y⟫`.
    fn word_letter(&self, u: &Word, y: Letter) -> Result<Tensor2, BracketError> {
        let alg = self.br.algebra();
        let mut out = Tensor2::zero();
        for i in 0..u.len() {
            let d = self.letters(u.letters()[i], y)?;
            if d.is_zero() {
                continue;
            }
            let pre = alg.subword(u, 0, i);
            let suf = alg.subword(u, i + 1, u.len());
            out += alg.inner_word(pre.as_ref(), &d, suf.as_ref());
        }
        Ok(out)
    }

    pub fn words(&self, u: &Word, v: &Word) -> Result<Tensor2, BracketError> {
        if u.is_empty() || v.is_empty() {
            return Ok(Tensor2::zero());
        }
        let key = (u.clone(), v.clone());
        if let Some(t) = self.word_cache.borrow().get(&key) {
            return Ok(t.clone());
        }
        let alg = self.br.algebra();
        let mut out = Tensor2::zero();
        for j in 0..v.len() {
            let d = self.word_letter(u, v.letters()[j])?;
            if d.is_zero() {
                continue;
            }
            let pre = alg.subword(v, 0, j);
            let suf = alg.subword(v, j + 1, v.len());
            out += alg.outer_word(pre.as_ref(), &d, suf.as_ref());
        }
        self.word_cache.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn eval(&self, a: &NcPoly, b: &NcPoly) -> Result<Tensor2, BracketError> {
        let mut out = Tensor2::zero();
        for (u, x) in a {
            for (v, y) in b {
                out.add_scaled(&self.words(u, v)?, &(x * y));
            }
        }
        Ok(out)
    }

    pub fn eval_word_poly(&self, u: &Word, b: &NcPoly) -> Result<Tensor2, BracketError> {
        let mut out = Tensor2::zero();
        for (v, y) in b {
            out.add_scaled(&self.words(u, v)?, y);
        }
        Ok(out)
    }
}
