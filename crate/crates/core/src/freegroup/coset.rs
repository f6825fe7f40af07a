use crate::error::{Error, Result};

use super::Word;

/// Left cosets `g⟨w⟩` of a cyclic subgroup, named by their length-lex
/// minimal element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetSpace {
    m: usize,
    w: Word,
    core_len: usize,
}

impl CosetSpace {
    /// Fails with `ProperPower` when `w` is a proper power. `w = e` gives the
    /// group itself.
    pub fn new(m: usize, w: Word) -> Result<Self> {
        if w.is_proper_power() {
            return Err(Error::ProperPower(w.to_string()));
        }
        if w.max_generator() > m {
            return Err(Error::IndexOutOfRange {
                index: w.max_generator(),
                r: m,
            });
        }
        let core_len = w.cyclically_reduce().1.len();
        Ok(CosetSpace { m, w, core_len })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn generator(&self) -> &Word {
        &self.w
    }

    /// Minimal element of `g⟨w⟩`. Since `|g·wᵏ| ≥ |k|·|core(w)| − |g|`,
    /// exponents beyond `2|g|/|core(w)| + 1` cannot beat `g` itself.
    pub fn rep(&self, g: &Word) -> Word {
        if self.w.is_identity() {
            return g.clone();
        }
        let bound = (2 * g.len() / self.core_len + 1) as i64;
        let mut best = g.clone();
        let (mut up, mut down) = (g.clone(), g.clone());
        let inv = self.w.inverse();
        for _ in 0..bound {
            up = &up * &self.w;
            down = &down * &inv;
            for cand in [&up, &down] {
                if *cand < best {
                    best = cand.clone();
                }
            }
        }
        best
    }

    pub fn is_canonical(&self, c: &Word) -> bool {
        self.rep(c) == *c
    }

    /// `g · (c⟨w⟩)`, as a representative.
    pub fn act(&self, g: &Word, c: &Word) -> Word {
        self.rep(&(g * c))
    }
}
