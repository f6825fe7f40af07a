use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

/// A freely reduced word over generators `1..=m`; a negative letter is an
/// inverse generator. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<i32>);

/// Letter order used everywhere: `f1 < f1⁻¹ < f2 < f2⁻¹ < …`.
fn letter_key(l: i32) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The generator `f_i` (1-based).
    pub fn generator(i: usize) -> Self {
        assert!(i >= 1, "generators are 1-based");
        Word(vec![i as i32])
    }

    /// Builds a word from signed letters, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = i32>>(letters: I) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index that occurs, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.0
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Writes the word as `conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let w = &self.0;
        let mut i = 0;
        while w.len() >= 2 * i + 2 && w[i] == -w[w.len() - 1 - i] {
            i += 1;
        }
        (Word(w[..i].to_vec()), Word(w[i..w.len() - i].to_vec()))
    }

    /// `Some((root, k))` with `self = root^k`, `k ≥ 2`, `root` not a proper power.
    pub fn proper_power(&self) -> Option<(Word, usize)> {
        let (conj, core) = self.cyclically_reduce();
        let n = core.len();
        let period = (1..n).find(|&p| n % p == 0 && (p..n).all(|i| core.0[i] == core.0[i - p]))?;
        let piece = Word(core.0[..period].to_vec());
        let root = &(&conj * &piece) * &conj.inverse();
        Some((root, n / period))
    }

    pub fn is_proper_power(&self) -> bool {
        self.proper_power().is_some()
    }

    /// Concatenation followed by reduction.
    pub fn multiply(&self, other: &Word) -> Word {
        let a = &self.0;
        let b = &other.0;
        let mut cancel = 0;
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == -b[cancel] {
            cancel += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        out.extend_from_slice(&a[..a.len() - cancel]);
        out.extend_from_slice(&b[cancel..]);
        Word(out)
    }

    /// Whether every adjacent pair is non-cancelling.
    pub fn is_reduced(letters: &[i32]) -> bool {
        letters.windows(2).all(|p| p[0] != -p[1]) && !letters.contains(&0)
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        self.multiply(&rhs)
    }
}

impl Ord for Word {
    /// Length first, then letters under `f1 < f1⁻¹ < f2 < …`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            self.0
                .iter()
                .map(|&l| letter_key(l))
                .cmp(other.0.iter().map(|&l| letter_key(l)))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Letters `a..z` for generators 1..26, upper case for inverses, `e` for
    /// the identity; larger generators print as `[k]` / `[-k]`, and so does
    /// the one-letter word `f5` to keep it apart from the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        if self.0 == [5] {
            return f.write_str("[5]");
        }
        for &l in &self.0 {
            let g = l.unsigned_abs();
            if g <= 26 {
                let c = (b'a' + (g - 1) as u8) as char;
                let c = if l < 0 { c.to_ascii_uppercase() } else { c };
                write!(f, "{c}")?;
            } else {
                write!(f, "[{l}]")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn commute(u: &Word, v: &Word) -> bool {
    u * v == v * u
}

/// All reduced words of length at most `radius` over `m` generators, in
/// length-lex order.
pub fn ball(m: usize, radius: usize) -> Vec<Word> {
    let letters: Vec<i32> = (1..=m as i32).flat_map(|i| [i, -i]).collect();
    let mut out = vec![Word::identity()];
    let mut layer_start = 0;
    for _ in 0..radius {
        let layer_end = out.len();
        for idx in layer_start..layer_end {
            let last = out[idx].0.last().copied();
            for &l in &letters {
                if last == Some(-l) {
                    continue;
                }
                let mut next = out[idx].0.clone();
                next.push(l);
                out.push(Word(next));
            }
        }
        layer_start = layer_end;
    }
    out
}

/// `1 + Σ_{ℓ=1..radius} 2m(2m−1)^{ℓ−1}`.
pub fn ball_size(m: usize, radius: usize) -> u128 {
    let (m, mut layer, mut total) = (m as u128, 0u128, 1u128);
    for l in 1..=radius {
        layer = if l == 1 { 2 * m } else { layer * (2 * m - 1) };
        total += layer;
    }
    total
}
