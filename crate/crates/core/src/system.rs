//! Systems of congruences and subcongruences over `r` indexed set variables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `r` an [`IndexSet`] can address.
pub const MAX_INDEX: usize = 64;

/// A subset of `{1..r}`, stored as a bitmask (bit `k-1` is index `k`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1..r}`.
    pub fn full(r: usize) -> Self {
        assert!(r <= MAX_INDEX, "r = {r} exceeds {MAX_INDEX}");
        if r == MAX_INDEX {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << r) - 1)
        }
    }

    pub fn singleton(k: usize) -> Self {
        assert!((1..=MAX_INDEX).contains(&k), "index {k} out of range");
        IndexSet(1u64 << (k - 1))
    }

    /// Builds a set from 1-based indices; panics on index 0 or > 64.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(IndexSet::EMPTY, |acc, k| acc.union(IndexSet::singleton(k)))
    }

    pub fn contains(self, k: usize) -> bool {
        (1..=MAX_INDEX).contains(&k) && self.0 & (1u64 << (k - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement within `{1..r}`.
    pub fn complement(self, r: usize) -> IndexSet {
        IndexSet::full(r).difference(self)
    }

    /// Largest index present, or 0 for the empty set.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=MAX_INDEX).filter(move |&k| self.contains(k))
    }

    pub fn with(self, k: usize) -> IndexSet {
        self.union(IndexSet::singleton(k))
    }

    pub fn without(self, k: usize) -> IndexSet {
        self.difference(IndexSet::singleton(k))
    }

    /// Position of this set in the `2^r` subset enumeration.
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, k) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `⋃L ≅ ⋃R`
    Congruence,
    /// `⋃L ⪯ ⋃R`: the left union is congruent to a subset of the right one.
    Subcongruence,
}

/// One congruence or subcongruence between unions of set variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Statement {
    pub kind: Relation,
    pub left: IndexSet,
    pub right: IndexSet,
}

impl Statement {
    pub fn congruence(left: IndexSet, right: IndexSet) -> Self {
        Statement {
            kind: Relation::Congruence,
            left,
            right,
        }
    }

    pub fn subcongruence(left: IndexSet, right: IndexSet) -> Self {
        Statement {
            kind: Relation::Subcongruence,
            left,
            right,
        }
    }

    /// Both sides nonempty and neither side all of `{1..r}`.
    pub fn is_proper(&self, r: usize) -> bool {
        let full = IndexSet::full(r);
        !self.left.is_empty() && !self.right.is_empty() && self.left != full && self.right != full
    }

    pub fn is_congruence(&self) -> bool {
        self.kind == Relation::Congruence
    }

    /// Unordered key for congruences, ordered key for subcongruences.
    pub(crate) fn normalized(&self) -> Statement {
        match self.kind {
            Relation::Congruence if self.right < self.left => Statement {
                kind: self.kind,
                left: self.right,
                right: self.left,
            },
            _ => *self,
        }
    }
}

/// Whether the sets are required to partition the ambient space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Partition,
    Family,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Partition => f.write_str("partition"),
            Mode::Family => f.write_str("family"),
        }
    }
}

/// `r` set variables plus an ordered list of statements.
///
/// Statement order matters: statement `i` is the one witnessed by the `i`-th
/// designated group element wherever witnesses are involved.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceSystem {
    r: usize,
    statements: Vec<Statement>,
    mode: Mode,
}

impl CongruenceSystem {
    pub fn new(r: usize, statements: Vec<Statement>, mode: Mode) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidSystem("r must be at least 1".into()));
        }
        if r > MAX_INDEX {
            return Err(Error::LimitExceeded {
                what: "r",
                value: r,
                limit: MAX_INDEX,
            });
        }
        for st in &statements {
            let top = st.left.union(st.right).max_index();
            if top > r {
                return Err(Error::IndexOutOfRange { index: top, r });
            }
        }
        Ok(CongruenceSystem {
            r,
            statements,
            mode,
        })
    }

    /// Convenience constructor from 1-based index lists, congruences only.
    pub fn from_congruences(r: usize, pairs: &[(&[usize], &[usize])]) -> Result<Self> {
        let statements = pairs
            .iter()
            .map(|(l, r)| {
                Statement::congruence(
                    IndexSet::from_indices(l.iter().copied()),
                    IndexSet::from_indices(r.iter().copied()),
                )
            })
            .collect();
        CongruenceSystem::new(r, statements, Mode::Partition)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn congruences(&self) -> impl Iterator<Item = &Statement> {
        self.statements.iter().filter(|s| s.is_congruence())
    }

    pub fn has_subcongruences(&self) -> bool {
        self.statements.iter().any(|s| !s.is_congruence())
    }

    pub fn is_proper(&self) -> bool {
        self.statements.iter().all(|s| s.is_proper(self.r))
    }

    /// Orientation-insensitive membership test for a congruence.
    pub fn contains_congruence(&self, left: IndexSet, right: IndexSet) -> bool {
        self.congruences()
            .any(|s| (s.left == left && s.right == right) || (s.left == right && s.right == left))
    }

    /// Sorted, orientation-normalized statement list; equal for systems that
    /// differ only in statement order or congruence orientation.
    pub fn canonical_statements(&self) -> Vec<Statement> {
        let mut v: Vec<Statement> = self.statements.iter().map(Statement::normalized).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Same `r`, same mode, and the same statements up to order and orientation.
    pub fn same_statements(&self, other: &CongruenceSystem) -> bool {
        self.r == other.r
            && self.mode == other.mode
            && self.canonical_statements() == other.canonical_statements()
    }
}

/// `is_proper` as a free function mirroring the statement method.
pub fn is_proper(stmt: &Statement, r: usize) -> bool {
    stmt.is_proper(r)
}
