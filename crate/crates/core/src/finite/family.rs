use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{CosetSpace, Word};
use crate::system::{CongruenceSystem, IndexSet, Relation, Statement};

/// Where the family's elements live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Space {
    /// The free group on `m` generators, acting on itself on the left.
    Group { m: usize },
    /// Left cosets of a cyclic subgroup, named by canonical representatives.
    Coset(CosetSpace),
}

impl Space {
    pub fn m(&self) -> usize {
        match self {
            Space::Group { m } => *m,
            Space::Coset(s) => s.m(),
        }
    }

    /// The action of `g` on a point.
    pub fn act(&self, g: &Word, x: &Word) -> Word {
        match self {
            Space::Group { .. } => g * x,
            Space::Coset(s) => s.act(g, x),
        }
    }
}

/// Pairwise disjoint finite sets `A_1..A_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFamily {
    space: Space,
    sets: Vec<BTreeSet<Word>>,
}

impl FiniteFamily {
    pub fn new(space: Space, sets: Vec<Vec<Word>>) -> Result<Self> {
        let m = space.m();
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(sets.len());
        for set in sets {
            let mut s = BTreeSet::new();
            for x in set {
                if x.max_generator() > m {
                    return Err(Error::IndexOutOfRange {
                        index: x.max_generator(),
                        r: m,
                    });
                }
                if let Space::Coset(cs) = &space {
                    if !cs.is_canonical(&x) {
                        return Err(Error::NonCanonicalElement(x.to_string()));
                    }
                }
                if !seen.insert(x.clone()) {
                    return Err(Error::NotDisjoint(x.to_string()));
                }
                s.insert(x);
            }
            out.push(s);
        }
        Ok(FiniteFamily { space, sets: out })
    }

    pub fn group(m: usize, sets: Vec<Vec<Word>>) -> Result<Self> {
        FiniteFamily::new(Space::Group { m }, sets)
    }

    pub fn coset(space: CosetSpace, sets: Vec<Vec<Word>>) -> Result<Self> {
        FiniteFamily::new(Space::Coset(space), sets)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn r(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[BTreeSet<Word>] {
        &self.sets
    }

    /// `A_k`, 1-based.
    pub fn set(&self, k: usize) -> &BTreeSet<Word> {
        &self.sets[k - 1]
    }

    pub fn union_of(&self, indices: IndexSet) -> BTreeSet<Word> {
        indices
            .iter()
            .filter(|&k| k <= self.r())
            .flat_map(|k| self.sets[k - 1].iter().cloned())
            .collect()
    }

    pub fn elements(&self) -> BTreeSet<Word> {
        self.sets.iter().flatten().cloned().collect()
    }

    pub fn is_all_empty(&self) -> bool {
        self.sets.iter().all(BTreeSet::is_empty)
    }

    pub fn all_nonempty(&self) -> bool {
        self.sets.iter().all(|s| !s.is_empty())
    }

    /// Label of `x`: the `k` with `x ∈ A_k`, if any.
    pub fn label(&self, x: &Word) -> Option<usize> {
        self.sets.iter().position(|s| s.contains(x)).map(|k| k + 1)
    }

    pub fn image(&self, g: &Word, xs: &BTreeSet<Word>) -> BTreeSet<Word> {
        xs.iter().map(|x| self.space.act(g, x)).collect()
    }
}

/// The designated witness `g_i` of every statement, in statement order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WitnessAssignment(pub Vec<Word>);

impl WitnessAssignment {
    pub fn new(words: Vec<Word>) -> Self {
        WitnessAssignment(words)
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(Word::max_generator).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatementCheck {
    pub index: usize,
    pub holds: bool,
    /// An element of the image that falls outside the target union, or a
    /// target element that is not hit.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub holds: bool,
    pub statements: Vec<StatementCheck>,
}

fn check_statement(fam: &FiniteFamily, st: &Statement, g: &Word) -> Option<String> {
    let image = fam.image(g, &fam.union_of(st.left));
    let target = fam.union_of(st.right);
    if let Some(x) = image.difference(&target).next() {
        return Some(format!(
            "{g}·(left) contains {x}, which is not in the right side"
        ));
    }
    if st.kind == Relation::Congruence {
        if let Some(y) = target.difference(&image).next() {
            return Some(format!("{y} is in the right side but not in {g}·(left)"));
        }
    }
    None
}

/// Checks `g_i·⋃L_i = ⋃R_i` (or `⊆` for subcongruences) for every statement.
pub fn verify_family(
    fam: &FiniteFamily,
    wit: &WitnessAssignment,
    sys: &CongruenceSystem,
) -> Result<Verification> {
    if fam.r() != sys.r() {
        return Err(Error::ArityMismatch {
            expected: sys.r(),
            found: fam.r(),
        });
    }
    if wit.len() != sys.len() {
        return Err(Error::ArityMismatch {
            expected: sys.len(),
            found: wit.len(),
        });
    }
    if let Space::Coset(cs) = fam.space() {
        if let Some(x) = fam.elements().into_iter().find(|x| !cs.is_canonical(x)) {
            return Err(Error::NonCanonicalElement(x.to_string()));
        }
    }
    let statements: Vec<StatementCheck> = sys
        .statements()
        .iter()
        .zip(wit.words())
        .enumerate()
        .map(|(index, (st, g))| {
            let detail = check_statement(fam, st, g);
            StatementCheck {
                index,
                holds: detail.is_none(),
                detail,
            }
        })
        .collect();
    Ok(Verification {
        holds: statements.iter().all(|s| s.holds),
        statements,
    })
}

/// Right-translates a group-mode family by `h⁻¹`, `h` its length-lex least
/// element, so that the identity is a member.
pub fn normalize_family(fam: &FiniteFamily) -> Result<FiniteFamily> {
    if !matches!(fam.space(), Space::Group { .. }) {
        return Err(Error::InvalidSystem(
            "right translation needs a group-mode family".into(),
        ));
    }
    let h = fam
        .elements()
        .into_iter()
        .next()
        .ok_or(Error::EmptyFamily)?;
    let h_inv = h.inverse();
    let sets = fam
        .sets()
        .iter()
        .map(|s| s.iter().map(|x| x * &h_inv).collect())
        .collect();
    FiniteFamily::new(fam.space().clone(), sets)
}

/// Largest exponent for which [`theoretical_bound`] evaluates `(r+1)^N`.
pub const MAX_BOUND_EXPONENT: u64 = 1 << 24;

/// `N = Σ_{i=0..len} (2m)^i` and `(r+1)^N`, the length below which a minimal
/// solution must live when witnesses have length at most `len`.
pub fn theoretical_bound(m: usize, len: usize, r: usize) -> Result<(BigUint, BigUint)> {
    let base = BigUint::from(2 * m);
    let mut n = BigUint::from(0u8);
    let mut term = BigUint::one();
    for _ in 0..=len {
        n += &term;
        term *= &base;
    }
    let exponent = n
        .to_u64()
        .filter(|&e| e <= MAX_BOUND_EXPONENT)
        .ok_or(Error::LimitExceeded {
            what: "bound exponent N",
            value: n.to_usize().unwrap_or(usize::MAX),
            limit: MAX_BOUND_EXPONENT as usize,
        })?;
    let bound = num_traits::pow(BigUint::from(r + 1), exponent as usize);
    Ok((n, bound))
}

/// For a three-set family with `ρA_1 = A_3` and `σ(A_1 ∪ A_3) = A_1 ∪ A_2`,
/// checks the forced shape `σA_3 = A_1`, `σA_1 = A_2`.
pub fn check_forced_shape(fam: &FiniteFamily, rho: &Word, sigma: &Word) -> Result<bool> {
    let sys = forced_shape_system();
    if fam.r() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            found: fam.r(),
        });
    }
    let wit = WitnessAssignment(vec![rho.clone(), sigma.clone()]);
    let verdict = verify_family(fam, &wit, &sys)?;
    if let Some(bad) = verdict.statements.iter().find(|s| !s.holds) {
        return Err(Error::PreconditionFailed {
            statement: bad.index,
            detail: bad.detail.clone().unwrap_or_default(),
        });
    }
    let single = |k| IndexSet::singleton(k);
    Ok(
        fam.image(sigma, &fam.union_of(single(3))) == fam.union_of(single(1))
            && fam.image(sigma, &fam.union_of(single(1))) == fam.union_of(single(2)),
    )
}

/// `A_1 ≅ A_3`, `A_1 ∪ A_3 ≅ A_1 ∪ A_2`.
pub fn forced_shape_system() -> CongruenceSystem {
    CongruenceSystem::from_congruences(3, &[(&[1], &[3]), (&[1, 3], &[1, 2])])
        .expect("static system")
}
