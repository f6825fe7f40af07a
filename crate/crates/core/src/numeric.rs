//! Numerical consistency, reductions between systems, and the `UNC_s` / `CP_r`
//! families.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Sense};
use crate::scalar::Scalar;
use crate::system::{CongruenceSystem, IndexSet, Mode, Statement};
use crate::Rational;

/// Positive weights `μ_1..μ_r` summing to 1 that satisfy the system's
/// measure equations.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericWitness<T = Rational> {
    pub mu: Vec<T>,
    /// Set when subcongruences were imposed as `Σ_L μ ≤ Σ_R μ`.
    pub extended: bool,
}

fn measure_row<T: Scalar>(r: usize, vars: usize, st: &Statement) -> Vec<T> {
    let mut row = vec![T::zero(); vars];
    for k in st.left.iter() {
        row[k - 1] = row[k - 1].clone() + T::one();
    }
    for k in st.right.iter() {
        row[k - 1] = row[k - 1].clone() - T::one();
    }
    debug_assert!(r <= vars);
    row
}

fn add_measure_constraints<T: Scalar>(lp: &mut LinearProgram<T>, sys: &CongruenceSystem) {
    let (r, vars) = (sys.r(), lp.vars());
    for st in sys.statements() {
        let sense = if st.is_congruence() {
            Sense::Eq
        } else {
            Sense::Le
        };
        lp.constrain(measure_row(r, vars, st), sense, T::zero());
    }
    let mut total = vec![T::one(); r];
    total.resize(vars, T::zero());
    lp.constrain(total, Sense::Eq, T::one());
}

/// Exact numerical consistency over [`Rational`].
pub fn numeric_consistency(sys: &CongruenceSystem) -> Option<NumericWitness> {
    numeric_consistency_in::<Rational>(sys)
}

/// Maximizes `δ` subject to the measure equations, `μ_k ≥ δ` and `Σμ = 1`.
pub fn numeric_consistency_in<T: Scalar>(sys: &CongruenceSystem) -> Option<NumericWitness<T>> {
    let r = sys.r();
    let delta = r;
    let mut lp = LinearProgram::<T>::new(r + 1);
    let mut objective = vec![T::zero(); r + 1];
    objective[delta] = T::one();
    lp.maximize(objective);
    add_measure_constraints(&mut lp, sys);
    for k in 0..r {
        let mut row = vec![T::zero(); r + 1];
        row[k] = T::one();
        row[delta] = -T::one();
        lp.constrain(row, Sense::Ge, T::zero());
    }
    match lp.solve() {
        LpOutcome::Optimal { mut x, value } if value.is_above_tolerance() => {
            x.truncate(r);
            Some(NumericWitness {
                mu: x,
                extended: sys.has_subcongruences(),
            })
        }
        _ => None,
    }
}

/// Whether some probability vector (zeros allowed) satisfies the measure
/// equations. Every finite family that satisfies the system with counting
/// measure yields one, so `false` here rules out all finite models.
pub fn has_probability_solution(sys: &CongruenceSystem) -> bool {
    let mut lp = LinearProgram::<Rational>::new(sys.r());
    add_measure_constraints(&mut lp, sys);
    matches!(lp.solve(), LpOutcome::Optimal { .. })
}

/// Scales positive rationals to coprime positive integers.
pub fn integerize(mu: &[Rational]) -> Vec<BigUint> {
    let lcm = mu.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<BigInt> = mu.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    scaled
        .into_iter()
        .map(|v| {
            let v = if gcd.is_zero() { v } else { v / &gcd };
            v.abs().to_biguint().expect("absolute value is nonnegative")
        })
        .collect()
}

/// A map `π: {1..s} → {1..r}`, stored as `pi[j-1] = π(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub s: usize,
    pub pi: Vec<usize>,
}

impl ReductionMap {
    pub fn identity(s: usize) -> Self {
        ReductionMap {
            s,
            pi: (1..=s).collect(),
        }
    }

    /// `{j : π(j) ∈ set}`, ascending.
    pub fn preimage(&self, set: IndexSet) -> Vec<usize> {
        (1..=self.s)
            .filter(|&j| set.contains(self.pi[j - 1]))
            .collect()
    }

    pub fn is_onto(&self, r: usize) -> bool {
        let mut hit = vec![false; r];
        for &k in &self.pi {
            if (1..=r).contains(&k) {
                hit[k - 1] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Preimage sizes: `|π⁻¹(k)|` for `k = 1..r`.
    pub fn fiber_sizes(&self, r: usize) -> Vec<usize> {
        let mut sizes = vec![0; r];
        for &k in &self.pi {
            if (1..=r).contains(&k) {
                sizes[k - 1] += 1;
            }
        }
        sizes
    }
}

/// Something that can answer "is `left ≅ right` one of your statements?" for
/// index lists over `{1..arity}`.
pub trait CongruenceTarget {
    fn arity(&self) -> usize;
    /// Orientation-insensitive. Both slices are ascending and 1-based.
    fn has_congruence(&self, left: &[usize], right: &[usize]) -> bool;
}

impl CongruenceTarget for CongruenceSystem {
    fn arity(&self) -> usize {
        self.r()
    }

    fn has_congruence(&self, left: &[usize], right: &[usize]) -> bool {
        let in_range = |v: &[usize]| v.iter().all(|&k| (1..=self.r()).contains(&k));
        if !in_range(left) || !in_range(right) {
            return false;
        }
        self.contains_congruence(
            IndexSet::from_indices(left.iter().copied()),
            IndexSet::from_indices(right.iter().copied()),
        )
    }
}

/// `UNC_s` answered by rule, without materializing its statements:
/// `L ≅ R` is present iff `L ≠ R`, `|L| = |R|`, and both are proper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImplicitUnc {
    pub s: usize,
}

impl CongruenceTarget for ImplicitUnc {
    fn arity(&self) -> usize {
        self.s
    }

    fn has_congruence(&self, left: &[usize], right: &[usize]) -> bool {
        let proper = |v: &[usize]| !v.is_empty() && v.len() < self.s;
        left.len() == right.len() && left != right && proper(left) && proper(right)
    }
}

/// True iff every congruence of `source` pulls back along `map` to a
/// statement of `target`.
pub fn check_reduction(
    source: &CongruenceSystem,
    target: &impl CongruenceTarget,
    map: &ReductionMap,
) -> Result<bool> {
    if map.s != target.arity() {
        return Err(Error::ArityMismatch {
            expected: target.arity(),
            found: map.s,
        });
    }
    if map.pi.len() != map.s {
        return Err(Error::ArityMismatch {
            expected: map.s,
            found: map.pi.len(),
        });
    }
    if let Some(&bad) = map.pi.iter().find(|&&k| !(1..=source.r()).contains(&k)) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            r: source.r(),
        });
    }
    Ok(source
        .congruences()
        .all(|st| target.has_congruence(&map.preimage(st.left), &map.preimage(st.right))))
}

/// Largest `s` that [`reduce_to_unc`] will build a map for.
pub const MAX_REDUCTION_SIZE: usize = 1 << 20;

/// Reduces a numerically consistent system to `UNC_s`, `s = Σμ_k` over the
/// integerized witness, sending the `k`-th block of `μ_k` consecutive points
/// to `k`.
pub fn reduce_to_unc(sys: &CongruenceSystem) -> Result<(ReductionMap, usize)> {
    let witness = numeric_consistency(sys).ok_or(Error::NotNumericallyConsistent)?;
    let weights = integerize(&witness.mu);
    let mut pi = Vec::new();
    for (k, w) in weights.iter().enumerate() {
        let w = w
            .to_usize()
            .filter(|&w| w <= MAX_REDUCTION_SIZE && pi.len() + w <= MAX_REDUCTION_SIZE)
            .ok_or(Error::LimitExceeded {
                what: "reduction size",
                value: usize::MAX,
                limit: MAX_REDUCTION_SIZE,
            })?;
        pi.extend(std::iter::repeat_n(k + 1, w));
    }
    let s = pi.len();
    Ok((ReductionMap { s, pi }, s))
}

/// Cap on materialized statement lists.
pub const MAX_GENERATED_STATEMENTS: usize = 1 << 21;

/// `k`-subsets of `{1..n}` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (1..=k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(IndexSet::from_indices(idx.iter().copied()));
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i + 1) else {
            return out;
        };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

fn pairs_of_equal_size(
    n: usize,
    sizes: impl Iterator<Item = usize> + Clone,
) -> Result<CongruenceSystem> {
    if n > crate::closure::DEFAULT_CLOSURE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "r",
            value: n,
            limit: crate::closure::DEFAULT_CLOSURE_LIMIT,
        });
    }
    let count: BigUint = sizes
        .clone()
        .map(|k| {
            let c = binomial(n, k);
            if c < BigUint::from(2u8) {
                BigUint::zero()
            } else {
                &c * (&c - 1u8) / 2u8
            }
        })
        .sum();
    if count > BigUint::from(MAX_GENERATED_STATEMENTS) {
        return Err(Error::LimitExceeded {
            what: "statement count",
            value: count.to_usize().unwrap_or(usize::MAX),
            limit: MAX_GENERATED_STATEMENTS,
        });
    }
    let mut statements = Vec::new();
    for k in sizes {
        let subsets = combinations(n, k);
        for (i, &l) in subsets.iter().enumerate() {
            for &r in &subsets[i + 1..] {
                statements.push(Statement::congruence(l, r));
            }
        }
    }
    CongruenceSystem::new(n, statements, Mode::Partition)
}

/// Every proper congruence between unions of equally many of `s` sets.
pub fn make_unc(s: usize) -> Result<CongruenceSystem> {
    if s == 0 {
        return Err(Error::InvalidSystem("s must be at least 1".into()));
    }
    pairs_of_equal_size(s, 1..s)
}

/// Every congruence between unions of two of the `r` sets.
pub fn make_cp(r: usize) -> Result<CongruenceSystem> {
    if r == 0 {
        return Err(Error::InvalidSystem("r must be at least 1".into()));
    }
    pairs_of_equal_size(r, 2..3)
}
