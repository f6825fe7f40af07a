//! Deduction closures over the subset lattice `2^{1..r}`.
//!
//! Congruence deduction is an equivalence closure (union-find over all `2^r`
//! index sets, optionally closed under complementation). Subcongruence
//! deduction is a preorder: reachability in a digraph whose edges are the
//! covering inclusions `L -> L ∪ {k}`, both directions of each congruence, the
//! stated direction of each subcongruence, and optionally the complement image
//! `Rᶜ -> Lᶜ` of every non-inclusion edge.

use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, DisjointSets};
use crate::system::{CongruenceSystem, IndexSet, Mode};

/// Default bound on `r` for anything that enumerates `2^r` subsets.
pub const DEFAULT_CLOSURE_LIMIT: usize = 20;

/// Largest `r` for which the preorder keeps a dense reachability table.
const DENSE_REACH_LIMIT: usize = 12;

fn check_limit(r: usize, limit: usize) -> Result<()> {
    if r > limit {
        Err(Error::LimitExceeded {
            what: "r",
            value: r,
            limit,
        })
    } else {
        Ok(())
    }
}

/// The partition of `2^{1..r}` produced by congruence deduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClasses {
    r: usize,
    /// Each subset's class label: the numerically smallest member of its class.
    label: Vec<u32>,
}

impl CongruenceClasses {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn same_class(&self, a: IndexSet, b: IndexSet) -> bool {
        self.label[a.as_usize()] == self.label[b.as_usize()]
    }

    /// Smallest member of the class containing `s`.
    pub fn representative(&self, s: IndexSet) -> IndexSet {
        IndexSet::from_bits(self.label[s.as_usize()] as u64)
    }

    /// Classes in order of their smallest member, members ascending.
    pub fn classes(&self) -> Vec<Vec<IndexSet>> {
        let mut out: Vec<Vec<IndexSet>> = Vec::new();
        let mut slot = vec![usize::MAX; self.label.len()];
        for (s, &lab) in self.label.iter().enumerate() {
            let lab = lab as usize;
            if slot[lab] == usize::MAX {
                slot[lab] = out.len();
                out.push(Vec::new());
            }
            out[slot[lab]].push(IndexSet::from_bits(s as u64));
        }
        out
    }

    pub fn class_count(&self) -> usize {
        self.label
            .iter()
            .enumerate()
            .filter(|(s, &lab)| *s == lab as usize)
            .count()
    }
}

pub fn congruence_closure(
    sys: &CongruenceSystem,
    use_complementation: bool,
) -> Result<CongruenceClasses> {
    congruence_closure_with_limit(sys, use_complementation, DEFAULT_CLOSURE_LIMIT)
}

pub fn congruence_closure_with_limit(
    sys: &CongruenceSystem,
    use_complementation: bool,
    limit: usize,
) -> Result<CongruenceClasses> {
    let r = sys.r();
    check_limit(r, limit.min(31))?;
    let n = 1usize << r;
    let mut dsu = DisjointSets::new(n);
    for st in sys.congruences() {
        dsu.union(st.left.as_usize() as u32, st.right.as_usize() as u32);
        if use_complementation {
            dsu.union(
                st.left.complement(r).as_usize() as u32,
                st.right.complement(r).as_usize() as u32,
            );
        }
    }
    let mut smallest = vec![u32::MAX; n];
    let mut root_of = vec![0u32; n];
    for s in 0..n as u32 {
        let root = dsu.find(s);
        root_of[s as usize] = root;
        smallest[root as usize] = smallest[root as usize].min(s);
    }
    let label = root_of
        .iter()
        .map(|&root| smallest[root as usize])
        .collect();
    Ok(CongruenceClasses { r, label })
}

/// True iff no self-complementary congruence `L ≅ Lᶜ` is deducible with the
/// equivalence rules plus complementation (complementation is always on here).
pub fn is_weak(sys: &CongruenceSystem) -> Result<bool> {
    let classes = congruence_closure(sys, true)?;
    let r = sys.r();
    Ok((0..1u64 << r)
        .map(IndexSet::from_bits)
        .all(|s| !classes.same_class(s, s.complement(r))))
}

/// The deducible-subcongruence preorder on `2^{1..r}`.
#[derive(Clone, Debug)]
pub struct SubcongruencePreorder {
    r: usize,
    /// Explicit (non-covering) edges per node.
    extra: Vec<Vec<u32>>,
    /// Strongly connected component of every node.
    component: Vec<u32>,
    /// Per component, the set of reachable components (dense mode only).
    reach: Option<Vec<Vec<u64>>>,
}

impl SubcongruencePreorder {
    pub fn r(&self) -> usize {
        self.r
    }

    fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        let r = self.r;
        let covering = (0..r)
            .filter(move |b| node & (1 << b) == 0)
            .map(move |b| node | (1 << b));
        covering.chain(self.extra[node].iter().map(|&t| t as usize))
    }

    /// Strongly connected component id of `s`.
    pub fn component(&self, s: IndexSet) -> u32 {
        self.component[s.as_usize()]
    }

    pub fn same_component(&self, a: IndexSet, b: IndexSet) -> bool {
        self.component(a) == self.component(b)
    }

    pub fn component_count(&self) -> usize {
        self.component
            .iter()
            .map(|&c| c as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Is `⋃from ⪯ ⋃to` deducible?
    pub fn deducible(&self, from: IndexSet, to: IndexSet) -> bool {
        let (cf, ct) = (self.component(from) as usize, self.component(to) as usize);
        if cf == ct {
            return true;
        }
        if let Some(reach) = &self.reach {
            return reach[cf][ct / 64] & (1u64 << (ct % 64)) != 0;
        }
        let n = 1usize << self.r;
        let mut seen = vec![false; n];
        let mut stack = vec![from.as_usize()];
        seen[from.as_usize()] = true;
        while let Some(v) = stack.pop() {
            if v == to.as_usize() {
                return true;
            }
            for w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// All sets `R` with `⋃from ⪯ ⋃R` deducible.
    pub fn reachable_from(&self, from: IndexSet) -> Vec<IndexSet> {
        (0..1u64 << self.r)
            .map(IndexSet::from_bits)
            .filter(|&t| self.deducible(from, t))
            .collect()
    }
}

pub fn subcongruence_closure(
    sys: &CongruenceSystem,
    use_complementation: bool,
) -> Result<SubcongruencePreorder> {
    subcongruence_closure_with_limit(sys, use_complementation, DEFAULT_CLOSURE_LIMIT)
}

pub fn subcongruence_closure_with_limit(
    sys: &CongruenceSystem,
    use_complementation: bool,
    limit: usize,
) -> Result<SubcongruencePreorder> {
    let r = sys.r();
    check_limit(r, limit.min(31))?;
    let n = 1usize << r;
    let mut extra: Vec<Vec<u32>> = vec![Vec::new(); n];
    let add = |a: IndexSet, b: IndexSet, extra: &mut Vec<Vec<u32>>| {
        let list = &mut extra[a.as_usize()];
        let b = b.as_usize() as u32;
        if !list.contains(&b) {
            list.push(b);
        }
    };
    for st in sys.statements() {
        let mut edges = vec![(st.left, st.right)];
        if st.is_congruence() {
            edges.push((st.right, st.left));
        }
        for (a, b) in edges {
            add(a, b, &mut extra);
            if use_complementation {
                add(b.complement(r), a.complement(r), &mut extra);
            }
        }
    }
    let mut pre = SubcongruencePreorder {
        r,
        extra,
        component: Vec::new(),
        reach: None,
    };
    let (component, order) = strongly_connected_components(n, |v| pre.successors(v));
    pre.component = component;
    if r <= DENSE_REACH_LIMIT {
        pre.reach = Some(dense_reach(&pre, &order));
    }
    Ok(pre)
}

fn dense_reach(pre: &SubcongruencePreorder, order: &[Vec<u32>]) -> Vec<Vec<u64>> {
    let comps = order.len();
    let words = comps.div_ceil(64);
    let mut reach = vec![vec![0u64; words]; comps];
    // Emission order is reverse topological, so successors are complete first.
    for (c, members) in order.iter().enumerate() {
        let mut row = vec![0u64; words];
        row[c / 64] |= 1u64 << (c % 64);
        for &v in members {
            for w in pre.successors(v as usize) {
                let d = pre.component[w] as usize;
                if d != c {
                    for (x, y) in row.iter_mut().zip(&reach[d]) {
                        *x |= *y;
                    }
                }
            }
        }
        reach[c] = row;
    }
    reach
}

/// True iff no `L ⪯ R` with `R ⊊ L` is deducible. Complementation is used iff
/// the system is in partition mode.
pub fn is_consistent(sys: &CongruenceSystem) -> Result<bool> {
    is_consistent_with(sys, sys.mode() == Mode::Partition)
}

/// Consistency with the complementation rule explicitly on or off.
pub fn is_consistent_with(sys: &CongruenceSystem, use_complementation: bool) -> Result<bool> {
    let pre = subcongruence_closure(sys, use_complementation)?;
    Ok(first_strict_violation(&pre).is_none())
}

/// A deducible `L ⪯ L∖{k}`, if one exists. Any strict violation `L ⪯ R`,
/// `R ⊊ L`, yields one of this covering form, so scanning covers suffices.
pub fn first_strict_violation(pre: &SubcongruencePreorder) -> Option<(IndexSet, IndexSet)> {
    let r = pre.r();
    for bits in 1..1u64 << r {
        let l = IndexSet::from_bits(bits);
        for k in l.iter() {
            let smaller = l.without(k);
            if pre.same_component(l, smaller) {
                return Some((l, smaller));
            }
        }
    }
    None
}
