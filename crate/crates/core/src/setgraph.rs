//! The labelled digraph on nonempty proper subsets of a finite `P ⊆ F_m`
//! obtained by pushing subsets along generators and re-entering at the ends.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::Word;
use crate::graph::{strongly_connected_components, DisjointSets};

/// Default bound on `|P|`; the graph has `2^|P| − 2` vertices.
pub const DEFAULT_SETGRAPH_LIMIT: usize = 12;

/// Default bound on the walk length accepted by [`check_claim3`].
pub const DEFAULT_PATH_BUDGET: usize = 1 << 16;

/// `E(ρ) = {p ∈ P : ρ·p ∉ P}`.
pub fn ends(p: &BTreeSet<Word>, rho: &Word) -> BTreeSet<Word> {
    p.iter()
        .filter(|x| !p.contains(&(rho * *x)))
        .cloned()
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    /// Signed generator.
    pub label: i32,
    pub good: bool,
}

/// Vertices are bitmasks over the ascending listing of `P`.
#[derive(Clone, Debug)]
pub struct SetGraph {
    base: Vec<Word>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl SetGraph {
    pub fn base(&self) -> &[Word] {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        (1usize << self.base.len()).saturating_sub(2)
    }

    /// Nonempty proper subsets, as masks `1..2^|P|−1`.
    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        1..(1u32 << self.base.len()).saturating_sub(1)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn subset(&self, mask: u32) -> BTreeSet<Word> {
        self.base
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, w)| w.clone())
            .collect()
    }

    pub fn mask_of(&self, s: &BTreeSet<Word>) -> Option<u32> {
        s.iter().try_fold(0u32, |acc, w| {
            self.base.binary_search(w).ok().map(|i| acc | (1 << i))
        })
    }

    /// Edges leaving the vertex `mask`.
    pub fn out_edges(&self, mask: u32) -> impl Iterator<Item = &Edge> {
        let slot = (mask as usize).wrapping_sub(1);
        self.out
            .get(slot)
            .into_iter()
            .flatten()
            .map(|&e| &self.edges[e])
    }
}

pub fn build_setgraph(p: &BTreeSet<Word>) -> Result<SetGraph> {
    build_setgraph_with_limit(p, DEFAULT_SETGRAPH_LIMIT)
}

pub fn build_setgraph_with_limit(p: &BTreeSet<Word>, limit: usize) -> Result<SetGraph> {
    let limit = limit.min(20);
    if p.is_empty() || p.len() > limit {
        return Err(Error::LimitExceeded {
            what: "|P|",
            value: p.len(),
            limit,
        });
    }
    let base: Vec<Word> = p.iter().cloned().collect();
    let n = base.len();
    let m = base.iter().map(Word::max_generator).max().unwrap_or(0);
    let position = |w: &Word| base.binary_search(w).ok();
    let mask_of = |s: &BTreeSet<Word>| {
        s.iter()
            .fold(0u32, |acc, w| acc | (1 << position(w).unwrap()))
    };
    let mut edges = Vec::new();
    let vertex_total = (1usize << n) - 2;
    let mut out = vec![Vec::new(); vertex_total];
    for letter in (1..=m as i32).flat_map(|i| [i, -i]) {
        let rho = Word::from_letters([letter]);
        let rho_inv = rho.inverse();
        let end = mask_of(&ends(p, &rho));
        let reentry = mask_of(&ends(p, &rho_inv));
        // Image of each point under ρ, for points not in E(ρ).
        let image: Vec<Option<usize>> = base.iter().map(|x| position(&(&rho * x))).collect();
        for s in 1..(1u32 << n) - 1 {
            let mut target = 0u32;
            for (i, img) in image.iter().enumerate() {
                if s & (1 << i) != 0 && end & (1 << i) == 0 {
                    target |= 1 << img.expect("non-end points map into P");
                }
            }
            if end & !s == 0 {
                target |= reentry;
            }
            if target == 0 {
                continue;
            }
            let good = end & !s == 0 || end & s == 0;
            out[s as usize - 1].push(edges.len());
            edges.push(Edge {
                from: s,
                to: target,
                label: letter,
                good,
            });
        }
    }
    Ok(SetGraph { base, edges, out })
}

/// No bad edge lies inside a strongly connected component.
pub fn check_claim1(g: &SetGraph) -> bool {
    let n = g.vertex_count();
    let (component, _) = strongly_connected_components(n, |v| {
        g.out_edges(v as u32 + 1)
            .map(|e| e.to as usize - 1)
            .collect::<Vec<_>>()
            .into_iter()
    });
    g.edges
        .iter()
        .filter(|e| !e.good)
        .all(|e| component[e.from as usize - 1] != component[e.to as usize - 1])
}

/// The undirected graph whose edges are the opposite pairs of good edges is a
/// forest. Parallel edges and loops count as cycles.
pub fn check_claim2(g: &SetGraph) -> bool {
    let mut forest = DisjointSets::new(g.vertex_count());
    for e in g.edges.iter().filter(|e| e.good && e.label > 0) {
        debug_assert!(
            g.out_edges(e.to)
                .any(|b| b.good && b.label == -e.label && b.to == e.from),
            "good edges come in opposite pairs"
        );
        if !forest.union(e.from - 1, e.to - 1) {
            return false;
        }
    }
    true
}

/// Every walk with `length` edges contains two consecutive edges labelled
/// `ρ`, `ρ⁻¹`; equivalently no non-backtracking walk of that length exists.
pub fn check_claim3(g: &SetGraph, length: usize) -> Result<bool> {
    check_claim3_with_budget(g, length, DEFAULT_PATH_BUDGET)
}

pub fn check_claim3_with_budget(g: &SetGraph, length: usize, budget: usize) -> Result<bool> {
    if length > budget {
        return Err(Error::BudgetExceeded { length, budget });
    }
    if length == 0 {
        return Ok(true);
    }
    // alive[(v, label slot)]: some non-backtracking walk of the current length
    // ends at v with that last label.
    let n = g.vertex_count();
    let m = g.base.iter().map(Word::max_generator).max().unwrap_or(0);
    let slots = 2 * m;
    let slot = |l: i32| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
    let mut alive = vec![false; n * slots.max(1)];
    for e in &g.edges {
        alive[(e.to as usize - 1) * slots + slot(e.label)] = true;
    }
    for _ in 1..length {
        let mut next = vec![false; alive.len()];
        let mut any = false;
        for v in 0..n {
            for s in 0..slots {
                if !alive[v * slots + s] {
                    continue;
                }
                let last = if s % 2 == 0 {
                    (s / 2 + 1) as i32
                } else {
                    -((s / 2 + 1) as i32)
                };
                for e in g.out_edges(v as u32 + 1) {
                    if e.label != -last {
                        next[(e.to as usize - 1) * slots + slot(e.label)] = true;
                        any = true;
                    }
                }
            }
        }
        if !any {
            return Ok(true);
        }
        alive = next;
    }
    Ok(!alive.iter().any(|&a| a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(words: &[&[i32]]) -> BTreeSet<Word> {
        words
            .iter()
            .map(|l| Word::from_letters(l.iter().copied()))
            .collect()
    }

    fn w(l: &[i32]) -> Word {
        Word::from_letters(l.iter().copied())
    }

    #[test]
    fn end_sets() {
        let p = set(&[&[], &[1]]);
        assert_eq!(ends(&p, &w(&[1])), set(&[&[1]]));
        assert_eq!(ends(&p, &w(&[-1])), set(&[&[]]));
        let single = set(&[&[2, 1]]);
        assert_eq!(ends(&single, &w(&[-2])), single);
    }

    #[test]
    fn vertex_counts_and_edges() {
        let star = set(&[&[], &[1], &[2]]);
        let g = build_setgraph(&star).unwrap();
        assert_eq!(g.vertex_count(), 6);

        let pair = set(&[&[], &[1]]);
        let g = build_setgraph(&pair).unwrap();
        let from = g.mask_of(&set(&[&[]])).unwrap();
        let e = g.out_edges(from).find(|e| e.label == 1).unwrap();
        assert_eq!(g.subset(e.to), set(&[&[1]]));
        assert!(e.good);

        let line = set(&[&[1], &[1, 1], &[1, 1, 1]]);
        let g = build_setgraph(&line).unwrap();
        let from = g.mask_of(&set(&[&[1, 1, 1]])).unwrap();
        let e = g.out_edges(from).find(|e| e.label == 1).unwrap();
        assert_eq!(g.subset(e.to), set(&[&[1]]));
        assert!(e.good);
    }

    #[test]
    fn claims_on_examples() {
        let star = build_setgraph(&set(&[&[], &[1], &[2]])).unwrap();
        assert!(check_claim1(&star));
        assert!(check_claim2(&star));
        assert!(check_claim3(&star, 8).unwrap());
        assert!(check_claim3(&star, 0).unwrap());

        let line = build_setgraph(&set(&[&[1], &[1, 1], &[1, 1, 1]])).unwrap();
        assert!(check_claim1(&line));
        assert!(!check_claim2(&line));
        assert!(!check_claim3(&line, 8).unwrap());

        let single = build_setgraph(&set(&[&[1, 2]])).unwrap();
        assert_eq!(single.vertex_count(), 0);
        assert!(check_claim1(&single) && check_claim2(&single));
    }

    #[test]
    fn limits() {
        let big: BTreeSet<Word> = (0..13).map(|k| Word::generator(1).pow(k)).collect();
        assert!(matches!(
            build_setgraph(&big),
            Err(Error::LimitExceeded { .. })
        ));
        let star = build_setgraph(&set(&[&[], &[1], &[2]])).unwrap();
        assert_eq!(
            check_claim3_with_budget(&star, 10, 8),
            Err(Error::BudgetExceeded {
                length: 10,
                budget: 8
            })
        );
    }

    #[test]
    fn good_edges_preserve_size() {
        let p = set(&[&[], &[1], &[2], &[1, 1], &[-2, 1]]);
        let g = build_setgraph(&p).unwrap();
        for e in g.edges() {
            let (a, b) = (e.from.count_ones(), e.to.count_ones());
            if e.good {
                assert_eq!(a, b);
            } else {
                assert!(a > b);
            }
        }
    }
}
