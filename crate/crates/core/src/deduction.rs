//! Label-reachability sets over a free group acting on `F × ℕ`, the
//! congruences they force, and a check that everything so witnessed is
//! deducible from the system.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closure::{
    congruence_closure, subcongruence_closure, CongruenceClasses, SubcongruencePreorder,
};
use crate::error::{Error, Result};
use crate::freegroup::{ball, Word};
use crate::system::{CongruenceSystem, IndexSet, Mode, Relation, Statement};

/// Largest label count the lab handles (`r` or `r + 1`).
pub const MAX_LABELS: usize = 16;

/// `P_j(g)` for every label `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachSet {
    pub g: Word,
    /// Entry `j - 1` is `P_j(g)`.
    pub sets: Vec<IndexSet>,
}

impl ReachSet {
    pub fn get(&self, j: usize) -> IndexSet {
        self.sets[j - 1]
    }
}

/// A witnessed statement that the closure rules fail to deduce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub g: Word,
    pub kind: Relation,
    pub left: IndexSet,
    pub right: IndexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub holds: bool,
    pub elements_checked: usize,
    pub congruences_witnessed: usize,
    pub subcongruences_witnessed: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub points: usize,
    /// Every statement holds for its generator on the sampled region.
    pub designated_witnessed: bool,
    /// Observed labels at `g` given label `j` at `e` lie in `P_j(g)`.
    pub labels_within_reach: bool,
    pub violations: Vec<String>,
}

/// The reachability machinery for one system in one mode. Statement `i` is
/// tied to generator `f_i`; missing statements are padded with `A_1 ≅ A_1`.
#[derive(Clone, Debug)]
pub struct DeductionLab {
    sys: CongruenceSystem,
    mode: Mode,
    m: usize,
    /// Number of labels: `r` in partition mode, `r + 1` in family mode.
    labels: usize,
    rules: Vec<Statement>,
}

impl DeductionLab {
    /// Uses `max(2, #statements)` generators.
    pub fn new(sys: &CongruenceSystem, mode: Mode) -> Result<Self> {
        DeductionLab::with_generators(sys, mode, sys.len().max(2))
    }

    pub fn with_generators(sys: &CongruenceSystem, mode: Mode, m: usize) -> Result<Self> {
        DeductionLab::build(sys, mode, m, true)
    }

    /// Skips the properness check. Completeness is not expected to hold;
    /// this exists for experiments with weakened hypotheses.
    pub fn allowing_improper(sys: &CongruenceSystem, mode: Mode) -> Result<Self> {
        DeductionLab::build(sys, mode, sys.len().max(2), false)
    }

    fn build(sys: &CongruenceSystem, mode: Mode, m: usize, require_proper: bool) -> Result<Self> {
        if sys.len() > m {
            return Err(Error::TooManyStatements {
                statements: sys.len(),
                generators: m,
            });
        }
        for (index, st) in sys.statements().iter().enumerate() {
            if require_proper && !st.is_proper(sys.r()) {
                let reason = if st.left.is_empty() || st.right.is_empty() {
                    "a side is empty"
                } else {
                    "a side is the union of all sets"
                };
                return Err(Error::ImproperStatement {
                    index,
                    reason: reason.into(),
                });
            }
        }
        let labels = match mode {
            Mode::Partition => sys.r(),
            Mode::Family => sys.r() + 1,
        };
        if labels > MAX_LABELS {
            return Err(Error::LimitExceeded {
                what: "label count",
                value: labels,
                limit: MAX_LABELS,
            });
        }
        let pad = Statement::congruence(IndexSet::singleton(1), IndexSet::singleton(1));
        let mut rules = sys.statements().to_vec();
        rules.resize(m, pad);
        Ok(DeductionLab {
            sys: sys.clone(),
            mode,
            m,
            labels,
            rules,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    fn all(&self) -> IndexSet {
        IndexSet::full(self.labels)
    }

    /// One step of the recursion: `P_j(ρ∘g')` from `P_j(g')`.
    fn step(&self, letter: i32, prev: IndexSet) -> IndexSet {
        let rule = &self.rules[letter.unsigned_abs() as usize - 1];
        let all = self.all();
        match (rule.kind, letter > 0) {
            (Relation::Congruence, forward) => {
                let (from, to) = if forward {
                    (rule.left, rule.right)
                } else {
                    (rule.right, rule.left)
                };
                if prev.is_subset(from) {
                    to
                } else if prev.is_disjoint(from) {
                    all.difference(to)
                } else {
                    all
                }
            }
            (Relation::Subcongruence, true) => {
                if prev.is_subset(rule.left) {
                    rule.right
                } else {
                    all
                }
            }
            (Relation::Subcongruence, false) => {
                if prev.is_disjoint(rule.right) {
                    all.difference(rule.left)
                } else {
                    all
                }
            }
        }
    }

    fn check_word(&self, g: &Word) -> Result<()> {
        if g.max_generator() > self.m {
            return Err(Error::IndexOutOfRange {
                index: g.max_generator(),
                r: self.m,
            });
        }
        Ok(())
    }

    /// `P_j(g)` for all `j`, folding the letters of `g` from the right.
    pub fn reach(&self, g: &Word) -> Result<ReachSet> {
        self.check_word(g)?;
        let sets = (1..=self.labels)
            .map(|j| {
                g.letters()
                    .iter()
                    .rev()
                    .fold(IndexSet::singleton(j), |p, &l| self.step(l, p))
            })
            .collect();
        Ok(ReachSet { g: g.clone(), sets })
    }

    /// Reach sets for the whole ball of the given radius, built bottom-up.
    pub fn reach_table(&self, depth: usize) -> Vec<ReachSet> {
        let words = ball(self.m, depth);
        let mut index: HashMap<Word, usize> = HashMap::with_capacity(words.len());
        let mut out: Vec<ReachSet> = Vec::with_capacity(words.len());
        for g in words {
            let sets = match g.letters().split_first() {
                None => (1..=self.labels).map(IndexSet::singleton).collect(),
                Some((&first, rest)) => {
                    let parent = &out[index[&Word::from_letters(rest.iter().copied())]];
                    parent.sets.iter().map(|&p| self.step(first, p)).collect()
                }
            };
            index.insert(g.clone(), out.len());
            out.push(ReachSet { g, sets });
        }
        out
    }

    fn sides(&self) -> IndexSet {
        IndexSet::full(self.sys.r())
    }

    /// Pairs `(L, R)` over `{1..r}` with `P_j ⊆ R` for `j ∈ L` and
    /// `P_j ∩ R = ∅` for every other label.
    pub fn witnessed_congruences(&self, reach: &ReachSet) -> Vec<(IndexSet, IndexSet)> {
        let sides = self.sides();
        let mut out = Vec::new();
        for l in subsets(sides) {
            let (mut inside, mut outside) = (IndexSet::EMPTY, IndexSet::EMPTY);
            for j in 1..=self.labels {
                if l.contains(j) {
                    inside = inside.union(reach.get(j));
                } else {
                    outside = outside.union(reach.get(j));
                }
            }
            if !inside.is_subset(sides) || !inside.is_disjoint(outside) {
                continue;
            }
            let free = sides.difference(inside).difference(outside);
            out.extend(subsets(free).map(|extra| (l, inside.union(extra))));
        }
        out
    }

    /// Pairs `(L, R)` over `{1..r}` with `P_j ⊆ R` for every `j ∈ L`.
    pub fn witnessed_subcongruences(&self, reach: &ReachSet) -> Vec<(IndexSet, IndexSet)> {
        let sides = self.sides();
        let mut out = Vec::new();
        for l in subsets(sides) {
            let inside = l
                .iter()
                .fold(IndexSet::EMPTY, |acc, j| acc.union(reach.get(j)));
            if !inside.is_subset(sides) {
                continue;
            }
            let free = sides.difference(inside);
            out.extend(subsets(free).map(|extra| (l, inside.union(extra))));
        }
        out
    }

    fn closures(&self) -> Result<(CongruenceClasses, SubcongruencePreorder)> {
        let complement = self.mode == Mode::Partition;
        let congruences = CongruenceSystem::new(
            self.sys.r(),
            self.sys.congruences().copied().collect(),
            self.mode,
        )?;
        Ok((
            congruence_closure(&congruences, complement)?,
            subcongruence_closure(&self.sys, complement)?,
        ))
    }

    /// Everything witnessed by an element of length at most `depth` is
    /// deducible: congruences from the congruence statements alone,
    /// subcongruences from all statements; complementation only in
    /// partition mode.
    pub fn completeness_check(&self, depth: usize) -> Result<CompletenessReport> {
        let (classes, preorder) = self.closures()?;
        let table = self.reach_table(depth);
        let mut report = CompletenessReport {
            holds: true,
            elements_checked: table.len(),
            congruences_witnessed: 0,
            subcongruences_witnessed: 0,
            counterexample: None,
        };
        for reach in &table {
            for (l, r) in self.witnessed_congruences(reach) {
                report.congruences_witnessed += 1;
                if !classes.same_class(l, r) && report.counterexample.is_none() {
                    report.counterexample = Some(Counterexample {
                        g: reach.g.clone(),
                        kind: Relation::Congruence,
                        left: l,
                        right: r,
                    });
                }
            }
            for (l, r) in self.witnessed_subcongruences(reach) {
                report.subcongruences_witnessed += 1;
                if !preorder.deducible(l, r) && report.counterexample.is_none() {
                    report.counterexample = Some(Counterexample {
                        g: reach.g.clone(),
                        kind: Relation::Subcongruence,
                        left: l,
                        right: r,
                    });
                }
            }
        }
        report.holds = report.counterexample.is_none();
        Ok(report)
    }

    /// Whether `f_i` witnesses statement `i` under the reachability criterion.
    pub fn designated_witnessing(&self) -> Result<Vec<bool>> {
        self.sys
            .statements()
            .iter()
            .enumerate()
            .map(|(i, st)| {
                let reach = self.reach(&Word::generator(i + 1))?;
                let pair = (st.left, st.right);
                Ok(match st.kind {
                    Relation::Congruence => self.witnessed_congruences(&reach).contains(&pair),
                    Relation::Subcongruence => {
                        self.witnessed_subcongruences(&reach).contains(&pair)
                    }
                })
            })
            .collect()
    }

    /// For `g ≠ e`: some nonempty proper `L(g)`, `R(g)` of the label set make
    /// `P_j(g)` equal to one fixed member of `{R(g), all}` for `j ∈ L(g)` and
    /// one fixed member of `{R(g)ᶜ, all}` for the other labels.
    pub fn structure_lemma_holds(&self, reach: &ReachSet) -> bool {
        if reach.g.is_identity() {
            return true;
        }
        let all = self.all();
        let proper = |r: IndexSet| !r.is_empty() && r != all;
        let mut values: Vec<IndexSet> = reach.sets.clone();
        values.sort();
        values.dedup();
        match values[..] {
            // Any split of the labels works when every P_j is everything.
            [v] => v == all && self.labels >= 2,
            [a, b] => [(a, b), (b, a)].into_iter().any(|(on, off)| {
                let r = if on == all { all.difference(off) } else { on };
                proper(r) && (on == r || on == all) && (off == all.difference(r) || off == all)
            }),
            _ => false,
        }
    }

    /// Labels `(g, n)` for `|g| ≤ depth`, `n < fibers` with the randomized
    /// recursive rule and compares the outcome with the reach sets.
    pub fn sample_model(&self, depth: usize, fibers: usize, seed: u64) -> SampleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = self.reach_table(depth);
        let index: HashMap<&Word, usize> =
            table.iter().enumerate().map(|(i, r)| (&r.g, i)).collect();
        let n = self.labels;
        let all = self.all();
        let choose = |set: IndexSet, rng: &mut ChaCha8Rng| -> Option<u8> {
            if set.is_empty() {
                return None;
            }
            let pick = rng.gen_range(0..set.len());
            set.iter().nth(pick).map(|k| k as u8)
        };
        // labels[point][fiber]
        let mut labels: Vec<Vec<u8>> = Vec::with_capacity(table.len());
        for reach in &table {
            let row = match reach.g.letters().split_first() {
                None => (0..fibers).map(|_| rng.gen_range(1..=n) as u8).collect(),
                Some((&first, rest)) => {
                    let parent = index[&Word::from_letters(rest.iter().copied())];
                    let rule = self.rules[first.unsigned_abs() as usize - 1];
                    let mut row = Vec::with_capacity(fibers);
                    for f in 0..fibers {
                        let prev = labels[parent][f] as usize;
                        let options = match (rule.kind, first > 0) {
                            (Relation::Congruence, forward) => {
                                let (from, to) = if forward {
                                    (rule.left, rule.right)
                                } else {
                                    (rule.right, rule.left)
                                };
                                if from.contains(prev) {
                                    to
                                } else {
                                    all.difference(to)
                                }
                            }
                            (Relation::Subcongruence, true) => {
                                if rule.left.contains(prev) {
                                    rule.right
                                } else {
                                    all
                                }
                            }
                            (Relation::Subcongruence, false) => {
                                if rule.right.contains(prev) {
                                    all
                                } else {
                                    all.difference(rule.left)
                                }
                            }
                        };
                        match choose(options, &mut rng) {
                            Some(k) => row.push(k),
                            None => {
                                return SampleReport {
                                    points: labels.len() * fibers + f,
                                    designated_witnessed: false,
                                    labels_within_reach: false,
                                    violations: vec![format!(
                                        "label {prev} at ({}, {f}) has no admissible successor under {}",
                                        Word::from_letters(rest.iter().copied()),
                                        Word::from_letters([first])
                                    )],
                                };
                            }
                        }
                    }
                    row
                }
            };
            labels.push(row);
        }

        let mut violations = Vec::new();
        let mut designated_witnessed = true;
        for (i, st) in self.sys.statements().iter().enumerate() {
            let fi = Word::generator(i + 1);
            'points: for (p, reach) in table.iter().enumerate() {
                let Some(&q) = index.get(&(&fi * &reach.g)) else {
                    continue;
                };
                for (f, (&a, &b)) in labels[p].iter().zip(&labels[q]).enumerate() {
                    let here = st.left.contains(a as usize);
                    let there = st.right.contains(b as usize);
                    let ok = match st.kind {
                        Relation::Congruence => here == there,
                        Relation::Subcongruence => !here || there,
                    };
                    if !ok {
                        designated_witnessed = false;
                        violations.push(format!("statement {i} fails at ({}, {f})", reach.g));
                        break 'points;
                    }
                }
            }
        }
        let mut labels_within_reach = true;
        for (p, reach) in table.iter().enumerate() {
            for (f, (&start, &label)) in labels[0].iter().zip(&labels[p]).enumerate() {
                let j = start as usize;
                if !reach.get(j).contains(label as usize) {
                    labels_within_reach = false;
                    violations.push(format!(
                        "label {label} at ({}, {f}) is outside P_{j}",
                        reach.g
                    ));
                    break;
                }
            }
        }
        SampleReport {
            points: table.len() * fibers,
            designated_witnessed,
            labels_within_reach,
            violations,
        }
    }
}

/// All subsets of `set`, by submask enumeration.
fn subsets(set: IndexSet) -> impl Iterator<Item = IndexSet> {
    let bits = set.bits();
    let mut next = Some(bits);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & bits)
        };
        Some(IndexSet::from_bits(cur))
    })
}

/// Shorthand for `DeductionLab::new(sys, mode)?.reach(g)`.
pub fn reach(sys: &CongruenceSystem, g: &Word, mode: Mode) -> Result<ReachSet> {
    DeductionLab::new(sys, mode)?.reach(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::from_indices(v.iter().copied())
    }

    fn a1_a2() -> CongruenceSystem {
        CongruenceSystem::from_congruences(2, &[(&[1], &[2])]).unwrap()
    }

    #[test]
    fn reach_examples() {
        let lab = DeductionLab::new(&a1_a2(), Mode::Partition).unwrap();
        assert_eq!(
            lab.reach(&Word::identity()).unwrap().sets,
            vec![set(&[1]), set(&[2])]
        );
        assert_eq!(
            lab.reach(&Word::generator(1)).unwrap().sets,
            vec![set(&[2]), set(&[1])]
        );
        let ff = Word::from_letters([1, 1]);
        assert_eq!(lab.reach(&ff).unwrap().sets, vec![set(&[1]), set(&[2])]);
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let sys = CongruenceSystem::new(
            3,
            vec![
                Statement::congruence(set(&[1]), set(&[2, 3])),
                Statement::subcongruence(set(&[2]), set(&[1])),
            ],
            Mode::Partition,
        )
        .unwrap();
        for mode in [Mode::Partition, Mode::Family] {
            let lab = DeductionLab::new(&sys, mode).unwrap();
            for r in lab.reach_table(4) {
                assert_eq!(lab.reach(&r.g).unwrap(), r);
                assert!(r.sets.iter().all(|p| !p.is_empty()));
            }
        }
    }

    #[test]
    fn witnessed_pairs() {
        let lab = DeductionLab::new(&a1_a2(), Mode::Partition).unwrap();
        let r = lab.reach(&Word::generator(1)).unwrap();
        let mut w = lab.witnessed_congruences(&r);
        w.sort();
        assert_eq!(
            w,
            vec![
                (set(&[]), set(&[])),
                (set(&[1]), set(&[2])),
                (set(&[2]), set(&[1])),
                (set(&[1, 2]), set(&[1, 2]))
            ]
        );
        let e = lab.reach(&Word::identity()).unwrap();
        assert!(lab.witnessed_congruences(&e).iter().all(|(l, r)| l == r));
        let sq = lab.reach(&Word::from_letters([1, 1])).unwrap();
        assert!(lab.witnessed_congruences(&sq).iter().all(|(l, r)| l == r));
        assert!(lab
            .witnessed_subcongruences(&e)
            .iter()
            .all(|(l, r)| l.is_subset(*r)));
    }

    #[test]
    fn subcongruence_witness() {
        let sys = CongruenceSystem::new(
            2,
            vec![Statement::subcongruence(set(&[1]), set(&[2]))],
            Mode::Partition,
        )
        .unwrap();
        let lab = DeductionLab::new(&sys, Mode::Partition).unwrap();
        let r = lab.reach(&Word::generator(1)).unwrap();
        for (l, rr) in lab.witnessed_subcongruences(&r) {
            if l == set(&[1]) {
                assert!(rr.contains(2));
            }
        }
        assert_eq!(lab.designated_witnessing().unwrap(), vec![true]);
    }

    #[test]
    fn completeness_small() {
        let lab = DeductionLab::new(&a1_a2(), Mode::Partition).unwrap();
        assert!(lab.completeness_check(5).unwrap().holds);
        let lab = DeductionLab::new(&a1_a2(), Mode::Family).unwrap();
        assert!(lab.completeness_check(5).unwrap().holds);
    }

    #[test]
    fn rejects_improper_and_oversized() {
        let sys = CongruenceSystem::from_congruences(2, &[(&[1], &[1, 2])]).unwrap();
        assert!(matches!(
            DeductionLab::new(&sys, Mode::Partition),
            Err(Error::ImproperStatement { index: 0, .. })
        ));
        let sys =
            CongruenceSystem::from_congruences(3, &[(&[1], &[2]), (&[2], &[3]), (&[1], &[3])])
                .unwrap();
        assert!(matches!(
            DeductionLab::with_generators(&sys, Mode::Partition, 2),
            Err(Error::TooManyStatements {
                statements: 3,
                generators: 2
            })
        ));
    }

    #[test]
    fn improper_statements_break_completeness() {
        let sys = CongruenceSystem::new(
            2,
            vec![Statement::congruence(set(&[1]), IndexSet::EMPTY)],
            Mode::Family,
        )
        .unwrap();
        let lab = DeductionLab::allowing_improper(&sys, Mode::Family).unwrap();
        let f1 = lab.reach(&Word::generator(1)).unwrap();
        assert!(f1.get(1).is_empty());
        assert!(!lab.structure_lemma_holds(&f1));
        let rep = lab.sample_model(2, 50, 3);
        assert!(!rep.labels_within_reach && rep.violations.len() == 1);
    }

    #[test]
    fn sampler_agrees() {
        let lab = DeductionLab::new(&a1_a2(), Mode::Partition).unwrap();
        let rep = lab.sample_model(3, 200, 1);
        assert!(
            rep.designated_witnessed && rep.labels_within_reach,
            "{:?}",
            rep.violations
        );
        let empty = lab.sample_model(3, 0, 1);
        assert!(empty.designated_witnessed && empty.labels_within_reach);
    }

    #[test]
    fn structure_lemma_on_ball() {
        let lab = DeductionLab::new(&a1_a2(), Mode::Family).unwrap();
        assert!(lab
            .reach_table(4)
            .iter()
            .all(|r| lab.structure_lemma_holds(r)));
    }
}
