use proptest::prelude::*;

use setcong::deduction::{DeductionLab, ReachSet};
use setcong::freegroup::Word;
use setcong::{CongruenceSystem, IndexSet, Mode, Statement};

fn proper_system(max_r: usize, max_statements: usize) -> impl Strategy<Value = CongruenceSystem> {
    (2..=max_r).prop_flat_map(move |r| {
        let full = (1u64 << r) - 1;
        let stmt = (any::<bool>(), 1..full, 1..full).prop_map(|(sub, l, rr)| {
            let (l, rr) = (IndexSet::from_bits(l), IndexSet::from_bits(rr));
            if sub {
                Statement::subcongruence(l, rr)
            } else {
                Statement::congruence(l, rr)
            }
        });
        (
            prop::collection::vec(stmt, 1..=max_statements),
            any::<bool>(),
        )
            .prop_map(move |(st, family)| {
                let mode = if family {
                    Mode::Family
                } else {
                    Mode::Partition
                };
                CongruenceSystem::new(r, st, mode).unwrap()
            })
    })
}

fn word(m: i32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=m, any::<bool>()), 1..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, inv)| if inv { -g } else { g })))
}

/// Every split `(L, R)` and choice of on/off values, tried directly.
fn lemma_by_search(labels: usize, reach: &ReachSet) -> bool {
    let all = IndexSet::full(labels);
    let proper = 1..all.bits();
    for l in proper.clone().map(IndexSet::from_bits) {
        for r in proper.clone().map(IndexSet::from_bits) {
            for on in [r, all] {
                for off in [all.difference(r), all] {
                    let fits =
                        (1..=labels).all(|j| reach.get(j) == if l.contains(j) { on } else { off });
                    if fits {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Reach sets that mostly follow the lemma's shape, with occasional damage.
fn shaped_reach(labels: usize) -> impl Strategy<Value = Vec<IndexSet>> {
    let all = (1u64 << labels) - 1;
    (
        1..all,
        1..all,
        any::<bool>(),
        any::<bool>(),
        prop::option::weighted(0.3, (0..labels, 0..=all)),
    )
        .prop_map(move |(l, r, on_all, off_all, damage)| {
            let on = if on_all { all } else { r };
            let off = if off_all { all } else { all & !r };
            let mut sets: Vec<IndexSet> = (0..labels)
                .map(|j| IndexSet::from_bits(if l & (1 << j) != 0 { on } else { off }))
                .collect();
            if let Some((j, v)) = damage {
                sets[j] = IndexSet::from_bits(v);
            }
            sets
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn structure_lemma_matches_search(
        (labels, sets) in (2usize..=4).prop_flat_map(|n| (Just(n), shaped_reach(n))),
        g in word(2, 3),
    ) {
        prop_assume!(!g.is_identity());
        let sys = CongruenceSystem::from_congruences(labels, &[(&[1], &[2])]).unwrap();
        let lab = DeductionLab::new(&sys, Mode::Partition).unwrap();
        let reach = ReachSet { g, sets };
        prop_assert_eq!(lab.structure_lemma_holds(&reach), lemma_by_search(labels, &reach));
    }

    #[test]
    fn reach_sets_of_proper_systems(sys in proper_system(3, 3)) {
        let lab = DeductionLab::new(&sys, sys.mode()).unwrap();
        for reach in lab.reach_table(3) {
            prop_assert!(reach.sets.iter().all(|p| !p.is_empty()));
            prop_assert!(lab.structure_lemma_holds(&reach));
            prop_assert_eq!(lab.reach(&reach.g).unwrap(), reach);
        }
        prop_assert!(lab.designated_witnessing().unwrap().into_iter().all(|b| b));
    }

    #[test]
    fn witnessed_statements_are_deducible(sys in proper_system(3, 3)) {
        let lab = DeductionLab::new(&sys, sys.mode()).unwrap();
        let report = lab.completeness_check(3).unwrap();
        prop_assert!(report.holds, "{:?}", report.counterexample);
    }

    #[test]
    fn sampled_models_follow_reach_sets(sys in proper_system(3, 2), seed in any::<u64>()) {
        let lab = DeductionLab::new(&sys, sys.mode()).unwrap();
        let report = lab.sample_model(3, 20, seed);
        prop_assert!(report.violations.is_empty(), "{:?}", report.violations);
    }
}
