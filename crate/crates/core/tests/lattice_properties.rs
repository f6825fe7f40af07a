use std::collections::BTreeSet;

use proptest::prelude::*;

use setcong::dsl::{parse_system, parse_word, render_system};
use setcong::freegroup::Word;
use setcong::lattice::{
    implication_edges, EdgeGates, EdgeKind, Node, PropertyReport, Provenance, Status,
};
use setcong::{CongruenceSystem, IndexSet, Mode, Statement};

/// Closes `seeds` under the edges, forward or backward.
fn closure(seeds: &BTreeSet<Node>, forward: bool, gated: bool) -> BTreeSet<Node> {
    let edges: Vec<_> = implication_edges()
        .into_iter()
        .filter(|e| gated || e.kind != EdgeKind::NonemptyOnly)
        .collect();
    let mut out = seeds.clone();
    loop {
        let before = out.len();
        for e in &edges {
            let (a, b) = if forward {
                (e.from, e.to)
            } else {
                (e.to, e.from)
            };
            if out.contains(&a) {
                out.insert(b);
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

fn node() -> impl Strategy<Value = Node> {
    prop::sample::select(Node::ALL.to_vec())
}

proptest! {
    #[test]
    fn propagation_matches_closure(
        world_true in prop::collection::btree_set(node(), 0..5),
        revealed in prop::collection::btree_set(node(), 0..8),
        gated in any::<bool>(),
    ) {
        // A world closed under every implication, the gated one included.
        let world = closure(&world_true, true, true);
        let mut report = PropertyReport::new();
        let (mut trues, mut falses) = (BTreeSet::new(), BTreeSet::new());
        for &n in &revealed {
            let v = world.contains(&n);
            report.set(n, v, Provenance::Fixture { note: "revealed".into() }).unwrap();
            if v { trues.insert(n); } else { falses.insert(n); }
        }
        report.propagate(EdgeGates { no_probability_solution: gated }).unwrap();
        let expect_true = closure(&trues, true, false);
        let expect_false = closure(&falses, false, gated);
        for n in Node::ALL {
            let expected = if expect_true.contains(&n) {
                Status::True
            } else if expect_false.contains(&n) {
                Status::False
            } else {
                Status::Unknown
            };
            prop_assert_eq!(report.status(n), expected, "node {}", n);
        }
    }

    #[test]
    fn contradictions_are_reported(from in node()) {
        let below = closure(&BTreeSet::from([from]), true, false);
        for target in below.into_iter().filter(|&t| t != from) {
            let mut report = PropertyReport::new();
            report.set(from, true, Provenance::Checked { op: "a".into() }).unwrap();
            report.set(target, false, Provenance::Checked { op: "b".into() }).unwrap();
            prop_assert!(report.propagate(EdgeGates::default()).is_err());
        }
    }

    #[test]
    fn systems_round_trip_through_text(
        r in 1usize..=6,
        raw in prop::collection::vec((any::<bool>(), 1u64..64, 1u64..64), 0..6),
        family in any::<bool>(),
    ) {
        let mask = (1u64 << r) - 1;
        let statements: Vec<Statement> = raw
            .into_iter()
            .filter(|&(_, l, rr)| l & mask != 0 && rr & mask != 0)
            .map(|(sub, l, rr)| {
                let (l, rr) = (IndexSet::from_bits(l & mask), IndexSet::from_bits(rr & mask));
                if sub { Statement::subcongruence(l, rr) } else { Statement::congruence(l, rr) }
            })
            .collect();
        let mode = if family { Mode::Family } else { Mode::Partition };
        let sys = CongruenceSystem::new(r, statements, mode).unwrap();
        let back = parse_system(&render_system(&sys)).unwrap();
        prop_assert_eq!(back.r(), sys.r());
        prop_assert_eq!(back.mode(), sys.mode());
        prop_assert_eq!(back.statements(), sys.statements());
    }

    #[test]
    fn words_round_trip_through_text(letters in prop::collection::vec((1i32..=30, any::<bool>()), 0..10)) {
        let w = Word::from_letters(letters.into_iter().map(|(g, inv)| if inv { -g } else { g }));
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }
}
