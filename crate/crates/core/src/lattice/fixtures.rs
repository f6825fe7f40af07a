use crate::lattice::classify::Seed;
use crate::lattice::property::{Node, Status};
use crate::numeric::make_cp;
use crate::system::CongruenceSystem;

/// A named system with facts known from its construction, the statuses a
/// classification must reproduce, and the nodes whose status is unresolved.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub system: CongruenceSystem,
    pub known: Vec<Seed>,
    pub expected: Vec<(Node, Status)>,
    pub open: Vec<Node>,
}

fn congruences(r: usize, pairs: &[(&[usize], &[usize])]) -> CongruenceSystem {
    CongruenceSystem::from_congruences(r, pairs).expect("catalog systems are well formed")
}

fn seed(node: Node, value: bool, note: &str) -> Seed {
    Seed {
        node,
        value,
        note: note.into(),
    }
}

fn all_false(extra: &[(Node, Status)]) -> Vec<(Node, Status)> {
    let mut v: Vec<(Node, Status)> = Node::SATISFIABILITY
        .iter()
        .map(|&n| (n, Status::False))
        .collect();
    v.extend_from_slice(extra);
    v
}

pub fn fixture_catalog() -> Vec<Fixture> {
    use Node::*;
    use Status::{False as F, True as T, Unknown as U};
    vec![
        Fixture {
            name: "hausdorff",
            system: congruences(3, &[(&[1], &[2]), (&[2], &[3]), (&[3], &[2, 3])]),
            known: vec![],
            expected: all_false(&[(Consistent, F), (NumericallyConsistent, F)]),
            open: vec![],
        },
        Fixture {
            name: "robinson-wagon",
            system: congruences(4, &[(&[1], &[1, 3, 4]), (&[3], &[1, 2, 3])]),
            known: vec![],
            expected: all_false(&[(Weak, T), (Consistent, F)]),
            open: vec![],
        },
        Fixture {
            name: "five-set",
            system: congruences(
                5,
                &[
                    (&[1], &[2]),
                    (&[2], &[3]),
                    (&[3], &[4]),
                    (&[4], &[5]),
                    (&[1, 2], &[1, 3, 4]),
                ],
            ),
            known: vec![],
            expected: all_false(&[(Weak, T), (Consistent, T), (NumericallyConsistent, F)]),
            open: vec![],
        },
        Fixture {
            name: "two-set",
            system: congruences(2, &[(&[1], &[2])]),
            known: vec![seed(Dsi, true, "two disjoint congruent dense open sets")],
            expected: vec![(Weak, F), (Ffg, T), (Dsi, T), (Dsf, F), (Dps, F), (Pfg, F)],
            open: vec![],
        },
        Fixture {
            name: "pair-unions",
            system: make_cp(3).expect("three sets"),
            known: vec![
                seed(
                    Fsi,
                    true,
                    "finite sets on the sphere under arbitrary isometries",
                ),
                seed(Dsi, true, "dense open sets under arbitrary isometries"),
                seed(
                    Osf,
                    false,
                    "no open sets on the sphere under free rotations",
                ),
            ],
            expected: vec![
                (Weak, T),
                (Fsi, T),
                (Dsi, T),
                (Osi, T),
                (Osf, F),
                (Ffg, F),
                (Ffq, F),
                (Pfg, F),
            ],
            open: vec![],
        },
        Fixture {
            name: "three-equal",
            system: congruences(3, &[(&[1], &[2]), (&[2], &[3]), (&[1, 2], &[1, 3])]),
            known: vec![
                seed(Dsi, true, "dense open sets under arbitrary isometries"),
                seed(
                    Dsf,
                    false,
                    "no dense open sets on the sphere under free rotations",
                ),
            ],
            expected: vec![(Weak, T), (Ffg, T), (Dsi, T), (Dsf, F), (Dps, F), (Pfg, F)],
            open: vec![],
        },
        Fixture {
            name: "dense-not-prime",
            system: congruences(3, &[(&[1], &[3]), (&[1, 2], &[1, 3])]),
            known: vec![
                seed(
                    Dsf,
                    true,
                    "dense open sets on the sphere under free rotations",
                ),
                seed(Pfg, false, "no finite solution with connected prime union"),
            ],
            expected: vec![(Dsf, T), (Ffg, T), (Pfg, F), (Dps, U), (Weak, T)],
            open: vec![Dps],
        },
        Fixture {
            name: "dense-not-finite",
            system: congruences(4, &[(&[1], &[3]), (&[1, 2], &[1, 3]), (&[1, 3], &[1, 4])]),
            known: vec![
                seed(
                    Dsf,
                    true,
                    "dense open sets on the sphere under free rotations",
                ),
                seed(
                    Ffg,
                    false,
                    "finite sets would be forced into an infinite orbit",
                ),
            ],
            expected: vec![(Dsf, T), (Ffg, F), (Fps, F), (Pfg, F), (Dps, U), (Ops, U)],
            open: vec![Dps, Ops],
        },
    ]
}

/// Classifies a catalog entry with its known facts and labels the nodes the
/// entry leaves open.
pub fn classify_fixture(
    fixture: &Fixture,
    budget: &crate::lattice::SearchBudget,
) -> crate::error::Result<crate::lattice::Classification> {
    let mut c = crate::lattice::classify_with(&fixture.system, budget, &fixture.known)?;
    for &node in &fixture.open {
        if c.properties.status(node) == Status::Unknown {
            c.properties.annotate(node, crate::lattice::OPEN_LABEL);
        }
    }
    Ok(c)
}
