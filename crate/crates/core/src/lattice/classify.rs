use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::closure::{is_consistent, is_weak};
use crate::error::Result;
use crate::finite::{
    is_connected, is_prime, search_family, FiniteFamily, SearchOutcome, WitnessAssignment,
};
use crate::freegroup::{ball, Word};
use crate::lattice::property::{EdgeGates, Node, PropertyReport, Provenance};
use crate::numeric::{has_probability_solution, numeric_consistency};
use crate::system::CongruenceSystem;

/// Limits for the witness enumeration behind the free-group check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub generators: usize,
    /// Witness words have at most this length.
    pub witness_len: usize,
    pub radius: usize,
    /// Skip the enumeration when it would exceed this many witness tuples.
    pub max_tuples: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            generators: 2,
            witness_len: 2,
            radius: 3,
            max_tuples: 5000,
        }
    }
}

/// One evidence-producing step and what it returned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub op: String,
    pub outcome: String,
}

/// A known status supplied from outside (e.g. a catalog entry).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub node: Node,
    pub value: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub system: CongruenceSystem,
    pub properties: PropertyReport,
    pub checks: Vec<Check>,
    pub artifacts: BTreeMap<String, Value>,
}

pub fn classify(sys: &CongruenceSystem, budget: &SearchBudget) -> Result<Classification> {
    classify_with(sys, budget, &[])
}

/// Runs the syntactic checks, records the seeds, propagates, and only then
/// searches for finite free-group solutions if that is still undecided.
pub fn classify_with(
    sys: &CongruenceSystem,
    budget: &SearchBudget,
    seeds: &[Seed],
) -> Result<Classification> {
    let mut props = PropertyReport::new();
    let mut checks = Vec::new();
    let mut artifacts = BTreeMap::new();
    let checked = |op: &str| Provenance::Checked { op: op.into() };

    let weak = is_weak(sys)?;
    checks.push(Check {
        op: "is_weak".into(),
        outcome: weak.to_string(),
    });
    props.set(Node::Weak, weak, checked("is_weak"))?;

    let consistent = is_consistent(sys)?;
    checks.push(Check {
        op: "is_consistent".into(),
        outcome: consistent.to_string(),
    });
    props.set(Node::Consistent, consistent, checked("is_consistent"))?;

    let nc = numeric_consistency(sys);
    checks.push(Check {
        op: "numeric_consistency".into(),
        outcome: nc.is_some().to_string(),
    });
    if let Some(w) = &nc {
        artifacts.insert(
            "weights".into(),
            json!(w.mu.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
        );
        if w.extended {
            props.annotate(
                Node::NumericallyConsistent,
                "extended-nc: subcongruences read as inequalities",
            );
        }
    }
    props.set(
        Node::NumericallyConsistent,
        nc.is_some(),
        checked("numeric_consistency"),
    )?;

    let probability = has_probability_solution(sys);
    checks.push(Check {
        op: "has_probability_solution".into(),
        outcome: probability.to_string(),
    });
    let gates = EdgeGates {
        no_probability_solution: !probability,
    };

    for seed in seeds {
        props.set(
            seed.node,
            seed.value,
            Provenance::Fixture {
                note: seed.note.clone(),
            },
        )?;
    }
    props.propagate(gates)?;

    if props.status(Node::Ffg).as_bool().is_none() {
        match free_group_search(sys, budget)? {
            FreeSearch::Found { witnesses, family } => {
                let union = family.elements();
                let prime_connected = is_connected(&union) && is_prime(&union);
                checks.push(Check {
                    op: "search_family".into(),
                    outcome: format!("sat with witnesses {}", render_witnesses(&witnesses)),
                });
                checks.push(Check {
                    op: "is_connected && is_prime".into(),
                    outcome: prime_connected.to_string(),
                });
                artifacts.insert(
                    "family".into(),
                    json!({
                        "witnesses": witnesses.words(),
                        "sets": family.sets().iter().map(|s| s.iter().map(Word::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "radius": budget.radius,
                    }),
                );
                props.set(Node::Ffg, true, checked("search_family"))?;
                if prime_connected {
                    props.set(Node::Pfg, true, checked("search_family + is_prime"))?;
                }
                props.propagate(gates)?;
            }
            FreeSearch::Exhausted { tuples } => checks.push(Check {
                op: "search_family".into(),
                outcome: format!(
                    "no family for {tuples} witness tuples (length <= {}, radius {})",
                    budget.witness_len, budget.radius
                ),
            }),
            FreeSearch::Skipped { tuples } => checks.push(Check {
                op: "search_family".into(),
                outcome: format!(
                    "skipped: {tuples} witness tuples exceed budget {}",
                    budget.max_tuples
                ),
            }),
        }
    }

    Ok(Classification {
        system: sys.clone(),
        properties: props,
        checks,
        artifacts,
    })
}

fn render_witnesses(w: &WitnessAssignment) -> String {
    w.words()
        .iter()
        .map(Word::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

enum FreeSearch {
    Found {
        witnesses: WitnessAssignment,
        family: FiniteFamily,
    },
    Exhausted {
        tuples: u128,
    },
    Skipped {
        tuples: u128,
    },
}

/// Every witness tuple from the ball, in lexicographic order over the
/// length-lex word order; the first satisfiable tuple wins.
fn free_group_search(sys: &CongruenceSystem, budget: &SearchBudget) -> Result<FreeSearch> {
    let words = ball(budget.generators, budget.witness_len);
    let tuples = (words.len() as u128).saturating_pow(sys.len() as u32);
    if tuples > budget.max_tuples as u128 {
        return Ok(FreeSearch::Skipped { tuples });
    }
    let mut idx = vec![0usize; sys.len()];
    loop {
        let wit = WitnessAssignment::new(idx.iter().map(|&i| words[i].clone()).collect());
        if let SearchOutcome::Sat(family) =
            search_family(sys, &wit, budget.generators, budget.radius)?
        {
            return Ok(FreeSearch::Found {
                witnesses: wit,
                family,
            });
        }
        // Odometer increment, last position fastest.
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return Ok(FreeSearch::Exhausted { tuples });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < words.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
