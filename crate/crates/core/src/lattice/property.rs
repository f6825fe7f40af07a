use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The satisfiability contexts plus the three syntactic properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Osf,
    Fsf,
    Dsf,
    Osi,
    Fsi,
    Dsi,
    Ops,
    Fps,
    Dps,
    Ffg,
    Pfg,
    Ffq,
    Weak,
    NumericallyConsistent,
    Consistent,
}

impl Node {
    pub const ALL: [Node; 15] = [
        Node::Osf,
        Node::Fsf,
        Node::Dsf,
        Node::Osi,
        Node::Fsi,
        Node::Dsi,
        Node::Ops,
        Node::Fps,
        Node::Dps,
        Node::Ffg,
        Node::Pfg,
        Node::Ffq,
        Node::Weak,
        Node::NumericallyConsistent,
        Node::Consistent,
    ];

    /// The twelve nodes that are satisfiability contexts.
    pub const SATISFIABILITY: [Node; 12] = [
        Node::Osf,
        Node::Fsf,
        Node::Dsf,
        Node::Osi,
        Node::Fsi,
        Node::Dsi,
        Node::Ops,
        Node::Fps,
        Node::Dps,
        Node::Ffg,
        Node::Pfg,
        Node::Ffq,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Node::Osf => "OSF",
            Node::Fsf => "FSF",
            Node::Dsf => "DSF",
            Node::Osi => "OSI",
            Node::Fsi => "FSI",
            Node::Dsi => "DSI",
            Node::Ops => "OPS",
            Node::Fps => "FPS",
            Node::Dps => "DPS",
            Node::Ffg => "FFG",
            Node::Pfg => "PFG",
            Node::Ffq => "FFQ",
            Node::Weak => "w",
            Node::NumericallyConsistent => "nc",
            Node::Consistent => "c",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Node::Osf => "open subsets of the sphere, free rotations",
            Node::Fsf => "finite subsets of the sphere, free rotations",
            Node::Dsf => "open subsets of the sphere with dense union, free rotations",
            Node::Osi => "open subsets of the sphere, any isometries",
            Node::Fsi => "finite subsets of the sphere, any isometries",
            Node::Dsi => "open subsets of the sphere with dense union, any isometries",
            Node::Ops => "open subsets of a suitable Polish space",
            Node::Fps => "finite subsets of a suitable Polish space",
            Node::Dps => "open subsets of a suitable Polish space with dense union",
            Node::Ffg => "finite subsets of a free group",
            Node::Pfg => "finite subsets of a free group with connected prime union",
            Node::Ffq => "finite subsets of the cosets of a pure cyclic subgroup",
            Node::Weak => "weak",
            Node::NumericallyConsistent => "numerically consistent",
            Node::Consistent => "consistent",
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Node {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Node::ALL
            .into_iter()
            .find(|n| n.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Heavy,
    /// Preserves "not all empty" but not "all nonempty".
    Light,
    /// Only valid for all-nonempty solutions; for the weaker notion the
    /// conclusion is a nonnegative weighting, so forward propagation is off
    /// and backward propagation needs that weighting to be absent.
    NonemptyOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub from: Node,
    pub to: Node,
    pub kind: EdgeKind,
}

/// Implications whose converse is unresolved.
const OPEN_CONVERSES: [(Node, Node); 5] = [
    (Node::Osi, Node::NumericallyConsistent),
    (Node::Dsi, Node::Osi),
    (Node::Fps, Node::Ops),
    (Node::Pfg, Node::Dps),
    (Node::Dps, Node::Dsf),
];

/// Label attached to statuses and edges whose truth is an open question.
pub const OPEN_LABEL: &str = "open question";

impl Edge {
    pub fn converse_is_open(&self) -> bool {
        OPEN_CONVERSES.contains(&(self.from, self.to))
    }
}

/// The implication digraph; bidirectional pairs appear as two edges.
pub fn implication_edges() -> Vec<Edge> {
    use EdgeKind::*;
    use Node::*;
    let list = [
        (Pfg, Ffg, Heavy),
        (Pfg, Dps, Heavy),
        (Ffg, Fps, Heavy),
        (Fps, Ffg, Heavy),
        (Ffg, Ffq, Heavy),
        (Dps, Ops, Heavy),
        (Fps, Ops, Heavy),
        (Dps, Dsf, Heavy),
        (Ops, Osf, Heavy),
        (Fps, Fsf, Heavy),
        (Dsf, Weak, Heavy),
        (Dsf, Osf, Heavy),
        (Fsf, Osf, Heavy),
        (Osf, Fsf, Light),
        (Ffq, Fsf, Heavy),
        (Fsf, Ffq, Light),
        (Dsf, Dsi, Heavy),
        (Osf, Osi, Heavy),
        (Fsf, Fsi, Heavy),
        (Dsi, Osi, Heavy),
        (Fsi, Osi, Heavy),
        (Osi, Fsi, Light),
        (Osi, NumericallyConsistent, NonemptyOnly),
        (NumericallyConsistent, Consistent, Heavy),
    ];
    list.into_iter()
        .map(|(from, to, kind)| Edge { from, to, kind })
        .collect()
}

/// Nodes reachable from `start` (inclusive) following every edge forward.
pub fn reachable(start: Node) -> Vec<Node> {
    let edges = implication_edges();
    let mut seen = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for e in edges.iter().filter(|e| e.from == u) {
            if !seen.contains(&e.to) {
                seen.push(e.to);
                queue.push_back(e.to);
            }
        }
    }
    seen.sort();
    seen
}

/// Graphviz rendering; light arrows are drawn dashed.
pub fn to_dot() -> String {
    let mut out = String::from("digraph implications {\n  rankdir=TB;\n");
    for n in Node::ALL {
        out.push_str(&format!(
            "  \"{}\" [tooltip=\"{}\"];\n",
            n.id(),
            n.description()
        ));
    }
    for e in implication_edges() {
        let mut attrs = Vec::new();
        match e.kind {
            EdgeKind::Heavy => {}
            EdgeKind::Light => attrs.push("style=dashed".to_string()),
            EdgeKind::NonemptyOnly => attrs.push("style=dotted".to_string()),
        }
        if e.converse_is_open() {
            attrs.push(format!("label=\"converse: {OPEN_LABEL}\""));
        }
        let attrs = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        out.push_str(&format!(
            "  \"{}\" -> \"{}\"{};\n",
            e.from.id(),
            e.to.id(),
            attrs
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    True,
    False,
    #[default]
    Unknown,
}

impl From<bool> for Status {
    fn from(b: bool) -> Self {
        if b {
            Status::True
        } else {
            Status::False
        }
    }
}

impl Status {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Status::True => Some(true),
            Status::False => Some(false),
            Status::Unknown => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::True => "true",
            Status::False => "false",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Checked { op: String },
    Implied { path: Vec<Node> },
    Contrapositive { path: Vec<Node> },
    Fixture { note: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |p: &[Node]| p.iter().map(|n| n.id()).collect::<Vec<_>>().join(" -> ");
        match self {
            Provenance::Checked { op } => write!(f, "checked({op})"),
            Provenance::Implied { path } => write!(f, "implied({})", join(path)),
            Provenance::Contrapositive { path } => write!(f, "contrapositive({})", join(path)),
            Provenance::Fixture { note } => write!(f, "fixture({note})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NodeStatus {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Per-node statuses with implication propagation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PropertyReport {
    nodes: BTreeMap<Node, NodeStatus>,
}

impl Default for PropertyReport {
    fn default() -> Self {
        PropertyReport::new()
    }
}

/// Extra facts that decide whether the all-nonempty-only edge may fire.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeGates {
    /// No nonnegative weighting with total 1 balances the statements.
    pub no_probability_solution: bool,
}

impl PropertyReport {
    pub fn new() -> Self {
        PropertyReport {
            nodes: Node::ALL
                .into_iter()
                .map(|n| (n, NodeStatus::default()))
                .collect(),
        }
    }

    pub fn get(&self, node: Node) -> &NodeStatus {
        &self.nodes[&node]
    }

    pub fn status(&self, node: Node) -> Status {
        self.nodes[&node].status
    }

    pub fn iter(&self) -> impl Iterator<Item = (Node, &NodeStatus)> {
        self.nodes.iter().map(|(n, s)| (*n, s))
    }

    pub fn annotate(&mut self, node: Node, note: impl Into<String>) {
        self.nodes.get_mut(&node).expect("all nodes present").note = Some(note.into());
    }

    /// Records a status; returns whether it was new. A status that
    /// contradicts an earlier one is an error and leaves the report intact.
    pub fn set(&mut self, node: Node, value: bool, provenance: Provenance) -> Result<bool> {
        let entry = self.nodes.get_mut(&node).expect("all nodes present");
        match entry.status.as_bool() {
            None => {
                entry.status = value.into();
                entry.provenance = Some(provenance);
                Ok(true)
            }
            Some(old) if old == value => Ok(false),
            Some(old) => Err(Error::InconsistentEvidence {
                node: node.id().into(),
                detail: format!(
                    "{} by {} but {} by {}",
                    Status::from(old),
                    entry
                        .provenance
                        .as_ref()
                        .map_or_else(String::new, |p| p.to_string()),
                    Status::from(value),
                    provenance
                ),
            }),
        }
    }

    fn path_to(&self, node: Node, forward: bool) -> Vec<Node> {
        match (&self.nodes[&node].provenance, forward) {
            (Some(Provenance::Implied { path }), true)
            | (Some(Provenance::Contrapositive { path }), false) => path.clone(),
            _ => vec![node],
        }
    }

    /// Pushes `true` forward and `false` backward along the edges until
    /// nothing changes.
    pub fn propagate(&mut self, gates: EdgeGates) -> Result<()> {
        let edges = implication_edges();
        let mut queue: VecDeque<Node> = self
            .nodes
            .iter()
            .filter(|(_, s)| s.status != Status::Unknown)
            .map(|(n, _)| *n)
            .collect();
        while let Some(u) = queue.pop_front() {
            match self.status(u) {
                Status::True => {
                    for e in edges
                        .iter()
                        .filter(|e| e.from == u && e.kind != EdgeKind::NonemptyOnly)
                    {
                        let mut path = self.path_to(u, true);
                        path.push(e.to);
                        if self.set(e.to, true, Provenance::Implied { path })? {
                            queue.push_back(e.to);
                        }
                    }
                }
                Status::False => {
                    for e in edges.iter().filter(|e| e.to == u) {
                        if e.kind == EdgeKind::NonemptyOnly && !gates.no_probability_solution {
                            continue;
                        }
                        let mut path = self.path_to(u, false);
                        path.push(e.from);
                        if self.set(e.from, false, Provenance::Contrapositive { path })? {
                            queue.push_back(e.from);
                        }
                    }
                }
                Status::Unknown => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_nodes_round_trip() {
        for n in Node::ALL {
            assert_eq!(n.id().parse::<Node>().unwrap(), n);
        }
        assert_eq!(implication_edges().len(), 24);
    }

    #[test]
    fn reachable_from_ffg() {
        use Node::*;
        let mut expect = vec![
            Ffg,
            Fps,
            Ffq,
            Fsf,
            Osf,
            Ops,
            Osi,
            Fsi,
            NumericallyConsistent,
            Consistent,
        ];
        expect.sort();
        assert_eq!(reachable(Ffg), expect);
        assert!(!reachable(Ffg).contains(&Dsf));
    }

    #[test]
    fn acyclic_apart_from_pairs() {
        let pairs = [
            (Node::Ffg, Node::Fps),
            (Node::Fsf, Node::Osf),
            (Node::Ffq, Node::Fsf),
            (Node::Fsi, Node::Osi),
        ];
        let edges: Vec<Edge> = implication_edges()
            .into_iter()
            .filter(|e| !pairs.iter().any(|&(a, b)| (e.from, e.to) == (b, a)))
            .collect();
        // Kahn's algorithm on the graph with one edge of each pair removed.
        let mut indeg: BTreeMap<Node, usize> = Node::ALL.into_iter().map(|n| (n, 0)).collect();
        for e in &edges {
            *indeg.get_mut(&e.to).unwrap() += 1;
        }
        let mut ready: Vec<Node> = indeg
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(n, _)| *n)
            .collect();
        let mut seen = 0;
        while let Some(u) = ready.pop() {
            seen += 1;
            for e in edges.iter().filter(|e| e.from == u) {
                let d = indeg.get_mut(&e.to).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(e.to);
                }
            }
        }
        assert_eq!(seen, 15);
    }

    #[test]
    fn propagation_and_conflicts() {
        let mut rep = PropertyReport::new();
        rep.set(
            Node::Ffg,
            true,
            Provenance::Checked {
                op: "search".into(),
            },
        )
        .unwrap();
        rep.propagate(EdgeGates::default()).unwrap();
        assert_eq!(rep.status(Node::Consistent), Status::Unknown);
        assert_eq!(rep.status(Node::Osi), Status::True);
        assert_eq!(
            rep.get(Node::Fps).provenance,
            Some(Provenance::Implied {
                path: vec![Node::Ffg, Node::Fps]
            })
        );
        let err = rep.set(Node::Osf, false, Provenance::Fixture { note: "x".into() });
        assert!(matches!(err, Err(Error::InconsistentEvidence { .. })));
        assert_eq!(rep.status(Node::Osf), Status::True);
    }

    #[test]
    fn gated_edge() {
        let mut rep = PropertyReport::new();
        rep.set(
            Node::NumericallyConsistent,
            false,
            Provenance::Checked { op: "lp".into() },
        )
        .unwrap();
        rep.propagate(EdgeGates::default()).unwrap();
        assert_eq!(rep.status(Node::Osi), Status::Unknown);
        rep.propagate(EdgeGates {
            no_probability_solution: true,
        })
        .unwrap();
        for n in Node::SATISFIABILITY {
            assert_eq!(rep.status(n), Status::False, "{n}");
        }
    }

    #[test]
    fn dot_mentions_every_edge() {
        let dot = to_dot();
        assert_eq!(dot.matches("->").count(), implication_edges().len());
        assert!(dot.contains("\"OSF\" -> \"FSF\" [style=dashed]"));
    }
}
