//! JSON and plain-text renderings of a classification.

use serde_json::{json, Map, Value};

use crate::dsl::{render_statement, render_system};
use crate::lattice::{implication_edges, Classification, Node, OPEN_LABEL};
use crate::system::CongruenceSystem;

pub fn system_json(sys: &CongruenceSystem) -> Value {
    json!({
        "sets": sys.r(),
        "mode": sys.mode(),
        "statements": sys.statements().iter().map(render_statement).collect::<Vec<_>>(),
    })
}

/// `{system, properties: {node: {status, provenance}}, checks, artifacts}`.
pub fn render_report(c: &Classification) -> Value {
    let mut properties = Map::new();
    for (node, st) in c.properties.iter() {
        properties.insert(
            node.id().into(),
            serde_json::to_value(st).expect("statuses serialize"),
        );
    }
    let mut artifacts: Map<String, Value> = c.artifacts.clone().into_iter().collect();
    let open: Vec<String> = implication_edges()
        .into_iter()
        .filter(|e| e.converse_is_open())
        .map(|e| format!("{} -> {}: converse {OPEN_LABEL}", e.from, e.to))
        .collect();
    artifacts.insert("open_converses".into(), json!(open));
    json!({
        "system": system_json(&c.system),
        "properties": properties,
        "checks": c.checks,
        "artifacts": artifacts,
    })
}

pub fn render_text(c: &Classification) -> String {
    let mut out = render_system(&c.system);
    out.push('\n');
    for node in Node::ALL {
        let st = c.properties.get(node);
        out.push_str(&format!("{:<4} {:<8}", node.id(), st.status.to_string()));
        if let Some(p) = &st.provenance {
            out.push_str(&format!(" {p}"));
        }
        if let Some(n) = &st.note {
            out.push_str(&format!(" [{n}]"));
        }
        out.push('\n');
    }
    out.push('\n');
    for check in &c.checks {
        out.push_str(&format!("{}: {}\n", check.op, check.outcome));
    }
    out
}
