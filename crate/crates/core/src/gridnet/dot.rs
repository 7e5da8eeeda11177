use std::fmt::Write;

use super::GridNetwork;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz DOT rendering.
///
/// Each axis document is a `rank=same` subgraph holding a plaintext header
/// node and that document's presence nodes; invisible edges chain the
/// headers so `dot` keeps the columns in axis order.
pub fn export_dot(grid: &GridNetwork) -> String {
    let mut out = String::from("graph grid {\n");
    if !grid.axis_order.is_empty() {
        out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    }
    for (a, doc) in grid.axis_order.iter().enumerate() {
        let _ = writeln!(out, "  subgraph {} {{", quote(&format!("column {a}")));
        out.push_str("    rank=same;\n");
        let _ = writeln!(
            out,
            "    {} [label={}, shape=plaintext];",
            quote(&format!("#axis@{doc}")),
            quote(doc)
        );
        for n in grid.nodes.iter().filter(|n| n.axis_index == a) {
            let _ = writeln!(out, "    {} [label={}];", quote(&n.key()), quote(&n.entity));
        }
        out.push_str("  }\n");
    }
    for pair in grid.axis_order.windows(2) {
        let _ = writeln!(
            out,
            "  {} -- {} [style=invis];",
            quote(&format!("#axis@{}", pair[0])),
            quote(&format!("#axis@{}", pair[1]))
        );
    }
    for e in &grid.edges {
        let _ = writeln!(
            out,
            "  {} -- {};",
            quote(&format!("{}@{}", e.entity, e.from)),
            quote(&format!("{}@{}", e.entity, e.to))
        );
    }
    out.push_str("}\n");
    out
}
