use std::fmt::Write;

use super::GridNetwork;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// GraphML document with `entity`, `document`, `axis_index` and
/// `lane_index` attributes on nodes and `entity` on edges.
pub fn export_graphml(grid: &GridNetwork) -> String {
    let mut out = String::from(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" ",
        "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" ",
        "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns ",
        "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
        "  <key id=\"entity\" for=\"node\" attr.name=\"entity\" attr.type=\"string\"/>\n",
        "  <key id=\"document\" for=\"node\" attr.name=\"document\" attr.type=\"string\"/>\n",
        "  <key id=\"axis_index\" for=\"node\" attr.name=\"axis_index\" attr.type=\"int\"/>\n",
        "  <key id=\"lane_index\" for=\"node\" attr.name=\"lane_index\" attr.type=\"int\"/>\n",
        "  <key id=\"trace\" for=\"edge\" attr.name=\"entity\" attr.type=\"string\"/>\n",
        "  <graph id=\"grid\" edgedefault=\"undirected\">\n",
    ));
    for n in &grid.nodes {
        let _ = writeln!(out, "    <node id=\"{}\">", escape(&n.key()));
        let _ = writeln!(
            out,
            "      <data key=\"entity\">{}</data>",
            escape(&n.entity)
        );
        let _ = writeln!(
            out,
            "      <data key=\"document\">{}</data>",
            escape(&n.document)
        );
        let _ = writeln!(
            out,
            "      <data key=\"axis_index\">{}</data>",
            n.axis_index
        );
        let _ = writeln!(
            out,
            "      <data key=\"lane_index\">{}</data>",
            n.lane_index
        );
        out.push_str("    </node>\n");
    }
    for (i, e) in grid.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\">",
            escape(&format!("{}@{}", e.entity, e.from)),
            escape(&format!("{}@{}", e.entity, e.to))
        );
        let _ = writeln!(
            out,
            "      <data key=\"trace\">{}</data>",
            escape(&e.entity)
        );
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }

    #[test]
    fn empty_grid_has_graph_element() {
        let g = GridNetwork {
            axis_order: vec![],
            lane_order: vec![],
            nodes: vec![],
            edges: vec![],
        };
        let x = export_graphml(&g);
        assert!(x.contains("<graph id=\"grid\" edgedefault=\"undirected\">\n  </graph>"));
        assert!(!x.contains("<node"));
    }
}
