use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::GridNetwork;

/// Drawing parameters for [`export_svg`]. Every field has a default, so a
/// style file only needs the values it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StyleOptions {
    /// Distance between consecutive axis documents.
    pub axis_spacing: f64,
    /// Distance between consecutive lanes.
    pub lane_spacing: f64,
    /// Room reserved for lane labels (or axis labels when transposed).
    pub label_margin: f64,
    pub margin: f64,
    pub node_radius: f64,
    pub font_size: f64,
    pub font_family: String,
    pub background: String,
    pub node_fill: String,
    pub node_stroke: String,
    pub edge_stroke: String,
    pub edge_width: f64,
    /// Write the entity id inside each node.
    pub node_labels: bool,
    /// Documents run vertically and lanes horizontally; used for river grids
    /// where lanes follow geography.
    pub transpose: bool,
}

impl Default for StyleOptions {
    fn default() -> Self {
        Self {
            axis_spacing: 70.0,
            lane_spacing: 36.0,
            label_margin: 120.0,
            margin: 30.0,
            node_radius: 9.0,
            font_size: 12.0,
            font_family: "sans-serif".into(),
            background: "#ffffff".into(),
            node_fill: "#f2c14e".into(),
            node_stroke: "#3d3d3d".into(),
            edge_stroke: "#2a6f97".into(),
            edge_width: 2.0,
            node_labels: false,
            transpose: false,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Layout<'a> {
    style: &'a StyleOptions,
}

impl Layout<'_> {
    /// Canvas position of (axis index, lane index).
    fn at(&self, axis: usize, lane: usize) -> (f64, f64) {
        let s = self.style;
        let (along, across) = (axis as f64, lane as f64);
        if s.transpose {
            (
                s.label_margin + s.margin + across * s.axis_spacing,
                s.margin + s.font_size * 2.0 + along * s.lane_spacing,
            )
        } else {
            (
                s.label_margin + s.margin + along * s.axis_spacing,
                s.margin + s.font_size * 2.0 + across * s.lane_spacing,
            )
        }
    }
}

/// Static lattice drawing: axis documents equally spaced horizontally,
/// lanes vertically (swapped when `style.transpose`), presence nodes as
/// circles and each entity's trace as a polyline.
pub fn export_svg(grid: &GridNetwork, style: &StyleOptions) -> String {
    let layout = Layout { style };
    let n_axis = grid.axis_order.len();
    let n_lanes = grid.lane_order.len();
    let (cols, rows) = if style.transpose {
        (n_lanes, n_axis)
    } else {
        (n_axis, n_lanes)
    };
    let width = style.label_margin
        + 2.0 * style.margin
        + cols.saturating_sub(1) as f64 * style.axis_spacing;
    let height = style.font_size * 2.0
        + 2.0 * style.margin
        + rows.saturating_sub(1) as f64 * style.lane_spacing;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{width:.1}\" height=\"{height:.1}\" fill=\"{}\"/>",
        escape(&style.background)
    );
    let font = format!(
        "font-family=\"{}\" font-size=\"{:.1}\"",
        escape(&style.font_family),
        style.font_size
    );

    // Axis and lane labels: header row along the top, names down the side.
    for (a, doc) in grid.axis_order.iter().enumerate() {
        let (x, y) = layout.at(a, 0);
        let (tx, ty, anchor) = if style.transpose {
            (
                style.label_margin + style.margin - style.node_radius * 2.0,
                y + style.font_size / 3.0,
                "end",
            )
        } else {
            (x, style.margin + style.font_size / 2.0, "middle")
        };
        let _ = writeln!(
            out,
            "  <text x=\"{tx:.1}\" y=\"{ty:.1}\" text-anchor=\"{anchor}\" {font}>{}</text>",
            escape(doc)
        );
    }
    for (l, lane) in grid.lane_order.iter().enumerate() {
        let (x, y) = layout.at(0, l);
        let (tx, ty, anchor) = if style.transpose {
            (x, style.margin + style.font_size / 2.0, "middle")
        } else {
            (
                style.label_margin + style.margin - style.node_radius * 2.0,
                y + style.font_size / 3.0,
                "end",
            )
        };
        let _ = writeln!(
            out,
            "  <text x=\"{tx:.1}\" y=\"{ty:.1}\" text-anchor=\"{anchor}\" {font}>{}</text>",
            escape(lane)
        );
    }

    for lane in 0..n_lanes {
        let pts: Vec<String> = grid
            .nodes_in_lane(lane)
            .map(|n| {
                let (x, y) = layout.at(n.axis_index, n.lane_index);
                format!("{x:.1},{y:.1}")
            })
            .collect();
        if pts.len() >= 2 {
            let _ = writeln!(
                out,
                "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.1}\"/>",
                pts.join(" "),
                escape(&style.edge_stroke),
                style.edge_width
            );
        }
    }

    for n in &grid.nodes {
        let (x, y) = layout.at(n.axis_index, n.lane_index);
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{:.1}\" fill=\"{}\" stroke=\"{}\"><title>{}</title></circle>",
            style.node_radius,
            escape(&style.node_fill),
            escape(&style.node_stroke),
            escape(&n.key())
        );
        if style.node_labels {
            let _ = writeln!(
                out,
                "  <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"{}\" font-size=\"{:.1}\">{}</text>",
                y + style.font_size * 0.3,
                escape(&style.font_family),
                style.font_size * 0.7,
                escape(&n.entity)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
