//! Grid networks: presence nodes on an ordered document × entity lattice,
//! with one trace path per entity linking its consecutive presences.
//!
//! Documents run along the axis, entities along lanes. Trace edges skip
//! documents where the entity is absent, so each entity's trace is a single
//! path; the skipped documents are counted in [`TraceSummary::gap_count`].

mod dot;
mod graphml;
mod svg;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::MentionMatrix;

pub use dot::export_dot;
pub use graphml::export_graphml;
pub use svg::{export_svg, StyleOptions};

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error(
        "grid input must be a presence (0/1) matrix; found count {count} at ({entity}, {document})"
    )]
    NonBinaryMatrix {
        entity: String,
        document: String,
        count: u64,
    },
    #[error("{0} is not in the presence matrix")]
    UnknownAxisId(String),
    #[error("{0} appears twice in an axis or lane order")]
    DuplicateAxisId(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridNode {
    pub entity: String,
    pub document: String,
    pub lane_index: usize,
    pub axis_index: usize,
}

impl GridNode {
    /// Node identifier used by the exporters.
    pub fn key(&self) -> String {
        format!("{}@{}", self.entity, self.document)
    }
}

/// Trace edge between two consecutive presences of one entity, `from`
/// earlier on the axis than `to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceEdge {
    pub entity: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridNetwork {
    pub axis_order: Vec<String>,
    pub lane_order: Vec<String>,
    /// Lane-major, then axis order.
    pub nodes: Vec<GridNode>,
    /// Grouped by lane, each group in axis order.
    pub edges: Vec<TraceEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBuild {
    pub grid: GridNetwork,
    /// Requested lanes with no presence on the axis.
    pub excluded_lanes: Vec<String>,
}

impl GridBuild {
    pub fn notes(&self) -> Vec<String> {
        self.excluded_lanes
            .iter()
            .map(|e| format!("entity {e} has no presence on the axis and was left out of the grid"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub entity: String,
    pub first_doc: String,
    pub last_doc: String,
    pub presence_count: usize,
    /// Absent documents strictly between the first and last presence.
    pub gap_count: usize,
    pub continuous: bool,
}

fn positions(order: &[String], known: &[String]) -> Result<Vec<usize>, GridError> {
    let mut seen = HashSet::new();
    order
        .iter()
        .map(|id| {
            if !seen.insert(id.as_str()) {
                return Err(GridError::DuplicateAxisId(id.clone()));
            }
            known
                .iter()
                .position(|k| k == id)
                .ok_or_else(|| GridError::UnknownAxisId(id.clone()))
        })
        .collect()
}

/// Builds the grid for the given document axis and entity lane order.
pub fn build_grid(
    presence: &MentionMatrix,
    axis_order: &[String],
    lane_order: &[String],
) -> Result<GridBuild, GridError> {
    for e in 0..presence.n_entities() {
        for d in 0..presence.n_documents() {
            let count = presence.get(e, d);
            if count > 1 {
                return Err(GridError::NonBinaryMatrix {
                    entity: presence.entity_ids()[e].clone(),
                    document: presence.document_ids()[d].clone(),
                    count,
                });
            }
        }
    }
    let cols = positions(axis_order, presence.document_ids())?;
    let rows = positions(lane_order, presence.entity_ids())?;

    let mut lanes = Vec::new();
    let mut excluded = Vec::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (&row, id) in rows.iter().zip(lane_order) {
        let present: Vec<usize> = (0..cols.len())
            .filter(|&a| presence.get(row, cols[a]) == 1)
            .collect();
        if present.is_empty() {
            excluded.push(id.clone());
            continue;
        }
        let lane_index = lanes.len();
        lanes.push(id.clone());
        for &a in &present {
            nodes.push(GridNode {
                entity: id.clone(),
                document: axis_order[a].clone(),
                lane_index,
                axis_index: a,
            });
        }
        for pair in present.windows(2) {
            edges.push(TraceEdge {
                entity: id.clone(),
                from: axis_order[pair[0]].clone(),
                to: axis_order[pair[1]].clone(),
            });
        }
    }
    Ok(GridBuild {
        grid: GridNetwork {
            axis_order: axis_order.to_vec(),
            lane_order: lanes,
            nodes,
            edges,
        },
        excluded_lanes: excluded,
    })
}

impl GridNetwork {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes_in_lane(&self, lane: usize) -> impl Iterator<Item = &GridNode> {
        self.nodes.iter().filter(move |n| n.lane_index == lane)
    }
}

/// One summary per lane, in lane order.
pub fn traces(grid: &GridNetwork) -> Vec<TraceSummary> {
    (0..grid.lane_order.len())
        .filter_map(|lane| {
            let axis: Vec<usize> = grid.nodes_in_lane(lane).map(|n| n.axis_index).collect();
            let (&first, &last) = (axis.first()?, axis.last()?);
            let gap_count = (last - first + 1) - axis.len();
            Some(TraceSummary {
                entity: grid.lane_order[lane].clone(),
                first_doc: grid.axis_order[first].clone(),
                last_doc: grid.axis_order[last].clone(),
                presence_count: axis.len(),
                gap_count,
                continuous: gap_count == 0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn abc() -> MentionMatrix {
        MentionMatrix::from_rows(
            ids(&["A", "B", "C", "Z"]),
            ids(&["1", "2", "3", "4"]),
            vec![
                vec![1, 1, 0, 1],
                vec![0, 1, 1, 0],
                vec![1, 1, 1, 1],
                vec![0, 0, 0, 0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn trace_edges_skip_gaps() {
        let m = abc();
        let b = build_grid(&m, m.document_ids(), &ids(&["A"])).unwrap();
        assert_eq!(b.grid.nodes.len(), 3);
        let e: Vec<(&str, &str)> = b
            .grid
            .edges
            .iter()
            .map(|e| (e.from.as_str(), e.to.as_str()))
            .collect();
        assert_eq!(e, vec![("1", "2"), ("2", "4")]);
    }

    #[test]
    fn summaries() {
        let m = abc();
        let b = build_grid(&m, m.document_ids(), m.entity_ids()).unwrap();
        assert_eq!(b.excluded_lanes, vec!["Z"]);
        let t = traces(&b.grid);
        assert_eq!(t.len(), 3);
        assert_eq!(
            t[0],
            TraceSummary {
                entity: "A".into(),
                first_doc: "1".into(),
                last_doc: "4".into(),
                presence_count: 3,
                gap_count: 1,
                continuous: false
            }
        );
        assert_eq!(
            (t[1].first_doc.as_str(), t[1].last_doc.as_str()),
            ("2", "3")
        );
        assert_eq!(
            (t[1].presence_count, t[1].gap_count, t[1].continuous),
            (2, 0, true)
        );
        assert_eq!((t[2].presence_count, t[2].gap_count), (4, 0));
    }

    #[test]
    fn single_presence() {
        let m = MentionMatrix::from_rows(ids(&["A"]), ids(&["1", "2"]), vec![vec![0, 1]]).unwrap();
        let b = build_grid(&m, m.document_ids(), m.entity_ids()).unwrap();
        assert_eq!((b.grid.nodes.len(), b.grid.edges.len()), (1, 0));
    }

    #[test]
    fn everywhere_on_ten_documents() {
        let docs: Vec<String> = (1..=10).map(|i| format!("M{i}")).collect();
        let m = MentionMatrix::from_rows(ids(&["C"]), docs.clone(), vec![vec![1; 10]]).unwrap();
        let g = build_grid(&m, &docs, m.entity_ids()).unwrap().grid;
        let t = traces(&g);
        assert_eq!((t[0].presence_count, t[0].gap_count), (10, 0));
    }

    #[test]
    fn empty_column_is_kept_on_axis() {
        let m =
            MentionMatrix::from_rows(ids(&["mv"]), ids(&["M9", "M10"]), vec![vec![1, 0]]).unwrap();
        let g = build_grid(&m, m.document_ids(), m.entity_ids())
            .unwrap()
            .grid;
        assert_eq!(g.axis_order, ids(&["M9", "M10"]));
        assert!(g.nodes.iter().all(|n| n.document != "M10"));
    }

    #[test]
    fn errors() {
        let m = MentionMatrix::from_rows(ids(&["A"]), ids(&["1"]), vec![vec![2]]).unwrap();
        assert!(matches!(
            build_grid(&m, m.document_ids(), m.entity_ids()),
            Err(GridError::NonBinaryMatrix { count: 2, .. })
        ));
        let m = abc();
        assert_eq!(
            build_grid(&m, &ids(&["1", "9"]), m.entity_ids()),
            Err(GridError::UnknownAxisId("9".into()))
        );
        assert_eq!(
            build_grid(&m, m.document_ids(), &ids(&["Q"])),
            Err(GridError::UnknownAxisId("Q".into()))
        );
        assert_eq!(
            build_grid(&m, &ids(&["1", "1"]), m.entity_ids()),
            Err(GridError::DuplicateAxisId("1".into()))
        );
    }
}
