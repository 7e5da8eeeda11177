use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::gridnet::TraceSummary;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstAppearance {
    pub document: String,
    pub count: usize,
    pub entities: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceReport {
    pub axis: Vec<String>,
    /// One row per axis document, in axis order.
    pub first_appearance: Vec<FirstAppearance>,
    pub entity_count: usize,
    pub continuous_count: usize,
    /// `continuous_count / entity_count`, 0 for an empty trace list.
    pub continuous_fraction: f64,
    /// Entities present in every axis document.
    pub constants: Vec<String>,
}

/// Summarizes where entity traces begin and how many persist unbroken.
pub fn persistence_report(traces: &[TraceSummary], axis: &[String]) -> PersistenceReport {
    let first_appearance = axis
        .iter()
        .map(|doc| {
            let entities: Vec<String> = traces
                .iter()
                .filter(|t| &t.first_doc == doc)
                .map(|t| t.entity.clone())
                .collect();
            FirstAppearance {
                document: doc.clone(),
                count: entities.len(),
                entities,
            }
        })
        .collect();
    let continuous_count = traces.iter().filter(|t| t.continuous).count();
    let constants = traces
        .iter()
        .filter(|t| !axis.is_empty() && t.presence_count == axis.len())
        .map(|t| t.entity.clone())
        .collect();
    PersistenceReport {
        axis: axis.to_vec(),
        first_appearance,
        entity_count: traces.len(),
        continuous_count,
        continuous_fraction: if traces.is_empty() {
            0.0
        } else {
            continuous_count as f64 / traces.len() as f64
        },
        constants,
    }
}

impl PersistenceReport {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} of {} traces continuous ({:.1}%). Present throughout: {}\n",
            self.continuous_count,
            self.entity_count,
            self.continuous_fraction * 100.0,
            if self.constants.is_empty() {
                "none".to_string()
            } else {
                self.constants.join(", ")
            }
        );
        out.push_str("| document | first appearances | entities |\n|---|---|---|\n");
        for f in &self.first_appearance {
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                f.document,
                f.count,
                f.entities.join(", ")
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(e: &str, first: &str, last: &str, count: usize, gaps: usize) -> TraceSummary {
        TraceSummary {
            entity: e.into(),
            first_doc: first.into(),
            last_doc: last.into(),
            presence_count: count,
            gap_count: gaps,
            continuous: gaps == 0,
        }
    }

    fn axis() -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    #[test]
    fn everything_everywhere() {
        let t = vec![trace("x", "a", "c", 3, 0), trace("y", "a", "c", 3, 0)];
        let r = persistence_report(&t, &axis());
        assert_eq!(r.continuous_fraction, 1.0);
        assert_eq!(r.constants, vec!["x", "y"]);
        assert_eq!(r.first_appearance[0].count, 2);
    }

    #[test]
    fn late_arrival() {
        let t = vec![trace("x", "a", "c", 3, 0), trace("z", "c", "c", 1, 0)];
        let r = persistence_report(&t, &axis());
        assert_eq!(r.first_appearance[2].entities, vec!["z"]);
        assert_eq!(r.constants, vec!["x"]);
    }

    #[test]
    fn gap_is_not_constant() {
        let t = vec![trace("x", "a", "c", 2, 1)];
        let r = persistence_report(&t, &axis());
        assert!(r.constants.is_empty());
        assert_eq!(r.continuous_count, 0);
    }
}
