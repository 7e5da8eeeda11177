use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A document's place in a chronology hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageAssignment {
    pub stage: String,
    /// 1 = earliest. Fractional ranks are allowed for documents placed
    /// between two others.
    pub rank: f64,
}

/// Ordered stage labels plus a per-document (stage, rank) assignment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChronologyReference {
    pub name: String,
    pub stages: Vec<String>,
    pub assignment: BTreeMap<String, StageAssignment>,
}

pub const TALAGERI: &str = "talageri";

impl ChronologyReference {
    pub fn empty() -> Self {
        Self {
            name: "none".into(),
            stages: Vec::new(),
            assignment: BTreeMap::new(),
        }
    }

    /// Builds a reference from (document, stage, rank) triples, ordering
    /// stages by their smallest rank.
    pub fn from_assignments<I>(name: &str, rows: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = (String, String, f64)>,
    {
        let mut assignment = BTreeMap::new();
        for (doc, stage, rank) in rows {
            if !(rank >= 1.0 && rank.is_finite()) {
                return Err(format!(
                    "document {doc}: rank {rank} must be a finite number >= 1"
                ));
            }
            if stage.is_empty() {
                return Err(format!("document {doc}: empty stage label"));
            }
            if assignment
                .insert(doc.clone(), StageAssignment { stage, rank })
                .is_some()
            {
                return Err(format!("document {doc} assigned twice"));
            }
        }
        let mut bounds: Vec<(String, f64, f64)> = Vec::new();
        for a in assignment.values() {
            match bounds.iter_mut().find(|(s, _, _)| *s == a.stage) {
                Some(b) => {
                    b.1 = b.1.min(a.rank);
                    b.2 = b.2.max(a.rank);
                }
                None => bounds.push((a.stage.clone(), a.rank, a.rank)),
            }
        }
        bounds.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let reference = Self {
            name: name.to_string(),
            stages: bounds.into_iter().map(|b| b.0).collect(),
            assignment,
        };
        reference.check_order()?;
        Ok(reference)
    }

    /// Every document of an earlier stage must rank strictly before every
    /// document of a later stage.
    pub fn check_order(&self) -> Result<(), String> {
        let mut prev_max: Option<(String, f64)> = None;
        for stage in &self.stages {
            let ranks: Vec<f64> = self
                .assignment
                .values()
                .filter(|a| &a.stage == stage)
                .map(|a| a.rank)
                .collect();
            if ranks.is_empty() {
                continue;
            }
            let lo = ranks.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ranks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if let Some((p, pmax)) = &prev_max {
                if lo <= *pmax {
                    return Err(format!(
                        "stage {stage} has rank {lo} which does not follow stage {p} (max rank {pmax})"
                    ));
                }
            }
            prev_max = Some((stage.clone(), hi));
        }
        for a in self.assignment.values() {
            if !self.stages.contains(&a.stage) {
                return Err(format!("stage {} is not in the stage list", a.stage));
            }
        }
        Ok(())
    }

    pub fn stage_of(&self, document: &str) -> Option<&str> {
        self.assignment.get(document).map(|a| a.stage.as_str())
    }

    pub fn rank_of(&self, document: &str) -> Option<f64> {
        self.assignment.get(document).map(|a| a.rank)
    }

    pub fn stage_index(&self, stage: &str) -> Option<usize> {
        self.stages.iter().position(|s| s == stage)
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Talageri's internal chronology of the ten Mandalas.
    ///
    /// early = 6, 3, 7 (ranks 1-3); middle = 4, 2 (ranks 4-5);
    /// late = 5, 8, 1, 10 (ranks 6, 7, 8, 9). Mandala 9 is placed in the
    /// late stage at rank 8.5, between 1 and 10.
    pub fn talageri() -> Self {
        let rows = [
            ("M6", "early", 1.0),
            ("M3", "early", 2.0),
            ("M7", "early", 3.0),
            ("M4", "middle", 4.0),
            ("M2", "middle", 5.0),
            ("M5", "late", 6.0),
            ("M8", "late", 7.0),
            ("M1", "late", 8.0),
            ("M9", "late", 8.5),
            ("M10", "late", 9.0),
        ];
        Self::from_assignments(
            TALAGERI,
            rows.iter()
                .map(|(d, s, r)| (d.to_string(), s.to_string(), *r)),
        )
        .expect("built-in chronology is consistent")
    }

    /// Document ids sorted by rank, ties broken by id.
    pub fn ordered_documents(&self) -> Vec<String> {
        let mut docs: Vec<(&String, f64)> =
            self.assignment.iter().map(|(d, a)| (d, a.rank)).collect();
        docs.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
        docs.into_iter().map(|(d, _)| d.clone()).collect()
    }
}
