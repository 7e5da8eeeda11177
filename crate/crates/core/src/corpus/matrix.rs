use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Dense entities × documents table of nonnegative mention counts.
///
/// Counts are stored row-major: row `e` holds entity `e`'s counts across
/// all documents, so a document's term-frequency vector is a column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionMatrix {
    entity_ids: Vec<String>,
    document_ids: Vec<String>,
    counts: Vec<u64>,
}

/// Result of restricting a matrix to a subset of entities and documents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub matrix: MentionMatrix,
    /// Documents that matched the filter but had no mentions left.
    pub dropped_documents: Vec<String>,
}

impl Slice {
    /// Human-readable advisory lines, one per dropped document.
    pub fn notes(&self) -> Vec<String> {
        self.dropped_documents
            .iter()
            .map(|d| format!("document {d} has no mentions in this slice and was dropped"))
            .collect()
    }
}

impl MentionMatrix {
    /// Builds a matrix from per-entity rows.
    pub fn from_rows(
        entity_ids: Vec<String>,
        document_ids: Vec<String>,
        rows: Vec<Vec<u64>>,
    ) -> Result<Self, CorpusError> {
        if rows.len() != entity_ids.len() {
            return Err(CorpusError::Shape(format!(
                "{} rows for {} entities",
                rows.len(),
                entity_ids.len()
            )));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != document_ids.len()) {
            return Err(CorpusError::Shape(format!(
                "row {} has {} columns, expected {}",
                bad,
                rows[bad].len(),
                document_ids.len()
            )));
        }
        check_unique(&entity_ids, "entity")?;
        check_unique(&document_ids, "document")?;
        Ok(Self {
            entity_ids,
            document_ids,
            counts: rows.into_iter().flatten().collect(),
        })
    }

    pub fn entity_ids(&self) -> &[String] {
        &self.entity_ids
    }

    pub fn document_ids(&self) -> &[String] {
        &self.document_ids
    }

    pub fn n_entities(&self) -> usize {
        self.entity_ids.len()
    }

    pub fn n_documents(&self) -> usize {
        self.document_ids.len()
    }

    pub fn get(&self, entity: usize, document: usize) -> u64 {
        self.counts[entity * self.document_ids.len() + document]
    }

    pub fn row(&self, entity: usize) -> &[u64] {
        let n = self.document_ids.len();
        &self.counts[entity * n..(entity + 1) * n]
    }

    pub fn column(&self, document: usize) -> Vec<u64> {
        (0..self.entity_ids.len())
            .map(|e| self.get(e, document))
            .collect()
    }

    pub fn document_index(&self, id: &str) -> Option<usize> {
        self.document_ids.iter().position(|d| d == id)
    }

    pub fn entity_index(&self, id: &str) -> Option<usize> {
        self.entity_ids.iter().position(|e| e == id)
    }

    pub fn column_total(&self, document: usize) -> u64 {
        (0..self.entity_ids.len())
            .map(|e| self.get(e, document))
            .sum()
    }

    pub fn is_binary(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    /// Replaces every count with 1 if it is at least 1, else 0.
    pub fn to_presence(&self) -> MentionMatrix {
        MentionMatrix {
            entity_ids: self.entity_ids.clone(),
            document_ids: self.document_ids.clone(),
            counts: self.counts.iter().map(|&c| u64::from(c >= 1)).collect(),
        }
    }

    /// Keeps the entities and documents accepted by the two predicates,
    /// preserving their order. Documents left with an all-zero column are
    /// dropped and reported in [`Slice::dropped_documents`].
    pub fn restrict<E, D>(&self, keep_entity: E, keep_document: D) -> Result<Slice, CorpusError>
    where
        E: Fn(&str) -> bool,
        D: Fn(&str) -> bool,
    {
        let rows: Vec<usize> = (0..self.n_entities())
            .filter(|&e| keep_entity(&self.entity_ids[e]))
            .collect();
        let mut cols = Vec::new();
        let mut dropped = Vec::new();
        for d in 0..self.n_documents() {
            if !keep_document(&self.document_ids[d]) {
                continue;
            }
            if rows.iter().any(|&e| self.get(e, d) > 0) {
                cols.push(d);
            } else {
                dropped.push(self.document_ids[d].clone());
            }
        }
        if rows.is_empty() || cols.is_empty() {
            return Err(CorpusError::EmptySlice {
                entities: rows.len(),
                documents: cols.len(),
            });
        }
        let mut counts = Vec::with_capacity(rows.len() * cols.len());
        for &e in &rows {
            counts.extend(cols.iter().map(|&d| self.get(e, d)));
        }
        Ok(Slice {
            matrix: MentionMatrix {
                entity_ids: rows.iter().map(|&e| self.entity_ids[e].clone()).collect(),
                document_ids: cols.iter().map(|&d| self.document_ids[d].clone()).collect(),
                counts,
            },
            dropped_documents: dropped,
        })
    }
}

fn check_unique(ids: &[String], what: &str) -> Result<(), CorpusError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(CorpusError::Shape(format!("duplicate {what} id {id}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn small() -> MentionMatrix {
        MentionMatrix::from_rows(
            ids(&["a", "b"]),
            ids(&["x", "y"]),
            vec![vec![2, 0], vec![1, 3]],
        )
        .unwrap()
    }

    #[test]
    fn presence_thresholds_counts() {
        let p = small().to_presence();
        assert_eq!(p.row(0), &[1, 0]);
        assert_eq!(p.row(1), &[1, 1]);
        assert_eq!(p.to_presence(), p);
    }

    #[test]
    fn zero_row_survives_presence() {
        let m = MentionMatrix::from_rows(ids(&["a", "b"]), ids(&["x"]), vec![vec![0], vec![4]])
            .unwrap();
        assert_eq!(m.to_presence().row(0), &[0]);
    }

    #[test]
    fn restrict_drops_empty_columns() {
        let s = small().restrict(|e| e == "a", |_| true).unwrap();
        assert_eq!(s.matrix.document_ids(), &["x".to_string()]);
        assert_eq!(s.dropped_documents, vec!["y".to_string()]);
        assert_eq!(s.notes().len(), 1);
    }

    #[test]
    fn restrict_everything_is_identity() {
        let m = small();
        let s = m.restrict(|_| true, |_| true).unwrap();
        assert_eq!(s.matrix, m);
        assert!(s.dropped_documents.is_empty());
    }

    #[test]
    fn restrict_to_nothing_is_empty_slice() {
        let err = small().restrict(|_| false, |_| true).unwrap_err();
        assert!(matches!(err, CorpusError::EmptySlice { .. }));
    }

    #[test]
    fn shape_errors() {
        assert!(MentionMatrix::from_rows(ids(&["a"]), ids(&["x"]), vec![vec![1, 2]]).is_err());
        assert!(
            MentionMatrix::from_rows(ids(&["a", "a"]), ids(&["x"]), vec![vec![1], vec![1]])
                .is_err()
        );
    }
}
