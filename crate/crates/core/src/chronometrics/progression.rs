use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};

use super::{spearman, MetricsError};
use crate::corpus::{Category, Corpus, MentionMatrix};

/// How river mentions weight a document's mean geo ordinal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeoWeighting {
    /// Each river present counts once.
    #[default]
    Presence,
    /// Each river counts by its mention count.
    Counts,
}

impl fmt::Display for GeoWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeoWeighting::Presence => "presence",
            GeoWeighting::Counts => "counts",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentGeo {
    pub document: String,
    pub rank: f64,
    pub mean_geo_ordinal: f64,
    pub rivers_present: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgressionReport {
    pub weighting: GeoWeighting,
    /// In chronology rank order.
    pub documents: Vec<DocumentGeo>,
    pub spearman_rho: f64,
    pub n_documents: usize,
    /// Documents that mention none of the rivers.
    pub skipped: Vec<String>,
}

/// Mean geo ordinal per document over the rivers it mentions, correlated
/// (Spearman, average-rank ties) with chronology rank.
///
/// A positive rho means later documents sit further east (higher ordinal).
pub fn geo_progression(
    corpus: &Corpus,
    matrix: &MentionMatrix,
    weighting: GeoWeighting,
) -> Result<ProgressionReport, MetricsError> {
    let rivers: Vec<(usize, f64)> = matrix
        .entity_ids()
        .iter()
        .enumerate()
        .filter_map(|(row, id)| {
            let e = corpus.entity(id)?;
            match (e.category, e.geo_ordinal) {
                (Category::River, Some(g)) => Some((row, f64::from(g))),
                _ => None,
            }
        })
        .collect();
    if rivers.is_empty() {
        return Err(MetricsError::NoRivers);
    }
    let mut documents = Vec::new();
    let mut skipped = Vec::new();
    for (d, id) in matrix.document_ids().iter().enumerate() {
        let mut weight = 0.0;
        let mut total = 0.0;
        let mut present = 0;
        for &(row, ordinal) in &rivers {
            let c = matrix.get(row, d);
            if c == 0 {
                continue;
            }
            present += 1;
            let w = match weighting {
                GeoWeighting::Presence => 1.0,
                GeoWeighting::Counts => c as f64,
            };
            weight += w;
            total += w * ordinal;
        }
        if present == 0 {
            skipped.push(id.clone());
            continue;
        }
        let rank = corpus
            .chronology
            .rank_of(id)
            .ok_or_else(|| MetricsError::MissingRank(id.clone()))?;
        documents.push(DocumentGeo {
            document: id.clone(),
            rank,
            mean_geo_ordinal: total / weight,
            rivers_present: present,
        });
    }
    if documents.len() < 3 {
        return Err(MetricsError::InsufficientDocuments(documents.len()));
    }
    documents.sort_by(|a, b| {
        a.rank
            .total_cmp(&b.rank)
            .then_with(|| a.document.cmp(&b.document))
    });
    let ranks: Vec<f64> = documents.iter().map(|d| d.rank).collect();
    let means: Vec<f64> = documents.iter().map(|d| d.mean_geo_ordinal).collect();
    let spearman_rho = spearman(&ranks, &means)?;
    Ok(ProgressionReport {
        weighting,
        n_documents: documents.len(),
        documents,
        spearman_rho,
        skipped,
    })
}

impl ProgressionReport {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Spearman rho (rank vs mean geo ordinal, {} weighting): {:.4} over {} documents\n",
            self.weighting, self.spearman_rho, self.n_documents
        );
        out.push_str("| document | rank | mean geo ordinal | rivers |\n|---|---|---|---|\n");
        for d in &self.documents {
            let _ = writeln!(
                out,
                "| {} | {} | {:.3} | {} |",
                d.document, d.rank, d.mean_geo_ordinal, d.rivers_present
            );
        }
        if !self.skipped.is_empty() {
            let _ = writeln!(out, "\nNo river mentions: {}", self.skipped.join(", "));
        }
        out
    }
}
