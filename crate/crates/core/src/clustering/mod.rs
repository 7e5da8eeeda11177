//! Agglomerative hierarchical clustering over document distances, and
//! k-means over document count vectors.
//!
//! Both produce a [`FlatClustering`]: an ordered partition of document ids.
//! Order matters, because [`removal_distance`] measures how many clusters
//! apart two documents sit.

mod agglomerative;
mod exhaustive;
mod kmeans;
mod newick;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::MentionMatrix;

pub use agglomerative::{agglomerate, Dendrogram, Linkage, Merge};
pub use exhaustive::{exhaustive_optimum, exhaustive_optimum_points, EXHAUSTIVE_LIMIT};
pub use kmeans::{
    kmeans, kmeans_points, points, KMeansConfig, KMeansOutcome, KMeansRun, Normalization,
    PointMetric, DEFAULT_SEED,
};
pub use newick::{parse_newick, NewickNode};

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("agglomeration needs at least 2 documents, got {0}")]
    TooFewDocuments(usize),
    #[error("k = {k} is out of range 1..={n}")]
    BadK { k: usize, n: usize },
    #[error("k-means could not repair an empty cluster")]
    EmptyClusterUnrecoverable,
    #[error("exhaustive search is limited to {limit} documents, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("clusters do not partition the matrix documents: {0}")]
    PartitionMismatch(String),
    #[error("unknown document {0}")]
    UnknownDocument(String),
    #[error("restarts must be at least 1")]
    NoRestarts,
    #[error("malformed Newick: {0}")]
    Newick(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusteringOrigin {
    Cut,
    Kmeans,
    Oracle,
}

/// An ordered partition of document ids.
///
/// For `Cut` the clusters follow dendrogram leaf order; for `Kmeans` and
/// `Oracle` they follow centroid (label) order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatClustering {
    pub clusters: Vec<Vec<String>>,
    pub origin: ClusteringOrigin,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wcss: Option<f64>,
}

impl FlatClustering {
    pub fn cluster_of(&self, document: &str) -> Option<usize> {
        self.clusters
            .iter()
            .position(|c| c.iter().any(|d| d == document))
    }

    pub fn n_documents(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    /// Cluster label per document.
    pub fn labels(&self) -> HashMap<&str, usize> {
        self.clusters
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |d| (d.as_str(), i)))
            .collect()
    }

    /// Order-free view of the partition, for comparing clusterings up to
    /// relabeling.
    pub fn as_sets(&self) -> Vec<Vec<String>> {
        let mut sets: Vec<Vec<String>> = self
            .clusters
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort();
                c
            })
            .collect();
        sets.sort();
        sets
    }
}

/// Index gap between the clusters holding `a` and `b`: 0 when they share a
/// cluster, 1 when "once removed", 2 when "twice removed".
///
/// This reads "removed" as distance along the ordered cluster list. Counting
/// hops in the dendrogram is another plausible reading and can differ.
pub fn removal_distance(flat: &FlatClustering, a: &str, b: &str) -> Result<usize, ClusterError> {
    let ia = flat
        .cluster_of(a)
        .ok_or_else(|| ClusterError::UnknownDocument(a.to_string()))?;
    let ib = flat
        .cluster_of(b)
        .ok_or_else(|| ClusterError::UnknownDocument(b.to_string()))?;
    Ok(ia.abs_diff(ib))
}

/// Sum over clusters of squared Euclidean distances from members to the
/// cluster mean, with documents as count-column points.
pub fn wcss(matrix: &MentionMatrix, flat: &FlatClustering) -> Result<f64, ClusterError> {
    let pts = points(matrix, PointMetric::Counts, Normalization::None);
    let assignment = partition_indices(matrix.document_ids(), &flat.clusters)?;
    Ok(wcss_of(&pts, &assignment))
}

/// Maps clusters of ids onto clusters of column indices, checking that they
/// partition `ids` exactly.
pub(crate) fn partition_indices(
    ids: &[String],
    clusters: &[Vec<String>],
) -> Result<Vec<Vec<usize>>, ClusterError> {
    let pos: HashMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, d)| (d.as_str(), i))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(clusters.len());
    for c in clusters {
        if c.is_empty() {
            return Err(ClusterError::PartitionMismatch("empty cluster".into()));
        }
        let mut idx = Vec::with_capacity(c.len());
        for d in c {
            let &i = pos.get(d.as_str()).ok_or_else(|| {
                ClusterError::PartitionMismatch(format!("{d} is not a matrix document"))
            })?;
            if !seen.insert(i) {
                return Err(ClusterError::PartitionMismatch(format!(
                    "{d} appears twice"
                )));
            }
            idx.push(i);
        }
        out.push(idx);
    }
    if seen.len() != ids.len() {
        return Err(ClusterError::PartitionMismatch(format!(
            "{} of {} documents covered",
            seen.len(),
            ids.len()
        )));
    }
    Ok(out)
}

pub(crate) fn wcss_of(points: &[Vec<f64>], clusters: &[Vec<usize>]) -> f64 {
    clusters
        .iter()
        .map(|members| {
            let mean = centroid(points, members);
            members
                .iter()
                .map(|&i| sq_dist(&points[i], &mean))
                .sum::<f64>()
        })
        .sum()
}

pub(crate) fn centroid(points: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let dim = points.first().map_or(0, Vec::len);
    let mut mean = vec![0.0; dim];
    for &i in members {
        for (m, x) in mean.iter_mut().zip(&points[i]) {
            *m += x;
        }
    }
    let n = members.len() as f64;
    for m in &mut mean {
        *m /= n;
    }
    mean
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
