//! Searches over the settings a published clustering leaves unstated.

use serde::{Deserialize, Serialize};

use super::{partition_ari, MetricsError};
use crate::clustering::{
    agglomerate, kmeans, removal_distance, FlatClustering, KMeansConfig, Linkage, Normalization,
    PointMetric,
};
use crate::corpus::MentionMatrix;
use crate::similarity::DistanceMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansTrial {
    pub metric: PointMetric,
    pub normalization: Normalization,
    pub partition: Vec<Vec<String>>,
    pub wcss: Option<f64>,
    /// ARI against the target partition.
    pub ari: f64,
    /// Same sets as the target, up to relabeling.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansReproduction {
    pub target: Vec<Vec<String>>,
    pub trials: Vec<KMeansTrial>,
    /// Index into `trials`: the first exact match, otherwise the highest
    /// ARI (ties to the earliest trial).
    pub best: usize,
    pub reproduced: bool,
}

fn canonical(partition: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut sets: Vec<Vec<String>> = partition
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

/// Runs k-means under every (metric, normalization) combination, keeping
/// the other settings of `base`, and compares each result with `target`.
/// `k` is taken from the target's cluster count.
pub fn reproduce_kmeans(
    matrix: &MentionMatrix,
    target: &[Vec<String>],
    base: &KMeansConfig,
) -> Result<KMeansReproduction, MetricsError> {
    let want = canonical(target);
    let mut trials = Vec::new();
    for metric in PointMetric::ALL {
        for normalization in Normalization::ALL {
            let config = KMeansConfig {
                k: target.len(),
                metric,
                normalization,
                ..base.clone()
            };
            let out = kmeans(matrix, &config)?;
            let partition = out.clustering.clusters;
            let ari = partition_ari(&partition, target)?;
            trials.push(KMeansTrial {
                exact: canonical(&partition) == want,
                metric,
                normalization,
                wcss: out.clustering.wcss,
                partition,
                ari,
            });
        }
    }
    let best = trials.iter().position(|t| t.exact).unwrap_or_else(|| {
        let mut best = 0;
        for (i, t) in trials.iter().enumerate() {
            if t.ari > trials[best].ari {
                best = i;
            }
        }
        best
    });
    Ok(KMeansReproduction {
        target: target.to_vec(),
        reproduced: trials[best].exact,
        trials,
        best,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoclusterTrial {
    pub linkage: Linkage,
    pub k: usize,
    pub removal_distance: usize,
    pub partition: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoclusterSearch {
    pub a: String,
    pub b: String,
    pub trials: Vec<CoclusterTrial>,
    /// First trial (linkage order, then k ascending) with the pair together,
    /// else the first trial with the smallest removal distance.
    pub best: usize,
    pub found: bool,
}

/// Looks for a linkage and cut size that put `a` and `b` in one cluster.
pub fn search_cocluster(
    dist: &DistanceMatrix,
    a: &str,
    b: &str,
    ks: &[usize],
) -> Result<CoclusterSearch, MetricsError> {
    let mut trials = Vec::new();
    for linkage in Linkage::ALL {
        let tree = agglomerate(dist, linkage)?;
        for &k in ks {
            let flat: FlatClustering = tree.cut(k)?;
            trials.push(CoclusterTrial {
                linkage,
                k,
                removal_distance: removal_distance(&flat, a, b)?,
                partition: flat.clusters,
            });
        }
    }
    if trials.is_empty() {
        return Err(MetricsError::InsufficientDocuments(0));
    }
    let mut best = 0;
    for (i, t) in trials.iter().enumerate() {
        if t.removal_distance < trials[best].removal_distance {
            best = i;
        }
    }
    Ok(CoclusterSearch {
        a: a.into(),
        b: b.into(),
        found: trials[best].removal_distance == 0,
        trials,
        best,
    })
}
