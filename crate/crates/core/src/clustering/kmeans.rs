//! Lloyd's k-means with deterministic farthest-first seeding and restarts.
//!
//! Restart `r` draws its starting point from a ChaCha8 stream seeded with
//! `seed + r`, then picks each further initial centroid as the point
//! farthest from those already chosen (ties to the lowest index). Restarts
//! run in parallel; the winner is the lowest WCSS, ties to the lowest
//! restart index, so the result does not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{centroid, sq_dist, wcss_of, ClusterError, ClusteringOrigin, FlatClustering};
use crate::corpus::MentionMatrix;

pub const DEFAULT_SEED: u64 = 1729;

/// Which document vectors k-means clusters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointMetric {
    #[default]
    Counts,
    Presence,
}

/// Per-document rescaling applied before clustering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    None,
    /// Divide by the column sum (mention shares).
    L1,
    /// Divide by the Euclidean norm.
    L2,
}

macro_rules! str_enum {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $t {
            pub fn as_str(self) -> &'static str {
                match self { $(<$t>::$v => $s),* }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($s => Ok(<$t>::$v),)*
                    other => Err(format!("unknown value {other:?}")),
                }
            }
        }
    };
}

str_enum!(PointMetric { Counts => "counts", Presence => "presence" });
str_enum!(Normalization { None => "none", L1 => "l1", L2 => "l2" });

impl PointMetric {
    pub const ALL: [PointMetric; 2] = [PointMetric::Counts, PointMetric::Presence];
}

impl Normalization {
    pub const ALL: [Normalization; 3] = [Normalization::None, Normalization::L1, Normalization::L2];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub metric: PointMetric,
    pub normalization: Normalization,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            k: 3,
            restarts: 10,
            seed: DEFAULT_SEED,
            max_iters: 100,
            metric: PointMetric::Counts,
            normalization: Normalization::None,
        }
    }
}

/// One restart's trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KMeansRun {
    pub restart: usize,
    /// Index of the seed-selected first centroid.
    pub start: usize,
    pub labels: Vec<usize>,
    pub wcss: f64,
    pub iterations: usize,
    pub converged: bool,
    /// WCSS of the partition after seeding and after every Lloyd update.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KMeansOutcome {
    pub clustering: FlatClustering,
    pub best_restart: usize,
    pub runs: Vec<KMeansRun>,
}

/// Document column vectors under the chosen metric and normalization.
pub fn points(
    matrix: &MentionMatrix,
    metric: PointMetric,
    normalization: Normalization,
) -> Vec<Vec<f64>> {
    (0..matrix.n_documents())
        .map(|d| {
            let mut v: Vec<f64> = (0..matrix.n_entities())
                .map(|e| {
                    let c = matrix.get(e, d);
                    match metric {
                        PointMetric::Counts => c as f64,
                        PointMetric::Presence => f64::from(u8::from(c >= 1)),
                    }
                })
                .collect();
            let scale = match normalization {
                Normalization::None => 1.0,
                Normalization::L1 => v.iter().sum(),
                Normalization::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            };
            if scale > 0.0 && scale != 1.0 {
                for x in &mut v {
                    *x /= scale;
                }
            }
            v
        })
        .collect()
}

/// k-means over the documents of `matrix`.
pub fn kmeans(
    matrix: &MentionMatrix,
    config: &KMeansConfig,
) -> Result<KMeansOutcome, ClusterError> {
    let pts = points(matrix, config.metric, config.normalization);
    kmeans_points(matrix.document_ids(), &pts, config)
}

/// k-means over arbitrary labelled points (metric and normalization in
/// `config` are ignored).
pub fn kmeans_points(
    ids: &[String],
    points: &[Vec<f64>],
    config: &KMeansConfig,
) -> Result<KMeansOutcome, ClusterError> {
    let n = points.len();
    if config.k < 1 || config.k > n {
        return Err(ClusterError::BadK { k: config.k, n });
    }
    if config.restarts == 0 {
        return Err(ClusterError::NoRestarts);
    }
    let runs: Vec<KMeansRun> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
            let start = rng.random_range(0..n);
            lloyd(points, config.k, start, config.max_iters).map(|mut run| {
                run.restart = r;
                run
            })
        })
        .collect::<Result<_, _>>()?;
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.wcss < runs[best].wcss {
            best = i;
        }
    }
    let chosen = &runs[best];
    let clusters = groups(&chosen.labels, config.k)
        .into_iter()
        .map(|g| g.into_iter().map(|i| ids[i].clone()).collect())
        .collect();
    Ok(KMeansOutcome {
        clustering: FlatClustering {
            clusters,
            origin: ClusteringOrigin::Kmeans,
            wcss: Some(chosen.wcss),
        },
        best_restart: best,
        runs,
    })
}

fn groups(labels: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut g = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        g[l].push(i);
    }
    g
}

fn farthest_first(points: &[Vec<f64>], k: usize, start: usize) -> Vec<Vec<f64>> {
    let mut chosen = vec![false; points.len()];
    chosen[start] = true;
    let mut centers = vec![points[start].clone()];
    let mut nearest: Vec<f64> = points.iter().map(|p| sq_dist(p, &points[start])).collect();
    while centers.len() < k {
        let mut pick = None;
        for i in 0..points.len() {
            if chosen[i] {
                continue;
            }
            if pick.is_none_or(|p: usize| nearest[i] > nearest[p]) {
                pick = Some(i);
            }
        }
        let p = pick.expect("k <= n leaves an unchosen point");
        chosen[p] = true;
        for (i, q) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(sq_dist(q, &points[p]));
        }
        centers.push(points[p].clone());
    }
    centers
}

fn assign(points: &[Vec<f64>], centers: &[Vec<f64>]) -> Vec<usize> {
    points
        .iter()
        .map(|p| {
            let mut best = 0;
            let mut best_d = sq_dist(p, &centers[0]);
            for (c, center) in centers.iter().enumerate().skip(1) {
                let d = sq_dist(p, center);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// Moves the point farthest from its centroid (within a cluster that can
/// spare it) into each empty cluster.
fn repair(
    points: &[Vec<f64>],
    centers: &mut [Vec<f64>],
    labels: &mut [usize],
) -> Result<(), ClusterError> {
    let k = centers.len();
    for _ in 0..k {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return Ok(());
        };
        let mut donor: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            if sizes[labels[i]] < 2 {
                continue;
            }
            let d = sq_dist(p, &centers[labels[i]]);
            if donor.is_none_or(|(_, bd)| d > bd) {
                donor = Some((i, d));
            }
        }
        let Some((i, _)) = donor else { break };
        labels[i] = empty;
        centers[empty] = points[i].clone();
    }
    if labels.len() >= k && (0..k).all(|c| labels.contains(&c)) {
        Ok(())
    } else {
        Err(ClusterError::EmptyClusterUnrecoverable)
    }
}

fn lloyd(
    points: &[Vec<f64>],
    k: usize,
    start: usize,
    max_iters: usize,
) -> Result<KMeansRun, ClusterError> {
    let mut centers = farthest_first(points, k, start);
    let mut labels = assign(points, &centers);
    repair(points, &mut centers, &mut labels)?;
    let mut history = vec![wcss_of(points, &groups(&labels, k))];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        let g = groups(&labels, k);
        let mut centers: Vec<Vec<f64>> = g.iter().map(|m| centroid(points, m)).collect();
        let mut next = assign(points, &centers);
        repair(points, &mut centers, &mut next)?;
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
        history.push(wcss_of(points, &groups(&labels, k)));
    }
    Ok(KMeansRun {
        restart: 0,
        start,
        wcss: *history.last().expect("seeded"),
        labels,
        iterations,
        converged,
        history,
    })
}
