use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{adjusted_rand_index, MetricsError};
use crate::clustering::FlatClustering;
use crate::corpus::ChronologyReference;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDetail {
    pub stage: String,
    /// Clustered documents of this stage, in cluster order.
    pub documents: Vec<String>,
    /// Indices of the clusters these documents fall in, ascending.
    pub clusters: Vec<usize>,
    /// All documents of the stage share one cluster.
    pub fully_coclustered: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcordanceReport {
    pub adjusted_rand: f64,
    /// Fraction of same-stage document pairs placed in one cluster; `None`
    /// when no stage holds two documents.
    pub same_stage_cocluster_rate: Option<f64>,
    /// Fraction of cross-stage pairs placed in one cluster.
    pub cross_stage_cocluster_rate: Option<f64>,
    pub same_stage_pairs: usize,
    pub cross_stage_pairs: usize,
    pub per_stage: Vec<StageDetail>,
}

/// Compares a flat clustering with the stage partition of `reference`.
pub fn concordance(
    flat: &FlatClustering,
    reference: &ChronologyReference,
) -> Result<ConcordanceReport, MetricsError> {
    let mut docs = Vec::new();
    for (c, cluster) in flat.clusters.iter().enumerate() {
        for d in cluster {
            let stage = reference
                .stage_of(d)
                .ok_or_else(|| MetricsError::MissingStage(d.clone()))?;
            let s = reference
                .stage_index(stage)
                .ok_or_else(|| MetricsError::MissingStage(d.clone()))?;
            docs.push((d.clone(), c, s));
        }
    }
    let clusters: Vec<usize> = docs.iter().map(|x| x.1).collect();
    let stages: Vec<usize> = docs.iter().map(|x| x.2).collect();
    let adjusted_rand = adjusted_rand_index(&clusters, &stages)?;

    let (mut same, mut same_co, mut cross, mut cross_co) = (0usize, 0usize, 0usize, 0usize);
    for i in 0..docs.len() {
        for j in (i + 1)..docs.len() {
            let co = docs[i].1 == docs[j].1;
            if docs[i].2 == docs[j].2 {
                same += 1;
                same_co += usize::from(co);
            } else {
                cross += 1;
                cross_co += usize::from(co);
            }
        }
    }
    let rate = |hits: usize, total: usize| (total > 0).then(|| hits as f64 / total as f64);

    let per_stage = reference
        .stages
        .iter()
        .enumerate()
        .filter_map(|(s, name)| {
            let members: Vec<&(String, usize, usize)> = docs.iter().filter(|x| x.2 == s).collect();
            if members.is_empty() {
                return None;
            }
            let mut cl: Vec<usize> = members.iter().map(|x| x.1).collect();
            cl.sort_unstable();
            cl.dedup();
            Some(StageDetail {
                stage: name.clone(),
                documents: members.iter().map(|x| x.0.clone()).collect(),
                fully_coclustered: cl.len() == 1,
                clusters: cl,
            })
        })
        .collect();

    Ok(ConcordanceReport {
        adjusted_rand,
        same_stage_cocluster_rate: rate(same_co, same),
        cross_stage_cocluster_rate: rate(cross_co, cross),
        same_stage_pairs: same,
        cross_stage_pairs: cross,
        per_stage,
    })
}

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

impl ConcordanceReport {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "| metric | value |\n|---|---|");
        let _ = writeln!(out, "| adjusted Rand index | {:.4} |", self.adjusted_rand);
        let _ = writeln!(
            out,
            "| same-stage co-cluster rate | {} ({} pairs) |",
            fmt_opt(self.same_stage_cocluster_rate),
            self.same_stage_pairs
        );
        let _ = writeln!(
            out,
            "| cross-stage co-cluster rate | {} ({} pairs) |",
            fmt_opt(self.cross_stage_cocluster_rate),
            self.cross_stage_pairs
        );
        let _ = writeln!(
            out,
            "\n| stage | documents | clusters | together |\n|---|---|---|---|"
        );
        for s in &self.per_stage {
            let cl: Vec<String> = s.clusters.iter().map(|c| (c + 1).to_string()).collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                s.stage,
                s.documents.join(", "),
                cl.join(", "),
                if s.fully_coclustered { "yes" } else { "no" }
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::ClusteringOrigin;

    fn flat(clusters: &[&[&str]]) -> FlatClustering {
        FlatClustering {
            clusters: clusters
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect())
                .collect(),
            origin: ClusteringOrigin::Kmeans,
            wcss: None,
        }
    }

    #[test]
    fn stage_partition_scores_one() {
        let t = ChronologyReference::talageri();
        let f = flat(&[
            &["M6", "M3", "M7"],
            &["M4", "M2"],
            &["M5", "M8", "M1", "M9", "M10"],
        ]);
        let r = concordance(&f, &t).unwrap();
        assert_eq!(r.adjusted_rand, 1.0);
        assert_eq!(r.same_stage_cocluster_rate, Some(1.0));
        assert_eq!(r.cross_stage_cocluster_rate, Some(0.0));
        assert!(r.per_stage.iter().all(|s| s.fully_coclustered));
    }

    #[test]
    fn single_cluster() {
        let t = ChronologyReference::talageri();
        let all: Vec<&str> = vec!["M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "M9", "M10"];
        let r = concordance(&flat(&[&all]), &t).unwrap();
        assert_eq!(r.same_stage_cocluster_rate, Some(1.0));
        assert_eq!(r.adjusted_rand, 0.0);
    }

    #[test]
    fn missing_stage() {
        let t = ChronologyReference::talageri();
        assert_eq!(
            concordance(&flat(&[&["M1", "X"]]), &t).unwrap_err(),
            MetricsError::MissingStage("X".into())
        );
    }

    #[test]
    fn markdown_has_rows() {
        let t = ChronologyReference::talageri();
        let r = concordance(&flat(&[&["M6", "M3"], &["M4", "M1"]]), &t).unwrap();
        let md = r.to_markdown();
        assert!(md.contains("| early | M6, M3 | 1 | yes |"));
        assert!(md.contains("| middle | M4 | 2 | yes |"));
    }
}
