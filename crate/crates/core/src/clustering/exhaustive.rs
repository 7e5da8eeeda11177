use super::kmeans::{points, Normalization, PointMetric};
use super::{wcss_of, ClusterError, ClusteringOrigin, FlatClustering};
use crate::corpus::MentionMatrix;

/// Largest document count accepted by the exhaustive search.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Minimum-WCSS partition of the documents into at most `k` nonempty
/// clusters, found by enumerating every set partition.
///
/// Partitions are visited as restricted growth strings in lexicographic
/// order and only a strictly smaller WCSS replaces the incumbent, so ties
/// resolve to the lexicographically smallest encoding.
pub fn exhaustive_optimum(
    matrix: &MentionMatrix,
    k: usize,
) -> Result<FlatClustering, ClusterError> {
    let pts = points(matrix, PointMetric::Counts, Normalization::None);
    exhaustive_optimum_points(matrix.document_ids(), &pts, k)
}

pub fn exhaustive_optimum_points(
    ids: &[String],
    points: &[Vec<f64>],
    k: usize,
) -> Result<FlatClustering, ClusterError> {
    let n = points.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(ClusterError::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if k < 1 || k > n {
        return Err(ClusterError::BadK { k, n });
    }
    let mut rgs = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut groups = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            groups[b].push(i);
        }
        let w = wcss_of(points, &groups);
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, rgs.clone()));
        }
        if !next_rgs(&mut rgs, k) {
            break;
        }
    }
    let (w, labels) = best.expect("at least one partition");
    let blocks = labels.iter().max().map_or(0, |m| m + 1);
    let mut clusters = vec![Vec::new(); blocks];
    for (i, &b) in labels.iter().enumerate() {
        clusters[b].push(ids[i].clone());
    }
    Ok(FlatClustering {
        clusters,
        origin: ClusteringOrigin::Oracle,
        wcss: Some(w),
    })
}

/// Advances to the next restricted growth string with values below `k`.
/// `rgs[0]` stays 0 and each entry is at most one more than the maximum
/// before it.
fn next_rgs(rgs: &mut [usize], k: usize) -> bool {
    let n = rgs.len();
    for i in (1..n).rev() {
        let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
        if rgs[i] <= prefix_max && rgs[i] + 1 < k {
            rgs[i] += 1;
            for x in &mut rgs[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    fn count_partitions(n: usize, k: usize) -> usize {
        let mut rgs = vec![0; n];
        let mut c = 1;
        while next_rgs(&mut rgs, k) {
            c += 1;
        }
        c
    }

    #[test]
    fn enumeration_counts_match_stirling_sums() {
        // S(4,1) + S(4,2) = 1 + 7
        assert_eq!(count_partitions(4, 2), 8);
        // Bell(5)
        assert_eq!(count_partitions(5, 5), 52);
        // S(6,1) + S(6,2) + S(6,3) = 1 + 31 + 90
        assert_eq!(count_partitions(6, 3), 122);
    }

    #[test]
    fn two_points_two_clusters() {
        let f = exhaustive_optimum_points(&ids(2), &[vec![0.0], vec![3.0]], 2).unwrap();
        assert_eq!(f.clusters.len(), 2);
        assert_eq!(f.wcss, Some(0.0));
    }

    #[test]
    fn collinear_example() {
        let f = exhaustive_optimum_points(&ids(3), &[vec![0.0], vec![1.0], vec![10.0]], 2).unwrap();
        assert_eq!(f.clusters, vec![vec!["p0", "p1"], vec!["p2"]]);
        assert_eq!(f.wcss, Some(0.5));
    }

    #[test]
    fn guards() {
        let pts = vec![vec![0.0]; 13];
        assert!(matches!(
            exhaustive_optimum_points(&ids(13), &pts, 2),
            Err(ClusterError::TooLarge { n: 13, .. })
        ));
        assert!(matches!(
            exhaustive_optimum_points(&ids(2), &pts[..2], 3),
            Err(ClusterError::BadK { .. })
        ));
    }
}
