//! Independent test oracles. Nothing here calls into the algorithms under
//! test; the acceptance suite in the cli crate includes this file too.
#![allow(dead_code)]

use mandala_core::clustering::Linkage;

pub const FIXTURE_ENTITIES: &str = include_str!("../../../../data/fixture/entities.csv");
pub const FIXTURE_DOCUMENTS: &str = include_str!("../../../../data/fixture/documents.csv");
pub const FIXTURE_MENTIONS: &str = include_str!("../../../../data/fixture/mentions.csv");

/// One merge as the oracle sees it: the two leaf sets (left holds the
/// smaller leaf index) and the height.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleMerge {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub height: f64,
}

/// Textbook agglomeration: every step rescans all cluster pairs and
/// recomputes linkage from the leaf distances.
pub fn naive_agglomerate(d: &[Vec<f64>], linkage: Linkage) -> Vec<OracleMerge> {
    let mut clusters: Vec<Vec<usize>> = (0..d.len()).map(|i| vec![i]).collect();
    let mut merges = Vec::new();
    while clusters.len() > 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let mut dists = Vec::new();
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        dists.push(d[i][j]);
                    }
                }
                let h = match linkage {
                    Linkage::Single => dists.iter().cloned().fold(f64::INFINITY, f64::min),
                    Linkage::Complete => dists.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                    Linkage::Average => dists.iter().sum::<f64>() / dists.len() as f64,
                };
                let (ma, mb) = (clusters[a][0], clusters[b][0]);
                let key = (ma.min(mb), ma.max(mb));
                let better = match &best {
                    None => true,
                    Some((bh, bk, _, _)) => h < *bh || (h == *bh && key < *bk),
                };
                if better {
                    best = Some((h, key, a, b));
                }
            }
        }
        let (h, _, a, b) = best.unwrap();
        let (x, y) = (clusters[a].clone(), clusters[b].clone());
        let (left, right) = if x[0] < y[0] { (x, y) } else { (y, x) };
        let mut joined: Vec<usize> = left.iter().chain(&right).copied().collect();
        joined.sort();
        clusters.remove(b);
        clusters.remove(a);
        clusters.push(joined);
        merges.push(OracleMerge {
            left,
            right,
            height: h,
        });
    }
    merges
}

/// Minimum within-cluster sum of squares over every labelling of the
/// points with at most `k` labels.
pub fn brute_force_min_wcss(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let mut total = 0.0;
        for c in 0..k {
            let members: Vec<&Vec<f64>> = (0..n)
                .filter(|&i| labels[i] == c)
                .map(|i| &points[i])
                .collect();
            if members.is_empty() {
                continue;
            }
            let dim = members[0].len();
            for j in 0..dim {
                let mean = members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64;
                total += members.iter().map(|p| (p[j] - mean).powi(2)).sum::<f64>();
            }
        }
        best = best.min(total);
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// ARI from raw pair counts: agreements over all item pairs, then the
/// Hubert-Arabie expectation correction.
pub fn pair_counting_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        for j in (i + 1)..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1,
                (true, false) => only_a += 1,
                (false, true) => only_b += 1,
                (false, false) => neither += 1,
            }
        }
    }
    let total = (both + only_a + only_b + neither) as f64;
    let sa = (both + only_a) as f64;
    let sb = (both + only_b) as f64;
    let expected = sa * sb / total;
    let max = (sa + sb) / 2.0;
    if max == expected {
        return if both as f64 == expected { 1.0 } else { 0.0 };
    }
    (both as f64 - expected) / (max - expected)
}

/// Spearman rho by the classic formula; valid only without ties.
pub fn spearman_no_ties(x: &[f64], y: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = (pos + 1) as f64;
        }
        r
    };
    let (rx, ry) = (rank(x), rank(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}
