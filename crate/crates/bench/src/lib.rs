//! Seeded instance generators shared by the benchmarks.

use mandala_core::{DistanceMatrix, MentionMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Symmetric matrix with zero diagonal and uniform [0, 1) entries.
pub fn random_distances(n: usize, seed: u64) -> DistanceMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.random();
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    DistanceMatrix::new(ids("d", n), d).expect("valid distances")
}

/// Sparse-ish count matrix in which every document has at least one mention.
pub fn random_counts(entities: usize, documents: usize, seed: u64) -> MentionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<u64>> = (0..entities)
        .map(|_| {
            (0..documents)
                .map(|_| {
                    if rng.random_bool(0.4) {
                        rng.random_range(1..60)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let picks: Vec<usize> = (0..documents)
        .map(|_| rng.random_range(0..entities))
        .collect();
    for (d, e) in picks.into_iter().enumerate() {
        rows[e][d] += 1;
    }
    MentionMatrix::from_rows(ids("e", entities), ids("d", documents), rows).expect("valid matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        assert_eq!(random_distances(5, 1), random_distances(5, 1));
        let m = random_counts(6, 10, 3);
        assert_eq!(m, random_counts(6, 10, 3));
        assert!((0..10).all(|d| m.column_total(d) > 0));
    }
}
