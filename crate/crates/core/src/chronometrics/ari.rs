use std::collections::HashMap;

use super::MetricsError;

fn comb2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Adjusted Rand Index between two labelings of the same items.
///
/// Returns 1.0 when fewer than two items exist or when both labelings are
/// trivially identical (all-in-one or all-singletons on both sides).
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len() as u64;
    if n < 2 {
        return Ok(1.0);
    }
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    let mut cells: HashMap<(usize, usize), u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
        *cells.entry((x, y)).or_default() += 1;
    }
    let index = cells.values().map(|&c| comb2(c)).sum::<u64>() as f64;
    let sum_a = rows.values().map(|&c| comb2(c)).sum::<u64>() as f64;
    let sum_b = cols.values().map(|&c| comb2(c)).sum::<u64>() as f64;
    let total = comb2(n) as f64;
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// ARI between two partitions given as clusters of ids. Both must cover the
/// same set of ids.
pub fn partition_ari(a: &[Vec<String>], b: &[Vec<String>]) -> Result<f64, MetricsError> {
    let label = |p: &[Vec<String>]| -> Result<HashMap<String, usize>, MetricsError> {
        let mut m = HashMap::new();
        for (i, c) in p.iter().enumerate() {
            for d in c {
                if m.insert(d.clone(), i).is_some() {
                    return Err(MetricsError::PartitionMismatch(format!("{d} listed twice")));
                }
            }
        }
        Ok(m)
    };
    let la = label(a)?;
    let lb = label(b)?;
    if la.len() != lb.len() {
        return Err(MetricsError::PartitionMismatch(format!(
            "{} vs {} documents",
            la.len(),
            lb.len()
        )));
    }
    let mut ids: Vec<&String> = la.keys().collect();
    ids.sort();
    let mut xa = Vec::with_capacity(ids.len());
    let mut xb = Vec::with_capacity(ids.len());
    for id in ids {
        xa.push(la[id]);
        xb.push(
            *lb.get(id)
                .ok_or_else(|| MetricsError::PartitionMismatch(format!("{id} missing")))?,
        );
    }
    adjusted_rand_index(&xa, &xb)
}
