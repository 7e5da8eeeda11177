//! Acceptance suite: one line per criterion. Run with
//! `cargo test -p mandala-cli --test acceptance`.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mandala_core::chronometrics::{geo_progression, GeoWeighting};
use mandala_core::clustering::{
    agglomerate, exhaustive_optimum, kmeans, points, KMeansConfig, Linkage, Normalization,
    PointMetric,
};
use mandala_core::corpus::MentionRow;
use mandala_core::gridnet::build_grid;
use mandala_core::similarity::cosine;
use mandala_core::{Category, Corpus, DistanceMatrix, DocumentRecord, EntityRecord, MentionMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use support::*;

const HEIGHT_TOL: f64 = 1e-12;
const RUNTIME_LIMIT: Duration = Duration::from_secs(5);
const WCSS_REL_TOL: f64 = 1e-9;
const SCALE_TOL: f64 = 1e-12;
const RHO_TOL: f64 = 1e-12;
const SEPARATION: f64 = 4.0;

type Criterion = (&'static str, fn() -> Verdict);

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

#[allow(clippy::needless_range_loop)]
fn oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut checked = 0;
    for case in 0..200 {
        let n = rng.random_range(3..=8);
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v: f64 = rng.random();
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        let dm = DistanceMatrix::new(ids("p", n), d.iter().flatten().copied().collect()).unwrap();
        for linkage in Linkage::ALL {
            let tree = agglomerate(&dm, linkage).unwrap();
            let oracle = naive_agglomerate(&d, linkage);
            for (step, (m, o)) in tree.merges().iter().zip(&oracle).enumerate() {
                let mut l = tree.members(m.left);
                let mut r = tree.members(m.right);
                l.sort();
                r.sort();
                if l != o.left || r != o.right {
                    return Verdict::Fail(format!(
                        "case {case} {linkage}: topology differs at merge {step}"
                    ));
                }
                if (m.height - o.height).abs() > HEIGHT_TOL {
                    return Verdict::Fail(format!(
                        "case {case} {linkage}: height {} vs {} at merge {step}",
                        m.height, o.height
                    ));
                }
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= RUNTIME_LIMIT {
        return Verdict::Fail(format!("took {elapsed:?}"));
    }
    Verdict::Pass(format!(
        "{checked} dendrograms match the naive oracle in {elapsed:.2?}"
    ))
}

/// Count matrix whose document columns form `k` tight groups, with the
/// smallest cross-group distance over 4x the largest within-group distance.
fn separated_instance(rng: &mut ChaCha8Rng, k: usize) -> MentionMatrix {
    loop {
        let n = rng.random_range(k.max(3)..=8);
        let dim = 3;
        let centres: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..dim).map(|_| rng.random_range(0..200)).collect())
            .collect();
        let mut labels: Vec<usize> = (0..n)
            .map(|i| if i < k { i } else { rng.random_range(0..k) })
            .collect();
        labels.sort_by_key(|_| rng.random::<u32>());
        let cols: Vec<Vec<u64>> = labels
            .iter()
            .map(|&c| {
                centres[c]
                    .iter()
                    .map(|&x| x + rng.random_range(0..4))
                    .collect()
            })
            .collect();
        let dist = |a: &[u64], b: &[u64]| {
            a.iter()
                .zip(b)
                .map(|(&x, &y)| (x as f64 - y as f64).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let (mut intra, mut inter) = (0.0f64, f64::INFINITY);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist(&cols[i], &cols[j]);
                if labels[i] == labels[j] {
                    intra = intra.max(d);
                } else {
                    inter = inter.min(d);
                }
            }
        }
        if inter <= SEPARATION * intra.max(1e-9) || cols.iter().any(|c| c.iter().all(|&x| x == 0)) {
            continue;
        }
        let rows: Vec<Vec<u64>> = (0..dim)
            .map(|e| cols.iter().map(|c| c[e]).collect())
            .collect();
        return MentionMatrix::from_rows(ids("e", dim), ids("d", n), rows).unwrap();
    }
}

fn kmeans_optimality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut iterations = 0;
    for case in 0..50 {
        let k = 2 + case % 2;
        let m = separated_instance(&mut rng, k);
        let config = KMeansConfig {
            k,
            restarts: 10,
            ..KMeansConfig::default()
        };
        let got = kmeans(&m, &config).unwrap();
        for run in &got.runs {
            for (i, w) in run.history.windows(2).enumerate() {
                if w[1] > w[0] {
                    return Verdict::Fail(format!(
                        "case {case} restart {}: WCSS rose at iteration {i} ({} -> {})",
                        run.restart, w[0], w[1]
                    ));
                }
                iterations += 1;
            }
        }
        let best = exhaustive_optimum(&m, k).unwrap().wcss.unwrap();
        let brute = brute_force_min_wcss(&points(&m, PointMetric::Counts, Normalization::None), k);
        let w = got.clustering.wcss.unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        if rel(w, best) > WCSS_REL_TOL || rel(best, brute) > WCSS_REL_TOL {
            return Verdict::Fail(format!(
                "case {case}: kmeans {w}, exhaustive {best}, brute force {brute}"
            ));
        }
    }
    // Separated instances usually converge on the first pass, so the
    // monotonicity check also runs over overlapping random instances.
    for case in 0..50 {
        let (e, d) = (rng.random_range(1..=4), rng.random_range(6..=12));
        let rows: Vec<Vec<u64>> = (0..e)
            .map(|_| (0..d).map(|_| rng.random_range(1..20)).collect())
            .collect();
        let m = MentionMatrix::from_rows(ids("e", e), ids("d", d), rows).unwrap();
        let config = KMeansConfig {
            k: 2 + case % 3,
            restarts: 10,
            ..KMeansConfig::default()
        };
        for run in kmeans(&m, &config).unwrap().runs {
            for (i, w) in run.history.windows(2).enumerate() {
                if w[1] > w[0] {
                    return Verdict::Fail(format!(
                        "random case {case} restart {}: WCSS rose at iteration {i} ({} -> {})",
                        run.restart, w[0], w[1]
                    ));
                }
                iterations += 1;
            }
        }
    }
    Verdict::Pass(format!(
        "50 separated instances at the exhaustive optimum; {iterations} Lloyd steps nonincreasing"
    ))
}

fn similarity_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..1000 {
        let len = rng.random_range(1..=12);
        let mut draw = || -> Vec<f64> {
            let mut v: Vec<f64> = (0..len)
                .map(|_| {
                    if rng.random_bool(0.3) {
                        0.0
                    } else {
                        rng.random_range(0.0..50.0)
                    }
                })
                .collect();
            let i = rng.random_range(0..len);
            v[i] += 1.0;
            v
        };
        let (u, v) = (draw(), draw());
        let s = cosine(&u, &v).unwrap();
        if s != cosine(&v, &u).unwrap() {
            return Verdict::Fail(format!("case {case}: asymmetric"));
        }
        if !(0.0..=1.0).contains(&s) {
            return Verdict::Fail(format!("case {case}: {s} out of range"));
        }
        for alpha in [1e-6, 1.0, 1e6] {
            let scaled: Vec<f64> = u.iter().map(|x| x * alpha).collect();
            let t = cosine(&scaled, &v).unwrap();
            if (t - s).abs() > SCALE_TOL {
                return Verdict::Fail(format!("case {case}: alpha {alpha} moved {s} to {t}"));
            }
        }
        if cosine(&u, &u).unwrap() != 1.0 {
            return Verdict::Fail(format!("case {case}: identical vectors score below 1"));
        }
    }
    Verdict::Pass(
        "1000 pairs symmetric, in [0,1], scale invariant, self-similarity exactly 1".into(),
    )
}

fn grid_structure() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..100 {
        let (e, d) = (rng.random_range(1..=8), rng.random_range(1..=10));
        let rows: Vec<Vec<u64>> = (0..e)
            .map(|_| (0..d).map(|_| u64::from(rng.random_bool(0.5))).collect())
            .collect();
        let m = MentionMatrix::from_rows(ids("e", e), ids("d", d), rows.clone()).unwrap();
        let axis = ids("d", d);
        let rev: Vec<String> = axis.iter().rev().cloned().collect();
        let a = build_grid(&m, &axis, m.entity_ids()).unwrap().grid;
        let b = build_grid(&m, &rev, m.entity_ids()).unwrap().grid;
        let ones: u64 = rows.iter().flatten().sum();
        let edges: u64 = rows
            .iter()
            .map(|r| r.iter().sum::<u64>().saturating_sub(1))
            .sum();
        if a.nodes.len() as u64 != ones || a.edges.len() as u64 != edges {
            return Verdict::Fail(format!(
                "case {case}: counts {} / {}",
                a.nodes.len(),
                a.edges.len()
            ));
        }
        // Mirror: node (e, axis i) maps to (e, axis d-1-i); edges map
        // through the same bijection with endpoints swapped.
        for n in &a.nodes {
            let hit = b
                .nodes
                .iter()
                .filter(|x| {
                    x.entity == n.entity
                        && x.document == n.document
                        && x.axis_index == d - 1 - n.axis_index
                })
                .count();
            if hit != 1 {
                return Verdict::Fail(format!("case {case}: node {} has no mirror", n.key()));
            }
        }
        for x in &a.edges {
            if !b
                .edges
                .iter()
                .any(|y| y.entity == x.entity && y.from == x.to && y.to == x.from)
            {
                return Verdict::Fail(format!(
                    "case {case}: edge {}-{} has no mirror",
                    x.from, x.to
                ));
            }
        }
        if a.nodes.len() != b.nodes.len() || a.edges.len() != b.edges.len() {
            return Verdict::Fail(format!("case {case}: mirror sizes differ"));
        }
    }
    Verdict::Pass("100 binary grids: node and edge counts exact, axis reversal mirrors".into())
}

fn mandala(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mandala"))
        .args(args)
        .current_dir(workspace())
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const TARGET_KMEANS: &str = "M6,M3,M7,M2|M1,M5,M9,M10|M4,M8";

fn target_kmeans() -> Verdict {
    let data = workspace().join("data/rigveda/rivers");
    let (dir, label) = if data.join("mentions.csv").is_file() {
        (data, None)
    } else {
        (
            workspace().join("data/synthetic"),
            Some("data/rigveda/rivers not present"),
        )
    };
    let out = tempfile::tempdir().unwrap();
    let mut args = vec![
        "cluster",
        "--algo",
        "kmeans",
        "--k",
        "3",
        "--target",
        TARGET_KMEANS,
        "--format",
        "json",
    ];
    let (dir_s, out_s) = (dir.display().to_string(), out.path().display().to_string());
    args.extend(["--corpus-dir", &dir_s, "--out-dir", &out_s]);
    if label.is_some() {
        args.extend(["--category", "river"]);
    }
    let (code, _, err) = mandala(&args);
    if code != 0 {
        return Verdict::Fail(format!("cluster exited {code}: {err}"));
    }
    let r = read_json(&out.path().join("reproduction.json"));
    let best = &r["trials"][r["best"].as_u64().unwrap() as usize];
    let summary = format!(
        "best metric={} normalization={} ARI {:.4}",
        best["metric"].as_str().unwrap(),
        best["normalization"].as_str().unwrap(),
        best["ari"].as_f64().unwrap()
    );
    match (label, r["reproduced"].as_bool().unwrap()) {
        (Some(why), _) => Verdict::Skip(format!(
            "{why}; search recorded on the synthetic corpus ({summary})"
        )),
        (None, true) => Verdict::Pass(format!("partition reproduced ({summary})")),
        (None, false) => Verdict::Pass(format!("not reproduced; best match recorded ({summary})")),
    }
}

fn target_pair() -> Verdict {
    let data = workspace().join("data/rigveda/deities");
    let (dir, label) = if data.join("mentions.csv").is_file() {
        (data, None)
    } else {
        (
            workspace().join("data/synthetic"),
            Some("data/rigveda/deities not present"),
        )
    };
    let out = tempfile::tempdir().unwrap();
    let (dir_s, out_s) = (dir.display().to_string(), out.path().display().to_string());
    let args = [
        "cluster",
        "--category",
        "single",
        "--pair",
        "M1,M5",
        "--format",
        "json",
        "--corpus-dir",
        &dir_s,
        "--out-dir",
        &out_s,
    ];
    let (code, _, err) = mandala(&args);
    if code != 0 {
        return Verdict::Fail(format!("cluster exited {code}: {err}"));
    }
    let s = read_json(&out.path().join("cocluster_search.json"));
    let best = &s["trials"][s["best"].as_u64().unwrap() as usize];
    let summary = format!(
        "linkage {} k={} removal distance {}",
        best["linkage"].as_str().unwrap(),
        best["k"],
        best["removal_distance"]
    );
    match (label, s["found"].as_bool().unwrap()) {
        (Some(why), _) => Verdict::Skip(format!(
            "{why}; search recorded on the synthetic corpus ({summary})"
        )),
        (None, true) => Verdict::Pass(format!("M1 and M5 co-clustered ({summary})")),
        (None, false) => Verdict::Pass(format!("never co-clustered; closest recorded ({summary})")),
    }
}

fn river_corpus(ordinals: &[u32]) -> Corpus {
    let entities = (1..=ordinals.iter().max().copied().unwrap_or(1))
        .map(|o| EntityRecord {
            id: format!("r{o}"),
            display_name: format!("River {o}"),
            category: Category::River,
            members: vec![],
            geo_ordinal: Some(o),
            notes: None,
        })
        .collect();
    let documents = (0..ordinals.len())
        .map(|i| DocumentRecord {
            id: format!("d{i}"),
            index: i as u32 + 1,
            is_family: false,
            stage: Some("all".into()),
            rank: Some(i as f64 + 1.0),
        })
        .collect();
    let mentions = ordinals
        .iter()
        .enumerate()
        .map(|(i, &o)| MentionRow {
            entity_id: format!("r{o}"),
            document_id: format!("d{i}"),
            count: 1 + i as u64,
        })
        .collect();
    Corpus::from_records(entities, documents, mentions, None).unwrap()
}

fn progression() -> Verdict {
    let rho = |ordinals: &[u32]| {
        let c = river_corpus(ordinals);
        geo_progression(&c, &c.matrix, GeoWeighting::Presence)
            .unwrap()
            .spearman_rho
    };
    let monotone = rho(&[1, 2, 4, 5, 7, 9]);
    let worked = rho(&[2, 1, 3, 4]);
    if monotone != 1.0 {
        return Verdict::Fail(format!("monotone corpus gave {monotone}"));
    }
    if (worked - 0.8).abs() > RHO_TOL {
        return Verdict::Fail(format!("worked example gave {worked}"));
    }
    Verdict::Pass(format!(
        "monotone rho = {monotone}, worked example rho = {worked}"
    ))
}

fn tree_hash(dir: &Path) -> String {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    let mut h = Sha256::new();
    for f in files {
        h.update(f.file_name().unwrap().to_string_lossy().as_bytes());
        h.update([0]);
        h.update(fs::read(&f).unwrap());
        h.update([0]);
    }
    hex::encode(h.finalize())
}

fn determinism() -> Verdict {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut hashes = Vec::new();
    for out in [&a, &b] {
        let o = out.path().display().to_string();
        let (code, _, err) = mandala(&[
            "report",
            "--config",
            "data/fixture/run.toml",
            "--out-dir",
            &o,
        ]);
        if code != 0 {
            return Verdict::Fail(format!("report exited {code}: {err}"));
        }
        hashes.push(tree_hash(out.path()));
    }
    if hashes[0] != hashes[1] {
        return Verdict::Fail(format!("{} != {}", hashes[0], hashes[1]));
    }
    Verdict::Pass(format!("two report runs hash to {}", &hashes[0][..16]))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence (clustering)", oracle_equivalence),
        ("2 k-means optimality", kmeans_optimality),
        ("3 similarity properties", similarity_properties),
        ("4 grid structure", grid_structure),
        ("5 published k-means partition", target_kmeans),
        ("6 M1/M5 co-clustering", target_pair),
        ("7 progression metric", progression),
        ("8 report determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let (tag, detail) = match check() {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Skip(d) => ("SKIP", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {name}: {detail}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
