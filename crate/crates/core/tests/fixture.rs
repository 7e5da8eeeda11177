//! End-to-end checks on the 3 x 4 fixture corpus against hand-derived
//! values.

mod support;

use mandala_core::chronometrics::{adjusted_rand_index, concordance, persistence_report};
use mandala_core::clustering::{
    agglomerate, exhaustive_optimum, kmeans, parse_newick, ClusteringOrigin, KMeansConfig, Linkage,
};
use mandala_core::corpus::parse_corpus;
use mandala_core::gridnet::{build_grid, traces};
use mandala_core::similarity::{doc_vector, similarity_matrix};
use mandala_core::{ChronologyReference, Corpus, FlatClustering};
use support::*;

fn fixture() -> Corpus {
    parse_corpus(FIXTURE_ENTITIES, FIXTURE_DOCUMENTS, FIXTURE_MENTIONS).expect("fixture is valid")
}

fn ids(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn fixture_shape() {
    let c = fixture();
    assert_eq!(c.matrix.n_entities(), 3);
    assert_eq!(c.matrix.n_documents(), 4);
    assert_eq!(FIXTURE_MENTIONS.lines().skip(1).count(), 9);
    assert_eq!(doc_vector(&c.matrix, "D1").unwrap(), vec![2.0, 1.0, 0.0]);
    assert_eq!(c.chronology.name, "documents");
    assert_eq!(c.chronology.stages, ids(&["early", "late"]));
}

/// Leaf distances from the closed forms of the fixture cosines.
fn hand_distances() -> Vec<Vec<f64>> {
    let s = f64::sqrt;
    let d12 = 1.0 - 4.0 / s(30.0);
    let d13 = 1.0 - 2.0 / s(40.0);
    let d14 = 1.0;
    let d23 = 1.0 - s(3.0) / 2.0;
    let d24 = 1.0 - 1.0 / s(6.0);
    let d34 = 1.0 - 1.0 / s(2.0);
    vec![
        vec![0.0, d12, d13, d14],
        vec![d12, 0.0, d23, d24],
        vec![d13, d23, 0.0, d34],
        vec![d14, d24, d34, 0.0],
    ]
}

#[test]
fn similarity_matches_closed_forms() {
    let sim = similarity_matrix(&fixture().matrix).unwrap();
    let d = hand_distances();
    for (i, row) in d.iter().enumerate() {
        for (j, &dij) in row.iter().enumerate() {
            assert!((1.0 - sim.get(i, j) - dij).abs() < 1e-12, "({i},{j})");
        }
    }
    assert!((sim.get(0, 1) - 0.730297).abs() < 1e-6);
    assert!((sim.to_distance().get(0, 1) - 0.269703).abs() < 1e-6);
}

#[test]
fn average_linkage_dendrogram() {
    let sim = similarity_matrix(&fixture().matrix).unwrap();
    let tree = agglomerate(&sim.to_distance(), Linkage::Average).unwrap();
    let d = hand_distances();
    let h1 = d[1][2];
    let h2 = (d[1][3] + d[2][3]) / 2.0;
    let h3 = (d[0][1] + d[0][2] + d[0][3]) / 3.0;
    let m = tree.merges();
    assert_eq!((m[0].left, m[0].right), (1, 2));
    assert_eq!((m[1].left, m[1].right), (4, 3));
    assert_eq!((m[2].left, m[2].right), (0, 5));
    for (got, want) in m.iter().map(|x| x.height).zip([h1, h2, h3]) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    assert!((h1 - 0.134).abs() < 5e-4 && (h2 - 0.442).abs() < 5e-4 && (h3 - 0.651).abs() < 5e-4);

    let oracle = naive_agglomerate(&d, Linkage::Average);
    for (got, want) in m.iter().zip(&oracle) {
        assert_eq!(tree.members(got.left), want.left);
        assert_eq!(tree.members(got.right), want.right);
    }

    let flat = tree.cut(2).unwrap();
    assert_eq!(flat.clusters, vec![ids(&["D1"]), ids(&["D2", "D3", "D4"])]);
    assert_eq!(flat.origin, ClusteringOrigin::Cut);
}

#[test]
fn newick_text_and_round_trip() {
    let sim = similarity_matrix(&fixture().matrix).unwrap();
    let tree = agglomerate(&sim.to_distance(), Linkage::Average).unwrap();
    let nwk = tree.to_newick();
    // Rounded to three places the branch lengths read
    // (D1:0.651,((D2:0.134,D3:0.134):0.308,D4:0.442):0.209);
    let parsed = parse_newick(&nwk).unwrap();
    let rounded = |x: f64| (x * 1000.0).round() / 1000.0;
    assert_eq!(parsed.leaf_labels(), ids(&["D1", "D2", "D3", "D4"]));
    let root = &parsed.children;
    assert_eq!(rounded(root[0].length.unwrap()), 0.651);
    assert_eq!(rounded(root[1].length.unwrap()), 0.209);
    let inner = &root[1].children;
    assert_eq!(rounded(inner[0].length.unwrap()), 0.308);
    assert_eq!(rounded(inner[1].length.unwrap()), 0.442);
    assert_eq!(rounded(inner[0].children[0].length.unwrap()), 0.134);
    assert_eq!(parsed.clades(), tree.clades());
}

#[test]
fn kmeans_matches_enumeration() {
    let c = fixture();
    let config = KMeansConfig {
        k: 2,
        restarts: 10,
        ..KMeansConfig::default()
    };
    let got = kmeans(&c.matrix, &config).unwrap();
    let oracle = exhaustive_optimum(&c.matrix, 2).unwrap();
    assert_eq!(got.clustering.as_sets(), oracle.as_sets());
    let points: Vec<Vec<f64>> = (0..4)
        .map(|d| doc_vector(&c.matrix, &c.matrix.document_ids()[d]).unwrap())
        .collect();
    let brute = brute_force_min_wcss(&points, 2);
    assert!((got.clustering.wcss.unwrap() - brute).abs() < 1e-12);
    assert!((oracle.wcss.unwrap() - brute).abs() < 1e-12);
}

#[test]
fn fixture_traces() {
    let c = fixture();
    let order = c.chronology.ordered_documents();
    assert_eq!(order, ids(&["D1", "D2", "D3", "D4"]));
    let b = build_grid(&c.matrix.to_presence(), &order, c.matrix.entity_ids()).unwrap();
    assert_eq!(b.grid.nodes.len(), 8);
    assert_eq!(b.grid.edges.len(), 5);
    let t = traces(&b.grid);
    let rows: Vec<(&str, &str, &str, usize, usize)> = t
        .iter()
        .map(|t| {
            (
                t.entity.as_str(),
                t.first_doc.as_str(),
                t.last_doc.as_str(),
                t.presence_count,
                t.gap_count,
            )
        })
        .collect();
    assert_eq!(
        rows,
        vec![
            ("agni", "D1", "D2", 2, 0),
            ("indra", "D1", "D3", 3, 0),
            ("varuna", "D2", "D4", 3, 0),
        ]
    );
    let p = persistence_report(&t, &order);
    assert_eq!(p.first_appearance[0].entities, ids(&["agni", "indra"]));
    assert_eq!(p.first_appearance[1].entities, ids(&["varuna"]));
    assert_eq!((p.continuous_count, p.entity_count), (3, 3));
    assert!(p.constants.is_empty());
}

#[test]
fn reported_kmeans_partition_against_reference_stages() {
    let t = ChronologyReference::talageri();
    let flat = FlatClustering {
        clusters: vec![
            ids(&["M6", "M3", "M7", "M2"]),
            ids(&["M1", "M5", "M9", "M10"]),
            ids(&["M4", "M8"]),
        ],
        origin: ClusteringOrigin::Kmeans,
        wcss: None,
    };
    let r = concordance(&flat, &t).unwrap();
    let early = r.per_stage.iter().find(|s| s.stage == "early").unwrap();
    assert!(early.fully_coclustered);

    let docs: Vec<&String> = flat.clusters.iter().flatten().collect();
    let a: Vec<usize> = docs.iter().map(|d| flat.cluster_of(d).unwrap()).collect();
    let b: Vec<usize> = docs
        .iter()
        .map(|d| t.stage_index(t.stage_of(d).unwrap()).unwrap())
        .collect();
    let want = pair_counting_ari(&a, &b);
    assert!((r.adjusted_rand - want).abs() < 1e-12);
    assert!((adjusted_rand_index(&a, &b).unwrap() - want).abs() < 1e-12);
}
