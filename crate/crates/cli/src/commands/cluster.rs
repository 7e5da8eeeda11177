use std::fmt::Write;

use mandala_core::chronometrics::{
    reproduce_kmeans, search_cocluster, CoclusterSearch, KMeansReproduction,
};
use mandala_core::clustering::{agglomerate, kmeans, KMeansOutcome, Merge};
use mandala_core::corpus::MentionMatrix;
use mandala_core::similarity::similarity_matrix;
use mandala_core::{Dendrogram, FlatClustering, Linkage, SimilarityMatrix};
use serde::Serialize;

use super::{load, slice, Outcome};
use crate::args::{Algo, Format};
use crate::config::{AnalysisSpec, Settings};
use crate::error::CliError;
use crate::output::Artifacts;

/// Cut sizes searched by `--pair`.
pub(crate) const PAIR_CUTS: std::ops::RangeInclusive<usize> = 2..=6;

#[derive(Debug, Serialize)]
pub(crate) struct DendrogramJson<'a> {
    pub linkage: Linkage,
    pub leaves: &'a [String],
    pub merges: &'a [Merge],
    pub newick: String,
}

impl<'a> DendrogramJson<'a> {
    pub fn new(tree: &'a Dendrogram, linkage: Linkage) -> Self {
        Self {
            linkage,
            leaves: tree.leaves(),
            merges: tree.merges(),
            newick: tree.to_newick(),
        }
    }
}

#[derive(Debug, Serialize)]
pub(crate) struct KMeansJson<'a> {
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub metric: &'a str,
    pub normalization: &'a str,
    pub best_restart: usize,
    pub clustering: &'a FlatClustering,
    pub runs: Vec<RunJson>,
}

#[derive(Debug, Serialize)]
pub(crate) struct RunJson {
    pub restart: usize,
    pub start: String,
    pub wcss: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl<'a> KMeansJson<'a> {
    pub fn new(spec: &'a AnalysisSpec, matrix: &MentionMatrix, out: &'a KMeansOutcome) -> Self {
        Self {
            k: spec.k,
            restarts: spec.restarts,
            seed: spec.seed,
            max_iters: spec.max_iters,
            metric: spec.metric.as_str(),
            normalization: spec.normalization.as_str(),
            best_restart: out.best_restart,
            clustering: &out.clustering,
            runs: out
                .runs
                .iter()
                .map(|r| RunJson {
                    restart: r.restart,
                    start: matrix.document_ids()[r.start].clone(),
                    wcss: r.wcss,
                    iterations: r.iterations,
                    converged: r.converged,
                })
                .collect(),
        }
    }
}

pub(crate) fn format_clusters(clusters: &[Vec<String>]) -> String {
    clusters
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn pair_search(
    sim: &SimilarityMatrix,
    pair: &(String, String),
) -> Result<CoclusterSearch, CliError> {
    let n = sim.len();
    let ks: Vec<usize> = PAIR_CUTS.filter(|&k| k <= n).collect();
    Ok(search_cocluster(&sim.to_distance(), &pair.0, &pair.1, &ks)?)
}

pub(crate) fn reproduction_markdown(r: &KMeansReproduction) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Target: {}\n", format_clusters(&r.target));
    out.push_str("| metric | normalization | ARI | exact | partition |\n|---|---|---|---|---|\n");
    for t in &r.trials {
        let _ = writeln!(
            out,
            "| {} | {} | {:.4} | {} | {} |",
            t.metric,
            t.normalization,
            t.ari,
            if t.exact { "yes" } else { "no" },
            format_clusters(&t.partition)
        );
    }
    let best = &r.trials[r.best];
    let _ = writeln!(
        out,
        "\n{}: metric={}, normalization={}, ARI {:.4}",
        if r.reproduced {
            "Reproduced"
        } else {
            "Not reproduced; best match"
        },
        best.metric,
        best.normalization,
        best.ari
    );
    out
}

pub(crate) fn cocluster_markdown(s: &CoclusterSearch) -> String {
    let mut out = String::new();
    out.push_str("| linkage | k | removal distance | partition |\n|---|---|---|---|\n");
    for t in &s.trials {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            t.linkage,
            t.k,
            t.removal_distance,
            format_clusters(&t.partition)
        );
    }
    let best = &s.trials[s.best];
    let _ = writeln!(
        out,
        "\n{} and {} {} (linkage {}, k = {}, removal distance {})",
        s.a,
        s.b,
        if s.found {
            "share a cluster"
        } else {
            "never share a cluster; closest"
        },
        best.linkage,
        best.k,
        best.removal_distance
    );
    out
}

pub fn cluster(settings: &Settings) -> Result<Outcome, CliError> {
    let corpus = load(&settings.input)?.corpus;
    let sliced = slice(&corpus, &settings.slice)?;
    let matrix = &sliced.matrix;
    let sim = similarity_matrix(matrix)?;
    let spec = &settings.analysis;

    let mut files = Artifacts::new(settings);
    let mut summary = String::new();
    files.text(Format::Csv, "similarity.csv", &sim.to_csv())?;
    files.text(Format::Csv, "distance.csv", &sim.to_distance().to_csv())?;
    files.json("similarity.json", &sim)?;

    match spec.algo {
        Algo::Agglomerative => {
            let tree = agglomerate(&sim.to_distance(), spec.linkage)?;
            let flat = tree.cut(spec.k)?;
            files.text(
                Format::Nwk,
                "dendrogram.nwk",
                &format!("{}\n", tree.to_newick()),
            )?;
            files.json("dendrogram.json", &DendrogramJson::new(&tree, spec.linkage))?;
            files.json("clusters.json", &flat)?;
            let _ = writeln!(
                summary,
                "{} linkage over {} documents",
                spec.linkage,
                matrix.n_documents()
            );
            let _ = writeln!(summary, "{}", tree.to_newick());
            let _ = writeln!(
                summary,
                "k = {}: {}",
                spec.k,
                format_clusters(&flat.clusters)
            );
            if let Some(pair) = &spec.pair {
                let s = pair_search(&sim, pair)?;
                files.json("cocluster_search.json", &s)?;
                let md = cocluster_markdown(&s);
                files.text(Format::Md, "cocluster_search.md", &md)?;
                summary.push_str(md.lines().last().unwrap_or_default());
                summary.push('\n');
            }
        }
        Algo::Kmeans => {
            let out = kmeans(matrix, &spec.kmeans_config())?;
            files.json("clusters.json", &KMeansJson::new(spec, matrix, &out))?;
            let _ = writeln!(
                summary,
                "k-means k = {} ({} restarts, seed {}, {} / {}): {}",
                spec.k,
                spec.restarts,
                spec.seed,
                spec.metric,
                spec.normalization,
                format_clusters(&out.clustering.clusters)
            );
            if let Some(w) = out.clustering.wcss {
                let _ = writeln!(summary, "WCSS {w}");
            }
            if let Some(target) = &spec.target {
                let r = reproduce_kmeans(matrix, target, &spec.kmeans_config())?;
                files.json("reproduction.json", &r)?;
                let md = reproduction_markdown(&r);
                files.text(Format::Md, "reproduction.md", &md)?;
                summary.push_str(md.lines().last().unwrap_or_default());
                summary.push('\n');
            }
        }
    }
    Ok(Outcome {
        summary,
        notes: sliced.notes(),
        written: files.written,
    })
}
