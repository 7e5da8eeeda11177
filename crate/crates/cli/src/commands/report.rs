use std::fmt::Write;

use mandala_core::chronometrics::{
    concordance, geo_progression, reproduce_kmeans, CoclusterSearch, ConcordanceReport,
    KMeansReproduction, MetricsError, PersistenceReport, ProgressionReport,
};
use mandala_core::clustering::{agglomerate, kmeans};
use mandala_core::similarity::similarity_matrix;
use mandala_core::{Corpus, FlatClustering, GridNetwork, SimilarityMatrix, TraceSummary};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::cluster::{
    cocluster_markdown, format_clusters, pair_search, reproduction_markdown, DendrogramJson,
    KMeansJson,
};
use super::grid::{run_grid, style};
use super::{digest, load, selection, slice, InputDigest, Outcome};
use crate::args::{AxisMode, Format};
use crate::config::Settings;
use crate::error::CliError;
use crate::output::{read, to_json, Artifacts};

/// Everything that shapes the report except the seed and the output
/// location. Input files enter by content, not by path.
#[derive(Serialize)]
struct HashedConfig<'a> {
    inputs: &'a [InputDigest],
    slice: &'a crate::config::SliceSpec,
    analysis: serde_json::Value,
    axis: AxisMode,
    geo_weighting: String,
    style: Option<InputDigest>,
    formats: Vec<Format>,
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    config_hash: String,
    seed: u64,
    inputs: &'a [InputDigest],
    corpus: CorpusSummary,
    slice: SliceSummary,
    similarity: &'a SimilarityMatrix,
    agglomerative: Agglomerative<'a>,
    kmeans: KMeansSection<'a>,
    grid: GridSection<'a>,
    progression: Section<ProgressionReport>,
    reproduction: Reproduction,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct CorpusSummary {
    entities: usize,
    documents: usize,
    matrix_rows: usize,
    chronology: String,
    stages: Vec<String>,
}

#[derive(Serialize)]
struct SliceSummary {
    entities: Vec<String>,
    documents: Vec<String>,
    dropped_documents: Vec<String>,
}

#[derive(Serialize)]
struct Agglomerative<'a> {
    dendrogram: DendrogramJson<'a>,
    cut: FlatClustering,
    concordance: Section<ConcordanceReport>,
}

#[derive(Serialize)]
struct KMeansSection<'a> {
    result: KMeansJson<'a>,
    concordance: Section<ConcordanceReport>,
}

#[derive(Serialize)]
struct GridSection<'a> {
    axis_mode: AxisMode,
    network: &'a GridNetwork,
    excluded_lanes: &'a [String],
    traces: &'a [TraceSummary],
    persistence: &'a PersistenceReport,
}

#[derive(Serialize)]
struct Reproduction {
    #[serde(skip_serializing_if = "Option::is_none")]
    kmeans: Option<KMeansReproduction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocluster: Option<CoclusterSearch>,
}

/// A report section that may be unavailable for this corpus.
#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum Section<T> {
    Computed(T),
    Skipped(String),
}

fn concordance_section(corpus: &Corpus, flat: &FlatClustering) -> Section<ConcordanceReport> {
    if corpus.chronology.is_empty() {
        return Section::Skipped("the corpus has no chronology".into());
    }
    match concordance(flat, &corpus.chronology) {
        Ok(r) => Section::Computed(r),
        Err(e) => Section::Skipped(e.to_string()),
    }
}

fn config_hash(settings: &Settings, inputs: &[InputDigest]) -> Result<String, CliError> {
    let mut analysis = serde_json::to_value(&settings.analysis).expect("settings serialize");
    if let Some(obj) = analysis.as_object_mut() {
        obj.remove("seed");
    }
    let style = match &settings.grid.style {
        Some(p) => Some(digest("style", p, &read(p)?)),
        None => None,
    };
    let view = HashedConfig {
        inputs,
        slice: &settings.slice,
        analysis,
        axis: settings.grid.axis,
        geo_weighting: settings.grid.geo_weighting.to_string(),
        style,
        formats: settings.formats.iter().copied().collect(),
    };
    let bytes = serde_json::to_vec(&view).expect("settings serialize");
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn section_md<T>(out: &mut String, s: &Section<T>, body: impl Fn(&T) -> String) {
    match s {
        Section::Computed(v) => out.push_str(&body(v)),
        Section::Skipped(why) => {
            let _ = writeln!(out, "Not computed: {why}");
        }
    }
}

fn markdown(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Chronology analysis report\n");
    let _ = writeln!(out, "- tool: {} {}", r.tool, r.version);
    let _ = writeln!(out, "- config hash: `{}`", r.config_hash);
    let _ = writeln!(out, "- seed: {}", r.seed);
    for i in r.inputs {
        let _ = writeln!(out, "- {} `{}` sha256 `{}`", i.role, i.file, i.sha256);
    }

    let _ = writeln!(out, "\n## Corpus\n");
    let _ = writeln!(
        out,
        "{} entities, {} documents, {} entities with mentions. Chronology: {} ({}).",
        r.corpus.entities,
        r.corpus.documents,
        r.corpus.matrix_rows,
        r.corpus.chronology,
        if r.corpus.stages.is_empty() {
            "no stages".to_string()
        } else {
            r.corpus.stages.join(" < ")
        }
    );
    let _ = writeln!(
        out,
        "\nSlice: {} entities over {} documents.",
        r.slice.entities.len(),
        r.slice.documents.len()
    );
    if !r.slice.dropped_documents.is_empty() {
        let _ = writeln!(
            out,
            "Dropped for lack of mentions: {}.",
            r.slice.dropped_documents.join(", ")
        );
    }

    let _ = writeln!(out, "\n## Cosine similarity\n");
    let ids = &r.similarity.document_ids;
    let _ = writeln!(out, "| | {} |", ids.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(ids.len()));
    for (i, id) in ids.iter().enumerate() {
        let row: Vec<String> = (0..ids.len())
            .map(|j| format!("{:.3}", r.similarity.get(i, j)))
            .collect();
        let _ = writeln!(out, "| {id} | {} |", row.join(" | "));
    }

    let a = &r.agglomerative;
    let _ = writeln!(
        out,
        "\n## Agglomerative clustering ({} linkage)\n",
        a.dendrogram.linkage
    );
    let _ = writeln!(out, "```\n{}\n```\n", a.dendrogram.newick);
    out.push_str("| step | left | right | height | size |\n|---|---|---|---|---|\n");
    let name = |node: usize| {
        a.dendrogram
            .leaves
            .get(node)
            .cloned()
            .unwrap_or_else(|| format!("#{}", node - a.dendrogram.leaves.len() + 1))
    };
    for (i, m) in a.dendrogram.merges.iter().enumerate() {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {:.6} | {} |",
            i + 1,
            name(m.left),
            name(m.right),
            m.height,
            m.size
        );
    }
    let _ = writeln!(
        out,
        "\nCut into {}: {}\n",
        a.cut.clusters.len(),
        format_clusters(&a.cut.clusters)
    );
    section_md(&mut out, &a.concordance, ConcordanceReport::to_markdown);

    let k = &r.kmeans.result;
    let _ = writeln!(
        out,
        "\n## k-means (k = {}, {} restarts, {} / {})\n",
        k.k, k.restarts, k.metric, k.normalization
    );
    let _ = writeln!(
        out,
        "{} (WCSS {}, best restart {})\n",
        format_clusters(&k.clustering.clusters),
        k.clustering
            .wcss
            .map_or_else(|| "n/a".into(), |w| format!("{w:.6}")),
        k.best_restart
    );
    section_md(
        &mut out,
        &r.kmeans.concordance,
        ConcordanceReport::to_markdown,
    );

    let g = &r.grid;
    let _ = writeln!(
        out,
        "\n## Grid network ({} axis)\n",
        format!("{:?}", g.axis_mode).to_lowercase()
    );
    let _ = writeln!(
        out,
        "{} documents x {} entities, {} nodes, {} trace edges.\n",
        g.network.axis_order.len(),
        g.network.lane_order.len(),
        g.network.nodes.len(),
        g.network.edges.len()
    );
    out.push_str(&g.persistence.to_markdown());

    let _ = writeln!(out, "\n## Geographic progression\n");
    section_md(&mut out, &r.progression, ProgressionReport::to_markdown);

    if let Some(rep) = &r.reproduction.kmeans {
        let _ = writeln!(out, "\n## k-means reproduction search\n");
        out.push_str(&reproduction_markdown(rep));
    }
    if let Some(s) = &r.reproduction.cocluster {
        let _ = writeln!(out, "\n## Co-clustering search\n");
        out.push_str(&cocluster_markdown(s));
    }
    if !r.notes.is_empty() {
        let _ = writeln!(out, "\n## Notes\n");
        for n in &r.notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    out
}

pub fn report(settings: &Settings) -> Result<Outcome, CliError> {
    let loaded = load(&settings.input)?;
    let corpus = &loaded.corpus;
    let spec = &settings.analysis;
    // Fail on a bad style file before doing any work.
    style(settings)?;

    let sliced = slice(corpus, &settings.slice)?;
    let matrix = &sliced.matrix;
    let mut notes = sliced.notes();
    let sim = similarity_matrix(matrix)?;

    let tree = agglomerate(&sim.to_distance(), spec.linkage)?;
    let cut = tree.cut(spec.k)?;
    let agglomerative = Agglomerative {
        concordance: concordance_section(corpus, &cut),
        dendrogram: DendrogramJson::new(&tree, spec.linkage),
        cut,
    };

    let km = kmeans(matrix, &spec.kmeans_config())?;
    let kmeans_section = KMeansSection {
        concordance: concordance_section(corpus, &km.clustering),
        result: KMeansJson::new(spec, matrix, &km),
    };

    let grid = run_grid(corpus, settings)?;
    notes.extend(grid.notes.iter().cloned());

    let sel = selection(corpus, &settings.slice)?;
    let filter = |d: &mandala_core::DocumentRecord| sel.accepts(d);
    let progression = match corpus.slice(Some(&[mandala_core::Category::River]), Some(&filter)) {
        Err(e) => Section::Skipped(format!("no river mentions to place ({e})")),
        Ok(rivers) => match geo_progression(corpus, &rivers.matrix, settings.grid.geo_weighting) {
            Ok(p) => Section::Computed(p),
            Err(MetricsError::Cluster(e)) => return Err(e.into()),
            Err(e) => Section::Skipped(e.to_string()),
        },
    };

    let reproduction = Reproduction {
        kmeans: spec
            .target
            .as_ref()
            .map(|t| reproduce_kmeans(matrix, t, &spec.kmeans_config()))
            .transpose()?,
        cocluster: spec
            .pair
            .as_ref()
            .map(|p| pair_search(&sim, p))
            .transpose()?,
    };

    let report = Report {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_hash: config_hash(settings, &loaded.digests)?,
        seed: spec.seed,
        inputs: &loaded.digests,
        corpus: CorpusSummary {
            entities: corpus.entities.len(),
            documents: corpus.documents.len(),
            matrix_rows: corpus.matrix.n_entities(),
            chronology: corpus.chronology.name.clone(),
            stages: corpus.chronology.stages.clone(),
        },
        slice: SliceSummary {
            entities: matrix.entity_ids().to_vec(),
            documents: matrix.document_ids().to_vec(),
            dropped_documents: sliced.dropped_documents.clone(),
        },
        similarity: &sim,
        agglomerative,
        kmeans: kmeans_section,
        grid: GridSection {
            axis_mode: settings.grid.axis,
            network: &grid.build.grid,
            excluded_lanes: &grid.build.excluded_lanes,
            traces: &grid.traces,
            persistence: &grid.persistence,
        },
        progression,
        reproduction,
        notes: notes.clone(),
    };

    let mut files = Artifacts::new(settings);
    files.text(Format::Json, "report.json", &to_json(&report))?;
    files.text(Format::Md, "report.md", &markdown(&report))?;
    let summary = format!(
        "report for {} documents (config {}, seed {})\n",
        matrix.n_documents(),
        &report.config_hash[..12],
        report.seed
    );
    Ok(Outcome {
        summary,
        notes,
        written: files.written,
    })
}
