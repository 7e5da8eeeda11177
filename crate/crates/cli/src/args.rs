use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mandala_core::chronometrics::GeoWeighting;
use mandala_core::clustering::{Linkage, Normalization, PointMetric};
use mandala_core::Category;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "mandala",
    version,
    about = "Cluster documents by entity mention counts and compare the result with a chronology"
)]
pub struct Cli {
    /// TOML run configuration; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for output files [default: out]
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Artifact formats to write, comma separated [default: all]
    #[arg(long, global = true, value_delimiter = ',', value_name = "FMT")]
    pub format: Vec<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse the corpus and list every validation problem.
    Validate(InputArgs),
    /// Similarity matrix plus agglomerative or k-means clustering.
    Cluster {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        slice: SliceArgs,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Presence grid network, its exports and the persistence report.
    Grid {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        slice: SliceArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Full pipeline into one JSON and one markdown report.
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        slice: SliceArgs,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args, Debug, Default, Clone)]
pub struct InputArgs {
    /// Directory holding entities.csv, documents.csv, mentions.csv and
    /// optionally chronology.csv.
    #[arg(long, value_name = "DIR")]
    pub corpus_dir: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub entities: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub documents: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub mentions: Option<PathBuf>,
    /// Chronology override (document_id,stage,rank).
    #[arg(long, value_name = "FILE")]
    pub chronology: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SliceArgs {
    /// Entity categories to keep (single, dual, group, river).
    #[arg(long, value_delimiter = ',')]
    pub category: Vec<Category>,
    /// Keep only family documents.
    #[arg(long)]
    pub family_only: bool,
    /// Leave a document out; repeatable.
    #[arg(long = "exclude-doc", value_name = "ID")]
    pub exclude_doc: Vec<String>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct AnalysisArgs {
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    #[arg(long)]
    pub linkage: Option<Linkage>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// k-means point vectors: counts or presence.
    #[arg(long)]
    pub metric: Option<PointMetric>,
    /// k-means per-document normalization: none, l1 or l2.
    #[arg(long)]
    pub normalize: Option<Normalization>,
    /// Reference partition for k-means, e.g. "M6,M3,M7,M2|M1,M5,M9,M10|M4,M8".
    /// Every (metric, normalization) pair is tried against it.
    #[arg(long, value_name = "PARTITION")]
    pub target: Option<String>,
    /// Two documents, e.g. "M1,M5": searches linkages and cuts k = 2..6 for
    /// one that puts them in the same cluster.
    #[arg(long, value_name = "A,B")]
    pub pair: Option<String>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub axis: Option<AxisMode>,
    /// JSON style file for the SVG export.
    #[arg(long, value_name = "FILE")]
    pub style: Option<PathBuf>,
    /// Weighting of river mentions in the geographic progression.
    #[arg(long, value_enum)]
    pub geo_weighting: Option<Weighting>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    #[default]
    Agglomerative,
    Kmeans,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisMode {
    /// Documents in chronology rank order.
    #[default]
    Chronology,
    /// Documents in corpus index order.
    Index,
    /// Rivers west to east across, documents in chronology order down.
    Geo,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    Presence,
    Counts,
}

impl From<Weighting> for GeoWeighting {
    fn from(w: Weighting) -> Self {
        match w {
            Weighting::Presence => GeoWeighting::Presence,
            Weighting::Counts => GeoWeighting::Counts,
        }
    }
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Md,
    Csv,
    Nwk,
    Dot,
    Graphml,
    Svg,
}

impl Format {
    pub const ALL: [Format; 7] = [
        Format::Json,
        Format::Md,
        Format::Csv,
        Format::Nwk,
        Format::Dot,
        Format::Graphml,
        Format::Svg,
    ];
}
