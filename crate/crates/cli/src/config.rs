//! Run configuration: an optional TOML file merged with command-line flags.
//!
//! ```toml
//! [input]
//! dir = "data/fixture"        # entities.csv, documents.csv, mentions.csv
//! chronology = "chron.csv"    # optional override
//!
//! [slice]
//! categories = ["single"]
//! family_only = false
//! exclude = ["M10"]
//!
//! [analysis]
//! algo = "agglomerative"      # or "kmeans"
//! linkage = "average"
//! k = 3
//! restarts = 10
//! seed = 1729
//! max_iters = 100
//! metric = "counts"           # or "presence"
//! normalize = "none"          # "l1", "l2"
//! target = [["M6", "M3"], ["M4", "M8"]]
//! pair = ["M1", "M5"]
//!
//! [grid]
//! axis = "chronology"         # "index", "geo"
//! style = "style.json"
//! geo_weighting = "presence"  # or "counts"
//!
//! [output]
//! dir = "out"
//! formats = ["json", "md", "csv", "nwk", "dot", "graphml", "svg"]
//! ```
//!
//! Relative paths in the file resolve against the file's directory; paths
//! given as flags resolve against the working directory.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use mandala_core::chronometrics::GeoWeighting;
use mandala_core::clustering::{KMeansConfig, Linkage, Normalization, PointMetric, DEFAULT_SEED};
use mandala_core::Category;
use serde::{Deserialize, Serialize};

use crate::args::{
    Algo, AnalysisArgs, AxisMode, Format, GridArgs, InputArgs, SliceArgs, Weighting,
};
use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub input: InputSection,
    #[serde(default)]
    pub slice: SliceSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    pub dir: Option<PathBuf>,
    pub entities: Option<PathBuf>,
    pub documents: Option<PathBuf>,
    pub mentions: Option<PathBuf>,
    pub chronology: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSection {
    pub categories: Option<Vec<Category>>,
    pub family_only: Option<bool>,
    pub exclude: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub algo: Option<Algo>,
    pub linkage: Option<Linkage>,
    pub k: Option<usize>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub max_iters: Option<usize>,
    pub metric: Option<PointMetric>,
    pub normalize: Option<Normalization>,
    pub target: Option<Vec<Vec<String>>>,
    pub pair: Option<(String, String)>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub axis: Option<AxisMode>,
    pub style: Option<PathBuf>,
    pub geo_weighting: Option<Weighting>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|message| CliError::Config {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(path) = p {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        fix(&mut self.input.dir);
        fix(&mut self.input.entities);
        fix(&mut self.input.documents);
        fix(&mut self.input.mentions);
        fix(&mut self.input.chronology);
        fix(&mut self.grid.style);
        fix(&mut self.output.dir);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputPaths {
    pub entities: PathBuf,
    pub documents: PathBuf,
    pub mentions: PathBuf,
    pub chronology: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SliceSpec {
    /// `None` keeps every category.
    pub categories: Option<Vec<Category>>,
    pub family_only: bool,
    pub exclude: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisSpec {
    pub algo: Algo,
    pub linkage: Linkage,
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub metric: PointMetric,
    pub normalization: Normalization,
    pub target: Option<Vec<Vec<String>>>,
    pub pair: Option<(String, String)>,
}

impl AnalysisSpec {
    pub fn kmeans_config(&self) -> KMeansConfig {
        KMeansConfig {
            k: self.k,
            restarts: self.restarts,
            seed: self.seed,
            max_iters: self.max_iters,
            metric: self.metric,
            normalization: self.normalization,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub axis: AxisMode,
    pub style: Option<PathBuf>,
    pub geo_weighting: GeoWeighting,
}

/// Fully resolved settings for one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub input: InputPaths,
    pub slice: SliceSpec,
    pub analysis: AnalysisSpec,
    pub grid: GridSpec,
    pub out_dir: PathBuf,
    pub formats: BTreeSet<Format>,
}

/// Flags gathered from whichever subcommand ran.
#[derive(Debug, Default)]
pub struct Flags {
    pub config: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
    pub input: InputArgs,
    pub slice: SliceArgs,
    pub analysis: AnalysisArgs,
    pub grid: GridArgs,
}

fn parse_partition(text: &str) -> Result<Vec<Vec<String>>, CliError> {
    let clusters: Vec<Vec<String>> = text
        .split('|')
        .map(|c| {
            c.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect::<Vec<_>>()
        })
        .collect();
    if clusters.iter().any(Vec::is_empty) {
        return Err(CliError::Usage(format!(
            "--target {text:?} has an empty cluster"
        )));
    }
    Ok(clusters)
}

fn parse_pair(text: &str) -> Result<(String, String), CliError> {
    match text.split(',').map(str::trim).collect::<Vec<_>>()[..] {
        [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(CliError::Usage(format!(
            "--pair expects two ids as A,B, got {text:?}"
        ))),
    }
}

impl Settings {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let mut config = match &flags.config {
            Some(path) => {
                let mut c = RunConfig::load(path)?;
                c.rebase(path.parent().unwrap_or(Path::new("")));
                c
            }
            None => RunConfig::default(),
        };
        let Flags {
            input,
            slice,
            analysis,
            grid,
            ..
        } = flags;

        let dir = input
            .corpus_dir
            .or(config.input.dir.take())
            .unwrap_or_else(|| PathBuf::from("."));
        let pick = |flag: Option<PathBuf>, conf: Option<PathBuf>, name: &str| {
            flag.or(conf).unwrap_or_else(|| dir.join(name))
        };
        let mut chronology = input.chronology.or(config.input.chronology.take());
        if chronology.is_none() {
            let default = dir.join("chronology.csv");
            if default.is_file() {
                chronology = Some(default);
            }
        }
        let input = InputPaths {
            entities: pick(input.entities, config.input.entities.take(), "entities.csv"),
            documents: pick(
                input.documents,
                config.input.documents.take(),
                "documents.csv",
            ),
            mentions: pick(input.mentions, config.input.mentions.take(), "mentions.csv"),
            chronology,
        };

        let slice = SliceSpec {
            categories: if slice.category.is_empty() {
                config.slice.categories
            } else {
                Some(slice.category)
            },
            family_only: slice.family_only || config.slice.family_only.unwrap_or(false),
            exclude: if slice.exclude_doc.is_empty() {
                config.slice.exclude.unwrap_or_default()
            } else {
                slice.exclude_doc
            },
        };

        let c = config.analysis;
        let target = match analysis.target {
            Some(t) => Some(parse_partition(&t)?),
            None => c.target,
        };
        let pair = match analysis.pair {
            Some(p) => Some(parse_pair(&p)?),
            None => c.pair,
        };
        let defaults = KMeansConfig::default();
        let analysis = AnalysisSpec {
            algo: analysis.algo.or(c.algo).unwrap_or_default(),
            linkage: analysis.linkage.or(c.linkage).unwrap_or_default(),
            k: analysis.k.or(c.k).unwrap_or(defaults.k),
            restarts: analysis
                .restarts
                .or(c.restarts)
                .unwrap_or(defaults.restarts),
            seed: analysis.seed.or(c.seed).unwrap_or(DEFAULT_SEED),
            max_iters: analysis
                .max_iters
                .or(c.max_iters)
                .unwrap_or(defaults.max_iters),
            metric: analysis.metric.or(c.metric).unwrap_or_default(),
            normalization: analysis.normalize.or(c.normalize).unwrap_or_default(),
            target,
            pair,
        };

        let g = config.grid;
        let grid = GridSpec {
            axis: grid.axis.or(g.axis).unwrap_or_default(),
            style: grid.style.or(g.style),
            geo_weighting: grid
                .geo_weighting
                .or(g.geo_weighting)
                .unwrap_or_default()
                .into(),
        };

        let formats: BTreeSet<Format> = if !flags.formats.is_empty() {
            flags.formats.into_iter().collect()
        } else if let Some(f) = config.output.formats {
            f.into_iter().collect()
        } else {
            Format::ALL.into_iter().collect()
        };

        Ok(Settings {
            input,
            slice,
            analysis,
            grid,
            out_dir: flags
                .out_dir
                .or(config.output.dir)
                .unwrap_or_else(|| PathBuf::from("out")),
            formats,
        })
    }

    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }
}
