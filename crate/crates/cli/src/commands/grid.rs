use mandala_core::chronometrics::{persistence_report, PersistenceReport};
use mandala_core::corpus::CorpusError;
use mandala_core::gridnet::{
    build_grid, export_dot, export_graphml, export_svg, traces, GridBuild, StyleOptions,
};
use mandala_core::{Category, Corpus, TraceSummary};

use super::{load, selection, Outcome};
use crate::args::{AxisMode, Format};
use crate::config::Settings;
use crate::error::CliError;
use crate::output::{read, Artifacts};

pub(crate) struct GridRun {
    pub build: GridBuild,
    pub traces: Vec<TraceSummary>,
    pub persistence: PersistenceReport,
    pub notes: Vec<String>,
}

/// Selected documents in chronology rank order; documents the chronology
/// does not rank follow in index order.
fn chronological(corpus: &Corpus, docs: &[String], notes: &mut Vec<String>) -> Vec<String> {
    let mut ranked: Vec<&String> = docs
        .iter()
        .filter(|d| corpus.chronology.rank_of(d).is_some())
        .collect();
    ranked.sort_by(|a, b| {
        let (ra, rb) = (corpus.chronology.rank_of(a), corpus.chronology.rank_of(b));
        ra.partial_cmp(&rb)
            .expect("ranks are finite")
            .then_with(|| a.cmp(b))
    });
    let unranked: Vec<&String> = docs
        .iter()
        .filter(|d| corpus.chronology.rank_of(d).is_none())
        .collect();
    if !unranked.is_empty() {
        let ids: Vec<&str> = unranked.iter().map(|s| s.as_str()).collect();
        notes.push(format!(
            "no chronology rank for {}; placed after ranked documents in index order",
            ids.join(", ")
        ));
    }
    ranked.into_iter().chain(unranked).cloned().collect()
}

pub(crate) fn run_grid(corpus: &Corpus, settings: &Settings) -> Result<GridRun, CliError> {
    let sel = selection(corpus, &settings.slice)?;
    let mut notes = Vec::new();
    let docs: Vec<String> = corpus
        .documents
        .iter()
        .filter(|d| sel.accepts(d))
        .map(|d| d.id.clone())
        .collect();

    let mode = settings.grid.axis;
    let categories: Option<Vec<Category>> = match (&settings.slice.categories, mode) {
        (None, AxisMode::Geo) => Some(vec![Category::River]),
        (c, _) => c.clone(),
    };
    let mut lanes: Vec<String> = corpus
        .matrix
        .entity_ids()
        .iter()
        .filter(|id| {
            categories.as_ref().is_none_or(|cats| {
                corpus
                    .entity(id)
                    .is_some_and(|e| cats.contains(&e.category))
            })
        })
        .cloned()
        .collect();

    let axis = match mode {
        AxisMode::Index => docs,
        AxisMode::Chronology | AxisMode::Geo => chronological(corpus, &docs, &mut notes),
    };
    if mode == AxisMode::Geo {
        let (with, without): (Vec<String>, Vec<String>) = lanes
            .into_iter()
            .partition(|id| corpus.entity(id).is_some_and(|e| e.geo_ordinal.is_some()));
        if !without.is_empty() {
            notes.push(format!(
                "no geo_ordinal for {}; left out of the geographic grid",
                without.join(", ")
            ));
        }
        lanes = with;
        lanes.sort_by_key(|id| (corpus.entity(id).and_then(|e| e.geo_ordinal), id.clone()));
    }
    if axis.is_empty() || lanes.is_empty() {
        return Err(CorpusError::EmptySlice {
            entities: lanes.len(),
            documents: axis.len(),
        }
        .into());
    }

    let build = build_grid(&corpus.matrix.to_presence(), &axis, &lanes)?;
    notes.extend(build.notes());
    if build.grid.lane_order.is_empty() {
        return Err(CorpusError::EmptySlice {
            entities: 0,
            documents: axis.len(),
        }
        .into());
    }
    let traces = traces(&build.grid);
    let persistence = persistence_report(&traces, &build.grid.axis_order);
    Ok(GridRun {
        build,
        traces,
        persistence,
        notes,
    })
}

/// Style from the `--style` file; geographic grids are transposed unless
/// the file says otherwise.
pub(crate) fn style(settings: &Settings) -> Result<StyleOptions, CliError> {
    let Some(path) = &settings.grid.style else {
        return Ok(StyleOptions {
            transpose: settings.grid.axis == AxisMode::Geo,
            ..StyleOptions::default()
        });
    };
    let text = read(path)?;
    let bad = |e: serde_json::Error| CliError::Config {
        path: path.clone(),
        message: e.to_string(),
    };
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
    let explicit = raw.get("transpose").is_some();
    let mut style: StyleOptions = serde_json::from_value(raw).map_err(bad)?;
    if !explicit {
        style.transpose = settings.grid.axis == AxisMode::Geo;
    }
    Ok(style)
}

pub fn grid(settings: &Settings) -> Result<Outcome, CliError> {
    let corpus = load(&settings.input)?.corpus;
    let style = style(settings)?;
    let run = run_grid(&corpus, settings)?;
    let g = &run.build.grid;

    let mut files = Artifacts::new(settings);
    files.text(Format::Dot, "grid.dot", &export_dot(g))?;
    files.text(Format::Graphml, "grid.graphml", &export_graphml(g))?;
    files.text(Format::Svg, "grid.svg", &export_svg(g, &style))?;
    files.json("traces.json", &run.traces)?;
    files.json("persistence.json", &run.persistence)?;
    files.text(Format::Md, "persistence.md", &run.persistence.to_markdown())?;

    let summary = format!(
        "grid: {} documents x {} entities, {} nodes, {} trace edges\n{} of {} traces continuous\n",
        g.axis_order.len(),
        g.lane_order.len(),
        g.nodes.len(),
        g.edges.len(),
        run.persistence.continuous_count,
        run.persistence.entity_count
    );
    Ok(Outcome {
        summary,
        notes: run.notes,
        written: files.written,
    })
}
