//! Corpus data model: entity and document catalogs, the mention count
//! matrix, and the chronology hypothesis used as evaluation labels.
//!
//! A [`Corpus`] is only ever constructed through validation. All problems
//! found while building one are collected and returned together in
//! [`CorpusError::Invalid`].

mod chronology;
mod csv_io;
mod matrix;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chronology::{ChronologyReference, StageAssignment, TALAGERI};
pub use csv_io::{parse_chronology, parse_corpus, parse_corpus_with, CorpusCsv};
pub use matrix::{MentionMatrix, Slice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Single,
    Dual,
    Group,
    River,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Single,
        Category::Dual,
        Category::Group,
        Category::River,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Single => "single",
            Category::Dual => "dual",
            Category::Group => "group",
            Category::River => "river",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "single" => Ok(Category::Single),
            "dual" => Ok(Category::Dual),
            "group" => Ok(Category::Group),
            "river" => Ok(Category::River),
            other => Err(format!("unknown category {other:?}")),
        }
    }
}

/// A counted entity: a deity, a dual or group of deities, or a river.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityRecord {
    pub id: String,
    pub display_name: String,
    pub category: Category,
    /// Member entity ids; non-empty only for duals and groups.
    pub members: Vec<String>,
    /// West-to-east position, 1 = westernmost. Rivers only.
    pub geo_ordinal: Option<u32>,
    pub notes: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub id: String,
    pub index: u32,
    pub is_family: bool,
    pub stage: Option<String>,
    pub rank: Option<f64>,
}

/// One `entity_id,document_id,count` row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MentionRow {
    pub entity_id: String,
    pub document_id: String,
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IssueKind {
    MalformedCsv,
    UnknownReference,
    DuplicateId,
    NegativeCount,
    EmptyDocument,
    /// A record that parses but breaks a catalog invariant (member counts,
    /// geo ordinals on non-rivers, inconsistent stage ranks).
    InvalidRecord,
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub kind: IssueKind,
    pub source: String,
    pub line: Option<u64>,
    pub message: String,
}

impl ValidationIssue {
    pub fn new(
        kind: IssueKind,
        source: &str,
        line: Option<u64>,
        message: impl Into<String>,
    ) -> Self {
        Self {
            kind,
            source: source.to_string(),
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(
                f,
                "{}:{}: {}: {}",
                self.source, line, self.kind, self.message
            ),
            None => write!(f, "{}: {}: {}", self.source, self.kind, self.message),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("corpus failed validation with {} issue(s)", .0.len())]
    Invalid(Vec<ValidationIssue>),
    #[error("slice is empty ({entities} entities, {documents} documents survive the filter)")]
    EmptySlice { entities: usize, documents: usize },
    #[error("matrix shape error: {0}")]
    Shape(String),
    #[error("unknown document {0}")]
    UnknownDocument(String),
}

impl CorpusError {
    pub fn issues(&self) -> &[ValidationIssue] {
        match self {
            CorpusError::Invalid(issues) => issues,
            _ => &[],
        }
    }
}

/// Validated input bundle: catalogs, mention matrix and chronology.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub entities: Vec<EntityRecord>,
    /// Sorted by `index`.
    pub documents: Vec<DocumentRecord>,
    /// Rows: cataloged entities with at least one mention, catalog order.
    /// Columns: every document, index order.
    pub matrix: MentionMatrix,
    pub chronology: ChronologyReference,
}

/// Document filter used by the command line: family-only and explicit
/// exclusions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DocumentSelection {
    pub family_only: bool,
    pub exclude: Vec<String>,
}

impl DocumentSelection {
    pub fn accepts(&self, doc: &DocumentRecord) -> bool {
        (!self.family_only || doc.is_family) && !self.exclude.contains(&doc.id)
    }
}

impl Corpus {
    /// Validates catalogs and mention rows and assembles a corpus.
    ///
    /// The chronology is taken from `chronology` when given, otherwise from
    /// the documents' own stage/rank fields, otherwise the built-in
    /// Talageri ordering when every document id is one of `M1`..`M10`.
    pub fn from_records(
        entities: Vec<EntityRecord>,
        documents: Vec<DocumentRecord>,
        mentions: Vec<MentionRow>,
        chronology: Option<ChronologyReference>,
    ) -> Result<Self, CorpusError> {
        let entities = entities.into_iter().map(|e| (None, e)).collect();
        let documents = documents.into_iter().map(|d| (None, d)).collect();
        let mentions = mentions.into_iter().map(|m| (None, m)).collect();
        assemble(entities, documents, mentions, chronology, Vec::new())
    }

    pub fn entity(&self, id: &str) -> Option<&EntityRecord> {
        self.entities.iter().find(|e| e.id == id)
    }

    pub fn document(&self, id: &str) -> Option<&DocumentRecord> {
        self.documents.iter().find(|d| d.id == id)
    }

    pub fn document_ids(&self) -> Vec<String> {
        self.documents.iter().map(|d| d.id.clone()).collect()
    }

    /// Sub-matrix restricted to entities of the given categories (all when
    /// `None`) and documents accepted by `document_filter` (all when
    /// `None`). Order is preserved; documents left without mentions are
    /// dropped and listed in the result.
    pub fn slice(
        &self,
        categories: Option<&[Category]>,
        document_filter: Option<&dyn Fn(&DocumentRecord) -> bool>,
    ) -> Result<Slice, CorpusError> {
        let cats: Option<BTreeSet<Category>> = categories.map(|c| c.iter().copied().collect());
        let entity_cat: HashMap<&str, Category> = self
            .entities
            .iter()
            .map(|e| (e.id.as_str(), e.category))
            .collect();
        let doc_ok: HashSet<&str> = self
            .documents
            .iter()
            .filter(|d| document_filter.is_none_or(|f| f(d)))
            .map(|d| d.id.as_str())
            .collect();
        self.matrix.restrict(
            |e| match &cats {
                None => true,
                Some(set) => entity_cat.get(e).is_some_and(|c| set.contains(c)),
            },
            |d| doc_ok.contains(d),
        )
    }

    /// Rejects exclusion lists naming documents not in the catalog.
    pub fn check_document_ids(&self, ids: &[String]) -> Result<(), CorpusError> {
        match ids.iter().find(|id| self.document(id).is_none()) {
            Some(id) => Err(CorpusError::UnknownDocument(id.clone())),
            None => Ok(()),
        }
    }

    /// Canonical CSV serialization; parsing the result yields an equal
    /// corpus.
    pub fn to_csv(&self) -> CorpusCsv {
        csv_io::serialize(self)
    }
}

type Lined<T> = (Option<u64>, T);

pub(crate) fn assemble(
    entities: Vec<Lined<EntityRecord>>,
    mut documents: Vec<Lined<DocumentRecord>>,
    mentions: Vec<Lined<MentionRow>>,
    chronology: Option<ChronologyReference>,
    mut issues: Vec<ValidationIssue>,
) -> Result<Corpus, CorpusError> {
    const ENT: &str = "entities.csv";
    const DOC: &str = "documents.csv";
    const MEN: &str = "mentions.csv";

    let mut entity_ids = HashSet::new();
    for (line, e) in &entities {
        if !entity_ids.insert(e.id.as_str()) {
            issues.push(ValidationIssue::new(
                IssueKind::DuplicateId,
                ENT,
                *line,
                format!("entity id {} appears more than once", e.id),
            ));
        }
    }
    let categories: HashMap<&str, Category> = entities
        .iter()
        .map(|(_, e)| (e.id.as_str(), e.category))
        .collect();
    for (line, e) in &entities {
        let mut bad = |msg: String| {
            issues.push(ValidationIssue::new(
                IssueKind::InvalidRecord,
                ENT,
                *line,
                msg,
            ))
        };
        match e.category {
            Category::Dual if e.members.len() != 2 => bad(format!(
                "dual {} must have exactly 2 members, has {}",
                e.id,
                e.members.len()
            )),
            Category::Group if e.members.len() < 2 => bad(format!(
                "group {} must have at least 2 members, has {}",
                e.id,
                e.members.len()
            )),
            Category::Single | Category::River if !e.members.is_empty() => bad(format!(
                "{} entity {} cannot have members",
                e.category, e.id
            )),
            _ => {}
        }
        if e.geo_ordinal.is_some() && e.category != Category::River {
            bad(format!("geo_ordinal given for non-river entity {}", e.id));
        }
        if e.geo_ordinal == Some(0) {
            bad(format!("geo_ordinal for {} must be >= 1", e.id));
        }
        for m in &e.members {
            match categories.get(m.as_str()) {
                None => issues.push(ValidationIssue::new(
                    IssueKind::UnknownReference,
                    ENT,
                    *line,
                    format!("{} lists unknown member {m}", e.id),
                )),
                Some(Category::Single) => {}
                Some(c) => issues.push(ValidationIssue::new(
                    IssueKind::InvalidRecord,
                    ENT,
                    *line,
                    format!(
                        "{} lists member {m} of category {c}; members must be single",
                        e.id
                    ),
                )),
            }
        }
    }

    let mut doc_ids = HashSet::new();
    let mut doc_indices = HashSet::new();
    for (line, d) in &documents {
        if !doc_ids.insert(d.id.as_str()) {
            issues.push(ValidationIssue::new(
                IssueKind::DuplicateId,
                DOC,
                *line,
                format!("document id {} appears more than once", d.id),
            ));
        }
        if !doc_indices.insert(d.index) {
            issues.push(ValidationIssue::new(
                IssueKind::DuplicateId,
                DOC,
                *line,
                format!("document index {} appears more than once", d.index),
            ));
        }
        if d.stage.is_some() != d.rank.is_some() {
            issues.push(ValidationIssue::new(
                IssueKind::InvalidRecord,
                DOC,
                *line,
                format!("document {}: stage and rank must be given together", d.id),
            ));
        }
    }

    // Chronology: explicit override, then document columns, then built-in.
    let chronology = match chronology {
        Some(c) => {
            for doc in c.assignment.keys() {
                if !doc_ids.contains(doc.as_str()) {
                    issues.push(ValidationIssue::new(
                        IssueKind::UnknownReference,
                        "chronology.csv",
                        None,
                        format!("chronology assigns unknown document {doc}"),
                    ));
                }
            }
            c
        }
        None => {
            let staged: Vec<(String, String, f64)> = documents
                .iter()
                .filter_map(|(_, d)| match (&d.stage, d.rank) {
                    (Some(s), Some(r)) => Some((d.id.clone(), s.clone(), r)),
                    _ => None,
                })
                .collect();
            if !staged.is_empty() {
                match ChronologyReference::from_assignments("documents", staged) {
                    Ok(c) => c,
                    Err(msg) => {
                        issues.push(ValidationIssue::new(
                            IssueKind::InvalidRecord,
                            DOC,
                            None,
                            msg,
                        ));
                        ChronologyReference::empty()
                    }
                }
            } else {
                let talageri = ChronologyReference::talageri();
                if !documents.is_empty()
                    && documents
                        .iter()
                        .all(|(_, d)| talageri.assignment.contains_key(&d.id))
                {
                    talageri
                } else {
                    ChronologyReference::empty()
                }
            }
        }
    };
    for (_, d) in documents.iter_mut() {
        if let Some(a) = chronology.assignment.get(&d.id) {
            d.stage = Some(a.stage.clone());
            d.rank = Some(a.rank);
        } else if !chronology.is_empty() {
            d.stage = None;
            d.rank = None;
        }
    }

    documents.sort_by_key(|(_, d)| d.index);
    let doc_pos: HashMap<&str, usize> = documents
        .iter()
        .enumerate()
        .map(|(i, (_, d))| (d.id.as_str(), i))
        .collect();
    let ent_pos: HashMap<&str, usize> = entities
        .iter()
        .enumerate()
        .map(|(i, (_, e))| (e.id.as_str(), i))
        .collect();

    let n_docs = documents.len();
    let mut grid = vec![vec![0u64; n_docs]; entities.len()];
    let mut seen_pairs = HashSet::new();
    for (line, m) in &mentions {
        let e = ent_pos.get(m.entity_id.as_str());
        let d = doc_pos.get(m.document_id.as_str());
        if e.is_none() {
            issues.push(ValidationIssue::new(
                IssueKind::UnknownReference,
                MEN,
                *line,
                format!("unknown entity {}", m.entity_id),
            ));
        }
        if d.is_none() {
            issues.push(ValidationIssue::new(
                IssueKind::UnknownReference,
                MEN,
                *line,
                format!("unknown document {}", m.document_id),
            ));
        }
        if let (Some(&e), Some(&d)) = (e, d) {
            if !seen_pairs.insert((e, d)) {
                issues.push(ValidationIssue::new(
                    IssueKind::DuplicateId,
                    MEN,
                    *line,
                    format!(
                        "duplicate mention row for ({}, {})",
                        m.entity_id, m.document_id
                    ),
                ));
            } else {
                grid[e][d] = m.count;
            }
        }
    }

    for (d, (line, doc)) in documents.iter().enumerate() {
        if grid.iter().all(|row| row[d] == 0) {
            issues.push(ValidationIssue::new(
                IssueKind::EmptyDocument,
                DOC,
                *line,
                format!("document {} has no mentions", doc.id),
            ));
        }
    }

    if !issues.is_empty() {
        return Err(CorpusError::Invalid(issues));
    }

    let mut row_ids = Vec::new();
    let mut rows = Vec::new();
    for ((_, e), row) in entities.iter().zip(grid) {
        if row.iter().any(|&c| c > 0) {
            row_ids.push(e.id.clone());
            rows.push(row);
        }
    }
    let matrix = MentionMatrix::from_rows(
        row_ids,
        documents.iter().map(|(_, d)| d.id.clone()).collect(),
        rows,
    )?;
    Ok(Corpus {
        entities: entities.into_iter().map(|(_, e)| e).collect(),
        documents: documents.into_iter().map(|(_, d)| d).collect(),
        matrix,
        chronology,
    })
}
