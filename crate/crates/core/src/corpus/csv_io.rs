//! Canonical CSV schema for corpora.
//!
//! ```text
//! entities.csv    id,display_name,category,members,geo_ordinal,notes
//! documents.csv   id,index,is_family,stage,rank
//! mentions.csv    entity_id,document_id,count
//! chronology.csv  document_id,stage,rank
//! ```
//!
//! `members` is `;`-separated. Lines starting with `#` are comments. A
//! chronology file may name itself with a `# chronology: <name>` line.

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use super::{
    assemble, Category, ChronologyReference, Corpus, CorpusError, DocumentRecord, EntityRecord,
    IssueKind, Lined, MentionRow, ValidationIssue,
};

const ENTITY_HEADER: [&str; 6] = [
    "id",
    "display_name",
    "category",
    "members",
    "geo_ordinal",
    "notes",
];
const DOCUMENT_HEADER: [&str; 5] = ["id", "index", "is_family", "stage", "rank"];
const MENTION_HEADER: [&str; 3] = ["entity_id", "document_id", "count"];
const CHRONOLOGY_HEADER: [&str; 3] = ["document_id", "stage", "rank"];

/// The four files of a serialized corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusCsv {
    pub entities: String,
    pub documents: String,
    pub mentions: String,
    /// Present when the corpus carries a chronology.
    pub chronology: Option<String>,
}

/// Parses and validates a corpus from the three CSV files.
pub fn parse_corpus(
    entity_file: &str,
    document_file: &str,
    mention_file: &str,
) -> Result<Corpus, CorpusError> {
    parse_corpus_with(entity_file, document_file, mention_file, None)
}

/// Like [`parse_corpus`], with an optional chronology override file.
pub fn parse_corpus_with(
    entity_file: &str,
    document_file: &str,
    mention_file: &str,
    chronology_file: Option<&str>,
) -> Result<Corpus, CorpusError> {
    let mut issues = Vec::new();
    let entities = read_table(
        entity_file,
        "entities.csv",
        &ENTITY_HEADER,
        &mut issues,
        parse_entity,
    );
    let documents = read_table(
        document_file,
        "documents.csv",
        &DOCUMENT_HEADER,
        &mut issues,
        parse_document,
    );
    let mentions = read_table(
        mention_file,
        "mentions.csv",
        &MENTION_HEADER,
        &mut issues,
        parse_mention,
    );
    let chronology = match chronology_file {
        Some(text) => match parse_chronology(text) {
            Ok(c) => Some(c),
            Err(CorpusError::Invalid(more)) => {
                issues.extend(more);
                None
            }
            Err(other) => return Err(other),
        },
        None => None,
    };
    // A broken override must not silently fall back to another chronology.
    if chronology_file.is_some() && chronology.is_none() {
        return Err(CorpusError::Invalid(issues));
    }
    assemble(entities, documents, mentions, chronology, issues)
}

/// Parses a `document_id,stage,rank` chronology file.
pub fn parse_chronology(text: &str) -> Result<ChronologyReference, CorpusError> {
    const SRC: &str = "chronology.csv";
    let name = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("chronology:"))
        .map(|n| n.trim().to_string())
        .unwrap_or_else(|| "override".to_string());
    let mut issues = Vec::new();
    let rows = read_table(text, SRC, &CHRONOLOGY_HEADER, &mut issues, |r| {
        let rank = parse_rank(&r[2])?.ok_or_else(|| malformed("rank is required"))?;
        if r[1].is_empty() {
            return Err(malformed("stage is required"));
        }
        Ok((r[0].to_string(), r[1].to_string(), rank))
    });
    if !issues.is_empty() {
        return Err(CorpusError::Invalid(issues));
    }
    ChronologyReference::from_assignments(&name, rows.into_iter().map(|(_, r)| r)).map_err(|msg| {
        CorpusError::Invalid(vec![ValidationIssue::new(
            IssueKind::InvalidRecord,
            SRC,
            None,
            msg,
        )])
    })
}

type RowError = (IssueKind, String);

fn malformed(msg: impl Into<String>) -> RowError {
    (IssueKind::MalformedCsv, msg.into())
}

fn read_table<T>(
    text: &str,
    source: &str,
    header: &[&str],
    issues: &mut Vec<ValidationIssue>,
    parse: impl Fn(&StringRecord) -> Result<T, RowError>,
) -> Vec<Lined<T>> {
    let mut reader = ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    match reader.headers() {
        Ok(h) if h.iter().eq(header.iter().copied()) => {}
        Ok(h) => {
            issues.push(ValidationIssue::new(
                IssueKind::MalformedCsv,
                source,
                Some(1),
                format!(
                    "header is {:?}, expected {}",
                    h.iter().collect::<Vec<_>>().join(","),
                    header.join(",")
                ),
            ));
            return Vec::new();
        }
        Err(e) => {
            issues.push(ValidationIssue::new(
                IssueKind::MalformedCsv,
                source,
                None,
                e.to_string(),
            ));
            return Vec::new();
        }
    }
    let mut out = Vec::new();
    for result in reader.records() {
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line());
                issues.push(ValidationIssue::new(
                    IssueKind::MalformedCsv,
                    source,
                    line,
                    e.to_string(),
                ));
                continue;
            }
        };
        let line = record.position().map(|p| p.line());
        if record.len() != header.len() {
            issues.push(ValidationIssue::new(
                IssueKind::MalformedCsv,
                source,
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
            continue;
        }
        match parse(&record) {
            Ok(v) => out.push((line, v)),
            Err((kind, msg)) => issues.push(ValidationIssue::new(kind, source, line, msg)),
        }
    }
    out
}

fn opt(field: &str) -> Option<String> {
    (!field.is_empty()).then(|| field.to_string())
}

fn parse_rank(field: &str) -> Result<Option<f64>, RowError> {
    if field.is_empty() {
        return Ok(None);
    }
    let v: f64 = field
        .parse()
        .map_err(|_| malformed(format!("rank {field:?} is not a number")))?;
    if !(v.is_finite() && v >= 1.0) {
        return Err((
            IssueKind::InvalidRecord,
            format!("rank {field} must be >= 1"),
        ));
    }
    Ok(Some(v))
}

fn parse_entity(r: &StringRecord) -> Result<EntityRecord, RowError> {
    let id = &r[0];
    if id.is_empty() {
        return Err(malformed("empty entity id"));
    }
    let category: Category = r[2].parse().map_err(malformed)?;
    let members = r[3]
        .split(';')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(str::to_string)
        .collect();
    let geo_ordinal = match &r[4] {
        "" => None,
        g => Some(
            g.parse::<u32>()
                .map_err(|_| malformed(format!("geo_ordinal {g:?} is not a positive integer")))?,
        ),
    };
    Ok(EntityRecord {
        id: id.to_string(),
        display_name: if r[1].is_empty() {
            id.to_string()
        } else {
            r[1].to_string()
        },
        category,
        members,
        geo_ordinal,
        notes: opt(&r[5]),
    })
}

fn parse_bool(field: &str) -> Result<bool, RowError> {
    match field.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" | "" => Ok(false),
        other => Err(malformed(format!("is_family {other:?} is not a boolean"))),
    }
}

fn parse_document(r: &StringRecord) -> Result<DocumentRecord, RowError> {
    if r[0].is_empty() {
        return Err(malformed("empty document id"));
    }
    let index = r[1]
        .parse::<u32>()
        .ok()
        .filter(|&i| i >= 1)
        .ok_or_else(|| malformed(format!("index {:?} is not an integer >= 1", &r[1])))?;
    Ok(DocumentRecord {
        id: r[0].to_string(),
        index,
        is_family: parse_bool(&r[2])?,
        stage: opt(&r[3]),
        rank: parse_rank(&r[4])?,
    })
}

fn parse_mention(r: &StringRecord) -> Result<MentionRow, RowError> {
    let count: i64 = r[2]
        .parse()
        .map_err(|_| malformed(format!("count {:?} is not an integer", &r[2])))?;
    if count < 0 {
        return Err((
            IssueKind::NegativeCount,
            format!("count {count} for ({}, {}) is negative", &r[0], &r[1]),
        ));
    }
    Ok(MentionRow {
        entity_id: r[0].to_string(),
        document_id: r[1].to_string(),
        count: count as u64,
    })
}

fn write_rows(header: &[&str], rows: impl Iterator<Item = Vec<String>>, preamble: &str) -> String {
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    let body = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input");
    format!("{preamble}{body}")
}

fn fmt_rank(r: Option<f64>) -> String {
    r.map(|v| v.to_string()).unwrap_or_default()
}

pub(super) fn serialize(corpus: &Corpus) -> CorpusCsv {
    let entities = write_rows(
        &ENTITY_HEADER,
        corpus.entities.iter().map(|e| {
            vec![
                e.id.clone(),
                e.display_name.clone(),
                e.category.to_string(),
                e.members.join(";"),
                e.geo_ordinal.map(|g| g.to_string()).unwrap_or_default(),
                e.notes.clone().unwrap_or_default(),
            ]
        }),
        "",
    );
    let documents = write_rows(
        &DOCUMENT_HEADER,
        corpus.documents.iter().map(|d| {
            vec![
                d.id.clone(),
                d.index.to_string(),
                d.is_family.to_string(),
                d.stage.clone().unwrap_or_default(),
                fmt_rank(d.rank),
            ]
        }),
        "",
    );
    let m = &corpus.matrix;
    let mentions = write_rows(
        &MENTION_HEADER,
        (0..m.n_entities()).flat_map(|e| {
            (0..m.n_documents()).filter_map(move |d| {
                let c = m.get(e, d);
                (c > 0).then(|| {
                    vec![
                        m.entity_ids()[e].clone(),
                        m.document_ids()[d].clone(),
                        c.to_string(),
                    ]
                })
            })
        }),
        "",
    );
    let chronology = (!corpus.chronology.is_empty()).then(|| {
        let c = &corpus.chronology;
        write_rows(
            &CHRONOLOGY_HEADER,
            c.ordered_documents().into_iter().map(|d| {
                let a = &c.assignment[&d];
                vec![d.clone(), a.stage.clone(), fmt_rank(Some(a.rank))]
            }),
            &format!("# chronology: {}\n", c.name),
        )
    });
    CorpusCsv {
        entities,
        documents,
        mentions,
        chronology,
    }
}
