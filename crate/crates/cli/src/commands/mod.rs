mod cluster;
mod grid;
mod report;
mod validate;

use std::path::{Path, PathBuf};

use mandala_core::corpus::{parse_corpus_with, DocumentSelection, Slice};
use mandala_core::Corpus;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{InputPaths, SliceSpec};
use crate::error::CliError;
use crate::output::read;

pub use cluster::cluster;
pub use grid::grid;
pub use report::report;
pub use validate::validate;

/// What a command reports back to `main`.
#[derive(Debug, Default)]
pub struct Outcome {
    pub summary: String,
    pub notes: Vec<String>,
    pub written: Vec<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub file: String,
    pub sha256: String,
}

pub(crate) fn digest(role: &str, path: &Path, body: &str) -> InputDigest {
    InputDigest {
        role: role.into(),
        file: path
            .file_name()
            .map_or_else(String::new, |f| f.to_string_lossy().into_owned()),
        sha256: hex::encode(Sha256::digest(body.as_bytes())),
    }
}

pub(crate) struct Loaded {
    pub corpus: Corpus,
    pub digests: Vec<InputDigest>,
}

pub(crate) fn load(paths: &InputPaths) -> Result<Loaded, CliError> {
    let entities = read(&paths.entities)?;
    let documents = read(&paths.documents)?;
    let mentions = read(&paths.mentions)?;
    let chronology = paths.chronology.as_deref().map(read).transpose()?;
    let mut digests = vec![
        digest("entities", &paths.entities, &entities),
        digest("documents", &paths.documents, &documents),
        digest("mentions", &paths.mentions, &mentions),
    ];
    if let (Some(p), Some(body)) = (&paths.chronology, &chronology) {
        digests.push(digest("chronology", p, body));
    }
    let corpus = parse_corpus_with(&entities, &documents, &mentions, chronology.as_deref())?;
    Ok(Loaded { corpus, digests })
}

pub(crate) fn selection(corpus: &Corpus, spec: &SliceSpec) -> Result<DocumentSelection, CliError> {
    corpus.check_document_ids(&spec.exclude)?;
    Ok(DocumentSelection {
        family_only: spec.family_only,
        exclude: spec.exclude.clone(),
    })
}

pub(crate) fn slice(corpus: &Corpus, spec: &SliceSpec) -> Result<Slice, CliError> {
    let sel = selection(corpus, spec)?;
    let filter = |d: &mandala_core::DocumentRecord| sel.accepts(d);
    Ok(corpus.slice(spec.categories.as_deref(), Some(&filter))?)
}
