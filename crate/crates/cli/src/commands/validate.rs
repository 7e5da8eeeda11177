use std::fmt::Write;

use mandala_core::Category;

use super::{load, Outcome};
use crate::config::InputPaths;
use crate::error::CliError;

/// Parses the corpus. Validation problems come back as
/// `CliError::Corpus(CorpusError::Invalid(..))` carrying every issue.
pub fn validate(paths: &InputPaths) -> Result<Outcome, CliError> {
    let corpus = load(paths)?.corpus;
    let mut summary = String::new();
    let by_cat: Vec<String> = Category::ALL
        .iter()
        .map(|c| {
            let n = corpus.entities.iter().filter(|e| e.category == *c).count();
            format!("{n} {c}")
        })
        .collect();
    let m = &corpus.matrix;
    let nonzero = (0..m.n_entities())
        .map(|e| m.row(e).iter().filter(|&&c| c > 0).count())
        .sum::<usize>();
    let _ = writeln!(summary, "corpus is valid");
    let _ = writeln!(
        summary,
        "  entities:   {} ({})",
        corpus.entities.len(),
        by_cat.join(", ")
    );
    let _ = writeln!(summary, "  documents:  {}", corpus.documents.len());
    let _ = writeln!(
        summary,
        "  mentions:   {nonzero} nonzero cells in a {}x{} matrix",
        m.n_entities(),
        m.n_documents()
    );
    let _ = writeln!(summary, "  chronology: {}", corpus.chronology.name);
    Ok(Outcome {
        summary,
        ..Outcome::default()
    })
}
