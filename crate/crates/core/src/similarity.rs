//! Cosine similarity between document term-frequency vectors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::MentionMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum SimilarityError {
    #[error("unknown document {0}")]
    UnknownDocument(String),
    #[error("cosine is undefined for an all-zero vector{}", .0.as_ref().map(|d| format!(" (document {d})")).unwrap_or_default())]
    ZeroVector(Option<String>),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityKind {
    Cosine,
}

/// Symmetric document × document similarity scores with unit diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub document_ids: Vec<String>,
    /// Row-major `n × n`.
    pub values: Vec<f64>,
    pub kind: SimilarityKind,
}

/// Symmetric dissimilarities with zero diagonal. Not necessarily a metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub document_ids: Vec<String>,
    pub values: Vec<f64>,
}

/// The document's column of counts, in entity order.
pub fn doc_vector(matrix: &MentionMatrix, document_id: &str) -> Result<Vec<f64>, SimilarityError> {
    let d = matrix
        .document_index(document_id)
        .ok_or_else(|| SimilarityError::UnknownDocument(document_id.to_string()))?;
    Ok(column_f64(matrix, d))
}

fn column_f64(matrix: &MentionMatrix, d: usize) -> Vec<f64> {
    (0..matrix.n_entities())
        .map(|e| matrix.get(e, d) as f64)
        .collect()
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `u·v / sqrt(|u|² |v|²)`, clamped to [-1, 1].
///
/// Taking a single square root of the product of squared norms makes
/// `cosine(u, u)` exactly 1.0: for a float `x` without overflow,
/// `sqrt(x * x)` rounds back to `x`.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, SimilarityError> {
    if u.len() != v.len() {
        return Err(SimilarityError::LengthMismatch(u.len(), v.len()));
    }
    let uu = dot(u, u);
    let vv = dot(v, v);
    if uu == 0.0 || vv == 0.0 {
        return Err(SimilarityError::ZeroVector(None));
    }
    Ok((dot(u, v) / (uu * vv).sqrt()).clamp(-1.0, 1.0))
}

/// Pairwise cosine over document columns.
pub fn similarity_matrix(matrix: &MentionMatrix) -> Result<SimilarityMatrix, SimilarityError> {
    let n = matrix.n_documents();
    let columns: Vec<Vec<f64>> = (0..n).map(|d| column_f64(matrix, d)).collect();
    if let Some(d) = columns.iter().position(|c| c.iter().all(|&x| x == 0.0)) {
        return Err(SimilarityError::ZeroVector(Some(
            matrix.document_ids()[d].clone(),
        )));
    }
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let s = cosine(&columns[i], &columns[j])?;
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    Ok(SimilarityMatrix {
        document_ids: matrix.document_ids().to_vec(),
        values,
        kind: SimilarityKind::Cosine,
    })
}

fn square_csv(ids: &[String], values: &[f64]) -> String {
    let n = ids.len();
    let mut out = String::from("document");
    for id in ids {
        out.push(',');
        out.push_str(&csv_field(id));
    }
    out.push('\n');
    for (i, id) in ids.iter().enumerate() {
        out.push_str(&csv_field(id));
        for j in 0..n {
            out.push(',');
            out.push_str(&values[i * n + j].to_string());
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.document_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.document_ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn by_id(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.document_ids.iter().position(|d| d == a)?;
        let j = self.document_ids.iter().position(|d| d == b)?;
        Some(self.get(i, j))
    }

    /// Pointwise `1 - s`.
    pub fn to_distance(&self) -> DistanceMatrix {
        let n = self.len();
        let mut values: Vec<f64> = self.values.iter().map(|s| 1.0 - s).collect();
        for i in 0..n {
            values[i * n + i] = 0.0;
        }
        DistanceMatrix {
            document_ids: self.document_ids.clone(),
            values,
        }
    }

    /// CSV with document ids as header row and first column.
    pub fn to_csv(&self) -> String {
        square_csv(&self.document_ids, &self.values)
    }
}

impl DistanceMatrix {
    /// Checks shape, symmetry, zero diagonal and nonnegativity.
    pub fn new(document_ids: Vec<String>, values: Vec<f64>) -> Result<Self, SimilarityError> {
        let n = document_ids.len();
        if values.len() != n * n {
            return Err(SimilarityError::InvalidMatrix(format!(
                "{} values for {n} documents",
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(SimilarityError::InvalidMatrix(format!(
                    "nonzero diagonal at {i}"
                )));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(SimilarityError::InvalidMatrix(format!(
                        "entry ({i},{j}) = {v}"
                    )));
                }
                if v != values[j * n + i] {
                    return Err(SimilarityError::InvalidMatrix(format!(
                        "asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            document_ids,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.document_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.document_ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn to_csv(&self) -> String {
        square_csv(&self.document_ids, &self.values)
    }
}
