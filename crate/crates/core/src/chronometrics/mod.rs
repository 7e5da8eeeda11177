//! Agreement between computed structure and a chronology hypothesis.
//!
//! * [`concordance`]: flat clustering vs. chronology stages (ARI plus
//!   pairwise co-clustering rates).
//! * [`geo_progression`]: Spearman correlation between chronology rank and
//!   the mean west-to-east position of the rivers a document mentions.
//! * [`persistence_report`]: how entity traces start and persist along the
//!   document axis.

mod ari;
mod concordance;
mod persistence;
mod progression;
mod reproduction;
mod spearman;

use thiserror::Error;

use crate::clustering::ClusterError;

pub use ari::{adjusted_rand_index, partition_ari};
pub use concordance::{concordance, ConcordanceReport, StageDetail};
pub use persistence::{persistence_report, FirstAppearance, PersistenceReport};
pub use progression::{geo_progression, DocumentGeo, GeoWeighting, ProgressionReport};
pub use reproduction::{
    reproduce_kmeans, search_cocluster, CoclusterSearch, CoclusterTrial, KMeansReproduction,
    KMeansTrial,
};
pub use spearman::{average_ranks, spearman};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("document {0} has no chronology stage")]
    MissingStage(String),
    #[error("document {0} has no chronology rank")]
    MissingRank(String),
    #[error("no river entities with a geo_ordinal among the matrix rows")]
    NoRivers,
    #[error("need at least 3 documents for a rank correlation, have {0}")]
    InsufficientDocuments(usize),
    #[error("rank correlation is undefined: {0}")]
    UndefinedCorrelation(String),
    #[error("inputs have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("partitions cover different documents: {0}")]
    PartitionMismatch(String),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}
