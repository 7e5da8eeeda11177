//! Chronological analysis of ordered text corpora from entity-mention counts.
//!
//! The pipeline runs from a validated [`Corpus`] of per-document mention
//! counts through cosine similarity, agglomerative and k-means clustering,
//! and presence grid networks, to metrics that score the computed structure
//! against a chronology hypothesis.
//!
//! ```
//! use mandala_core::corpus::parse_corpus;
//! use mandala_core::similarity::similarity_matrix;
//! use mandala_core::clustering::{agglomerate, Linkage};
//!
//! let entities = "id,display_name,category,members,geo_ordinal,notes\n\
//!                 agni,Agni,single,,,\nindra,Indra,single,,,\n";
//! let documents = "id,index,is_family,stage,rank\nA,1,true,,\nB,2,true,,\nC,3,false,,\n";
//! let mentions = "entity_id,document_id,count\n\
//!                 agni,A,3\nindra,A,1\nagni,B,2\nindra,C,4\n";
//! let corpus = parse_corpus(entities, documents, mentions).unwrap();
//! let sim = similarity_matrix(&corpus.matrix).unwrap();
//! let tree = agglomerate(&sim.to_distance(), Linkage::Average).unwrap();
//! assert_eq!(tree.merges().len(), 2);
//! ```

pub mod chronometrics;
pub mod clustering;
pub mod corpus;
pub mod gridnet;
pub mod similarity;

pub use chronometrics::{ConcordanceReport, PersistenceReport, ProgressionReport};
pub use clustering::{Dendrogram, FlatClustering, Linkage};
pub use corpus::{
    Category, ChronologyReference, Corpus, DocumentRecord, EntityRecord, MentionMatrix,
};
pub use gridnet::{GridNetwork, TraceSummary};
pub use similarity::{DistanceMatrix, SimilarityMatrix};
