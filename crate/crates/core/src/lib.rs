//! Hybrid lexical/dense retrieval with reciprocal rank fusion.
//!
//! The crate is organised by pipeline stage:
//!
//! * [`corpus`]: documents, queries, text normalisation, passaging and the
//!   shared [`RankedList`] type.
//! * [`lexical`]: inverted index and BM25 top-k retrieval.
//! * [`expansion`]: pseudo-relevance feedback (Bo1, RM3).
//! * [`dense`]: embedding providers, passage vector store, exact top-k and
//!   max-passage aggregation.
//! * [`fusion`]: reciprocal rank fusion, min-max interpolation and oracle fusion.
//! * [`eval`]: Recall@K, MAP, paired t-test, query-length bins and overlap.
//! * [`pipeline`]: per-mode retrieval over a query set.
//! * [`trec`], [`config`], [`synth`]: interchange formats, pipeline
//!   configuration and a synthetic test collection.

pub mod config;
pub mod corpus;
pub mod dense;
pub mod error;
pub mod eval;
pub mod expansion;
pub mod fusion;
pub mod lexical;
pub mod pipeline;
pub mod synth;
pub mod trec;

pub use corpus::{Document, Passage, Query, QueryField, RankedEntry, RankedList, TokenStream};
pub use dense::{EmbeddingProvider, EmbeddingVector, PassageKey, PassageRanking, VectorStore};
pub use error::{Error, Result};
pub use eval::{MetricReport, Qrels};
pub use fusion::{FusionConfig, InterpolationConfig, Normalization};
pub use lexical::{Bm25Params, InvertedIndex, TermWeightVector};
pub use pipeline::SearchMode;
pub use trec::Run;
