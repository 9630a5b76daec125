//! Inverted index and BM25 retrieval.

mod bm25;
mod index;
mod persist;

pub use bm25::{bm25_score, bm25_search, idf, Bm25Params};
pub use index::{
    build_index, DocField, IndexBuilder, IndexOptions, InvertedIndex, Posting, TermWeightVector,
};
pub use persist::{read_index, write_index, FORMAT_VERSION, MAGIC};
