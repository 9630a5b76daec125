//! Dense retrieval: embedding providers, a passage-keyed vector store,
//! exact dot-product top-k and max-passage aggregation.

mod embed;
mod search;
mod store;

pub use embed::{
    embed_hash, fnv1a64, hash_bucket, EmbeddingProvider, EmbeddingVector, HashEmbedder,
    PrecomputedProvider, SynonymMap,
};
pub use search::{
    dense_doc_search, dense_search, max_passage_aggregate, PassageHit, PassageKey, PassageRanking,
};
pub use store::{read_embeddings, write_embeddings, VectorStore};
