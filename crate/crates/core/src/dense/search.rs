use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::corpus::RankedList;
use crate::error::{Error, Result};

use super::embed::dot;
use super::{EmbeddingVector, VectorStore};

/// Identifies a passage; ordered by doc id, then passage index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PassageKey {
    pub doc_id: String,
    pub passage_index: usize,
}

impl PassageKey {
    pub fn new(doc_id: impl Into<String>, passage_index: usize) -> Self {
        Self {
            doc_id: doc_id.into(),
            passage_index,
        }
    }
}

impl fmt::Display for PassageKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.doc_id, self.passage_index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PassageHit {
    pub key: PassageKey,
    pub rank: usize,
    pub score: f64,
}

/// Passage-level ranking for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageRanking {
    pub query_id: String,
    pub hits: Vec<PassageHit>,
}

fn by_score_then_key(a: &(f64, &PassageKey), b: &(f64, &PassageKey)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

fn scores<'s>(
    store: &'s VectorStore,
    query: &EmbeddingVector,
) -> Result<Vec<(f64, &'s PassageKey)>> {
    if query.dim() != store.dim() {
        return Err(Error::Dimension {
            key: "query".into(),
            expected: store.dim(),
            found: query.dim(),
        });
    }
    Ok(store
        .keys()
        .par_iter()
        .enumerate()
        .map(|(i, key)| (dot(query.values(), store.row(i)), key))
        .collect())
}

/// Exact top-k passages by dot product (score desc, key asc).
pub fn dense_search(
    store: &VectorStore,
    query_id: &str,
    query: &EmbeddingVector,
    k: usize,
) -> Result<PassageRanking> {
    let mut scored = scores(store, query)?;
    if k < scored.len() {
        scored.select_nth_unstable_by(k, by_score_then_key);
        scored.truncate(k);
    }
    scored.sort_by(by_score_then_key);
    Ok(PassageRanking {
        query_id: query_id.to_string(),
        hits: scored
            .into_iter()
            .enumerate()
            .map(|(i, (score, key))| PassageHit {
                key: key.clone(),
                rank: i + 1,
                score,
            })
            .collect(),
    })
}

/// Document score = max over its passages; re-ranked score desc, doc id asc.
pub fn max_passage_aggregate(passages: &PassageRanking, tag: &str, depth: usize) -> RankedList {
    let mut best: HashMap<&str, f64> = HashMap::new();
    for hit in &passages.hits {
        best.entry(hit.key.doc_id.as_str())
            .and_modify(|s| *s = s.max(hit.score))
            .or_insert(hit.score);
    }
    RankedList::from_scored(passages.query_id.as_str(), tag, best, depth)
}

/// Exact document-level retrieval: every passage is scored, aggregated by
/// max, then truncated to `k` documents.
pub fn dense_doc_search(
    store: &VectorStore,
    query_id: &str,
    query: &EmbeddingVector,
    k: usize,
    tag: &str,
) -> Result<RankedList> {
    let all = dense_search(store, query_id, query, usize::MAX)?;
    Ok(max_passage_aggregate(&all, tag, k))
}
