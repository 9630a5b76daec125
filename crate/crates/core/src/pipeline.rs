//! End-to-end retrieval per search mode over a query set.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::corpus::{effective_query_text, split_passages, Analyzer, Document, Query, RankedList};
use crate::dense::{dense_doc_search, EmbeddingProvider, PassageKey, VectorStore};
use crate::error::{Error, Result};
use crate::expansion::ExpansionMethod;
use crate::lexical::{bm25_search, InvertedIndex, TermWeightVector};
use crate::trec::Run;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Bm25,
    Bm25Bo1,
    Bm25Rm3,
    /// One vector per document.
    Dense,
    /// Passage vectors, document score = best passage.
    DenseMaxPassage,
}

impl SearchMode {
    pub const ALL: [SearchMode; 5] = [
        SearchMode::Bm25,
        SearchMode::Bm25Bo1,
        SearchMode::Bm25Rm3,
        SearchMode::Dense,
        SearchMode::DenseMaxPassage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Bm25 => "bm25",
            SearchMode::Bm25Bo1 => "bm25+bo1",
            SearchMode::Bm25Rm3 => "bm25+rm3",
            SearchMode::Dense => "dense",
            SearchMode::DenseMaxPassage => "dense+maxpassage",
        }
    }

    pub fn is_dense(self) -> bool {
        matches!(self, SearchMode::Dense | SearchMode::DenseMaxPassage)
    }

    fn expansion(self) -> Option<ExpansionMethod> {
        match self {
            SearchMode::Bm25Bo1 => Some(ExpansionMethod::Bo1),
            SearchMode::Bm25Rm3 => Some(ExpansionMethod::Rm3),
            _ => None,
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SearchMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SearchMode::ALL.iter().map(|m| m.as_str()).collect();
                Error::Config(format!(
                    "unknown search mode `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Query vector (possibly expanded) and its final ranking.
fn lexical_query(
    index: &InvertedIndex,
    analyzer: &Analyzer,
    query: &Query,
    cfg: &PipelineConfig,
    expansion: Option<ExpansionMethod>,
    tag: &str,
) -> Result<(TermWeightVector, RankedList)> {
    let text = effective_query_text(query, &cfg.query_fields)?;
    let vector = TermWeightVector::from_text(analyzer, &text);
    let first = bm25_search(index, &vector, &query.query_id, cfg.depth, &cfg.bm25, tag);
    let Some(method) = expansion else {
        return Ok((vector, first));
    };
    if first.is_empty() {
        return Ok((vector, first));
    }
    // the feedback set only needs fb_docs documents
    let expanded = method.expand(index, &vector, &first, &cfg.prf)?;
    let second = bm25_search(index, &expanded, &query.query_id, cfg.depth, &cfg.bm25, tag);
    Ok((expanded, second))
}

pub fn lexical_run(
    index: &InvertedIndex,
    analyzer: &Analyzer,
    queries: &[Query],
    cfg: &PipelineConfig,
    mode: SearchMode,
) -> Result<Run> {
    if mode.is_dense() {
        return Err(Error::Config(format!("`{mode}` is not a lexical mode")));
    }
    cfg.validate()?;
    let tag = mode.as_str();
    let lists = queries
        .par_iter()
        .map(|q| lexical_query(index, analyzer, q, cfg, mode.expansion(), tag).map(|(_, l)| l))
        .collect::<Result<Vec<_>>>()?;
    Ok(Run::from_lists(tag, lists))
}

/// Expanded query vectors, for inspection and replay.
pub fn expand_queries(
    index: &InvertedIndex,
    analyzer: &Analyzer,
    queries: &[Query],
    cfg: &PipelineConfig,
    method: ExpansionMethod,
) -> Result<Vec<(String, TermWeightVector)>> {
    cfg.validate()?;
    queries
        .par_iter()
        .map(|q| {
            lexical_query(index, analyzer, q, cfg, Some(method), "expand")
                .map(|(v, _)| (q.query_id.clone(), v))
        })
        .collect()
}

pub fn dense_run(
    store: &VectorStore,
    provider: &dyn EmbeddingProvider,
    queries: &[Query],
    cfg: &PipelineConfig,
    mode: SearchMode,
) -> Result<Run> {
    match mode {
        SearchMode::Dense if !store.is_document_level() => {
            return Err(Error::Config(
                "the vector store holds several passages per document; use mode dense+maxpassage"
                    .into(),
            ))
        }
        SearchMode::Dense | SearchMode::DenseMaxPassage => {}
        other => return Err(Error::Config(format!("`{other}` is not a dense mode"))),
    }
    if provider.dim() != store.dim() {
        return Err(Error::Dimension {
            key: "query provider".into(),
            expected: store.dim(),
            found: provider.dim(),
        });
    }
    let tag = mode.as_str();
    let lists = queries
        .par_iter()
        .map(|q| {
            let text = effective_query_text(q, &cfg.query_fields)?;
            let vec = provider.embed(&q.query_id, &text)?;
            dense_doc_search(store, &q.query_id, &vec, cfg.depth, tag)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Run::from_lists(tag, lists))
}

/// Embeds every passage of every document. Documents without text yield
/// no passages and are absent from the store.
pub fn build_passage_store<'a>(
    docs: impl IntoIterator<Item = &'a Document>,
    provider: &dyn EmbeddingProvider,
    window: usize,
    stride: usize,
) -> Result<VectorStore> {
    let mut store = VectorStore::new(provider.dim())?;
    for doc in docs {
        for p in split_passages(doc, window, stride)? {
            let v = provider.embed(&p.doc_id, &p.text)?;
            store.insert(PassageKey::new(p.doc_id, p.passage_index), &v)?;
        }
    }
    Ok(store)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{HashEmbedder, SynonymMap};
    use crate::lexical::{build_index, IndexOptions};

    fn docs() -> Vec<Document> {
        vec![
            Document::new("d1", "Lions hunt zebras. Zebras run fast."),
            Document::new("d2", "Tigers swim. Tigers hunt deer."),
            Document::new("d3", "Owls fly at night."),
        ]
    }

    #[test]
    fn mode_names() {
        for m in SearchMode::ALL {
            assert_eq!(m.as_str().parse::<SearchMode>().unwrap(), m);
        }
        assert!("bm42".parse::<SearchMode>().is_err());
    }

    #[test]
    fn disabled_expansion_equals_plain_bm25() {
        let a = Analyzer::default();
        let idx = build_index(&docs(), &a, IndexOptions::default()).unwrap();
        let queries = vec![Query::new("1", "hunting zebras"), Query::new("2", "tiger")];
        let mut cfg = PipelineConfig::default();
        cfg.prf.fb_terms = 0;
        let plain = lexical_run(&idx, &a, &queries, &cfg, SearchMode::Bm25).unwrap();
        let bo1 = lexical_run(&idx, &a, &queries, &cfg, SearchMode::Bm25Bo1).unwrap();
        for (p, e) in plain.lists().zip(bo1.lists()) {
            assert_eq!(p.entries(), e.entries());
        }
        assert_eq!(plain.len(), bo1.len());
    }

    #[test]
    fn dense_modes() {
        let emb = HashEmbedder::new(64, Analyzer::default(), SynonymMap::default()).unwrap();
        let store = build_passage_store(&docs(), &emb, 1, 1).unwrap();
        assert_eq!(store.len(), 5);
        let queries = vec![Query::new("1", "zebras")];
        let cfg = PipelineConfig::default();
        assert!(dense_run(&store, &emb, &queries, &cfg, SearchMode::Dense).is_err());
        let run = dense_run(&store, &emb, &queries, &cfg, SearchMode::DenseMaxPassage).unwrap();
        assert_eq!(run.get("1").unwrap().entries()[0].doc_id, "d1");
        let doc_store = build_passage_store(&docs(), &emb, 10, 5).unwrap();
        assert!(dense_run(&doc_store, &emb, &queries, &cfg, SearchMode::Dense).is_ok());
    }
}
