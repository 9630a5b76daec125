use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub doc_id: String,
    /// 1-based.
    pub rank: usize,
    pub score: f64,
}

/// One query's ranking: ranks `1..=n`, non-increasing scores, unique docs.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    query_id: String,
    tag: String,
    entries: Vec<RankedEntry>,
}

/// Score descending, then doc id ascending.
pub(crate) fn by_score_then_id(a: (&str, f64), b: (&str, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0))
}

impl RankedList {
    /// Validates an explicit list of entries.
    ///
    /// Equal scores may appear in either doc id order here: externally
    /// produced or 6-decimal serialised runs can tie after rounding, and the
    /// rank column is authoritative.
    pub fn new(
        query_id: impl Into<String>,
        tag: impl Into<String>,
        entries: Vec<RankedEntry>,
    ) -> Result<Self> {
        let query_id = query_id.into();
        let invalid = |message: String| Error::InvalidRanking {
            query_id: query_id.clone(),
            message,
        };
        let mut seen = HashSet::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if e.rank != i + 1 {
                return Err(invalid(format!(
                    "expected rank {} at position {}, found {}",
                    i + 1,
                    i,
                    e.rank
                )));
            }
            if !e.score.is_finite() {
                return Err(invalid(format!("non-finite score for `{}`", e.doc_id)));
            }
            if i > 0 && e.score > entries[i - 1].score {
                return Err(invalid(format!("score increases at rank {}", e.rank)));
            }
            if !seen.insert(e.doc_id.as_str()) {
                return Err(invalid(format!("duplicate document `{}`", e.doc_id)));
            }
        }
        Ok(Self {
            query_id,
            tag: tag.into(),
            entries,
        })
    }

    /// Sorts scored documents (score desc, doc id asc), truncates to `depth`
    /// and assigns ranks. Documents must be unique and scores finite.
    pub fn from_scored<I, S>(
        query_id: impl Into<String>,
        tag: impl Into<String>,
        scored: I,
        depth: usize,
    ) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut items: Vec<(String, f64)> =
            scored.into_iter().map(|(d, s)| (d.into(), s)).collect();
        items.sort_by(|a, b| by_score_then_id((&a.0, a.1), (&b.0, b.1)));
        items.truncate(depth);
        let entries = items
            .into_iter()
            .enumerate()
            .map(|(i, (doc_id, score))| RankedEntry {
                doc_id,
                rank: i + 1,
                score,
            })
            .collect();
        Self {
            query_id: query_id.into(),
            tag: tag.into(),
            entries,
        }
    }

    pub fn empty(query_id: impl Into<String>, tag: impl Into<String>) -> Self {
        Self {
            query_id: query_id.into(),
            tag: tag.into(),
            entries: Vec::new(),
        }
    }

    pub fn query_id(&self) -> &str {
        &self.query_id
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn set_tag(&mut self, tag: impl Into<String>) {
        self.tag = tag.into();
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }

    /// Doc ids of the first `k` entries.
    pub fn top(&self, k: usize) -> impl Iterator<Item = &str> {
        self.entries.iter().take(k).map(|e| e.doc_id.as_str())
    }

    /// Replaces every score through `f`, keeping ranks.
    ///
    /// `f` must be monotone non-decreasing so the list stays valid.
    pub(crate) fn map_scores(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            query_id: self.query_id.clone(),
            tag: self.tag.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| RankedEntry {
                    score: f(e.score),
                    ..e.clone()
                })
                .collect(),
        }
    }
}
