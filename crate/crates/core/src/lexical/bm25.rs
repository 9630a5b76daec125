use crate::corpus::RankedList;
use crate::error::{Error, Result};

use super::{InvertedIndex, TermWeightVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        let p = Self { k1, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k1 >= 0.0 && self.k1.is_finite()) {
            return Err(Error::Config(format!("k1 must be >= 0, got {}", self.k1)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Error::Config(format!(
                "b must be in [0, 1], got {}",
                self.b
            )));
        }
        Ok(())
    }
}

/// `ln(1 + (N - df + 0.5) / (df + 0.5))`, non-negative for `df <= N`.
pub fn idf(num_docs: usize, df: usize) -> f64 {
    let n = num_docs as f64;
    let df = df as f64;
    (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
}

#[inline]
fn tf_part(tf: f64, doc_len: f64, avg_len: f64, p: &Bm25Params) -> f64 {
    // avgdl is only 0 when every document is empty; then no tf is positive.
    let norm = if avg_len > 0.0 {
        doc_len / avg_len
    } else {
        1.0
    };
    tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm))
}

/// BM25 score of a single document.
///
/// Terms are visited in the query vector's (sorted) order, the same order
/// `bm25_search` accumulates in, so both routes agree bit for bit.
pub fn bm25_score(
    index: &InvertedIndex,
    query: &TermWeightVector,
    doc: u32,
    params: &Bm25Params,
) -> f64 {
    let n = index.num_docs();
    let dl = f64::from(index.doc_length(doc));
    let mut score = 0.0;
    for (term, w) in query.iter() {
        let Some(tid) = index.term_id(term) else {
            continue;
        };
        let tf = index.tf(tid, doc);
        if tf == 0 {
            continue;
        }
        score += w
            * idf(n, index.doc_freq(tid))
            * tf_part(f64::from(tf), dl, index.avg_doc_length(), params);
    }
    score
}

/// Top-k documents by BM25 (score desc, doc id asc). Documents without a
/// positive score are left out.
pub fn bm25_search(
    index: &InvertedIndex,
    query: &TermWeightVector,
    query_id: &str,
    k: usize,
    params: &Bm25Params,
    tag: &str,
) -> RankedList {
    let n = index.num_docs();
    let mut acc = vec![0.0f64; n];
    let mut touched = Vec::new();
    let mut seen = vec![false; n];
    for (term, w) in query.iter() {
        let Some(tid) = index.term_id(term) else {
            continue;
        };
        let term_idf = idf(n, index.doc_freq(tid));
        for p in index.postings(tid) {
            let d = p.doc as usize;
            let dl = f64::from(index.doc_lengths[d]);
            acc[d] += w * term_idf * tf_part(f64::from(p.tf), dl, index.avg_doc_length, params);
            if !seen[d] {
                seen[d] = true;
                touched.push(p.doc);
            }
        }
    }
    let mut candidates: Vec<(u32, f64)> = touched
        .into_iter()
        .map(|d| (d, acc[d as usize]))
        .filter(|&(_, s)| s > 0.0)
        .collect();
    let cmp = |a: &(u32, f64), b: &(u32, f64)| {
        b.1.total_cmp(&a.1)
            .then_with(|| index.doc_id(a.0).cmp(index.doc_id(b.0)))
    };
    if k < candidates.len() {
        candidates.select_nth_unstable_by(k, cmp);
        candidates.truncate(k);
    }
    candidates.sort_by(cmp);
    RankedList::from_scored(
        query_id,
        tag,
        candidates
            .into_iter()
            .map(|(d, s)| (index.doc_id(d).to_string(), s)),
        k,
    )
}
