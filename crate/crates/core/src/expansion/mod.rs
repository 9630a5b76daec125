//! Pseudo-relevance feedback query expansion.
//!
//! Both expanders read only index statistics and the first-pass ranking.
//! Term-selection ties are broken by ascending term string.

mod bo1;
mod rm3;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::corpus::RankedList;
use crate::error::{Error, Result};
use crate::lexical::{InvertedIndex, TermWeightVector};

pub use bo1::bo1_expand;
pub use rm3::rm3_expand;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrfConfig {
    pub fb_docs: usize,
    pub fb_terms: usize,
    /// Weight of the original query model in RM3.
    pub rm3_lambda: f64,
    /// Dirichlet smoothing for RM3 document models.
    pub rm3_mu: f64,
}

impl Default for PrfConfig {
    fn default() -> Self {
        Self {
            fb_docs: 5,
            fb_terms: 10,
            rm3_lambda: 0.5,
            rm3_mu: 2500.0,
        }
    }
}

impl PrfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.fb_docs == 0 {
            return Err(Error::Config("fb_docs must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.rm3_lambda) {
            return Err(Error::Config(format!(
                "rm3_lambda must be in [0, 1], got {}",
                self.rm3_lambda
            )));
        }
        if !(self.rm3_mu > 0.0 && self.rm3_mu.is_finite()) {
            return Err(Error::Config(format!(
                "rm3_mu must be > 0, got {}",
                self.rm3_mu
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionMethod {
    Bo1,
    Rm3,
}

impl ExpansionMethod {
    pub fn expand(
        self,
        index: &InvertedIndex,
        query: &TermWeightVector,
        first_pass: &RankedList,
        cfg: &PrfConfig,
    ) -> Result<TermWeightVector> {
        match self {
            ExpansionMethod::Bo1 => bo1_expand(index, query, first_pass, cfg),
            ExpansionMethod::Rm3 => rm3_expand(index, query, first_pass, cfg),
        }
    }
}

impl FromStr for ExpansionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bo1" => Ok(ExpansionMethod::Bo1),
            "rm3" => Ok(ExpansionMethod::Rm3),
            other => Err(Error::Config(format!("unknown expansion method `{other}`"))),
        }
    }
}

/// Internal ids of the top `fb_docs` first-pass documents with their scores.
fn feedback_docs(
    index: &InvertedIndex,
    first_pass: &RankedList,
    fb_docs: usize,
) -> Result<Vec<(u32, f64)>> {
    if first_pass.is_empty() {
        return Err(Error::Invalid(format!(
            "empty first-pass ranking for query `{}`",
            first_pass.query_id()
        )));
    }
    first_pass
        .entries()
        .iter()
        .take(fb_docs)
        .map(|e| {
            index
                .internal_id(&e.doc_id)
                .map(|d| (d, e.score))
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "feedback document `{}` is not in the index",
                        e.doc_id
                    ))
                })
        })
        .collect()
}

/// The `n` best (term id, weight) pairs: weight desc, term asc.
fn top_terms(index: &InvertedIndex, mut weights: Vec<(u32, f64)>, n: usize) -> Vec<(u32, f64)> {
    let cmp = |a: &(u32, f64), b: &(u32, f64)| -> Ordering {
        b.1.total_cmp(&a.1)
            .then_with(|| index.term(a.0).cmp(index.term(b.0)))
    };
    weights.sort_by(cmp);
    weights.truncate(n);
    weights
}

/// Writes `query_id<TAB>term<TAB>weight` lines.
pub fn write_expanded<'a, W: Write>(
    mut out: W,
    queries: impl IntoIterator<Item = (&'a str, &'a TermWeightVector)>,
) -> Result<()> {
    for (qid, vec) in queries {
        for (term, w) in vec.iter() {
            writeln!(out, "{qid}\t{term}\t{w}")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads an expanded-query file back, grouping by query id in file order.
pub fn read_expanded(reader: impl BufRead) -> Result<Vec<(String, TermWeightVector)>> {
    let mut out: Vec<(String, TermWeightVector)> = Vec::new();
    let mut pos: BTreeMap<String, usize> = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        let [qid, term, w] = parts[..] else {
            return Err(Error::parse(
                "expanded queries",
                i + 1,
                "expected query_id<TAB>term<TAB>weight",
            ));
        };
        let w: f64 = w
            .parse()
            .ok()
            .filter(|w: &f64| w.is_finite())
            .ok_or_else(|| Error::parse("expanded queries", i + 1, "invalid weight"))?;
        let slot = *pos.entry(qid.to_string()).or_insert_with(|| {
            out.push((qid.to_string(), TermWeightVector::default()));
            out.len() - 1
        });
        out[slot].1.weights.insert(term.to_string(), w);
    }
    Ok(out)
}
