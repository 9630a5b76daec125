use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::corpus::{effective_query_text, Analyzer, Query, QueryField};
use crate::error::{Error, Result};
use crate::trec::Run;

use super::{recall_at_k, Qrels};

/// Queries with this many or more non-stopword tokens share the last bin.
pub const MAX_BIN: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub query_ids: Vec<String>,
    /// Mean Recall@K per model, in model order.
    pub mean_recall: Vec<f64>,
}

/// Mean Recall@K per model, grouped by query length. Empty bins are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedReport {
    pub k: usize,
    pub models: Vec<String>,
    pub bins: BTreeMap<usize, Bin>,
}

impl BinnedReport {
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "bin\tqueries\t{}", self.models.join("\t"))?;
        for (bin, b) in &self.bins {
            let label = if *bin == MAX_BIN {
                format!("{MAX_BIN}+")
            } else {
                bin.to_string()
            };
            let vals: Vec<String> = b.mean_recall.iter().map(|v| format!("{v:.6}")).collect();
            writeln!(out, "{label}\t{}\t{}", b.query_ids.len(), vals.join("\t"))?;
        }
        Ok(())
    }
}

/// Bins judged queries (with at least one relevant document) by their
/// non-stopword token count, clamped to `1..=MAX_BIN`.
pub fn bin_by_query_length(
    queries: &[Query],
    fields: &BTreeSet<QueryField>,
    analyzer: &Analyzer,
    runs: &[&Run],
    qrels: &Qrels,
    k: usize,
) -> Result<BinnedReport> {
    let reports = runs
        .iter()
        .map(|r| recall_at_k(r, qrels, k))
        .collect::<Result<Vec<_>>>()?;
    let mut bins: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for q in queries {
        if !reports
            .first()
            .is_some_and(|r| r.per_query.contains_key(&q.query_id))
        {
            continue;
        }
        let text = effective_query_text(q, fields)?;
        let bin = analyzer.count_tokens(&text).clamp(1, MAX_BIN);
        bins.entry(bin).or_default().push(&q.query_id);
    }
    let bins = bins
        .into_iter()
        .map(|(bin, ids)| {
            let mean_recall = reports
                .iter()
                .map(|rep| ids.iter().map(|q| rep.per_query[*q]).sum::<f64>() / ids.len() as f64)
                .collect();
            let query_ids = ids.into_iter().map(str::to_string).collect();
            (
                bin,
                Bin {
                    query_ids,
                    mean_recall,
                },
            )
        })
        .collect();
    Ok(BinnedReport {
        k,
        models: runs.iter().map(|r| r.tag.clone()).collect(),
        bins,
    })
}

/// Counts of (query, relevant doc) pairs by the exact subset of models that
/// retrieved them in their top K. Subsets are bit masks over model order.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    pub k: usize,
    pub models: Vec<String>,
    /// Index = subset mask; index 0 (no model) is unused and kept at 0.
    pub regions: Vec<u64>,
}

impl OverlapReport {
    pub fn region_label(&self, mask: usize) -> String {
        self.models
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, m)| m.as_str())
            .collect::<Vec<_>>()
            .join("&")
    }

    pub fn count(&self, mask: usize) -> u64 {
        self.regions[mask]
    }

    /// Pairs retrieved by at least one model.
    pub fn total(&self) -> u64 {
        self.regions.iter().sum()
    }

    /// Pairs retrieved by model `m` (every region containing it).
    pub fn model_total(&self, m: usize) -> u64 {
        self.regions
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask & (1 << m) != 0)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "region\tcount")?;
        for mask in 1..self.regions.len() {
            writeln!(out, "{}\t{}", self.region_label(mask), self.regions[mask])?;
        }
        Ok(())
    }
}

pub fn overlap_analysis(runs: &[&Run], qrels: &Qrels, k: usize) -> Result<OverlapReport> {
    if !(2..=3).contains(&runs.len()) {
        return Err(Error::Invalid(format!(
            "overlap analysis takes 2 or 3 runs, got {}",
            runs.len()
        )));
    }
    qrels.ensure_non_empty()?;
    let mut regions = vec![0u64; 1 << runs.len()];
    for qid in qrels.query_ids() {
        let tops: Vec<BTreeSet<&str>> = runs
            .iter()
            .map(|r| r.get(qid).map(|l| l.top(k).collect()).unwrap_or_default())
            .collect();
        for doc in qrels.relevant(qid) {
            let mask = tops
                .iter()
                .enumerate()
                .filter(|(_, t)| t.contains(doc))
                .fold(0usize, |m, (i, _)| m | (1 << i));
            if mask != 0 {
                regions[mask] += 1;
            }
        }
    }
    Ok(OverlapReport {
        k,
        models: runs.iter().map(|r| r.tag.clone()).collect(),
        regions,
    })
}
