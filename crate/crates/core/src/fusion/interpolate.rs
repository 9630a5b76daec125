use std::collections::HashMap;
use std::str::FromStr;

use indexmap::IndexSet;

use crate::corpus::RankedList;
use crate::error::{Error, Result};
use crate::eval::{recall_at_k, Qrels};
use crate::trec::Run;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    MinMax,
    None,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min-max" | "minmax" => Ok(Normalization::MinMax),
            "none" => Ok(Normalization::None),
            other => Err(Error::Config(format!("unknown normalization `{other}`"))),
        }
    }
}

/// `alpha * s_a + (1 - alpha) * s_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationConfig {
    pub alpha: f64,
    pub normalization: Normalization,
}

impl Default for InterpolationConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            normalization: Normalization::MinMax,
        }
    }
}

/// Per-query min-max scaling to `[0, 1]`; a constant list maps to 0.
pub fn min_max_normalize(run: &RankedList) -> RankedList {
    let (min, max) = run
        .entries()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
            (lo.min(e.score), hi.max(e.score))
        });
    let range = max - min;
    if range > 0.0 {
        run.map_scores(|s| (s - min) / range)
    } else {
        run.map_scores(|_| 0.0)
    }
}

/// Linear score interpolation of two lists of one query.
///
/// Documents missing from a list take score 0 there (after normalisation).
pub fn interpolate(
    run_a: &RankedList,
    run_b: &RankedList,
    cfg: &InterpolationConfig,
    output_depth: usize,
    tag: &str,
) -> Result<RankedList> {
    if !(0.0..=1.0).contains(&cfg.alpha) {
        return Err(Error::Config(format!(
            "alpha must be in [0, 1], got {}",
            cfg.alpha
        )));
    }
    if run_a.query_id() != run_b.query_id() {
        return Err(Error::Invalid(format!(
            "cannot interpolate lists of different queries (`{}` and `{}`)",
            run_a.query_id(),
            run_b.query_id()
        )));
    }
    let (a, b) = match cfg.normalization {
        Normalization::MinMax => (min_max_normalize(run_a), min_max_normalize(run_b)),
        Normalization::None => (run_a.clone(), run_b.clone()),
    };
    let sa: HashMap<&str, f64> = a
        .entries()
        .iter()
        .map(|e| (e.doc_id.as_str(), e.score))
        .collect();
    let sb: HashMap<&str, f64> = b
        .entries()
        .iter()
        .map(|e| (e.doc_id.as_str(), e.score))
        .collect();
    let candidates: IndexSet<&str> = a.doc_ids().chain(b.doc_ids()).collect();
    let combined = candidates.into_iter().map(|d| {
        let x = sa.get(d).copied().unwrap_or(0.0);
        let y = sb.get(d).copied().unwrap_or(0.0);
        (d, cfg.alpha * x + (1.0 - cfg.alpha) * y)
    });
    Ok(RankedList::from_scored(
        run_a.query_id(),
        tag,
        combined,
        output_depth,
    ))
}

/// Interpolates two full runs per query.
pub fn interpolate_runs(
    run_a: &Run,
    run_b: &Run,
    cfg: &InterpolationConfig,
    depth: usize,
) -> Result<Run> {
    let tag = format!("interp({},{},{})", run_a.tag, run_b.tag, cfg.alpha);
    let queries: IndexSet<&str> = run_a.query_ids().chain(run_b.query_ids()).collect();
    let mut out = Run::new(tag.clone());
    for qid in queries {
        let empty = RankedList::empty(qid, "");
        let a = run_a.get(qid).unwrap_or(&empty);
        let b = run_b.get(qid).unwrap_or(&empty);
        out.insert(interpolate(a, b, cfg, depth, &tag)?);
    }
    Ok(out)
}

/// Mean Recall@K of the interpolated runs at each alpha of the grid.
pub fn alpha_sweep(
    run_a: &Run,
    run_b: &Run,
    qrels: &Qrels,
    grid: &[f64],
    k: usize,
    normalization: Normalization,
) -> Result<Vec<(f64, f64)>> {
    if grid.is_empty() {
        return Err(Error::Config("alpha grid is empty".into()));
    }
    grid.iter()
        .map(|&alpha| {
            let cfg = InterpolationConfig {
                alpha,
                normalization,
            };
            let run = interpolate_runs(run_a, run_b, &cfg, k)?;
            Ok((alpha, recall_at_k(&run, qrels, k)?.mean))
        })
        .collect()
}
