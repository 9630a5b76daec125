use std::collections::HashMap;

use indexmap::IndexSet;
use rayon::prelude::*;

use crate::corpus::RankedList;
use crate::error::{Error, Result};
use crate::trec::Run;

#[derive(Debug, Clone, PartialEq)]
pub struct FusionConfig {
    /// Rank offset `k` in `1 / (k + rank)`.
    pub rrf_k: f64,
    pub output_depth: usize,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            rrf_k: 60.0,
            output_depth: 1000,
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rrf_k > 0.0 && self.rrf_k.is_finite()) {
            return Err(Error::Config(format!(
                "rrf_k must be > 0, got {}",
                self.rrf_k
            )));
        }
        Ok(())
    }
}

/// `RRF(a,b,...)` from the input tags.
pub fn rrf_tag<'a>(tags: impl IntoIterator<Item = &'a str>) -> String {
    format!("RRF({})", tags.into_iter().collect::<Vec<_>>().join(","))
}

/// Reciprocal rank fusion of one query's lists.
///
/// Each document scores `sum 1 / (k + rank)` over the lists containing it;
/// lists that miss a document add nothing. Input scores are ignored.
pub fn rrf_fuse(runs: &[&RankedList], cfg: &FusionConfig, tag: &str) -> Result<RankedList> {
    cfg.validate()?;
    let Some(first) = runs.first() else {
        return Err(Error::Invalid(
            "rrf_fuse needs at least one ranked list".into(),
        ));
    };
    let query_id = first.query_id();
    if let Some(other) = runs.iter().find(|r| r.query_id() != query_id) {
        return Err(Error::Invalid(format!(
            "cannot fuse lists of different queries (`{query_id}` and `{}`)",
            other.query_id()
        )));
    }
    let mut ranks: HashMap<&str, Vec<usize>> = HashMap::new();
    for run in runs {
        for e in run.entries() {
            ranks.entry(e.doc_id.as_str()).or_default().push(e.rank);
        }
    }
    let integral_k =
        (cfg.rrf_k.fract() == 0.0 && cfg.rrf_k < 2f64.powi(53)).then_some(cfg.rrf_k as u64);
    let scores = ranks.into_iter().map(|(doc, mut rs)| {
        rs.sort_unstable();
        let exact = integral_k.and_then(|k| exact_score(&rs, k));
        (
            doc,
            exact.unwrap_or_else(|| rs.iter().map(|&r| 1.0 / (cfg.rrf_k + r as f64)).sum()),
        )
    });
    Ok(RankedList::from_scored(
        query_id,
        tag,
        scores,
        cfg.output_depth,
    ))
}

/// Correctly rounded `sum 1 / (k + r)`, so equal sums are equal floats and
/// fall through to the doc id tie-break. `None` if the exact fraction
/// outgrows u128; callers then sum in floating point.
fn exact_score(ranks: &[usize], k: u64) -> Option<f64> {
    let (mut num, mut den) = (0u128, 1u128);
    for &r in ranks {
        let d = u128::from(k).checked_add(r as u128)?;
        let g = gcd(den, d);
        let (a, b) = (den / g, d / g);
        num = num.checked_mul(b)?.checked_add(a)?;
        den = a.checked_mul(d)?;
    }
    ratio_to_f64(num, den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Round-to-nearest-even `num / den` by binary long division.
fn ratio_to_f64(num: u128, den: u128) -> Option<f64> {
    if num == 0 {
        return Some(0.0);
    }
    if den == 0 || den > u128::MAX >> 1 {
        return None;
    }
    // integer part first, then fractional bits until 64 significant bits
    let int = num / den;
    let mut rem = num % den;
    let mut mant: u64;
    let mut exp: i32;
    if int > 0 {
        let bits = 128 - int.leading_zeros() as i32;
        if bits > 64 {
            return None;
        }
        mant = int as u64;
        exp = 0;
        for _ in bits..64 {
            rem <<= 1;
            mant = (mant << 1) | u64::from(rem >= den);
            if rem >= den {
                rem -= den;
            }
            exp -= 1;
        }
    } else {
        mant = 0;
        exp = 0;
        while mant.leading_zeros() > 0 {
            rem <<= 1;
            mant = (mant << 1) | u64::from(rem >= den);
            if rem >= den {
                rem -= den;
            }
            exp -= 1;
        }
    }
    // mant * 2^exp with the top bit set; keep 53 bits
    let sticky = rem != 0;
    let low = mant & 0x7ff;
    let mut top = mant >> 11;
    let half = 0x400;
    if low > half || (low == half && (sticky || top & 1 == 1)) {
        top += 1;
    }
    Some(top as f64 * 2f64.powi(exp + 11))
}

/// Per-query RRF across whole runs. A query is fused from whichever runs
/// contain it; output queries follow first appearance across the inputs.
pub fn rrf_fuse_all(runs: &[&Run], cfg: &FusionConfig) -> Result<Run> {
    cfg.validate()?;
    let tag = rrf_tag(runs.iter().map(|r| r.tag.as_str()));
    let queries: IndexSet<&str> = runs.iter().flat_map(|r| r.query_ids()).collect();
    let fused = queries
        .par_iter()
        .map(|qid| {
            let lists: Vec<&RankedList> = runs.iter().filter_map(|r| r.get(qid)).collect();
            rrf_fuse(&lists, cfg, &tag)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Run::from_lists(tag, fused))
}
