use std::collections::BTreeMap;

use crate::corpus::RankedList;
use crate::error::Result;
use crate::lexical::{InvertedIndex, TermWeightVector};

use super::{feedback_docs, top_terms, PrfConfig};

/// Bo1 (Bose-Einstein) weight of a term seen `tf_x` times in the feedback
/// set, with `lambda = F_t / N`.
pub(crate) fn bo1_weight(tf_x: f64, lambda: f64) -> f64 {
    tf_x * ((1.0 + lambda) / lambda).log2() + (1.0 + lambda).log2()
}

/// Bo1 expansion.
///
/// Candidates are all terms of the top `fb_docs` documents (original terms
/// included); the `fb_terms` best are kept. Original terms get
/// `qtf / max_qtf + w / w_max`, pure expansion terms `w / w_max`.
pub fn bo1_expand(
    index: &InvertedIndex,
    query: &TermWeightVector,
    first_pass: &RankedList,
    cfg: &PrfConfig,
) -> Result<TermWeightVector> {
    cfg.validate()?;
    if cfg.fb_terms == 0 {
        return Ok(query.clone());
    }
    let docs = feedback_docs(index, first_pass, cfg.fb_docs)?;
    let mut tf_x: BTreeMap<u32, u64> = BTreeMap::new();
    for &(d, _) in &docs {
        for &(t, tf) in index.doc_terms(d) {
            *tf_x.entry(t).or_insert(0) += u64::from(tf);
        }
    }
    let n = index.num_docs() as f64;
    let weights = tf_x
        .into_iter()
        .map(|(t, tfx)| {
            let lambda = index.collection_freq(t) as f64 / n;
            (t, bo1_weight(tfx as f64, lambda))
        })
        .collect();
    let selected = top_terms(index, weights, cfg.fb_terms);
    let w_max = selected
        .iter()
        .map(|&(_, w)| w)
        .fold(f64::NEG_INFINITY, f64::max);

    let max_qtf = query
        .iter()
        .map(|(_, w)| w)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out: BTreeMap<String, f64> = query
        .iter()
        .map(|(t, w)| (t.to_string(), if max_qtf > 0.0 { w / max_qtf } else { 0.0 }))
        .collect();
    for (t, w) in selected {
        *out.entry(index.term(t).to_string()).or_insert(0.0) += w / w_max;
    }
    Ok(TermWeightVector { weights: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Analyzer, Document};
    use crate::lexical::{bm25_search, build_index, Bm25Params, IndexOptions};

    fn setup(texts: &[&str], query: &str) -> (InvertedIndex, TermWeightVector, RankedList) {
        let docs: Vec<_> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(format!("d{i}"), *t))
            .collect();
        let a = Analyzer::default();
        let idx = build_index(&docs, &a, IndexOptions::default()).unwrap();
        let q = TermWeightVector::from_text(&a, query);
        let run = bm25_search(&idx, &q, "q", 10, &Bm25Params::default(), "bm25");
        (idx, q, run)
    }

    #[test]
    fn zero_terms_is_identity() {
        let (idx, q, run) = setup(&["lion tiger", "tiger bear"], "tiger");
        let cfg = PrfConfig {
            fb_terms: 0,
            ..Default::default()
        };
        assert_eq!(bo1_expand(&idx, &q, &run, &cfg).unwrap(), q);
    }

    #[test]
    fn dominant_term_gets_unit_weight() {
        let (idx, q, run) = setup(
            &["lion lion lion lion lion tiger", "zebra", "giraffe"],
            "tiger",
        );
        let cfg = PrfConfig {
            fb_docs: 1,
            fb_terms: 2,
            ..Default::default()
        };
        let out = bo1_expand(&idx, &q, &run, &cfg).unwrap();
        assert!((out.get("lion").unwrap() - 1.0).abs() < 1e-12);
        assert!(out.get("tiger").unwrap() > 1.0);
    }

    #[test]
    fn keeps_original_terms_and_selects_from_feedback() {
        let (idx, q, run) = setup(&["lion tiger", "tiger bear", "owl"], "tiger unicorn");
        let cfg = PrfConfig {
            fb_docs: 2,
            fb_terms: 2,
            ..Default::default()
        };
        let out = bo1_expand(&idx, &q, &run, &cfg).unwrap();
        assert!(out.get("unicorn").is_some());
        assert!(out.get("owl").is_none());
        // lion and bear tie; the lexicographically smaller term wins
        assert!(out.get("bear").is_some());
        assert!(out.get("lion").is_none());
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn empty_first_pass_is_an_error() {
        let (idx, q, _) = setup(&["lion"], "lion");
        let run = RankedList::empty("q", "bm25");
        assert!(bo1_expand(&idx, &q, &run, &PrfConfig::default()).is_err());
    }
}
