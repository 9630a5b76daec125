use std::collections::BTreeMap;

use crate::corpus::RankedList;
use crate::error::{Error, Result};
use crate::lexical::{InvertedIndex, TermWeightVector};

use super::{feedback_docs, top_terms, PrfConfig};

/// RM3 expansion.
///
/// Feedback docs are weighted by a softmax over their first-pass scores;
/// document models are Dirichlet-smoothed with `rm3_mu` against the
/// collection model. The `fb_terms` best feedback terms are renormalised and
/// mixed with the (sum-normalised) original query:
/// `lambda * P(t|Q) + (1 - lambda) * P(t|R)`.
pub fn rm3_expand(
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

    let max_score = docs
        .iter()
        .map(|&(_, s)| s)
        .fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = docs.iter().map(|&(_, s)| (s - max_score).exp()).collect();
    let z: f64 = exp.iter().sum();

    let total = index.total_tokens() as f64;
    let mu = cfg.rm3_mu;
    let mut candidates: BTreeMap<u32, ()> = BTreeMap::new();
    for &(d, _) in &docs {
        for &(t, _) in index.doc_terms(d) {
            candidates.insert(t, ());
        }
    }
    let feedback: Vec<(u32, f64)> = candidates
        .into_keys()
        .map(|t| {
            let p_c = index.collection_freq(t) as f64 / total;
            let p = docs
                .iter()
                .zip(&exp)
                .map(|(&(d, _), &e)| {
                    let tf = f64::from(index.tf(t, d));
                    let dl = f64::from(index.doc_length(d));
                    (e / z) * (tf + mu * p_c) / (dl + mu)
                })
                .sum::<f64>();
            (t, p)
        })
        .collect();
    let selected = top_terms(index, feedback, cfg.fb_terms);
    let fb_mass: f64 = selected.iter().map(|&(_, p)| p).sum();

    let q_mass: f64 = query.iter().map(|(_, w)| w).sum();
    if q_mass.is_nan() || q_mass <= 0.0 {
        return Err(Error::Invalid(
            "query weights must sum to a positive value".into(),
        ));
    }
    let lambda = cfg.rm3_lambda;
    let mut out: BTreeMap<String, f64> = query
        .iter()
        .map(|(t, w)| (t.to_string(), lambda * w / q_mass))
        .collect();
    if fb_mass > 0.0 {
        for (t, p) in selected {
            *out.entry(index.term(t).to_string()).or_insert(0.0) += (1.0 - lambda) * p / fb_mass;
        }
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
    fn lambda_one_keeps_query_model() {
        let (idx, q, run) = setup(
            &["lion tiger", "tiger bear tiger", "owl"],
            "tiger lion lion",
        );
        let cfg = PrfConfig {
            rm3_lambda: 1.0,
            ..Default::default()
        };
        let out = rm3_expand(&idx, &q, &run, &cfg).unwrap();
        assert!((out.get("lion").unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((out.get("tiger").unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(out
            .iter()
            .filter(|(t, _)| *t != "lion" && *t != "tiger")
            .all(|(_, w)| w == 0.0));
    }

    #[test]
    fn single_term_feedback_document() {
        let (idx, q, run) = setup(&["walrus", "tiger bear"], "walrus");
        let cfg = PrfConfig {
            fb_docs: 1,
            fb_terms: 5,
            rm3_lambda: 0.0,
            ..Default::default()
        };
        let out = rm3_expand(&idx, &q, &run, &cfg).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out.get("walru").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expansion_mass_and_identity() {
        let (idx, q, run) = setup(&["lion tiger", "tiger bear tiger", "owl tiger"], "tiger");
        let cfg = PrfConfig {
            fb_docs: 3,
            fb_terms: 3,
            rm3_lambda: 0.3,
            ..Default::default()
        };
        let out = rm3_expand(&idx, &q, &run, &cfg).unwrap();
        let total: f64 = out.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(out.iter().all(|(_, w)| w >= 0.0));
        let off = PrfConfig { fb_terms: 0, ..cfg };
        assert_eq!(rm3_expand(&idx, &q, &run, &off).unwrap(), q);
    }
}
