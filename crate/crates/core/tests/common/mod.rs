//! Independent reference implementations and random case generators shared
//! by the integration and acceptance tests. Nothing here calls the library
//! code under test except to build inputs.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rrfuse::corpus::Analyzer;
use rrfuse::{Qrels, RankedEntry, RankedList, Run};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn doc_name(i: usize) -> String {
    format!("doc{i:03}")
}

/// A ranked list over a random subset of `pool` documents with random,
/// strictly decreasing scores.
pub fn random_list(
    rng: &mut ChaCha8Rng,
    qid: &str,
    tag: &str,
    pool: usize,
    max_len: usize,
) -> RankedList {
    let mut docs: Vec<usize> = (0..pool).collect();
    docs.shuffle(rng);
    let len = rng.gen_range(0..=max_len.min(pool));
    let mut score = rng.gen_range(10.0..100.0);
    let entries = docs[..len]
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            score -= rng.gen_range(0.001..3.0);
            RankedEntry {
                doc_id: doc_name(d),
                rank: i + 1,
                score,
            }
        })
        .collect();
    RankedList::new(qid, tag, entries).expect("generated list is valid")
}

/// An exact rational `num / den`; denominators stay small enough for u128
/// cross-multiplication in the RRF cases.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn add_unit(self, den: u128) -> Self {
        Self {
            num: self.num * den + self.den,
            den: self.den * den,
        }
    }

    pub fn cmp(&self, other: &Ratio) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Direct evaluation of `sum_m 1 / (k + rank_m(d))` with exact arithmetic
/// for ordering. `k` must be integral. Returns (doc, exact, float) sorted by
/// score desc then doc id asc.
pub fn rrf_oracle(lists: &[&RankedList], k: u128) -> Vec<(String, Ratio)> {
    let mut docs: Vec<&str> = Vec::new();
    for l in lists {
        for e in l.entries() {
            if !docs.contains(&e.doc_id.as_str()) {
                docs.push(&e.doc_id);
            }
        }
    }
    let mut out: Vec<(String, Ratio)> = docs
        .into_iter()
        .map(|d| {
            let mut s = Ratio::zero();
            for l in lists {
                if let Some(pos) = l.entries().iter().position(|e| e.doc_id == d) {
                    s = s.add_unit(k + pos as u128 + 1);
                }
            }
            (d.to_string(), s)
        })
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Recall@K straight from the definition.
pub fn recall_oracle(ranked: &[String], relevant: &HashSet<String>, k: usize) -> f64 {
    let hits = ranked
        .iter()
        .take(k)
        .filter(|d| relevant.contains(*d))
        .count();
    hits as f64 / relevant.len() as f64
}

/// Average precision truncated at `cutoff`, normalised by all relevant docs.
pub fn ap_oracle(ranked: &[String], relevant: &HashSet<String>, cutoff: usize) -> f64 {
    let mut hits = 0.0;
    let mut sum = 0.0;
    for (i, d) in ranked.iter().take(cutoff).enumerate() {
        if relevant.contains(d) {
            hits += 1.0;
            sum += hits / (i + 1) as f64;
        }
    }
    sum / relevant.len() as f64
}

/// Random run and qrels over a shared pool: some judged queries are absent
/// from the run, some run queries are unjudged, some judged queries have no
/// relevant document.
pub fn random_run_and_qrels(rng: &mut ChaCha8Rng, tag: &str) -> (Run, Qrels) {
    let pool = rng.gen_range(5..60);
    let n_queries = rng.gen_range(1..12);
    let mut run = Run::new(tag);
    let mut qrels = Qrels::new();
    for q in 0..n_queries {
        let qid = format!("q{q}");
        if rng.gen_bool(0.85) {
            run.insert(random_list(rng, &qid, tag, pool, 40));
        }
        if rng.gen_bool(0.85) {
            let mut docs: Vec<usize> = (0..pool).collect();
            docs.shuffle(rng);
            for &d in &docs[..rng.gen_range(1..=pool.min(10))] {
                qrels.add(&qid, &doc_name(d), rng.gen_range(0..3)).unwrap();
            }
        }
    }
    if qrels.is_empty() {
        qrels.add("q0", &doc_name(0), 1).unwrap();
    }
    (run, qrels)
}

/// Per-query metric oracle: queries with relevant documents, run-absent
/// queries scored 0.
pub fn metric_oracle(
    run: &Run,
    qrels: &Qrels,
    f: impl Fn(&[String], &HashSet<String>) -> f64,
) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for qid in qrels.query_ids() {
        let relevant: HashSet<String> = qrels
            .relevant(qid)
            .into_iter()
            .map(str::to_string)
            .collect();
        if relevant.is_empty() {
            continue;
        }
        let ranked: Vec<String> = run
            .get(qid)
            .map(|l| l.doc_ids().map(str::to_string).collect())
            .unwrap_or_default();
        out.insert(qid.to_string(), f(&ranked, &relevant));
    }
    out
}

/// BM25 over raw token lists, no index.
pub fn bm25_exhaustive(
    docs: &[(String, Vec<String>)],
    query: &[String],
    k1: f64,
    b: f64,
) -> Vec<(String, f64)> {
    let n = docs.len() as f64;
    let avg = docs.iter().map(|(_, t)| t.len()).sum::<usize>() as f64 / n;
    let mut qtf: BTreeMap<&str, f64> = BTreeMap::new();
    for t in query {
        *qtf.entry(t).or_insert(0.0) += 1.0;
    }
    let mut out = Vec::new();
    for (id, toks) in docs {
        let mut s = 0.0;
        for (t, w) in &qtf {
            let tf = toks.iter().filter(|x| x == t).count() as f64;
            if tf == 0.0 {
                continue;
            }
            let df = docs
                .iter()
                .filter(|(_, d)| d.iter().any(|x| x == t))
                .count() as f64;
            let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
            let norm = if avg > 0.0 {
                toks.len() as f64 / avg
            } else {
                1.0
            };
            s += w * idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
        }
        if s > 0.0 {
            out.push((id.clone(), s));
        }
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

pub const WORDS: &[&str] = &[
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliet",
    "kilo", "lima", "mike", "november", "oscar", "papa", "quebec", "romeo", "sierra", "tango",
];

/// A random small corpus of `WORDS` text plus its tokenized form.
pub fn random_corpus(
    rng: &mut ChaCha8Rng,
    analyzer: &Analyzer,
) -> (Vec<rrfuse::Document>, Vec<(String, Vec<String>)>) {
    let n = rng.gen_range(1..25);
    let vocab = rng.gen_range(2..WORDS.len());
    let docs: Vec<rrfuse::Document> = (0..n)
        .map(|i| {
            let len = rng.gen_range(0..30);
            let text: Vec<&str> = (0..len).map(|_| WORDS[rng.gen_range(0..vocab)]).collect();
            rrfuse::Document::new(doc_name(i), text.join(" "))
        })
        .collect();
    let toks = docs
        .iter()
        .map(|d| (d.doc_id.clone(), analyzer.tokenize(&d.text).tokens))
        .collect();
    (docs, toks)
}

/// Group-by-max over (doc, score) pairs, then score desc / doc asc.
pub fn group_max_oracle(hits: &[(String, f64)]) -> Vec<(String, f64)> {
    let mut best: HashMap<&str, f64> = HashMap::new();
    for (d, s) in hits {
        let e = best.entry(d).or_insert(f64::NEG_INFINITY);
        if *s > *e {
            *e = *s;
        }
    }
    let mut out: Vec<(String, f64)> = best.into_iter().map(|(d, s)| (d.to_string(), s)).collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Two-tailed p from the statrs Student's t distribution.
pub fn reference_p(t: f64, df: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    let dist = StudentsT::new(0.0, 1.0, df).unwrap();
    2.0 * (1.0 - dist.cdf(t.abs()))
}

/// Hand-enumerated window starts 0, s, 2s, ... stopping after the first
/// window that reaches the last sentence.
pub fn windows_oracle(n: usize, window: usize, stride: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    loop {
        let end = (start + window).min(n) - 1;
        out.push((start, end));
        if end == n - 1 {
            return out;
        }
        start += stride;
    }
}
