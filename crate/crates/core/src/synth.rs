//! Synthetic test collection with a controllable vocabulary gap.
//!
//! Words are grouped into concepts; every surface form of a concept maps to
//! the concept's first form in the synonym map. Each query names a few
//! concepts through one surface form each and has:
//!
//! * a lexical relevant document containing exactly those surface forms, and
//! * with probability `mismatch_fraction`, a second relevant document that
//!   expresses the same concepts only through *other* surface forms, so it
//!   shares no term with the query and is reachable only through the
//!   synonym-aware embedder.
//!
//! The remaining documents mix random concepts with filler words. Because
//! the embedder collapses surface forms, many of them look alike to it,
//! while exact matching separates them.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{porter, write_corpus, write_queries, Document, Query, StopwordList};
use crate::error::{Error, Result};
use crate::eval::Qrels;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_docs: usize,
    pub n_queries: usize,
    pub mismatch_fraction: f64,
    pub n_concepts: usize,
    pub surfaces_per_concept: usize,
    pub concepts_per_query: usize,
    pub concepts_per_doc: usize,
    pub filler_vocab: usize,
    /// Inclusive range of filler words per document.
    pub filler_len: (usize, usize),
    pub words_per_sentence: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n_docs: 1000,
            n_queries: 100,
            mismatch_fraction: 0.5,
            n_concepts: 12,
            surfaces_per_concept: 25,
            concepts_per_query: 2,
            concepts_per_doc: 4,
            filler_vocab: 2000,
            filler_len: (8, 30),
            words_per_sentence: 8,
        }
    }
}

impl SynthConfig {
    pub fn new(seed: u64, n_docs: usize, n_queries: usize, mismatch_fraction: f64) -> Self {
        Self {
            seed,
            n_docs,
            n_queries,
            mismatch_fraction,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mismatch_fraction) {
            return Err(Error::Config("mismatch_fraction must be in [0, 1]".into()));
        }
        if self.n_queries == 0 || self.n_docs < 2 * self.n_queries {
            return Err(Error::Config(format!(
                "need n_queries >= 1 and n_docs >= 2 * n_queries (got {} docs, {} queries)",
                self.n_docs, self.n_queries
            )));
        }
        if self.surfaces_per_concept < 2
            || self.concepts_per_query == 0
            || self.concepts_per_query > self.n_concepts
            || self.concepts_per_doc > self.n_concepts
            || self.filler_vocab == 0
            || self.filler_len.0 > self.filler_len.1
            || self.words_per_sentence == 0
        {
            return Err(Error::Config(
                "inconsistent synthetic vocabulary settings".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub docs: Vec<Document>,
    pub queries: Vec<Query>,
    pub qrels: Qrels,
    /// Surface form to canonical form, sorted by surface form.
    pub synonyms: BTreeMap<String, String>,
}

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// Unique pseudo-words that are not stopwords and are fixed points of the
/// stemmer, so indexed and embedded forms match the generated ones.
fn make_words(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let stop = StopwordList::smart();
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let syllables = rng.gen_range(2..=3);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
            w.push(VOWELS[rng.gen_range(0..VOWELS.len())] as char);
        }
        w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
        if stop.contains(&w) || porter::stem(&w) != w || !seen.insert(w.clone()) {
            continue;
        }
        out.push(w);
    }
    out
}

fn sentences(words: &[String], per_sentence: usize) -> String {
    words
        .chunks(per_sentence)
        .map(|chunk| {
            let mut s = chunk.join(" ");
            if let Some(first) = s.get_mut(0..1) {
                first.make_ascii_uppercase();
            }
            s.push('.');
            s
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthDataset> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_concept_words = cfg.n_concepts * cfg.surfaces_per_concept;
    let words = make_words(&mut rng, n_concept_words + cfg.filler_vocab);
    let (concept_words, filler) = words.split_at(n_concept_words);
    let concepts: Vec<&[String]> = concept_words.chunks(cfg.surfaces_per_concept).collect();

    let mut synonyms = BTreeMap::new();
    for surfaces in &concepts {
        for s in &surfaces[1..] {
            synonyms.insert(s.clone(), surfaces[0].clone());
        }
    }

    let filler_words = |rng: &mut ChaCha8Rng| -> Vec<String> {
        let n = rng.gen_range(cfg.filler_len.0..=cfg.filler_len.1);
        (0..n)
            .map(|_| filler[rng.gen_range(0..filler.len())].clone())
            .collect()
    };
    let compose = |rng: &mut ChaCha8Rng, mut words: Vec<String>| -> String {
        words.extend(filler_words(rng));
        words.shuffle(rng);
        sentences(&words, cfg.words_per_sentence)
    };

    // (text, relevant-to query index)
    let mut bodies: Vec<(String, Option<usize>)> = Vec::with_capacity(cfg.n_docs);
    let mut queries = Vec::with_capacity(cfg.n_queries);
    for qi in 0..cfg.n_queries {
        let picked: Vec<usize> =
            rand::seq::index::sample(&mut rng, cfg.n_concepts, cfg.concepts_per_query).into_vec();
        let mut query_words = Vec::new();
        let mut other_words = Vec::new();
        for &c in &picked {
            let surfaces = concepts[c];
            let qs = rng.gen_range(0..surfaces.len());
            let mut os = rng.gen_range(0..surfaces.len() - 1);
            if os >= qs {
                os += 1;
            }
            query_words.push(surfaces[qs].clone());
            other_words.push(surfaces[os].clone());
        }
        queries.push(Query::new(format!("Q{:03}", qi + 1), query_words.join(" ")));
        let lexical = compose(&mut rng, query_words);
        bodies.push((lexical, Some(qi)));
        if rng.gen_bool(cfg.mismatch_fraction) {
            let semantic = compose(&mut rng, other_words);
            bodies.push((semantic, Some(qi)));
        }
    }
    while bodies.len() < cfg.n_docs {
        let picked =
            rand::seq::index::sample(&mut rng, cfg.n_concepts, cfg.concepts_per_doc).into_vec();
        let words = picked
            .into_iter()
            .map(|c| concepts[c][rng.gen_range(0..concepts[c].len())].clone())
            .collect();
        let text = compose(&mut rng, words);
        bodies.push((text, None));
    }
    bodies.shuffle(&mut rng);

    let width = cfg.n_docs.max(bodies.len()).to_string().len();
    let mut qrels = Qrels::new();
    let mut judged: Vec<(usize, String)> = Vec::new();
    let docs = bodies
        .into_iter()
        .enumerate()
        .map(|(i, (text, rel))| {
            let doc_id = format!("D{:0width$}", i + 1);
            if let Some(q) = rel {
                judged.push((q, doc_id.clone()));
            }
            Document::new(doc_id, text)
        })
        .collect();
    judged.sort();
    for (q, d) in judged {
        qrels.add(&queries[q].query_id, &d, 1)?;
    }
    Ok(SynthDataset {
        docs,
        queries,
        qrels,
        synonyms,
    })
}

impl SynthDataset {
    /// Writes `corpus.jsonl`, `queries.tsv`, `qrels.txt` and `synonyms.tsv`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let create = |name: &str| {
            let path = dir.join(name);
            std::fs::File::create(&path).map_err(|e| Error::io(path, e))
        };
        write_corpus(std::io::BufWriter::new(create("corpus.jsonl")?), &self.docs)?;
        write_queries(create("queries.tsv")?, &self.queries)?;
        self.qrels.save(dir.join("qrels.txt"))?;
        let mut syn = std::io::BufWriter::new(create("synonyms.tsv")?);
        for (a, b) in &self.synonyms {
            writeln!(syn, "{a}\t{b}")?;
        }
        syn.flush()?;
        Ok(())
    }
}
