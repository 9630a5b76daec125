use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::corpus::Analyzer;
use crate::error::{Error, Result};

use super::VectorStore;

/// A fixed-dimension dense vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "non-finite embedding value at position {i}"
            )));
        }
        Ok(Self { values })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dot(&self, other: &EmbeddingVector) -> f64 {
        dot(&self.values, &other.values)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Something that turns a text unit into a vector of fixed dimension.
///
/// `id` identifies the unit (query id, or `doc_id` for passages) for
/// providers backed by precomputed vectors; text-based providers ignore it.
pub trait EmbeddingProvider: Send + Sync {
    fn dim(&self) -> usize;
    fn embed(&self, id: &str, text: &str) -> Result<EmbeddingVector>;
}

/// Term to canonical term rewrites, applied after normalisation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymMap {
    map: HashMap<String, String>,
}

impl SynonymMap {
    /// Both sides are normalised through `analyzer`; entries that normalise
    /// to nothing (stopwords) are dropped.
    pub fn from_pairs<I, A, B>(analyzer: &Analyzer, pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let first = |s: &str| analyzer.tokenize(s).tokens.into_iter().next();
        let map = pairs
            .into_iter()
            .filter_map(|(a, b)| Some((first(a.as_ref())?, first(b.as_ref())?)))
            .filter(|(a, b)| a != b)
            .collect();
        Self { map }
    }

    /// `term<TAB>canonical` per line.
    pub fn parse(analyzer: &Analyzer, reader: impl BufRead) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (a, b) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse("synonyms", i + 1, "expected term<TAB>canonical"))?;
            pairs.push((a.to_string(), b.to_string()));
        }
        Ok(Self::from_pairs(analyzer, pairs))
    }

    pub fn load(analyzer: &Analyzer, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(analyzer, std::io::BufReader::new(file))
    }

    pub fn canonical<'a>(&'a self, term: &'a str) -> &'a str {
        self.map.get(term).map(String::as_str).unwrap_or(term)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Bucket in `[0, dim)` and sign (+1 or -1) of a term.
///
/// The bucket is the hash modulo `dim`; the sign comes from the top bit.
pub fn hash_bucket(term: &str, dim: usize) -> (usize, f64) {
    let h = fnv1a64(term.as_bytes());
    let bucket = (h % dim as u64) as usize;
    let sign = if h >> 63 == 0 { 1.0 } else { -1.0 };
    (bucket, sign)
}

/// Signed feature-hashing bag-of-tokens embedder, L2-normalised.
#[derive(Debug, Clone)]
pub struct HashEmbedder {
    dim: usize,
    analyzer: Analyzer,
    synonyms: SynonymMap,
}

impl HashEmbedder {
    pub fn new(dim: usize, analyzer: Analyzer, synonyms: SynonymMap) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be >= 1".into()));
        }
        Ok(Self {
            dim,
            analyzer,
            synonyms,
        })
    }

    pub fn embed_text(&self, text: &str) -> EmbeddingVector {
        let mut values = vec![0.0; self.dim];
        self.analyzer.for_each_token(text, |tok| {
            let (bucket, sign) = hash_bucket(self.synonyms.canonical(&tok), self.dim);
            values[bucket] += sign;
        });
        let norm = dot(&values, &values).sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        EmbeddingVector { values }
    }
}

impl EmbeddingProvider for HashEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, _id: &str, text: &str) -> Result<EmbeddingVector> {
        Ok(self.embed_text(text))
    }
}

/// Hash embedding with the default analyzer.
pub fn embed_hash(
    text: &str,
    dim: usize,
    synonyms: Option<&SynonymMap>,
) -> Result<EmbeddingVector> {
    let embedder = HashEmbedder::new(
        dim,
        Analyzer::default(),
        synonyms.cloned().unwrap_or_default(),
    )?;
    Ok(embedder.embed_text(text))
}

/// Looks vectors up by id in a store loaded from an embedding file
/// (passage index 0).
#[derive(Debug, Clone)]
pub struct PrecomputedProvider {
    store: VectorStore,
}

impl PrecomputedProvider {
    pub fn new(store: VectorStore) -> Self {
        Self { store }
    }
}

impl EmbeddingProvider for PrecomputedProvider {
    fn dim(&self) -> usize {
        self.store.dim()
    }

    fn embed(&self, id: &str, _text: &str) -> Result<EmbeddingVector> {
        self.store
            .get(id, 0)
            .map(|v| EmbeddingVector { values: v.to_vec() })
            .ok_or_else(|| Error::Invalid(format!("no precomputed embedding for `{id}`")))
    }
}
