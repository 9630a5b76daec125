use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

use crate::corpus::{Analyzer, Document};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

/// Document fields that can be indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DocField {
    Title,
    Text,
}

impl FromStr for DocField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "title" => Ok(DocField::Title),
            "text" | "body" | "abstract" | "full" => Ok(DocField::Text),
            other => Err(Error::Config(format!("unknown document field `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexOptions {
    pub fields: BTreeSet<DocField>,
    /// Append the document's expansion strings to its indexed text.
    pub include_expansions: bool,
    /// Use at most this many expansion strings per document.
    pub max_expansions: Option<usize>,
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self {
            fields: [DocField::Title, DocField::Text].into_iter().collect(),
            include_expansions: false,
            max_expansions: None,
        }
    }
}

/// Sparse query vector: normalised term to weight.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermWeightVector {
    pub weights: BTreeMap<String, f64>,
}

impl TermWeightVector {
    /// Weights are term frequencies within the query text.
    pub fn from_text(analyzer: &Analyzer, text: &str) -> Self {
        let mut weights = BTreeMap::new();
        analyzer.for_each_token(text, |t| *weights.entry(t).or_insert(0.0) += 1.0);
        Self { weights }
    }

    pub fn from_weights<I, S>(weights: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        Self {
            weights: weights.into_iter().map(|(t, w)| (t.into(), w)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn get(&self, term: &str) -> Option<f64> {
        self.weights.get(term).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(t, &w)| (t.as_str(), w))
    }
}

/// Postings and collection statistics.
///
/// Internal doc ids follow insertion order; term ids follow first occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    pub(crate) terms: Vec<String>,
    pub(crate) vocab: HashMap<String, u32>,
    pub(crate) postings: Vec<Vec<Posting>>,
    pub(crate) collection_freq: Vec<u64>,
    pub(crate) doc_ids: Vec<String>,
    pub(crate) doc_index: HashMap<String, u32>,
    pub(crate) doc_lengths: Vec<u32>,
    pub(crate) avg_doc_length: f64,
    /// Forward lists (term id, tf) per document, sorted by term id.
    pub(crate) doc_terms: Vec<Vec<(u32, u32)>>,
    pub(crate) options: IndexOptions,
}

impl InvertedIndex {
    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.terms.len()
    }

    pub fn avg_doc_length(&self) -> f64 {
        self.avg_doc_length
    }

    pub fn options(&self) -> &IndexOptions {
        &self.options
    }

    pub fn term_id(&self, term: &str) -> Option<u32> {
        self.vocab.get(term).copied()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn postings(&self, term_id: u32) -> &[Posting] {
        &self.postings[term_id as usize]
    }

    pub fn doc_freq(&self, term_id: u32) -> usize {
        self.postings[term_id as usize].len()
    }

    /// Total occurrences of the term in the collection.
    pub fn collection_freq(&self, term_id: u32) -> u64 {
        self.collection_freq[term_id as usize]
    }

    pub fn total_tokens(&self) -> u64 {
        self.doc_lengths.iter().map(|&l| u64::from(l)).sum()
    }

    pub fn doc_id(&self, internal: u32) -> &str {
        &self.doc_ids[internal as usize]
    }

    pub fn internal_id(&self, doc_id: &str) -> Option<u32> {
        self.doc_index.get(doc_id).copied()
    }

    pub fn doc_length(&self, internal: u32) -> u32 {
        self.doc_lengths[internal as usize]
    }

    /// Term frequency of `term_id` in `doc`, 0 if absent.
    pub fn tf(&self, term_id: u32, doc: u32) -> u32 {
        let list = &self.postings[term_id as usize];
        list.binary_search_by_key(&doc, |p| p.doc)
            .map(|i| list[i].tf)
            .unwrap_or(0)
    }

    pub fn doc_terms(&self, doc: u32) -> &[(u32, u32)] {
        &self.doc_terms[doc as usize]
    }

    /// Assembles an index from raw parts, deriving forward lists and
    /// averages. Used by the builder and the file reader.
    pub(crate) fn from_parts(
        terms: Vec<String>,
        postings: Vec<Vec<Posting>>,
        doc_ids: Vec<String>,
        doc_lengths: Vec<u32>,
        options: IndexOptions,
    ) -> Result<Self> {
        if doc_ids.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let n = doc_ids.len();
        let mut doc_index = HashMap::with_capacity(n);
        for (i, id) in doc_ids.iter().enumerate() {
            if doc_index.insert(id.clone(), i as u32).is_some() {
                return Err(Error::Duplicate {
                    kind: "doc_id",
                    id: id.clone(),
                });
            }
        }
        let mut vocab = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if vocab.insert(t.clone(), i as u32).is_some() {
                return Err(Error::IndexFormat(format!("duplicate term `{t}`")));
            }
        }
        let mut doc_terms = vec![Vec::new(); n];
        let mut collection_freq = Vec::with_capacity(terms.len());
        for (tid, list) in postings.iter().enumerate() {
            let mut cf = 0u64;
            for p in list {
                let slot = doc_terms.get_mut(p.doc as usize).ok_or_else(|| {
                    Error::IndexFormat(format!("posting for unknown doc {}", p.doc))
                })?;
                slot.push((tid as u32, p.tf));
                cf += u64::from(p.tf);
            }
            collection_freq.push(cf);
        }
        let total: u64 = doc_lengths.iter().map(|&l| u64::from(l)).sum();
        Ok(Self {
            terms,
            vocab,
            postings,
            collection_freq,
            avg_doc_length: total as f64 / n as f64,
            doc_ids,
            doc_index,
            doc_lengths,
            doc_terms,
            options,
        })
    }
}

/// Incremental index construction for streamed corpora.
#[derive(Debug)]
pub struct IndexBuilder {
    analyzer: Analyzer,
    options: IndexOptions,
    terms: Vec<String>,
    vocab: HashMap<String, u32>,
    postings: Vec<Vec<Posting>>,
    doc_ids: Vec<String>,
    seen: HashMap<String, u32>,
    doc_lengths: Vec<u32>,
}

impl IndexBuilder {
    pub fn new(analyzer: Analyzer, options: IndexOptions) -> Self {
        Self {
            analyzer,
            options,
            terms: Vec::new(),
            vocab: HashMap::new(),
            postings: Vec::new(),
            doc_ids: Vec::new(),
            seen: HashMap::new(),
            doc_lengths: Vec::new(),
        }
    }

    /// Text pieces that make up a document's indexed representation.
    fn indexed_text<'d>(&self, doc: &'d Document) -> Vec<&'d str> {
        let mut parts = Vec::new();
        if self.options.fields.contains(&DocField::Title) {
            if let Some(t) = doc.title.as_deref() {
                parts.push(t);
            }
        }
        if self.options.fields.contains(&DocField::Text) {
            parts.push(doc.text.as_str());
        }
        if self.options.include_expansions {
            if let Some(exp) = doc.expansions.as_deref() {
                let limit = self.options.max_expansions.unwrap_or(usize::MAX);
                parts.extend(exp.iter().take(limit).map(String::as_str));
            }
        }
        parts
    }

    pub fn add(&mut self, doc: &Document) -> Result<()> {
        if doc.doc_id.is_empty() {
            return Err(Error::Invalid("document with empty doc_id".into()));
        }
        let internal = self.doc_ids.len() as u32;
        if self.seen.insert(doc.doc_id.clone(), internal).is_some() {
            return Err(Error::Duplicate {
                kind: "doc_id",
                id: doc.doc_id.clone(),
            });
        }
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        let mut length = 0u32;
        for part in self.indexed_text(doc) {
            self.analyzer.for_each_token(part, |tok| {
                let next_id = self.terms.len() as u32;
                let id = *self.vocab.entry(tok).or_insert_with_key(|k| {
                    self.terms.push(k.clone());
                    next_id
                });
                *counts.entry(id).or_insert(0) += 1;
                length += 1;
            });
        }
        self.postings.resize_with(self.terms.len(), Vec::new);
        for (tid, tf) in counts {
            self.postings[tid as usize].push(Posting { doc: internal, tf });
        }
        self.doc_ids.push(doc.doc_id.clone());
        self.doc_lengths.push(length);
        Ok(())
    }

    pub fn finish(self) -> Result<InvertedIndex> {
        InvertedIndex::from_parts(
            self.terms,
            self.postings,
            self.doc_ids,
            self.doc_lengths,
            self.options,
        )
    }
}

/// Builds an index over in-memory documents.
pub fn build_index<'a>(
    docs: impl IntoIterator<Item = &'a Document>,
    analyzer: &Analyzer,
    options: IndexOptions,
) -> Result<InvertedIndex> {
    let mut builder = IndexBuilder::new(analyzer.clone(), options);
    for doc in docs {
        builder.add(doc)?;
    }
    builder.finish()
}
