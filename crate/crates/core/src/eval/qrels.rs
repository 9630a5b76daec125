//! Relevance judgments: `query_id 0 doc_id grade` per line.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use indexmap::IndexMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Qrels {
    judgments: IndexMap<String, IndexMap<String, i32>>,
    /// Grades at or above this count as relevant.
    pub relevance_threshold: i32,
}

impl Default for Qrels {
    fn default() -> Self {
        Self {
            judgments: IndexMap::new(),
            relevance_threshold: 1,
        }
    }
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_threshold(mut self, threshold: i32) -> Result<Self> {
        if threshold < 1 {
            return Err(Error::Config(format!(
                "relevance threshold must be >= 1, got {threshold}"
            )));
        }
        self.relevance_threshold = threshold;
        Ok(self)
    }

    /// Adds a judgment; a second judgment for the same pair is rejected.
    pub fn add(&mut self, query_id: &str, doc_id: &str, grade: i32) -> Result<()> {
        let q = self.judgments.entry(query_id.to_string()).or_default();
        if q.contains_key(doc_id) {
            return Err(Error::Duplicate {
                kind: "judgment",
                id: format!("{query_id}/{doc_id}"),
            });
        }
        q.insert(doc_id.to_string(), grade);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }

    /// Number of judged queries.
    pub fn len(&self) -> usize {
        self.judgments.len()
    }

    /// Number of (query, document) judgments.
    pub fn num_judgments(&self) -> usize {
        self.judgments.values().map(|docs| docs.len()).sum()
    }

    pub(crate) fn ensure_non_empty(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::Invalid("qrels contain no judgments".into()));
        }
        Ok(())
    }

    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(String::as_str)
    }

    pub fn contains_query(&self, query_id: &str) -> bool {
        self.judgments.contains_key(query_id)
    }

    pub fn grade(&self, query_id: &str, doc_id: &str) -> Option<i32> {
        self.judgments.get(query_id)?.get(doc_id).copied()
    }

    /// Relevant doc ids of a query (grade >= threshold).
    pub fn relevant(&self, query_id: &str) -> HashSet<&str> {
        self.judgments
            .get(query_id)
            .map(|docs| {
                docs.iter()
                    .filter(|(_, &g)| g >= self.relevance_threshold)
                    .map(|(d, _)| d.as_str())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        parse_qrels(&path.display().to_string(), BufReader::new(file))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        write_qrels(self, file)
    }
}

pub fn parse_qrels(name: &str, reader: impl BufRead) -> Result<Qrels> {
    let mut qrels = Qrels::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(Error::parse(
                name,
                i + 1,
                "expected 4 fields: query_id 0 doc_id grade",
            ));
        }
        let grade: i32 = f[3]
            .parse()
            .map_err(|_| Error::parse(name, i + 1, format!("invalid grade `{}`", f[3])))?;
        qrels
            .add(f[0], f[2], grade)
            .map_err(|e| Error::parse(name, i + 1, e.to_string()))?;
    }
    Ok(qrels)
}

pub fn write_qrels<W: Write>(qrels: &Qrels, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    for (q, docs) in &qrels.judgments {
        for (d, g) in docs {
            writeln!(w, "{q} 0 {d} {g}")?;
        }
    }
    w.flush()?;
    Ok(())
}
