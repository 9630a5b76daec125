//! Passage vector store and the embedding text format:
//!
//! ```text
//! #dim E
//! doc_id<TAB>passage_index<TAB>v1 v2 ... vE
//! ```
//!
//! Values are written with 9 significant digits in scientific notation.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{EmbeddingVector, PassageKey};

/// Vectors of one dimension keyed by (doc_id, passage_index), kept in
/// insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorStore {
    dim: usize,
    keys: Vec<PassageKey>,
    values: Vec<f64>,
    index: HashMap<PassageKey, usize>,
}

impl VectorStore {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be >= 1".into()));
        }
        Ok(Self {
            dim,
            keys: Vec::new(),
            values: Vec::new(),
            index: HashMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn insert(&mut self, key: PassageKey, vector: &EmbeddingVector) -> Result<()> {
        self.insert_values(key, vector.values())
    }

    fn insert_values(&mut self, key: PassageKey, values: &[f64]) -> Result<()> {
        if values.len() != self.dim {
            return Err(Error::Dimension {
                key: key.to_string(),
                expected: self.dim,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("non-finite value in `{key}`")));
        }
        if self.index.contains_key(&key) {
            return Err(Error::Duplicate {
                kind: "passage key",
                id: key.to_string(),
            });
        }
        self.index.insert(key.clone(), self.keys.len());
        self.keys.push(key);
        self.values.extend_from_slice(values);
        Ok(())
    }

    pub fn get(&self, doc_id: &str, passage_index: usize) -> Option<&[f64]> {
        let key = PassageKey::new(doc_id, passage_index);
        self.index.get(&key).map(|&i| self.row(i))
    }

    pub(crate) fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn keys(&self) -> &[PassageKey] {
        &self.keys
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PassageKey, &[f64])> {
        self.keys.iter().enumerate().map(|(i, k)| (k, self.row(i)))
    }

    /// True when no document has more than one passage.
    pub fn is_document_level(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.keys.iter().all(|k| seen.insert(k.doc_id.as_str()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        read_embeddings(&path.display().to_string(), BufReader::new(file))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        write_embeddings(self, file)
    }
}

pub fn read_embeddings(name: &str, reader: impl BufRead) -> Result<VectorStore> {
    let mut lines = reader.lines().enumerate();
    let dim = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::parse(name, 1, "missing `#dim E` header"));
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        break line
            .strip_prefix("#dim ")
            .and_then(|d| d.trim().parse::<usize>().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::parse(name, i + 1, "expected `#dim E` header with E >= 1"))?;
    };
    let mut store = VectorStore::new(dim)?;
    let mut values = Vec::with_capacity(dim);
    for (i, line) in lines {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, '\t');
        let (Some(doc_id), Some(pidx), Some(vals)) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::parse(
                name,
                line_no,
                "expected doc_id<TAB>passage_index<TAB>values",
            ));
        };
        if doc_id.is_empty() {
            return Err(Error::parse(name, line_no, "empty doc_id"));
        }
        let passage_index = pidx
            .parse::<usize>()
            .map_err(|_| Error::parse(name, line_no, format!("invalid passage index `{pidx}`")))?;
        values.clear();
        for v in vals.split_ascii_whitespace() {
            let x: f64 = v
                .parse()
                .map_err(|_| Error::parse(name, line_no, format!("invalid value `{v}`")))?;
            values.push(x);
        }
        store.insert_values(PassageKey::new(doc_id, passage_index), &values)?;
    }
    Ok(store)
}

pub fn write_embeddings<W: Write>(store: &VectorStore, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "#dim {}", store.dim)?;
    for (key, row) in store.iter() {
        write!(w, "{}\t{}\t", key.doc_id, key.passage_index)?;
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                w.write_all(b" ")?;
            }
            write!(w, "{v:.8e}")?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_small_file() {
        let text = "#dim 4\na\t0\t1 0 0 0\na\t1\t0 1 0 0\nb\t0\t0.5 0.5 0.5 0.5\n";
        let store = read_embeddings("mem", text.as_bytes()).unwrap();
        assert_eq!(store.len(), 3);
        assert_eq!(store.get("b", 0).unwrap(), &[0.5; 4]);
        assert!(!store.is_document_level());
    }

    #[test]
    fn dimension_mismatch_names_key() {
        let text = "#dim 4\na\t0\t1 0 0 0\nbad\t3\t1 2 3\n";
        let err = read_embeddings("mem", text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("bad#3"), "{err}");
    }

    #[test]
    fn header_and_duplicates() {
        assert!(read_embeddings("mem", "a\t0\t1\n".as_bytes()).is_err());
        assert!(read_embeddings("mem", "#dim 1\na\t0\t1\na\t0\t2\n".as_bytes()).is_err());
    }

    #[test]
    fn serialisation_is_stable() {
        let mut store = VectorStore::new(3).unwrap();
        let v = EmbeddingVector::new(vec![0.1, -2.0 / 3.0, 12345.678]).unwrap();
        store.insert(PassageKey::new("d", 2), &v).unwrap();
        let mut first = Vec::new();
        write_embeddings(&store, &mut first).unwrap();
        assert_eq!(
            String::from_utf8(first.clone()).unwrap(),
            "#dim 3\nd\t2\t1.00000000e-1 -6.66666667e-1 1.23456780e4\n"
        );
        let back = read_embeddings("mem", &first[..]).unwrap();
        let mut second = Vec::new();
        write_embeddings(&back, &mut second).unwrap();
        assert_eq!(first, second);
    }
}
