//! Corpus (JSON lines), query (TSV) and expansion sidecar files.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{Document, Query};

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Streams documents from a JSON-lines corpus in file order.
///
/// Only the ids seen so far are retained, for duplicate detection.
pub struct CorpusReader<R> {
    name: String,
    lines: Lines<R>,
    line_no: usize,
    seen: HashSet<String>,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(name: impl Into<String>, reader: R) -> Self {
        Self {
            name: name.into(),
            lines: reader.lines(),
            line_no: 0,
            seen: HashSet::new(),
        }
    }

    fn parse_line(&mut self, line: &str) -> Result<Document> {
        let doc: Document = serde_json::from_str(line)
            .map_err(|e| Error::parse(&self.name, self.line_no, e.to_string()))?;
        if doc.doc_id.is_empty() {
            return Err(Error::parse(&self.name, self.line_no, "empty doc_id"));
        }
        if !self.seen.insert(doc.doc_id.clone()) {
            return Err(Error::parse(
                &self.name,
                self.line_no,
                format!("duplicate doc_id `{}`", doc.doc_id),
            ));
        }
        Ok(doc)
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(e.into())),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            return Some(self.parse_line(&line));
        }
    }
}

pub fn read_corpus(path: impl AsRef<Path>) -> Result<CorpusReader<BufReader<File>>> {
    let path = path.as_ref();
    Ok(CorpusReader::new(path.display().to_string(), open(path)?))
}

pub fn write_corpus<'a, W: Write>(
    mut out: W,
    docs: impl IntoIterator<Item = &'a Document>,
) -> Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut out, doc).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Parses `query_id<TAB>title[<TAB>description[<TAB>narrative]]` lines.
pub fn read_queries(path: impl AsRef<Path>) -> Result<Vec<Query>> {
    let path = path.as_ref();
    parse_queries(&path.display().to_string(), open(path)?)
}

pub(crate) fn parse_queries(name: &str, reader: impl BufRead) -> Result<Vec<Query>> {
    let mut queries = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() > 4 {
            return Err(Error::parse(
                name,
                line_no,
                "more than four tab-separated fields",
            ));
        }
        let opt = |i: usize| {
            fields
                .get(i)
                .filter(|s| !s.is_empty())
                .map(|s| s.to_string())
        };
        let q = Query {
            query_id: fields[0].to_string(),
            title: fields.get(1).copied().unwrap_or_default().to_string(),
            description: opt(2),
            narrative: opt(3),
        };
        if q.query_id.is_empty() {
            return Err(Error::parse(name, line_no, "empty query_id"));
        }
        if q.title.is_empty() && q.description.is_none() && q.narrative.is_none() {
            return Err(Error::parse(name, line_no, "query has no text fields"));
        }
        if !seen.insert(q.query_id.clone()) {
            return Err(Error::parse(
                name,
                line_no,
                format!("duplicate query_id `{}`", q.query_id),
            ));
        }
        queries.push(q);
    }
    Ok(queries)
}

pub fn write_queries<'a, W: Write>(
    out: W,
    queries: impl IntoIterator<Item = &'a Query>,
) -> Result<()> {
    let mut out = BufWriter::new(out);
    for q in queries {
        let mut fields = vec![q.query_id.as_str(), q.title.as_str()];
        fields.push(q.description.as_deref().unwrap_or(""));
        fields.push(q.narrative.as_deref().unwrap_or(""));
        while fields.len() > 2 && fields.last() == Some(&"") {
            fields.pop();
        }
        writeln!(out, "{}", fields.join("\t"))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads an expansion sidecar: `doc_id<TAB>expansion text`, any number of
/// lines per document, kept in file order.
pub fn read_expansions(path: impl AsRef<Path>) -> Result<HashMap<String, Vec<String>>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let mut map: HashMap<String, Vec<String>> = HashMap::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (doc_id, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(&name, i + 1, "expected doc_id<TAB>text"))?;
        if doc_id.is_empty() {
            return Err(Error::parse(&name, i + 1, "empty doc_id"));
        }
        map.entry(doc_id.to_string())
            .or_default()
            .push(text.to_string());
    }
    Ok(map)
}

/// Appends sidecar expansions to a document's own expansion list.
pub fn attach_expansions(doc: &mut Document, sidecar: &HashMap<String, Vec<String>>) {
    if let Some(extra) = sidecar.get(&doc.doc_id) {
        doc.expansions
            .get_or_insert_with(Vec::new)
            .extend(extra.iter().cloned());
    }
}
