//! TREC run files: `query_id Q0 doc_id rank score tag`, grouped by query,
//! scores printed with six decimals.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use indexmap::IndexMap;

use crate::corpus::{RankedEntry, RankedList};
use crate::error::{Error, Result};

/// A multi-query run: one ranked list per query, in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Run {
    pub tag: String,
    lists: IndexMap<String, RankedList>,
}

impl Run {
    pub fn new(tag: impl Into<String>) -> Self {
        Self {
            tag: tag.into(),
            lists: IndexMap::new(),
        }
    }

    /// Adds or replaces the list for its query. The list takes the run tag.
    pub fn insert(&mut self, mut list: RankedList) {
        list.set_tag(self.tag.clone());
        self.lists.insert(list.query_id().to_string(), list);
    }

    pub fn get(&self, query_id: &str) -> Option<&RankedList> {
        self.lists.get(query_id)
    }

    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.lists.keys().map(String::as_str)
    }

    pub fn lists(&self) -> impl Iterator<Item = &RankedList> {
        self.lists.values()
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn from_lists(tag: impl Into<String>, lists: impl IntoIterator<Item = RankedList>) -> Self {
        let mut run = Self::new(tag);
        for l in lists {
            run.insert(l);
        }
        run
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        parse_run(&path.display().to_string(), BufReader::new(file))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        write_run(self, file)
    }
}

/// Parses a run file. Lines of one query must be contiguous and ranked
/// `1..=n`. An empty file yields an empty run with an empty tag.
pub fn parse_run(name: &str, reader: impl BufRead) -> Result<Run> {
    let mut run = Run::new("");
    let mut current: Option<(String, Vec<RankedEntry>, usize)> = None;
    let finish = |run: &mut Run, cur: Option<(String, Vec<RankedEntry>, usize)>| -> Result<()> {
        if let Some((qid, entries, line)) = cur {
            if run.lists.contains_key(&qid) {
                return Err(Error::parse(
                    name,
                    line,
                    format!("records for query `{qid}` are not contiguous"),
                ));
            }
            let list = RankedList::new(qid.clone(), run.tag.clone(), entries)
                .map_err(|e| Error::parse(name, line, e.to_string()))?;
            run.lists.insert(qid, list);
        }
        Ok(())
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(Error::parse(
                name,
                line_no,
                "expected 6 fields: query_id Q0 doc_id rank score tag",
            ));
        }
        let rank: usize = f[3]
            .parse()
            .map_err(|_| Error::parse(name, line_no, format!("invalid rank `{}`", f[3])))?;
        let score: f64 = f[4]
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| Error::parse(name, line_no, format!("invalid score `{}`", f[4])))?;
        if run.tag.is_empty() && current.is_none() {
            run.tag = f[5].to_string();
        } else if f[5] != run.tag {
            return Err(Error::parse(
                name,
                line_no,
                format!("mixed run tags `{}` and `{}`", run.tag, f[5]),
            ));
        }
        let entry = RankedEntry {
            doc_id: f[2].to_string(),
            rank,
            score,
        };
        match &mut current {
            Some((qid, entries, _)) if qid == f[0] => entries.push(entry),
            _ => {
                let prev = current.take();
                finish(&mut run, prev)?;
                current = Some((f[0].to_string(), vec![entry], line_no));
            }
        }
    }
    finish(&mut run, current)?;
    Ok(run)
}

pub fn write_run<W: Write>(run: &Run, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    for list in run.lists() {
        for e in list.entries() {
            writeln!(
                w,
                "{} Q0 {} {} {:.6} {}",
                list.query_id(),
                e.doc_id,
                e.rank,
                e.score,
                run.tag
            )?;
        }
    }
    w.flush()?;
    Ok(())
}
