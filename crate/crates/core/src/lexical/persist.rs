//! Versioned binary index file.
//!
//! All integers are little-endian. Layout (version 1):
//!
//! ```text
//! magic           8 bytes  "RRFUSEIX"
//! version         u32      1
//! flags           u32      bit0 expansions, bit1 title field, bit2 text field,
//!                          bit3 expansion limit present
//! max_expansions  u64      0 unless bit3
//! num_docs        u64
//! num_docs x      { id_len u32, id utf-8 bytes, doc_length u32 }
//! num_terms       u64
//! num_terms x     { term_len u32, term utf-8 bytes, df u32,
//!                   df x { doc_gap u32, tf u32 } }
//! ```
//!
//! Documents appear in internal-id order and terms in term-id order. The
//! first gap of a postings list is the doc id itself; later gaps are the
//! difference from the previous doc id. Derived statistics (average length,
//! collection frequencies, forward lists) are recomputed on load.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::index::{DocField, IndexOptions, InvertedIndex, Posting};

pub const MAGIC: [u8; 8] = *b"RRFUSEIX";
pub const FORMAT_VERSION: u32 = 1;

const FLAG_EXPANSIONS: u32 = 1;
const FLAG_TITLE: u32 = 1 << 1;
const FLAG_TEXT: u32 = 1 << 2;
const FLAG_LIMIT: u32 = 1 << 3;

fn put_u32(w: &mut impl Write, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn put_u64(w: &mut impl Write, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn put_str(w: &mut impl Write, s: &str) -> std::io::Result<()> {
    put_u32(w, s.len() as u32)?;
    w.write_all(s.as_bytes())
}

pub fn write_index<W: Write>(index: &InvertedIndex, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    w.write_all(&MAGIC)?;
    put_u32(&mut w, FORMAT_VERSION)?;
    let opts = &index.options;
    let mut flags = 0;
    if opts.include_expansions {
        flags |= FLAG_EXPANSIONS;
    }
    if opts.fields.contains(&DocField::Title) {
        flags |= FLAG_TITLE;
    }
    if opts.fields.contains(&DocField::Text) {
        flags |= FLAG_TEXT;
    }
    if opts.max_expansions.is_some() {
        flags |= FLAG_LIMIT;
    }
    put_u32(&mut w, flags)?;
    put_u64(&mut w, opts.max_expansions.unwrap_or(0) as u64)?;

    put_u64(&mut w, index.doc_ids.len() as u64)?;
    for (id, &len) in index.doc_ids.iter().zip(&index.doc_lengths) {
        put_str(&mut w, id)?;
        put_u32(&mut w, len)?;
    }
    put_u64(&mut w, index.terms.len() as u64)?;
    for (term, list) in index.terms.iter().zip(&index.postings) {
        put_str(&mut w, term)?;
        put_u32(&mut w, list.len() as u32)?;
        let mut prev = 0;
        for p in list {
            put_u32(&mut w, p.doc - prev)?;
            put_u32(&mut w, p.tf)?;
            prev = p.doc;
        }
    }
    w.flush()?;
    Ok(())
}

struct Input<R> {
    r: R,
}

impl<R: Read> Input<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.r.read_exact(&mut buf).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::IndexFormat("truncated file".into()),
            _ => Error::from(e),
        })?;
        Ok(buf)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let mut buf = vec![0u8; len];
        self.r
            .read_exact(&mut buf)
            .map_err(|_| Error::IndexFormat("truncated string".into()))?;
        String::from_utf8(buf).map_err(|_| Error::IndexFormat("invalid utf-8".into()))
    }
}

pub fn read_index<R: Read>(input: R) -> Result<InvertedIndex> {
    let mut r = Input {
        r: BufReader::new(input),
    };
    if r.bytes::<8>()? != MAGIC {
        return Err(Error::IndexFormat("bad magic header".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::IndexFormat(format!("unsupported version {version}")));
    }
    let flags = r.u32()?;
    let limit = r.u64()?;
    let mut fields = std::collections::BTreeSet::new();
    if flags & FLAG_TITLE != 0 {
        fields.insert(DocField::Title);
    }
    if flags & FLAG_TEXT != 0 {
        fields.insert(DocField::Text);
    }
    let options = IndexOptions {
        fields,
        include_expansions: flags & FLAG_EXPANSIONS != 0,
        max_expansions: (flags & FLAG_LIMIT != 0).then_some(limit as usize),
    };

    let num_docs = r.u64()? as usize;
    let mut doc_ids = Vec::with_capacity(num_docs.min(1 << 20));
    let mut doc_lengths = Vec::with_capacity(num_docs.min(1 << 20));
    for _ in 0..num_docs {
        doc_ids.push(r.string()?);
        doc_lengths.push(r.u32()?);
    }
    let num_terms = r.u64()? as usize;
    let mut terms = Vec::with_capacity(num_terms.min(1 << 20));
    let mut postings = Vec::with_capacity(num_terms.min(1 << 20));
    for _ in 0..num_terms {
        terms.push(r.string()?);
        let df = r.u32()? as usize;
        let mut list = Vec::with_capacity(df.min(num_docs));
        let mut doc = 0u32;
        for i in 0..df {
            let gap = r.u32()?;
            if i > 0 && gap == 0 {
                return Err(Error::IndexFormat("non-increasing postings".into()));
            }
            doc = doc
                .checked_add(gap)
                .filter(|&d| (d as usize) < num_docs)
                .ok_or_else(|| Error::IndexFormat("posting doc id out of range".into()))?;
            list.push(Posting { doc, tf: r.u32()? });
        }
        postings.push(list);
    }
    let mut trailing = [0u8; 1];
    if r.r.read(&mut trailing)? != 0 {
        return Err(Error::IndexFormat("trailing bytes".into()));
    }
    InvertedIndex::from_parts(terms, postings, doc_ids, doc_lengths, options)
}

impl InvertedIndex {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        write_index(self, file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        read_index(file)
    }
}
