//! Corpus units, text normalisation and passaging.

mod io;
mod passage;
pub mod porter;
mod ranked;
mod stopwords;
mod tokenize;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{
    attach_expansions, read_corpus, read_expansions, read_queries, write_corpus, write_queries,
    CorpusReader,
};
pub use passage::{split_passages, split_sentences, window_ranges, Passage};
pub use ranked::{RankedEntry, RankedList};
pub use stopwords::StopwordList;
pub use tokenize::{tokenize, Analyzer, TokenStream};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default)]
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    /// Generated expansion strings (e.g. predicted queries), one per passage
    /// or per document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansions: Option<Vec<String>>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            text: text.into(),
            title: None,
            expansions: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub query_id: String,
    pub title: String,
    pub description: Option<String>,
    pub narrative: Option<String>,
}

impl Query {
    pub fn new(query_id: impl Into<String>, title: impl Into<String>) -> Self {
        Self {
            query_id: query_id.into(),
            title: title.into(),
            description: None,
            narrative: None,
        }
    }

    fn field(&self, field: QueryField) -> Option<&str> {
        match field {
            QueryField::Title => Some(self.title.as_str()),
            QueryField::Description => self.description.as_deref(),
            QueryField::Narrative => self.narrative.as_deref(),
        }
    }
}

/// Query fields, ordered as they are concatenated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueryField {
    Title,
    Description,
    Narrative,
}

impl FromStr for QueryField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "title" | "query" => Ok(QueryField::Title),
            "description" | "desc" | "des" | "question" => Ok(QueryField::Description),
            "narrative" | "narr" => Ok(QueryField::Narrative),
            other => Err(Error::Config(format!("unknown query field `{other}`"))),
        }
    }
}

impl fmt::Display for QueryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryField::Title => "title",
            QueryField::Description => "description",
            QueryField::Narrative => "narrative",
        })
    }
}

/// Joins the selected fields with single spaces in title, description,
/// narrative order. Missing or blank fields are skipped.
pub fn effective_query_text(q: &Query, fields: &BTreeSet<QueryField>) -> Result<String> {
    let text = fields
        .iter()
        .filter_map(|&f| q.field(f))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    if text.is_empty() {
        return Err(Error::Invalid(format!(
            "query `{}` has no text in the selected fields",
            q.query_id
        )));
    }
    Ok(text)
}
