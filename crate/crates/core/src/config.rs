//! Pipeline configuration: every tunable of the retrieval stack, loadable
//! from a `key = value` file.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::corpus::{Analyzer, QueryField, StopwordList};
use crate::error::{Error, Result};
use crate::expansion::PrfConfig;
use crate::fusion::FusionConfig;
use crate::lexical::{Bm25Params, DocField, IndexOptions};

/// Recognised configuration keys with a short description.
pub const KEYS: &[(&str, &str)] = &[
    ("index_fields", "document fields to index: title,text"),
    (
        "include_expansions",
        "append document expansions to indexed text: true|false",
    ),
    (
        "max_expansions",
        "expansion strings used per document: N|all",
    ),
    (
        "query_fields",
        "query fields forming the query text: title,description,narrative",
    ),
    ("fb_docs", "feedback documents for Bo1/RM3"),
    (
        "fb_terms",
        "expansion terms for Bo1/RM3 (0 disables expansion)",
    ),
    ("rm3_lambda", "RM3 weight of the original query in [0,1]"),
    ("rm3_mu", "RM3 Dirichlet smoothing parameter (> 0)"),
    ("window", "passage window in sentences"),
    ("stride", "passage stride in sentences"),
    ("k1", "BM25 k1 (>= 0)"),
    ("b", "BM25 b in [0,1]"),
    ("rrf_k", "RRF rank offset k (> 0)"),
    ("fusion_depth", "documents kept per fused query"),
    ("depth", "retrieval depth per query"),
    ("metric_depth", "K for Recall@K"),
    ("map_cutoff", "rank cutoff for average precision"),
    (
        "relevance_threshold",
        "minimum grade counted as relevant (>= 1)",
    ),
    ("hash_dim", "dimension of the hashing embedder"),
    (
        "stopwords",
        "stopword file (one word per line) replacing the built-in list",
    ),
    ("stem", "apply Porter stemming: true|false"),
];

/// Lines listing every key, for `--help` output.
pub fn keys_help() -> String {
    let mut s = String::from(
        "Configuration keys (config file lines `key = value`, or `--set key=value`):\n",
    );
    for (k, d) in KEYS {
        let _ = writeln!(s, "  {k:<20} {d}");
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub index_fields: BTreeSet<DocField>,
    pub include_expansions: bool,
    pub max_expansions: Option<usize>,
    pub query_fields: BTreeSet<QueryField>,
    pub prf: PrfConfig,
    pub window: usize,
    pub stride: usize,
    pub bm25: Bm25Params,
    pub rrf_k: f64,
    pub fusion_depth: usize,
    pub depth: usize,
    pub metric_depth: usize,
    pub map_cutoff: usize,
    pub relevance_threshold: i32,
    pub hash_dim: usize,
    pub stopwords: Option<PathBuf>,
    pub stem: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            index_fields: IndexOptions::default().fields,
            include_expansions: false,
            max_expansions: None,
            query_fields: [QueryField::Title].into_iter().collect(),
            prf: PrfConfig::default(),
            window: 10,
            stride: 5,
            bm25: Bm25Params::default(),
            rrf_k: 60.0,
            fusion_depth: 1000,
            depth: 1000,
            metric_depth: 1000,
            map_cutoff: 1000,
            relevance_threshold: 1,
            hash_dim: 256,
            stopwords: None,
            stem: true,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!(
            "invalid boolean `{value}` for `{key}`"
        ))),
    }
}

fn parse_list<T: std::str::FromStr<Err = Error> + Ord>(value: &str) -> Result<BTreeSet<T>> {
    value
        .split(|c: char| c == ',' || c == '+' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

impl PipelineConfig {
    /// Per-collection setups of the lexical models (index fields, query
    /// fields, feedback docs/terms, expansions used).
    pub fn preset(name: &str) -> Result<Self> {
        let base = Self::default();
        let fields = |fs: &[QueryField]| fs.iter().copied().collect::<BTreeSet<_>>();
        let (qf, fb_docs, fb_terms, expansions, index_fields) = match name {
            "msmarco-passage" => (fields(&[QueryField::Title]), 5, 10, 40, None),
            "msmarco-doc" => (fields(&[QueryField::Title]), 5, 5, 20, None),
            "orcas" => (fields(&[QueryField::Title]), 10, 10, 20, None),
            "robust04" => (
                fields(&[
                    QueryField::Title,
                    QueryField::Description,
                    QueryField::Narrative,
                ]),
                5,
                10,
                10,
                None,
            ),
            "trec-covid" => (
                fields(&[
                    QueryField::Title,
                    QueryField::Description,
                    QueryField::Narrative,
                ]),
                20,
                40,
                10,
                Some([DocField::Text].into_iter().collect()),
            ),
            other => return Err(Error::Config(format!("unknown preset `{other}`"))),
        };
        Ok(Self {
            query_fields: qf,
            prf: PrfConfig {
                fb_docs,
                fb_terms,
                ..base.prf
            },
            max_expansions: Some(expansions),
            index_fields: index_fields.unwrap_or(base.index_fields.clone()),
            ..base
        })
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "index_fields" => self.index_fields = parse_list(value)?,
            "include_expansions" => self.include_expansions = parse_bool(key, value)?,
            "max_expansions" => {
                self.max_expansions = match value {
                    "all" | "none" => None,
                    v => Some(parse_num(key, v)?),
                }
            }
            "query_fields" => self.query_fields = parse_list(value)?,
            "fb_docs" => self.prf.fb_docs = parse_num(key, value)?,
            "fb_terms" => self.prf.fb_terms = parse_num(key, value)?,
            "rm3_lambda" => self.prf.rm3_lambda = parse_num(key, value)?,
            "rm3_mu" => self.prf.rm3_mu = parse_num(key, value)?,
            "window" => self.window = parse_num(key, value)?,
            "stride" => self.stride = parse_num(key, value)?,
            "k1" => self.bm25.k1 = parse_num(key, value)?,
            "b" => self.bm25.b = parse_num(key, value)?,
            "rrf_k" => self.rrf_k = parse_num(key, value)?,
            "fusion_depth" => self.fusion_depth = parse_num(key, value)?,
            "depth" => self.depth = parse_num(key, value)?,
            "metric_depth" => self.metric_depth = parse_num(key, value)?,
            "map_cutoff" => self.map_cutoff = parse_num(key, value)?,
            "relevance_threshold" => self.relevance_threshold = parse_num(key, value)?,
            "hash_dim" => self.hash_dim = parse_num(key, value)?,
            "stopwords" => self.stopwords = Some(PathBuf::from(value)),
            "stem" => self.stem = parse_bool(key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown configuration key `{other}`"
                )))
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse("config", i + 1, "expected `key = value`"))?;
            self.set(k.trim(), v)
                .map_err(|e| Error::parse("config", i + 1, e.to_string()))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.prf.validate()?;
        self.bm25.validate()?;
        crate::corpus::window_ranges(1, self.window, self.stride)?;
        FusionConfig {
            rrf_k: self.rrf_k,
            output_depth: self.fusion_depth,
        }
        .validate()?;
        if self.index_fields.is_empty() && !self.include_expansions {
            return Err(Error::Config(
                "nothing to index: no fields and no expansions".into(),
            ));
        }
        if self.query_fields.is_empty() {
            return Err(Error::Config("query_fields is empty".into()));
        }
        for (name, v) in [
            ("depth", self.depth),
            ("fusion_depth", self.fusion_depth),
            ("metric_depth", self.metric_depth),
            ("map_cutoff", self.map_cutoff),
            ("hash_dim", self.hash_dim),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be >= 1")));
            }
        }
        if self.relevance_threshold < 1 {
            return Err(Error::Config("relevance_threshold must be >= 1".into()));
        }
        Ok(())
    }

    pub fn index_options(&self) -> IndexOptions {
        IndexOptions {
            fields: self.index_fields.clone(),
            include_expansions: self.include_expansions,
            max_expansions: self.max_expansions,
        }
    }

    pub fn fusion(&self) -> FusionConfig {
        FusionConfig {
            rrf_k: self.rrf_k,
            output_depth: self.fusion_depth,
        }
    }

    pub fn analyzer(&self) -> Result<Analyzer> {
        let stopwords = match &self.stopwords {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                StopwordList::parse(&text)
            }
            None => StopwordList::smart(),
        };
        Ok(Analyzer::new(stopwords, self.stem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_is_settable() {
        let samples = [
            ("index_fields", "text"),
            ("include_expansions", "true"),
            ("max_expansions", "20"),
            ("query_fields", "title,description"),
            ("fb_docs", "20"),
            ("fb_terms", "40"),
            ("rm3_lambda", "0.3"),
            ("rm3_mu", "1000"),
            ("window", "8"),
            ("stride", "4"),
            ("k1", "0.9"),
            ("b", "0.4"),
            ("rrf_k", "10"),
            ("fusion_depth", "100"),
            ("depth", "100"),
            ("metric_depth", "100"),
            ("map_cutoff", "100"),
            ("relevance_threshold", "2"),
            ("hash_dim", "64"),
            ("stopwords", "/tmp/none"),
            ("stem", "false"),
        ];
        assert_eq!(samples.len(), KEYS.len());
        let mut cfg = PipelineConfig::default();
        for (k, v) in samples {
            cfg.set(k, v).unwrap();
            assert!(keys_help().contains(k));
        }
        assert_eq!(cfg.prf.fb_terms, 40);
        assert_eq!(cfg.window, 8);
        assert!(!cfg.stem);
        assert!(cfg.set("bogus", "1").is_err());
    }

    #[test]
    fn file_format() {
        let mut cfg = PipelineConfig::default();
        cfg.apply_str("# setup\nfb_docs = 20  # feedback\n\nquery_fields = title+narrative\n")
            .unwrap();
        assert_eq!(cfg.prf.fb_docs, 20);
        assert!(cfg.query_fields.contains(&QueryField::Narrative));
        assert!(cfg.apply_str("fb_docs 20").is_err());
        assert!(cfg.apply_str("fb_docs = many").is_err());
    }

    #[test]
    fn presets_and_validation() {
        let covid = PipelineConfig::preset("trec-covid").unwrap();
        assert_eq!((covid.prf.fb_docs, covid.prf.fb_terms), (20, 40));
        assert_eq!(covid.index_fields, [DocField::Text].into_iter().collect());
        assert!(covid.validate().is_ok());
        assert!(PipelineConfig::preset("nope").is_err());
        let bad = PipelineConfig {
            stride: 20,
            ..PipelineConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
