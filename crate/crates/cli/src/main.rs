//! `rrfuse`: index, retrieve, expand, embed, fuse, evaluate and analyze
//! TREC-style retrieval runs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rrfuse::config::{keys_help, PipelineConfig};
use rrfuse::SearchMode;

/// Exit status for problems with the command line itself.
const EXIT_USAGE: u8 = 1;
/// Exit status for unreadable or invalid data.
const EXIT_DATA: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rrfuse",
    version,
    about = "Hybrid lexical/dense retrieval with reciprocal rank fusion",
    after_long_help = keys_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Default)]
struct ConfigArgs {
    /// Start from a named collection preset
    /// (msmarco-passage, msmarco-doc, orcas, robust04, trec-covid).
    #[arg(long)]
    preset: Option<String>,
    /// `key = value` configuration file, applied after the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a single key; repeatable, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and persist a BM25 inverted index.
    #[command(after_help = keys_help())]
    Index {
        /// JSON-lines corpus (`doc_id`, `text`, optional `title`, `expansions`).
        #[arg(long)]
        corpus: PathBuf,
        /// Sidecar `doc_id<TAB>expansion` lines appended to documents.
        #[arg(long)]
        expansions: Option<PathBuf>,
        #[arg(long, short)]
        output: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Retrieve a run for a query set.
    #[command(after_help = keys_help())]
    Search {
        /// Retrieval mode.
        #[arg(long, value_parser = parse_mode)]
        mode: SearchMode,
        /// Tab-separated queries: `query_id<TAB>title[<TAB>description[<TAB>narrative]]`.
        #[arg(long)]
        queries: PathBuf,
        /// Index from `rrfuse index` (lexical modes).
        #[arg(long)]
        index: Option<PathBuf>,
        /// Embedding file from `rrfuse embed` or an external encoder (dense modes).
        #[arg(long)]
        vectors: Option<PathBuf>,
        /// Precomputed query embeddings (passage index 0); default is the hashing embedder.
        #[arg(long)]
        query_vectors: Option<PathBuf>,
        /// `term<TAB>canonical` synonym map for the hashing embedder.
        #[arg(long)]
        synonyms: Option<PathBuf>,
        /// Run file to write; standard output if omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Write Bo1 or RM3 expanded query vectors (`query_id<TAB>term<TAB>weight`).
    #[command(after_help = keys_help())]
    Expand {
        #[arg(long, value_enum)]
        method: ExpansionArg,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Embed corpus passages with the hashing embedder.
    #[command(after_help = keys_help())]
    Embed {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        synonyms: Option<PathBuf>,
        /// One vector per document instead of one per passage.
        #[arg(long)]
        whole_documents: bool,
        #[arg(long, short)]
        output: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Reciprocal rank fusion of run files.
    #[command(after_help = keys_help())]
    Fuse {
        /// Run files; one file is passed through rescored by 1/(k + rank).
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Recall@K and MAP of a run.
    #[command(after_help = keys_help())]
    Eval {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        qrels: PathBuf,
        /// Per-query `query_id<TAB>recall<TAB>ap` table.
        #[arg(long)]
        per_query: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Plot-ready TSV analyses.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Generate a synthetic collection with a controllable vocabulary gap.
    Synth {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        docs: usize,
        #[arg(long, default_value_t = 100)]
        queries: usize,
        /// Probability that a query also gets a synonym-only relevant document.
        #[arg(long, default_value_t = 0.5)]
        mismatch_fraction: f64,
        /// Directory for corpus.jsonl, queries.tsv, qrels.txt and synonyms.tsv.
        #[arg(long, short)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct AnalyzeCommon {
    #[arg(long)]
    qrels: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Subcommand)]
enum AnalyzeCommand {
    /// Relevant documents found in the top K by each subset of 2-3 runs.
    #[command(after_help = keys_help())]
    Overlap {
        #[arg(required = true, num_args = 2..=3)]
        runs: Vec<PathBuf>,
        #[command(flatten)]
        common: AnalyzeCommon,
    },
    /// Mean Recall@K per run, binned by query length.
    #[command(after_help = keys_help())]
    Bins {
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long)]
        queries: PathBuf,
        #[command(flatten)]
        common: AnalyzeCommon,
    },
    /// Recall@K of score interpolation over an alpha grid.
    #[command(name = "alpha-sweep", after_help = keys_help())]
    AlphaSweep {
        run_a: PathBuf,
        run_b: PathBuf,
        /// Comma-separated alphas in [0, 1].
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"
        )]
        grid: Vec<f64>,
        #[arg(long, default_value = "min-max")]
        normalization: String,
        #[command(flatten)]
        common: AnalyzeCommon,
    },
    /// Per-query recall of the union of every run's top K.
    #[command(after_help = keys_help())]
    Oracle {
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[command(flatten)]
        common: AnalyzeCommon,
    },
    /// Paired t-test between two runs on a per-query metric.
    #[command(after_help = keys_help())]
    Ttest {
        run_a: PathBuf,
        run_b: PathBuf,
        #[arg(long, value_enum, default_value = "recall")]
        metric: MetricArg,
        #[command(flatten)]
        common: AnalyzeCommon,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExpansionArg {
    Bo1,
    Rm3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Recall,
    Map,
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    s.parse().map_err(|e: rrfuse::Error| e.to_string())
}

/// A problem with how the command was invoked rather than with its data.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl ConfigArgs {
    fn resolve(&self) -> anyhow::Result<PipelineConfig> {
        let mut cfg = match &self.preset {
            Some(name) => PipelineConfig::preset(name).map_err(|e| UsageError(e.to_string()))?,
            None => PipelineConfig::default(),
        };
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for kv in &self.overrides {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| UsageError(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            cfg.set(k.trim(), v)
                .map_err(|e| UsageError(e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_DATA)
            }
        }
    }
}
