use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rrfuse::config::PipelineConfig;
use rrfuse::corpus::{
    attach_expansions, read_corpus, read_expansions, read_queries, Analyzer, Document,
};
use rrfuse::dense::{EmbeddingProvider, HashEmbedder, PrecomputedProvider, SynonymMap};
use rrfuse::eval::{
    bin_by_query_length, mean_average_precision, overlap_analysis, paired_t_test, recall_at_k,
    MetricReport,
};
use rrfuse::expansion::{write_expanded, ExpansionMethod};
use rrfuse::fusion::{alpha_sweep, oracle_fuse, rrf_fuse_all};
use rrfuse::lexical::IndexBuilder;
use rrfuse::pipeline::{build_passage_store, dense_run, expand_queries, lexical_run};
use rrfuse::synth::{generate, SynthConfig};
use rrfuse::trec::write_run;
use rrfuse::{InvertedIndex, Normalization, PassageKey, Qrels, Run, VectorStore};

use crate::{AnalyzeCommand, AnalyzeCommon, Command, ExpansionArg, MetricArg, UsageError};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Index {
            corpus,
            expansions,
            output,
            config,
        } => index(&corpus, expansions.as_deref(), &output, &config.resolve()?),
        Command::Search {
            mode,
            queries,
            index,
            vectors,
            query_vectors,
            synonyms,
            output,
            config,
        } => {
            let cfg = config.resolve()?;
            let analyzer = cfg.analyzer()?;
            let queries = read_queries(&queries)?;
            let run = if mode.is_dense() {
                let vectors = vectors.ok_or_else(|| {
                    UsageError(format!(
                        "mode `{mode}` needs --vectors (an embedding file, e.g. from `rrfuse embed`)"
                    ))
                })?;
                let store = VectorStore::load(&vectors)?;
                let provider: Box<dyn EmbeddingProvider> = match query_vectors {
                    Some(path) => Box::new(PrecomputedProvider::new(VectorStore::load(&path)?)),
                    None => Box::new(HashEmbedder::new(
                        store.dim(),
                        analyzer.clone(),
                        load_synonyms(&analyzer, synonyms.as_deref())?,
                    )?),
                };
                dense_run(&store, provider.as_ref(), &queries, &cfg, mode)?
            } else {
                let index = index.ok_or_else(|| {
                    UsageError(format!(
                        "mode `{mode}` needs --index (build one with `rrfuse index`)"
                    ))
                })?;
                lexical_run(
                    &InvertedIndex::load(&index)?,
                    &analyzer,
                    &queries,
                    &cfg,
                    mode,
                )?
            };
            write_run(&run, writer(output.as_deref())?)?;
            Ok(())
        }
        Command::Expand {
            method,
            index,
            queries,
            output,
            config,
        } => {
            let cfg = config.resolve()?;
            let method = match method {
                ExpansionArg::Bo1 => ExpansionMethod::Bo1,
                ExpansionArg::Rm3 => ExpansionMethod::Rm3,
            };
            let index = InvertedIndex::load(&index)?;
            let expanded = expand_queries(
                &index,
                &cfg.analyzer()?,
                &read_queries(&queries)?,
                &cfg,
                method,
            )?;
            write_expanded(
                writer(output.as_deref())?,
                expanded.iter().map(|(q, v)| (q.as_str(), v)),
            )?;
            Ok(())
        }
        Command::Embed {
            corpus,
            synonyms,
            whole_documents,
            output,
            config,
        } => {
            let cfg = config.resolve()?;
            let analyzer = cfg.analyzer()?;
            let embedder = HashEmbedder::new(
                cfg.hash_dim,
                analyzer.clone(),
                load_synonyms(&analyzer, synonyms.as_deref())?,
            )?;
            let docs = read_corpus(&corpus)?.collect::<rrfuse::Result<Vec<Document>>>()?;
            let store = if whole_documents {
                let mut store = VectorStore::new(cfg.hash_dim)?;
                for doc in &docs {
                    let text = match &doc.title {
                        Some(t) => format!("{t} {}", doc.text),
                        None => doc.text.clone(),
                    };
                    store.insert(
                        PassageKey::new(doc.doc_id.clone(), 0),
                        &embedder.embed(&doc.doc_id, &text)?,
                    )?;
                }
                store
            } else {
                build_passage_store(&docs, &embedder, cfg.window, cfg.stride)?
            };
            store.save(&output)?;
            println!("vectors\t{}\ndim\t{}", store.len(), store.dim());
            Ok(())
        }
        Command::Fuse {
            runs,
            output,
            config,
        } => {
            let cfg = config.resolve()?;
            if runs.len() == 1 {
                eprintln!("warning: fusing a single run only rescores it by 1/(k + rank)");
            }
            let runs = load_runs(&runs)?;
            let refs: Vec<&Run> = runs.iter().collect();
            write_run(
                &rrf_fuse_all(&refs, &cfg.fusion())?,
                writer(output.as_deref())?,
            )?;
            Ok(())
        }
        Command::Eval {
            run,
            qrels,
            per_query,
            config,
        } => eval(&run, &qrels, per_query.as_deref(), &config.resolve()?),
        Command::Analyze(cmd) => analyze(cmd),
        Command::Synth {
            seed,
            docs,
            queries,
            mismatch_fraction,
            output,
        } => {
            let data = generate(&SynthConfig::new(seed, docs, queries, mismatch_fraction))
                .map_err(|e| UsageError(e.to_string()))?;
            data.write_to(&output)?;
            println!(
                "documents\t{}\nqueries\t{}\njudgments\t{}\nsynonyms\t{}",
                data.docs.len(),
                data.queries.len(),
                data.qrels.num_judgments(),
                data.synonyms.len()
            );
            Ok(())
        }
    }
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_synonyms(analyzer: &Analyzer, path: Option<&Path>) -> Result<SynonymMap> {
    Ok(match path {
        Some(p) => SynonymMap::load(analyzer, p)?,
        None => SynonymMap::default(),
    })
}

fn load_runs(paths: &[PathBuf]) -> Result<Vec<Run>> {
    paths.iter().map(|p| Ok(Run::load(p)?)).collect()
}

fn load_qrels(path: &Path, cfg: &PipelineConfig) -> Result<Qrels> {
    Ok(Qrels::load(path)?.with_threshold(cfg.relevance_threshold)?)
}

fn index(
    corpus: &Path,
    expansions: Option<&Path>,
    output: &Path,
    cfg: &PipelineConfig,
) -> Result<()> {
    let sidecar = expansions.map(read_expansions).transpose()?;
    let mut builder = IndexBuilder::new(cfg.analyzer()?, cfg.index_options());
    for doc in read_corpus(corpus)? {
        let mut doc = doc?;
        if let Some(s) = &sidecar {
            attach_expansions(&mut doc, s);
        }
        builder.add(&doc)?;
    }
    let index = builder.finish()?;
    index.save(output)?;
    println!(
        "documents\t{}\nvocabulary\t{}\navgdl\t{:.4}",
        index.num_docs(),
        index.vocab_size(),
        index.avg_doc_length()
    );
    Ok(())
}

fn eval(run: &Path, qrels: &Path, per_query: Option<&Path>, cfg: &PipelineConfig) -> Result<()> {
    let run = Run::load(run)?;
    let qrels = load_qrels(qrels, cfg)?;
    if !run.query_ids().any(|q| qrels.contains_query(q)) {
        bail!("no query of the run is judged in the qrels");
    }
    let recall = recall_at_k(&run, &qrels, cfg.metric_depth)?;
    let map = mean_average_precision(&run, &qrels, cfg.map_cutoff)?;
    println!("queries_evaluated\t{}", recall.evaluated());
    println!("queries_skipped\t{}", recall.skipped);
    println!("{}\t{:.4}", recall.metric, recall.mean);
    println!("{}\t{:.4}", map.metric, map.mean);
    if let Some(path) = per_query {
        let mut out = writer(Some(path))?;
        writeln!(out, "query_id\t{}\t{}", recall.metric, map.metric)?;
        for (q, r) in &recall.per_query {
            writeln!(out, "{q}\t{r:.6}\t{:.6}", map.per_query[q])?;
        }
        out.flush()?;
    }
    Ok(())
}

fn analyze(cmd: AnalyzeCommand) -> Result<()> {
    match cmd {
        AnalyzeCommand::Overlap { runs, common } => {
            let (cfg, qrels) = common_inputs(&common)?;
            let runs = load_runs(&runs)?;
            let refs: Vec<&Run> = runs.iter().collect();
            let report = overlap_analysis(&refs, &qrels, cfg.metric_depth)?;
            emit(common.output.as_deref(), |out| report.write_tsv(out))
        }
        AnalyzeCommand::Bins {
            runs,
            queries,
            common,
        } => {
            let (cfg, qrels) = common_inputs(&common)?;
            let runs = load_runs(&runs)?;
            let refs: Vec<&Run> = runs.iter().collect();
            let queries = read_queries(&queries)?;
            let report = bin_by_query_length(
                &queries,
                &cfg.query_fields,
                &cfg.analyzer()?,
                &refs,
                &qrels,
                cfg.metric_depth,
            )?;
            emit(common.output.as_deref(), |out| report.write_tsv(out))
        }
        AnalyzeCommand::AlphaSweep {
            run_a,
            run_b,
            grid,
            normalization,
            common,
        } => {
            let (cfg, qrels) = common_inputs(&common)?;
            let normalization: Normalization = normalization
                .parse()
                .map_err(|e: rrfuse::Error| UsageError(e.to_string()))?;
            let (a, b) = (Run::load(&run_a)?, Run::load(&run_b)?);
            let k = cfg.metric_depth;
            let curve = alpha_sweep(&a, &b, &qrels, &grid, k, normalization)?;
            let mut out = writer(common.output.as_deref())?;
            writeln!(out, "alpha\trecall@{k}")?;
            for (alpha, r) in &curve {
                writeln!(out, "{alpha}\t{r:.6}")?;
            }
            out.flush()?;
            let rrf = rrf_fuse_all(&[&a, &b], &cfg.fusion())?;
            let rrf_recall = recall_at_k(&rrf, &qrels, k)?.mean;
            let (best_alpha, best) =
                curve
                    .iter()
                    .copied()
                    .fold((f64::NAN, f64::NEG_INFINITY), |acc, p| {
                        if p.1 > acc.1 {
                            p
                        } else {
                            acc
                        }
                    });
            eprintln!(
                "best alpha {best_alpha}: recall@{k} {best:.4}; RRF recall@{k} {rrf_recall:.4}"
            );
            Ok(())
        }
        AnalyzeCommand::Oracle { runs, common } => {
            let (cfg, qrels) = common_inputs(&common)?;
            let runs = load_runs(&runs)?;
            let refs: Vec<&Run> = runs.iter().collect();
            let report = oracle_fuse(&refs, &qrels, cfg.metric_depth)?;
            emit(common.output.as_deref(), |out| report.write_tsv(out))
        }
        AnalyzeCommand::Ttest {
            run_a,
            run_b,
            metric,
            common,
        } => {
            let (cfg, qrels) = common_inputs(&common)?;
            let per_query = |path: &Path| -> Result<MetricReport> {
                let run = Run::load(path)?;
                Ok(match metric {
                    MetricArg::Recall => recall_at_k(&run, &qrels, cfg.metric_depth)?,
                    MetricArg::Map => mean_average_precision(&run, &qrels, cfg.map_cutoff)?,
                })
            };
            let (a, b) = (per_query(&run_a)?, per_query(&run_b)?);
            let t = paired_t_test(&a.per_query, &b.per_query)?;
            let mut out = writer(common.output.as_deref())?;
            writeln!(out, "metric\tn\tmean_a\tmean_b\tt\tp")?;
            writeln!(
                out,
                "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6e}",
                a.metric, t.n, a.mean, b.mean, t.t, t.p
            )?;
            out.flush()?;
            if t.degenerate {
                eprintln!("warning: all per-query differences are equal; t is infinite");
            }
            Ok(())
        }
    }
}

fn common_inputs(common: &AnalyzeCommon) -> Result<(PipelineConfig, Qrels)> {
    let cfg = common.config.resolve()?;
    let qrels = load_qrels(&common.qrels, &cfg)?;
    Ok((cfg, qrels))
}

fn emit(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> rrfuse::Result<()>,
) -> Result<()> {
    let mut out = writer(path)?;
    write(&mut out)?;
    out.flush()?;
    Ok(())
}
