//! Shared workloads for the retrieval benchmarks.

use rrfuse::config::PipelineConfig;
use rrfuse::corpus::Analyzer;
use rrfuse::dense::{HashEmbedder, SynonymMap};
use rrfuse::lexical::{build_index, IndexOptions};
use rrfuse::pipeline::{build_passage_store, dense_run, lexical_run};
use rrfuse::synth::{generate, SynthConfig, SynthDataset};
use rrfuse::{InvertedIndex, Run, SearchMode, VectorStore};

pub struct Workload {
    pub data: SynthDataset,
    pub analyzer: Analyzer,
    pub index: InvertedIndex,
    pub embedder: HashEmbedder,
    pub store: VectorStore,
    pub config: PipelineConfig,
}

impl Workload {
    /// Synthetic collection with a BM25 index and a passage store.
    pub fn new(n_docs: usize, n_queries: usize, dim: usize) -> Self {
        let data = generate(&SynthConfig::new(17, n_docs, n_queries, 0.5)).expect("synthetic data");
        let analyzer = Analyzer::default();
        let index = build_index(&data.docs, &analyzer, IndexOptions::default()).expect("index");
        let pairs = data.synonyms.iter().map(|(a, b)| (a.as_str(), b.as_str()));
        let synonyms = SynonymMap::from_pairs(&analyzer, pairs);
        let embedder = HashEmbedder::new(dim, analyzer.clone(), synonyms).expect("embedder");
        let config = PipelineConfig::default();
        let store = build_passage_store(&data.docs, &embedder, config.window, config.stride)
            .expect("store");
        Self {
            data,
            analyzer,
            index,
            embedder,
            store,
            config,
        }
    }

    pub fn lexical(&self, mode: SearchMode) -> Run {
        lexical_run(
            &self.index,
            &self.analyzer,
            &self.data.queries,
            &self.config,
            mode,
        )
        .expect("lexical run")
    }

    pub fn dense(&self) -> Run {
        dense_run(
            &self.store,
            &self.embedder,
            &self.data.queries,
            &self.config,
            SearchMode::DenseMaxPassage,
        )
        .expect("dense run")
    }
}
