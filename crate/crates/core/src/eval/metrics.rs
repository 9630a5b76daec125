use std::collections::BTreeMap;
use std::io::Write;

use crate::error::Result;
use crate::trec::Run;

use super::Qrels;

/// Per-query values of one metric and their arithmetic mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub metric: String,
    pub depth: usize,
    pub per_query: BTreeMap<String, f64>,
    pub mean: f64,
    /// Judged queries left out because they have no relevant documents.
    pub skipped: usize,
}

impl MetricReport {
    pub fn new(metric: impl Into<String>, depth: usize) -> Self {
        Self {
            metric: metric.into(),
            depth,
            per_query: BTreeMap::new(),
            mean: 0.0,
            skipped: 0,
        }
    }

    pub(crate) fn finish(&mut self) {
        let n = self.per_query.len();
        self.mean = if n == 0 {
            0.0
        } else {
            self.per_query.values().sum::<f64>() / n as f64
        };
    }

    pub fn evaluated(&self) -> usize {
        self.per_query.len()
    }

    /// `query_id<TAB>value` rows, sorted by query id.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "query_id\t{}", self.metric)?;
        for (q, v) in &self.per_query {
            writeln!(out, "{q}\t{v:.6}")?;
        }
        Ok(())
    }
}

fn evaluate(
    run: &Run,
    qrels: &Qrels,
    name: String,
    depth: usize,
    per_query: impl Fn(Option<&crate::RankedList>, &std::collections::HashSet<&str>) -> f64,
) -> Result<MetricReport> {
    qrels.ensure_non_empty()?;
    let mut report = MetricReport::new(name, depth);
    for qid in qrels.query_ids() {
        let relevant = qrels.relevant(qid);
        if relevant.is_empty() {
            report.skipped += 1;
            continue;
        }
        report
            .per_query
            .insert(qid.to_string(), per_query(run.get(qid), &relevant));
    }
    report.finish();
    Ok(report)
}

/// `|relevant ∩ top-K| / |relevant|` per judged query; absent queries score 0.
pub fn recall_at_k(run: &Run, qrels: &Qrels, k: usize) -> Result<MetricReport> {
    evaluate(run, qrels, format!("recall@{k}"), k, |list, relevant| {
        let hits = list.map_or(0, |l| l.top(k).filter(|d| relevant.contains(d)).count());
        hits as f64 / relevant.len() as f64
    })
}

/// Average precision over the first `cutoff` ranks, divided by the total
/// number of relevant documents.
pub fn mean_average_precision(run: &Run, qrels: &Qrels, cutoff: usize) -> Result<MetricReport> {
    evaluate(
        run,
        qrels,
        format!("map@{cutoff}"),
        cutoff,
        |list, relevant| {
            let Some(list) = list else { return 0.0 };
            let mut hits = 0usize;
            let mut sum = 0.0;
            for (i, d) in list.top(cutoff).enumerate() {
                if relevant.contains(d) {
                    hits += 1;
                    sum += hits as f64 / (i + 1) as f64;
                }
            }
            sum / relevant.len() as f64
        },
    )
}
