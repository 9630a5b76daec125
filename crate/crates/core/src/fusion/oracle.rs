use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::eval::{MetricReport, Qrels};
use crate::trec::Run;

/// Recall of the union of every run's top-K, ignoring rank positions.
///
/// Queries without relevant documents are skipped and counted.
pub fn oracle_fuse(runs: &[&Run], qrels: &Qrels, k: usize) -> Result<MetricReport> {
    if runs.is_empty() {
        return Err(Error::Invalid(
            "oracle fusion needs at least one run".into(),
        ));
    }
    qrels.ensure_non_empty()?;
    let mut report = MetricReport::new(format!("oracle_recall@{k}"), k);
    for qid in qrels.query_ids() {
        let relevant = qrels.relevant(qid);
        if relevant.is_empty() {
            report.skipped += 1;
            continue;
        }
        let found: HashSet<&str> = runs
            .iter()
            .filter_map(|r| r.get(qid))
            .flat_map(|l| l.top(k))
            .filter(|d| relevant.contains(d))
            .collect();
        report
            .per_query
            .insert(qid.to_string(), found.len() as f64 / relevant.len() as f64);
    }
    report.finish();
    Ok(report)
}
