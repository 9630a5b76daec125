//! Evaluation: Recall@K, MAP, paired t-test, query-length bins and overlap
//! of relevant results across models.

mod analysis;
mod metrics;
mod qrels;
mod ttest;

pub use analysis::{
    bin_by_query_length, overlap_analysis, Bin, BinnedReport, OverlapReport, MAX_BIN,
};
pub use metrics::{mean_average_precision, recall_at_k, MetricReport};
pub use qrels::{parse_qrels, write_qrels, Qrels};
pub use ttest::{paired_t_test, paired_t_test_values, student_t_two_tailed_p, TTest};
