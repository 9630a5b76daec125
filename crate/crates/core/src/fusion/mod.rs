//! Rank fusion: reciprocal rank fusion, score interpolation and the oracle
//! upper bound.

mod interpolate;
mod oracle;
mod rrf;

pub use interpolate::{
    alpha_sweep, interpolate, interpolate_runs, min_max_normalize, InterpolationConfig,
    Normalization,
};
pub use oracle::oracle_fuse;
pub use rrf::{rrf_fuse, rrf_fuse_all, rrf_tag, FusionConfig};
