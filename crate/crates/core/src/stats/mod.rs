//! Numeric foundation: special functions, quantiles and the sample-size formula.

pub mod quantile;
pub mod sample_size;
pub mod special;

pub use quantile::{chisq_quantile, normal_quantile};
pub use sample_size::{
    arcsine_transform, sample_size, scale_ratio, ErrorRate, SampleSize, SampleSizeResult, Sided,
    TestParams,
};
