//! Uniformity test for right-censored samples.
//!
//! The pair kernel is reweighted by the inverse of the estimated censoring
//! survival `K̂_c` at each observed event time (IPCW), and the statistic is
//! self-normalized by a reweighted jackknife-style variance estimate that
//! includes a martingale residual for the estimation of `K̂_c`.

mod ipcw;
mod km;

pub use ipcw::{
    censored_test, censored_test_with, delta_c, delta_c_with, h1_hat, ipcw_weights, sigma_c0_hat,
    variance_parts, w_hat, CensoredOptions, CensoredVarianceParts, IpcwWeights, VarianceMode,
    WeightMode,
};
pub use km::{censoring_km, km_at, KaplanMeierCurve};
