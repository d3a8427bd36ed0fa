//! Chaos kernels, the index set, explicit bounds, numeric norms and the divergence probe.

mod alpha;
mod bound;
mod kernel;
mod norm;
mod probe;
mod time2;

pub use alpha::{
    alpha_index_set, alpha_majorant, beta_entry, beta_total, increment_weight, log_alpha_sum,
    AlphaIndex, BetaExponents, MAX_ENUMERATED_ORDER,
};
pub use bound::{chaos_norm_upper_bound, j_exponent, j_integral, UpperBound};
pub use kernel::{chaos_kernel_hat, chaos_kernel_hat_sorted};
pub use norm::{
    chaos_norm_white, chaos_norm_white_mc, ChaosOrderResult, NormMethod, MAX_NUMERIC_ORDER,
};
pub use probe::{
    default_cutoffs, second_chaos_divergence_probe, ProbeParams, ProbeReport, Verdict,
    DIVERGENCE_DELTA,
};
pub use time2::{simplex_sine_sq, simplex_sine_sq_limit};
