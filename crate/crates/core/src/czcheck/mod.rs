//! Numerical verification: standard-estimate scans of the kernels, lemma
//! property checks, the Riesz identity and the swapped-adjoint profile.

mod identities;
mod lemmas;
mod sampler;
mod scan;

pub use identities::{
    counterexample_closed, counterexample_profile, identity_suite, riesz_identity_check, CounterexampleProfile,
    IdentityRecord,
};
pub use lemmas::{
    cross_term_bound, gaussian_power_absorption, lemma_suite, log_weighted_layer_integral, pi_ball_products,
    pi_integral_ball_bounds, q_convex_comparability, zeta_layer_integral, LemmaOutcome, LemmaSettings, Shift,
    FIT_STABILITY, INEQUALITY_SLACK, LAYER_EXPONENTS, LOG_LAYER_RATES,
};
pub use sampler::{Arg, Perturbed, SamplerSpec, PERTURBATION_RANGE};
pub use scan::{
    growth_probe, growth_reports, scan, scan_growth, scan_refinement, scan_smoothness, smoothness_probe,
    smoothness_reports, summarize, Estimate, EstimateReport, RefinementReport, ScanSummary,
};
