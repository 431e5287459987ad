//! Seeded experiments: ensembles of band-limited test functions, empirical
//! boundedness ratios, remainder-slope fits and the identity suite.
//!
//! Trial `t` of an ensemble with seed `s` draws from a ChaCha stream seeded
//! with `s ^ t`, so trials are independent and reports are reproducible.

mod ensemble;
mod study;
mod suite;

pub use ensemble::{complex_gaussian, random_function, random_symbol, Ensemble};
pub use study::{
    boundedness_ratio, boundedness_study, epsilon_necessity_probe, holder_constant,
    peetre_violations, remainder_slope, Exponents, GridSummary, RatioReport, RemainderFit,
    RemainderSlopeReport, TrialRatio,
};
pub use suite::{adjoint_pairing_error, identity_suite, nyquist_free};
