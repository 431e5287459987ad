//! Numerical engine for bilinear pseudodifferential operators on a periodic grid.
//!
//! A bilinear operator with symbol `σ(x, α, β)` acts on a pair of periodic
//! functions by
//!
//! ```text
//! T_σ(f, g)(x) = Σ_{α, β} σ(x, α, β) f̂(α) ĝ(β) e^{i x (α + β)}
//! ```
//!
//! where the sums run over the frequency lattice of a [`lattice::GridSpec`].
//! The crate builds symbols from a small expression language
//! ([`symlang`]), checks their derivative-decay classes ([`symbols`]), applies
//! the operators ([`quantize`]), measures Lebesgue / Sobolev / modulation norms
//! ([`norms`]) and computes adjoints and compositions both exactly on the grid
//! and through truncated asymptotic expansions ([`calculus`]). The [`verify`]
//! module strings all of this together into seeded, reproducible reports.

pub mod calculus;
pub mod convention;
pub mod error;
pub mod lattice;
pub mod norms;
pub mod quantize;
pub mod report;
pub mod symbols;
pub mod symlang;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{GridSpec, SampledFunction};
pub use num_complex::Complex64;
pub use symlang::{ComplexExpr, SymbolExpr};
