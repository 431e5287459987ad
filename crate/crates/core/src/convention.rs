//! The discrete Fourier convention used by every module.
//!
//! A grid with `N` points on `[0, L)` has nodes `x_n = n L / N` and the
//! frequency lattice `ξ_k = k · 2π / L` for integers `-N/2 <= k < N/2`.
//! Spectra are stored in *centered* order: slot `j` holds mode `k = j - N/2`,
//! so slot 0 is the Nyquist mode.
//!
//! Forward transform and synthesis:
//!
//! ```text
//! c_k    = (1/N) Σ_n f(x_n) e^{-i ξ_k x_n}
//! f(x_n) = Σ_k c_k e^{i ξ_k x_n}
//! ```
//!
//! so `c_k` plays the role of `f̂(ξ_k)` in the operator formula and a constant
//! symbol `σ ≡ 1` reproduces the pointwise product. Parseval reads
//!
//! ```text
//! Σ_n |f(x_n)|² Δx = L · Σ_k |c_k|²
//! ```
//!
//! i.e. the normalization constant is [`parseval_constant`] `= L`.
//!
//! Pairings: the bilinear operators are transposed under the *bilinear*
//! pairing `⟨u, v⟩ = Δx Σ_n u(x_n) v(x_n)`; linear operators are adjoined under
//! the sesquilinear `⟨u, v⟩ = Δx Σ_n u(x_n) conj(v(x_n))`.
//!
//! The short-time Fourier transform is measured with `dx · dξ / 2π`, which makes
//! `‖V_φ f‖_{L²} = ‖φ‖_{L²} ‖f‖_{L²}` hold exactly on the lattice.

use std::f64::consts::PI;

/// Constant `c` in `‖f‖²_{L²} = c · Σ_k |c_k|²`.
pub fn parseval_constant(period: f64) -> f64 {
    period
}

/// Spacing of the physical frequency lattice.
pub fn frequency_unit(period: f64) -> f64 {
    2.0 * PI / period
}

/// Weight of one frequency cell in the outer (ξ) norm of the STFT.
pub fn stft_frequency_weight(period: f64) -> f64 {
    frequency_unit(period) / (2.0 * PI)
}
