//! Adjoints and compositions: exact lattice computations and their truncated
//! symbolic expansions.
//!
//! Transposes are taken with respect to the bilinear pairing
//! `⟨u, v⟩ = Δx Σ u v`:
//!
//! ```text
//! ⟨T_σ(f, g), h⟩ = ⟨T_{σ*1}(h, g), f⟩ = ⟨T_{σ*2}(f, h), g⟩
//! ```
//!
//! Linear adjoints use the sesquilinear pairing `Δx Σ u v̄`.

mod duality;
mod exact;
mod expansion;

pub use duality::{adjoint_angle, duality_class_map, Which};
pub use exact::{
    adjoint_exact, bilinear_pairing, compose_left_exact, compose_right_exact,
    extract_bilinear_symbol, linear_adjoint_exact, linear_compose_exact, operator_matrix,
    OperatorMatrix,
};
pub use expansion::{
    adjoint_expansion, compose_left_expansion, compose_right_expansion,
    linear_adjoint_expansion, linear_compose_expansion, principal_conjugation, ExactCoeff,
    ExpansionKind, ExpansionSeries, ExpansionTerm,
};
