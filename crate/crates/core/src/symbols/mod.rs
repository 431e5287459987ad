//! Symbol families, lattice sampling, class-membership checks, the `𝔸^m`
//! norm and the frequency splitting.

mod amnorm;
pub mod builtin;
mod check;
mod class;
mod grid;
pub mod split;

pub use amnorm::amnorm;
pub use builtin::{builtin, BuiltinParams};
pub use check::{
    check_class, check_class_with, class_derivative, decay_constant, Ceiling, DecayReport,
    OrderEntry,
};
pub use class::{is_degenerate_angle, line_slope, m_plus, ClassSpec, Variant, MAX_DERIV_ORDER};
pub use grid::{sample_linear_symbol, sample_symbol, LinearSymbolGrid, SymbolData, SymbolGrid};
pub use split::{split_symbol, SplitSymbol};
