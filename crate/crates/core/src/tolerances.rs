//! Every tolerance and threshold used by checks and reports.

/// DFT round trip and Parseval, relative.
pub const DFT_ROUND_TRIP: f64 = 1e-12;
pub const PARSEVAL: f64 = 1e-12;

/// Identities of the quadrature `T_σ` (bilinearity, Leibniz, separability,
/// accelerated vs reference path), relative.
pub const OPERATOR_IDENTITY: f64 = 1e-12;

/// `J_s` followed by `J_{-s}`.
pub const BESSEL_INVERSE: f64 = 1e-12;

/// Bilinear adjoint pairing identity, relative to `‖T(f,g)‖ ‖h‖`.
pub const ADJOINT_PAIRING: f64 = 1e-11;

/// Double adjoint against the original symbol, relative to `max |σ|`.
pub const DOUBLE_ADJOINT: f64 = 1e-11;

/// x-independent adjoint against its closed form.
pub const CLOSED_FORM: f64 = 1e-12;

/// Angle involution `θ ↦ θ*1 ↦ θ`.
pub const ANGLE_INVOLUTION: f64 = 1e-14;

/// Exact composition with x-independent factors.
pub const COMPOSITION_EXACT: f64 = 1e-12;

/// Operator-extraction checks on random pairs.
pub const COMPOSITION_PAIRS: f64 = 1e-11;

/// Terminating expansion against the exact grid symbol (bilinear).
pub const EXPANSION_EXACT: f64 = 1e-9;

/// Terminating expansion against the exact grid symbol (linear).
pub const LINEAR_EXPANSION_EXACT: f64 = 1e-10;

/// Principal conjugation: expression vs operator extraction.
pub const CONJUGATION: f64 = 1e-12;

/// Remainder slope: allowed deviation from the predicted order drop.
pub const REMAINDER_SLOPE: f64 = 0.5;

/// Predicted change of the log-log remainder slope per added term.
pub const REMAINDER_SLOPE_DROP: f64 = -1.0;

/// Discrete Moyal identity for `M^{2,2}`.
pub const MOYAL: f64 = 1e-10;

/// ξ-shift covariance of the modulation norm.
pub const MODULATION_SHIFT: f64 = 1e-10;

/// Lebesgue norm vs spectrum-side value.
pub const NORM_IDENTITY: f64 = 1e-12;

/// Empirical ratio growth across a grid doubling.
pub const GROWTH_FACTOR: f64 = 2.0;

/// Hölder constant stability across a grid doubling (factor).
pub const HOLDER_STABILITY: f64 = 2.0;

/// Trials whose denominator falls below this are skipped.
pub const DENOMINATOR_FLOOR: f64 = 1e-10;

/// Class-check ceiling as a multiple of the calibration constant.
pub const CLASS_CEILING_FACTOR: f64 = 10.0;

/// Parser round trip.
pub const PARSE_ROUND_TRIP: f64 = 1e-14;

/// Symbolic vs central finite-difference derivative.
pub const FINITE_DIFFERENCE: f64 = 1e-6;

/// Step for the finite-difference oracle.
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-4;

/// Partition of unity in the frequency splitting.
pub const PARTITION_OF_UNITY: f64 = 1e-14;

/// Remainders below this multiple of `max |exact|` are round-off and are left
/// out of slope fits.
pub const REMAINDER_NOISE_FLOOR: f64 = 1e-12;

/// Seeded samples for the Peetre inequality check.
pub const PEETRE_SAMPLES: usize = 10_000;
