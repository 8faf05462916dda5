//! Numeric tolerances shared by every floating geometry.
//!
//! Exact geometries (both tree models) compare with zero tolerance.

/// Comparison tolerance for certified inequalities in floating geometries.
pub const COMPARE: f64 = 1e-9;

/// Convergence tolerance of the displacement minimizers.
pub const MINIMIZE: f64 = 1e-6;

/// Default product budget for word enumeration.
pub const WORD_BUDGET: u64 = 2_000_000;

/// Quantization step of floating canonical keys.
pub const KEY_QUANTUM: f64 = 1e-10;

/// Half-width of the parabolic band on `|tr| - 2` in SL2(R).
pub const PARABOLIC_BAND: f64 = 1e-9;

/// Gromov constant used for the hyperbolic plane in every gap report.
pub const H2_DELTA: f64 = 2.0;

/// Singular value threshold splitting `ker(I - R)` for Euclidean isometries.
pub const KERNEL_SPLIT: f64 = 1e-10;

/// Threshold multiplier of the free semigroup displacement criterion.
pub const PINGPONG_DELTA_FACTOR: f64 = 10_000.0;
