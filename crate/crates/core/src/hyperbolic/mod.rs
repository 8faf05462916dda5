//! The hyperbolic plane and the trace tools for `SL2(C)`.

pub mod almost_elliptic;
pub mod exact;
pub mod moebius;
pub mod plane;
pub mod trace;

pub use almost_elliptic::{
    almost_elliptic_pair, commutator_subgroup_words, evaluate_word, AlmostElliptic,
    AlmostEllipticSummary,
};
pub use exact::{BoundaryPoint, ExactMoebius};
pub use moebius::{classify, elliptic_center, ell_h2, h2_distance, Classification, HPoint, Moebius};
pub use plane::{bochi_hyp_gap, h2_minimal_displacement, h2_minimize_from, HyperbolicPlane};
pub use trace::{commutator, pair_trichotomy, trace_commutator, ComplexMoebius, Trichotomy};
