//! Joint minimal displacement, asymptotic displacement and short-word
//! translation lengths for finite sets of isometries.
//!
//! The engine in [`displacement`] is written once against the [`Geometry`]
//! trait and instantiated for five models: the Cayley tree of a free group,
//! the Bruhat-Tits tree of `SL2(Q_p)`, the hyperbolic plane, Euclidean space
//! and the symmetric space of `SL_d(R)` (Riemannian and Finsler metrics).

pub mod corpus;
pub mod displacement;
pub mod error;
pub mod euclidean;
pub mod freeness;
pub mod exact;
pub mod hyperbolic;
pub mod hyperbolicity;
pub mod matrix;
pub mod minimize;
pub mod schema;
pub mod tolerance;
pub mod tree;

pub use displacement::{
    asymptotic_bracket, circumradius_bracket, displacement_report, inequality_battery,
    joint_displacement_at, lambda, lambda_k, minimal_displacement, power_set, Bracket,
    CurvatureClass, DisplacementReport, GeneratingSet, Geometry, GeometryTag, MinimizeOptions,
    MinimizeStatus, Minimum,
};
pub use error::{Error, Result};
