//! `SL_d(R)` acting on the symmetric space `P_d` and on its Finsler
//! counterpart `P_d^infinity`.

pub mod isometry;
pub mod jsr;
pub mod space;

pub use isometry::{operator_norm_power_iteration, MatrixIsometry, MatrixKey, MatrixRecord};
pub use jsr::{bochi_gap, comparison_check, jsr_bracket, ComparisonReport, JsrBracket, JsrLevel};
pub use space::{
    pd_displacement, pd_distance, pd_minimal_displacement, pd_minimize_from, pd_translation_length,
    pinf_displacement,
    pinf_distance, pinf_point_distance, spectral_lambda, PdFinsler, PdSpace, PosDefPoint,
};
