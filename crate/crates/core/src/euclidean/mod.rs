//! Isometries of `R^d`.

pub(crate) mod bass;
mod isometry;

pub use bass::{
    bass_example, bass_example_with, greedy_escape_lower_bound, BassReport, BASS_ANGLES,
    BASS_GREEDY_STEPS, BASS_SEPARATION, GREEDY_MAX_BLOCK,
};
pub use isometry::{
    common_fixed_point, euclid_minimal_displacement, euclid_minimize_from,
    euclid_translation_length, fixed_set, least_squares_fixed_point, planar_commutator_check,
    AffineFixedSet, EuclideanIsometry, EuclideanRecord, EuclideanSpace,
};
