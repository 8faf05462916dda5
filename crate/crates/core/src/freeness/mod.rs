//! Free semigroup certificates and growth entropy.

mod arcs;
mod certificate;
mod semigroup;
mod tree_regions;

pub use arcs::Arc;
pub use certificate::{
    entropy_sequence, pingpong_certificate, pingpong_h2, pingpong_tree, word_distinctness,
    word_distinctness_by, Evidence, FreenessCertificate, PingPongPair, PingPongRegions, Verdict,
};
pub use semigroup::{
    semigroup_from_displacement_h2, semigroup_from_displacement_tree, semigroup_pair, SemigroupOptions,
    SemigroupReport,
};
pub use tree_regions::{
    axis_ends, half_space_towards, median, region_disjoint, region_image, region_subset, End,
    HalfSpace, TreeRegion,
};
