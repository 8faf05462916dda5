//! Finite graphs as small hyperbolic spaces, convex hulls and the Helly
//! radius, and quasi-axes of hyperbolic isometries.

mod delta;
mod graph;
mod helly;
mod quasi_axis;

pub use delta::{four_point_delta, geodesics, midpoint_slim_delta, slim_delta, slim_delta_bruteforce, SlimDelta};
pub use graph::{EdgeList, MetricGraph, MAX_SUBDIVIDED_VERTICES, MAX_VERTICES};
pub use helly::{convex_hull, helly_min_radius, random_meeting_hulls, triangle_hulls, ConvexSet};
pub use quasi_axis::{
    axis_offset, fermi_distance, quasi_axis_check, quasi_axis_check_tree, AxialIsometry,
    QuasiAxisReport, TreeQuasiAxisReport, ADDITIVE_DELTAS, HAUSDORFF_DELTAS, LENGTH_DELTAS, SLOPE,
};
