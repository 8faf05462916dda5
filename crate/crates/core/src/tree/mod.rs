//! Exact tree models.

pub mod formula;
pub mod free;
pub mod padic;

pub use formula::tree_formula_l;
pub use free::{brute_force_l, free_translation_length, FreePoint, FreeTree, FreeWord};
pub use padic::{
    brute_force_l_padic, padic_displacement, padic_translation_length, Lattice, PadicMatrix,
    PadicPoint, PadicTree,
};
