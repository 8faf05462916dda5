//! Fixtures shared by the benchmark targets.

use isodisp::corpus::{free_sets, h2_sets, pd_sets};
use isodisp::hyperbolic::Moebius;
use isodisp::matrix::{MatrixIsometry, PdSpace};
use isodisp::tree::{FreeTree, FreeWord};
use isodisp::GeneratingSet;

pub const SEED: u64 = 2024;

pub fn free_fixture(count: usize) -> Vec<(FreeTree, GeneratingSet<FreeWord>)> {
    free_sets(count, 4, 6, SEED)
}

pub fn h2_fixture(count: usize) -> Vec<GeneratingSet<Moebius>> {
    h2_sets(count, SEED)
}

pub fn pd_fixture(count: usize) -> Vec<(PdSpace, GeneratingSet<MatrixIsometry>)> {
    pd_sets(count, SEED)
}

/// `[[1, 1], [0, 1]]` and `[[1, 0], [1, 1]]`.
pub fn binary_pair() -> GeneratingSet<MatrixIsometry> {
    let a = MatrixIsometry::from_ints(2, &[1, 1, 0, 1]).expect("unimodular");
    let b = MatrixIsometry::from_ints(2, &[1, 0, 1, 1]).expect("unimodular");
    GeneratingSet::new(&PdSpace { dim: 2 }, vec![a, b]).expect("nonempty")
}
