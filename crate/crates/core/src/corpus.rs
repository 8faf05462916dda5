//! Seeded random instances for every geometry.
//!
//! Each generator draws from one `ChaCha8Rng` seeded with the given seed, so
//! a corpus is a pure function of `(count, seed)`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::displacement::GeneratingSet;
use crate::euclidean::bass::random_orthogonal;
use crate::euclidean::{EuclideanIsometry, EuclideanSpace};
use crate::exact::{rat, rat_frac, Rat};
use crate::hyperbolic::{ComplexMoebius, HPoint, HyperbolicPlane, Moebius};
use crate::hyperbolicity::MetricGraph;
use crate::matrix::{MatrixIsometry, PdSpace};
use crate::tree::{FreeTree, FreeWord, PadicMatrix, PadicTree};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform freely reduced word of the given length over `rank` generators.
pub fn random_word(rng: &mut impl Rng, rank: usize, len: usize) -> FreeWord {
    let mut letters: Vec<i8> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(1..=rank as i8);
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    FreeWord::from_letters(&letters).expect("letters within rank")
}

/// Sets of 1 to `max_size` words of length at most `max_len` in `F_2` or `F_3`.
pub fn free_sets(count: usize, max_size: usize, max_len: usize, seed: u64) -> Vec<(FreeTree, GeneratingSet<FreeWord>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let tree = FreeTree::new(r.gen_range(2..=3)).unwrap();
            let size = r.gen_range(1..=max_size);
            let words = (0..size)
                .map(|_| {
                    let len = r.gen_range(0..=max_len);
                    random_word(&mut r, tree.rank(), len)
                })
                .collect();
            (tree, GeneratingSet::new(&tree, words).unwrap())
        })
        .collect()
}

fn padic_factor(r: &mut ChaCha8Rng, p: u64) -> PadicMatrix {
    let pp = p as i64;
    let num = r.gen_range(-3..=3);
    let den = pp.pow(r.gen_range(0..=2));
    match r.gen_range(0..3) {
        0 => PadicMatrix::new([rat(1), rat_frac(num, den), rat(0), rat(1)]),
        1 => PadicMatrix::new([rat(1), rat(0), rat_frac(num, den), rat(1)]),
        _ => {
            let up: Rat = rat(pp);
            if r.gen_bool(0.5) {
                PadicMatrix::new([up.clone(), rat(0), rat(0), up.recip()])
            } else {
                PadicMatrix::new([up.recip(), rat(0), rat(0), up])
            }
        }
    }
    .expect("elementary matrices have determinant 1")
}

/// Products of one to three elementary and diagonal factors in `SL2(Z[1/p])`,
/// `p` in `{2, 3, 5}`.
pub fn padic_sets(count: usize, seed: u64) -> Vec<(PadicTree, GeneratingSet<PadicMatrix>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let p = [2, 3, 5][r.gen_range(0..3)];
            let tree = PadicTree::new(p).unwrap();
            let size = r.gen_range(1..=3);
            let mats = (0..size)
                .map(|_| {
                    let mut m = padic_factor(&mut r, p);
                    for _ in 0..r.gen_range(0..=2) {
                        let f = padic_factor(&mut r, p);
                        m = PadicMatrix::new(crate::tree::padic::mat_mul(m.entries(), f.entries())).unwrap();
                    }
                    m
                })
                .collect();
            (tree, GeneratingSet::new(&tree, mats).unwrap())
        })
        .collect()
}

/// A random element of `PSL2(R)`: hyperbolic, elliptic or parabolic with
/// probabilities 0.6, 0.2, 0.2.
pub fn random_moebius(r: &mut impl Rng) -> Moebius {
    let theta = r.gen_range(0.0..std::f64::consts::TAU);
    let phi = r.gen_range(0.0..std::f64::consts::TAU);
    let i = HPoint::i();
    let kick = Moebius::rotation(&i, theta);
    let back = Moebius::rotation(&i, phi);
    match r.gen_range(0..10) {
        0..=5 => kick.mul(&Moebius::axial(r.gen_range(0.1..2.5))).mul(&back),
        6 | 7 => {
            let c = HPoint::new(r.gen_range(-1.0..1.0), r.gen_range(0.3..3.0)).unwrap();
            Moebius::rotation(&c, r.gen_range(0.2..6.0))
        }
        _ => {
            let u = Moebius::new(1.0, r.gen_range(0.2..2.0), 0.0, 1.0).unwrap();
            kick.mul(&u).mul(&kick.inverse())
        }
    }
}

pub fn h2_sets(count: usize, seed: u64) -> Vec<GeneratingSet<Moebius>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let size = r.gen_range(1..=3);
            let mats = (0..size).map(|_| random_moebius(&mut r)).collect();
            GeneratingSet::new(&HyperbolicPlane, mats).unwrap()
        })
        .collect()
}

/// Uniform integer matrix with entries in `[-max, max]` and determinant 1.
pub fn random_sl2z(r: &mut impl Rng, max: i64) -> [i64; 4] {
    loop {
        let e = [(); 4].map(|_| r.gen_range(-max..=max));
        if e[0] * e[3] - e[1] * e[2] == 1 {
            return e;
        }
    }
}

/// Pairs `{A, B}` of distinct `SL2(Z)` matrices with entries in `[-max, max]`.
pub fn sl2z_pairs(count: usize, max: i64, seed: u64) -> Vec<GeneratingSet<MatrixIsometry>> {
    let mut r = rng(seed);
    let space = PdSpace { dim: 2 };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = MatrixIsometry::from_ints(2, &random_sl2z(&mut r, max)).unwrap();
        let b = MatrixIsometry::from_ints(2, &random_sl2z(&mut r, max)).unwrap();
        let set = GeneratingSet::new(&space, vec![a, b]).unwrap();
        if set.len() == 2 {
            out.push(set);
        }
    }
    out
}

/// Pairs of hyperbolic `SL2(Z)` matrices with entries in `[-max, max]`.
pub fn hyperbolic_pairs(count: usize, max: i64, seed: u64) -> Vec<GeneratingSet<Moebius>> {
    let mut r = rng(seed);
    let draw = |r: &mut ChaCha8Rng| loop {
        let [a, b, c, d] = random_sl2z(r, max);
        if (a + d).abs() > 2 {
            return Moebius::new(a as f64, b as f64, c as f64, d as f64).unwrap();
        }
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let set = GeneratingSet::new(&HyperbolicPlane, vec![draw(&mut r), draw(&mut r)]).unwrap();
        if set.len() == 2 {
            out.push(set);
        }
    }
    out
}

fn gaussian_complex(r: &mut impl Rng) -> Complex64 {
    Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

/// `[[a, b], [c, (1 + b c) / a]]` with Gaussian `a, b, c`, `|a| >= 0.1`.
pub fn random_sl2c(r: &mut impl Rng) -> ComplexMoebius {
    loop {
        let a = gaussian_complex(r);
        if a.norm() < 0.1 {
            continue;
        }
        let b = gaussian_complex(r);
        let c = gaussian_complex(r);
        return ComplexMoebius::new(a, b, c, (b * c + 1.0) / a).expect("determinant is 1");
    }
}

pub fn sl2c_pairs(count: usize, seed: u64) -> Vec<[ComplexMoebius; 2]> {
    let mut r = rng(seed);
    (0..count).map(|_| [random_sl2c(&mut r), random_sl2c(&mut r)]).collect()
}

fn gaussian_vector(r: &mut ChaCha8Rng, d: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(d, |_, _| scale * r.sample::<f64, _>(StandardNormal))
}

/// Which kind of Euclidean set a corpus entry was drawn as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EuclideanKind {
    /// Rotations about one common center: a common fixed point exists.
    CommonCenter,
    /// Independent random rotations and translations.
    Random,
}

/// Sets of 1 to 3 isometries of `R^2` or `R^3`, half with a common center.
pub fn euclidean_sets(count: usize, seed: u64) -> Vec<(EuclideanKind, GeneratingSet<EuclideanIsometry>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let d = r.gen_range(2..=3);
            let space = EuclideanSpace { dim: d };
            let size = r.gen_range(1..=3);
            let kind = if i % 2 == 0 {
                EuclideanKind::CommonCenter
            } else {
                EuclideanKind::Random
            };
            let center = gaussian_vector(&mut r, d, 2.0);
            let isos = (0..size)
                .map(|_| {
                    let rot = random_orthogonal(&mut r, d);
                    match kind {
                        EuclideanKind::CommonCenter => EuclideanIsometry::rotation_about(rot, &center),
                        EuclideanKind::Random => {
                            if r.gen_bool(0.2) {
                                EuclideanIsometry::translation(gaussian_vector(&mut r, d, 1.0))
                            } else {
                                let c = gaussian_vector(&mut r, d, 2.0);
                                EuclideanIsometry::rotation_about(rot, &c)
                            }
                        }
                    }
                    .unwrap()
                })
                .collect();
            (kind, GeneratingSet::new(&space, isos).unwrap())
        })
        .collect()
}

/// Elementary transvection `I + s E_ij`.
fn transvection(d: usize, i: usize, j: usize, s: i64) -> MatrixIsometry {
    let mut e = vec![0i64; d * d];
    for k in 0..d {
        e[k * d + k] = 1;
    }
    e[i * d + j] = s;
    MatrixIsometry::from_ints(d, &e).unwrap()
}

/// Sets of 1 to 2 elements of `SL_d(Z)`, `d` in `{2, 3}`, each a product of
/// one to three transvections, plus occasional rotations.
pub fn pd_sets(count: usize, seed: u64) -> Vec<(PdSpace, GeneratingSet<MatrixIsometry>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let d = r.gen_range(2..=3);
            let space = PdSpace { dim: d };
            let size = r.gen_range(1..=2);
            let mats = (0..size)
                .map(|_| {
                    if r.gen_bool(0.15) {
                        return MatrixIsometry::from_matrix(random_orthogonal(&mut r, d)).unwrap();
                    }
                    let mut m = MatrixIsometry::identity(d);
                    for _ in 0..r.gen_range(1..=3) {
                        let i = r.gen_range(0..d);
                        let j = (i + r.gen_range(1..d)) % d;
                        let s = if r.gen_bool(0.5) { 1 } else { -1 } * r.gen_range(1..=2);
                        m = m.mul(&transvection(d, i, j, s));
                    }
                    m
                })
                .collect();
            (space, GeneratingSet::new(&space, mats).unwrap())
        })
        .collect()
}

/// Connected graphs on at most `max_n` vertices: trees, cycles, grids,
/// sparse graphs and Erdos-Renyi graphs in rotation.
pub fn graphs(count: usize, max_n: usize, seed: u64) -> Vec<MetricGraph> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(6..=max_n);
            let s = r.gen();
            match i % 5 {
                0 => MetricGraph::random_tree(n, s),
                1 => MetricGraph::cycle(n),
                2 => {
                    let rows = r.gen_range(2..=5);
                    MetricGraph::grid(rows, (n / rows).max(2))
                }
                3 => MetricGraph::random_sparse(n, r.gen_range(1..=6), s),
                _ => MetricGraph::erdos_renyi(n, r.gen_range(0.1..0.3), s),
            }
            .unwrap()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let a = free_sets(100, 4, 6, 1);
        let b = free_sets(100, 4, 6, 1);
        assert_eq!(a.len(), 100);
        assert!(a.iter().zip(&b).all(|(x, y)| x.1.elements() == y.1.elements()));
        assert_eq!(padic_sets(100, 2).len(), 100);
        assert_eq!(h2_sets(100, 3).len(), 100);
        assert_eq!(euclidean_sets(100, 4).len(), 100);
        assert_eq!(pd_sets(100, 5).len(), 100);
        assert_eq!(sl2z_pairs(50, 5, 6).len(), 50);
        assert!(hyperbolic_pairs(50, 3, 7)
            .iter()
            .all(|s| s.elements().iter().all(|g| g.trace().abs() > 2.0)));
        assert_eq!(sl2c_pairs(20, 9).len(), 20);
        assert!(graphs(50, 40, 8).iter().all(|g| g.n() <= 40));
    }
}
