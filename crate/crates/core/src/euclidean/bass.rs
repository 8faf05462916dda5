//! Greedy linear escape, and a pair of rotations of `R^4` whose words are
//! all elliptic although the pair has no common fixed point.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::isometry::{common_fixed_point, euclid_minimal_displacement, EuclideanIsometry, EuclideanSpace};
use crate::displacement::{GeneratingSet, MinimizeOptions};
use crate::error::{Error, Result};

/// Longest block tried by the greedy walk.
pub const GREEDY_MAX_BLOCK: usize = 4;
pub const GREEDY_MAX_STEPS: usize = 10_000;
const MARGIN: f64 = 1e-6;
const SEED_ATTEMPTS: u32 = 16;
/// Distance between the two rotation centers.
pub const BASS_SEPARATION: f64 = 4.0;
/// Block angles are drawn uniformly from this range.
pub const BASS_ANGLES: (f64, f64) = (0.6, 1.4);
pub const BASS_GREEDY_STEPS: usize = 2000;

fn blocks(set: &[EuclideanIsometry], h: usize) -> Vec<EuclideanIsometry> {
    let mut out = vec![EuclideanIsometry::identity(set[0].dim())];
    for _ in 0..h {
        out = out.iter().flat_map(|w| set.iter().map(move |s| s.mul(w))).collect();
    }
    out
}

/// Runs the walk `y <- argmax_b ||b y - x0||` over blocks `b` of `h` letters,
/// finishing with single letters, and returns the endpoint.
fn greedy_walk(set: &[EuclideanIsometry], x0: &DVector<f64>, n: usize, h: usize) -> DVector<f64> {
    let big = blocks(set, h);
    let mut y = x0.clone();
    let step = |y: &DVector<f64>, cands: &[EuclideanIsometry]| {
        let mut best = cands[0].apply(y);
        let mut best_d = (&best - x0).norm();
        for c in &cands[1..] {
            let z = c.apply(y);
            let d = (&z - x0).norm();
            if d > best_d {
                best = z;
                best_d = d;
            }
        }
        best
    };
    for _ in 0..n / h {
        y = step(&y, &big);
    }
    for _ in 0..n % h {
        y = step(&y, set);
    }
    y
}

/// `d(w x0, x0) / n` for a word `w` of length `n` built greedily.
///
/// A lower bound for `L(S^n, x0) / n`; its limit in `n` bounds `l(S)` from
/// below, which is an asymptotic statement. Blocks of up to four letters are
/// tried and the best resulting word is kept, so rotations whose single
/// letters cannot push a far point outward are still escaped through their
/// commutators.
pub fn greedy_escape_lower_bound(
    set: &GeneratingSet<EuclideanIsometry>,
    x0: &DVector<f64>,
    n: usize,
) -> Result<f64> {
    if n == 0 || n > GREEDY_MAX_STEPS {
        return Err(Error::Parameter(format!("n must be in 1..={GREEDY_MAX_STEPS}, got {n}")));
    }
    if x0.len() != set.elements()[0].dim() {
        return Err(Error::Input("starting point has the wrong dimension".into()));
    }
    let best = (1..=GREEDY_MAX_BLOCK.min(n))
        .map(|h| (greedy_walk(set.elements(), x0, n, h) - x0).norm())
        .fold(0.0, f64::max);
    Ok(best / n as f64)
}

pub(crate) fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

fn block_rotation(q: &DMatrix<f64>, angles: [f64; 2]) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(4, 4);
    for (k, a) in angles.iter().enumerate() {
        let (s, c) = a.sin_cos();
        let o = 2 * k;
        d[(o, o)] = c;
        d[(o, o + 1)] = -s;
        d[(o + 1, o)] = s;
        d[(o + 1, o + 1)] = c;
    }
    q * d * q.transpose()
}

fn eig_margin(r: &DMatrix<f64>) -> f64 {
    r.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| (z - 1.0).norm())
        .fold(f64::INFINITY, f64::min)
}

/// `(words checked, min |mu - 1|)` over eigenvalues `mu` of the linear parts of
/// all nontrivial reduced words of length at most `n` in `a, b` and inverses.
fn word_margin(ra: &DMatrix<f64>, rb: &DMatrix<f64>, n: usize) -> (usize, f64) {
    let letters = [ra.clone(), ra.transpose(), rb.clone(), rb.transpose()];
    // Letter i cancels letter i ^ 1.
    let mut count = 0;
    let mut worst = f64::INFINITY;
    let mut stack: Vec<(DMatrix<f64>, usize, usize)> =
        (0..4).map(|i| (letters[i].clone(), i, 1)).collect();
    while let Some((m, last, len)) = stack.pop() {
        count += 1;
        worst = worst.min(eig_margin(&m));
        if len < n {
            for (i, l) in letters.iter().enumerate() {
                if i != last ^ 1 {
                    stack.push((l * &m, i, len + 1));
                }
            }
        }
    }
    (count, worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BassReport {
    pub depth: usize,
    pub requested_seed: u64,
    pub seed: u64,
    pub centers: [Vec<f64>; 2],
    /// Block angles of the two rotation parts, in `[0, pi]`.
    pub angles: [[f64; 2]; 2],
    pub words_checked: usize,
    /// Smallest `|mu - 1|` over all checked words; above `1e-6` means every
    /// such word fixes a point.
    pub eigenvalue_margin: f64,
    pub common_fixed_point: bool,
    /// `L(S)` from the minimizer, an upper estimate of the true minimum.
    pub joint_displacement: f64,
    /// `|p_A - p_B| sin(theta_min / 2)`: a certified lower bound for `L(S)`.
    pub sine_bound: f64,
    /// `|p_A - p_B| theta_min / 2`.
    pub angle_bound: f64,
    pub greedy_steps: usize,
    /// Lower bound for `L(S^n, p_A) / n` at `n = greedy_steps`.
    pub greedy_lower_bound: f64,
}

impl BassReport {
    pub fn min_angle(&self) -> f64 {
        self.angles.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `{1, A^+-1, B^+-1}` for rotations `A`, `B` of `R^4` about distinct centers
/// whose reduced words of length `<= n` all have eigenvalue margin above
/// `1e-6`. Seeds are tried from `seed` upward, at most 16 of them.
pub fn bass_example(n: usize, seed: u64) -> Result<(GeneratingSet<EuclideanIsometry>, BassReport)> {
    bass_example_with(n, seed, BASS_SEPARATION)
}

/// As [`bass_example`] with a chosen center separation; zero separation gives
/// the rotation-only variant with common fixed point `0`.
pub fn bass_example_with(
    n: usize,
    seed: u64,
    separation: f64,
) -> Result<(GeneratingSet<EuclideanIsometry>, BassReport)> {
    if n == 0 || n > 10 {
        return Err(Error::Parameter(format!("depth must be in 1..=10, got {n}")));
    }
    if !(separation >= 0.0 && separation.is_finite()) {
        return Err(Error::Parameter("separation must be a finite nonnegative number".into()));
    }
    for attempt in 0..SEED_ATTEMPTS {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut angles = [[0.0; 2]; 2];
        let mut rots = Vec::new();
        for a in angles.iter_mut() {
            let q = random_orthogonal(&mut rng, 4);
            *a = [
                rng.gen_range(BASS_ANGLES.0..BASS_ANGLES.1),
                rng.gen_range(BASS_ANGLES.0..BASS_ANGLES.1),
            ];
            rots.push(block_rotation(&q, *a));
        }
        let dir: DVector<f64> = DVector::from_fn(4, |_, _| rng.sample(StandardNormal));
        let u = dir.normalize();
        let (pa, pb) = (&u * (-separation / 2.0), &u * (separation / 2.0));
        let (words, margin) = word_margin(&rots[0], &rots[1], n);
        if margin <= MARGIN {
            continue;
        }
        let a = EuclideanIsometry::rotation_about(rots[0].clone(), &pa)?;
        let b = EuclideanIsometry::rotation_about(rots[1].clone(), &pb)?;
        let geom = EuclideanSpace { dim: 4 };
        let elems = vec![
            EuclideanIsometry::identity(4),
            a.clone(),
            a.inverse(),
            b.clone(),
            b.inverse(),
        ];
        let set = GeneratingSet::new(&geom, elems)?;
        let min_angle = angles.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let joint = euclid_minimal_displacement(&set, &MinimizeOptions::default()).value;
        let greedy = greedy_escape_lower_bound(&set, &pa, BASS_GREEDY_STEPS)?;
        let report = BassReport {
            depth: n,
            requested_seed: seed,
            seed: s,
            centers: [pa.iter().copied().collect(), pb.iter().copied().collect()],
            angles,
            words_checked: words,
            eigenvalue_margin: margin,
            common_fixed_point: common_fixed_point(&set).is_some(),
            joint_displacement: joint,
            sine_bound: separation * (min_angle / 2.0).sin(),
            angle_bound: separation * min_angle / 2.0,
            greedy_steps: BASS_GREEDY_STEPS,
            greedy_lower_bound: greedy,
        };
        return Ok((set, report));
    }
    Err(Error::RetryExhausted {
        first_seed: seed,
        attempts: SEED_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    #[test]
    fn greedy_on_translations() {
        let geom = EuclideanSpace { dim: 2 };
        let t = EuclideanIsometry::translation(v(&[1.0, 0.0])).unwrap();
        let set = GeneratingSet::new(&geom, vec![t.clone(), t.inverse()]).unwrap();
        for n in [1, 7, 100] {
            let g = greedy_escape_lower_bound(&set, &v(&[0.0, 0.0]), n).unwrap();
            assert!((g - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn greedy_at_a_common_fixed_point() {
        let geom = EuclideanSpace { dim: 2 };
        let a = EuclideanIsometry::planar_rotation(0.4, [1.0, 2.0]);
        let b = EuclideanIsometry::planar_rotation(2.0, [1.0, 2.0]);
        let set = GeneratingSet::new(&geom, vec![a, b]).unwrap();
        let g = greedy_escape_lower_bound(&set, &v(&[1.0, 2.0]), 50).unwrap();
        assert!(g < 1e-12);
    }

    #[test]
    fn planar_rotations_escape_through_commutators() {
        let geom = EuclideanSpace { dim: 2 };
        let a = EuclideanIsometry::planar_rotation(0.3, [0.0, 0.0]);
        let b = EuclideanIsometry::planar_rotation(0.5, [1.0, 0.0]);
        let set = GeneratingSet::new(&geom, vec![a.clone(), a.inverse(), b.clone(), b.inverse()]).unwrap();
        assert!(greedy_escape_lower_bound(&set, &v(&[0.0, 0.0]), 2000).unwrap() > 1e-3);
    }

    #[test]
    fn rotation_only_variant_has_a_fixed_point() {
        let (set, rep) = bass_example_with(4, 7, 0.0).unwrap();
        assert!(rep.common_fixed_point);
        assert!(rep.joint_displacement < 1e-9);
        assert!(greedy_escape_lower_bound(&set, &v(&[0.0; 4]), 100).unwrap() < 1e-12);
    }
}
