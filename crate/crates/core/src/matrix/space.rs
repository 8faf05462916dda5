//! The symmetric space `P_d` of unimodular positive-definite matrices, with
//! its Riemannian metric and the operator-norm Finsler metric.
//!
//! A point `x = g g^T` stands for the coset `g SO_d`, so `g` acts by
//! `x -> g x g^T` and the base point is the identity.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::isometry::{MatrixIsometry, MatrixKey};
use crate::displacement::{
    displacement_at, CurvatureClass, GeneratingSet, Geometry, GeometryTag, MinimizeOptions,
    MinimizeStatus, Minimum,
};
use crate::error::{Error, Result};
use crate::minimize::{minimize_max, MinimaxProblem};
use crate::tolerance;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct PosDefPoint(DMatrix<f64>);

impl std::fmt::Debug for PosDefPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", Vec::<Vec<f64>>::from(self.clone()))
    }
}

impl TryFrom<Vec<Vec<f64>>> for PosDefPoint {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Input("point must be a square matrix".into()));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        PosDefPoint::new(DMatrix::from_row_slice(d, d, &flat))
    }
}

impl From<PosDefPoint> for Vec<Vec<f64>> {
    fn from(p: PosDefPoint) -> Self {
        let d = p.0.nrows();
        (0..d).map(|r| (0..d).map(|c| p.0[(r, c)]).collect()).collect()
    }
}

impl PosDefPoint {
    /// Checks symmetry, positivity and `|det - 1| <= 1e-9`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Input("point must be a square matrix".into()));
        }
        let asym = (&m - m.transpose()).amax();
        if asym > 1e-9 * m.amax().max(1.0) {
            return Err(Error::Input("point must be symmetric".into()));
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        if eig.eigenvalues.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Input("point must be positive definite".into()));
        }
        let log_det: f64 = eig.eigenvalues.iter().map(|v| v.ln()).sum();
        if log_det.abs() > tolerance::COMPARE {
            return Err(Error::Input(format!(
                "point must have determinant 1, got {}",
                log_det.exp()
            )));
        }
        Ok(PosDefPoint(sym))
    }

    pub fn identity(d: usize) -> Self {
        PosDefPoint(DMatrix::identity(d, d))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// `g x g^T`, re-symmetrized.
    pub fn act(&self, g: &MatrixIsometry) -> PosDefPoint {
        let m = g.matrix() * &self.0 * g.matrix().transpose();
        PosDefPoint((&m + m.transpose()) * 0.5)
    }
}

/// Applies `f` to the eigenvalues of a symmetric matrix.
fn sym_fn(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let q = &eig.eigenvectors;
    let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
    let out = q * diag * q.transpose();
    (&out + out.transpose()) * 0.5
}

/// Eigenvalues of `x^{-1} y`, i.e. of `x^{-1/2} y x^{-1/2}`.
pub fn relative_eigenvalues(x: &PosDefPoint, y: &PosDefPoint) -> Vec<f64> {
    let r = sym_fn(&x.0, |v| 1.0 / v.sqrt());
    let m = &r * &y.0 * &r;
    let m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
}

/// Riemannian distance `(1/2) sqrt(sum (log mu_i)^2)` over the eigenvalues
/// `mu_i` of `x^{-1} y`; for `y = g g^T`, `x = I` this is the norm of the log
/// singular values of `g`.
pub fn pd_distance(x: &PosDefPoint, y: &PosDefPoint) -> f64 {
    0.5 * relative_eigenvalues(x, y)
        .iter()
        .map(|m| m.ln().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Finsler distance `(1/2) log lambda_max(x^{-1} y)`; `log ||g||` from the base point.
pub fn pinf_point_distance(x: &PosDefPoint, y: &PosDefPoint) -> f64 {
    0.5 * relative_eigenvalues(x, y)
        .iter()
        .map(|m| m.ln())
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
}

/// `log ||g^{-1} h||`, the distance between `g x0` and `h x0` in `P_d^infinity`.
pub fn pinf_distance(g: &MatrixIsometry, h: &MatrixIsometry) -> Result<f64> {
    if g.dim() != h.dim() {
        return Err(Error::Input("dimension mismatch".into()));
    }
    Ok(g.inverse().mul(h).operator_norm().ln().max(0.0))
}

/// Log singular values of `a`, largest first, given `a` and its inverse with
/// `|det a| = 1`.
///
/// Small singular values of `a` are read off as reciprocals of large ones of
/// `a^-1`, and the middle one (odd `d`) from the determinant, so every entry
/// keeps relative accuracy even when `a` is badly conditioned.
fn log_singular_values(a: &DMatrix<f64>, a_inv: &DMatrix<f64>) -> Vec<f64> {
    let d = a.nrows();
    let desc = |m: &DMatrix<f64>| {
        let mut s: Vec<f64> = m.singular_values().iter().map(|v| v.ln()).collect();
        s.sort_by(|x, y| y.total_cmp(x));
        s
    };
    let top = desc(a);
    let bottom = desc(a_inv);
    let half = d / 2;
    let mut out: Vec<f64> = top[..half].to_vec();
    if d % 2 == 1 {
        out.push(-(top[..half].iter().sum::<f64>() - bottom[..half].iter().sum::<f64>()));
    }
    out.extend(bottom[..half].iter().rev().map(|v| -v));
    out
}

/// `x^{1/2}` and `x^{-1/2}` from one eigendecomposition.
fn sqrt_pair(x: &PosDefPoint) -> (DMatrix<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(x.0.clone());
    let q = &eig.eigenvectors;
    let build = |f: &dyn Fn(f64) -> f64| {
        let m = q * DMatrix::from_diagonal(&eig.eigenvalues.map(f)) * q.transpose();
        (&m + m.transpose()) * 0.5
    };
    (build(&f64::sqrt), build(&|v| 1.0 / v.sqrt()))
}

/// Log singular values of `r g s` with `(s, r) = (x^{1/2}, x^{-1/2})`, whose
/// norm gives `d(x, g x)`.
fn conjugated_with(g: &DMatrix<f64>, g_inv: &DMatrix<f64>, s: &DMatrix<f64>, r: &DMatrix<f64>) -> Vec<f64> {
    log_singular_values(&(r * g * s), &(r * g_inv * s))
}

fn conjugated_log_singular_values(g: &MatrixIsometry, x: &PosDefPoint) -> Vec<f64> {
    let (s, r) = sqrt_pair(x);
    conjugated_with(g.matrix(), g.inverse().matrix(), &s, &r)
}

/// `d(x, g x)` in the Riemannian metric, accurate for large displacements.
pub fn pd_displacement(g: &MatrixIsometry, x: &PosDefPoint) -> f64 {
    conjugated_log_singular_values(g, x)
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

/// `d(x, g x)` in the Finsler metric: the top log singular value.
pub fn pinf_displacement(g: &MatrixIsometry, x: &PosDefPoint) -> f64 {
    conjugated_log_singular_values(g, x)[0].max(0.0)
}

/// Norm of the vector of log eigenvalue moduli.
pub fn pd_translation_length(g: &MatrixIsometry) -> f64 {
    g.eigenvalues()
        .iter()
        .map(|z| z.norm().ln().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// `log Lambda(g)`, the translation length in `P_d^infinity`.
pub fn spectral_lambda(g: &MatrixIsometry) -> f64 {
    g.spectral_radius().ln().max(0.0)
}

/// Orthonormal basis of traceless symmetric matrices for the metric
/// `<V, W> = tr(V W) / 4`, i.e. Frobenius norm 2.
fn tangent_basis(d: usize) -> Vec<DMatrix<f64>> {
    let mut basis = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut m = DMatrix::zeros(d, d);
            m[(i, j)] = 2f64.sqrt();
            m[(j, i)] = 2f64.sqrt();
            basis.push(m);
        }
    }
    // Diagonal part: orthonormalized differences e_1 - e_2, e_1 + e_2 - 2 e_3, ...
    for k in 1..d {
        let mut m = DMatrix::zeros(d, d);
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            m[(i, i)] = 2.0 / norm;
        }
        m[(k, k)] = -2.0 * k as f64 / norm;
        basis.push(m);
    }
    basis
}

/// `max_s (1/2) d(x, s x)^2` on `P_d`.
struct PdProblem<'a> {
    set: &'a [MatrixIsometry],
    inverses: Vec<MatrixIsometry>,
    basis: Vec<DMatrix<f64>>,
}

impl<'a> PdProblem<'a> {
    fn new(set: &'a [MatrixIsometry]) -> Self {
        let d = set[0].dim();
        PdProblem {
            set,
            inverses: set.iter().map(|g| g.inverse()).collect(),
            basis: tangent_basis(d),
        }
    }

    /// `log(x^{-1/2} y x^{-1/2})`, the initial velocity towards `y` in the identity frame.
    fn log_towards(r: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
        let m = r * y * r;
        sym_fn(&((&m + m.transpose()) * 0.5), f64::ln)
    }
}

impl MinimaxProblem for PdProblem<'_> {
    type Point = PosDefPoint;

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn values(&self, x: &PosDefPoint) -> Vec<f64> {
        let (s, r) = sqrt_pair(x);
        self.set
            .iter()
            .zip(&self.inverses)
            .map(|(g, gi)| {
                let l = conjugated_with(g.matrix(), gi.matrix(), &s, &r);
                0.5 * l.iter().map(|v| v * v).sum::<f64>()
            })
            .collect()
    }

    fn gradient(&self, i: usize, x: &PosDefPoint) -> Vec<f64> {
        // grad (1/2) d(x, gx)^2 = -(log_x(g x) + log_x(g^-1 x)).
        let r = sym_fn(&x.0, |v| 1.0 / v.sqrt());
        let a = Self::log_towards(&r, x.act(&self.set[i]).matrix());
        let b = Self::log_towards(&r, x.act(&self.inverses[i]).matrix());
        let g = -(a + b);
        self.basis
            .iter()
            .map(|e| 0.25 * (&g * e).trace())
            .collect()
    }

    fn exp(&self, x: &PosDefPoint, dir: &[f64], t: f64) -> PosDefPoint {
        let d = x.dim();
        let mut v = DMatrix::zeros(d, d);
        for (c, e) in dir.iter().zip(&self.basis) {
            v += e * *c;
        }
        let s = sym_fn(&x.0, f64::sqrt);
        let e = sym_fn(&(v * t), f64::exp);
        let m = &s * e * &s;
        PosDefPoint((&m + m.transpose()) * 0.5)
    }

    // Displacements at `x` lose about `sqrt(cond x)` ulps.
    fn escaped(&self, x: &PosDefPoint) -> bool {
        x.0.amax() > 1e5
    }

    fn admissible(&self, x: &PosDefPoint) -> bool {
        x.0.amax() <= 1e6
    }

    fn negligible(&self) -> f64 {
        1e-30
    }
}

fn check_dims(set: &[MatrixIsometry], d: usize) {
    assert!(
        set.iter().all(|g| g.dim() == d),
        "all matrices must have dimension {d}"
    );
}

/// Minimizes `L(S, .)` on `P_d` from `start`.
pub fn pd_minimize_from(
    set: &[MatrixIsometry],
    start: PosDefPoint,
    opts: &MinimizeOptions,
) -> Minimum<PosDefPoint> {
    let d = start.dim();
    check_dims(set, d);
    let problem = PdProblem::new(set);
    let r = minimize_max(&problem, start, opts.max_iterations, opts.tolerance);
    let value = set
        .iter()
        .map(|g| pd_displacement(g, &r.point))
        .fold(0.0, f64::max);
    Minimum {
        point: r.point,
        value,
        status: r.status,
        iterations: r.iterations,
    }
}

pub fn pd_minimal_displacement(
    set: &GeneratingSet<MatrixIsometry>,
    opts: &MinimizeOptions,
) -> Result<Minimum<PosDefPoint>> {
    let d = set.elements()[0].dim();
    if d > 6 {
        return Err(Error::Parameter(format!("dimension {d} exceeds the supported 6")));
    }
    Ok(pd_minimize_from(set.elements(), PosDefPoint::identity(d), opts))
}

/// `P_d` with the Riemannian metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdSpace {
    pub dim: usize,
}

/// `P_d` with the operator-norm Finsler metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdFinsler {
    pub dim: usize,
}

fn check_matrix_dim(g: &MatrixIsometry, d: usize) -> Result<()> {
    if g.dim() != d {
        return Err(Error::Input(format!(
            "expected a {d}x{d} matrix, got dimension {}",
            g.dim()
        )));
    }
    Ok(())
}

macro_rules! shared_group_ops {
    () => {
        fn apply(&self, g: &MatrixIsometry, x: &PosDefPoint) -> PosDefPoint {
            x.act(g)
        }

        fn compose(&self, g: &MatrixIsometry, h: &MatrixIsometry) -> MatrixIsometry {
            g.mul(h)
        }

        fn invert(&self, g: &MatrixIsometry) -> MatrixIsometry {
            g.inverse()
        }

        fn identity(&self) -> MatrixIsometry {
            MatrixIsometry::identity(self.dim)
        }

        fn canonical_key(&self, g: &MatrixIsometry) -> MatrixKey {
            g.key()
        }

        fn base_point(&self) -> PosDefPoint {
            PosDefPoint::identity(self.dim)
        }

        fn describe_point(&self, x: &PosDefPoint) -> String {
            format!("{x:?}")
        }

        fn check_point(&self, x: &PosDefPoint) -> Result<()> {
            if x.dim() != self.dim {
                return Err(Error::Input(format!(
                    "expected a {0}x{0} point, got dimension {1}",
                    self.dim,
                    x.dim()
                )));
            }
            Ok(())
        }

        fn check_isometry(&self, g: &MatrixIsometry) -> Result<()> {
            check_matrix_dim(g, self.dim)
        }
    };
}

impl Geometry for PdSpace {
    type Point = PosDefPoint;
    type Isometry = MatrixIsometry;
    type Key = MatrixKey;

    fn tag(&self) -> GeometryTag {
        GeometryTag::PdRiemannian
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn curvature(&self) -> CurvatureClass {
        CurvatureClass {
            cat0: true,
            delta: None,
        }
    }

    fn distance(&self, x: &PosDefPoint, y: &PosDefPoint) -> f64 {
        pd_distance(x, y)
    }

    fn translation_length(&self, g: &MatrixIsometry) -> f64 {
        pd_translation_length(g)
    }

    fn displacement(&self, g: &MatrixIsometry, x: &PosDefPoint) -> f64 {
        pd_displacement(g, x)
    }

    fn minimize(&self, set: &[MatrixIsometry], opts: &MinimizeOptions) -> Minimum<PosDefPoint> {
        pd_minimize_from(set, PosDefPoint::identity(self.dim), opts)
    }

    shared_group_ops!();
}

impl Geometry for PdFinsler {
    type Point = PosDefPoint;
    type Isometry = MatrixIsometry;
    type Key = MatrixKey;

    fn tag(&self) -> GeometryTag {
        GeometryTag::PdFinsler
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn curvature(&self) -> CurvatureClass {
        CurvatureClass {
            cat0: false,
            delta: None,
        }
    }

    fn distance(&self, x: &PosDefPoint, y: &PosDefPoint) -> f64 {
        pinf_point_distance(x, y)
    }

    fn translation_length(&self, g: &MatrixIsometry) -> f64 {
        spectral_lambda(g)
    }

    fn displacement(&self, g: &MatrixIsometry, x: &PosDefPoint) -> f64 {
        pinf_displacement(g, x)
    }

    /// For `d = 2` the Finsler metric is the Riemannian one scaled by
    /// `1/sqrt 2`, so the Riemannian minimizer is exact. For `d >= 3` the
    /// Riemannian minimizer only yields an upper bound, flagged unconverged.
    fn minimize(&self, set: &[MatrixIsometry], opts: &MinimizeOptions) -> Minimum<PosDefPoint> {
        let m = pd_minimize_from(set, PosDefPoint::identity(self.dim), opts);
        let value = displacement_at(self, set, &m.point);
        let status = if self.dim == 2 || m.status == MinimizeStatus::NoInteriorMinimum {
            m.status
        } else {
            MinimizeStatus::Unconverged
        };
        Minimum {
            value,
            status,
            ..m
        }
    }

    shared_group_ops!();
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn diag_e(k: f64) -> MatrixIsometry {
        MatrixIsometry::from_f64(2, &[k.exp(), 0.0, 0.0, (-k).exp()]).unwrap()
    }

    #[test]
    fn distances_from_the_base_point() {
        let x0 = PosDefPoint::identity(2);
        assert_eq!(pd_distance(&x0, &x0), 0.0);
        assert!((pd_distance(&x0, &x0.act(&diag_e(1.0))) - SQRT_2).abs() < 1e-14);
        assert!((pd_distance(&x0, &x0.act(&diag_e(2.0))) - 2.0 * SQRT_2).abs() < 1e-14);
        let id = MatrixIsometry::identity(2);
        assert!((pinf_distance(&id, &diag_e(1.0)).unwrap() - 1.0).abs() < 1e-14);
        assert!((pinf_point_distance(&x0, &x0.act(&diag_e(1.0))) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn translation_lengths() {
        let u = MatrixIsometry::from_ints(2, &[1, 1, 0, 1]).unwrap();
        assert_eq!(pd_translation_length(&u), 0.0);
        assert!((pd_translation_length(&diag_e(1.0)) - SQRT_2).abs() < 1e-14);
        assert!((spectral_lambda(&diag_e(1.0)) - 1.0).abs() < 1e-14);
        let g = MatrixIsometry::from_ints(2, &[2, 1, 1, 1]).unwrap();
        assert!((spectral_lambda(&g) - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        for d in 2..=4 {
            let b = tangent_basis(d);
            assert_eq!(b.len(), d * (d + 1) / 2 - 1);
            for (i, x) in b.iter().enumerate() {
                assert!(x.trace().abs() < 1e-14);
                for (j, y) in b.iter().enumerate() {
                    let ip = 0.25 * (x * y).trace();
                    assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn single_hyperbolic_minimum_is_its_translation_length() {
        let g = MatrixIsometry::from_ints(2, &[2, 1, 1, 1]).unwrap();
        let m = pd_minimize_from(&[g.clone()], PosDefPoint::identity(2), &MinimizeOptions::default());
        assert!((m.value - pd_translation_length(&g)).abs() < 1e-9, "{}", m.value);
        let h = diag_e(1.0);
        let m = pd_minimize_from(&[h], PosDefPoint::identity(2), &MinimizeOptions::default());
        assert!((m.value - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn geodesics_have_unit_speed() {
        let g = MatrixIsometry::from_ints(3, &[1, 2, 0, 0, 1, 3, 0, 0, 1]).unwrap();
        let x = PosDefPoint::identity(3).act(&g);
        let problem = PdProblem::new(std::slice::from_ref(&g));
        let dir = [0.3, -0.5, 0.1, 0.7, (1.0f64 - 0.84).sqrt()];
        for t in [0.1, 1.0, 3.0] {
            let y = problem.exp(&x, &dir, t);
            assert!((pd_distance(&x, &y) - t).abs() < 1e-9);
        }
    }

    #[test]
    fn rotations_fix_the_base_point() {
        let c = 0.3f64.cos();
        let s = 0.3f64.sin();
        let r = MatrixIsometry::from_f64(2, &[c, -s, s, c]).unwrap();
        let m = pd_minimize_from(&[r], PosDefPoint::identity(2), &MinimizeOptions::default());
        assert!(m.value < 1e-12);
    }
}
