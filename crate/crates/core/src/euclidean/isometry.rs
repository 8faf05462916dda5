//! Isometries `x -> R x + t` of `R^d`.

use nalgebra::{DMatrix, DVector, SVD};
use serde::{Deserialize, Serialize};

use crate::displacement::{
    CurvatureClass, GeneratingSet, Geometry, GeometryTag, MinimizeOptions, Minimum,
};
use crate::error::{Error, Result};
use crate::minimize::{minimize_max, MinimaxProblem};
use crate::tolerance;

pub const MAX_DIM: usize = 8;
const ORTHO_TOL: f64 = 1e-10;
const FIXED_TOL: f64 = 1e-8;
const ESCAPE_RADIUS: f64 = 1e8;

#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanIsometry {
    r: DMatrix<f64>,
    t: DVector<f64>,
}

/// JSON form: `{"R": row-major rows, "t": vector}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EuclideanRecord {
    #[serde(rename = "R")]
    pub r: Vec<Vec<f64>>,
    pub t: Vec<f64>,
}

impl EuclideanIsometry {
    /// Requires `||R^T R - I|| <= 1e-10` and `d <= 8`.
    pub fn new(r: DMatrix<f64>, t: DVector<f64>) -> Result<Self> {
        let d = t.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::Input(format!("dimension must be in 1..={MAX_DIM}, got {d}")));
        }
        if r.nrows() != d || r.ncols() != d {
            return Err(Error::Input(format!(
                "rotation part is {}x{}, translation has length {d}",
                r.nrows(),
                r.ncols()
            )));
        }
        if r.iter().chain(t.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite entry".into()));
        }
        let defect = (r.transpose() * &r - DMatrix::identity(d, d)).amax();
        if defect > ORTHO_TOL {
            return Err(Error::Input(format!("linear part is not orthogonal (defect {defect:e})")));
        }
        Ok(EuclideanIsometry { r, t })
    }

    pub fn from_record(rec: &EuclideanRecord) -> Result<Self> {
        let d = rec.t.len();
        if rec.r.len() != d || rec.r.iter().any(|row| row.len() != d) {
            return Err(Error::Input(format!("\"R\" must be {d}x{d} to match \"t\"")));
        }
        let flat: Vec<f64> = rec.r.iter().flatten().copied().collect();
        Self::new(DMatrix::from_row_slice(d, d, &flat), DVector::from_vec(rec.t.clone()))
    }

    pub fn to_record(&self) -> EuclideanRecord {
        let d = self.dim();
        EuclideanRecord {
            r: (0..d).map(|i| (0..d).map(|j| self.r[(i, j)]).collect()).collect(),
            t: self.t.iter().copied().collect(),
        }
    }

    pub fn translation(t: DVector<f64>) -> Result<Self> {
        let d = t.len();
        Self::new(DMatrix::identity(d, d), t)
    }

    /// Rotation with linear part `r` fixing `center`: `x -> r (x - c) + c`.
    pub fn rotation_about(r: DMatrix<f64>, center: &DVector<f64>) -> Result<Self> {
        let t = center - &r * center;
        Self::new(r, t)
    }

    /// Planar rotation by `angle` about `center`.
    pub fn planar_rotation(angle: f64, center: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let r = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        Self::rotation_about(r, &DVector::from_row_slice(&center)).expect("rotation is orthogonal")
    }

    pub fn identity(d: usize) -> Self {
        EuclideanIsometry {
            r: DMatrix::identity(d, d),
            t: DVector::zeros(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.r
    }

    pub fn translation_part(&self) -> &DVector<f64> {
        &self.t
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.r * x + &self.t
    }

    /// `self` after `o`.
    pub fn mul(&self, o: &EuclideanIsometry) -> EuclideanIsometry {
        EuclideanIsometry {
            r: &self.r * &o.r,
            t: &self.r * &o.t + &self.t,
        }
    }

    pub fn inverse(&self) -> EuclideanIsometry {
        let rt = self.r.transpose();
        let t = -(&rt * &self.t);
        EuclideanIsometry { r: rt, t }
    }

    pub fn key(&self) -> Vec<i128> {
        let q = |v: &f64| (v / tolerance::KEY_QUANTUM).round() as i128;
        self.r.transpose().iter().chain(self.t.iter()).map(q).collect()
    }

    /// `min_i |mu_i - 1|` over the eigenvalues of the linear part.
    pub fn eigenvalue_margin(&self) -> f64 {
        self.r
            .clone()
            .complex_eigenvalues()
            .iter()
            .map(|z| (z - 1.0).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Orthonormal basis of `ker(I - R)` from the SVD of `I - R`.
fn kernel_basis(r: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let d = r.nrows();
    let a = DMatrix::identity(d, d) - r;
    let svd = SVD::new(a, false, true);
    let vt = svd.v_t.expect("requested V^T");
    (0..d)
        .filter(|&i| svd.singular_values[i] <= tolerance::KERNEL_SPLIT)
        .map(|i| vt.row(i).transpose())
        .collect()
}

fn project(v: &DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    basis
        .iter()
        .fold(DVector::zeros(v.len()), |acc, b| acc + b * b.dot(v))
}

/// Norm of the component of `t` in `ker(I - R)`.
pub fn euclid_translation_length(g: &EuclideanIsometry) -> f64 {
    let k = kernel_basis(&g.r);
    if k.is_empty() {
        return 0.0;
    }
    project(&g.t, &k).norm()
}

/// An affine subspace, or the empty set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFixedSet {
    pub base: Option<Vec<f64>>,
    pub directions: Vec<Vec<f64>>,
}

impl AffineFixedSet {
    pub fn is_empty(&self) -> bool {
        self.base.is_none()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.base.as_ref().map(|_| self.directions.len())
    }
}

/// Solves `(I - R) x = t`; empty when `t` has a component in `ker(I - R)`.
pub fn fixed_set(g: &EuclideanIsometry) -> AffineFixedSet {
    let d = g.dim();
    let kernel = kernel_basis(&g.r);
    let obstruction = project(&g.t, &kernel).norm();
    if obstruction > FIXED_TOL {
        return AffineFixedSet {
            base: None,
            directions: Vec::new(),
        };
    }
    let a = DMatrix::identity(d, d) - &g.r;
    let x = SVD::new(a, true, true)
        .solve(&g.t, tolerance::KERNEL_SPLIT)
        .expect("SVD with both factors");
    AffineFixedSet {
        base: Some(x.iter().copied().collect()),
        directions: kernel.iter().map(|v| v.iter().copied().collect()).collect(),
    }
}

/// Least-squares solution of `(I - R_s) x = t_s` for all `s`, with its residual.
pub fn least_squares_fixed_point(set: &[EuclideanIsometry]) -> (DVector<f64>, f64) {
    let d = set[0].dim();
    let mut a = DMatrix::zeros(d * set.len(), d);
    let mut b = DVector::zeros(d * set.len());
    for (k, g) in set.iter().enumerate() {
        let block = DMatrix::identity(d, d) - &g.r;
        a.view_mut((k * d, 0), (d, d)).copy_from(&block);
        b.rows_mut(k * d, d).copy_from(&g.t);
    }
    let x = SVD::new(a.clone(), true, true)
        .solve(&b, tolerance::KERNEL_SPLIT)
        .expect("SVD with both factors");
    let residual = set
        .iter()
        .map(|g| (g.apply(&x) - &x).norm())
        .fold(0.0, f64::max);
    (x, residual)
}

/// A common fixed point, if the least-squares residual is at most `1e-8`.
pub fn common_fixed_point(set: &GeneratingSet<EuclideanIsometry>) -> Option<DVector<f64>> {
    let (x, residual) = least_squares_fixed_point(set.elements());
    (residual <= FIXED_TOL).then_some(x)
}

/// `max_s (1/2) ||(R_s - I) x + t_s||^2`.
struct Problem<'a> {
    set: &'a [EuclideanIsometry],
}

impl MinimaxProblem for Problem<'_> {
    type Point = DVector<f64>;

    fn dim(&self) -> usize {
        self.set[0].dim()
    }

    fn values(&self, x: &DVector<f64>) -> Vec<f64> {
        self.set
            .iter()
            .map(|g| 0.5 * (g.apply(x) - x).norm_squared())
            .collect()
    }

    fn gradient(&self, i: usize, x: &DVector<f64>) -> Vec<f64> {
        let g = &self.set[i];
        let d = g.dim();
        let a = &g.r - DMatrix::identity(d, d);
        let v = &a * x + &g.t;
        (a.transpose() * v).iter().copied().collect()
    }

    fn exp(&self, x: &DVector<f64>, dir: &[f64], t: f64) -> DVector<f64> {
        x + DVector::from_row_slice(dir) * t
    }

    fn escaped(&self, x: &DVector<f64>) -> bool {
        x.norm() > ESCAPE_RADIUS
    }

    fn negligible(&self) -> f64 {
        1e-30
    }
}

pub fn euclid_minimize_from(
    set: &[EuclideanIsometry],
    start: DVector<f64>,
    opts: &MinimizeOptions,
) -> Minimum<DVector<f64>> {
    let r = minimize_max(&Problem { set }, start, opts.max_iterations, opts.tolerance);
    let value = set
        .iter()
        .map(|g| (g.apply(&r.point) - &r.point).norm())
        .fold(0.0, f64::max);
    Minimum {
        point: r.point,
        value,
        status: r.status,
        iterations: r.iterations,
    }
}

/// Minimizes `L(S, .)` from the least-squares common fixed point.
pub fn euclid_minimal_displacement(
    set: &GeneratingSet<EuclideanIsometry>,
    opts: &MinimizeOptions,
) -> Minimum<DVector<f64>> {
    let geom = EuclideanSpace {
        dim: set.elements()[0].dim(),
    };
    geom.minimize(set.elements(), opts)
}

/// `R^d` with the Euclidean metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EuclideanSpace {
    pub dim: usize,
}

impl Geometry for EuclideanSpace {
    type Point = DVector<f64>;
    type Isometry = EuclideanIsometry;
    type Key = Vec<i128>;

    fn tag(&self) -> GeometryTag {
        GeometryTag::Euclidean
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

    fn distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x - y).norm()
    }

    fn apply(&self, g: &EuclideanIsometry, x: &DVector<f64>) -> DVector<f64> {
        g.apply(x)
    }

    fn compose(&self, g: &EuclideanIsometry, h: &EuclideanIsometry) -> EuclideanIsometry {
        g.mul(h)
    }

    fn invert(&self, g: &EuclideanIsometry) -> EuclideanIsometry {
        g.inverse()
    }

    fn identity(&self) -> EuclideanIsometry {
        EuclideanIsometry::identity(self.dim)
    }

    fn translation_length(&self, g: &EuclideanIsometry) -> f64 {
        euclid_translation_length(g)
    }

    fn canonical_key(&self, g: &EuclideanIsometry) -> Vec<i128> {
        g.key()
    }

    fn base_point(&self) -> DVector<f64> {
        DVector::zeros(self.dim)
    }

    fn minimizer_hint(&self, set: &[EuclideanIsometry]) -> Option<DVector<f64>> {
        Some(least_squares_fixed_point(set).0)
    }

    fn minimize(&self, set: &[EuclideanIsometry], opts: &MinimizeOptions) -> Minimum<DVector<f64>> {
        let start = self.minimizer_hint(set).unwrap_or_else(|| self.base_point());
        euclid_minimize_from(set, start, opts)
    }

    fn describe_point(&self, x: &DVector<f64>) -> String {
        format!("{:?}", x.iter().collect::<Vec<_>>())
    }

    fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Input(format!(
                "expected a point of R^{}, got length {}",
                self.dim,
                x.len()
            )));
        }
        Ok(())
    }

    fn check_isometry(&self, g: &EuclideanIsometry) -> Result<()> {
        if g.dim() != self.dim {
            return Err(Error::Input(format!(
                "expected an isometry of R^{}, got dimension {}",
                self.dim,
                g.dim()
            )));
        }
        Ok(())
    }
}

/// `[a, b] = a b a^-1 b^-1` for nontrivial planar rotations with distinct centers.
pub fn planar_commutator_check(
    a: &EuclideanIsometry,
    b: &EuclideanIsometry,
) -> Result<EuclideanIsometry> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::Hypothesis("planar commutator needs d = 2".into()));
    }
    let mut centers = Vec::new();
    for (name, g) in [("a", a), ("b", b)] {
        if (g.linear() - DMatrix::identity(2, 2)).amax() <= 1e-12 {
            return Err(Error::Hypothesis(format!("{name} has trivial rotation part")));
        }
        if g.linear().determinant() < 0.0 {
            return Err(Error::Hypothesis(format!("{name} is a reflection, not a rotation")));
        }
        let fs = fixed_set(g);
        centers.push(DVector::from_vec(fs.base.expect("nontrivial rotation fixes a point")));
    }
    if (&centers[0] - &centers[1]).norm() <= FIXED_TOL {
        return Err(Error::Hypothesis("rotations share their center".into()));
    }
    let c = a.mul(b).mul(&a.inverse()).mul(&b.inverse());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    #[test]
    fn fixed_sets() {
        let r = EuclideanIsometry::planar_rotation(0.7, [0.0, 0.0]);
        let fs = fixed_set(&r);
        assert_eq!(fs.dimension(), Some(0));
        assert!(v(&fs.base.unwrap()).norm() < 1e-15);
        let t = EuclideanIsometry::translation(v(&[1.0, 0.0])).unwrap();
        assert!(fixed_set(&t).is_empty());
        let h = EuclideanIsometry::planar_rotation(std::f64::consts::PI, [1.0, 0.0]);
        let fs = fixed_set(&h);
        assert!((v(&fs.base.unwrap()) - v(&[1.0, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn translation_lengths() {
        let t = EuclideanIsometry::translation(v(&[3.0, 4.0])).unwrap();
        assert!((euclid_translation_length(&t) - 5.0).abs() < 1e-14);
        let r = EuclideanIsometry::planar_rotation(1.0, [2.0, 3.0]);
        assert_eq!(euclid_translation_length(&r), 0.0);
        // Screw motion in R^3: rotation about the z-axis plus a shift of 2 along it.
        let (s, c) = 0.5f64.sin_cos();
        let rot = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        let screw = EuclideanIsometry::new(rot, v(&[1.0, 0.0, 2.0])).unwrap();
        assert!((euclid_translation_length(&screw) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn minimization_cases() {
        let opts = MinimizeOptions::default();
        let a = EuclideanIsometry::planar_rotation(std::f64::consts::PI, [1.0, 0.0]);
        let b = EuclideanIsometry::planar_rotation(std::f64::consts::PI, [-1.0, 0.0]);
        let m = euclid_minimize_from(&[a, b], v(&[0.3, 0.8]), &opts);
        assert!((m.value - 2.0).abs() < 1e-7, "{}", m.value);
        let t = EuclideanIsometry::translation(v(&[1.0, 0.0])).unwrap();
        let m = euclid_minimize_from(&[t], v(&[5.0, -2.0]), &opts);
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn half_turn_commutator_is_a_translation_of_length_four() {
        let a = EuclideanIsometry::planar_rotation(std::f64::consts::PI, [0.0, 0.0]);
        let b = EuclideanIsometry::planar_rotation(std::f64::consts::PI, [1.0, 0.0]);
        let c = planar_commutator_check(&a, &b).unwrap();
        assert!((c.linear() - DMatrix::identity(2, 2)).amax() < 1e-12);
        assert!((c.translation_part().norm() - 4.0).abs() < 1e-12);
        assert!(planar_commutator_check(&a, &a).is_err());
    }
}
