//! Elements of `SL_d(R)`, with an exact integer mode.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// Row-major integer matrix of size `d x d`.
pub type IntMatrix = Vec<i128>;

/// A matrix of determinant `+-1`, optionally carrying exact integer entries.
#[derive(Clone, PartialEq)]
pub struct MatrixIsometry {
    dim: usize,
    float: DMatrix<f64>,
    exact: Option<IntMatrix>,
}

impl fmt::Debug for MatrixIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<f64>> = self.rows();
        if self.exact.is_some() {
            write!(f, "exact {rows:?}")
        } else {
            write!(f, "{rows:?}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MatrixKey {
    Exact(Vec<i128>),
    Quantized(Vec<i128>),
}

/// JSON form: `{"mode": "exact-int" | "float", "rows": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub mode: String,
    pub rows: Vec<Vec<f64>>,
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn int_det(m: &[i128], d: usize) -> Option<i128> {
    if d == 0 {
        return Some(1);
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d - 1 {
        if a[k * d + k] == 0 {
            let Some(swap) = (k + 1..d).find(|&r| a[r * d + k] != 0) else {
                return Some(0);
            };
            for c in 0..d {
                a.swap(k * d + c, swap * d + c);
            }
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let num = a[i * d + j]
                    .checked_mul(a[k * d + k])?
                    .checked_sub(a[i * d + k].checked_mul(a[k * d + j])?)?;
                a[i * d + j] = num / prev;
            }
        }
        prev = a[k * d + k];
    }
    Some(sign * a[(d - 1) * d + (d - 1)])
}

fn minor(m: &[i128], d: usize, skip_r: usize, skip_c: usize) -> Vec<i128> {
    let mut out = Vec::with_capacity((d - 1) * (d - 1));
    for r in (0..d).filter(|&r| r != skip_r) {
        for c in (0..d).filter(|&c| c != skip_c) {
            out.push(m[r * d + c]);
        }
    }
    out
}

/// Adjugate of an integer matrix; equals `det * inverse`.
pub fn int_adjugate(m: &[i128], d: usize) -> Option<IntMatrix> {
    if d == 1 {
        return Some(vec![1]);
    }
    let mut adj = vec![0i128; d * d];
    for r in 0..d {
        for c in 0..d {
            let cof = int_det(&minor(m, d, r, c), d - 1)?;
            let signed = if (r + c) % 2 == 0 { cof } else { -cof };
            adj[c * d + r] = signed;
        }
    }
    Some(adj)
}

pub fn int_mul(a: &[i128], b: &[i128], d: usize) -> Option<IntMatrix> {
    let mut out = vec![0i128; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == 0 {
                continue;
            }
            for j in 0..d {
                out[i * d + j] = out[i * d + j].checked_add(aik.checked_mul(b[k * d + j])?)?;
            }
        }
    }
    Some(out)
}

fn to_float(m: &[i128], d: usize) -> DMatrix<f64> {
    DMatrix::from_row_iterator(d, d, m.iter().map(|&v| v as f64))
}

impl MatrixIsometry {
    /// Exact constructor from integer entries (row-major); requires `det = +-1`.
    pub fn from_ints(dim: usize, entries: &[i64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Input(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let m: IntMatrix = entries.iter().map(|&v| v as i128).collect();
        let det = int_det(&m, dim).ok_or_else(|| Error::Input("determinant overflow".into()))?;
        if det.abs() != 1 {
            return Err(Error::Input(format!("exact matrix must have det +-1, got {det}")));
        }
        Ok(MatrixIsometry {
            dim,
            float: to_float(&m, dim),
            exact: Some(m),
        })
    }

    /// Floating constructor; requires `||det| - 1| <= 1e-9`.
    pub fn from_f64(dim: usize, entries: &[f64]) -> Result<Self> {
        let m = Self::float_matrix(dim, entries)?;
        let det = m.determinant();
        if (det.abs() - 1.0).abs() > tolerance::COMPARE {
            return Err(Error::Input(format!("matrix must have |det| = 1, got {det}")));
        }
        Ok(MatrixIsometry {
            dim,
            float: m,
            exact: None,
        })
    }

    /// Rescales an invertible matrix to `|det| = 1`.
    pub fn normalized(dim: usize, entries: &[f64]) -> Result<Self> {
        let m = Self::float_matrix(dim, entries)?;
        let det = m.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Input("singular matrix".into()));
        }
        let s = det.abs().powf(-1.0 / dim as f64);
        Ok(MatrixIsometry {
            dim,
            float: m * s,
            exact: None,
        })
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Input("matrix must be square".into()));
        }
        let d = m.nrows();
        let entries: Vec<f64> = (0..d * d).map(|i| m[(i / d, i % d)]).collect();
        Self::from_f64(d, &entries)
    }

    fn float_matrix(dim: usize, entries: &[f64]) -> Result<DMatrix<f64>> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Input(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite matrix entry".into()));
        }
        Ok(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_record(r: &MatrixRecord) -> Result<Self> {
        let dim = r.rows.len();
        if r.rows.iter().any(|row| row.len() != dim) {
            return Err(Error::Input("matrix rows must form a square".into()));
        }
        let flat: Vec<f64> = r.rows.iter().flatten().copied().collect();
        match r.mode.as_str() {
            "exact-int" => {
                let ints: Vec<i64> = flat
                    .iter()
                    .map(|v| {
                        if v.fract() == 0.0 && v.abs() < 9.0e15 {
                            Ok(*v as i64)
                        } else {
                            Err(Error::Input(format!("{v} is not an integer entry")))
                        }
                    })
                    .collect::<Result<_>>()?;
                Self::from_ints(dim, &ints)
            }
            "float" => Self::from_f64(dim, &flat),
            other => Err(Error::Input(format!(
                "matrix mode must be \"exact-int\" or \"float\", got \"{other}\""
            ))),
        }
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            mode: if self.exact.is_some() { "exact-int" } else { "float" }.into(),
            rows: self.rows(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![0i128; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = 1;
        }
        MatrixIsometry {
            dim,
            float: DMatrix::identity(dim, dim),
            exact: Some(m),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.float
    }

    pub fn exact_entries(&self) -> Option<&[i128]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.float[(r, c)]).collect())
            .collect()
    }

    /// Product; stays exact while the integer entries fit.
    pub fn mul(&self, o: &MatrixIsometry) -> MatrixIsometry {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        if let (Some(a), Some(b)) = (&self.exact, &o.exact) {
            if let Some(p) = int_mul(a, b, self.dim) {
                return MatrixIsometry {
                    dim: self.dim,
                    float: to_float(&p, self.dim),
                    exact: Some(p),
                };
            }
        }
        MatrixIsometry {
            dim: self.dim,
            float: &self.float * &o.float,
            exact: None,
        }
    }

    pub fn inverse(&self) -> MatrixIsometry {
        if let Some(a) = &self.exact {
            if let (Some(adj), Some(det)) = (int_adjugate(a, self.dim), int_det(a, self.dim)) {
                let inv: IntMatrix = adj.iter().map(|v| v * det).collect();
                return MatrixIsometry {
                    dim: self.dim,
                    float: to_float(&inv, self.dim),
                    exact: Some(inv),
                };
            }
        }
        MatrixIsometry {
            dim: self.dim,
            float: self
                .float
                .clone()
                .try_inverse()
                .expect("determinant is +-1"),
            exact: None,
        }
    }

    pub fn transpose(&self) -> MatrixIsometry {
        MatrixIsometry {
            dim: self.dim,
            float: self.float.transpose(),
            exact: self.exact.as_ref().map(|m| {
                let d = self.dim;
                (0..d * d).map(|i| m[(i % d) * d + i / d]).collect()
            }),
        }
    }

    pub fn key(&self) -> MatrixKey {
        match &self.exact {
            Some(m) => MatrixKey::Exact(m.clone()),
            None => MatrixKey::Quantized(
                self.float
                    .transpose()
                    .iter()
                    .map(|v| (v / tolerance::KEY_QUANTUM).round() as i128)
                    .collect(),
            ),
        }
    }

    /// Eigenvalues: closed form for `d = 2`, Schur decomposition otherwise.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        if self.dim == 1 {
            return vec![Complex64::new(self.float[(0, 0)], 0.0)];
        }
        if self.dim == 2 {
            let (t, det) = self.trace_det_2();
            let disc = Complex64::new(t * t - 4.0 * det, 0.0).sqrt();
            let big = if t >= 0.0 { (t + disc) / 2.0 } else { (t - disc) / 2.0 };
            // The product of the eigenvalues is `det`; avoids cancellation in the small one.
            let small = if big.norm() > 0.0 {
                Complex64::new(det, 0.0) / big
            } else {
                Complex64::new(0.0, 0.0)
            };
            return vec![big, small];
        }
        self.float.clone().complex_eigenvalues().iter().copied().collect()
    }

    /// Trace and determinant of a 2x2 matrix, exact when available.
    fn trace_det_2(&self) -> (f64, f64) {
        match &self.exact {
            Some(m) => ((m[0] + m[3]) as f64, (m[0] * m[3] - m[1] * m[2]) as f64),
            None => (
                self.float[(0, 0)] + self.float[(1, 1)],
                self.float.determinant(),
            ),
        }
    }

    /// Largest eigenvalue modulus `Lambda(g)`.
    pub fn spectral_radius(&self) -> f64 {
        let rho = self
            .eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        // rho <= ||g|| always; keep rounding from reversing it.
        rho.min(self.operator_norm())
    }

    /// Operator 2-norm: closed form for `d = 2`, symmetric eigenvalues otherwise.
    pub fn operator_norm(&self) -> f64 {
        if self.dim == 2 {
            let (f2, det) = match &self.exact {
                Some(m) => (
                    m.iter().map(|v| (v * v) as f64).sum::<f64>(),
                    ((m[0] * m[3] - m[1] * m[2]) as f64).abs(),
                ),
                None => (
                    self.float.iter().map(|v| v * v).sum::<f64>(),
                    self.float.determinant().abs(),
                ),
            };
            // sigma_max^2 = (F + sqrt(F^2 - 4 det^2)) / 2 with F the squared Frobenius norm.
            let disc = ((f2 - 2.0 * det).max(0.0) * (f2 + 2.0 * det)).sqrt();
            return ((f2 + disc) / 2.0).sqrt();
        }
        let gram = self.float.transpose() * &self.float;
        SymmetricEigen::new(gram)
            .eigenvalues
            .iter()
            .copied()
            .fold(0.0, f64::max)
            .sqrt()
    }
}

/// Operator norm by power iteration on `g^T g`, with the Rayleigh residual
/// `||g^T g v - s^2 v||` of the final iterate.
pub fn operator_norm_power_iteration(g: &DMatrix<f64>, tol: f64, max_iter: usize) -> (f64, f64) {
    let gram = g.transpose() * g;
    let n = gram.nrows();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| 1.0 + 0.1 * i as f64);
    v /= v.norm();
    let mut est = 0.0;
    for _ in 0..max_iter {
        let w = &gram * &v;
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return (0.0, 0.0);
        }
        v = w / norm;
        let done = (next - est).abs() <= tol * next.abs().max(1.0);
        est = next;
        if done {
            break;
        }
    }
    let rayleigh = v.dot(&(&gram * &v));
    let residual = (&gram * &v - &v * rayleigh).norm();
    (rayleigh.max(0.0).sqrt(), residual)
}
