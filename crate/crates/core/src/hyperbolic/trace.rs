//! Trace identities for pairs in `SL2(C)`.

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::moebius::Moebius;
use crate::error::{Error, Result};

const TRACE_TOL: f64 = 1e-9;

/// A complex 2x2 matrix of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMoebius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl ComplexMoebius {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).norm() > 1e-9 {
            return Err(Error::Input(format!("determinant must be 1, got {det}")));
        }
        Ok(ComplexMoebius { a, b, c, d })
    }

    /// Rescales by a square root of the determinant.
    pub fn normalized(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Error::Input("singular matrix".into()));
        }
        let s = det.sqrt();
        Ok(ComplexMoebius {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        ComplexMoebius {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn from_real(g: &Moebius) -> Self {
        let [a, b, c, d] = g.entries();
        let r = |v: f64| Complex64::new(v, 0.0);
        ComplexMoebius {
            a: r(a),
            b: r(b),
            c: r(c),
            d: r(d),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexMoebius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Self {
        ComplexMoebius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// `M^* X M` for a 2x2 complex matrix `X` given row-major.
    fn congruence(&self, x: [Complex64; 4]) -> [Complex64; 4] {
        let m = [self.a, self.b, self.c, self.d];
        let mh = [m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()];
        let mul = |p: [Complex64; 4], q: [Complex64; 4]| {
            [
                p[0] * q[0] + p[1] * q[2],
                p[0] * q[1] + p[1] * q[3],
                p[2] * q[0] + p[3] * q[2],
                p[2] * q[1] + p[3] * q[3],
            ]
        };
        mul(mul(mh, x), m)
    }
}

/// `[a, b] = a b a^-1 b^-1`.
pub fn commutator(a: &ComplexMoebius, b: &ComplexMoebius) -> ComplexMoebius {
    a.mul(b).mul(&a.inverse()).mul(&b.inverse())
}

/// `2(x^2 + y^2 + z^2) - 4xyz - 1` for the half-traces of `a`, `b`, `ab`;
/// equal to half the trace of the commutator.
pub fn trace_commutator(a: &ComplexMoebius, b: &ComplexMoebius) -> Complex64 {
    let x = a.trace() / 2.0;
    let y = b.trace() / 2.0;
    let z = a.mul(b).trace() / 2.0;
    (x * x + y * y + z * z) * 2.0 - x * y * z * 4.0 - 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum Trichotomy {
    /// Both lie in a conjugate of `SU2`; `witness` is a positive Hermitian
    /// `M` (row-major) with `a* M a = M` and `b* M b = M`.
    CommonUnitaryForm { witness: [[f64; 2]; 4], residual: f64 },
    /// `a` and `b` share an eigenvector.
    CommonTriangularForm,
    /// The commutator is loxodromic.
    LoxodromicCommutator { trace: [f64; 2] },
    /// A boundary case the floating tests cannot separate.
    Indeterminate { reason: String },
}

fn is_real_in_band(t: Complex64) -> bool {
    t.im.abs() <= TRACE_TOL && t.re.abs() <= 2.0 + TRACE_TOL
}

/// Unit eigenvectors of a non-scalar 2x2 matrix.
fn eigenvectors(m: &ComplexMoebius) -> Vec<[Complex64; 2]> {
    let t = m.trace();
    let disc = (t * t - 4.0).sqrt();
    let mut out = Vec::new();
    for mu in [(t + disc) / 2.0, (t - disc) / 2.0] {
        // (a - mu) v1 + b v2 = 0 and c v1 + (d - mu) v2 = 0.
        let cand1 = [m.b, mu - m.a];
        let cand2 = [mu - m.d, m.c];
        let v = if cand1[0].norm() + cand1[1].norm() >= cand2[0].norm() + cand2[1].norm() {
            cand1
        } else {
            cand2
        };
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n > 0.0 {
            out.push([v[0] / n, v[1] / n]);
        }
    }
    out
}

fn is_scalar(m: &ComplexMoebius) -> bool {
    m.b.norm() <= TRACE_TOL && m.c.norm() <= TRACE_TOL && (m.a - m.d).norm() <= TRACE_TOL
}

/// `|det[v, m v]|`: zero iff `v` is an eigenvector of `m`.
fn eigen_defect(m: &ComplexMoebius, v: &[Complex64; 2]) -> f64 {
    let w = [m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]];
    let scale = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt().max(1.0);
    (v[0] * w[1] - v[1] * w[0]).norm() / scale
}

fn share_eigenvector(a: &ComplexMoebius, b: &ComplexMoebius) -> bool {
    if is_scalar(a) || is_scalar(b) {
        return true;
    }
    eigenvectors(a)
        .iter()
        .any(|v| eigen_defect(b, v) <= TRACE_TOL)
}

/// Positive Hermitian `M` fixed by congruence with `a` and `b`, if any.
fn invariant_hermitian(a: &ComplexMoebius, b: &ComplexMoebius) -> Option<([Complex64; 4], f64)> {
    // M = [[p, q], [conj q, r]] with real unknowns (p, r, Re q, Im q).
    let basis = [
        [Complex64::new(1.0, 0.0), 0.0.into(), 0.0.into(), 0.0.into()],
        [0.0.into(), 0.0.into(), 0.0.into(), Complex64::new(1.0, 0.0)],
        [0.0.into(), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 0.0.into()],
        [0.0.into(), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), 0.0.into()],
    ];
    let mut rows = DMatrix::<f64>::zeros(16, 4);
    for (col, e) in basis.iter().enumerate() {
        for (k, g) in [a, b].iter().enumerate() {
            let img = g.congruence(*e);
            for i in 0..4 {
                let diff = img[i] - e[i];
                rows[(k * 8 + 2 * i, col)] = diff.re;
                rows[(k * 8 + 2 * i + 1, col)] = diff.im;
            }
        }
    }
    let svd = SVD::new(rows.clone(), false, true);
    let vt = svd.v_t.as_ref()?;
    let sv = &svd.singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max).max(1.0);
    let null: Vec<usize> = (0..4).filter(|&i| sv[i] <= 1e-8 * top).collect();
    if null.is_empty() {
        return None;
    }
    // Project the identity onto the null space, then fall back to basis vectors.
    let ident = nalgebra::DVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]);
    let mut candidates: Vec<nalgebra::DVector<f64>> = Vec::new();
    let mut proj = nalgebra::DVector::zeros(4);
    for &i in &null {
        let v = vt.row(i).transpose();
        proj += &v * v.dot(&ident);
    }
    candidates.push(proj);
    for &i in &null {
        let v = vt.row(i).transpose();
        candidates.push(v.clone());
        candidates.push(-v);
    }
    for v in candidates {
        let (p, r, qr, qi) = (v[0], v[1], v[2], v[3]);
        let det = p * r - qr * qr - qi * qi;
        if p > 0.0 && det > 0.0 {
            let s = det.sqrt();
            let m = [
                Complex64::new(p / s, 0.0),
                Complex64::new(qr / s, qi / s),
                Complex64::new(qr / s, -qi / s),
                Complex64::new(r / s, 0.0),
            ];
            let residual = [a, b]
                .iter()
                .map(|g| {
                    let img = g.congruence(m);
                    (0..4).map(|i| (img[i] - m[i]).norm()).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            return Some((m, residual));
        }
    }
    None
}

/// Sorts a pair with real traces in `[-2, 2]` into the three cases.
pub fn pair_trichotomy(a: &ComplexMoebius, b: &ComplexMoebius) -> Result<Trichotomy> {
    for (name, t) in [("a", a.trace()), ("b", b.trace()), ("ab", a.mul(b).trace())] {
        if !is_real_in_band(t) {
            return Err(Error::Hypothesis(format!(
                "trace of {name} is {t}, not real in [-2, 2]"
            )));
        }
    }
    let t = commutator(a, b).trace();
    if !is_real_in_band(t) {
        return Ok(Trichotomy::LoxodromicCommutator { trace: [t.re, t.im] });
    }
    let shared = share_eigenvector(a, b);
    let trace_says_reducible = (t - 2.0).norm() <= TRACE_TOL;
    if shared {
        return Ok(Trichotomy::CommonTriangularForm);
    }
    if trace_says_reducible {
        return Ok(Trichotomy::Indeterminate {
            reason: "tr[a,b] = 2 but no shared eigenvector within tolerance".into(),
        });
    }
    match invariant_hermitian(a, b) {
        Some((m, residual)) if residual <= 1e-8 => Ok(Trichotomy::CommonUnitaryForm {
            witness: [
                [m[0].re, m[0].im],
                [m[1].re, m[1].im],
                [m[2].re, m[2].im],
                [m[3].re, m[3].im],
            ],
            residual,
        }),
        _ => Ok(Trichotomy::Indeterminate {
            reason: "no positive invariant Hermitian form found".into(),
        }),
    }
}
