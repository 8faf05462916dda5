//! `SL2(R)` acting on the upper half-plane by Moebius transformations.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// A point of the upper half-plane.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint(Complex64);

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Input(format!("{x} + {y}i is not in the upper half-plane")));
        }
        Ok(HPoint(Complex64::new(x, y)))
    }

    pub fn i() -> Self {
        HPoint(Complex64::new(0.0, 1.0))
    }

    pub(crate) fn from_complex_unchecked(z: Complex64) -> Self {
        HPoint(z)
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0.re
    }

    pub fn y(&self) -> f64 {
        self.0.im
    }
}

impl fmt::Debug for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.0.re, self.0.im)
    }
}

/// Hyperbolic distance, `cosh d = 1 + |z - w|^2 / (2 Im z Im w)`.
///
/// Evaluated as `2 asinh(|z - w| / (2 sqrt(Im z Im w)))`, switching to the
/// log form for large arguments.
pub fn h2_distance(z: &HPoint, w: &HPoint) -> f64 {
    let num = (z.0 - w.0).norm();
    if num == 0.0 {
        return 0.0;
    }
    let r = num / (2.0 * z.y().sqrt() * w.y().sqrt());
    if r > 1e8 {
        2.0 * (r.ln() + (1.0 + (1.0 + 1.0 / (r * r)).sqrt()).ln())
    } else {
        2.0 * r.asinh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A real 2x2 matrix of determinant 1, up to sign.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moebius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl fmt::Debug for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Moebius {
    /// Exact constructor: requires `|det - 1| <= 1e-12`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det - 1.0).abs().le(&1e-12) {
            return Err(Error::Input(format!(
                "Moebius matrix must have determinant 1, got {det}"
            )));
        }
        Ok(Self::raw(a, b, c, d).sign_normalized())
    }

    /// Rescales any matrix with positive determinant into `SL2(R)`.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::Input(format!(
                "matrix needs positive determinant, got {det}"
            )));
        }
        let s = det.sqrt();
        Ok(Self::raw(a / s, b / s, c / s, d / s).sign_normalized())
    }

    fn raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        Moebius { a, b, c, d }
    }

    fn sign_normalized(self) -> Self {
        let first = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|v| *v != 0.0)
            .unwrap_or(1.0);
        if first < 0.0 {
            Self::raw(-self.a, -self.b, -self.c, -self.d)
        } else {
            self
        }
    }

    pub fn identity() -> Self {
        Self::raw(1.0, 0.0, 0.0, 1.0)
    }

    /// `z -> e^t z`, translation length `|t|` along the imaginary axis.
    pub fn axial(t: f64) -> Self {
        let h = (t / 2.0).exp();
        Self::raw(h, 0.0, 0.0, 1.0 / h).sign_normalized()
    }

    pub fn diag(lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::Input("diagonal entry must be finite and nonzero".into()));
        }
        Ok(Self::raw(lambda, 0.0, 0.0, 1.0 / lambda).sign_normalized())
    }

    /// Rotation by `angle` (counterclockwise) about `center`.
    pub fn rotation(center: &HPoint, angle: f64) -> Self {
        let (x, y) = (center.x(), center.y());
        let sy = y.sqrt();
        // T maps i to the center; k rotates about i by `angle`.
        let t = Self::raw(sy, x / sy, 0.0, 1.0 / sy);
        let (s, c) = (angle / 2.0).sin_cos();
        let k = Self::raw(c, s, -s, c);
        t.mul(&k).mul(&t.inverse())
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &Moebius) -> Moebius {
        let m = Self::raw(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        );
        let det = m.det();
        if det > 0.0 && det.is_finite() && (det - 1.0).abs() > 1e-15 {
            let s = det.sqrt();
            Self::raw(m.a / s, m.b / s, m.c / s, m.d / s).sign_normalized()
        } else {
            m.sign_normalized()
        }
    }

    pub fn inverse(&self) -> Moebius {
        Self::raw(self.d, -self.b, -self.c, self.a).sign_normalized()
    }

    pub fn apply(&self, z: &HPoint) -> HPoint {
        let w = z.0;
        let num = w * self.a + self.b;
        let den = w * self.c + self.d;
        let mut out = num / den;
        // Im(gz) = Im z / |cz + d|^2 exactly; avoid cancellation in the quotient.
        out.im = z.y() / den.norm_sqr();
        HPoint(out)
    }

    /// `q(z) = c z^2 + (d - a) z - b`; `z` is fixed iff `q(z) = 0`.
    pub fn fixed_point_polynomial(&self, z: Complex64) -> (Complex64, Complex64) {
        let q = z * z * self.c + z * (self.d - self.a) - self.b;
        let dq = z * (2.0 * self.c) + (self.d - self.a);
        (q, dq)
    }

    /// Quantized entries for deduplication.
    pub fn key(&self) -> [i128; 4] {
        let q = |v: f64| (v / tolerance::KEY_QUANTUM).round() as i128;
        [q(self.a), q(self.b), q(self.c), q(self.d)]
    }

    pub fn approx_eq(&self, o: &Moebius, tol: f64) -> bool {
        let scale = self
            .entries()
            .iter()
            .chain(o.entries().iter())
            .fold(1.0f64, |m, v| m.max(v.abs()));
        self.entries()
            .iter()
            .zip(o.entries().iter())
            .all(|(x, y)| (x - y).abs() <= tol * scale)
    }
}

pub fn classify(g: &Moebius) -> Classification {
    let t = g.trace().abs();
    if t < 2.0 - tolerance::PARABOLIC_BAND {
        Classification::Elliptic
    } else if t > 2.0 + tolerance::PARABOLIC_BAND {
        Classification::Hyperbolic
    } else {
        Classification::Parabolic
    }
}

/// `2 arccosh(|tr g| / 2)` for hyperbolic `g`, else 0.
pub fn ell_h2(g: &Moebius) -> f64 {
    match classify(g) {
        Classification::Hyperbolic => 2.0 * (g.trace().abs() / 2.0).acosh(),
        _ => 0.0,
    }
}

/// Fixed point of an elliptic element inside the half-plane.
pub fn elliptic_center(g: &Moebius) -> Option<HPoint> {
    if classify(g) != Classification::Elliptic || g.c == 0.0 {
        return None;
    }
    // c z^2 + (d - a) z - b = 0 with negative discriminant.
    let [a, b, c, d] = g.entries();
    let disc = (d - a) * (d - a) + 4.0 * b * c;
    let re = (a - d) / (2.0 * c);
    let im = (-disc).sqrt() / (2.0 * c.abs());
    HPoint::new(re, im).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn distances() {
        assert_eq!(h2_distance(&HPoint::i(), &HPoint::i()), 0.0);
        let up = HPoint::new(0.0, E * E).unwrap();
        assert!((h2_distance(&HPoint::i(), &up) - 2.0).abs() < 1e-14);
        let w = HPoint::new(1.0, 1.0).unwrap();
        assert!((h2_distance(&HPoint::i(), &w) - 1.5f64.acosh()).abs() < 1e-14);
    }

    #[test]
    fn far_points_use_the_log_form_smoothly() {
        let a = HPoint::new(0.0, 1.0).unwrap();
        let b = HPoint::new(0.0, 1e20).unwrap();
        assert!((h2_distance(&a, &b) - 20.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn classification() {
        let r = Moebius::rotation(&HPoint::i(), 2.0 * PI / 3.0);
        assert_eq!(classify(&r), Classification::Elliptic);
        assert_eq!(
            classify(&Moebius::new(1.0, 1.0, 0.0, 1.0).unwrap()),
            Classification::Parabolic
        );
        assert_eq!(classify(&Moebius::diag(E).unwrap()), Classification::Hyperbolic);
        assert!((ell_h2(&Moebius::diag(E).unwrap()) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_fixes_its_center() {
        let c = HPoint::new(0.3, 2.0).unwrap();
        let r = Moebius::rotation(&c, 1.1);
        assert!(h2_distance(&r.apply(&c), &c) < 1e-14);
        let center = elliptic_center(&r).unwrap();
        assert!(h2_distance(&center, &c) < 1e-12);
    }

    #[test]
    fn sign_normalization() {
        let g = Moebius::new(-2.0, -1.0, -1.0, -1.0).unwrap();
        assert_eq!(g.entries(), [2.0, 1.0, 1.0, 1.0]);
        assert!(Moebius::new(2.0, 0.0, 0.0, 1.0).is_err());
    }
}
