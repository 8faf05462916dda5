//! The hyperbolic plane as a geometry for the displacement engine.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::moebius::{ell_h2, h2_distance, HPoint, Moebius};
use crate::displacement::{
    displacement_at, CurvatureClass, GeneratingSet, Geometry, GeometryTag, LambdaProfile,
    MinimizeOptions, Minimum,
};
use crate::error::Result;
use crate::minimize::{minimize_max, MinimaxProblem};
use crate::tolerance;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HyperbolicPlane;

/// `max_s (cosh d(z, s z) - 1)` on the half-plane, in the frame `(y d/dx, y d/dy)`.
struct Problem<'a> {
    set: &'a [Moebius],
}

impl Problem<'_> {
    /// Geodesic from `z` with initial unit direction angle `phi`, at length `t`.
    fn geodesic(z: &HPoint, phi: f64, t: f64) -> HPoint {
        let theta = (phi - FRAC_PI_2) / 2.0;
        let (s, c) = theta.sin_cos();
        // k_theta(w) = (c w + s) / (c - s w) at w = i e^t, in a form that stays
        // finite for large t. Its imaginary part is e^t / |c - s i e^t|^2.
        let (k, im) = if t > 0.0 {
            let e = (-t).exp();
            let inv = Complex64::new(0.0, -e);
            ((inv * s + c) / (inv * c - s), e / (c * c * e * e + s * s))
        } else {
            let e = t.exp();
            let w = Complex64::new(0.0, e);
            ((w * c + s) / (w * (-s) + c), e / (c * c + s * s * e * e))
        };
        let (x, y) = (z.x(), z.y());
        HPoint::from_complex_unchecked(Complex64::new(x + y * k.re, y * im))
    }
}

impl MinimaxProblem for Problem<'_> {
    type Point = HPoint;

    fn dim(&self) -> usize {
        2
    }

    fn values(&self, z: &HPoint) -> Vec<f64> {
        let y2 = z.y() * z.y();
        self.set
            .iter()
            .map(|g| g.fixed_point_polynomial(z.z()).0.norm_sqr() / (2.0 * y2))
            .collect()
    }

    fn gradient(&self, i: usize, z: &HPoint) -> Vec<f64> {
        let y = z.y();
        let (q, dq) = self.set[i].fixed_point_polynomial(z.z());
        let prod = q.conj() * dq;
        let qx = 2.0 * prod.re;
        let qy = -2.0 * prod.im;
        let big_q = q.norm_sqr();
        vec![qx / (2.0 * y), qy / (2.0 * y) - big_q / (y * y)]
    }

    fn exp(&self, z: &HPoint, dir: &[f64], t: f64) -> HPoint {
        let phi = dir[1].atan2(dir[0]);
        if t < 0.0 {
            Self::geodesic(z, phi + std::f64::consts::PI, -t)
        } else {
            Self::geodesic(z, phi, t)
        }
    }

    // Near the real axis `d(z, g z)` loses about `|z| / y` ulps, so the
    // trusted region keeps `y / |z|` above 1e-6.
    fn escaped(&self, z: &HPoint) -> bool {
        let (x, y) = (z.x(), z.y());
        !(y > 1e-5 * z.z().norm().max(1.0) && y < 1e8 && x.abs() < 1e8)
    }

    fn admissible(&self, z: &HPoint) -> bool {
        let (x, y) = (z.x(), z.y());
        y > 1e-6 * z.z().norm().max(1.0) && y < 1e9 && x.abs() < 1e9
    }

    fn negligible(&self) -> f64 {
        1e-32
    }
}

/// Minimizes `L(S, .)` on the half-plane starting from `start`.
pub fn h2_minimize_from(set: &[Moebius], start: HPoint, opts: &MinimizeOptions) -> Minimum<HPoint> {
    let problem = Problem { set };
    let r = minimize_max(&problem, start, opts.max_iterations, opts.tolerance);
    let value = displacement_at(&HyperbolicPlane, set, &r.point);
    Minimum {
        point: r.point,
        value,
        status: r.status,
        iterations: r.iterations,
    }
}

pub fn h2_minimal_displacement(
    set: &GeneratingSet<Moebius>,
    opts: &MinimizeOptions,
) -> Minimum<HPoint> {
    h2_minimize_from(set.elements(), HPoint::i(), opts)
}

/// `L_upper(S) - lambda_2(S)`; divide by `delta = 2` for the gap in units of delta.
pub fn bochi_hyp_gap(set: &GeneratingSet<Moebius>, opts: &MinimizeOptions) -> Result<f64> {
    let geom = HyperbolicPlane;
    let ladder = crate::displacement::power_ladder(&geom, set, 2, tolerance::WORD_BUDGET)?;
    let lam2 = LambdaProfile::from_ladder(&geom, &ladder).lambda_k(2);
    Ok(h2_minimal_displacement(set, opts).value - lam2)
}

impl Geometry for HyperbolicPlane {
    type Point = HPoint;
    type Isometry = Moebius;
    type Key = [i128; 4];

    fn tag(&self) -> GeometryTag {
        GeometryTag::H2
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn curvature(&self) -> CurvatureClass {
        CurvatureClass {
            cat0: true,
            delta: Some(tolerance::H2_DELTA),
        }
    }

    fn distance(&self, x: &HPoint, y: &HPoint) -> f64 {
        h2_distance(x, y)
    }

    fn apply(&self, g: &Moebius, x: &HPoint) -> HPoint {
        g.apply(x)
    }

    fn compose(&self, g: &Moebius, h: &Moebius) -> Moebius {
        g.mul(h)
    }

    fn invert(&self, g: &Moebius) -> Moebius {
        g.inverse()
    }

    fn identity(&self) -> Moebius {
        Moebius::identity()
    }

    fn translation_length(&self, g: &Moebius) -> f64 {
        ell_h2(g)
    }

    fn canonical_key(&self, g: &Moebius) -> [i128; 4] {
        g.key()
    }

    fn base_point(&self) -> HPoint {
        HPoint::i()
    }

    fn minimize(&self, set: &[Moebius], opts: &MinimizeOptions) -> Minimum<HPoint> {
        h2_minimize_from(set, HPoint::i(), opts)
    }

    fn describe_point(&self, x: &HPoint) -> String {
        format!("{x:?}")
    }
}
