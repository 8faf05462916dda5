//! The piecewise geodesic `U_n g^n [m, g m]`, with `m` the midpoint of
//! `[x, g x]`, as a quasi-axis of a hyperbolic isometry.
//!
//! In the plane everything is computed in Fermi coordinates `(s, u)` about the
//! axis (position along it, signed distance from it), so translation lengths
//! far beyond the range of floating matrices are fine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{ell_h2, ExactMoebius, HPoint, Moebius};
use crate::tree::free::{apply_word, quadrupled_distance};
use crate::tree::{free_translation_length, FreePoint, FreeWord};

/// Quasi-geodesic constants: `d >= SLOPE |t - s| - ADDITIVE_DELTAS * delta`.
pub const SLOPE: f64 = 0.9;
pub const ADDITIVE_DELTAS: f64 = 24.0;
/// Required closeness to geodesics, in units of `delta`.
pub const HAUSDORFF_DELTAS: f64 = 12.0;
/// Translation length threshold, in units of `delta`.
pub const LENGTH_DELTAS: f64 = 1000.0;

/// A hyperbolic isometry of the plane up to conjugacy: a translation along
/// an axis by `translation_length`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxialIsometry {
    pub translation_length: f64,
}

impl AxialIsometry {
    pub fn new(translation_length: f64) -> Result<Self> {
        if !(translation_length > 0.0 && translation_length.is_finite()) {
            return Err(Error::Hypothesis("isometry is not hyperbolic".into()));
        }
        Ok(AxialIsometry { translation_length })
    }

    pub fn from_moebius(g: &Moebius) -> Result<Self> {
        Self::new(ell_h2(g))
    }

    pub fn from_exact(g: &ExactMoebius) -> Result<Self> {
        Self::new(g.translation_length())
    }
}

/// `ln cosh u`, stable for large `|u|`.
fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Distance between points with Fermi coordinates `(s1, u1)` and `(s2, u2)`.
pub fn fermi_distance(s1: f64, u1: f64, s2: f64, u2: f64) -> f64 {
    let ds = (s1 - s2).abs();
    if ds < 30.0 {
        let c = u1.cosh() * u2.cosh() * ds.cosh() - u1.sinh() * u2.sinh();
        return c.max(1.0).acosh();
    }
    // cosh d = cosh u1 cosh u2 cosh ds (1 - tanh u1 tanh u2 / cosh ds), and
    // acosh(C) = ln(2C) up to C^-2.
    ln_cosh(u1) + ln_cosh(u2) + ds + (-2.0 * ds).exp().ln_1p()
        + (-(u1.tanh() * u2.tanh()) / ds.cosh()).ln_1p()
}

/// Offset of the midpoint of `[(0, u), (l, u)]`: `tanh u_m = tanh u / cosh(l/2)`.
fn midpoint_offset(u: f64, l: f64) -> f64 {
    let half = l / 2.0;
    // 1 / cosh(half) = 2 e^-half / (1 + e^-2 half).
    let inv_cosh = 2.0 * (-half).exp() / (1.0 + (-l).exp());
    (u.tanh() * inv_cosh).atanh()
}

/// Distance from `x` to the axis of a hyperbolic `g`.
pub fn axis_offset(g: &Moebius, x: &HPoint) -> Result<f64> {
    let [a, b, c, d] = g.entries();
    let tr = a + d;
    let disc = tr * tr - 4.0;
    if disc <= 0.0 {
        return Err(Error::Hypothesis("isometry is not hyperbolic".into()));
    }
    let z = x.z();
    // Send the fixed points to 0 and infinity; the axis becomes the imaginary axis.
    let w = if c.abs() < 1e-300 {
        z - b / (d - a)
    } else {
        let root = disc.sqrt();
        let (p, q) = ((a - d + root) / (2.0 * c), (a - d - root) / (2.0 * c));
        (z - p) / (z - q)
    };
    Ok((w.re.abs() / w.im.abs()).asinh())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiAxisReport {
    pub translation_length: f64,
    pub delta: f64,
    pub start_offset: f64,
    /// Distance from `m` to the axis; the largest offset along the path.
    pub midpoint_offset: f64,
    /// `d(m, g m)`.
    pub segment_length: f64,
    pub pairs_checked: usize,
    /// `min d(p, q) - (0.9 |t - s| - 24 delta)` over sampled pairs.
    pub worst_quasi_margin: f64,
    /// Upper bound for the Hausdorff distance between a subpath and the
    /// geodesic with the same endpoints: twice the largest offset.
    pub hausdorff_bound: f64,
    /// `12 delta - hausdorff_bound`.
    pub hausdorff_margin: f64,
}

impl QuasiAxisReport {
    pub fn passed(&self) -> bool {
        self.worst_quasi_margin >= 0.0 && self.hausdorff_margin >= 0.0
    }
}

/// Samples the vertices `g^n m` and segment midpoints for `n` in `0..=segments`
/// and checks every pair.
///
/// `offset` is the distance from the starting point to the axis.
pub fn quasi_axis_check(
    g: &AxialIsometry,
    offset: f64,
    delta: f64,
    segments: usize,
) -> Result<QuasiAxisReport> {
    let l = g.translation_length;
    if !(delta > 0.0) {
        return Err(Error::Parameter("delta must be positive".into()));
    }
    if l <= LENGTH_DELTAS * delta {
        return Err(Error::Precondition(format!(
            "translation length {l} must exceed 1000 delta = {}",
            LENGTH_DELTAS * delta
        )));
    }
    if !(offset >= 0.0 && offset.is_finite()) {
        return Err(Error::Parameter("offset must be a finite nonnegative number".into()));
    }
    let um = midpoint_offset(offset, l);
    let uc = midpoint_offset(um, l);
    let seg = fermi_distance(0.0, um, l, um);
    // (s, u, arclength)
    let mut pts = Vec::new();
    for n in 0..=segments {
        let nf = n as f64;
        pts.push((nf * l, um, nf * seg));
        if n < segments {
            pts.push((nf * l + l / 2.0, uc, nf * seg + seg / 2.0));
        }
    }
    let mut worst = f64::INFINITY;
    let mut pairs = 0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            let d = fermi_distance(p.0, p.1, q.0, q.1);
            let bound = SLOPE * (q.2 - p.2).abs() - ADDITIVE_DELTAS * delta;
            worst = worst.min(d - bound);
            pairs += 1;
        }
    }
    let hausdorff = 2.0 * um.abs();
    Ok(QuasiAxisReport {
        translation_length: l,
        delta,
        start_offset: offset,
        midpoint_offset: um,
        segment_length: seg,
        pairs_checked: pairs,
        worst_quasi_margin: worst,
        hausdorff_bound: hausdorff,
        hausdorff_margin: HAUSDORFF_DELTAS * delta - hausdorff,
    })
}

/// Point at doubled distance `k2` from vertex `a` along `[a, b]`.
fn point_on_segment(a: &FreeWord, b: &FreeWord, k2: usize) -> FreePoint {
    let c = a.common_prefix(b);
    let up = a.len() - c;
    let vertex_at = |j: usize| -> FreeWord {
        let letters: Vec<i8> = if j <= up {
            a.letters()[..a.len() - j].to_vec()
        } else {
            b.letters()[..c + (j - up)].to_vec()
        };
        FreeWord::from_letters(&letters).expect("prefix of a reduced word")
    };
    if k2 % 2 == 0 {
        FreePoint::Vertex(vertex_at(k2 / 2))
    } else {
        FreePoint::edge_midpoint(&vertex_at(k2 / 2), &vertex_at(k2 / 2 + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeQuasiAxisReport {
    pub translation_length: u64,
    pub segment_length: f64,
    pub pairs_checked: usize,
    /// `min d(g^i m, g^j m) - 0.9 |i - j| d(m, g m)`.
    pub worst_quasi_margin: f64,
    /// Every sampled subpath has the length of its chord, so the path is a geodesic.
    pub is_geodesic: bool,
}

/// Tree version, with `delta = 0`: any hyperbolic `g` qualifies.
pub fn quasi_axis_check_tree(g: &FreeWord, x: &FreeWord, segments: usize) -> Result<TreeQuasiAxisReport> {
    let ell = free_translation_length(g);
    if ell == 0 {
        return Err(Error::Precondition("the word is elliptic; a hyperbolic element is required".into()));
    }
    let gx = g.mul(x);
    let d4 = quadrupled_distance(&FreePoint::Vertex(x.clone()), &FreePoint::Vertex(gx.clone()));
    let m = point_on_segment(x, &gx, (d4 / 4) as usize);
    let gm = apply_word(g, &m);
    let seg4 = quadrupled_distance(&m, &gm);
    let pts: Vec<FreePoint> = (0..=segments)
        .map(|n| apply_word(&g.pow(n as i64), &m))
        .collect();
    let mut worst = f64::INFINITY;
    let mut geodesic = true;
    let mut pairs = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d4 = quadrupled_distance(&pts[i], &pts[j]);
            let arc4 = (j - i) as i64 * seg4;
            geodesic &= d4 == arc4;
            worst = worst.min(d4 as f64 / 4.0 - SLOPE * arc4 as f64 / 4.0);
            pairs += 1;
        }
    }
    Ok(TreeQuasiAxisReport {
        translation_length: ell,
        segment_length: seg4 as f64 / 4.0,
        pairs_checked: pairs,
        worst_quasi_margin: worst,
        is_geodesic: geodesic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermi_distance_agrees_with_the_plane() {
        // Axis = imaginary axis; (s, u) is the point e^s (tanh u + i sech u).
        let pt = |s: f64, u: f64| HPoint::new(s.exp() * u.tanh(), s.exp() / u.cosh()).unwrap();
        for &(s1, u1, s2, u2) in &[(0.0, 0.3, 1.0, -0.2), (0.5, 2.0, -3.0, 1.0), (0.0, 0.0, 35.0, 0.5)] {
            let direct = crate::hyperbolic::h2_distance(&pt(s1, u1), &pt(s2, u2));
            assert!((fermi_distance(s1, u1, s2, u2) - direct).abs() < 1e-9, "{direct}");
        }
    }

    #[test]
    fn on_axis_the_path_is_a_geodesic() {
        let g = AxialIsometry::new(30_000.0 * std::f64::consts::LN_2).unwrap();
        let r = quasi_axis_check(&g, 0.0, 2.0, 6).unwrap();
        assert_eq!(r.midpoint_offset, 0.0);
        assert!((r.segment_length - g.translation_length).abs() < 1e-9);
        // Margin is at least the additive constant.
        assert!(r.worst_quasi_margin >= 48.0 - 1e-6);
        assert!(r.passed());
    }

    #[test]
    fn off_axis_start() {
        let g = AxialIsometry::new(2500.0).unwrap();
        let r = quasi_axis_check(&g, 5.0, 2.0, 6).unwrap();
        assert!(r.passed());
        assert!(r.midpoint_offset < 1e-300);
    }

    #[test]
    fn short_translations_are_rejected() {
        let g = AxialIsometry::new(200.0).unwrap();
        assert!(matches!(quasi_axis_check(&g, 0.0, 2.0, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn axis_offsets() {
        let g = Moebius::axial(1.0);
        let x = HPoint::new(3f64.sinh(), 1.0).unwrap();
        assert!((axis_offset(&g, &x).unwrap() - 3.0).abs() < 1e-12);
        let h = Moebius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        // Points on the axis have offset zero: the semicircle over [1 - phi, phi].
        let mid = (phi + 1.0 - phi) / 2.0;
        let rad = (phi - (1.0 - phi)) / 2.0;
        let on = HPoint::new(mid + rad * 0.6, rad * 0.8).unwrap();
        assert!(axis_offset(&h, &on).unwrap() < 1e-12);
    }

    #[test]
    fn tree_axes() {
        let g = FreeWord::parse("xyXyy").unwrap();
        let r = quasi_axis_check_tree(&g, &FreeWord::parse("YYx").unwrap(), 6).unwrap();
        assert!(r.is_geodesic);
        assert_eq!(r.segment_length, r.translation_length as f64);
        assert!(r.worst_quasi_margin >= 0.0);
        assert!(quasi_axis_check_tree(&FreeWord::parse("xyX").unwrap(), &FreeWord::identity(), 3).is_ok());
        assert!(quasi_axis_check_tree(&FreeWord::identity(), &FreeWord::identity(), 3).is_err());
    }
}
