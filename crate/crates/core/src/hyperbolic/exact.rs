//! Moebius maps with rational entries, acting exactly on the boundary `P^1(Q)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::moebius::Moebius;
use crate::error::{Error, Result};
use crate::exact::{ln_abs, rat, rat_to_f64, scaled_f64, Rat};

/// A point of `P^1(Q)`: a rational or infinity.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Finite(#[serde(with = "crate::exact::rat_serde")] Rat),
    Infinity,
}

impl BoundaryPoint {
    pub fn int(n: i64) -> Self {
        BoundaryPoint::Finite(rat(n))
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(q) => write!(f, "{q}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// `[[a, b], [c, d]]` with rational entries and positive determinant,
/// acting by `z -> (a z + b) / (c z + d)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactMoebius {
    #[serde(with = "crate::exact::rat_serde::array4")]
    entries: [Rat; 4],
}

impl fmt::Debug for ExactMoebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        if self.entries.iter().all(|q| q.numer().bits() < 64 && q.denom().bits() < 64) {
            write!(f, "[[{a}, {b}], [{c}, {d}]]")
        } else {
            write!(f, "<exact matrix, ell ~ {:.3}>", self.translation_length())
        }
    }
}

impl ExactMoebius {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self> {
        let m = ExactMoebius {
            entries: [a, b, c, d],
        };
        if !m.det().is_positive() {
            return Err(Error::Input("exact Moebius map needs positive determinant".into()));
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(rat(a), rat(b), rat(c), rat(d))
    }

    pub fn identity() -> Self {
        ExactMoebius {
            entries: [Rat::one(), Rat::zero(), Rat::zero(), Rat::one()],
        }
    }

    pub fn entries(&self) -> &[Rat; 4] {
        &self.entries
    }

    pub fn det(&self) -> Rat {
        let [a, b, c, d] = &self.entries;
        a * d - b * c
    }

    pub fn trace(&self) -> Rat {
        &self.entries[0] + &self.entries[3]
    }

    pub fn mul(&self, o: &ExactMoebius) -> ExactMoebius {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &o.entries;
        ExactMoebius {
            entries: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    /// The adjugate, which acts as the inverse map.
    pub fn inverse(&self) -> ExactMoebius {
        let [a, b, c, d] = &self.entries;
        ExactMoebius {
            entries: [d.clone(), -b, -c, a.clone()],
        }
    }

    pub fn apply(&self, z: &BoundaryPoint) -> BoundaryPoint {
        let [a, b, c, d] = &self.entries;
        let (num, den) = match z {
            BoundaryPoint::Finite(x) => (a * x + b, c * x + d),
            BoundaryPoint::Infinity => (a.clone(), c.clone()),
        };
        if den.is_zero() {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(num / den)
        }
    }

    /// Canonical representative up to positive scaling: first nonzero entry 1.
    pub fn projective_key(&self) -> [Rat; 4] {
        let lead = self.entries.iter().find(|q| !q.is_zero()).unwrap().abs();
        self.entries.clone().map(|q| q / &lead)
    }

    /// `2 arccosh(|tr| / (2 sqrt det))`, evaluated in the log domain for
    /// huge entries; zero for non-hyperbolic maps.
    pub fn translation_length(&self) -> f64 {
        let tr = self.trace();
        let det = self.det();
        // Hyperbolic iff tr^2 > 4 det.
        if &tr * &tr <= rat(4) * &det {
            return 0.0;
        }
        let log_ratio = ln_abs(&tr) - 0.5 * ln_abs(&det) - std::f64::consts::LN_2;
        if log_ratio > 20.0 {
            // arccosh(u) = ln(2u) + O(u^-2).
            2.0 * (log_ratio + std::f64::consts::LN_2)
        } else {
            2.0 * log_ratio.exp().acosh()
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        let tr = self.trace();
        &tr * &tr > rat(4) * self.det()
    }

    /// Floating `SL2(R)` representative, when the entries fit after scaling.
    pub fn to_moebius(&self) -> Result<Moebius> {
        let (vals, _) = scaled_f64(&self.entries);
        Moebius::normalized(vals[0], vals[1], vals[2], vals[3])
    }

    /// Attracting and repelling boundary fixed points as floats, for a
    /// hyperbolic map. Uses a scaled representative, so huge entries are fine.
    pub fn fixed_points_f64(&self) -> Option<(f64, f64)> {
        if !self.is_hyperbolic() {
            return None;
        }
        let (v, _) = scaled_f64(&self.entries);
        let [a, b, c, d] = [v[0], v[1], v[2], v[3]];
        let tr = a + d;
        let sign = if tr > 0.0 { 1.0 } else { -1.0 };
        // The attracting fixed point is the eigenline of the larger eigenvalue.
        if c == 0.0 {
            // z -> (a z + b)/d: infinity is attracting iff |a| > |d|.
            let finite = if (a - d).abs() > 0.0 { b / (d - a) } else { f64::NAN };
            return Some(if a.abs() > d.abs() {
                (f64::INFINITY, finite)
            } else {
                (finite, f64::INFINITY)
            });
        }
        let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
        // Eigenvalue mu = (tr +- disc)/2 has eigenvector (mu - d, c), fixed point (mu - d)/c.
        let big = (tr + sign * disc) / 2.0;
        let det = a * d - b * c;
        let small = det / big;
        Some(((big - d) / c, (small - d) / c))
    }

    pub fn approx_entries(&self) -> [f64; 4] {
        self.entries.clone().map(|q| rat_to_f64(&q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_frac;

    #[test]
    fn action_on_the_boundary() {
        let g = ExactMoebius::from_ints(1, 2, 0, 1).unwrap();
        assert_eq!(g.apply(&BoundaryPoint::int(1)), BoundaryPoint::int(3));
        assert_eq!(g.apply(&BoundaryPoint::Infinity), BoundaryPoint::Infinity);
        let h = ExactMoebius::from_ints(1, 0, 2, 1).unwrap();
        assert_eq!(h.apply(&BoundaryPoint::int(1)), BoundaryPoint::Finite(rat_frac(1, 3)));
        assert_eq!(h.apply(&BoundaryPoint::Finite(rat_frac(-1, 2))), BoundaryPoint::Infinity);
        let gh = g.mul(&h);
        let z = BoundaryPoint::Finite(rat_frac(5, 7));
        assert_eq!(gh.apply(&z), g.apply(&h.apply(&z)));
        assert_eq!(g.inverse().apply(&g.apply(&z)), z);
    }

    #[test]
    fn huge_translation_lengths() {
        let two = num_bigint::BigInt::from(2);
        let big = Rat::from_integer(two.pow(15000));
        let g = ExactMoebius::new(big.clone(), rat(0), rat(0), big.recip()).unwrap();
        let expected = 2.0 * 15000.0 * std::f64::consts::LN_2;
        assert!((g.translation_length() - expected).abs() < 1e-6);
        let (att, rep) = g.fixed_points_f64().unwrap();
        assert!(att.is_infinite() && rep == 0.0);
    }

    #[test]
    fn agrees_with_floating_translation_length() {
        let g = ExactMoebius::from_ints(2, 1, 1, 1).unwrap();
        let f = super::super::moebius::ell_h2(&g.to_moebius().unwrap());
        assert!((g.translation_length() - f).abs() < 1e-12);
        let (att, rep) = g.fixed_points_f64().unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((att - phi).abs() < 1e-12 && (rep - (1.0 - phi)).abs() < 1e-12);
    }
}
