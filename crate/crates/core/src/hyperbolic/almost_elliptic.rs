//! Pairs of small-angle rotations whose joint displacement is exactly `eps`
//! while every short word is elliptic or nearly so.

use serde::{Deserialize, Serialize};

use super::moebius::{h2_distance, HPoint, Moebius};
use super::plane::HyperbolicPlane;
use crate::displacement::GeneratingSet;
use crate::error::{Error, Result};
use crate::tree::FreeWord;

#[derive(Debug, Clone)]
pub struct AlmostElliptic {
    pub set: GeneratingSet<Moebius>,
    pub eps: f64,
    /// Rotation centers `i e^(eps/x1)` and `i e^(-eps/x2)`.
    pub centers: [HPoint; 2],
    /// Hyperbolic distances `eps/x_i` from the centers to `i`.
    pub radii: [f64; 2],
    pub angles: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmostEllipticSummary {
    pub eps: f64,
    pub displacement_at_i: f64,
    pub angles: [f64; 2],
    /// `d(p1, p2) - r1 - r2`; zero when the sublevel disks touch only at `i`.
    pub disk_gap: f64,
}

/// Rotation angle about a point at distance `r` that moves it by `eps`:
/// `sinh(eps/2) = sin(theta/2) sinh(r)`.
fn rotation_angle(eps: f64, r: f64) -> f64 {
    2.0 * ((eps / 2.0).sinh() / r.sinh()).asin()
}

pub fn almost_elliptic_pair(eps: f64, x1: f64, x2: f64) -> Result<AlmostElliptic> {
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(Error::Parameter(format!("eps must lie in (0, 0.1], got {eps}")));
    }
    for (name, x) in [("x1", x1), ("x2", x2)] {
        if !(x > 0.0 && x <= 0.2) {
            return Err(Error::Parameter(format!("{name} must lie in (0, 0.2], got {x}")));
        }
    }
    let radii = [eps / x1, eps / x2];
    let centers = [
        HPoint::new(0.0, radii[0].exp())?,
        HPoint::new(0.0, (-radii[1]).exp())?,
    ];
    let angles = [rotation_angle(eps, radii[0]), rotation_angle(eps, radii[1])];
    let gens = vec![
        Moebius::rotation(&centers[0], angles[0]),
        Moebius::rotation(&centers[1], angles[1]),
    ];
    let set = GeneratingSet::new(&HyperbolicPlane, gens)?;
    Ok(AlmostElliptic {
        set,
        eps,
        centers,
        radii,
        angles,
    })
}

impl AlmostElliptic {
    pub fn summary(&self) -> AlmostEllipticSummary {
        let i = HPoint::i();
        let displacement_at_i = self
            .set
            .elements()
            .iter()
            .map(|g| h2_distance(&i, &g.apply(&i)))
            .fold(0.0, f64::max);
        AlmostEllipticSummary {
            eps: self.eps,
            displacement_at_i,
            angles: self.angles,
            disk_gap: h2_distance(&self.centers[0], &self.centers[1])
                - self.radii[0]
                - self.radii[1],
        }
    }

    pub fn evaluate(&self, w: &FreeWord) -> Moebius {
        evaluate_word(w, self.set.elements())
    }
}

/// Evaluates a word in the generators `x = gens[0]`, `y = gens[1]`, ...
pub fn evaluate_word(w: &FreeWord, gens: &[Moebius]) -> Moebius {
    w.letters().iter().fold(Moebius::identity(), |acc, &l| {
        let g = gens[(l.unsigned_abs() - 1) as usize];
        acc.mul(&if l > 0 { g } else { g.inverse() })
    })
}

/// Nontrivial reduced words in `x, y` of length at most `max_len` with zero
/// exponent sum in each letter, i.e. the commutator subgroup.
pub fn commutator_subgroup_words(max_len: usize) -> Vec<FreeWord> {
    let mut out = Vec::new();
    let mut frontier = vec![FreeWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [1i8, -1, 2, -2] {
                if w.letters().last() == Some(&-l) {
                    continue;
                }
                let v = w.times_letter(l);
                let sums = v.letters().iter().fold([0i32; 2], |mut s, &c| {
                    s[(c.unsigned_abs() - 1) as usize] += c.signum() as i32;
                    s
                });
                if sums == [0, 0] {
                    out.push(v.clone());
                }
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::moebius::{classify, Classification};

    #[test]
    fn displacement_at_i_is_eps() {
        for eps in [1e-2, 1e-3, 1e-4] {
            let ae = almost_elliptic_pair(eps, 0.05, 0.05).unwrap();
            let s = ae.summary();
            assert!((s.displacement_at_i - eps).abs() < 1e-12, "{eps}: {}", s.displacement_at_i);
            assert!(s.disk_gap.abs() < 1e-12);
            for g in ae.set.elements() {
                assert_eq!(classify(g), Classification::Elliptic);
            }
        }
    }

    #[test]
    fn parameters_are_validated() {
        assert!(almost_elliptic_pair(0.5, 0.05, 0.05).is_err());
        assert!(almost_elliptic_pair(1e-3, 0.0, 0.05).is_err());
        assert!(almost_elliptic_pair(1e-3, 0.05, 0.3).is_err());
    }

    #[test]
    fn commutator_words_are_balanced() {
        let words = commutator_subgroup_words(4);
        // Reduced balanced words of length 4: the eight commutators of letters
        // plus nothing shorter.
        assert_eq!(words.len(), 8);
        assert!(words.iter().all(|w| w.len() == 4));
        assert!(words.contains(&FreeWord::parse("xyXY").unwrap()));
    }
}
