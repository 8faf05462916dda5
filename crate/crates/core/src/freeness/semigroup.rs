//! Free semigroups from large displacement: a hyperbolic `g` in `S u S^2`
//! and a conjugate `s g s^-1` with disjoint fixed ends, certified by ping-pong.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::arcs::Arc;
use super::certificate::{pingpong_h2, pingpong_tree, word_distinctness, word_distinctness_by, FreenessCertificate, Evidence, Verdict};
use super::tree_regions::{axis_ends, half_space_towards, median, End};
use crate::displacement::{GeneratingSet, Geometry};
use crate::error::{Error, Result};
use crate::hyperbolic::ExactMoebius;
use crate::tolerance;
use crate::tree::{FreeTree, FreeWord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupOptions {
    /// Hyperbolicity constant of the space: 0 for trees, 2 for the plane.
    pub delta: f64,
    /// The multiplier of `delta` a translation length must exceed.
    pub delta_factor: f64,
    pub distinctness_depth: usize,
}

impl SemigroupOptions {
    pub fn tree() -> Self {
        SemigroupOptions {
            delta: 0.0,
            delta_factor: tolerance::PINGPONG_DELTA_FACTOR,
            distinctness_depth: 12,
        }
    }

    pub fn h2() -> Self {
        SemigroupOptions {
            delta: tolerance::H2_DELTA,
            ..Self::tree()
        }
    }

    pub fn threshold(&self) -> f64 {
        self.delta * self.delta_factor
    }

    /// Below the proven constant the displacement threshold is experimental;
    /// an exact ping-pong verdict remains valid either way.
    pub fn is_experimental(&self) -> bool {
        self.delta_factor < tolerance::PINGPONG_DELTA_FACTOR
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupReport<T> {
    pub threshold: f64,
    pub experimental_threshold: bool,
    /// Largest translation length found in `S u S^2`.
    pub best_translation_length: f64,
    /// `threshold - best_translation_length` when nothing qualified.
    pub shortfall: Option<f64>,
    /// The certified (or tested) pair and the conjugator that produced it.
    pub pair: Option<[T; 2]>,
    pub conjugator: Option<T>,
    pub certificate: FreenessCertificate,
}

fn inconclusive(reason: &str) -> FreenessCertificate {
    FreenessCertificate {
        pair: [reason.into(), String::new()],
        evidence: Evidence::Distinctness {
            depth: 0,
            words_checked: 0,
            collision: None,
        },
        verdict: Verdict::Inconclusive,
        conclusive: false,
    }
}

/// Elements of `S` followed by the new elements of `S^2`, without repeats.
fn one_and_two<T: Clone, K: std::hash::Hash + Eq>(
    set: &[T],
    mul: impl Fn(&T, &T) -> T,
    key: impl Fn(&T) -> K,
) -> Vec<T> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in set {
        if seen.insert(key(s)) {
            out.push(s.clone());
        }
    }
    for a in set {
        for b in set {
            let ab = mul(a, b);
            if seen.insert(key(&ab)) {
                out.push(ab);
            }
        }
    }
    out
}

const FLIPS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

fn ends_distinct(x: &(End, End), y: &(End, End)) -> bool {
    [&x.0, &x.1]
        .iter()
        .all(|e| e.common_prefix(&y.0).is_some() && e.common_prefix(&y.1).is_some())
}

/// Ping-pong for `g`, `h` with four distinct ends, regions cut at the first
/// edge past the point where the other attracting end branches off.
fn tree_pingpong_pair(g: &FreeWord, h: &FreeWord) -> Option<FreenessCertificate> {
    let (a, r) = axis_ends(g)?;
    let (a2, r2) = axis_ends(h)?;
    let p = median(&r, &a, &a2)?;
    let p2 = median(&r2, &a2, &a)?;
    let big_a = vec![half_space_towards(&p, &a)];
    let big_b = vec![half_space_towards(&p2, &a2)];
    pingpong_tree(g, h, &big_a, &big_b).ok().filter(|c| c.is_certified())
}

pub fn semigroup_from_displacement_tree(
    tree: &FreeTree,
    set: &GeneratingSet<FreeWord>,
    opts: &SemigroupOptions,
) -> Result<SemigroupReport<FreeWord>> {
    let cands = one_and_two(set.elements(), |a, b| a.mul(b), |a| a.clone());
    let threshold = opts.threshold();
    let best = cands
        .iter()
        .map(|g| tree.translation_length(g))
        .fold(0.0, f64::max);
    let mut report = SemigroupReport {
        threshold,
        experimental_threshold: opts.is_experimental(),
        best_translation_length: best,
        shortfall: None,
        pair: None,
        conjugator: None,
        certificate: inconclusive("no hyperbolic element above the threshold"),
    };
    let Some(g) = cands.iter().find(|g| tree.translation_length(g) > threshold) else {
        report.shortfall = Some(threshold - best);
        return Ok(report);
    };
    let g_ends = axis_ends(g).expect("hyperbolic");
    let mut fallback = None;
    for s in &cands {
        let h = s.mul(g).mul(&s.inverse());
        let h_ends = axis_ends(&h).expect("conjugate of a hyperbolic");
        if !ends_distinct(&g_ends, &h_ends) {
            continue;
        }
        for (fg, fh) in FLIPS {
            let g1 = if fg { g.inverse() } else { g.clone() };
            let h1 = if fh { h.inverse() } else { h.clone() };
            if let Some(cert) = tree_pingpong_pair(&g1, &h1) {
                report.pair = Some([g1, h1]);
                report.conjugator = Some(s.clone());
                report.certificate = cert;
                return Ok(report);
            }
        }
        fallback.get_or_insert((s.clone(), h));
    }
    match fallback {
        Some((s, h)) => {
            report.certificate = word_distinctness(tree, g, &h, opts.distinctness_depth)?;
            report.pair = Some([g.clone(), h]);
            report.conjugator = Some(s);
        }
        None => report.certificate = inconclusive("every candidate conjugator fixes an end of g"),
    }
    Ok(report)
}

/// `(g, s g s^-1)` with `g` the first hyperbolic element of `S u S^2` and
/// `s` the first element of `S` moving its attracting end, certified by
/// distinctness of positive words up to length 12 (conclusive in this model).
///
/// Fails when `S` generates an elementary (cyclic) subgroup.
pub fn semigroup_pair(
    tree: &FreeTree,
    set: &GeneratingSet<FreeWord>,
) -> Result<([FreeWord; 2], FreenessCertificate)> {
    let elementary = || Error::Hypothesis("elementary subgroup: S fixes a boundary pair".into());
    let cands = one_and_two(set.elements(), |a, b| a.mul(b), |a| a.clone());
    let g = cands.iter().find(|g| !g.is_identity()).ok_or_else(elementary)?;
    let (attracting, _) = axis_ends(g).expect("nontrivial");
    let s = set
        .elements()
        .iter()
        .find(|s| attracting.image(s).common_prefix(&attracting).is_some())
        .ok_or_else(elementary)?;
    let h = s.mul(g).mul(&s.inverse());
    let cert = word_distinctness(tree, g, &h, 12)?;
    Ok(([g.clone(), h], cert))
}

/// Angle `2 atan(x)` in `(-pi, pi]` of a boundary point.
fn angle(x: f64) -> f64 {
    if x.is_infinite() {
        std::f64::consts::PI
    } else {
        2.0 * x.atan()
    }
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

fn boundary_of_angle(t: f64) -> f64 {
    let t = (t + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
    if t == -std::f64::consts::PI {
        f64::INFINITY
    } else {
        (t / 2.0).tan()
    }
}

/// Arc of angular half-width `w` around `t`, with rational endpoints.
fn arc_around(t: f64, w: f64) -> Result<Arc> {
    Arc::from_f64(boundary_of_angle(t - w), boundary_of_angle(t + w))
}

fn h2_pingpong_pair(g: &ExactMoebius, h: &ExactMoebius) -> Option<FreenessCertificate> {
    let (a, r) = g.fixed_points_f64()?;
    let (a2, r2) = h.fixed_points_f64()?;
    let pts = [angle(a), angle(r), angle(a2), angle(r2)];
    let mut sep = f64::INFINITY;
    for i in 0..4 {
        for j in i + 1..4 {
            sep = sep.min(angular_gap(pts[i], pts[j]));
        }
    }
    if !(sep > tolerance::COMPARE) {
        return None;
    }
    let big_a = arc_around(pts[0], sep / 3.0).ok()?;
    let big_b = arc_around(pts[2], sep / 3.0).ok()?;
    pingpong_h2(g, h, &big_a, &big_b).ok().filter(|c| c.is_certified())
}

/// The plane version; regions are exact arcs around attracting fixed points.
pub fn semigroup_from_displacement_h2(
    set: &[ExactMoebius],
    opts: &SemigroupOptions,
) -> Result<SemigroupReport<ExactMoebius>> {
    if set.is_empty() {
        return Err(Error::Input("empty generating set".into()));
    }
    let cands = one_and_two(set, |a, b| a.mul(b), |a| a.projective_key());
    let threshold = opts.threshold();
    let best = cands
        .iter()
        .map(|g| g.translation_length())
        .fold(0.0, f64::max);
    let mut report = SemigroupReport {
        threshold,
        experimental_threshold: opts.is_experimental(),
        best_translation_length: best,
        shortfall: None,
        pair: None,
        conjugator: None,
        certificate: inconclusive("no hyperbolic element above the threshold"),
    };
    let Some(g) = cands
        .iter()
        .find(|g| g.is_hyperbolic() && g.translation_length() > threshold)
    else {
        report.shortfall = Some(threshold - best);
        return Ok(report);
    };
    let (ga, gr) = g.fixed_points_f64().expect("hyperbolic");
    let mut fallback = None;
    for s in &cands {
        let h = s.mul(g).mul(&s.inverse());
        let Some((ha, hr)) = h.fixed_points_f64() else { continue };
        let moved = [ha, hr].iter().all(|&x| {
            [ga, gr]
                .iter()
                .all(|&y| angular_gap(angle(x), angle(y)) > tolerance::COMPARE)
        });
        if !moved {
            continue;
        }
        for (fg, fh) in FLIPS {
            let g1 = if fg { g.inverse() } else { g.clone() };
            let h1 = if fh { h.inverse() } else { h.clone() };
            if let Some(cert) = h2_pingpong_pair(&g1, &h1) {
                report.pair = Some([g1, h1]);
                report.conjugator = Some(s.clone());
                report.certificate = cert;
                return Ok(report);
            }
        }
        fallback.get_or_insert((s.clone(), h));
    }
    match fallback {
        Some((s, h)) => {
            let mut cert = word_distinctness_by(
                g,
                &h,
                opts.distinctness_depth,
                |a, b| a.mul(b),
                |a| a.projective_key(),
                |a, b| a.projective_key() == b.projective_key(),
            )?;
            cert.pair = [format!("{g:?}"), format!("{h:?}")];
            report.certificate = cert;
            report.pair = Some([g.clone(), h]);
            report.conjugator = Some(s);
        }
        None => report.certificate = inconclusive("every candidate conjugator fixes an end of g"),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::hyperbolic::BoundaryPoint;
    use num_bigint::BigInt;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn free_generators() {
        let tree = FreeTree::new(2).unwrap();
        let set = GeneratingSet::new(&tree, vec![w("x"), w("y")]).unwrap();
        let rep = semigroup_from_displacement_tree(&tree, &set, &SemigroupOptions::tree()).unwrap();
        assert!(rep.certificate.is_certified() && rep.certificate.conclusive);
        assert!(matches!(rep.certificate.evidence, Evidence::Pingpong { .. }));
    }

    #[test]
    fn constructive_pairs() {
        let tree = FreeTree::new(2).unwrap();
        let set = GeneratingSet::new(&tree, vec![w("x"), w("y")]).unwrap();
        let (pair, cert) = semigroup_pair(&tree, &set).unwrap();
        assert_eq!(pair, [w("x"), w("yxY")]);
        assert!(cert.is_certified() && cert.conclusive);
        let set = GeneratingSet::new(&tree, vec![w("x"), w("X")]).unwrap();
        assert!(matches!(semigroup_pair(&tree, &set), Err(Error::Hypothesis(_))));
        let set = GeneratingSet::new(&tree, vec![w("xy"), w("yx")]).unwrap();
        let (_, cert) = semigroup_pair(&tree, &set).unwrap();
        assert!(cert.is_certified());
    }

    #[test]
    fn cyclic_sets_are_inconclusive() {
        let tree = FreeTree::new(2).unwrap();
        let set = GeneratingSet::new(&tree, vec![w("x"), w("xx")]).unwrap();
        let rep = semigroup_from_displacement_tree(&tree, &set, &SemigroupOptions::tree()).unwrap();
        assert_eq!(rep.certificate.verdict, Verdict::Inconclusive);
        let set = GeneratingSet::new(&tree, vec![w("")]).unwrap();
        let rep = semigroup_from_displacement_tree(&tree, &set, &SemigroupOptions::tree()).unwrap();
        assert_eq!(rep.shortfall, Some(0.0));
    }

    fn strong_pair() -> (ExactMoebius, ExactMoebius) {
        let big = crate::exact::Rat::from_integer(BigInt::from(2).pow(15000));
        let g = ExactMoebius::new(big.clone(), rat(0), rat(0), big.recip()).unwrap();
        let c = ExactMoebius::from_ints(1, -1, 1, 1).unwrap();
        (g, c)
    }

    #[test]
    fn strong_hyperbolics_in_the_plane() {
        let (g, c) = strong_pair();
        let rep = semigroup_from_displacement_h2(&[g, c], &SemigroupOptions::h2()).unwrap();
        assert!(rep.certificate.is_certified(), "{:?}", rep.certificate);
        assert!(!rep.experimental_threshold);
    }

    #[test]
    fn elliptic_sets_fall_short() {
        let rot = ExactMoebius::from_ints(0, -1, 1, 0).unwrap();
        let rep = semigroup_from_displacement_h2(&[rot], &SemigroupOptions::h2()).unwrap();
        assert_eq!(rep.shortfall, Some(20_000.0));
        assert_eq!(rep.certificate.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn fixed_arcs_for_translations() {
        let g = ExactMoebius::from_ints(1, 2, 0, 1).unwrap();
        let h = ExactMoebius::from_ints(1, 0, 2, 1).unwrap();
        let a = Arc::new(BoundaryPoint::int(1), BoundaryPoint::Infinity).unwrap();
        let b = Arc::new(BoundaryPoint::int(0), BoundaryPoint::int(1)).unwrap();
        assert!(pingpong_h2(&g, &h, &a, &b).unwrap().is_certified());
        let b2 = Arc::new(BoundaryPoint::int(-1), BoundaryPoint::int(0)).unwrap();
        assert_eq!(pingpong_h2(&g, &h, &a, &b2).unwrap().verdict, Verdict::Inconclusive);
    }
}
