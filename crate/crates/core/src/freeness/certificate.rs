//! Free semigroup certificates: ping-pong on exact regions, and distinctness
//! of positive words.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::arcs::Arc;
use super::tree_regions::{region_disjoint, region_image, region_subset, HalfSpace};
use crate::displacement::{power_ladder, GeneratingSet, Geometry};
use crate::error::{Error, Result};
use crate::hyperbolic::ExactMoebius;
use crate::tolerance;
use crate::tree::FreeWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

/// Regions `A`, `B` of a ping-pong argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PingPongRegions {
    Tree { a: Vec<HalfSpace>, b: Vec<HalfSpace> },
    H2 { a: Arc, b: Arc },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Pingpong {
        regions: PingPongRegions,
        /// `g(A u B) in A` and `h(A u B) in B`.
        inclusions: [bool; 2],
    },
    Distinctness {
        depth: usize,
        words_checked: usize,
        /// Two positive words with the same value, when refuted.
        collision: Option<[String; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreenessCertificate {
    pub pair: [String; 2],
    pub evidence: Evidence,
    pub verdict: Verdict,
    /// Whether a certified verdict proves that the pair generates a free semigroup.
    pub conclusive: bool,
}

impl FreenessCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

/// Checks `g(A u B) in A`, `h(A u B) in B` exactly.
///
/// Fails with an input error when `A` and `B` meet.
pub fn pingpong_tree(g: &FreeWord, h: &FreeWord, a: &[HalfSpace], b: &[HalfSpace]) -> Result<FreenessCertificate> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Input("ping-pong regions must be nonempty".into()));
    }
    if !region_disjoint(a, b) {
        return Err(Error::Input("ping-pong regions A and B intersect".into()));
    }
    let both: Vec<HalfSpace> = a.iter().chain(b).cloned().collect();
    let inclusions = [
        region_subset(&region_image(&both, g), a),
        region_subset(&region_image(&both, h), b),
    ];
    Ok(pingpong_result(
        [g.to_string(), h.to_string()],
        PingPongRegions::Tree {
            a: a.to_vec(),
            b: b.to_vec(),
        },
        inclusions,
    ))
}

pub fn pingpong_h2(g: &ExactMoebius, h: &ExactMoebius, a: &Arc, b: &Arc) -> Result<FreenessCertificate> {
    if !a.is_disjoint_from(b) {
        return Err(Error::Input("ping-pong regions A and B intersect".into()));
    }
    let inclusions = [
        a.image(g).is_subset_of(a) && b.image(g).is_subset_of(a),
        a.image(h).is_subset_of(b) && b.image(h).is_subset_of(b),
    ];
    Ok(pingpong_result(
        [format!("{g:?}"), format!("{h:?}")],
        PingPongRegions::H2 {
            a: a.clone(),
            b: b.clone(),
        },
        inclusions,
    ))
}

/// Dispatches on the region model.
pub enum PingPongPair<'a> {
    Tree(&'a FreeWord, &'a FreeWord),
    H2(&'a ExactMoebius, &'a ExactMoebius),
}

pub fn pingpong_certificate(pair: PingPongPair<'_>, regions: &PingPongRegions) -> Result<FreenessCertificate> {
    match (pair, regions) {
        (PingPongPair::Tree(g, h), PingPongRegions::Tree { a, b }) => pingpong_tree(g, h, a, b),
        (PingPongPair::H2(g, h), PingPongRegions::H2 { a, b }) => pingpong_h2(g, h, a, b),
        _ => Err(Error::Input("regions do not belong to the geometry of the pair".into())),
    }
}

fn pingpong_result(pair: [String; 2], regions: PingPongRegions, inclusions: [bool; 2]) -> FreenessCertificate {
    let ok = inclusions[0] && inclusions[1];
    FreenessCertificate {
        pair,
        evidence: Evidence::Pingpong { regions, inclusions },
        verdict: if ok { Verdict::Certified } else { Verdict::Inconclusive },
        conclusive: ok,
    }
}

fn word_name(bits: u64, len: usize) -> String {
    (0..len)
        .map(|i| if bits >> (len - 1 - i) & 1 == 0 { 'u' } else { 'v' })
        .collect()
}

/// Compares all positive words of length `1..=n` in `u`, `v`.
///
/// `key` must identify equal elements; when it is only a hash of a floating
/// representative, `same` re-verifies collisions. The verdict is
/// `Certified` when no two distinct words coincide, meaning certified to
/// depth `n`; `conclusive` is left false for the caller to upgrade.
pub fn word_distinctness_by<T, K, M, F, E>(
    u: &T,
    v: &T,
    n: usize,
    mul: M,
    key: F,
    same: E,
) -> Result<FreenessCertificate>
where
    T: Clone,
    K: Hash + Eq,
    M: Fn(&T, &T) -> T,
    F: Fn(&T) -> K,
    E: Fn(&T, &T) -> bool,
{
    let needed = 1u128 << (n + 1).min(127);
    if n == 0 || n >= 63 || needed > tolerance::WORD_BUDGET as u128 {
        return Err(Error::Budget {
            needed,
            budget: tolerance::WORD_BUDGET,
        });
    }
    // Words are built by appending letters on the right: w -> w u, w v.
    let mut seen: HashMap<K, Vec<(u64, usize, T)>> = HashMap::new();
    let mut level: Vec<(u64, T)> = vec![(0, u.clone()), (1, v.clone())];
    let mut checked = 0usize;
    for len in 1..=n {
        for (bits, val) in &level {
            checked += 1;
            let bucket = seen.entry(key(val)).or_default();
            if let Some((b2, l2, _)) = bucket.iter().find(|(_, _, w)| same(w, val)) {
                return Ok(FreenessCertificate {
                    pair: ["u".into(), "v".into()],
                    evidence: Evidence::Distinctness {
                        depth: n,
                        words_checked: checked,
                        collision: Some([word_name(*b2, *l2), word_name(*bits, len)]),
                    },
                    verdict: Verdict::Refuted,
                    conclusive: true,
                });
            }
            bucket.push((*bits, len, val.clone()));
        }
        if len < n {
            level = level
                .iter()
                .flat_map(|(bits, w)| [(bits << 1, mul(w, u)), ((bits << 1) | 1, mul(w, v))])
                .collect();
        }
    }
    Ok(FreenessCertificate {
        pair: ["u".into(), "v".into()],
        evidence: Evidence::Distinctness {
            depth: n,
            words_checked: checked,
            collision: None,
        },
        verdict: Verdict::Certified,
        conclusive: false,
    })
}

/// [`word_distinctness_by`] using a geometry's composition and canonical keys.
///
/// Conclusive in the free group model, where two elements generate a free
/// semigroup as soon as they do not commute.
pub fn word_distinctness<G: Geometry>(
    geom: &G,
    u: &G::Isometry,
    v: &G::Isometry,
    n: usize,
) -> Result<FreenessCertificate> {
    let mut cert = word_distinctness_by(
        u,
        v,
        n,
        |a, b| geom.compose(a, b),
        |a| geom.canonical_key(a),
        |a, b| geom.canonical_key(a) == geom.canonical_key(b),
    )?;
    cert.pair = [format!("{u:?}"), format!("{v:?}")];
    if cert.verdict == Verdict::Certified {
        cert.conclusive = geom.tag() == crate::displacement::GeometryTag::TreeFree && n >= 2;
    }
    Ok(cert)
}

/// `(n, log|S^n| / n)` for `n = 1..=n_max`, counting distinct elements by
/// canonical key.
pub fn entropy_sequence<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    n_max: usize,
) -> Result<Vec<(usize, f64)>> {
    let ladder = power_ladder(geom, set, n_max, tolerance::WORD_BUDGET)?;
    Ok(ladder
        .iter()
        .enumerate()
        .map(|(i, s)| (i + 1, (s.len() as f64).ln() / (i + 1) as f64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::FreeTree;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn standard_generators_pingpong() {
        let c = pingpong_tree(
            &w("x"),
            &w("y"),
            &[HalfSpace::Sub(w("x"))],
            &[HalfSpace::Sub(w("y"))],
        )
        .unwrap();
        assert!(c.is_certified() && c.conclusive);
        let overlapping = pingpong_tree(&w("x"), &w("y"), &[HalfSpace::Sub(w("x"))], &[HalfSpace::Sub(w("xy"))]);
        assert!(matches!(overlapping, Err(Error::Input(_))));
        let wrong = pingpong_tree(&w("x"), &w("y"), &[HalfSpace::Sub(w("y"))], &[HalfSpace::Sub(w("x"))]).unwrap();
        assert_eq!(wrong.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn distinctness_cases() {
        let tree = FreeTree::new(2).unwrap();
        let c = word_distinctness(&tree, &w("x"), &w("y"), 12).unwrap();
        assert!(c.is_certified() && c.conclusive);
        match c.evidence {
            Evidence::Distinctness { words_checked, .. } => assert_eq!(words_checked, (1 << 13) - 2),
            _ => unreachable!(),
        }
        let same = word_distinctness(&tree, &w("x"), &w("x"), 5).unwrap();
        assert_eq!(same.verdict, Verdict::Refuted);
        match same.evidence {
            Evidence::Distinctness { collision, .. } => {
                assert_eq!(collision.unwrap(), ["u".to_string(), "v".to_string()])
            }
            _ => unreachable!(),
        }
        let comm = word_distinctness(&tree, &w("xy"), &w("xyxy"), 5).unwrap();
        assert_eq!(comm.verdict, Verdict::Refuted);
    }

    #[test]
    fn entropy_of_small_sets() {
        let tree = FreeTree::new(2).unwrap();
        let s = GeneratingSet::new(&tree, vec![w(""), w("x"), w("X")]).unwrap();
        let seq = entropy_sequence(&tree, &s, 6).unwrap();
        for (n, h) in seq {
            assert!((h - ((2 * n + 1) as f64).ln() / n as f64).abs() < 1e-15);
        }
        let s = GeneratingSet::new(&tree, vec![w(""), w("x"), w("X"), w("y"), w("Y")]).unwrap();
        let seq = entropy_sequence(&tree, &s, 6).unwrap();
        for (n, h) in seq {
            let count = 1.0 + 2.0 * (3f64.powi(n as i32) - 1.0);
            assert!((h - count.ln() / n as f64).abs() < 1e-12);
        }
    }
}
