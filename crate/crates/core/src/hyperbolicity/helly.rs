//! Geodesically convex vertex sets and the Helly radius of a family.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::graph::MetricGraph;
use crate::error::{Error, Result};

/// A vertex set containing every vertex of every geodesic between two members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexSet {
    vertices: Vec<usize>,
}

impl ConvexSet {
    /// Checks interval closure exhaustively.
    pub fn new(g: &MetricGraph, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() || vertices.iter().any(|&v| v >= g.n()) {
            return Err(Error::Input("convex set must be a nonempty set of graph vertices".into()));
        }
        let member = membership(g.n(), &vertices);
        for &a in &vertices {
            for &b in &vertices {
                if let Some(p) = (0..g.n()).find(|&p| !member[p] && g.between(a, p, b)) {
                    return Err(Error::Input(format!(
                        "vertex {p} lies between members {a} and {b} but is missing"
                    )));
                }
            }
        }
        Ok(ConvexSet { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn meets(&self, other: &ConvexSet) -> bool {
        self.vertices.iter().any(|&v| other.contains(v))
    }

    pub fn distance_to(&self, g: &MetricGraph, v: usize) -> u32 {
        self.vertices.iter().map(|&c| g.d(v, c)).min().unwrap()
    }
}

fn membership(n: usize, vs: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vs {
        m[v] = true;
    }
    m
}

/// Smallest convex superset: interval closure iterated to a fixpoint.
pub fn convex_hull(g: &MetricGraph, seed: &[usize]) -> Result<ConvexSet> {
    if seed.is_empty() || seed.iter().any(|&v| v >= g.n()) {
        return Err(Error::Input("hull needs a nonempty set of graph vertices".into()));
    }
    let n = g.n();
    let mut member = membership(n, seed);
    loop {
        let current: Vec<usize> = (0..n).filter(|&v| member[v]).collect();
        let mut grew = false;
        for p in 0..n {
            if member[p] {
                continue;
            }
            if current
                .iter()
                .any(|&a| current.iter().any(|&b| g.between(a, p, b)))
            {
                member[p] = true;
                grew = true;
            }
        }
        if !grew {
            return Ok(ConvexSet { vertices: current });
        }
    }
}

/// Least `t >= 0` such that the closed `t`-neighborhoods of all sets share a
/// vertex: `min_v max_i d(v, C_i)`.
pub fn helly_min_radius(g: &MetricGraph, sets: &[ConvexSet]) -> Result<u32> {
    if sets.is_empty() {
        return Err(Error::Input("empty family of convex sets".into()));
    }
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate().skip(i + 1) {
            if !a.meets(b) {
                return Err(Error::Hypothesis(format!("convex sets {i} and {j} do not intersect")));
            }
        }
    }
    Ok((0..g.n())
        .map(|v| sets.iter().map(|c| c.distance_to(g, v)).max().unwrap())
        .min()
        .unwrap())
}

/// `hull{a, b}, hull{b, c}, hull{c, a}` for spread-out `a, b, c`: `a = 0`,
/// `b` farthest from `a`, `c` maximizing `d(a, c) + d(b, c)`. The three sets
/// meet pairwise by construction.
pub fn triangle_hulls(g: &MetricGraph) -> Result<Vec<ConvexSet>> {
    let n = g.n();
    let a = 0;
    let b = (0..n).max_by_key(|&v| (g.d(a, v), v)).unwrap_or(0);
    let c = (0..n).max_by_key(|&v| (g.d(a, v) + g.d(b, v), v)).unwrap_or(0);
    [[a, b], [b, c], [c, a]].iter().map(|p| convex_hull(g, p)).collect()
}

/// Hulls of random vertex samples, redrawn until they pairwise intersect.
pub fn random_meeting_hulls(
    g: &MetricGraph,
    count: usize,
    sample_size: usize,
    seed: u64,
    attempts: u32,
) -> Result<Vec<ConvexSet>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = sample_size.clamp(1, g.n());
    for _ in 0..attempts {
        let hulls = (0..count)
            .map(|_| convex_hull(g, &sample(&mut rng, g.n(), k).into_vec()))
            .collect::<Result<Vec<_>>>()?;
        let meet = hulls
            .iter()
            .enumerate()
            .all(|(i, a)| hulls[i + 1..].iter().all(|b| a.meets(b)));
        if meet {
            return Ok(hulls);
        }
    }
    Err(Error::RetryExhausted {
        first_seed: seed,
        attempts,
    })
}
