//! Gromov four-point and thin-triangle constants of a finite graph.
//!
//! Triangles have vertex corners and sides that are geodesic vertex paths;
//! thinness is measured at vertices, or also at edge midpoints.

use serde::{Deserialize, Serialize};

use super::graph::MetricGraph;
use crate::error::Result;

/// `max (S1 - S2) / 2` over quadruples, where `S1 >= S2 >= S3` are the three
/// pairwise-sum quantities.
pub fn four_point_delta(g: &MetricGraph) -> f64 {
    let n = g.n();
    let mut worst = 0u32;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let mut s = [
                        g.d(a, b) + g.d(c, d),
                        g.d(a, c) + g.d(b, d),
                        g.d(a, d) + g.d(b, c),
                    ];
                    s.sort_unstable();
                    worst = worst.max(s[2] - s[1]);
                }
            }
        }
    }
    f64::from(worst) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlimDelta {
    pub value: f64,
    /// Every geodesic triangle was accounted for.
    pub exact: bool,
}

/// `far[p][y][z]`: the largest value of `min_{q in sigma} d(p, q)` over
/// geodesics `sigma` from `y` to `z`, by a bottleneck pass over the geodesic
/// DAG rooted at `y`, for roots `y < roots`.
fn farthest_geodesics(g: &MetricGraph, roots: usize) -> Vec<Vec<Vec<u32>>> {
    let n = g.n();
    let mut far = vec![vec![vec![0u32; n]; roots]; n];
    for y in 0..roots {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| g.d(y, v));
        for (p, table) in far.iter_mut().enumerate() {
            let best = &mut table[y];
            best[y] = g.d(p, y);
            for &z in &order[1..] {
                let via = g
                    .neighbors(z)
                    .iter()
                    .filter(|&&v| g.d(y, v) + 1 == g.d(y, z))
                    .map(|&v| best[v])
                    .max()
                    .expect("a vertex past the root has a predecessor");
                best[z] = via.min(g.d(p, z));
            }
        }
    }
    far
}

/// The least `delta` such that every geodesic triangle is `delta`-slim.
///
/// Exact: a point `p` on side `[x, y]` is as far as possible from the other
/// two sides when each of them is chosen independently to avoid `p`.
pub fn slim_delta(g: &MetricGraph) -> SlimDelta {
    SlimDelta {
        value: f64::from(slim_with_corners(g, g.n())),
        exact: true,
    }
}

/// Worst thinness over triangles with corners `< corners`, measured at every
/// vertex on a side.
fn slim_with_corners(g: &MetricGraph, corners: usize) -> u32 {
    let far = farthest_geodesics(g, corners);
    let mut worst = 0u32;
    for x in 0..corners {
        for y in x..corners {
            for p in (0..g.n()).filter(|&p| g.between(x, p, y)) {
                let fp = &far[p];
                for z in 0..corners {
                    worst = worst.max(fp[y][z].min(fp[x][z]));
                }
            }
        }
    }
    worst
}

/// As [`slim_delta`], with thinness also measured at edge midpoints: triangles
/// keep vertex corners, distances come from the subdivision.
///
/// Vertex-only thinness misses odd cycles: a triangle has vertex `delta = 0`
/// but a side midpoint at `1/2` from the other sides. The result is still a
/// lower bound for the constant of the metric graph.
pub fn midpoint_slim_delta(g: &MetricGraph) -> Result<f64> {
    Ok(f64::from(slim_with_corners(&g.subdivided()?, g.n())) / 2.0)
}

/// All geodesics from `a` to `b` as vertex lists, or `None` past `cap`.
pub fn geodesics(g: &MetricGraph, a: usize, b: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![a]];
    while let Some(path) = stack.pop() {
        let v = *path.last().unwrap();
        if v == b {
            out.push(path);
            if out.len() > cap {
                return None;
            }
            continue;
        }
        for &w in g.neighbors(v) {
            if g.d(w, b) + 1 == g.d(v, b) {
                let mut next = path.clone();
                next.push(w);
                stack.push(next);
            }
        }
    }
    Some(out)
}

/// Thinness by listing every triangle; `None` when some triple has more than
/// `budget` combinations of sides.
pub fn slim_delta_bruteforce(g: &MetricGraph, budget: usize) -> Option<f64> {
    let n = g.n();
    let mut all = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            all[a][b] = geodesics(g, a, b, budget)?;
        }
    }
    let dist_to = |p: usize, side: &[usize]| side.iter().map(|&q| g.d(p, q)).min().unwrap();
    let mut worst = 0u32;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let count = all[x][y].len() * all[y][z].len() * all[z][x].len();
                if count > budget {
                    return None;
                }
                for s1 in &all[x][y] {
                    for s2 in &all[y][z] {
                        for s3 in &all[z][x] {
                            for (side, o1, o2) in [(s1, s2, s3), (s2, s3, s1), (s3, s1, s2)] {
                                for &p in side {
                                    worst = worst.max(dist_to(p, o1).min(dist_to(p, o2)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Some(f64::from(worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_point_values() {
        assert_eq!(four_point_delta(&MetricGraph::path(7).unwrap()), 0.0);
        assert_eq!(four_point_delta(&MetricGraph::random_tree(25, 3).unwrap()), 0.0);
        assert_eq!(four_point_delta(&MetricGraph::cycle(4).unwrap()), 1.0);
    }

    #[test]
    fn slim_values() {
        assert_eq!(slim_delta(&MetricGraph::random_tree(25, 3).unwrap()).value, 0.0);
        assert_eq!(slim_delta(&MetricGraph::cycle(6).unwrap()).value, 1.0);
        assert_eq!(slim_delta_bruteforce(&MetricGraph::cycle(6).unwrap(), 1000), Some(1.0));
        let triangle = MetricGraph::cycle(3).unwrap();
        assert_eq!(slim_delta(&triangle).value, 0.0);
        assert_eq!(midpoint_slim_delta(&triangle).unwrap(), 0.5);
        assert_eq!(midpoint_slim_delta(&MetricGraph::random_tree(20, 1).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn dynamic_program_matches_enumeration() {
        for seed in 0..12 {
            let g = MetricGraph::random_sparse(11, 4 + (seed as usize % 5), seed).unwrap();
            let brute = slim_delta_bruteforce(&g, 100_000).unwrap();
            assert_eq!(slim_delta(&g).value, brute, "seed {seed}");
        }
        let grid = MetricGraph::grid(3, 3).unwrap();
        assert_eq!(slim_delta(&grid).value, slim_delta_bruteforce(&grid, 100_000).unwrap());
    }
}
