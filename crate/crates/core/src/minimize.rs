//! Descent for `x -> max_i f_i(x)` on a Riemannian model.
//!
//! Each component `f_i` is smooth and geodesically convex. The method is an
//! epsilon-subgradient descent: at each step the gradients of the components
//! within `eps` of the maximum are combined into their minimum-norm convex
//! combination, and the negative of that vector is followed along a geodesic
//! with a bracketing golden-section line search. `eps` shrinks whenever no
//! progress is possible, which drives the iterate to a stationary point of
//! the max function.

use crate::displacement::MinimizeStatus;

/// A max-of-smooth-convex problem in an orthonormal frame.
pub trait MinimaxProblem {
    type Point: Clone;

    /// Dimension of the tangent space.
    fn dim(&self) -> usize;
    fn values(&self, x: &Self::Point) -> Vec<f64>;
    /// Gradient of component `i` in the orthonormal frame at `x`.
    fn gradient(&self, i: usize, x: &Self::Point) -> Vec<f64>;
    /// Point at distance `t` from `x` along the geodesic with unit initial direction `dir`.
    fn exp(&self, x: &Self::Point, dir: &[f64], t: f64) -> Self::Point;
    /// True once the iterate has run off towards the boundary.
    fn escaped(&self, _x: &Self::Point) -> bool {
        false
    }
    /// Points where values can still be trusted; the line search never
    /// leaves this region. It should strictly contain the non-escaped region.
    fn admissible(&self, _x: &Self::Point) -> bool {
        true
    }
    /// Objective values at or below this are treated as zero.
    fn negligible(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct MinimaxResult<P> {
    pub point: P,
    pub value: f64,
    pub status: MinimizeStatus,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Minimum-norm point of the convex hull of `grads`, by pairwise mass transfer.
pub fn min_norm_combination(grads: &[Vec<f64>]) -> Vec<f64> {
    let k = grads.len();
    let dim = grads[0].len();
    if k == 1 {
        return grads[0].clone();
    }
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = dot(&grads[i], &grads[j]);
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    let scale = (0..k).map(|i| gram[i][i]).fold(0.0, f64::max);
    let start = (0..k)
        .min_by(|&a, &b| gram[a][a].total_cmp(&gram[b][b]))
        .unwrap();
    let mut weights = vec![0.0; k];
    weights[start] = 1.0;
    let mut gw: Vec<f64> = (0..k).map(|i| gram[i][start]).collect();
    for _ in 0..(200 * k + 1000) {
        let mut hi = usize::MAX;
        let mut lo = 0;
        for i in 0..k {
            if weights[i] > 0.0 && (hi == usize::MAX || gw[i] > gw[hi]) {
                hi = i;
            }
            if gw[i] < gw[lo] {
                lo = i;
            }
        }
        let gap = gw[hi] - gw[lo];
        if gap <= 1e-15 * scale || hi == lo {
            break;
        }
        let denom = gram[hi][hi] - 2.0 * gram[hi][lo] + gram[lo][lo];
        if denom <= 0.0 {
            break;
        }
        let mu = (gap / denom).min(weights[hi]);
        weights[hi] -= mu;
        weights[lo] += mu;
        for (i, g) in gw.iter_mut().enumerate() {
            *g += mu * (gram[i][lo] - gram[i][hi]);
        }
    }
    let mut v = vec![0.0; dim];
    for (w, g) in weights.iter().zip(grads) {
        if *w > 0.0 {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += w * gi;
            }
        }
    }
    v
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

const GOLDEN: f64 = 0.618_033_988_749_895;
const MAX_STEP: f64 = 64.0;

/// Line search along `t -> exp(x, dir, t)`; returns the best point found below `f0`.
fn line_search<P: MinimaxProblem>(
    p: &P,
    x: &P::Point,
    dir: &[f64],
    f0: f64,
    t0: f64,
) -> Option<(P::Point, f64, f64)> {
    let phi = |t: f64| {
        let y = p.exp(x, dir, t);
        let v = if p.admissible(&y) {
            max_of(&p.values(&y))
        } else {
            f64::INFINITY
        };
        (y, v)
    };
    let mut t = t0.clamp(1e-300, MAX_STEP);
    let (mut best_pt, mut best_v) = phi(t);
    let mut best_t = t;
    let (lo, hi);
    if best_v < f0 {
        // Expand while the objective keeps dropping.
        let mut prev = 0.0;
        loop {
            let t2 = 2.0 * t;
            if t2 > MAX_STEP {
                lo = prev;
                hi = t;
                break;
            }
            let (pt2, v2) = phi(t2);
            if v2 < best_v {
                prev = t;
                t = t2;
                best_pt = pt2;
                best_v = v2;
                best_t = t2;
            } else {
                lo = prev;
                hi = t2;
                break;
            }
        }
    } else {
        loop {
            t *= 0.25;
            if t < 1e-300 {
                return None;
            }
            let (pt, v) = phi(t);
            if v < f0 {
                best_pt = pt;
                best_v = v;
                best_t = t;
                lo = 0.0;
                hi = 4.0 * t;
                break;
            }
        }
    }
    // Golden-section refinement of a convex function on [lo, hi].
    let mut a = lo;
    let mut b = hi;
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut pc, mut fc) = phi(c);
    let (mut pd, mut fd) = phi(d);
    for _ in 0..60 {
        if (b - a) <= 1e-8 * b.max(1e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            pd = pc;
            fd = fc;
            c = b - GOLDEN * (b - a);
            let r = phi(c);
            pc = r.0;
            fc = r.1;
        } else {
            a = c;
            c = d;
            pc = pd;
            fc = fd;
            d = a + GOLDEN * (b - a);
            let r = phi(d);
            pd = r.0;
            fd = r.1;
        }
    }
    if fc < best_v {
        best_v = fc;
        best_pt = pc;
        best_t = c;
    }
    if fd < best_v {
        best_v = fd;
        best_pt = pd;
        best_t = d;
    }
    if best_v < f0 {
        Some((best_pt, best_v, best_t))
    } else {
        None
    }
}

const STALL_WINDOW: usize = 100;

/// Minimizes `max_i f_i` starting from `start`.
///
/// Besides the stationarity test, the run stops once a window of
/// `STALL_WINDOW` iterations lowers the objective by less than
/// `1e-3 * tolerance * max(1, f)`.
pub fn minimize_max<P: MinimaxProblem>(
    p: &P,
    start: P::Point,
    max_iterations: usize,
    tolerance: f64,
) -> MinimaxResult<P::Point> {
    let mut x = start;
    let mut vals = p.values(&x);
    let mut f = max_of(&vals);
    let spread = f - vals.iter().copied().fold(f64::INFINITY, f64::min);
    let mut eps = (0.5 * spread).max(1e-3 * f.abs());
    let mut step: f64 = 1.0;
    let mut iterations = 0;
    let mut status = MinimizeStatus::Converged;
    let mut checkpoint = f;
    while iterations < max_iterations {
        if f <= p.negligible() {
            break;
        }
        if iterations > 0 && iterations % STALL_WINDOW == 0 {
            if checkpoint - f < 1e-3 * tolerance * f.max(1.0) {
                break;
            }
            checkpoint = f;
        }
        let eps_floor = 1e-15 * f.abs();
        let active: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] >= f - eps).collect();
        let grads: Vec<Vec<f64>> = active.iter().map(|&i| p.gradient(i, &x)).collect();
        let gscale = grads.iter().map(|g| norm(g)).fold(0.0, f64::max);
        let v = min_norm_combination(&grads);
        let vn = norm(&v);
        iterations += 1;
        if vn <= 1e-13 * gscale || gscale == 0.0 {
            if eps <= eps_floor {
                break;
            }
            eps = (eps * 0.1).max(eps_floor * 0.5);
            continue;
        }
        let dir: Vec<f64> = v.iter().map(|c| -c / vn).collect();
        // First-order guess for the step that would kill the decrease.
        let guess = if step.is_finite() && step > 0.0 {
            step
        } else {
            (f / vn).min(1.0)
        };
        match line_search(p, &x, &dir, f, guess) {
            Some((y, fy, t)) => {
                let improved = f - fy;
                x = y;
                f = fy;
                vals = p.values(&x);
                step = t;
                if p.escaped(&x) {
                    status = MinimizeStatus::NoInteriorMinimum;
                    break;
                }
                if improved <= 1e-16 * f.abs() {
                    if eps <= eps_floor {
                        break;
                    }
                    eps = (eps * 0.1).max(eps_floor * 0.5);
                }
            }
            None => {
                if eps <= eps_floor {
                    break;
                }
                eps = (eps * 0.1).max(eps_floor * 0.5);
                step = (f / vn).min(1.0);
            }
        }
    }
    if iterations >= max_iterations && status == MinimizeStatus::Converged {
        status = MinimizeStatus::Unconverged;
    }
    MinimaxResult {
        point: x,
        value: f,
        status,
        iterations,
    }
}

/// Central finite-difference gradient of one component in the frame at `x`.
pub fn finite_difference_gradient<P: MinimaxProblem>(
    p: &P,
    component: impl Fn(&P::Point) -> f64,
    x: &P::Point,
    h: f64,
) -> Vec<f64> {
    let n = p.dim();
    let mut g = vec![0.0; n];
    let mut e = vec![0.0; n];
    for k in 0..n {
        e.iter_mut().for_each(|c| *c = 0.0);
        e[k] = 1.0;
        let plus = component(&p.exp(x, &e, h));
        let minus = component(&p.exp(x, &e, -h));
        g[k] = (plus - minus) / (2.0 * h);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_norm_of_opposite_vectors_is_zero() {
        let v = min_norm_combination(&[vec![1.0, 0.0], vec![-1.0, 0.0]]);
        assert!(norm(&v) < 1e-15);
    }

    #[test]
    fn min_norm_of_two_vectors_hits_the_segment() {
        // Segment from (1, 1) to (1, -1): closest point to 0 is (1, 0).
        let v = min_norm_combination(&[vec![1.0, 1.0], vec![1.0, -1.0]]);
        assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12);
    }

    #[test]
    fn min_norm_picks_a_vertex_when_closest() {
        let v = min_norm_combination(&[vec![1.0, 0.0], vec![3.0, 1.0], vec![2.0, -1.0]]);
        assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12);
    }

    struct Planar {
        centers: Vec<[f64; 2]>,
    }

    impl MinimaxProblem for Planar {
        type Point = [f64; 2];
        fn dim(&self) -> usize {
            2
        }
        fn values(&self, x: &[f64; 2]) -> Vec<f64> {
            self.centers
                .iter()
                .map(|c| (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2))
                .collect()
        }
        fn gradient(&self, i: usize, x: &[f64; 2]) -> Vec<f64> {
            let c = self.centers[i];
            vec![2.0 * (x[0] - c[0]), 2.0 * (x[1] - c[1])]
        }
        fn exp(&self, x: &[f64; 2], dir: &[f64], t: f64) -> [f64; 2] {
            [x[0] + t * dir[0], x[1] + t * dir[1]]
        }
    }

    #[test]
    fn smallest_enclosing_circle_of_a_right_triangle() {
        // Circumcenter of a right triangle is the midpoint of the hypotenuse.
        let p = Planar {
            centers: vec![[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]],
        };
        let r = minimize_max(&p, [10.0, -7.0], 10_000, 1e-6);
        assert!((r.point[0] - 2.0).abs() < 1e-7, "{:?}", r.point);
        assert!((r.point[1] - 1.5).abs() < 1e-7, "{:?}", r.point);
        assert!((r.value - 6.25).abs() < 1e-10);
    }

    #[test]
    fn obtuse_triangle_uses_the_long_side() {
        let p = Planar {
            centers: vec![[0.0, 0.0], [10.0, 0.0], [5.0, 1.0]],
        };
        let r = minimize_max(&p, [0.0, 0.0], 10_000, 1e-6);
        assert!((r.value - 25.0).abs() < 1e-9);
    }
}
