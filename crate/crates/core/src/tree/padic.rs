//! The Bruhat-Tits tree of `SL2(Q_p)`.
//!
//! Vertices are homothety classes of lattices in `Q_p^2`, represented by a
//! basis matrix `h` over `Q`. Everything is exact: valuations of rational
//! entries are integers and no p-adic number is ever approximated.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Zero};

use crate::displacement::{
    CurvatureClass, Geometry, GeometryTag, MinimizeOptions, MinimizeStatus, Minimum,
};
use crate::error::{Error, Result};
use crate::exact::{rat, valuation, Rat};

/// Row-major 2x2 rational matrix `[a, b, c, d]`.
pub type Mat2 = [Rat; 4];

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

pub fn mat_det(x: &Mat2) -> Rat {
    &x[0] * &x[3] - &x[1] * &x[2]
}

pub fn mat_inverse(x: &Mat2) -> Option<Mat2> {
    let det = mat_det(x);
    if det.is_zero() {
        return None;
    }
    Some([
        &x[3] / &det,
        -&x[1] / &det,
        -&x[2] / &det,
        &x[0] / &det,
    ])
}

pub fn mat_identity() -> Mat2 {
    [rat(1), rat(0), rat(0), rat(1)]
}

fn min_valuation(x: &Mat2, p: u64) -> i64 {
    x.iter()
        .filter_map(|q| valuation(q, p))
        .min()
        .expect("nonzero matrix")
}

/// An element of `SL2(Q)` viewed inside `SL2(Q_p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicMatrix(Mat2);

impl PadicMatrix {
    pub fn new(entries: Mat2) -> Result<Self> {
        if mat_det(&entries) != Rat::one() {
            return Err(Error::Input(format!(
                "p-adic matrix must have determinant 1, got {}",
                mat_det(&entries)
            )));
        }
        Ok(PadicMatrix(entries))
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new([rat(a), rat(b), rat(c), rat(d)])
    }

    pub fn entries(&self) -> &Mat2 {
        &self.0
    }

    pub fn trace(&self) -> Rat {
        &self.0[0] + &self.0[3]
    }
}

impl fmt::Debug for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
    }
}

/// A lattice `h Z_p^2`, given by an invertible basis matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice(Mat2);

impl Lattice {
    pub fn new(basis: Mat2) -> Result<Self> {
        if mat_det(&basis).is_zero() {
            return Err(Error::Input("lattice basis must be invertible".into()));
        }
        Ok(Lattice(basis))
    }

    pub fn standard() -> Self {
        Lattice(mat_identity())
    }

    pub fn basis(&self) -> &Mat2 {
        &self.0
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.0;
        write!(f, "<[[{}, {}], [{}, {}]]>", e[0], e[1], e[2], e[3])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PadicPoint {
    Vertex(Lattice),
    Midpoint(Lattice, Lattice),
}

/// `max(0, -2 v_p(tr g))`.
pub fn padic_translation_length(p: u64, g: &PadicMatrix) -> i64 {
    match valuation(&g.trace(), p) {
        Some(v) if v < 0 => -2 * v,
        _ => 0,
    }
}

/// Bruhat-Tits tree of `SL2(Q_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicTree {
    p: u64,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl PadicTree {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("{p} is not a prime")));
        }
        Ok(PadicTree { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Elementary-divisor distance: `v(det M) - 2 min v(M_ij)` for `M = a^-1 b`.
    pub fn vertex_distance(&self, a: &Lattice, b: &Lattice) -> i64 {
        let m = mat_mul(&mat_inverse(&a.0).expect("invertible lattice"), &b.0);
        let dv = valuation(&mat_det(&m), self.p).expect("invertible");
        dv - 2 * min_valuation(&m, self.p)
    }

    /// The `p + 1` neighbors of a vertex.
    pub fn vertex_neighbors(&self, h: &Lattice) -> Vec<Lattice> {
        let p = self.p as i64;
        let mut out: Vec<Lattice> = (0..p)
            .map(|j| Lattice(mat_mul(&h.0, &[rat(p), rat(j), rat(0), rat(1)])))
            .collect();
        out.push(Lattice(mat_mul(&h.0, &[rat(1), rat(0), rat(0), rat(p)])));
        out
    }

    /// Twice the distance between two half-integer points.
    pub fn doubled_distance(&self, x: &PadicPoint, y: &PadicPoint) -> i64 {
        use PadicPoint::*;
        match (x, y) {
            (Vertex(a), Vertex(b)) => 2 * self.vertex_distance(a, b),
            (Vertex(v), Midpoint(a, b)) | (Midpoint(a, b), Vertex(v)) => {
                self.vertex_distance(v, a) + self.vertex_distance(v, b)
            }
            (Midpoint(a, b), Midpoint(c, d)) => {
                let ac = self.vertex_distance(a, c);
                let bd = self.vertex_distance(b, d);
                let ad = self.vertex_distance(a, d);
                let bc = self.vertex_distance(b, c);
                if (ac == 0 && bd == 0) || (ad == 0 && bc == 0) {
                    0
                } else {
                    (ac + bd + ad + bc) / 2
                }
            }
        }
    }

    pub fn apply_point(&self, g: &PadicMatrix, x: &PadicPoint) -> PadicPoint {
        match x {
            PadicPoint::Vertex(h) => PadicPoint::Vertex(Lattice(mat_mul(&g.0, &h.0))),
            PadicPoint::Midpoint(a, b) => PadicPoint::Midpoint(
                Lattice(mat_mul(&g.0, &a.0)),
                Lattice(mat_mul(&g.0, &b.0)),
            ),
        }
    }

    fn objective2(&self, set: &[PadicMatrix], x: &PadicPoint) -> i64 {
        set.iter()
            .map(|s| self.doubled_distance(x, &self.apply_point(s, x)))
            .max()
            .unwrap_or(0)
    }

    fn neighbors(&self, x: &PadicPoint) -> Vec<PadicPoint> {
        match x {
            PadicPoint::Vertex(h) => self
                .vertex_neighbors(h)
                .into_iter()
                .map(|n| PadicPoint::Midpoint(h.clone(), n))
                .collect(),
            PadicPoint::Midpoint(a, b) => {
                vec![PadicPoint::Vertex(a.clone()), PadicPoint::Vertex(b.clone())]
            }
        }
    }

    /// Exact minimization by descent on the subdivided tree.
    pub fn descend(&self, set: &[PadicMatrix], start: PadicPoint) -> (PadicPoint, i64, usize) {
        let mut x = start;
        let mut fx = self.objective2(set, &x);
        let mut steps = 0;
        loop {
            let mut best: Option<(PadicPoint, i64)> = None;
            for y in self.neighbors(&x) {
                let fy = self.objective2(set, &y);
                if fy < fx && best.as_ref().is_none_or(|(_, b)| fy < *b) {
                    best = Some((y, fy));
                }
            }
            match best {
                Some((y, fy)) => {
                    x = y;
                    fx = fy;
                    steps += 1;
                }
                None => return (x, fx, steps),
            }
        }
    }

    /// Vertices within `radius` of the standard lattice with their depth, and
    /// the midpoints of the edges between them, in breadth-first order.
    pub fn ball(&self, radius: usize) -> Vec<(PadicPoint, usize)> {
        let mut out = Vec::new();
        let mut queue: VecDeque<(Lattice, Option<Lattice>, usize)> =
            VecDeque::from([(Lattice::standard(), None, 0)]);
        while let Some((v, parent, depth)) = queue.pop_front() {
            if let Some(par) = &parent {
                out.push((PadicPoint::Midpoint(par.clone(), v.clone()), depth));
            }
            out.push((PadicPoint::Vertex(v.clone()), depth));
            if depth < radius {
                for n in self.vertex_neighbors(&v) {
                    if parent
                        .as_ref()
                        .is_some_and(|par| self.vertex_distance(par, &n) == 0)
                    {
                        continue;
                    }
                    queue.push_back((n, Some(v.clone()), depth + 1));
                }
            }
        }
        out
    }
}

/// `d(h, g h)` for a vertex `h`.
pub fn padic_displacement(tree: &PadicTree, g: &PadicMatrix, h: &Lattice) -> i64 {
    tree.vertex_distance(h, &Lattice(mat_mul(&g.0, &h.0)))
}

/// Exhaustive minimization of `L(S, .)` over the subdivided ball of `radius`.
pub fn brute_force_l_padic(
    tree: &PadicTree,
    set: &[PadicMatrix],
    radius: usize,
) -> Result<(PadicPoint, f64)> {
    let ball = tree.ball(radius);
    let mut best: Option<(&PadicPoint, usize, i64)> = None;
    for (x, depth) in &ball {
        let fx = tree.objective2(set, x);
        if best.is_none_or(|(_, _, b)| fx < b) {
            best = Some((x, *depth, fx));
        }
    }
    let (x, depth, fx) = best.expect("ball is nonempty");
    if matches!(x, PadicPoint::Vertex(_)) && depth == radius {
        for y in tree.neighbors(x) {
            if tree.objective2(set, &y) < fx {
                return Err(Error::RadiusTooSmall { radius });
            }
        }
    }
    Ok((x.clone(), fx as f64 / 2.0))
}

impl Geometry for PadicTree {
    type Point = PadicPoint;
    type Isometry = PadicMatrix;
    type Key = Mat2;

    fn tag(&self) -> GeometryTag {
        GeometryTag::TreePadic
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn curvature(&self) -> CurvatureClass {
        CurvatureClass {
            cat0: true,
            delta: Some(0.0),
        }
    }

    fn distance(&self, x: &PadicPoint, y: &PadicPoint) -> f64 {
        self.doubled_distance(x, y) as f64 / 2.0
    }

    fn apply(&self, g: &PadicMatrix, x: &PadicPoint) -> PadicPoint {
        self.apply_point(g, x)
    }

    fn compose(&self, g: &PadicMatrix, h: &PadicMatrix) -> PadicMatrix {
        PadicMatrix(mat_mul(&g.0, &h.0))
    }

    fn invert(&self, g: &PadicMatrix) -> PadicMatrix {
        PadicMatrix(mat_inverse(&g.0).expect("determinant one"))
    }

    fn identity(&self) -> PadicMatrix {
        PadicMatrix(mat_identity())
    }

    fn translation_length(&self, g: &PadicMatrix) -> f64 {
        padic_translation_length(self.p, g) as f64
    }

    fn canonical_key(&self, g: &PadicMatrix) -> Mat2 {
        g.0.clone()
    }

    fn base_point(&self) -> PadicPoint {
        PadicPoint::Vertex(Lattice::standard())
    }

    fn minimize(&self, set: &[PadicMatrix], _opts: &MinimizeOptions) -> Minimum<PadicPoint> {
        let (x, f2, steps) = self.descend(set, self.base_point());
        Minimum {
            point: x,
            value: f2 as f64 / 2.0,
            status: MinimizeStatus::Exact,
            iterations: steps,
        }
    }

    fn describe_point(&self, x: &PadicPoint) -> String {
        match x {
            PadicPoint::Vertex(h) => format!("{h:?}"),
            PadicPoint::Midpoint(a, b) => format!("mid[{a:?}, {b:?}]"),
        }
    }

    fn check_point(&self, x: &PadicPoint) -> Result<()> {
        if let PadicPoint::Midpoint(a, b) = x {
            if self.vertex_distance(a, b) != 1 {
                return Err(Error::Input("midpoint endpoints must be adjacent".into()));
            }
        }
        Ok(())
    }

    fn check_isometry(&self, g: &PadicMatrix) -> Result<()> {
        if mat_det(&g.0) != Rat::one() {
            return Err(Error::Input("determinant must be 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_frac;

    fn diag(p: i64) -> PadicMatrix {
        PadicMatrix::new([rat(p), rat(0), rat(0), rat_frac(1, p)]).unwrap()
    }

    #[test]
    fn translation_lengths() {
        for p in [2u64, 3, 5] {
            assert_eq!(padic_translation_length(p, &diag(p as i64)), 2);
            assert_eq!(padic_translation_length(p, &PadicMatrix::from_ints(1, 1, 0, 1).unwrap()), 0);
            let g = PadicMatrix::new([rat(0), rat(-1), rat(1), rat_frac(1, p as i64)]).unwrap();
            assert_eq!(padic_translation_length(p, &g), 2);
        }
    }

    #[test]
    fn displacement_on_and_off_the_axis() {
        let t = PadicTree::new(3).unwrap();
        let g = diag(3);
        assert_eq!(padic_displacement(&t, &g, &Lattice::standard()), 2);
        let u = PadicMatrix::from_ints(1, 1, 0, 1).unwrap();
        assert_eq!(padic_displacement(&t, &u, &Lattice::standard()), 0);
        let off = Lattice::new([rat(3), rat(1), rat(0), rat(1)]).unwrap();
        assert_eq!(t.vertex_distance(&Lattice::standard(), &off), 1);
        assert_eq!(padic_displacement(&t, &g, &off), 4);
    }

    #[test]
    fn neighbors_are_at_distance_one_and_distinct() {
        let t = PadicTree::new(2).unwrap();
        let ns = t.vertex_neighbors(&Lattice::standard());
        assert_eq!(ns.len(), 3);
        for (i, a) in ns.iter().enumerate() {
            assert_eq!(t.vertex_distance(&Lattice::standard(), a), 1);
            for b in &ns[i + 1..] {
                assert_eq!(t.vertex_distance(a, b), 2);
            }
        }
    }

    #[test]
    fn ball_counts() {
        // p = 2, radius 2: 1 + 3 + 6 vertices and 9 edges.
        let t = PadicTree::new(2).unwrap();
        assert_eq!(t.ball(2).len(), 19);
    }

    #[test]
    fn rejects_non_primes() {
        assert!(PadicTree::new(4).is_err());
        assert!(PadicTree::new(1).is_err());
    }
}
