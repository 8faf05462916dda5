//! The Cayley tree of a free group of rank at most 4.
//!
//! Letters are encoded as nonzero `i8`: `k` is the generator `x_k`, `-k` its
//! inverse. In text form the generators are `x, y, z, w` and capitals denote
//! inverses, so `"xY"` is `x y^-1`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::displacement::{
    CurvatureClass, Geometry, GeometryTag, MinimizeOptions, MinimizeStatus, Minimum,
};
use crate::error::{Error, Result};

pub const MAX_RANK: usize = 4;
const NAMES: [char; MAX_RANK] = ['x', 'y', 'z', 'w'];

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<i8>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    /// The generator `x_i`, numbered from 1.
    pub fn generator(i: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&i), "generator index {i} out of range");
        FreeWord(vec![i as i8])
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters(letters: &[i8]) -> Result<Self> {
        let mut out: Vec<i8> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l.unsigned_abs() as usize > MAX_RANK {
                return Err(Error::Input(format!("letter {l} outside rank {MAX_RANK}")));
            }
            push_reduced(&mut out, l);
        }
        Ok(FreeWord(out))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" || s == "e" {
            return Ok(Self::identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let lower = ch.to_ascii_lowercase();
            let idx = NAMES
                .iter()
                .position(|&n| n == lower)
                .ok_or_else(|| Error::Input(format!("unknown letter '{ch}' in word \"{s}\"")))?;
            let l = (idx + 1) as i8;
            letters.push(if ch.is_ascii_uppercase() { -l } else { l });
        }
        Self::from_letters(&letters)
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used.
    pub fn rank_used(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let cancel = self
            .0
            .iter()
            .rev()
            .zip(other.0.iter())
            .take_while(|(a, b)| **a == -**b)
            .count();
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        out.extend_from_slice(&self.0[..self.len() - cancel]);
        out.extend_from_slice(&other.0[cancel..]);
        FreeWord(out)
    }

    /// `self * [letter]`.
    pub fn times_letter(&self, l: i8) -> FreeWord {
        let mut out = self.0.clone();
        push_reduced(&mut out, l);
        FreeWord(out)
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Drops the last letter (the parent vertex in the Cayley tree).
    pub fn parent(&self) -> FreeWord {
        let mut v = self.0.clone();
        v.pop();
        FreeWord(v)
    }

    /// Writes `self = u c u^-1` with `c` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (FreeWord, FreeWord) {
        let w = &self.0;
        let mut i = 0;
        while i < w.len() / 2 && w[i] == -w[w.len() - 1 - i] {
            i += 1;
        }
        (
            FreeWord(w[..i].to_vec()),
            FreeWord(w[i..w.len() - i].to_vec()),
        )
    }

    /// Length of the common prefix.
    pub fn common_prefix(&self, other: &FreeWord) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn starts_with(&self, prefix: &FreeWord) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

fn push_reduced(out: &mut Vec<i8>, l: i8) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn letter_char(l: i8) -> char {
    let c = NAMES[l.unsigned_abs() as usize - 1];
    if l < 0 {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FreeWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Length of the cyclic reduction; the translation length in the Cayley tree.
pub fn free_translation_length(w: &FreeWord) -> u64 {
    w.cyclic_decomposition().1.len() as u64
}

/// A vertex, or a quarter point of the edge joining `v` to its parent.
///
/// Quarter points suffice: every `d(x, s x)` is piecewise linear with slopes
/// in `{-2, 0, 2}` and integer offsets, so `L(S, .)` is linear between
/// consecutive quarter points and attains its minimum at one of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FreePoint {
    Vertex(FreeWord),
    /// The point of `[parent(v), v]` at distance `q/4` from `v`, `q` in
    /// `1..=3`; `v` is never the identity.
    Edge(FreeWord, u8),
}

impl FreePoint {
    /// Midpoint of the edge `[a, b]` for adjacent vertices.
    pub fn edge_midpoint(a: &FreeWord, b: &FreeWord) -> FreePoint {
        FreePoint::edge_point(a, b, 2)
    }

    /// The point of the edge `[a, b]` at distance `q/4` from `b`, for
    /// adjacent vertices and `q` in `0..=4`.
    pub fn edge_point(a: &FreeWord, b: &FreeWord, q: u8) -> FreePoint {
        match q {
            0 => FreePoint::Vertex(b.clone()),
            4 => FreePoint::Vertex(a.clone()),
            _ if b.len() > a.len() => FreePoint::Edge(b.clone(), q),
            _ => FreePoint::Edge(a.clone(), 4 - q),
        }
    }

    fn word(&self) -> &FreeWord {
        match self {
            FreePoint::Vertex(v) | FreePoint::Edge(v, _) => v,
        }
    }

    /// Four times the distance to the identity vertex.
    fn depth4(&self) -> i64 {
        match self {
            FreePoint::Vertex(v) => 4 * v.len() as i64,
            FreePoint::Edge(v, q) => 4 * v.len() as i64 - i64::from(*q),
        }
    }
}

impl fmt::Display for FreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreePoint::Vertex(v) => write!(f, "{v}"),
            FreePoint::Edge(v, 2) => write!(f, "mid[{}, {v}]", v.parent()),
            FreePoint::Edge(v, q) => write!(f, "[{}, {v}] at {q}/4 from {v}", v.parent()),
        }
    }
}

/// Four times the tree distance between two quarter points.
pub fn quadrupled_distance(p: &FreePoint, q: &FreePoint) -> i64 {
    let lcp = p.word().common_prefix(q.word()) as i64;
    let (dp, dq) = (p.depth4(), q.depth4());
    let meet = (4 * lcp).min(dp).min(dq);
    dp + dq - 2 * meet
}

pub fn apply_word(g: &FreeWord, x: &FreePoint) -> FreePoint {
    match x {
        FreePoint::Vertex(v) => FreePoint::Vertex(g.mul(v)),
        FreePoint::Edge(v, q) => FreePoint::edge_point(&g.mul(&v.parent()), &g.mul(v), *q),
    }
}

/// Four times `L(S, x)`.
fn objective4(set: &[FreeWord], x: &FreePoint) -> i64 {
    set.iter()
        .map(|s| quadrupled_distance(x, &apply_word(s, x)))
        .max()
        .unwrap_or(0)
}

/// Letters in enumeration order: `x, X, y, Y, ...`.
fn alphabet(rank: usize) -> Vec<i8> {
    (1..=rank as i8).flat_map(|k| [k, -k]).collect()
}

/// The Cayley tree of the free group of the given rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeTree {
    rank: usize,
}

impl FreeTree {
    pub fn new(rank: usize) -> Result<Self> {
        if !(1..=MAX_RANK).contains(&rank) {
            return Err(Error::Parameter(format!("free rank must be in 1..={MAX_RANK}")));
        }
        Ok(FreeTree { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Neighbors in the tree with edges cut into quarters, in enumeration order.
    fn neighbors(&self, x: &FreePoint) -> Vec<FreePoint> {
        match x {
            FreePoint::Vertex(v) => alphabet(self.rank)
                .into_iter()
                .map(|l| FreePoint::edge_point(&v.times_letter(l), v, 1))
                .collect(),
            FreePoint::Edge(v, q) => {
                let p = v.parent();
                vec![
                    FreePoint::edge_point(&p, v, q + 1),
                    FreePoint::edge_point(&p, v, q - 1),
                ]
            }
        }
    }

    /// Exact minimization by descent on the subdivided tree.
    ///
    /// The objective is convex and linear on every quarter edge, so a point no
    /// worse than all its neighbors is a global minimizer.
    pub fn descend(&self, set: &[FreeWord], start: FreePoint) -> (FreePoint, i64, usize) {
        let mut x = start;
        let mut fx = objective4(set, &x);
        let mut steps = 0;
        loop {
            let mut best: Option<(FreePoint, i64)> = None;
            for y in self.neighbors(&x) {
                let fy = objective4(set, &y);
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

    /// Vertices and quarter points of the ball of the given radius around the
    /// identity, in breadth-first order.
    pub fn ball(&self, radius: usize) -> Vec<FreePoint> {
        let letters = alphabet(self.rank);
        let mut out = Vec::new();
        let mut queue = VecDeque::from([FreeWord::identity()]);
        while let Some(v) = queue.pop_front() {
            if !v.is_identity() {
                out.extend((1..=3).rev().map(|q| FreePoint::Edge(v.clone(), q)));
            }
            out.push(FreePoint::Vertex(v.clone()));
            if v.len() < radius {
                for &l in &letters {
                    if v.letters().last() != Some(&-l) {
                        queue.push_back(v.times_letter(l));
                    }
                }
            }
        }
        out
    }
}

/// Exhaustive minimization of `L(S, .)` over the quarter points of the ball
/// of `radius`.
///
/// Fails when a minimizer sits on the boundary sphere and an outward
/// neighbor does strictly better, since then the true minimum lies outside.
pub fn brute_force_l(tree: &FreeTree, set: &[FreeWord], radius: usize) -> Result<(FreePoint, f64)> {
    let ball = tree.ball(radius);
    let mut best: Option<(&FreePoint, i64)> = None;
    for x in &ball {
        let fx = objective4(set, x);
        if best.is_none_or(|(_, b)| fx < b) {
            best = Some((x, fx));
        }
    }
    let (x, fx) = best.expect("ball is nonempty");
    if let FreePoint::Vertex(v) = x {
        if v.len() == radius {
            for y in tree.neighbors(x) {
                if objective4(set, &y) < fx {
                    return Err(Error::RadiusTooSmall { radius });
                }
            }
        }
    }
    Ok((x.clone(), fx as f64 / 4.0))
}

impl Geometry for FreeTree {
    type Point = FreePoint;
    type Isometry = FreeWord;
    type Key = FreeWord;

    fn tag(&self) -> GeometryTag {
        GeometryTag::TreeFree
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

    fn distance(&self, x: &FreePoint, y: &FreePoint) -> f64 {
        quadrupled_distance(x, y) as f64 / 4.0
    }

    fn apply(&self, g: &FreeWord, x: &FreePoint) -> FreePoint {
        apply_word(g, x)
    }

    fn compose(&self, g: &FreeWord, h: &FreeWord) -> FreeWord {
        g.mul(h)
    }

    fn invert(&self, g: &FreeWord) -> FreeWord {
        g.inverse()
    }

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn translation_length(&self, g: &FreeWord) -> f64 {
        free_translation_length(g) as f64
    }

    fn canonical_key(&self, g: &FreeWord) -> FreeWord {
        g.clone()
    }

    fn base_point(&self) -> FreePoint {
        FreePoint::Vertex(FreeWord::identity())
    }

    fn minimize(&self, set: &[FreeWord], _opts: &MinimizeOptions) -> Minimum<FreePoint> {
        let (x, f4, steps) = self.descend(set, self.base_point());
        Minimum {
            point: x,
            value: f4 as f64 / 4.0,
            status: MinimizeStatus::Exact,
            iterations: steps,
        }
    }

    fn describe_point(&self, x: &FreePoint) -> String {
        x.to_string()
    }

    fn check_point(&self, x: &FreePoint) -> Result<()> {
        if let FreePoint::Edge(v, q) = x {
            if v.is_identity() || !(1..=3).contains(q) {
                return Err(Error::Input(
                    "edge point needs a nontrivial far endpoint and an offset in 1..=3".into(),
                ));
            }
        }
        if x.word().rank_used() > self.rank {
            return Err(Error::GeometryMismatch {
                expected: format!("point of F_{}", self.rank),
                found: format!("point {x} using rank {}", x.word().rank_used()),
            });
        }
        Ok(())
    }

    fn check_isometry(&self, g: &FreeWord) -> Result<()> {
        if g.rank_used() > self.rank {
            return Err(Error::GeometryMismatch {
                expected: format!("word in F_{}", self.rank),
                found: format!("word {g} using rank {}", g.rank_used()),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["1", "x", "xY", "zWxy", "XXy"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(w("xX"), FreeWord::identity());
        assert!(FreeWord::parse("xq").is_err());
    }

    #[test]
    fn multiplication_cancels() {
        assert_eq!(w("xy").mul(&w("YX")), FreeWord::identity());
        assert_eq!(w("xyz").mul(&w("Zx")), w("xyx"));
        assert_eq!(w("xy").inverse(), w("YX"));
    }

    #[test]
    fn translation_lengths() {
        assert_eq!(free_translation_length(&w("xyX")), 1);
        assert_eq!(free_translation_length(&w("xyXY")), 4);
        assert_eq!(free_translation_length(&FreeWord::identity()), 0);
        assert_eq!(free_translation_length(&w("xyyX")), 2);
    }

    #[test]
    fn cyclic_decomposition_recomposes() {
        let g = w("xzyZX");
        let (u, c) = g.cyclic_decomposition();
        assert_eq!(u, w("xz"));
        assert_eq!(c, w("y"));
        assert_eq!(u.mul(&c).mul(&u.inverse()), g);
    }

    #[test]
    fn quarter_edge_distances() {
        let e = FreePoint::Vertex(FreeWord::identity());
        let mx = FreePoint::Edge(w("x"), 2);
        let my = FreePoint::Edge(w("y"), 2);
        assert_eq!(quadrupled_distance(&e, &mx), 2);
        assert_eq!(quadrupled_distance(&mx, &my), 4);
        assert_eq!(quadrupled_distance(&mx, &FreePoint::Edge(w("xy"), 2)), 4);
        assert_eq!(quadrupled_distance(&FreePoint::Edge(w("x"), 1), &FreePoint::Edge(w("xy"), 3)), 2);
        assert_eq!(quadrupled_distance(&FreePoint::Edge(w("x"), 1), &FreePoint::Edge(w("y"), 1)), 6);
        assert_eq!(quadrupled_distance(&FreePoint::Vertex(w("xy")), &FreePoint::Vertex(w("yx"))), 16);
    }

    #[test]
    fn apply_midpoint_flips_orientation() {
        // x^-1 maps the edge [e, x] to [x^-1, e].
        let m = apply_word(&w("X"), &FreePoint::Edge(w("x"), 2));
        assert_eq!(m, FreePoint::Edge(w("X"), 2));
        // The quarter point next to x lands next to e.
        let q = apply_word(&w("X"), &FreePoint::Edge(w("x"), 1));
        assert_eq!(q, FreePoint::Edge(w("X"), 3));
    }

    #[test]
    fn quarter_point_minimum() {
        // Axes of x and y^2 x^2 y^-2 are 2 apart with lengths 1 and 2: the
        // two displacement functions cross 5/4 from e towards y.
        let t = FreeTree::new(2).unwrap();
        let set = [w("x"), w("yyxxYY")];
        let (p, l) = brute_force_l(&t, &set, 4).unwrap();
        assert_eq!(l, 3.5);
        assert_eq!(p, FreePoint::Edge(w("yy"), 3));
        assert_eq!(t.minimize(&set, &MinimizeOptions::default()).value, 3.5);
    }

    #[test]
    fn ball_sizes() {
        let t = FreeTree::new(2).unwrap();
        // 1 + 4 + 12 vertices, 3 quarter points on each of 16 edges.
        assert_eq!(t.ball(2).len(), 65);
    }
}
