//! Half-spaces and ends of the Cayley tree of a free group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::FreeWord;

/// One side of the edge `parent(p) -- p`, with `p` a nonempty reduced word.
///
/// `Sub(p)` is the side containing `p`: the vertices whose normal form starts
/// with `p`, together with their ends. `Co(p)` is the other side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "side", content = "word", rename_all = "kebab-case")]
pub enum HalfSpace {
    Sub(FreeWord),
    Co(FreeWord),
}

impl HalfSpace {
    pub fn sub(p: FreeWord) -> Result<Self> {
        if p.is_identity() {
            return Err(Error::Input("half-spaces need a nonempty word".into()));
        }
        Ok(HalfSpace::Sub(p))
    }

    pub fn co(p: FreeWord) -> Result<Self> {
        Self::sub(p).map(|h| h.complement())
    }

    pub fn word(&self) -> &FreeWord {
        match self {
            HalfSpace::Sub(p) | HalfSpace::Co(p) => p,
        }
    }

    pub fn complement(&self) -> HalfSpace {
        match self {
            HalfSpace::Sub(p) => HalfSpace::Co(p.clone()),
            HalfSpace::Co(p) => HalfSpace::Sub(p.clone()),
        }
    }

    pub fn contains_vertex(&self, v: &FreeWord) -> bool {
        match self {
            HalfSpace::Sub(p) => v.starts_with(p),
            HalfSpace::Co(p) => !v.starts_with(p),
        }
    }

    /// The image under left multiplication by `g`.
    pub fn image(&self, g: &FreeWord) -> HalfSpace {
        let p = self.word();
        let gp = g.mul(p);
        let gq = g.mul(&p.parent());
        let sub_image = if gp.len() == gq.len() + 1 {
            HalfSpace::Sub(gp)
        } else {
            // `g q` lies below `g p`, so the side of `g p` contains the root.
            HalfSpace::Co(gq)
        };
        match self {
            HalfSpace::Sub(_) => sub_image,
            HalfSpace::Co(_) => sub_image.complement(),
        }
    }

    pub fn is_subset_of(&self, other: &HalfSpace) -> bool {
        use HalfSpace::{Co, Sub};
        match (self, other) {
            (Sub(p), Sub(q)) => p.starts_with(q),
            (Sub(p), Co(q)) => !p.starts_with(q) && !q.starts_with(p),
            (Co(p), Co(q)) => q.starts_with(p),
            // Both sides below a nonempty word miss the root.
            (Co(_), Sub(_)) => false,
        }
    }

    pub fn is_disjoint_from(&self, other: &HalfSpace) -> bool {
        use HalfSpace::{Co, Sub};
        match (self, other) {
            (Sub(p), Sub(q)) => !p.starts_with(q) && !q.starts_with(p),
            (Sub(p), Co(q)) | (Co(q), Sub(p)) => p.starts_with(q),
            (Co(_), Co(_)) => false,
        }
    }
}

/// A finite union of half-spaces.
pub type TreeRegion = Vec<HalfSpace>;

pub fn region_image(r: &[HalfSpace], g: &FreeWord) -> TreeRegion {
    r.iter().map(|h| h.image(g)).collect()
}

/// Sufficient test: every piece of `a` lies in some piece of `b`.
pub fn region_subset(a: &[HalfSpace], b: &[HalfSpace]) -> bool {
    a.iter().all(|x| b.iter().any(|y| x.is_subset_of(y)))
}

pub fn region_disjoint(a: &[HalfSpace], b: &[HalfSpace]) -> bool {
    a.iter().all(|x| b.iter().all(|y| x.is_disjoint_from(y)))
}

/// The end `head period period ...`, with `head period` reduced and `period`
/// cyclically reduced and nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct End {
    pub head: FreeWord,
    pub period: FreeWord,
}

impl End {
    pub fn letter(&self, i: usize) -> i8 {
        let h = self.head.letters();
        if i < h.len() {
            h[i]
        } else {
            let c = self.period.letters();
            c[(i - h.len()) % c.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> FreeWord {
        let letters: Vec<i8> = (0..n).map(|i| self.letter(i)).collect();
        FreeWord::from_letters(&letters).expect("prefix of a reduced end")
    }

    /// Length after which both ends are periodic with a common period.
    fn horizon(&self, other: &End) -> usize {
        let (a, b) = (self.period.len(), other.period.len());
        self.head.len().max(other.head.len()) + num_integer::lcm(a, b)
    }

    /// Common prefix length, or `None` when the ends coincide.
    pub fn common_prefix(&self, other: &End) -> Option<usize> {
        (0..self.horizon(other)).find(|&i| self.letter(i) != other.letter(i))
    }

    /// `g` applied to the end.
    pub fn image(&self, g: &FreeWord) -> End {
        // `g` cancels at most |g| letters, so one full period survives.
        let reps = g.len() / self.period.len() + 2;
        let w = g.mul(&self.head).mul(&self.period.pow(reps as i64));
        End {
            head: w,
            period: self.period.clone(),
        }
    }
}

/// Attracting and repelling ends of a nontrivial element.
pub fn axis_ends(g: &FreeWord) -> Option<(End, End)> {
    if g.is_identity() {
        return None;
    }
    let (u, c) = g.cyclic_decomposition();
    let attracting = End {
        head: u.clone(),
        period: c.clone(),
    };
    let repelling = End {
        head: u,
        period: c.inverse(),
    };
    Some((attracting, repelling))
}

/// The vertex where the three pairwise distinct ends meet.
pub fn median(x: &End, y: &End, z: &End) -> Option<FreeWord> {
    let xy = x.common_prefix(y)?;
    let yz = y.common_prefix(z)?;
    let xz = x.common_prefix(z)?;
    let (n, e) = [(xy, x), (yz, y), (xz, x)]
        .into_iter()
        .max_by_key(|(n, _)| *n)
        .unwrap();
    Some(e.prefix(n))
}

/// The side of the first edge from vertex `v` towards end `e` that contains `e`.
pub fn half_space_towards(v: &FreeWord, e: &End) -> HalfSpace {
    let n = v.len();
    if v.letters().iter().enumerate().all(|(i, &l)| e.letter(i) == l) {
        HalfSpace::Sub(e.prefix(n + 1))
    } else {
        HalfSpace::Co(v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn images_of_half_spaces() {
        assert_eq!(HalfSpace::Sub(w("x")).image(&w("x")), HalfSpace::Sub(w("xx")));
        assert_eq!(HalfSpace::Sub(w("y")).image(&w("x")), HalfSpace::Sub(w("xy")));
        // x^-1 Sub(x) is the side of the identity away from x^-1.
        assert_eq!(HalfSpace::Sub(w("x")).image(&w("X")), HalfSpace::Co(w("X")));
        assert_eq!(HalfSpace::Co(w("x")).image(&w("X")), HalfSpace::Sub(w("X")));
    }

    #[test]
    fn image_membership_matches_vertices() {
        let hs = [HalfSpace::Sub(w("xY")), HalfSpace::Co(w("yx"))];
        let gs = [w("X"), w("yxY"), w("Yx"), w("xxy")];
        let vertices: Vec<FreeWord> = ["", "x", "xY", "xYx", "y", "yx", "yxx", "Y", "XX", "xYYY"]
            .iter()
            .map(|s| w(s))
            .collect();
        for h in &hs {
            for g in &gs {
                let img = h.image(g);
                for v in &vertices {
                    assert_eq!(img.contains_vertex(&g.mul(v)), h.contains_vertex(v), "{h:?} {g:?} {v:?}");
                }
            }
        }
    }

    #[test]
    fn inclusion_and_disjointness() {
        assert!(HalfSpace::Sub(w("xy")).is_subset_of(&HalfSpace::Sub(w("x"))));
        assert!(HalfSpace::Sub(w("y")).is_subset_of(&HalfSpace::Co(w("x"))));
        assert!(HalfSpace::Co(w("x")).is_subset_of(&HalfSpace::Co(w("xy"))));
        assert!(!HalfSpace::Co(w("x")).is_subset_of(&HalfSpace::Sub(w("y"))));
        assert!(HalfSpace::Sub(w("x")).is_disjoint_from(&HalfSpace::Sub(w("y"))));
        assert!(HalfSpace::Sub(w("xy")).is_disjoint_from(&HalfSpace::Co(w("x"))));
        assert!(!HalfSpace::Co(w("x")).is_disjoint_from(&HalfSpace::Co(w("y"))));
    }

    #[test]
    fn ends_and_medians() {
        let (a, r) = axis_ends(&w("yxY")).unwrap();
        assert_eq!(a.prefix(4), w("yxxx"));
        assert_eq!(r.prefix(3), w("yXX"));
        assert_eq!(a.common_prefix(&r), Some(1));
        assert_eq!(a.common_prefix(&a.image(&w("yxY"))), None);
        let (b, _) = axis_ends(&w("x")).unwrap();
        assert_eq!(median(&a, &r, &b), Some(w("y")));
        assert_eq!(half_space_towards(&w("y"), &a), HalfSpace::Sub(w("yx")));
        assert_eq!(half_space_towards(&w("y"), &b), HalfSpace::Co(w("y")));
    }
}
