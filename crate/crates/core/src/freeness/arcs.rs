//! Closed arcs of `P^1(Q)`, standing for the open half-planes of the upper
//! half-plane that they bound.

use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::hyperbolic::{BoundaryPoint, ExactMoebius};

/// The arc running from `start` to `end` in increasing order through infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Ext {
    Fin(Rat),
    Inf,
}

/// Position of `p` along the circle starting at `origin`; `origin` comes first.
fn pos(origin: &BoundaryPoint, p: &BoundaryPoint) -> (u8, Ext) {
    use BoundaryPoint::{Finite, Infinity};
    match (origin, p) {
        (_, Infinity) => (0, Ext::Inf),
        (Infinity, Finite(x)) => (1, Ext::Fin(x.clone())),
        (Finite(o), Finite(x)) => (u8::from(x < o), Ext::Fin(x.clone())),
    }
}

impl Arc {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self> {
        if start == end {
            return Err(Error::Input("an arc needs distinct endpoints".into()));
        }
        Ok(Arc { start, end })
    }

    /// Arc between exactly converted floats; infinite values map to infinity.
    pub fn from_f64(start: f64, end: f64) -> Result<Self> {
        let conv = |x: f64| -> Result<BoundaryPoint> {
            if x.is_infinite() {
                Ok(BoundaryPoint::Infinity)
            } else {
                Rat::from_f64(x)
                    .map(BoundaryPoint::Finite)
                    .ok_or_else(|| Error::Input(format!("endpoint {x} is not finite")))
            }
        };
        Arc::new(conv(start)?, conv(end)?)
    }

    pub fn complement(&self) -> Arc {
        Arc {
            start: self.end.clone(),
            end: self.start.clone(),
        }
    }

    pub fn contains_point(&self, p: &BoundaryPoint) -> bool {
        pos(&self.start, p) <= pos(&self.start, &self.end)
    }

    pub fn is_subset_of(&self, outer: &Arc) -> bool {
        let o = &outer.start;
        let (a, b, c) = (pos(o, &self.start), pos(o, &self.end), pos(o, &outer.end));
        a <= b && b <= c
    }

    /// The open half-planes over the two arcs are disjoint.
    pub fn is_disjoint_from(&self, other: &Arc) -> bool {
        let c = self.complement();
        other.is_subset_of(&c) && *other != c
    }

    pub fn image(&self, g: &ExactMoebius) -> Arc {
        Arc {
            start: g.apply(&self.start),
            end: g.apply(&self.end),
        }
    }

    /// Center and radius of the bounding geodesic; a vertical line has no center.
    pub fn geodesic(&self) -> Option<(Rat, Rat)> {
        match (&self.start, &self.end) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => {
                let two = Rat::from_integer(2.into());
                Some(((a + b) / &two, num_traits::Signed::abs(&(b - a)) / two))
            }
            _ => None,
        }
    }
}
