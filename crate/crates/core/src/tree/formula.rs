use crate::displacement::{GeneratingSet, Geometry};

/// `L(S) = max_{a, b in S} max(l(a), l(ab)/2)`, valid for isometries of a tree.
pub fn tree_formula_l<G: Geometry>(geom: &G, set: &GeneratingSet<G::Isometry>) -> f64 {
    let s = set.elements();
    let mut best = 0.0f64;
    for a in s {
        best = best.max(geom.translation_length(a));
        for b in s {
            best = best.max(geom.translation_length(&geom.compose(a, b)) / 2.0);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::free::{FreeTree, FreeWord};

    fn set(words: &[&str]) -> (FreeTree, GeneratingSet<FreeWord>) {
        let t = FreeTree::new(2).unwrap();
        let s = words.iter().map(|w| FreeWord::parse(w).unwrap()).collect();
        (t, GeneratingSet::new(&t, s).unwrap())
    }

    #[test]
    fn small_cases() {
        let (t, s) = set(&["x", "y"]);
        assert_eq!(tree_formula_l(&t, &s), 1.0);
        let (t, s) = set(&["x", "yxY"]);
        assert_eq!(tree_formula_l(&t, &s), 2.0);
        let (t, s) = set(&["x", "X"]);
        assert_eq!(tree_formula_l(&t, &s), 1.0);
    }
}
