//! Joint spectral radius brackets and the comparison inequalities between
//! `R(S)`, `L^{P_d}(S)` and `l^{P_d}(S)`.

use serde::{Deserialize, Serialize};

use super::isometry::MatrixIsometry;
use super::space::{PdFinsler, PdSpace};
use crate::displacement::{
    asymptotic_bracket, power_ladder, Bracket, GeneratingSet, MinimizeOptions, MinimizeStatus,
    Slack,
};
use crate::error::{Error, Result};
use crate::tolerance;

/// Per-length data behind a joint spectral radius bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsrLevel {
    pub length: usize,
    pub words: usize,
    /// `max_{g in S^j} Lambda(g)^{1/j}`.
    pub spectral: f64,
    /// `max_{g in S^j} ||g||^{1/j}`.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsrBracket {
    pub bracket: Bracket,
    pub levels: Vec<JsrLevel>,
}

impl JsrBracket {
    /// The bracket using only lengths up to `n`.
    pub fn truncated(&self, n: usize) -> Bracket {
        bracket_of(&self.levels[..n])
    }
}

fn bracket_of(levels: &[JsrLevel]) -> Bracket {
    let lower = levels.iter().map(|l| l.spectral).fold(0.0, f64::max);
    let (upper_len, upper) = levels
        .iter()
        .map(|l| (l.length, l.norm))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    let lower_len = levels
        .iter()
        .find(|l| l.spectral == lower)
        .map_or(1, |l| l.length);
    Bracket {
        lower,
        upper,
        lower_source: format!("Lambda(g)^(1/j) maximized at j = {lower_len}"),
        upper_source: format!("max ||g||^(1/j) over S^j minimized at j = {upper_len}"),
    }
}

fn dimension_of(set: &GeneratingSet<MatrixIsometry>) -> Result<usize> {
    let d = set.elements()[0].dim();
    if set.elements().iter().any(|g| g.dim() != d) {
        return Err(Error::Input("matrices of different dimensions".into()));
    }
    Ok(d)
}

/// `[max_{j, g in S^j} Lambda(g)^{1/j}, min_j max_{g in S^j} ||g||^{1/j}]` for `j <= n_max`.
pub fn jsr_bracket(set: &GeneratingSet<MatrixIsometry>, n_max: usize) -> Result<JsrBracket> {
    jsr_bracket_with_budget(set, n_max, tolerance::WORD_BUDGET)
}

pub fn jsr_bracket_with_budget(
    set: &GeneratingSet<MatrixIsometry>,
    n_max: usize,
    budget: u64,
) -> Result<JsrBracket> {
    let d = dimension_of(set)?;
    let ladder = power_ladder(&PdFinsler { dim: d }, set, n_max, budget)?;
    let levels: Vec<JsrLevel> = ladder
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let j = (i + 1) as f64;
            let spectral = s
                .elements()
                .iter()
                .map(|g| g.spectral_radius())
                .fold(0.0, f64::max)
                .powf(1.0 / j);
            let norm = s
                .elements()
                .iter()
                .map(|g| g.operator_norm())
                .fold(0.0, f64::max)
                .powf(1.0 / j);
            JsrLevel {
                length: i + 1,
                words: s.len(),
                spectral,
                norm,
            }
        })
        .collect();
    Ok(JsrBracket {
        bracket: bracket_of(&levels),
        levels,
    })
}

/// `log R_upper(S) - log max_{j <= k0} max_{g in S^j} Lambda(g)^{1/j}`, with
/// `R_upper` from lengths up to `n_max`. An empirical value of `-log c`.
pub fn bochi_gap(set: &GeneratingSet<MatrixIsometry>, k0: usize, n_max: usize) -> Result<f64> {
    if k0 == 0 || n_max == 0 {
        return Err(Error::Parameter("k0 and n_max must be positive".into()));
    }
    let jsr = jsr_bracket(set, n_max.max(k0))?;
    let lower = jsr.truncated(k0).lower;
    let upper = jsr.truncated(n_max).upper;
    if lower == 0.0 {
        return Ok(0.0);
    }
    Ok(upper.ln() - lower.ln())
}

/// Slacks of the comparisons between `R(S)`, `L^{P_d}(S)` and `l^{P_d}(S)`.
///
/// Each slack uses the bracket endpoint that makes it a consequence of the
/// inequality: it is nonnegative whenever the inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub jsr: Bracket,
    pub l_pd: f64,
    pub ell_pd: Bracket,
    pub slacks: Vec<Slack>,
    pub skipped: Vec<String>,
}

impl ComparisonReport {
    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().map(|s| s.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn all_passed(&self) -> bool {
        self.slacks.iter().all(Slack::passed)
    }
}

pub fn comparison_check(
    set: &GeneratingSet<MatrixIsometry>,
    n_max: usize,
    k: usize,
    opts: &MinimizeOptions,
) -> Result<ComparisonReport> {
    let d = dimension_of(set)?;
    let df = d as f64;
    let jsr = jsr_bracket(set, n_max)?.bracket;
    let space = PdSpace { dim: d };
    let base = space_minimum(&space, set, opts);
    let ell = asymptotic_bracket(&space, set, k, opts)?;
    let numeric = tolerance::MINIMIZE;
    let (log_r_lo, log_r_hi) = (jsr.lower.ln(), jsr.upper.ln());
    let mut slacks = Vec::new();
    let mut skipped = Vec::new();
    match base {
        Some(l) => {
            slacks.push(Slack {
                name: "log R(S) <= L(S)".into(),
                slack: l - log_r_lo,
                tolerance: numeric,
            });
            slacks.push(Slack {
                name: "L(S) <= sqrt(d) log(sqrt(2d) R(S))".into(),
                slack: df.sqrt() * ((2.0 * df).sqrt().ln() + log_r_hi) - l,
                tolerance: numeric,
            });
            slacks.push(Slack {
                name: "L(S)/sqrt(d) - log sqrt(d) <= l(S)".into(),
                slack: ell.upper - (l / df.sqrt() - df.sqrt().ln()),
                tolerance: numeric,
            });
            slacks.push(Slack {
                name: "l(S) <= L(S)".into(),
                slack: l - ell.lower,
                tolerance: numeric,
            });
        }
        None => skipped.push("L(S) minimization did not converge; L-based checks skipped".into()),
    }
    slacks.push(Slack {
        name: "log R(S) <= l(S)".into(),
        slack: ell.upper - log_r_lo,
        tolerance: numeric,
    });
    if d == 2 {
        slacks.push(Slack {
            name: "l(S) <= sqrt(d) log R(S)".into(),
            slack: df.sqrt() * log_r_hi - ell.lower,
            tolerance: numeric,
        });
    } else {
        skipped.push(format!(
            "l(S) <= sqrt(d) log R(S) does not hold for d = {d} (e.g. diag(e, e, e^-2))"
        ));
    }
    Ok(ComparisonReport {
        jsr,
        l_pd: base.unwrap_or(f64::NAN),
        ell_pd: ell,
        slacks,
        skipped,
    })
}

fn space_minimum(
    space: &PdSpace,
    set: &GeneratingSet<MatrixIsometry>,
    opts: &MinimizeOptions,
) -> Option<f64> {
    use crate::displacement::Geometry;
    let m = space.minimize(set.elements(), opts);
    match m.status {
        MinimizeStatus::Converged | MinimizeStatus::Exact => Some(m.value),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ms: &[[i64; 4]]) -> GeneratingSet<MatrixIsometry> {
        let g: Vec<_> = ms
            .iter()
            .map(|m| MatrixIsometry::from_ints(2, m).unwrap())
            .collect();
        GeneratingSet::new(&PdFinsler { dim: 2 }, g).unwrap()
    }

    #[test]
    fn single_matrix_bracket_tightens() {
        let s = set(&[[2, 1, 1, 1]]);
        let b = jsr_bracket(&s, 8).unwrap();
        let rho = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(b.bracket.contains(rho, 1e-12));
        assert!(b.bracket.width() < 1e-12);
    }

    #[test]
    fn orthogonal_sets_have_unit_radius() {
        let s = set(&[[0, -1, 1, 0], [1, 0, 0, 1]]);
        let b = jsr_bracket(&s, 6).unwrap().bracket;
        assert!((b.lower - 1.0).abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);
    }

    #[test]
    fn levels_are_monotone() {
        let s = set(&[[1, 1, 0, 1], [1, 0, 1, 1]]);
        let b = jsr_bracket(&s, 10).unwrap();
        for n in 1..10 {
            let (x, y) = (b.truncated(n), b.truncated(n + 1));
            assert!(y.lower >= x.lower && y.upper <= x.upper);
        }
    }

    #[test]
    fn gap_of_a_single_diagonal_matrix_is_zero() {
        let g = MatrixIsometry::from_f64(2, &[1f64.exp(), 0.0, 0.0, (-1f64).exp()]).unwrap();
        let s = GeneratingSet::new(&PdFinsler { dim: 2 }, vec![g]).unwrap();
        assert!(bochi_gap(&s, 4, 8).unwrap().abs() < 1e-12);
        let id = set(&[[1, 0, 0, 1]]);
        assert_eq!(bochi_gap(&id, 4, 8).unwrap(), 0.0);
    }
}
