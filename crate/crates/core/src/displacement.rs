//! Geometry-agnostic displacement quantities.
//!
//! For a finite set `S` of isometries of a metric space `X`:
//!
//! * `L(S, x) = max_s d(x, s x)` and `L(S) = inf_x L(S, x)`;
//! * `l(S) = lim L(S^n) / n`, only ever reported as a certified bracket;
//! * `lambda_k(S) = max_{j <= k} max_{g in S^j} l(g) / j`;
//! * the circumradius `r(S)`, bracketed through `r <= L <= 2r`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryTag {
    TreeFree,
    TreePadic,
    H2,
    Euclidean,
    PdRiemannian,
    PdFinsler,
}

impl GeometryTag {
    pub fn name(self) -> &'static str {
        match self {
            GeometryTag::TreeFree => "tree-free",
            GeometryTag::TreePadic => "tree-padic",
            GeometryTag::H2 => "h2",
            GeometryTag::Euclidean => "euclidean",
            GeometryTag::PdRiemannian => "pd-riemannian",
            GeometryTag::PdFinsler => "pd-finsler",
        }
    }
}

/// Curvature information a geometry declares about itself.
///
/// `delta = None` means the space is not Gromov hyperbolic, and checks that
/// need a finite `delta` are skipped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureClass {
    pub cat0: bool,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimizeStatus {
    /// The geometry computed the infimum exactly.
    Exact,
    /// Descent stopped at a numerically stationary point.
    Converged,
    /// The iteration cap was reached; the value is still an upper bound.
    Unconverged,
    /// The iterates escaped towards the boundary: the infimum is not attained.
    NoInteriorMinimum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            tolerance: tolerance::MINIMIZE,
            max_iterations: 20_000,
        }
    }
}

/// Result of a displacement minimization. `value` is `L(S, point)`, hence
/// always an upper bound for `L(S)`.
#[derive(Debug, Clone)]
pub struct Minimum<P> {
    pub point: P,
    pub value: f64,
    pub status: MinimizeStatus,
    pub iterations: usize,
}

impl<P> Minimum<P> {
    /// The minimizing point, unless the infimum escaped to the boundary.
    pub fn witness(&self) -> Option<&P> {
        match self.status {
            MinimizeStatus::NoInteriorMinimum => None,
            _ => Some(&self.point),
        }
    }
}

/// A metric space together with a group of isometries acting on it.
pub trait Geometry {
    type Point: Clone + Debug;
    type Isometry: Clone + Debug;
    type Key: Clone + Eq + Hash + Debug;

    fn tag(&self) -> GeometryTag;
    fn is_exact(&self) -> bool;
    fn curvature(&self) -> CurvatureClass;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;
    fn apply(&self, g: &Self::Isometry, x: &Self::Point) -> Self::Point;
    /// `compose(g, h)` acts as `g` after `h`.
    fn compose(&self, g: &Self::Isometry, h: &Self::Isometry) -> Self::Isometry;
    fn invert(&self, g: &Self::Isometry) -> Self::Isometry;
    fn identity(&self) -> Self::Isometry;
    fn translation_length(&self, g: &Self::Isometry) -> f64;
    /// `d(x, g x)`; geometries may override it with a better-conditioned formula.
    fn displacement(&self, g: &Self::Isometry, x: &Self::Point) -> f64 {
        self.distance(x, &self.apply(g, x))
    }
    fn canonical_key(&self, g: &Self::Isometry) -> Self::Key;

    fn base_point(&self) -> Self::Point;
    fn minimizer_hint(&self, _set: &[Self::Isometry]) -> Option<Self::Point> {
        None
    }
    fn minimize(&self, set: &[Self::Isometry], opts: &MinimizeOptions) -> Minimum<Self::Point>;

    fn describe_point(&self, x: &Self::Point) -> String;

    /// Rejects points that do not live in this model (wrong dimension, off the half-plane...).
    fn check_point(&self, _x: &Self::Point) -> Result<()> {
        Ok(())
    }
    fn check_isometry(&self, _g: &Self::Isometry) -> Result<()> {
        Ok(())
    }

    /// Comparison tolerance for certified inequalities.
    fn tolerance(&self) -> f64 {
        if self.is_exact() {
            0.0
        } else {
            tolerance::COMPARE
        }
    }

    /// Tolerance for statements whose certification rests on a minimization.
    fn minimize_tolerance(&self) -> f64 {
        if self.is_exact() {
            0.0
        } else {
            tolerance::MINIMIZE
        }
    }
}

/// A finite, duplicate-free set of isometries of one geometry.
#[derive(Debug, Clone)]
pub struct GeneratingSet<I> {
    elements: Vec<I>,
    is_symmetric: bool,
    contains_identity: bool,
    tag: GeometryTag,
}

impl<I: Clone> GeneratingSet<I> {
    /// Builds a set, dropping later duplicates (by canonical key).
    pub fn new<G: Geometry<Isometry = I>>(geom: &G, elements: Vec<I>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Input("generating set must be nonempty".into()));
        }
        for g in &elements {
            geom.check_isometry(g)?;
        }
        Ok(Self::from_checked(geom, elements))
    }

    fn from_checked<G: Geometry<Isometry = I>>(geom: &G, elements: Vec<I>) -> Self {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(elements.len());
        for g in elements {
            if seen.insert(geom.canonical_key(&g)) {
                kept.push(g);
            }
        }
        let contains_identity = seen.contains(&geom.canonical_key(&geom.identity()));
        let is_symmetric = kept
            .iter()
            .all(|g| seen.contains(&geom.canonical_key(&geom.invert(g))));
        GeneratingSet {
            elements: kept,
            is_symmetric,
            contains_identity,
            tag: geom.tag(),
        }
    }

    pub fn elements(&self) -> &[I] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_symmetric
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn geometry_tag(&self) -> GeometryTag {
        self.tag
    }

    /// `S ∪ S⁻¹`.
    pub fn symmetrized<G: Geometry<Isometry = I>>(&self, geom: &G) -> Self {
        let mut all = self.elements.clone();
        all.extend(self.elements.iter().map(|g| geom.invert(g)));
        Self::from_checked(geom, all)
    }

    /// `{1} ∪ S`, identity first.
    pub fn with_identity<G: Geometry<Isometry = I>>(&self, geom: &G) -> Self {
        let mut all = vec![geom.identity()];
        all.extend(self.elements.iter().cloned());
        Self::from_checked(geom, all)
    }

    /// `S S⁻¹ = { a b⁻¹ : a, b in S }`.
    pub fn difference_set<G: Geometry<Isometry = I>>(&self, geom: &G) -> Self {
        let mut all = Vec::with_capacity(self.len() * self.len());
        for a in &self.elements {
            for b in &self.elements {
                all.push(geom.compose(a, &geom.invert(b)));
            }
        }
        Self::from_checked(geom, all)
    }
}

/// Certified interval for a scalar quantity, with the origin of each endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: String,
    pub upper_source: String,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        self.lower <= self.upper + tol
    }

    pub fn scaled(&self, factor: f64) -> Bracket {
        Bracket {
            lower: self.lower * factor,
            upper: self.upper * factor,
            lower_source: format!("{} x {factor}", self.lower_source),
            upper_source: format!("{} x {factor}", self.upper_source),
        }
    }
}

/// Adds `products` to the running count, failing once the budget is exceeded.
fn charge(used: &mut u128, products: u128, budget: u64) -> Result<()> {
    *used += products;
    if *used > budget as u128 {
        return Err(Error::Budget {
            needed: *used,
            budget,
        });
    }
    Ok(())
}

/// `S^1, S^2, ..., S^k`, sharing a single product budget.
pub fn power_ladder<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    k: usize,
    budget: u64,
) -> Result<Vec<GeneratingSet<G::Isometry>>> {
    if k == 0 {
        return Err(Error::Parameter("power must be positive".into()));
    }
    let mut ladder = vec![set.clone()];
    let mut used: u128 = 0;
    for _ in 1..k {
        let prev = ladder.last().unwrap();
        charge(&mut used, (prev.len() * set.len()) as u128, budget)?;
        let mut seen = HashSet::with_capacity(prev.len() * set.len());
        let mut next = Vec::new();
        for a in prev.elements() {
            for b in set.elements() {
                let ab = geom.compose(a, b);
                if seen.insert(geom.canonical_key(&ab)) {
                    next.push(ab);
                }
            }
        }
        ladder.push(GeneratingSet::from_checked(geom, next));
    }
    Ok(ladder)
}

/// All products of exactly `n` elements of `S`, deduplicated.
pub fn power_set<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    n: usize,
) -> Result<GeneratingSet<G::Isometry>> {
    power_set_with_budget(geom, set, n, tolerance::WORD_BUDGET)
}

pub fn power_set_with_budget<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    n: usize,
    budget: u64,
) -> Result<GeneratingSet<G::Isometry>> {
    Ok(power_ladder(geom, set, n, budget)?.pop().unwrap())
}

pub fn joint_displacement_at<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    x: &G::Point,
) -> Result<f64> {
    if set.geometry_tag() != geom.tag() {
        return Err(Error::GeometryMismatch {
            expected: geom.tag().name().into(),
            found: set.geometry_tag().name().into(),
        });
    }
    geom.check_point(x)?;
    Ok(displacement_at(geom, set.elements(), x))
}

pub(crate) fn displacement_at<G: Geometry>(geom: &G, set: &[G::Isometry], x: &G::Point) -> f64 {
    set.iter()
        .map(|s| geom.displacement(s, x))
        .fold(0.0, f64::max)
}

pub fn minimal_displacement<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    opts: &MinimizeOptions,
) -> Minimum<G::Point> {
    geom.minimize(set.elements(), opts)
}

/// `lambda(S) = max_s l(s)`.
pub fn lambda<G: Geometry>(geom: &G, set: &GeneratingSet<G::Isometry>) -> f64 {
    set.elements()
        .iter()
        .map(|g| geom.translation_length(g))
        .fold(0.0, f64::max)
}

/// Normalized translation lengths along a power ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaProfile {
    /// `per_level[j-1] = lambda(S^j) / j`.
    pub per_level: Vec<f64>,
    /// `running[j-1] = lambda_j(S)`.
    pub running: Vec<f64>,
}

impl LambdaProfile {
    pub fn from_ladder<G: Geometry>(geom: &G, ladder: &[GeneratingSet<G::Isometry>]) -> Self {
        let per_level: Vec<f64> = ladder
            .iter()
            .enumerate()
            .map(|(i, s)| lambda(geom, s) / (i + 1) as f64)
            .collect();
        let mut running = Vec::with_capacity(per_level.len());
        let mut best = 0.0f64;
        for v in &per_level {
            best = best.max(*v);
            running.push(best);
        }
        LambdaProfile { per_level, running }
    }

    pub fn lambda_k(&self, k: usize) -> f64 {
        self.running[k - 1]
    }
}

pub fn lambda_k<G: Geometry>(geom: &G, set: &GeneratingSet<G::Isometry>, k: usize) -> Result<f64> {
    let ladder = power_ladder(geom, set, k, tolerance::WORD_BUDGET)?;
    Ok(LambdaProfile::from_ladder(geom, &ladder).lambda_k(k))
}

/// `[lambda_k(S), L(S^k)/k]`, the certified range for `l(S)`.
pub fn asymptotic_bracket<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    k: usize,
    opts: &MinimizeOptions,
) -> Result<Bracket> {
    let ladder = power_ladder(geom, set, k, tolerance::WORD_BUDGET)?;
    let profile = LambdaProfile::from_ladder(geom, &ladder);
    let mut top = geom.minimize(ladder[k - 1].elements(), opts);
    if k > 1 {
        let base = geom.minimize(set.elements(), opts);
        top = refine_at(geom, ladder[k - 1].elements(), top, &base);
    }
    Ok(bracket_from_parts(geom, set, k, profile.lambda_k(k), &top))
}

fn bracket_from_parts<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    k: usize,
    lambda_k: f64,
    top: &Minimum<G::Point>,
) -> Bracket {
    let (upper, upper_source) = if top.value.is_finite() {
        let status = match top.status {
            MinimizeStatus::Exact => "exact",
            MinimizeStatus::Converged => "converged",
            MinimizeStatus::Unconverged => "unconverged",
            MinimizeStatus::NoInteriorMinimum => "no interior minimum",
        };
        (
            top.value / k as f64,
            format!("L(S^{k})/{k}, minimization {status}"),
        )
    } else {
        let x0 = geom.base_point();
        (
            displacement_at(geom, set.elements(), &x0),
            "L(S, x0): minimization failed, degraded to the base point".to_string(),
        )
    };
    Bracket {
        lower: lambda_k,
        upper,
        lower_source: format!("lambda_{k}(S)"),
        upper_source,
    }
}

/// `r(S)` lies in `[L/2, L]` by `r <= L <= 2r`.
pub fn circumradius_bracket(l_upper: f64) -> Bracket {
    Bracket {
        lower: l_upper / 2.0,
        upper: l_upper,
        lower_source: "L_upper/2".into(),
        upper_source: "L_upper".into(),
    }
}

/// One inequality check: `slack = larger side - smaller side`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub name: String,
    pub slack: f64,
    pub tolerance: f64,
}

impl Slack {
    pub fn passed(&self) -> bool {
        self.slack >= -self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Battery {
    pub slacks: Vec<Slack>,
    pub skipped: Vec<Skipped>,
}

impl Battery {
    pub fn all_passed(&self) -> bool {
        self.slacks.iter().all(Slack::passed)
    }
}

/// Everything the engine computes about one generating set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementReport {
    pub geometry: GeometryTag,
    pub powers: usize,
    pub l_upper: f64,
    pub witness: Option<String>,
    pub minimize_status: MinimizeStatus,
    pub lambda: f64,
    pub ell_bracket: Bracket,
    pub lambda_values: BTreeMap<usize, f64>,
    /// `lambda_K(S)` for the largest computed `K`; only a lower bound for `lambda_inf(S)`.
    pub lambda_infinity_lower_bound: f64,
    pub circumradius_bracket: Bracket,
    pub inequality_slacks: Vec<Slack>,
    pub skipped: Vec<Skipped>,
}

impl DisplacementReport {
    pub fn all_passed(&self) -> bool {
        self.inequality_slacks.iter().all(Slack::passed)
    }
}

struct Computed<P> {
    profile: LambdaProfile,
    base: Minimum<P>,
    square: Minimum<P>,
    top: Minimum<P>,
    bracket: Bracket,
}

/// Keeps the better of `m` and the value of `set` at the final point of `base`
/// (a witness, or the last iterate when the infimum escaped).
///
/// `L(S^n, x) <= n L(S, x)` holds pointwise, so this makes the comparison
/// `L(S^n)/n <= L(S)` independent of minimizer accuracy.
fn refine_at<G: Geometry>(
    geom: &G,
    set: &[G::Isometry],
    m: Minimum<G::Point>,
    base: &Minimum<G::Point>,
) -> Minimum<G::Point> {
    if !base.value.is_finite() {
        return m;
    }
    let x = &base.point;
    let v = displacement_at(geom, set, x);
    if v < m.value || !m.value.is_finite() {
        Minimum {
            point: x.clone(),
            value: v,
            status: m.status,
            iterations: m.iterations,
        }
    } else {
        m
    }
}

fn compute<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    k: usize,
    opts: &MinimizeOptions,
) -> Result<(Computed<G::Point>, Vec<GeneratingSet<G::Isometry>>)> {
    let k = k.max(2);
    let ladder = power_ladder(geom, set, k, tolerance::WORD_BUDGET)?;
    let profile = LambdaProfile::from_ladder(geom, &ladder);
    let base = geom.minimize(set.elements(), opts);
    let square = refine_at(geom, ladder[1].elements(), geom.minimize(ladder[1].elements(), opts), &base);
    let top = if k == 2 {
        square.clone()
    } else {
        let m = geom.minimize(ladder[k - 1].elements(), opts);
        refine_at(geom, ladder[k - 1].elements(), m, &base)
    };
    let bracket = bracket_from_parts(geom, set, k, profile.lambda_k(k), &top);
    Ok((
        Computed {
            profile,
            base,
            square,
            top,
            bracket,
        },
        ladder,
    ))
}

/// Runs every applicable inequality on `S` with power `k` (at least 2).
///
/// `delta = None` marks a space that is not Gromov hyperbolic.
pub fn inequality_battery<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    delta: Option<f64>,
    k: usize,
    opts: &MinimizeOptions,
) -> Result<Battery> {
    let (c, _) = compute(geom, set, k, opts)?;
    Ok(battery_from(geom, set, delta, k.max(2), opts, &c))
}

fn battery_from<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    delta: Option<f64>,
    k: usize,
    opts: &MinimizeOptions,
    c: &Computed<G::Point>,
) -> Battery {
    let cert = geom.tolerance();
    let numeric = geom.minimize_tolerance();
    let lam = c.profile.per_level[0];
    let lam_k = c.profile.lambda_k(k);
    let l1 = c.base.value;
    let l2 = c.square.value;
    let lk = c.top.value;
    let kf = k as f64;
    let mut slacks = vec![
        Slack {
            name: format!("chain: lambda(S) <= lambda_{k}(S)"),
            slack: lam_k - lam,
            tolerance: cert,
        },
        Slack {
            name: format!("chain: lambda_{k}(S) <= L(S^{k})/{k}"),
            slack: lk / kf - lam_k,
            tolerance: cert,
        },
        Slack {
            name: format!("chain: L(S^{k})/{k} <= L(S)"),
            slack: l1 - lk / kf,
            tolerance: numeric,
        },
    ];
    let mut skipped = Vec::new();
    let curvature = geom.curvature();

    if curvature.cat0 {
        let worst = set
            .elements()
            .iter()
            .map(|g| {
                let single = geom.minimize(std::slice::from_ref(g), opts);
                (single.value - geom.translation_length(g)).abs()
            })
            .fold(0.0, f64::max);
        slacks.push(Slack {
            name: "CAT(0): L(g) = l(g) for g in S".into(),
            slack: -worst,
            tolerance: numeric,
        });
        let diff = set.difference_set(geom);
        let ld = geom.minimize(diff.elements(), opts).value;
        slacks.push(Slack {
            name: format!("CAT(0): L(S^{k}) >= sqrt({k})/2 L(SS^-1)"),
            slack: lk - kf.sqrt() / 2.0 * ld,
            tolerance: numeric * (1.0 + kf.sqrt() / 2.0),
        });
        if let Some(d) = delta {
            slacks.push(Slack {
                name: format!("hyperbolic: L(S^{k})/{k} >= L(SS^-1)/2 - 2 delta"),
                slack: lk / kf - ld / 2.0 + 2.0 * d,
                tolerance: numeric,
            });
        }
    } else {
        skipped.push(Skipped {
            name: "CAT(0) checks".into(),
            reason: "geometry is not CAT(0)".into(),
        });
    }

    match delta {
        Some(d) => {
            if !curvature.cat0 {
                let diff = set.difference_set(geom);
                let ld = geom.minimize(diff.elements(), opts).value;
                slacks.push(Slack {
                    name: format!("hyperbolic: L(S^{k})/{k} >= L(SS^-1)/2 - 2 delta"),
                    slack: lk / kf - ld / 2.0 + 2.0 * d,
                    tolerance: numeric,
                });
            }
            if set.is_symmetric() {
                slacks.push(Slack {
                    name: "symmetric hyperbolic: l(S) <= L(S^2)/2".into(),
                    slack: l2 / 2.0 - c.bracket.lower,
                    tolerance: cert,
                });
                slacks.push(Slack {
                    name: "symmetric hyperbolic: L(S^2)/2 <= l(S) + 2 delta".into(),
                    slack: c.bracket.upper + 2.0 * d - l2 / 2.0,
                    tolerance: numeric,
                });
            } else {
                skipped.push(Skipped {
                    name: "symmetric hyperbolic growth".into(),
                    reason: "S is not symmetric".into(),
                });
            }
            if curvature.cat0 {
                skipped.push(Skipped {
                    name: "hyperbolic: L(g) - C delta <= l(g)".into(),
                    reason: "covered by the CAT(0) equality L(g) = l(g)".into(),
                });
            } else {
                skipped.push(Skipped {
                    name: "hyperbolic: L(g) - C delta <= l(g)".into(),
                    reason: "the constant C is not explicit".into(),
                });
            }
        }
        None => {
            skipped.push(Skipped {
                name: "hyperbolic checks".into(),
                reason: "space is not Gromov hyperbolic (delta = infinity)".into(),
            });
        }
    }

    Battery { slacks, skipped }
}

/// Full report: L(S), the l(S) bracket, lambda_j for j <= k, r(S), and the battery.
pub fn displacement_report<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    k: usize,
    opts: &MinimizeOptions,
) -> Result<DisplacementReport> {
    let k = k.max(2);
    let (c, _) = compute(geom, set, k, opts)?;
    let delta = geom.curvature().delta;
    let battery = battery_from(geom, set, delta, k, opts, &c);
    let lambda_values = c
        .profile
        .running
        .iter()
        .enumerate()
        .map(|(i, v)| (i + 1, *v))
        .collect();
    Ok(DisplacementReport {
        geometry: geom.tag(),
        powers: k,
        l_upper: c.base.value,
        witness: c.base.witness().map(|p| geom.describe_point(p)),
        minimize_status: c.base.status,
        lambda: c.profile.per_level[0],
        ell_bracket: c.bracket.clone(),
        lambda_values,
        lambda_infinity_lower_bound: c.profile.lambda_k(k),
        circumradius_bracket: circumradius_bracket(c.base.value),
        inequality_slacks: battery.slacks,
        skipped: battery.skipped,
    })
}

/// The chain `lambda <= lambda_2 <= lower <= upper <= L_upper`
/// evaluated with power `k`; each entry is a consecutive difference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSlacks {
    pub lambda: f64,
    pub lambda_2: f64,
    pub bracket: Bracket,
    pub l_upper: f64,
    pub steps: [f64; 4],
}

impl ChainSlacks {
    pub fn min_slack(&self) -> f64 {
        self.steps.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn chain_slacks<G: Geometry>(
    geom: &G,
    set: &GeneratingSet<G::Isometry>,
    k: usize,
    opts: &MinimizeOptions,
) -> Result<ChainSlacks> {
    let k = k.max(2);
    let (c, _) = compute(geom, set, k, opts)?;
    let lam = c.profile.per_level[0];
    let lam2 = c.profile.lambda_k(2);
    let b = c.bracket.clone();
    Ok(ChainSlacks {
        lambda: lam,
        lambda_2: lam2,
        steps: [lam2 - lam, b.lower - lam2, b.upper - b.lower, c.base.value - b.upper],
        l_upper: c.base.value,
        bracket: b,
    })
}
