//! Named reproduction experiments behind `isodisp repro`.
//!
//! Each experiment fills the checks and summary of a [`RunReport`] and
//! returns CSV series for plotting. All randomness comes from one ChaCha8
//! generator (or corpus generator) seeded with the experiment seed.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use isodisp::corpus::{free_sets, graphs, hyperbolic_pairs, random_sl2z, random_word};
use isodisp::displacement::power_ladder;
use isodisp::euclidean::{bass_example, greedy_escape_lower_bound, EuclideanSpace};
use isodisp::freeness::{
    semigroup_from_displacement_h2, semigroup_from_displacement_tree, SemigroupOptions, Verdict,
};
use isodisp::hyperbolic::{almost_elliptic_pair, h2_minimal_displacement, ExactMoebius, HyperbolicPlane};
use isodisp::hyperbolicity::{helly_min_radius, midpoint_slim_delta, random_meeting_hulls, triangle_hulls};
use isodisp::matrix::{jsr_bracket, MatrixIsometry, PdSpace};
use isodisp::schema::{parse_input, InputGeometry, ParsedInput};
use isodisp::tolerance::{COMPARE, H2_DELTA, PINGPONG_DELTA_FACTOR, WORD_BUDGET};
use isodisp::tree::{brute_force_l, tree_formula_l, FreeTree, FreeWord};
use isodisp::{lambda_k, minimal_displacement, Error, GeneratingSet, MinimizeOptions};

use crate::report::{CheckResult, RunReport, Series};
use crate::{row, CliError};

#[derive(Debug, Clone, Subcommand)]
pub enum Experiment {
    /// Tree formula for L(S) against brute force on random free-group sets.
    TreeFormula(TreeFormulaArgs),
    /// Gap L(S) - lambda_2(S) on random hyperbolic pairs in the plane.
    BochiH2(BochiH2Args),
    /// Two elliptic rotations with L(S) = eps and lambda_2(S) = 0.
    AlmostElliptic(AlmostEllipticArgs),
    /// Two rotations of R^4 without a common fixed point, every short word elliptic.
    BassR4(BassArgs),
    /// Joint spectral radius bracket from words of length at most nmax.
    Jsr(JsrArgs),
    /// Helly radius of pairwise meeting convex hulls on small graphs.
    Helly(HellyArgs),
    /// Free semigroups from large displacement, certified by ping-pong.
    Pingpong(PingpongArgs),
    /// Growth entropy log|S^n| / n of a free-group set.
    Entropy(EntropyArgs),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::TreeFormula(_) => "tree-formula",
            Experiment::BochiH2(_) => "bochi-h2",
            Experiment::AlmostElliptic(_) => "almost-elliptic",
            Experiment::BassR4(_) => "bass-r4",
            Experiment::Jsr(_) => "jsr",
            Experiment::Helly(_) => "helly",
            Experiment::Pingpong(_) => "pingpong",
            Experiment::Entropy(_) => "entropy",
        }
    }

    /// Experiment flags as a JSON object, echoed in the report.
    pub fn parameters(&self) -> serde_json::Value {
        let v = match self {
            Experiment::TreeFormula(a) => serde_json::to_value(a),
            Experiment::BochiH2(a) => serde_json::to_value(a),
            Experiment::AlmostElliptic(a) => serde_json::to_value(a),
            Experiment::BassR4(a) => serde_json::to_value(a),
            Experiment::Jsr(a) => serde_json::to_value(a),
            Experiment::Helly(a) => serde_json::to_value(a),
            Experiment::Pingpong(a) => serde_json::to_value(a),
            Experiment::Entropy(a) => serde_json::to_value(a),
        };
        v.expect("flags serialize")
    }

    pub fn run(&self, seed: u64, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
        match self {
            Experiment::TreeFormula(a) => tree_formula(a, seed, report),
            Experiment::BochiH2(a) => bochi_h2(a, seed, report),
            Experiment::AlmostElliptic(a) => almost_elliptic(a, report),
            Experiment::BassR4(a) => bass_r4(a, seed, report),
            Experiment::Jsr(a) => jsr(a, report),
            Experiment::Helly(a) => helly(a, seed, report),
            Experiment::Pingpong(a) => pingpong(a, seed, report),
            Experiment::Entropy(a) => entropy(a, report),
        }
    }
}

fn check_range<T: PartialOrd + std::fmt::Display>(name: &str, v: T, lo: T, hi: T) -> Result<(), CliError> {
    if v < lo || v > hi {
        return Err(Error::Parameter(format!("--{name} must lie in [{lo}, {hi}], got {v}")).into());
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TreeFormulaArgs {
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// Largest number of words in a set.
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    #[arg(long, default_value_t = 6)]
    pub max_len: usize,
}

fn brute_force(tree: &FreeTree, words: &[FreeWord]) -> Result<f64, Error> {
    let mut radius = words.iter().map(FreeWord::len).max().unwrap_or(0).max(1);
    loop {
        match brute_force_l(tree, words, radius) {
            Err(Error::RadiusTooSmall { .. }) => radius *= 2,
            other => return other.map(|(_, l)| l),
        }
    }
}

fn tree_formula(a: &TreeFormulaArgs, seed: u64, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("rank", a.rank, 1, 4)?;
    check_range("trials", a.trials, 1, 100_000)?;
    check_range("max-size", a.max_size, 1, 8)?;
    check_range("max-len", a.max_len, 0, 8)?;
    let tree = FreeTree::new(a.rank)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series = Series::new("tree_formula", &["trial", "size", "formula", "brute_force", "descent"]);
    let (mut agree, mut descent_agree) = (0usize, 0usize);
    for trial in 0..a.trials {
        let size = rng.gen_range(1..=a.max_size);
        let words: Vec<FreeWord> = (0..size)
            .map(|_| {
                let len = rng.gen_range(0..=a.max_len);
                random_word(&mut rng, a.rank, len)
            })
            .collect();
        let set = GeneratingSet::new(&tree, words)?;
        let formula = tree_formula_l(&tree, &set);
        let brute = brute_force(&tree, set.elements())?;
        let descent = minimal_displacement(&tree, &set, &MinimizeOptions::default()).value;
        agree += usize::from(formula == brute);
        descent_agree += usize::from(descent == formula);
        series.push(row![trial, set.len(), formula, brute, descent]);
    }
    let n = a.trials as f64;
    report.checks.push(CheckResult::new("formula-equals-brute-force", agree as f64 - n, 0.0));
    report.checks.push(CheckResult::new("descent-equals-formula", descent_agree as f64 - n, 0.0));
    report.note("agreements", agree);
    report.note("trials", a.trials);
    Ok(vec![series])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BochiH2Args {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Bound on the integer entries of the random matrices.
    #[arg(long, default_value_t = 3)]
    pub max_entry: i64,
}

fn bochi_h2(a: &BochiH2Args, seed: u64, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("trials", a.trials, 1, 10_000)?;
    check_range("max-entry", a.max_entry, 2, 50)?;
    let opts = MinimizeOptions::default();
    let mut series = Series::new("bochi_h2", &["trial", "l", "lambda_2", "gap", "gap_over_delta"]);
    let (mut min_gap, mut max_gap) = (f64::INFINITY, f64::NEG_INFINITY);
    for (trial, set) in hyperbolic_pairs(a.trials, a.max_entry, seed).iter().enumerate() {
        let l = h2_minimal_displacement(set, &opts).value;
        let lam2 = lambda_k(&HyperbolicPlane, set, 2)?;
        let gap = l - lam2;
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
        series.push(row![trial, l, lam2, gap, gap / H2_DELTA]);
    }
    report.checks.push(CheckResult::new("gap-nonnegative", min_gap, COMPARE));
    report.note("delta", H2_DELTA);
    report.note("min_gap", min_gap);
    report.note("max_gap", max_gap);
    report.note("max_gap_over_delta", max_gap / H2_DELTA);
    Ok(vec![series])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AlmostEllipticArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.02)]
    pub x1: f64,
    #[arg(long, default_value_t = 0.02)]
    pub x2: f64,
    /// Number of halvings of `eps` in the trend series.
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
}

fn almost_elliptic(a: &AlmostEllipticArgs, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("steps", a.steps, 0, 30)?;
    let opts = MinimizeOptions::default();
    let mut series = Series::new(
        "almost_elliptic",
        &["eps", "displacement_at_i", "l", "lambda_2", "gap", "gap_over_eps"],
    );
    let mut worst_at_i = 0.0f64;
    let mut worst_gap = 0.0f64;
    let mut max_lambda2 = 0.0f64;
    for j in 0..=a.steps {
        let eps = a.eps / f64::from(1u32 << j.min(31));
        let pair = almost_elliptic_pair(eps, a.x1, a.x2)?;
        let at_i = pair.summary().displacement_at_i;
        let lam2 = lambda_k(&HyperbolicPlane, &pair.set, 2)?;
        let l = h2_minimal_displacement(&pair.set, &opts).value;
        series.push(row![eps, at_i, l, lam2, l - lam2, (l - lam2) / eps]);
        if j == 0 {
            report.note("displacement_at_i", at_i);
            report.note("l", l);
            report.note("lambda_2", lam2);
            report.note("disk_gap", pair.summary().disk_gap);
        }
        worst_at_i = worst_at_i.max((at_i - eps).abs());
        worst_gap = worst_gap.max((l - lam2 - eps).abs());
        max_lambda2 = max_lambda2.max(lam2);
    }
    report.checks.push(CheckResult::new("displacement-at-i-equals-eps", 1e-9 - worst_at_i, 0.0));
    report.checks.push(CheckResult::new("lambda-2-vanishes", -max_lambda2, 0.0));
    report.checks.push(CheckResult::new("gap-equals-eps", 1e-6 - worst_gap, 0.0));
    Ok(vec![series])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BassArgs {
    /// Length of the reduced words checked for an eigenvalue 1.
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Largest `n` of the greedy escape series.
    #[arg(long, default_value_t = 2000)]
    pub nmax: usize,
}

fn bass_r4(a: &BassArgs, seed: u64, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("nmax", a.nmax, 1, 100_000)?;
    let (set, bass) = bass_example(a.depth, seed)?;
    let lam = lambda_k(&EuclideanSpace { dim: 4 }, &set, a.depth)?;
    report.checks.push(CheckResult::new("short-words-fix-points", bass.eigenvalue_margin - 1e-6, 0.0));
    report.checks.push(CheckResult::new("lambda-k-vanishes", -lam, COMPARE));
    report.checks.push(CheckResult::new("no-common-fixed-point", bass.sine_bound, 0.0));
    report.checks.push(CheckResult::new("linear-escape", bass.greedy_lower_bound - 1e-3, 0.0));
    report.note("lambda_k", lam);
    report.note("bass", &bass);

    let x0 = DVector::from_column_slice(&bass.centers[0]);
    let mut series = Series::new("bass_r4", &["n", "greedy_lower_bound"]);
    let mut n = 1;
    while n <= a.nmax {
        series.push(row![n, greedy_escape_lower_bound(&set, &x0, n)?]);
        n = if n == a.nmax { n + 1 } else { (n * 2).min(a.nmax) };
    }
    Ok(vec![series])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JsrPreset {
    /// `[[1, 1], [0, 1]]` and `[[1, 0], [1, 1]]`, JSR the golden ratio.
    BinaryPair,
    /// A single rotation by a quarter turn, JSR 1.
    Rotation,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JsrArgs {
    #[arg(long, value_enum, default_value_t = JsrPreset::BinaryPair)]
    pub preset: JsrPreset,
    /// A pd-matrix document to use instead of the preset.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    pub nmax: usize,
    #[arg(long, default_value_t = 0.02)]
    pub max_width: f64,
}

fn jsr_set(a: &JsrArgs) -> Result<GeneratingSet<MatrixIsometry>, CliError> {
    if let Some(path) = &a.input {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return match parse_input(&text, Some(InputGeometry::PdMatrix))? {
            ParsedInput::PdRiemannian(_, s) | ParsedInput::PdFinsler(_, s) => Ok(s),
            _ => unreachable!("geometry checked by the parser"),
        };
    }
    let mats = match a.preset {
        JsrPreset::BinaryPair => vec![
            MatrixIsometry::from_ints(2, &[1, 1, 0, 1])?,
            MatrixIsometry::from_ints(2, &[1, 0, 1, 1])?,
        ],
        JsrPreset::Rotation => vec![MatrixIsometry::from_ints(2, &[0, -1, 1, 0])?],
    };
    Ok(GeneratingSet::new(&PdSpace { dim: 2 }, mats)?)
}

fn jsr(a: &JsrArgs, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("nmax", a.nmax, 1, 62)?;
    let set = jsr_set(a)?;
    let b = jsr_bracket(&set, a.nmax)?;
    let width = b.bracket.upper - b.bracket.lower;
    report.checks.push(CheckResult::new("bracket-ordered", width, COMPARE));
    report.checks.push(CheckResult::new("bracket-width", a.max_width - width, 0.0));
    report.note("bracket", &b.bracket);
    report.note("width", width);
    let mut series = Series::new("jsr", &["length", "words", "spectral", "norm", "lower", "upper"]);
    for l in &b.levels {
        let t = b.truncated(l.length);
        series.push(row![l.length, l.words, l.spectral, l.norm, t.lower, t.upper]);
    }
    Ok(vec![series])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HellyArgs {
    #[arg(long, default_value_t = 100)]
    pub graphs: usize,
    #[arg(long, default_value_t = 40)]
    pub max_n: usize,
    /// Multiplier of the slim-triangle constant bounding the radius.
    #[arg(long, default_value_t = 28.0)]
    pub factor: f64,
}

fn helly(a: &HellyArgs, seed: u64, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("graphs", a.graphs, 1, 10_000)?;
    check_range("max-n", a.max_n, 4, isodisp::hyperbolicity::MAX_VERTICES)?;
    let mut series = Series::new("helly", &["graph", "vertices", "edges", "delta", "family", "radius"]);
    let (mut worst, mut tree_worst) = (f64::INFINITY, 0.0f64);
    for (i, g) in graphs(a.graphs, a.max_n, seed).iter().enumerate() {
        let delta = midpoint_slim_delta(g)?;
        let mut families = vec![("triangle", triangle_hulls(g)?)];
        if let Ok(h) = random_meeting_hulls(g, 4, 3, seed.wrapping_add(1000 + i as u64), 200) {
            families.push(("random", h));
        }
        for (name, f) in families {
            let radius = f64::from(helly_min_radius(g, &f)?);
            worst = worst.min(a.factor * delta - radius);
            if g.is_tree() {
                tree_worst = tree_worst.max(radius);
            }
            series.push(row![i, g.n(), g.edge_count(), delta, name, radius]);
        }
    }
    report.checks.push(CheckResult::new("radius-within-factor-delta", worst, 0.0));
    report.checks.push(CheckResult::new("trees-have-radius-zero", -tree_worst, 0.0));
    Ok(vec![series])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PingpongGeometry {
    Tree,
    H2,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PingpongArgs {
    #[arg(long, value_enum, default_value_t = PingpongGeometry::Tree)]
    pub geometry: PingpongGeometry,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Translation length threshold in units of delta; values below the
    /// default are reported as experimental.
    #[arg(long, default_value_t = PINGPONG_DELTA_FACTOR)]
    pub delta_factor: f64,
    /// Entry bound for random SL2(Z) pairs in the plane.
    #[arg(long, default_value_t = 5)]
    pub max_entry: i64,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Certified => "certified",
        Verdict::Refuted => "refuted",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn pingpong(a: &PingpongArgs, seed: u64, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("trials", a.trials, 1, 10_000)?;
    if !(a.delta_factor > 0.0 && a.delta_factor.is_finite()) {
        return Err(Error::Parameter("--delta-factor must be positive".into()).into());
    }
    let mut series = Series::new("pingpong", &["trial", "best_translation_length", "threshold", "verdict"]);
    let (mut above, mut certified, mut skipped) = (0usize, 0usize, 0usize);
    let mut experimental = false;
    match a.geometry {
        PingpongGeometry::Tree => {
            let opts = SemigroupOptions {
                delta_factor: a.delta_factor,
                ..SemigroupOptions::tree()
            };
            for (trial, (tree, set)) in free_sets(a.trials, 4, 6, seed).iter().enumerate() {
                let e = set.elements();
                let elementary = e.iter().all(|x| e.iter().all(|y| x.mul(y) == y.mul(x)));
                if elementary {
                    skipped += 1;
                    continue;
                }
                let r = semigroup_from_displacement_tree(tree, set, &opts)?;
                experimental = r.experimental_threshold;
                above += usize::from(r.shortfall.is_none());
                certified += usize::from(r.certificate.is_certified());
                series.push(row![trial, r.best_translation_length, r.threshold, verdict_name(r.certificate.verdict)]);
            }
        }
        PingpongGeometry::H2 => {
            check_range("max-entry", a.max_entry, 2, 50)?;
            let opts = SemigroupOptions {
                delta_factor: a.delta_factor,
                ..SemigroupOptions::h2()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for trial in 0..a.trials {
                let pair = [(); 2].map(|_| {
                    let [p, q, r, s] = random_sl2z(&mut rng, a.max_entry);
                    ExactMoebius::from_ints(p, q, r, s)
                });
                let [g, h] = pair;
                let r = semigroup_from_displacement_h2(&[g?, h?], &opts)?;
                experimental = r.experimental_threshold;
                above += usize::from(r.shortfall.is_none());
                certified += usize::from(r.certificate.is_certified());
                series.push(row![trial, r.best_translation_length, r.threshold, verdict_name(r.certificate.verdict)]);
            }
        }
    }
    // Above the proven threshold a certificate must be found.
    let slack = if experimental { 0.0 } else { certified.min(above) as f64 - above as f64 };
    report.checks.push(CheckResult::new("threshold-yields-certificate", slack, 0.0));
    report.note("experimental_threshold", experimental);
    report.note("tested", a.trials - skipped);
    report.note("elementary_skipped", skipped);
    report.note("above_threshold", above);
    report.note("certified", certified);
    Ok(vec![series])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Words of the set, e.g. `--words 1,x,X,y,Y`; `1` is the identity.
    #[arg(long, value_delimiter = ',', default_value = "1,x,X,y,Y")]
    pub words: Vec<String>,
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
}

fn entropy(a: &EntropyArgs, report: &mut RunReport) -> Result<Vec<Series>, CliError> {
    check_range("nmax", a.nmax, 1, 64)?;
    let tree = FreeTree::new(a.rank)?;
    let words = a
        .words
        .iter()
        .map(|w| FreeWord::parse(if w == "1" { "" } else { w }))
        .collect::<Result<Vec<_>, _>>()?;
    for w in &words {
        if w.rank_used() > a.rank {
            return Err(Error::Input(format!("word {w} uses more than {} generators", a.rank)).into());
        }
    }
    let set = GeneratingSet::new(&tree, words)?;
    let ladder = power_ladder(&tree, &set, a.nmax, WORD_BUDGET)?;
    let sizes: Vec<usize> = ladder.iter().map(GeneratingSet::len).collect();
    let mut series = Series::new("entropy", &["n", "size", "h"]);
    for (i, &s) in sizes.iter().enumerate() {
        series.push(row![i + 1, s, (s as f64).ln() / (i + 1) as f64]);
    }
    // |S^(m+n)| <= |S^m| |S^n|.
    let mut worst = f64::INFINITY;
    for m in 1..=sizes.len() {
        for n in 1..=sizes.len() - m {
            if m + n <= sizes.len() {
                let lhs = (sizes[m + n - 1] as f64).ln();
                worst = worst.min((sizes[m - 1] as f64).ln() + (sizes[n - 1] as f64).ln() - lhs);
            }
        }
    }
    if worst.is_finite() {
        report.checks.push(CheckResult::new("submultiplicative-growth", worst, COMPARE));
    }
    report.note("sizes", &sizes);
    report.note("h_last", (sizes[sizes.len() - 1] as f64).ln() / sizes.len() as f64);
    report.note("log_3", 3f64.ln());
    Ok(vec![series])
}
