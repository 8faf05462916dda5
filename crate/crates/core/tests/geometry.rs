use std::f64::consts::{PI, SQRT_2};

use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;

use isodisp::corpus::{h2_sets, hyperbolic_pairs, pd_sets, sl2z_pairs};
use isodisp::displacement::chain_slacks;
use isodisp::euclidean::{
    common_fixed_point, euclid_minimal_displacement, fixed_set, greedy_escape_lower_bound,
    EuclideanIsometry, EuclideanSpace,
};
use isodisp::hyperbolic::{
    almost_elliptic_pair, classify, commutator_subgroup_words, ell_h2, h2_distance,
    h2_minimal_displacement, Classification, HPoint, HyperbolicPlane, Moebius,
};
use isodisp::matrix::{
    jsr_bracket, pd_distance, pd_minimal_displacement, pd_translation_length, pinf_distance,
    spectral_lambda, MatrixIsometry, PdFinsler, PdSpace, PosDefPoint,
};
use isodisp::{
    joint_displacement_at, lambda_k, minimal_displacement, power_set, GeneratingSet, Geometry,
    MinimizeOptions,
};

fn opts() -> MinimizeOptions {
    MinimizeOptions::default()
}

// ---------- hyperbolic plane ----------

#[test]
fn h2_distances() {
    let i = HPoint::i();
    assert_eq!(h2_distance(&i, &i), 0.0);
    assert_abs_diff_eq!(h2_distance(&i, &HPoint::new(0.0, 2f64.exp()).unwrap()), 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(
        h2_distance(&i, &HPoint::new(1.0, 1.0).unwrap()),
        1.5f64.acosh(),
        epsilon = 1e-12
    );
}

#[test]
fn h2_classification_and_lengths() {
    let rot = Moebius::rotation(&HPoint::i(), 2.0 * PI / 3.0);
    assert_eq!(classify(&rot), Classification::Elliptic);
    assert_eq!(ell_h2(&rot), 0.0);
    assert_eq!(classify(&Moebius::new(1.0, 1.0, 0.0, 1.0).unwrap()), Classification::Parabolic);
    let d = Moebius::diag(1f64.exp()).unwrap();
    assert_eq!(classify(&d), Classification::Hyperbolic);
    assert_abs_diff_eq!(ell_h2(&d), 2.0, epsilon = 1e-12);
    let cat = Moebius::new(2.0, 1.0, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(ell_h2(&cat), 2.0 * 1.5f64.acosh(), epsilon = 1e-12);
    // Orbit oracle: i lies on the axis (the circle |z - 1/2| = sqrt(5)/2),
    // so d(i, g^n i) = n l(g).
    let mut g = Moebius::identity();
    for _ in 0..12 {
        g = g.mul(&cat);
    }
    let orbit = h2_distance(&HPoint::i(), &g.apply(&HPoint::i())) / 12.0;
    assert_abs_diff_eq!(orbit, ell_h2(&cat), epsilon = 1e-8);
}

#[test]
fn h2_minimal_displacement_examples() {
    let h = HyperbolicPlane;
    let rot = GeneratingSet::new(&h, vec![Moebius::rotation(&HPoint::i(), 1.0)]).unwrap();
    let m = h2_minimal_displacement(&rot, &opts());
    assert!(m.value <= 1e-9 && h2_distance(&m.point, &HPoint::i()) <= 1e-6);
    let d = GeneratingSet::new(&h, vec![Moebius::diag(1f64.exp()).unwrap()]).unwrap();
    assert_abs_diff_eq!(joint_displacement_at(&h, &d, &HPoint::i()).unwrap(), 2.0, epsilon = 1e-12);
    let pair = almost_elliptic_pair(1e-3, 0.05, 0.05).unwrap();
    assert_abs_diff_eq!(pair.summary().displacement_at_i, 1e-3, epsilon = 1e-9);
    assert_eq!(lambda_k(&h, &pair.set, 2).unwrap(), 0.0);
}

#[test]
fn h2_single_hyperbolic_attains_translation_length() {
    for set in hyperbolic_pairs(50, 3, 31) {
        let g = set.elements()[0];
        let single = GeneratingSet::new(&HyperbolicPlane, vec![g]).unwrap();
        let m = h2_minimal_displacement(&single, &opts());
        assert!((m.value - ell_h2(&g)).abs() <= 1e-5, "{g:?}: {} vs {}", m.value, ell_h2(&g));
    }
}

#[test]
fn h2_symmetric_squares_within_two_delta() {
    let h = HyperbolicPlane;
    for set in h2_sets(30, 32) {
        let s = set.symmetrized(&h);
        let b = isodisp::asymptotic_bracket(&h, &s, 2, &opts()).unwrap();
        let half_l2 = minimal_displacement(&h, &power_set(&h, &s, 2).unwrap(), &opts()).value / 2.0;
        assert!(b.lower <= half_l2 + 1e-9);
        assert!(half_l2 <= b.upper + 4.0 + 1e-9);
    }
}

#[test]
fn almost_elliptic_commutators_shrink() {
    // l(w)/eps for fixed commutator words decreases as eps does.
    let words = commutator_subgroup_words(4);
    let ratio = |eps: f64| {
        let pair = almost_elliptic_pair(eps, 0.05, 0.05).unwrap();
        words.iter().map(|w| ell_h2(&pair.evaluate(w)) / eps).fold(0.0, f64::max)
    };
    let r: Vec<f64> = [1e-2, 1e-3, 1e-4].map(ratio).to_vec();
    assert!(r[0] >= r[1] && r[1] >= r[2], "{r:?}");
    assert!(r[2] < 1.0, "{r:?}");
}

// ---------- Euclidean space ----------

#[test]
fn euclidean_fixed_sets() {
    let rot = EuclideanIsometry::planar_rotation(1.0, [0.0, 0.0]);
    assert_eq!(fixed_set(&rot).dimension(), Some(0));
    let t = EuclideanIsometry::translation(DVector::from_vec(vec![1.0, 0.0])).unwrap();
    assert!(fixed_set(&t).is_empty());
    let half = EuclideanIsometry::planar_rotation(PI, [1.0, 0.0]);
    let base = fixed_set(&half).base.unwrap();
    assert_abs_diff_eq!(base[0], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(base[1], 0.0, epsilon = 1e-12);
}

#[test]
fn euclidean_examples() {
    let plane = EuclideanSpace { dim: 2 };
    let c = [0.5, -2.0];
    let about_c = GeneratingSet::new(
        &plane,
        vec![EuclideanIsometry::planar_rotation(0.7, c), EuclideanIsometry::planar_rotation(2.1, c)],
    )
    .unwrap();
    let p = common_fixed_point(&about_c).unwrap();
    assert_abs_diff_eq!((p - DVector::from_vec(c.to_vec())).norm(), 0.0, epsilon = 1e-9);
    assert!(euclid_minimal_displacement(&about_c, &opts()).value <= 1e-9);

    let e1 = EuclideanIsometry::translation(DVector::from_vec(vec![1.0, 0.0])).unwrap();
    let shift = GeneratingSet::new(&plane, vec![e1.clone()]).unwrap();
    assert!(common_fixed_point(&shift).is_none());
    assert_abs_diff_eq!(euclid_minimal_displacement(&shift, &opts()).value, 1.0, epsilon = 1e-9);
    let both = GeneratingSet::new(&plane, vec![e1.clone(), e1.inverse()]).unwrap();
    let x0 = DVector::zeros(2);
    assert_abs_diff_eq!(greedy_escape_lower_bound(&both, &x0, 100).unwrap(), 1.0, epsilon = 1e-12);

    // Half-turns about (+-1, 0) each move the origin by 2, and nothing does better.
    let halves = GeneratingSet::new(
        &plane,
        vec![
            EuclideanIsometry::planar_rotation(PI, [1.0, 0.0]),
            EuclideanIsometry::planar_rotation(PI, [-1.0, 0.0]),
        ],
    )
    .unwrap();
    assert_abs_diff_eq!(euclid_minimal_displacement(&halves, &opts()).value, 2.0, epsilon = 1e-6);
    let rotation = GeneratingSet::new(&plane, vec![EuclideanIsometry::planar_rotation(1.0, c)]).unwrap();
    assert_eq!(lambda_k(&plane, &rotation, 4).unwrap(), 0.0);
}

fn euclid_strategy() -> impl Strategy<Value = Vec<EuclideanIsometry>> {
    let iso = (0.0..2.0 * PI, -2.0..2.0f64, -2.0..2.0f64, any::<bool>()).prop_map(|(a, x, y, t)| {
        if t {
            EuclideanIsometry::translation(DVector::from_vec(vec![x, y])).unwrap()
        } else {
            EuclideanIsometry::planar_rotation(a, [x, y])
        }
    });
    prop::collection::vec(iso, 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euclidean_growth_is_at_least_sqrt(isos in euclid_strategy()) {
        let plane = EuclideanSpace { dim: 2 };
        let s = GeneratingSet::new(&plane, isos).unwrap().symmetrized(&plane);
        let diff = euclid_minimal_displacement(&s.difference_set(&plane), &opts()).value;
        for n in [2usize, 4] {
            let ln = euclid_minimal_displacement(&power_set(&plane, &s, n).unwrap(), &opts()).value;
            prop_assert!(ln >= (n as f64).sqrt() / 2.0 * diff - 1e-6, "n {n}: {ln} vs {diff}");
        }
    }

    #[test]
    fn euclidean_axioms(isos in euclid_strategy(), x in prop::array::uniform2(-3.0..3.0f64), y in prop::array::uniform2(-3.0..3.0f64)) {
        let plane = EuclideanSpace { dim: 2 };
        let (x, y) = (DVector::from_vec(x.to_vec()), DVector::from_vec(y.to_vec()));
        let g = &isos[0];
        let h = isos.last().unwrap();
        prop_assert!((plane.distance(&g.apply(&x), &g.apply(&y)) - plane.distance(&x, &y)).abs() <= 1e-9);
        let gh = plane.compose(g, h);
        prop_assert!((gh.apply(&x) - g.apply(&h.apply(&x))).norm() <= 1e-9);
        prop_assert!((plane.translation_length(&plane.invert(g)) - plane.translation_length(g)).abs() <= 1e-9);
    }

    #[test]
    fn h2_axioms(
        entries in prop::array::uniform3(-3.0..3.0f64),
        p in (-2.0..2.0f64, 0.1..3.0f64),
        q in (-2.0..2.0f64, 0.1..3.0f64),
        r in (-2.0..2.0f64, 0.1..3.0f64),
    ) {
        let [a, b, c] = entries;
        prop_assume!(a.abs() > 0.2);
        let g = Moebius::new(a, b, c, (1.0 + b * c) / a).unwrap();
        let h = HyperbolicPlane;
        let [x, y, z] = [p, q, r].map(|(u, v)| HPoint::new(u, v).unwrap());
        let dxy = h.distance(&x, &y);
        prop_assert!((dxy - h.distance(&y, &x)).abs() <= 1e-9);
        prop_assert!(dxy <= h.distance(&x, &z) + h.distance(&z, &y) + 1e-9);
        prop_assert!((h.distance(&g.apply(&x), &g.apply(&y)) - dxy).abs() <= 1e-7 * (1.0 + dxy));
        prop_assert!((ell_h2(&g.inverse()) - ell_h2(&g)).abs() <= 1e-9);
        let g3 = g.mul(&g).mul(&g);
        prop_assert!((ell_h2(&g3) - 3.0 * ell_h2(&g)).abs() <= 1e-6 * (1.0 + ell_h2(&g3)));
    }
}

// ---------- symmetric space of SL_d(R) ----------

fn diag(entries: &[f64]) -> MatrixIsometry {
    MatrixIsometry::from_matrix(DMatrix::from_diagonal(&DVector::from_vec(entries.to_vec()))).unwrap()
}

fn point(g: &MatrixIsometry) -> PosDefPoint {
    PosDefPoint::identity(g.dim()).act(g)
}

#[test]
fn pd_distance_examples() {
    let id = PosDefPoint::identity(2);
    assert_eq!(pd_distance(&id, &id), 0.0);
    let g = diag(&[2f64.exp(), (-2f64).exp()]);
    assert_abs_diff_eq!(pd_distance(&id, &point(&g)), 2.0 * SQRT_2, epsilon = 1e-12);
    let h = diag(&[1f64.exp(), (-1f64).exp()]);
    assert_abs_diff_eq!(pinf_distance(&MatrixIsometry::identity(2), &h).unwrap(), 1.0, epsilon = 1e-12);
    assert_eq!(pinf_distance(&h, &h).unwrap(), 0.0);
}

#[test]
fn pd_translation_lengths() {
    let unip = MatrixIsometry::from_ints(2, &[1, 1, 0, 1]).unwrap();
    assert_eq!(pd_translation_length(&unip), 0.0);
    assert_eq!(spectral_lambda(&unip), 0.0);
    let h = diag(&[1f64.exp(), (-1f64).exp()]);
    assert_abs_diff_eq!(pd_translation_length(&h), SQRT_2, epsilon = 1e-12);
    assert_abs_diff_eq!(spectral_lambda(&h), 1.0, epsilon = 1e-12);
    let (s, c) = 0.3f64.sin_cos();
    let rot = MatrixIsometry::from_f64(2, &[c, -s, s, c]).unwrap();
    assert_abs_diff_eq!(spectral_lambda(&rot), 0.0, epsilon = 1e-12);
    let cat = MatrixIsometry::from_ints(2, &[2, 1, 1, 1]).unwrap();
    assert_abs_diff_eq!(spectral_lambda(&cat), ((3.0 + 5f64.sqrt()) / 2.0).ln(), epsilon = 1e-12);
}

#[test]
fn pd_minimal_displacement_examples() {
    let space = PdSpace { dim: 2 };
    let (s, c) = 0.4f64.sin_cos();
    let rots = GeneratingSet::new(&space, vec![MatrixIsometry::from_f64(2, &[c, -s, s, c]).unwrap()]).unwrap();
    assert!(pd_minimal_displacement(&rots, &opts()).unwrap().value <= 1e-9);
    let h = diag(&[1f64.exp(), (-1f64).exp()]);
    let single = GeneratingSet::new(&space, vec![h.clone()]).unwrap();
    let m = pd_minimal_displacement(&single, &opts()).unwrap();
    assert_abs_diff_eq!(m.value, SQRT_2, epsilon = 1e-6);
    assert_abs_diff_eq!(m.value, pd_translation_length(&h), epsilon = 1e-6);
    // Commuting diagonals diag(e^a, e^-a), diag(e^b, e^-b): along the flat
    // x = diag(e^t, e^-t) both displacements are constant, so L = max.
    let two = GeneratingSet::new(&space, vec![h, diag(&[0.5f64.exp(), (-0.5f64).exp()])]).unwrap();
    assert_abs_diff_eq!(pd_minimal_displacement(&two, &opts()).unwrap().value, SQRT_2, epsilon = 1e-6);
}

fn sym_sqrt(m: &DMatrix<f64>, power: f64) -> DMatrix<f64> {
    let e = SymmetricEigen::new(m.clone());
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|v| v.powf(power)));
    let out = &e.eigenvectors * d * e.eigenvectors.transpose();
    (&out + out.transpose()) * 0.5
}

/// Geodesic midpoint `b^{1/2} (b^{-1/2} c b^{-1/2})^{1/2} b^{1/2}`.
fn midpoint(b: &PosDefPoint, c: &PosDefPoint) -> PosDefPoint {
    let r = sym_sqrt(b.matrix(), 0.5);
    let ri = sym_sqrt(b.matrix(), -0.5);
    let inner = sym_sqrt(&(&ri * c.matrix() * &ri), 0.5);
    let m = &r * inner * &r;
    PosDefPoint::new((&m + m.transpose()) * 0.5).unwrap()
}

fn sl3_strategy() -> impl Strategy<Value = MatrixIsometry> {
    prop::collection::vec(-1.5..1.5f64, 9).prop_filter_map("singular", |v| {
        let m = DMatrix::from_row_slice(3, 3, &v);
        let det = m.determinant();
        (det > 0.1).then(|| MatrixIsometry::from_matrix(m / det.cbrt()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pd_cat0_inequality(a in sl3_strategy(), b in sl3_strategy(), c in sl3_strategy()) {
        let (a, b, c) = (point(&a), point(&b), point(&c));
        let m = midpoint(&b, &c);
        let lhs = pd_distance(&a, &m).powi(2);
        let rhs = 0.5 * pd_distance(&a, &b).powi(2) + 0.5 * pd_distance(&a, &c).powi(2)
            - 0.25 * pd_distance(&b, &c).powi(2);
        prop_assert!(rhs - lhs >= -1e-7, "slack {}", rhs - lhs);
    }

    #[test]
    fn pd_axioms(g in sl3_strategy(), h in sl3_strategy(), x in sl3_strategy(), y in sl3_strategy()) {
        let space = PdSpace { dim: 3 };
        let (x, y) = (point(&x), point(&y));
        let dxy = space.distance(&x, &y);
        prop_assert!((dxy - space.distance(&y, &x)).abs() <= 1e-8 * (1.0 + dxy));
        prop_assert!((space.distance(&space.apply(&g, &x), &space.apply(&g, &y)) - dxy).abs() <= 1e-7 * (1.0 + dxy));
        let gh = space.compose(&g, &h);
        let lhs = space.apply(&gh, &x);
        let rhs = space.apply(&g, &space.apply(&h, &x));
        prop_assert!(space.distance(&lhs, &rhs) <= 1e-7);
        let ell = pd_translation_length(&g);
        prop_assert!((pd_translation_length(&g.inverse()) - ell).abs() <= 1e-9 * (1.0 + ell));
        let g2 = g.mul(&g);
        prop_assert!((pd_translation_length(&g2) - 2.0 * ell).abs() <= 1e-8 * (1.0 + ell));
    }
}

#[test]
fn jsr_brackets_tighten_with_length() {
    for set in sl2z_pairs(30, 4, 33) {
        let j = jsr_bracket(&set, 10).unwrap();
        for n in 1..10 {
            let (a, b) = (j.truncated(n), j.truncated(n + 1));
            assert!(b.lower >= a.lower && b.upper <= a.upper);
        }
        assert!(j.bracket.lower <= j.bracket.upper + 1e-12);
    }
}

#[test]
fn jsr_examples() {
    let space = PdSpace { dim: 2 };
    let (s, c) = 0.9f64.sin_cos();
    let rots = GeneratingSet::new(
        &space,
        vec![
            MatrixIsometry::from_f64(2, &[c, -s, s, c]).unwrap(),
            MatrixIsometry::from_f64(2, &[c, s, -s, c]).unwrap(),
        ],
    )
    .unwrap();
    let b = jsr_bracket(&rots, 6).unwrap().bracket;
    assert_abs_diff_eq!(b.lower, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(b.upper, 1.0, epsilon = 1e-12);
    let cat = MatrixIsometry::from_ints(2, &[2, 1, 1, 1]).unwrap();
    let single = GeneratingSet::new(&space, vec![cat.clone()]).unwrap();
    let rho = cat.spectral_radius();
    let short = jsr_bracket(&single, 2).unwrap().bracket;
    let long = jsr_bracket(&single, 20).unwrap().bracket;
    assert!(long.contains(rho, 1e-12) && long.width() < short.width());
    let pair = GeneratingSet::new(
        &space,
        vec![
            MatrixIsometry::from_ints(2, &[1, 1, 0, 1]).unwrap(),
            MatrixIsometry::from_ints(2, &[1, 0, 1, 1]).unwrap(),
        ],
    )
    .unwrap();
    assert_eq!(power_set(&space, &pair, 2).unwrap().len(), 4);
}

#[test]
fn finsler_chain_bounds_log_jsr() {
    for (space, set) in pd_sets(20, 34) {
        let finsler = PdFinsler { dim: space.dim };
        let set = GeneratingSet::new(&finsler, set.elements().to_vec()).unwrap();
        let log_r = jsr_bracket(&set, 6).unwrap().bracket.lower.ln();
        let c = chain_slacks(&finsler, &set, 2, &opts()).unwrap();
        assert!(log_r <= c.l_upper + 1e-9, "{log_r} > {}", c.l_upper);
    }
}
