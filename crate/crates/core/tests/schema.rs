use proptest::prelude::*;

use isodisp::corpus::{euclidean_sets, free_sets, h2_sets, padic_sets, pd_sets};
use isodisp::matrix::pd_translation_length;
use isodisp::schema::{
    euclidean_document, h2_document, padic_document, parse_input, pd_document, tree_free_document,
    InputGeometry, ParsedInput, PdMetric,
};
use isodisp::tree::{tree_formula_l, FreeTree, FreeWord};
use isodisp::{power_set, Error, GeneratingSet, MinimizeOptions};

fn reparse<T: serde::Serialize>(doc: &T) -> ParsedInput {
    parse_input(&serde_json::to_string_pretty(doc).unwrap(), None).unwrap()
}

#[test]
fn documents_round_trip() {
    for (tree, s) in free_sets(20, 4, 6, 1) {
        let ParsedInput::TreeFree(t, back) = reparse(&tree_free_document(tree.rank(), &s)) else { panic!() };
        assert_eq!(t.rank(), tree.rank());
        assert_eq!(back.elements(), s.elements());
    }
    for (tree, s) in padic_sets(10, 2) {
        let ParsedInput::TreePadic(_, back) = reparse(&padic_document(tree.prime(), &s)) else { panic!() };
        assert_eq!(back.elements(), s.elements());
    }
    for s in h2_sets(10, 3) {
        let ParsedInput::H2(_, back) = reparse(&h2_document(&s)) else { panic!() };
        for (a, b) in back.elements().iter().zip(s.elements()) {
            // Entries are renormalised to determinant 1 on parsing.
            for (x, y) in a.entries().iter().zip(b.entries()) {
                assert!((x - y).abs() <= 1e-14 * y.abs().max(1.0));
            }
        }
    }
    for (_, s) in euclidean_sets(10, 4) {
        let ParsedInput::Euclidean(_, back) = reparse(&euclidean_document(&s)) else { panic!() };
        assert_eq!(back.len(), s.len());
    }
    for (_, s) in pd_sets(10, 5) {
        let ParsedInput::PdFinsler(_, back) = reparse(&pd_document(PdMetric::Finsler, &s)) else { panic!() };
        assert_eq!(back.len(), s.len());
    }
}

#[test]
fn duplicates_are_dropped_by_value() {
    let text = r#"{"geometry": "tree-free", "version": 1, "rank": 2, "words": ["xy", "xYyy", "x"]}"#;
    let parsed = parse_input(text, None).unwrap();
    assert_eq!(parsed.len(), 2);
    let text = r#"{"geometry": "h2", "version": 1, "matrices": [[[2, 0], [0, 0.5]], [[-2, 0], [0, -0.5]]]}"#;
    assert_eq!(parse_input(text, None).unwrap().len(), 1);
}

#[test]
fn errors_carry_positions_and_kinds() {
    let broken = "{\"geometry\": \"h2\",\n \"version\": 1,\n \"matrices\": [[[1, 0], [0, 1]]\n}";
    match parse_input(broken, None) {
        Err(Error::Input(msg)) => assert!(msg.contains("line 4"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let text = r#"{"geometry": "h2", "version": 1, "matrices": [[[1, 0], [0, 1]]]}"#;
    assert!(matches!(
        parse_input(text, Some(InputGeometry::Euclidean)),
        Err(Error::GeometryMismatch { .. })
    ));
    let future = r#"{"geometry": "h2", "version": 7, "matrices": [[[1, 0], [0, 1]]]}"#;
    assert!(matches!(parse_input(future, None), Err(Error::Input(_))));
}

#[test]
fn report_for_parsed_input() {
    let text = r#"{"geometry": "pd-matrix", "version": 1, "matrices": [{"mode": "exact-int", "rows": [[2, 1], [1, 1]]}]}"#;
    let parsed = parse_input(text, Some(InputGeometry::PdMatrix)).unwrap();
    let report = parsed.report(3, &MinimizeOptions::default()).unwrap();
    let ParsedInput::PdRiemannian(_, s) = &parsed else { panic!() };
    // A single symmetric positive matrix is displaced least on its axis
    // through the identity, by its translation length.
    let ell = pd_translation_length(&s.elements()[0]);
    assert!((report.l_upper - ell).abs() < 1e-6);
    assert!((report.lambda - ell).abs() < 1e-9);
    assert!(report.ell_bracket.upper - report.ell_bracket.lower < 1e-6);
    assert!(report.all_passed());
    let json = serde_json::to_value(&report).unwrap();
    assert!(json.get("lambda_infinity_lower_bound").is_some());
}

fn word(rank: i8) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..=4).prop_map(|ls| {
        FreeWord::from_letters(&ls.into_iter().map(|(l, i)| if i { -l } else { l }).collect::<Vec<_>>()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn doubling_never_increases_normalised_l(words in prop::collection::vec(word(2), 1..=3), n in 1usize..=2) {
        let tree = FreeTree::new(2).unwrap();
        let s = GeneratingSet::new(&tree, words).unwrap();
        let sn = power_set(&tree, &s, n).unwrap();
        let s2n = power_set(&tree, &s, 2 * n).unwrap();
        prop_assert!(tree_formula_l(&tree, &s2n) <= 2.0 * tree_formula_l(&tree, &sn));
    }
}
