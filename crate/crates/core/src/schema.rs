//! The JSON input schema shared by every geometry.
//!
//! Every document carries a `"geometry"` discriminator and a mandatory
//! `"version"`; the remaining fields depend on the geometry:
//!
//! ```json
//! {"geometry": "tree-free", "version": 1, "rank": 2, "words": ["x", "yxY"]}
//! {"geometry": "tree-padic", "version": 1, "prime": 3, "matrices": [[["1", "1/3"], ["0", "1"]]]}
//! {"geometry": "h2", "version": 1, "matrices": [[[2, 0], [0, 0.5]]]}
//! {"geometry": "euclidean", "version": 1, "isometries": [{"R": [[1, 0], [0, 1]], "t": [1, 0]}]}
//! {"geometry": "pd-matrix", "version": 1, "metric": "riemannian",
//!  "matrices": [{"mode": "exact-int", "rows": [[1, 1], [0, 1]]}]}
//! ```
//!
//! Documents are parsed twice, first for the header and then into the
//! geometry's own record, so that diagnostics keep their line and column.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::displacement::{displacement_report, DisplacementReport, GeneratingSet, GeometryTag, MinimizeOptions};
use crate::error::{Error, Result};
use crate::euclidean::{EuclideanIsometry, EuclideanRecord, EuclideanSpace};
use crate::exact::parse_rational;
use crate::hyperbolic::{HyperbolicPlane, Moebius};
use crate::matrix::{MatrixIsometry, MatrixRecord, PdFinsler, PdSpace};
use crate::tree::{FreeTree, FreeWord, PadicMatrix, PadicTree};

pub const SCHEMA_VERSION: u32 = 1;

/// Values of the `"geometry"` field; `pd-matrix` covers both metrics on `P_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputGeometry {
    TreeFree,
    TreePadic,
    H2,
    Euclidean,
    PdMatrix,
}

impl InputGeometry {
    pub fn name(self) -> &'static str {
        match self {
            InputGeometry::TreeFree => "tree-free",
            InputGeometry::TreePadic => "tree-padic",
            InputGeometry::H2 => "h2",
            InputGeometry::Euclidean => "euclidean",
            InputGeometry::PdMatrix => "pd-matrix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdMetric {
    #[default]
    Riemannian,
    Finsler,
}

#[derive(Deserialize)]
struct Header {
    geometry: InputGeometry,
    version: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFreeInput {
    pub geometry: InputGeometry,
    pub version: u32,
    pub rank: usize,
    pub words: Vec<String>,
}

/// Entries are rational strings such as `"-2/9"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreePadicInput {
    pub geometry: InputGeometry,
    pub version: u32,
    pub prime: u64,
    pub matrices: Vec<[[String; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Input {
    pub geometry: InputGeometry,
    pub version: u32,
    pub matrices: Vec<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EuclideanInput {
    pub geometry: InputGeometry,
    pub version: u32,
    pub isometries: Vec<EuclideanRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdInput {
    pub geometry: InputGeometry,
    pub version: u32,
    #[serde(default)]
    pub metric: PdMetric,
    pub matrices: Vec<MatrixRecord>,
}

/// A validated generating set together with its geometry.
#[derive(Debug, Clone)]
pub enum ParsedInput {
    TreeFree(FreeTree, GeneratingSet<FreeWord>),
    TreePadic(PadicTree, GeneratingSet<PadicMatrix>),
    H2(HyperbolicPlane, GeneratingSet<Moebius>),
    Euclidean(EuclideanSpace, GeneratingSet<EuclideanIsometry>),
    PdRiemannian(PdSpace, GeneratingSet<MatrixIsometry>),
    PdFinsler(PdFinsler, GeneratingSet<MatrixIsometry>),
}

impl ParsedInput {
    pub fn tag(&self) -> GeometryTag {
        match self {
            ParsedInput::TreeFree(..) => GeometryTag::TreeFree,
            ParsedInput::TreePadic(..) => GeometryTag::TreePadic,
            ParsedInput::H2(..) => GeometryTag::H2,
            ParsedInput::Euclidean(..) => GeometryTag::Euclidean,
            ParsedInput::PdRiemannian(..) => GeometryTag::PdRiemannian,
            ParsedInput::PdFinsler(..) => GeometryTag::PdFinsler,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ParsedInput::TreeFree(_, s) => s.len(),
            ParsedInput::TreePadic(_, s) => s.len(),
            ParsedInput::H2(_, s) => s.len(),
            ParsedInput::Euclidean(_, s) => s.len(),
            ParsedInput::PdRiemannian(_, s) | ParsedInput::PdFinsler(_, s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Full displacement report with powers up to `k`.
    pub fn report(&self, k: usize, opts: &MinimizeOptions) -> Result<DisplacementReport> {
        match self {
            ParsedInput::TreeFree(g, s) => displacement_report(g, s, k, opts),
            ParsedInput::TreePadic(g, s) => displacement_report(g, s, k, opts),
            ParsedInput::H2(g, s) => displacement_report(g, s, k, opts),
            ParsedInput::Euclidean(g, s) => displacement_report(g, s, k, opts),
            ParsedInput::PdRiemannian(g, s) => displacement_report(g, s, k, opts),
            ParsedInput::PdFinsler(g, s) => displacement_report(g, s, k, opts),
        }
    }
}

fn located(e: serde_json::Error) -> Error {
    Error::Input(format!("line {} column {}: {e}", e.line(), e.column()))
}

fn parse_as<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(located)
}

fn element_error(i: usize, e: Error) -> Error {
    Error::Input(format!("element {i}: {e}"))
}

/// Parses and validates a document. When `expected` is given the document's
/// `"geometry"` must agree with it.
pub fn parse_input(text: &str, expected: Option<InputGeometry>) -> Result<ParsedInput> {
    let header: Header = parse_as(text)?;
    if header.version != SCHEMA_VERSION {
        return Err(Error::Input(format!(
            "unsupported schema version {} (this build reads version {SCHEMA_VERSION})",
            header.version
        )));
    }
    if let Some(exp) = expected {
        if exp != header.geometry {
            return Err(Error::GeometryMismatch {
                expected: exp.name().into(),
                found: header.geometry.name().into(),
            });
        }
    }
    match header.geometry {
        InputGeometry::TreeFree => {
            let input: TreeFreeInput = parse_as(text)?;
            let tree = FreeTree::new(input.rank)?;
            let words = input
                .words
                .iter()
                .enumerate()
                .map(|(i, w)| FreeWord::parse(w).map_err(|e| element_error(i, e)))
                .collect::<Result<Vec<_>>>()?;
            if let Some(w) = words.iter().find(|w| w.rank_used() > input.rank) {
                return Err(Error::Input(format!("word {w} uses a letter beyond rank {}", input.rank)));
            }
            Ok(ParsedInput::TreeFree(tree, GeneratingSet::new(&tree, words)?))
        }
        InputGeometry::TreePadic => {
            let input: TreePadicInput = parse_as(text)?;
            let tree = PadicTree::new(input.prime)?;
            let mats = input
                .matrices
                .iter()
                .enumerate()
                .map(|(i, [[a, b], [c, d]])| {
                    let e = [a, b, c, d].map(|s| parse_rational(s));
                    let [a, b, c, d] = e;
                    PadicMatrix::new([a?, b?, c?, d?]).map_err(|e| element_error(i, e))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ParsedInput::TreePadic(tree, GeneratingSet::new(&tree, mats)?))
        }
        InputGeometry::H2 => {
            let input: H2Input = parse_as(text)?;
            let mats = input
                .matrices
                .iter()
                .enumerate()
                .map(|(i, [[a, b], [c, d]])| {
                    let det = a * d - b * c;
                    if (det - 1.0).abs() > 1e-9 {
                        return Err(element_error(
                            i,
                            Error::Input(format!("determinant {det} is not 1")),
                        ));
                    }
                    Moebius::normalized(*a, *b, *c, *d).map_err(|e| element_error(i, e))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ParsedInput::H2(HyperbolicPlane, GeneratingSet::new(&HyperbolicPlane, mats)?))
        }
        InputGeometry::Euclidean => {
            let input: EuclideanInput = parse_as(text)?;
            let isos = input
                .isometries
                .iter()
                .enumerate()
                .map(|(i, r)| EuclideanIsometry::from_record(r).map_err(|e| element_error(i, e)))
                .collect::<Result<Vec<_>>>()?;
            let dim = isos.first().map_or(0, EuclideanIsometry::dim);
            let space = EuclideanSpace { dim };
            Ok(ParsedInput::Euclidean(space, GeneratingSet::new(&space, isos)?))
        }
        InputGeometry::PdMatrix => {
            let input: PdInput = parse_as(text)?;
            let mats = input
                .matrices
                .iter()
                .enumerate()
                .map(|(i, r)| MatrixIsometry::from_record(r).map_err(|e| element_error(i, e)))
                .collect::<Result<Vec<_>>>()?;
            let dim = mats.first().map_or(0, MatrixIsometry::dim);
            Ok(match input.metric {
                PdMetric::Riemannian => {
                    let space = PdSpace { dim };
                    ParsedInput::PdRiemannian(space, GeneratingSet::new(&space, mats)?)
                }
                PdMetric::Finsler => {
                    let space = PdFinsler { dim };
                    ParsedInput::PdFinsler(space, GeneratingSet::new(&space, mats)?)
                }
            })
        }
    }
}

/// Serializes a free-group set back into the schema.
pub fn tree_free_document(rank: usize, set: &GeneratingSet<FreeWord>) -> TreeFreeInput {
    TreeFreeInput {
        geometry: InputGeometry::TreeFree,
        version: SCHEMA_VERSION,
        rank,
        words: set.elements().iter().map(FreeWord::to_string).collect(),
    }
}

pub fn h2_document(set: &GeneratingSet<Moebius>) -> H2Input {
    H2Input {
        geometry: InputGeometry::H2,
        version: SCHEMA_VERSION,
        matrices: set
            .elements()
            .iter()
            .map(|g| {
                let [a, b, c, d] = g.entries();
                [[a, b], [c, d]]
            })
            .collect(),
    }
}

pub fn euclidean_document(set: &GeneratingSet<EuclideanIsometry>) -> EuclideanInput {
    EuclideanInput {
        geometry: InputGeometry::Euclidean,
        version: SCHEMA_VERSION,
        isometries: set.elements().iter().map(EuclideanIsometry::to_record).collect(),
    }
}

pub fn pd_document(metric: PdMetric, set: &GeneratingSet<MatrixIsometry>) -> PdInput {
    PdInput {
        geometry: InputGeometry::PdMatrix,
        version: SCHEMA_VERSION,
        metric,
        matrices: set.elements().iter().map(MatrixIsometry::to_record).collect(),
    }
}

pub fn padic_document(prime: u64, set: &GeneratingSet<PadicMatrix>) -> TreePadicInput {
    TreePadicInput {
        geometry: InputGeometry::TreePadic,
        version: SCHEMA_VERSION,
        prime,
        matrices: set
            .elements()
            .iter()
            .map(|g| {
                let [a, b, c, d] = g.entries().clone().map(|r| r.to_string());
                [[a, b], [c, d]]
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_geometry() {
        let docs = [
            r#"{"geometry": "tree-free", "version": 1, "rank": 2, "words": ["x", "yxY"]}"#,
            r#"{"geometry": "tree-padic", "version": 1, "prime": 3, "matrices": [[["1", "1/3"], ["0", "1"]]]}"#,
            r#"{"geometry": "h2", "version": 1, "matrices": [[[2, 0], [0, 0.5]]]}"#,
            r#"{"geometry": "euclidean", "version": 1, "isometries": [{"R": [[1, 0], [0, 1]], "t": [1, 0]}]}"#,
            r#"{"geometry": "pd-matrix", "version": 1, "matrices": [{"mode": "exact-int", "rows": [[1, 1], [0, 1]]}]}"#,
            r#"{"geometry": "pd-matrix", "version": 1, "metric": "finsler", "matrices": [{"mode": "float", "rows": [[2, 0], [0, 0.5]]}]}"#,
        ];
        let tags: Vec<GeometryTag> = docs.iter().map(|d| parse_input(d, None).unwrap().tag()).collect();
        assert_eq!(
            tags,
            [
                GeometryTag::TreeFree,
                GeometryTag::TreePadic,
                GeometryTag::H2,
                GeometryTag::Euclidean,
                GeometryTag::PdRiemannian,
                GeometryTag::PdFinsler
            ]
        );
    }

    #[test]
    fn diagnostics() {
        let bad = "{\"geometry\": \"tree-free\",\n \"version\": 1,\n \"rank\": \"two\", \"words\": []}";
        let Err(Error::Input(msg)) = parse_input(bad, None) else { panic!() };
        assert!(msg.starts_with("line 3"), "{msg}");
        let no_version = r#"{"geometry": "h2", "matrices": []}"#;
        assert!(parse_input(no_version, None).unwrap_err().to_string().contains("version"));
        let wrong = r#"{"geometry": "h2", "version": 1, "matrices": [[[1, 0], [0, 1]]]}"#;
        assert!(matches!(
            parse_input(wrong, Some(InputGeometry::Euclidean)),
            Err(Error::GeometryMismatch { .. })
        ));
        let rank = r#"{"geometry": "tree-free", "version": 1, "rank": 2, "words": ["xz"]}"#;
        assert!(parse_input(rank, None).is_err());
        let det = r#"{"geometry": "h2", "version": 1, "matrices": [[[2, 0], [0, 1]]]}"#;
        assert!(parse_input(det, None).unwrap_err().to_string().contains("element 0"));
    }

    #[test]
    fn documents_round_trip() {
        let tree = FreeTree::new(2).unwrap();
        let set = GeneratingSet::new(&tree, vec![FreeWord::parse("xY").unwrap()]).unwrap();
        let text = serde_json::to_string(&tree_free_document(2, &set)).unwrap();
        let ParsedInput::TreeFree(_, back) = parse_input(&text, None).unwrap() else { panic!() };
        assert_eq!(back.elements(), set.elements());
    }
}
