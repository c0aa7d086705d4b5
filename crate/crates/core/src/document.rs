//! Text serialization of operators.
//!
//! Documents are TOML with an explicit `kind` and `n`:
//!
//! ```toml
//! kind = "affine"
//! n = 1
//! basis = [["0", "1"]]
//! translation = [["2"], ["0"]]
//! ```
//!
//! `linear` and `affine` documents list basis rows of length `2n` as
//! `(x | x*)`; `finite` documents list `pairs = [[x, xstar], ...]`. Numbers
//! may be integers, decimals, or `"p/q"` strings. Emitted documents always
//! use strings; exact operators round-trip without loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::relation::{canonicalize, PairedPoint};
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: String,
    n: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Vec<Number>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    translation: Option<Vec<Vec<Number>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<Vec<Vec<Number>>>>,
}

/// A validated document with exact numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorDocument {
    pub n: usize,
    pub body: DocumentBody,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DocumentBody {
    Finite(Vec<(Vec<Rational>, Vec<Rational>)>),
    Linear(Vec<Vec<Rational>>),
    Affine {
        basis: Vec<Vec<Rational>>,
        translation: (Vec<Rational>, Vec<Rational>),
    },
}

/// Outcome of [`parse_operator`]: the operator plus non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct Parsed<S> {
    pub operator: Operator<S>,
    pub warnings: Vec<String>,
}

fn number(field: &str, v: &Number) -> Result<Rational> {
    match v {
        Number::Int(i) => Ok(Rational::from_i64(*i)),
        Number::Float(f) => parse_rational(&format!("{f:e}"))
            .filter(|_| f.is_finite())
            .ok_or_else(|| Error::Parse(format!("{field}: non-finite number {f}"))),
        Number::Text(s) => parse_rational(s)
            .ok_or_else(|| Error::Parse(format!("{field}: malformed number '{s}'"))),
    }
}

fn vector(field: &str, v: &[Number], len: usize) -> Result<Vec<Rational>> {
    if v.len() != len {
        return Err(Error::Parse(format!(
            "{field}: expected {len} entries, found {}",
            v.len()
        )));
    }
    v.iter()
        .enumerate()
        .map(|(i, x)| number(&format!("{field}[{i}]"), x))
        .collect()
}

fn pair(field: &str, v: &[Vec<Number>], n: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if v.len() != 2 {
        return Err(Error::Parse(format!(
            "{field}: expected [x, xstar], found {} lists",
            v.len()
        )));
    }
    Ok((
        vector(&format!("{field}[0]"), &v[0], n)?,
        vector(&format!("{field}[1]"), &v[1], n)?,
    ))
}

fn require<T>(field: &str, kind: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::Parse(format!("{kind} document requires field '{field}'")))
}

fn forbid<T>(field: &str, kind: &str, v: &Option<T>) -> Result<()> {
    match v {
        Some(_) => Err(Error::Parse(format!("{kind} document must not contain '{field}'"))),
        None => Ok(()),
    }
}

impl OperatorDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument =
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
        if raw.n < 1 {
            return Err(Error::Parse(format!("n: must be a positive integer, found {}", raw.n)));
        }
        let n = raw.n as usize;
        let basis = |rows: Vec<Vec<Number>>| -> Result<Vec<Vec<Rational>>> {
            rows.iter()
                .enumerate()
                .map(|(i, r)| vector(&format!("basis[{i}]"), r, 2 * n))
                .collect()
        };
        let body = match raw.kind.as_str() {
            "finite" => {
                forbid("basis", "finite", &raw.basis)?;
                forbid("translation", "finite", &raw.translation)?;
                let pairs = require("pairs", "finite", raw.pairs)?;
                if pairs.is_empty() {
                    return Err(Error::Parse("pairs: finite operator needs at least one pair".into()));
                }
                DocumentBody::Finite(
                    pairs
                        .iter()
                        .enumerate()
                        .map(|(i, p)| pair(&format!("pairs[{i}]"), p, n))
                        .collect::<Result<_>>()?,
                )
            }
            "linear" => {
                forbid("pairs", "linear", &raw.pairs)?;
                forbid("translation", "linear", &raw.translation)?;
                DocumentBody::Linear(basis(require("basis", "linear", raw.basis)?)?)
            }
            "affine" => {
                forbid("pairs", "affine", &raw.pairs)?;
                DocumentBody::Affine {
                    basis: basis(require("basis", "affine", raw.basis)?)?,
                    translation: pair(
                        "translation",
                        &require("translation", "affine", raw.translation)?,
                        n,
                    )?,
                }
            }
            other => {
                return Err(Error::Parse(format!(
                    "kind: expected 'finite', 'linear' or 'affine', found '{other}'"
                )))
            }
        };
        Ok(OperatorDocument { n, body })
    }

    pub fn to_operator<S: Scalar>(&self) -> Result<Parsed<S>> {
        let conv = |v: &[Rational]| v.iter().map(S::from_rational).collect::<Vec<S>>();
        let mut warnings = Vec::new();
        let mut span = |rows: &[Vec<Rational>]| -> Result<_> {
            let rows: Vec<Vec<S>> = rows.iter().map(|r| conv(r)).collect();
            let sub = canonicalize(&rows, self.n)?;
            if sub.dim() < rows.len() {
                warnings.push(format!(
                    "basis: {} rows span a subspace of dimension {}; dependent rows removed",
                    rows.len(),
                    sub.dim()
                ));
            }
            Ok(sub)
        };
        let operator = match &self.body {
            DocumentBody::Finite(pairs) => Operator::finite(
                pairs
                    .iter()
                    .map(|(x, xs)| PairedPoint::new(conv(x), conv(xs)))
                    .collect::<Result<_>>()?,
            )?,
            DocumentBody::Linear(rows) => Operator::Linear(span(rows)?),
            DocumentBody::Affine { basis, translation } => Operator::affine(
                span(basis)?,
                PairedPoint::new(conv(&translation.0), conv(&translation.1))?,
            )?,
        };
        Ok(Parsed { operator, warnings })
    }

    pub fn from_operator<S: Scalar>(op: &Operator<S>) -> Self {
        let conv = |v: &[S]| v.iter().map(Scalar::to_rational).collect::<Vec<_>>();
        let rows = |l: &crate::relation::Subspace<S>| l.basis().iter().map(|r| conv(r)).collect();
        let body = match op {
            Operator::Finite(f) => DocumentBody::Finite(
                f.points().iter().map(|p| (conv(&p.x), conv(&p.xstar))).collect(),
            ),
            Operator::Linear(l) => DocumentBody::Linear(rows(l)),
            Operator::Affine(a) => DocumentBody::Affine {
                basis: rows(&a.linear),
                translation: (conv(&a.translation.x), conv(&a.translation.xstar)),
            },
        };
        OperatorDocument { n: op.n(), body }
    }

    pub fn emit(&self) -> String {
        let text = |v: &[Rational]| v.iter().map(|x| Number::Text(x.to_string())).collect::<Vec<_>>();
        let mut raw = RawDocument {
            kind: String::new(),
            n: self.n as i64,
            basis: None,
            translation: None,
            pairs: None,
        };
        match &self.body {
            DocumentBody::Finite(pairs) => {
                raw.kind = "finite".into();
                raw.pairs = Some(pairs.iter().map(|(x, xs)| vec![text(x), text(xs)]).collect());
            }
            DocumentBody::Linear(rows) => {
                raw.kind = "linear".into();
                raw.basis = Some(rows.iter().map(|r| text(r)).collect());
            }
            DocumentBody::Affine { basis, translation } => {
                raw.kind = "affine".into();
                raw.basis = Some(basis.iter().map(|r| text(r)).collect());
                raw.translation = Some(vec![text(&translation.0), text(&translation.1)]);
            }
        }
        toml::to_string(&raw).expect("document serializes")
    }
}

/// Parses a document and converts it to an operator in the arithmetic of `S`.
pub fn parse_operator<S: Scalar>(text: &str) -> Result<Parsed<S>> {
    OperatorDocument::parse(text)?.to_operator()
}

pub fn emit_operator<S: Scalar>(op: &Operator<S>) -> String {
    OperatorDocument::from_operator(op).emit()
}

/// Parses `"a, b, c, d"` (the `2n` coordinates of `(x | x*)`).
pub fn parse_point<S: Scalar>(text: &str, n: usize) -> Result<PairedPoint<S>> {
    let values = text
        .split([',', ' ', ';', '|'])
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            parse_rational(s)
                .map(|r| S::from_rational(&r))
                .ok_or_else(|| Error::Parse(format!("point: malformed number '{s}'")))
        })
        .collect::<Result<Vec<S>>>()?;
    if values.len() != 2 * n {
        return Err(Error::Parse(format!(
            "point: expected {} coordinates (x then x*), found {}",
            2 * n,
            values.len()
        )));
    }
    PairedPoint::from_concat(&values, n)
}

pub fn format_point<S: Scalar>(p: &PairedPoint<S>) -> String {
    p.to_concat()
        .iter()
        .map(|v| format_scalar(v))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn format_scalar<S: Scalar>(v: &S) -> String {
    match S::MODE {
        crate::scalar::ArithMode::Exact => v.to_rational().to_string(),
        crate::scalar::ArithMode::Float => format!("{}", v.to_f64()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Subspace;
    use proptest::prelude::*;

    type Q = Rational;

    #[test]
    fn parses_linear_identity() {
        let p = parse_operator::<Q>("kind = \"linear\"\nn = 1\nbasis = [[\"1\", \"1\"]]\n").unwrap();
        let id = Operator::Linear(Subspace::graph_i64(&[vec![1]]).unwrap());
        assert!(p.operator.same_set(&id).unwrap());
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn parses_affine_vertical_line() {
        let text = "kind = \"affine\"\nn = 1\nbasis = [[\"0\", \"1\"]]\ntranslation = [[\"2\"], [\"0\"]]\n";
        let op = parse_operator::<Q>(text).unwrap().operator;
        assert!(op.contains_point(&PairedPoint::from_i64(&[2], &[17]).unwrap()).unwrap());
        assert!(!op.contains_point(&PairedPoint::from_i64(&[1], &[0]).unwrap()).unwrap());
    }

    #[test]
    fn parses_finite_with_bare_numbers() {
        let op = parse_operator::<Q>("kind = \"finite\"\nn = 2\npairs = [[[0, 0], [0, 0]]]\n")
            .unwrap()
            .operator;
        match op {
            Operator::Finite(f) => {
                assert_eq!(f.len(), 1);
                assert!(f.points()[0].is_zero());
            }
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn decimal_and_fraction_entries() {
        let op = parse_operator::<Q>("kind = \"linear\"\nn = 1\nbasis = [[0.5, \"1/4\"]]\n")
            .unwrap()
            .operator;
        assert!(op.contains_point(&PairedPoint::from_i64(&[2], &[1]).unwrap()).unwrap());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = parse_operator::<Q>("kind = \"linear\"\nn = 1\nbasis = [[\"1\", \"x\"]]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("basis[0][1]"), "{err}");
        let err = parse_operator::<Q>("kind = \"linear\"\nn = 2\nbasis = [[\"1\", \"1\"]]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("basis[0]") && err.contains("expected 4"), "{err}");
        let err = parse_operator::<Q>("kind = \"linear\"\nn = 1\nbasis = [[\"1\", \"1/0\"]]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("malformed"), "{err}");
        let err = parse_operator::<Q>("kind = \"linear\"\nn = 1\nbasis = [[1, 1]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line"), "{err}");
        assert!(parse_operator::<Q>("kind = \"weird\"\nn = 1\n").is_err());
        assert!(parse_operator::<Q>("kind = \"affine\"\nn = 1\nbasis = []\n").is_err());
        assert!(parse_operator::<Q>("kind = \"linear\"\nn = 0\nbasis = []\n").is_err());
    }

    #[test]
    fn dependent_rows_warn() {
        let p = parse_operator::<Q>("kind = \"linear\"\nn = 1\nbasis = [[1, 1], [2, 2]]\n").unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.operator.linear_part().unwrap().dim(), 1);
    }

    #[test]
    fn point_parsing() {
        let p = parse_point::<Q>("1, -1/2", 1).unwrap();
        assert_eq!(p.xstar[0], Q::new((-1).into(), 2.into()));
        assert!(parse_point::<Q>("1,2,3", 1).is_err());
        assert_eq!(format_point(&p), "1,-1/2");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exact_round_trip(seed in any::<u64>(), n in 1usize..=5, shift in any::<bool>()) {
            let l = crate::generate::gen_maximal_monotone::<Q>(n, seed).unwrap();
            let op = if shift {
                Operator::Linear(l).translate(&crate::generate::gen_point_fine(n, seed, 3, 7)).unwrap()
            } else {
                Operator::Linear(l)
            };
            let doc = OperatorDocument::from_operator(&op);
            let text = doc.emit();
            let back = OperatorDocument::parse(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            let op2 = back.to_operator::<Q>().unwrap().operator;
            prop_assert_eq!(OperatorDocument::from_operator(&op2), doc);
        }
    }
}
