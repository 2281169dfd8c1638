//! JSON file formats. Every file is an object with a `"kind"` field.
//!
//! Coefficients are written as `"n/d"` strings by the rational backend and as
//! numbers rounded to 12 significant digits by the float backend; either form
//! is accepted on input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::GradedForm;
use crate::lck::{FormalityReport, ObstructionCertificate, Verdict};
use crate::lie::{BlockKind, LieAlgebra, MetaAbelianSplit, WeightBlock};
use crate::linalg::Matrix;
use crate::scalar::{round_significant, Backend, RealScalar};

pub const KIND_ALGEBRA: &str = "lie_algebra";
pub const KIND_FORM: &str = "form";
pub const KIND_METRIC: &str = "metric";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    /// Output index (as a decimal string) to coefficient.
    pub terms: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub kind: BlockKind,
    pub indices: Vec<usize>,
    pub lambda: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitEntry {
    pub a_indices: Vec<usize>,
    pub blocks: Vec<BlockEntry>,
}

/// On-disk form of a Lie algebra with an optional meta-abelian split.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraSpec {
    pub kind: String,
    pub dim: usize,
    pub scalar: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    pub indices: Vec<usize>,
    pub coeff: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub grade: usize,
    pub terms: Vec<FormTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub kind: String,
    pub matrix: Vec<Vec<Value>>,
}

fn expect_kind(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "expected kind '{expected}', found '{found}'"
        )))
    }
}

pub fn parse_coeff<S: RealScalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => S::parse_str(s),
        Value::Number(n) => S::parse_str(&n.to_string()),
        other => Err(Error::Parse(format!(
            "coefficient must be a number or string, got {other}"
        ))),
    }
}

fn parse_all<S: RealScalar>(vs: &[Value]) -> Result<Vec<S>> {
    vs.iter().map(parse_coeff).collect()
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_algebra_spec(v: Value) -> Result<LieAlgebraSpec> {
    let spec: LieAlgebraSpec = from_value(v, "lie_algebra")?;
    expect_kind(&spec.kind, KIND_ALGEBRA)?;
    Ok(spec)
}

impl LieAlgebraSpec {
    pub fn to_algebra<S: RealScalar>(&self, tol: f64) -> Result<LieAlgebra<S>> {
        let n = self.dim;
        crate::exterior::check_dim(n)?;
        let names = match &self.basis {
            Some(b) if b.len() != n => {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: b.len(),
                })
            }
            Some(b) => b.clone(),
            None => crate::lie::default_names(n),
        };
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for e in &self.brackets {
            if e.i >= n || e.j >= n {
                return Err(Error::Parse(format!("bracket ({},{}) out of range", e.i, e.j)));
            }
            let mut terms = Vec::with_capacity(e.terms.len());
            for (k, c) in &e.terms {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bracket term index '{k}' is not an integer")))?;
                if k >= n {
                    return Err(Error::Parse(format!("bracket term index {k} out of range")));
                }
                terms.push((k, parse_coeff::<S>(c)?));
            }
            brackets.push((e.i, e.j, terms));
        }
        LieAlgebra::from_brackets(names, &brackets, tol)
    }

    pub fn to_split<S: RealScalar>(&self) -> Result<Option<MetaAbelianSplit<S>>> {
        let Some(sp) = &self.split else {
            return Ok(None);
        };
        let m = sp.a_indices.len();
        let mut blocks = Vec::with_capacity(sp.blocks.len());
        for (bi, b) in sp.blocks.iter().enumerate() {
            let lambda = parse_all::<S>(&b.lambda)?;
            let mu = match &b.mu {
                Some(mu) => parse_all::<S>(mu)?,
                None => vec![S::zero(); m],
            };
            if lambda.len() != m || mu.len() != m {
                return Err(Error::MalformedBlock(format!(
                    "block {bi}: weights must have length {m}"
                )));
            }
            if b.indices.len() != b.kind.width() {
                return Err(Error::MalformedBlock(format!(
                    "block {bi}: a {:?} block has {} indices",
                    b.kind,
                    b.kind.width()
                )));
            }
            blocks.push(WeightBlock {
                kind: b.kind,
                indices: b.indices.clone(),
                lambda,
                mu,
            });
        }
        Ok(Some(MetaAbelianSplit {
            a_indices: sp.a_indices.clone(),
            blocks,
        }))
    }
}

/// Serializes an algebra (and split) in the given backend's number format.
pub fn algebra_spec<S: RealScalar>(g: &LieAlgebra<S>, split: Option<&MetaAbelianSplit<S>>) -> LieAlgebraSpec {
    let brackets = g
        .bracket_list()
        .into_iter()
        .map(|(i, j, terms)| BracketEntry {
            i,
            j,
            terms: terms
                .into_iter()
                .map(|(k, c)| (k.to_string(), c.to_json()))
                .collect(),
        })
        .collect();
    let split = split.map(|s| SplitEntry {
        a_indices: s.a_indices.clone(),
        blocks: s
            .blocks
            .iter()
            .map(|b| BlockEntry {
                kind: b.kind,
                indices: b.indices.clone(),
                lambda: b.lambda.iter().map(RealScalar::to_json).collect(),
                mu: (b.kind == BlockKind::Complex).then(|| b.mu.iter().map(RealScalar::to_json).collect()),
            })
            .collect(),
    });
    LieAlgebraSpec {
        kind: KIND_ALGEBRA.into(),
        dim: g.dim(),
        scalar: S::backend(),
        basis: Some(g.names().to_vec()),
        brackets,
        split,
    }
}

pub fn parse_form<S: RealScalar>(v: Value, dim: usize) -> Result<GradedForm<S>> {
    let spec: FormSpec = from_value(v, "form")?;
    expect_kind(&spec.kind, KIND_FORM)?;
    if let Some(d) = spec.dim {
        if d != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: d,
            });
        }
    }
    let mut terms = Vec::with_capacity(spec.terms.len());
    for t in &spec.terms {
        if t.indices.len() != spec.grade {
            return Err(Error::GradeMismatch {
                expected: spec.grade,
                got: t.indices.len(),
            });
        }
        if let Some(&i) = t.indices.iter().find(|&&i| i >= dim) {
            return Err(Error::Parse(format!("form index {i} out of range")));
        }
        terms.push((t.indices.clone(), parse_coeff::<S>(&t.coeff)?));
    }
    GradedForm::from_terms(dim, spec.grade, terms)
}

pub fn form_json<S: RealScalar>(f: &GradedForm<S>) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(m, c)| json!({"indices": m.indices(), "coeff": c.to_json()}))
        .collect();
    json!({"kind": KIND_FORM, "dim": f.dim(), "grade": f.grade(), "terms": terms})
}

pub fn parse_metric<S: RealScalar>(v: Value, dim: usize) -> Result<Matrix<S>> {
    let spec: MetricSpec = from_value(v, "metric")?;
    expect_kind(&spec.kind, KIND_METRIC)?;
    if spec.matrix.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: spec.matrix.len(),
        });
    }
    let rows = spec
        .matrix
        .iter()
        .map(|r| {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            parse_all::<S>(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn metric_json<S: RealScalar>(m: &Matrix<S>) -> Value {
    let rows: Vec<Vec<Value>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(RealScalar::to_json).collect())
        .collect();
    json!({"kind": KIND_METRIC, "matrix": rows})
}

/// The certificate as a JSON object of kind `obstruction_certificate`.
pub fn certificate_json<S: RealScalar>(g: &LieAlgebra<S>, cert: &ObstructionCertificate<S>) -> Value {
    let verdict = match cert.verdict {
        Verdict::NoVaismanPossible => "NoVaismanPossible",
        Verdict::Inconclusive => "Inconclusive",
    };
    let split = serde_json::to_value(algebra_spec(g, Some(&cert.split)).split).expect("serializable");
    json!({
        "kind": "obstruction_certificate",
        "split": split,
        "dim_g": cert.dim_g,
        "dim_derived": cert.dim_derived,
        "hypothesis_ok": cert.hypothesis_ok,
        "theta": form_json(&cert.theta),
        "theta_in_a": cert.theta_in_a,
        "omega_prime": form_json(&cert.omega_prime),
        "omega_double_prime": form_json(&cert.omega_double_prime),
        "omega_dpp_nonzero": cert.omega_dpp_nonzero,
        "containment_holds": cert.containment_holds,
        "structural_non_exact": cert.containment_holds && cert.omega_dpp_nonzero,
        "d_theta_exact": cert.d_theta_exact,
        "witness": cert.witness.as_ref().map(form_json),
        "verdict": verdict,
    })
}

/// The result of a formality check as a JSON object of kind `formality_report`.
pub fn formality_json<S: RealScalar>(r: &FormalityReport<S>) -> Value {
    let pair = r.failing_pair.as_ref().map(|p| {
        json!({
            "left": form_json(&p.left),
            "right": form_json(&p.right),
            "product": form_json(&p.product),
            "residual": p.residual,
        })
    });
    json!({
        "kind": "formality_report",
        "formal": r.formal,
        "harmonic_dims": r.harmonic_dims,
        "failing_pair": pair,
    })
}

/// Rounds every non-integer number in place to 12 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_significant(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Canonical text of a JSON value: sorted keys, rounded floats, pretty
/// printed, trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut v = v.clone();
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{heisenberg, inoue_s0};
    use crate::scalar::{Rational, Scalar};

    #[test]
    fn algebra_roundtrip_both_backends() {
        let ot = inoue_s0::<Rational>(Rational::from_ratio(3, 2), 0.0).unwrap();
        let spec = algebra_spec(&ot.algebra, Some(&ot.split));
        let text = serde_json::to_string(&spec).unwrap();
        let back = parse_algebra_spec(serde_json::from_str(&text).unwrap()).unwrap();
        let g: LieAlgebra<Rational> = back.to_algebra(0.0).unwrap();
        assert_eq!(g.constants(), ot.algebra.constants());
        assert_eq!(g.names(), ot.algebra.names());
        assert_eq!(back.to_split::<Rational>().unwrap().unwrap(), ot.split);
        let gf: LieAlgebra<f64> = back.to_algebra(1e-9).unwrap();
        assert_eq!(gf.constant(0, 3, 2), &-1.5);
    }

    #[test]
    fn antisymmetry_diagnostic() {
        let v = json!({
            "kind": "lie_algebra", "dim": 3, "scalar": "rational",
            "brackets": [
                {"i": 1, "j": 2, "terms": {"0": "1"}},
                {"i": 2, "j": 1, "terms": {"0": "1"}}
            ]
        });
        let err = parse_algebra_spec(v)
            .unwrap()
            .to_algebra::<Rational>(0.0)
            .unwrap_err();
        assert_eq!(err.to_string(), "brackets: antisymmetry violated at (1,2)");
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let v = json!({"kind": "form", "grade": 1, "terms": []});
        assert!(parse_algebra_spec(v).is_err());
        let v = json!({"kind": "metric", "matrix": [[1]]});
        assert!(parse_form::<Rational>(v, 1).is_err());
    }

    #[test]
    fn form_roundtrip_and_reordering() {
        let v = json!({"kind": "form", "grade": 2, "terms": [
            {"indices": [1, 0], "coeff": "1/2"},
            {"indices": [0, 2], "coeff": 3}
        ]});
        let f = parse_form::<Rational>(v, 3).unwrap();
        assert_eq!(
            f.coeff(crate::exterior::Monomial::from_indices(&[0, 1]).unwrap()),
            Rational::from_ratio(-1, 2)
        );
        let back = parse_form::<Rational>(form_json(&f), 3).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn metric_parsing() {
        let m = parse_metric::<f64>(json!({"kind": "metric", "matrix": [[1, 0], [0, "1/4"]]}), 2).unwrap();
        assert_eq!(m[(1, 1)], 0.25);
        assert!(parse_metric::<f64>(json!({"kind": "metric", "matrix": [[1, 0]]}), 2).is_err());
    }

    #[test]
    fn canonical_text_rounds() {
        let s = canonical(&json!({"b": 1.0 / 3.0, "a": 2}));
        assert_eq!(s, "{\n  \"a\": 2,\n  \"b\": 0.333333333333\n}\n");
    }

    #[test]
    fn float_spec_output() {
        let g = heisenberg::<f64>(1, 1e-9).unwrap();
        let spec = algebra_spec(&g, None);
        assert_eq!(spec.scalar, Backend::Float);
        assert_eq!(spec.brackets.len(), 1);
        assert_eq!(spec.brackets[0].terms["2"], json!(1.0));
    }
}
