//! Command implementations behind the `solvlck` binary.
//!
//! Each command reads its input files, runs in the selected backend and
//! returns a [`Report`]: a JSON document (with a `"kind"` field and the full
//! [`RunConfig`]) plus a one-line summary.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::cohomology::{ce_complex, twisted_complex};
use crate::error::{Error, Result};
use crate::io::{
    algebra_spec, canonical, certificate_json, form_json, formality_json, metric_json, parse_algebra_spec,
    parse_form, parse_metric, read_json, write_atomic, LieAlgebraSpec,
};
use crate::lck::{formality_check, lee_form, vaisman_obstruction, InvariantMetric};
use crate::ot::{build_ot, FieldInput};
use crate::scalar::{round_significant, Backend, Rational, RealScalar, DEFAULT_TOLERANCE};

/// Environment variable that overrides the default tolerance.
pub const TOL_ENV: &str = "SOLV_LCK_TOL";

/// Options shared by every command, before the backend is resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    /// `None` means: use the scalar declared by the input file.
    pub backend: Option<Backend>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            backend: None,
            tol: DEFAULT_TOLERANCE,
            out: None,
            quiet: false,
        }
    }
}

/// Everything that determines a command's output, embedded in each report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub backend: Backend,
    pub tol: f64,
    pub out: Option<String>,
    pub quiet: bool,
}

impl RunConfig {
    fn new(command: &str, inputs: &[&Path], backend: Backend, opts: &Options) -> Result<Self> {
        if !(opts.tol.is_finite() && opts.tol > 0.0) {
            return Err(Error::Parse(format!(
                "tolerance must be positive, got {}",
                opts.tol
            )));
        }
        Ok(RunConfig {
            command: command.into(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            backend,
            tol: opts.tol,
            out: opts.out.as_ref().map(|p| p.display().to_string()),
            quiet: opts.quiet,
        })
    }
}

/// A command result.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub summary: String,
}

impl Report {
    pub fn text(&self) -> String {
        canonical(&self.value)
    }

    /// Writes the report to `opts.out` if given; returns what belongs on
    /// stdout (the report itself, or the summary unless quiet).
    pub fn emit(&self, opts: &Options) -> Result<Option<String>> {
        match &opts.out {
            Some(path) => {
                write_atomic(path, &self.text())?;
                Ok((!opts.quiet).then(|| format!("{}\n", self.summary)))
            }
            None => Ok(Some(self.text())),
        }
    }
}

fn load_spec(path: &Path) -> Result<LieAlgebraSpec> {
    parse_algebra_spec(read_json(path)?)
}

macro_rules! dispatch {
    ($backend:expr, $f:ident ( $($arg:expr),* )) => {
        match $backend {
            Backend::Rational => $f::<Rational>($($arg),*),
            Backend::Float => $f::<f64>($($arg),*),
        }
    };
}

fn algebra_header(spec: &LieAlgebraSpec) -> Value {
    json!({"dim": spec.dim, "basis": spec.basis})
}

pub fn cmd_betti(opts: &Options, spec_path: &Path) -> Result<Report> {
    let spec = load_spec(spec_path)?;
    let backend = opts.backend.unwrap_or(spec.scalar);
    let cfg = RunConfig::new("betti", &[spec_path], backend, opts)?;
    dispatch!(backend, betti_impl(&spec, cfg))
}

fn betti_impl<S: RealScalar>(spec: &LieAlgebraSpec, cfg: RunConfig) -> Result<Report> {
    let g = spec.to_algebra::<S>(cfg.tol)?;
    let snap = ce_complex(&g);
    let dims = snap.betti();
    Ok(Report {
        summary: format!("betti {dims:?}"),
        value: json!({
            "kind": "cohomology_report",
            "config": cfg,
            "algebra": algebra_header(spec),
            "twisted": false,
            "dims": dims,
            "ranks": snap.ranks(),
            "euler_characteristic": snap.euler_characteristic(),
        }),
    })
}

pub fn cmd_twisted(opts: &Options, spec_path: &Path, theta_path: &Path) -> Result<Report> {
    let spec = load_spec(spec_path)?;
    let backend = opts.backend.unwrap_or(spec.scalar);
    let cfg = RunConfig::new("twisted", &[spec_path, theta_path], backend, opts)?;
    let theta = read_json(theta_path)?;
    dispatch!(backend, twisted_impl(&spec, theta, cfg))
}

fn twisted_impl<S: RealScalar>(spec: &LieAlgebraSpec, theta: Value, cfg: RunConfig) -> Result<Report> {
    let g = spec.to_algebra::<S>(cfg.tol)?;
    let theta = parse_form::<S>(theta, g.dim())?;
    let snap = twisted_complex(&g, &theta)?;
    let dims = snap.betti();
    Ok(Report {
        summary: format!("twisted cohomology {dims:?}"),
        value: json!({
            "kind": "cohomology_report",
            "config": cfg,
            "algebra": algebra_header(spec),
            "twisted": true,
            "theta": form_json(&theta),
            "dims": dims,
            "ranks": snap.ranks(),
            "euler_characteristic": snap.euler_characteristic(),
        }),
    })
}

/// With no theta file the Lee form of `ω` is used.
pub fn cmd_check_vaisman(
    opts: &Options,
    spec_path: &Path,
    omega_path: &Path,
    theta_path: Option<&Path>,
) -> Result<Report> {
    let spec = load_spec(spec_path)?;
    let backend = opts.backend.unwrap_or(spec.scalar);
    let mut inputs = vec![spec_path, omega_path];
    inputs.extend(theta_path);
    let cfg = RunConfig::new("check-vaisman", &inputs, backend, opts)?;
    let omega = read_json(omega_path)?;
    let theta = theta_path.map(read_json).transpose()?;
    dispatch!(backend, vaisman_impl(&spec, omega, theta, cfg))
}

fn vaisman_impl<S: RealScalar>(
    spec: &LieAlgebraSpec,
    omega: Value,
    theta: Option<Value>,
    cfg: RunConfig,
) -> Result<Report> {
    let g = spec.to_algebra::<S>(cfg.tol)?;
    let split = spec
        .to_split::<S>()?
        .ok_or_else(|| Error::Parse("the algebra file has no meta-abelian split".into()))?;
    let omega = parse_form::<S>(omega, g.dim())?;
    let (theta, theta_source) = match theta {
        Some(v) => (parse_form::<S>(v, g.dim())?, "file"),
        None => (lee_form(&g, &omega)?.theta, "lee_form"),
    };
    let cert = vaisman_obstruction(&g, &split, &omega, &theta)?;
    let mut value = certificate_json(&g, &cert);
    let verdict = value["verdict"].clone();
    value["config"] = serde_json::to_value(&cfg).expect("serializable");
    value["algebra"] = algebra_header(spec);
    value["omega"] = form_json(&omega);
    value["theta_source"] = json!(theta_source);
    Ok(Report {
        summary: format!("verdict {}", verdict.as_str().unwrap_or_default()),
        value,
    })
}

pub fn cmd_formality(opts: &Options, spec_path: &Path, metric_path: &Path) -> Result<Report> {
    let spec = load_spec(spec_path)?;
    let backend = opts.backend.unwrap_or(spec.scalar);
    let cfg = RunConfig::new("formality", &[spec_path, metric_path], backend, opts)?;
    let metric = read_json(metric_path)?;
    dispatch!(backend, formality_impl(&spec, metric, cfg))
}

fn formality_impl<S: RealScalar>(spec: &LieAlgebraSpec, metric: Value, cfg: RunConfig) -> Result<Report> {
    let g = spec.to_algebra::<S>(cfg.tol)?;
    let metric = InvariantMetric::new(parse_metric::<S>(metric, g.dim())?, cfg.tol)?;
    let r = formality_check(&g, &metric)?;
    let mut value = formality_json(&r);
    value["config"] = serde_json::to_value(&cfg).expect("serializable");
    value["algebra"] = algebra_header(spec);
    Ok(Report {
        summary: format!("formal {}", r.formal),
        value,
    })
}

/// `<dir>/<stem>.<suffix>.json` next to `path`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.json"))
}

/// Runs the number-field pipeline. With `--out P` the algebra is written to
/// `P` and the field data, `ω` and `θ` to siblings of `P`; the report lists
/// the files. Without `--out` everything goes into the report.
pub fn cmd_build_ot(opts: &Options, field_path: &Path) -> Result<Report> {
    if opts.backend == Some(Backend::Rational) {
        return Err(Error::Parse(
            "build-ot produces floating-point data; use --backend float".into(),
        ));
    }
    let cfg = RunConfig::new("build-ot", &[field_path], Backend::Float, opts)?;
    let mut raw = read_json(field_path)?;
    if let Some(obj) = raw.as_object_mut() {
        if let Some(kind) = obj.remove("kind") {
            if kind != json!("field_input") {
                return Err(Error::Parse(format!("expected kind 'field_input', found {kind}")));
            }
        }
    }
    let input: FieldInput =
        serde_json::from_value(raw).map_err(|e| Error::Parse(format!("field input: {e}")))?;
    let (data, ot) = build_ot(&input, cfg.tol)?;
    let spec = serde_json::to_value(algebra_spec(&ot.algebra, Some(&ot.split))).expect("serializable");
    let mut field = serde_json::to_value(&data).expect("serializable");
    field["kind"] = json!("ot_field_data");
    let omega = ot.omega.as_ref().map(form_json);
    let theta = ot.theta.as_ref().map(form_json);
    let summary = format!(
        "built OT({},{}) algebra of dimension {}; b = {:?}",
        data.s,
        data.t,
        ot.algebra.dim(),
        data.b
            .iter()
            .map(|r| r.iter().map(|x| round_significant(*x)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );
    field["config"] = serde_json::to_value(&cfg).expect("serializable");
    match &opts.out {
        Some(out) => {
            let mut written = vec![sibling(out, "field")];
            write_atomic(&written[0], &canonical(&field))?;
            if let (Some(w), Some(t)) = (&omega, &theta) {
                written.push(sibling(out, "omega"));
                written.push(sibling(out, "theta"));
                write_atomic(&written[1], &canonical(w))?;
                write_atomic(&written[2], &canonical(t))?;
            }
            let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            Ok(Report {
                value: spec,
                summary: format!("{summary}; also wrote {}", names.join(", ")),
            })
        }
        None => Ok(Report {
            value: json!({
                "kind": "ot_build_report",
                "config": cfg,
                "field": field,
                "algebra": spec,
                "omega": omega,
                "theta": theta,
            }),
            summary,
        }),
    }
}

/// Writes a catalog algebra; OT entries also get `ω`, `θ` and the metric
/// `ω(·, J·)` as siblings of `--out`.
pub fn cmd_catalog(opts: &Options, name: &str) -> Result<Report> {
    let backend = opts.backend.unwrap_or(Backend::Rational);
    let cfg = RunConfig::new("catalog", &[], backend, opts)?;
    dispatch!(backend, catalog_impl(name, opts, cfg))
}

fn catalog_impl<S: RealScalar>(name: &str, opts: &Options, cfg: RunConfig) -> Result<Report> {
    let (g, split, ot) = catalog::by_name::<S>(name, cfg.tol)?;
    let spec = serde_json::to_value(algebra_spec(&g, split.as_ref())).expect("serializable");
    let mut extras = Vec::new();
    if let Some(ot) = &ot {
        if let (Some(w), Some(t)) = (&ot.omega, &ot.theta) {
            extras.push(("omega", form_json(w)));
            extras.push(("theta", form_json(t)));
            if let Some(m) = ot.metric()? {
                extras.push(("metric", metric_json(m.matrix())));
            }
        }
    }
    let summary = format!("catalog entry '{name}' of dimension {}", g.dim());
    match &opts.out {
        Some(out) => {
            for (suffix, v) in &extras {
                write_atomic(&sibling(out, suffix), &canonical(v))?;
            }
            Ok(Report { value: spec, summary })
        }
        None => {
            let mut value = json!({"kind": "catalog_entry", "config": cfg, "algebra": spec});
            for (suffix, v) in extras {
                value[suffix] = v;
            }
            Ok(Report { value, summary })
        }
    }
}

/// Diagnostic printed on stderr for a failed command.
pub fn diagnostic(err: &Error) -> String {
    json!({"error": err.kind(), "message": err.to_string()}).to_string()
}
