//! Embeddings, units and the logarithmic embedding of `Q(θ)`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::poly::{is_unit_norm, IntPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Tolerance for the rank of projected log-vectors.
pub const LOG_RANK_TOL: f64 = 1e-8;

/// Real embeddings (ascending) and one representative per complex pair
/// (positive imaginary part, ascending real part).
#[derive(Debug, Clone, PartialEq)]
pub struct Embeddings {
    pub real: Vec<f64>,
    pub complex: Vec<Complex64>,
}

impl Embeddings {
    pub fn s(&self) -> usize {
        self.real.len()
    }

    pub fn t(&self) -> usize {
        self.complex.len()
    }

    /// `σ_i(a)` for every real embedding followed by every complex one.
    pub fn evaluate(&self, a: &[i64]) -> (Vec<f64>, Vec<Complex64>) {
        let real = self
            .real
            .iter()
            .map(|&r| horner(a, Complex64::new(r, 0.0)).re)
            .collect();
        let complex = self.complex.iter().map(|&z| horner(a, z)).collect();
        (real, complex)
    }
}

fn horner(a: &[i64], z: Complex64) -> Complex64 {
    a.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
}

/// Roots of the polynomial, split by the signature `(s, t)`.
pub fn embeddings(poly: &IntPoly, s: usize, t: usize) -> Result<Embeddings> {
    let n = poly.degree();
    if n != s + 2 * t {
        return Err(Error::InvalidPolynomial(format!(
            "degree {n} does not match s + 2t = {}",
            s + 2 * t
        )));
    }
    let c = poly.coeffs();
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -(c[i] as f64)
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = eigenvalues(companion)?
        .into_iter()
        .map(|z| polish(poly, z))
        .collect();
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut real = Vec::new();
    let mut complex = Vec::new();
    for z in roots.drain(..) {
        if z.im.abs() <= 1e-9 * scale {
            real.push(polish(poly, Complex64::new(z.re, 0.0)).re);
        } else if z.im > 0.0 {
            complex.push(z);
        }
    }
    if real.len() != s {
        return Err(Error::SignatureMismatch {
            expected_real: s,
            found_real: real.len(),
        });
    }
    if complex.len() != t {
        return Err(Error::SignatureMismatch {
            expected_real: s,
            found_real: n - 2 * complex.len(),
        });
    }
    real.sort_by(f64::total_cmp);
    complex.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(Embeddings { real, complex })
}

/// Eigenvalues via a capped real Schur decomposition, retried with real
/// shifts when QR stalls (as it does on orthogonal companions like `x⁴ + 1`).
fn eigenvalues(m: DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    for shift in [0.0, 0.5, -0.75, 1.25] {
        let shifted = &m + DMatrix::<f64>::identity(n, n) * shift;
        if let Some(schur) = Schur::try_new(shifted, f64::EPSILON, 10_000) {
            return Ok(schur
                .complex_eigenvalues()
                .iter()
                .map(|z| Complex64::new(z.re - shift, z.im))
                .collect());
        }
    }
    Err(Error::InvalidPolynomial("root finding did not converge".into()))
}

/// Newton steps while the residual keeps shrinking.
fn polish(poly: &IntPoly, mut z: Complex64) -> Complex64 {
    let (mut p, _) = poly.eval_with_derivative(z);
    for _ in 0..8 {
        let (_, dp) = poly.eval_with_derivative(z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (np, _) = poly.eval_with_derivative(next);
        if np.norm() >= p.norm() {
            break;
        }
        z = next;
        p = np;
    }
    z
}

/// An element of `Z[θ]` by its coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct UnitRecord {
    pub coeffs: Vec<i64>,
    /// The exact norm, `±1`.
    pub norm: i64,
}

/// All units `Σ a_k θ^k` with `|a_k| ≤ bound`, up to sign, excluding `±1`,
/// sorted lexicographically by coefficients.
pub fn unit_search(poly: &IntPoly, emb: &Embeddings, bound: i64) -> Vec<UnitRecord> {
    if bound <= 0 {
        return Vec::new();
    }
    let n = poly.degree();
    let width = (2 * bound + 1) as u64;
    let total = width.pow(n as u32);
    let mut found: Vec<UnitRecord> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut a = vec![0i64; n];
            let mut rest = code;
            for x in a.iter_mut() {
                *x = (rest % width) as i64 - bound;
                rest /= width;
            }
            // one representative per ± pair, and not ±1
            let first = a.iter().find(|&&x| x != 0)?;
            if *first < 0 || (a[0] == 1 && a[1..].iter().all(|&x| x == 0)) {
                return None;
            }
            // cheap numerical screen before the exact determinant
            let (re, cx) = emb.evaluate(&a);
            let approx: f64 = re.iter().map(|x| x.abs()).product::<f64>()
                * cx.iter().map(|z| z.norm_sqr()).product::<f64>();
            if (approx - 1.0).abs() > 0.5 {
                return None;
            }
            let norm = poly.norm(&a);
            is_unit_norm(&norm).then(|| UnitRecord {
                coeffs: a,
                norm: if norm.sign() == num_bigint::Sign::Minus {
                    -1
                } else {
                    1
                },
            })
        })
        .collect();
    found.sort();
    found
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Replacement {
    None,
    /// All real embeddings were negative; the unit was negated.
    Negated,
    /// Real embeddings had mixed signs; the unit was squared.
    Squared,
}

/// A totally positive unit and how it was obtained from a searched one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositiveUnit {
    pub coeffs: Vec<i64>,
    pub source: Vec<i64>,
    pub replacement: Replacement,
}

/// Units with every real embedding positive, repairing the others by a sign
/// change or by squaring. Duplicates after repair are dropped.
pub fn totally_positive(poly: &IntPoly, emb: &Embeddings, units: &[UnitRecord]) -> Result<Vec<PositiveUnit>> {
    let mut out: Vec<PositiveUnit> = Vec::new();
    for u in units {
        let (re, _) = emb.evaluate(&u.coeffs);
        let (coeffs, replacement) = if re.iter().all(|&x| x > 0.0) {
            (u.coeffs.clone(), Replacement::None)
        } else if re.iter().all(|&x| x < 0.0) {
            (u.coeffs.iter().map(|x| -x).collect(), Replacement::Negated)
        } else {
            (poly.mul_mod(&u.coeffs, &u.coeffs)?, Replacement::Squared)
        };
        if out.iter().all(|p| p.coeffs != coeffs) {
            out.push(PositiveUnit {
                coeffs,
                source: u.coeffs.clone(),
                replacement,
            });
        }
    }
    Ok(out)
}

/// `l(u) = (log|σ_1(u)|, …, log|σ_s(u)|, 2 log|σ_{s+1}(u)|, …)`.
pub fn log_embedding(emb: &Embeddings, a: &[i64]) -> Result<Vec<f64>> {
    let (re, cx) = emb.evaluate(a);
    let mut out = Vec::with_capacity(re.len() + cx.len());
    for x in re {
        if x == 0.0 {
            return Err(Error::ZeroEmbedding);
        }
        out.push(x.abs().ln());
    }
    for z in cx {
        if z.norm() == 0.0 {
            return Err(Error::ZeroEmbedding);
        }
        out.push(2.0 * z.norm().ln());
    }
    Ok(out)
}

/// A chosen generator of `U` with its log-vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    pub coeffs: Vec<i64>,
    pub log: Vec<f64>,
}

/// Greedily picks `s` units whose log-vectors projected to the first `s`
/// coordinates are independent. Candidates are tried smallest first (by the
/// length of the log-vector, then coefficient height, then coefficients).
pub fn select_u(emb: &Embeddings, candidates: &[PositiveUnit]) -> Result<Vec<Generator>> {
    let s = emb.s();
    let mut scored: Vec<(f64, i64, Vec<i64>, Vec<f64>)> = candidates
        .iter()
        .map(|u| {
            let log = log_embedding(emb, &u.coeffs)?;
            let len = log.iter().map(|x| x * x).sum::<f64>().sqrt();
            // bucket lengths so that numerically equal lengths tie
            let len = (len * 1e8).round() / 1e8;
            let height = u.coeffs.iter().map(|x| x.abs()).sum();
            Ok((len, height, u.coeffs.clone(), log))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut chosen: Vec<Generator> = Vec::new();
    for (_, _, coeffs, log) in scored {
        if chosen.len() == s {
            break;
        }
        let mut rows: Vec<Vec<f64>> = chosen.iter().map(|g| g.log[..s].to_vec()).collect();
        rows.push(log[..s].to_vec());
        let m = Matrix::from_rows(rows).expect("uniform rows");
        if m.rank(LOG_RANK_TOL) == chosen.len() + 1 {
            chosen.push(Generator { coeffs, log });
        }
    }
    if chosen.len() < s {
        return Err(Error::InsufficientUnits {
            needed: s,
            found: chosen.len(),
        });
    }
    Ok(chosen)
}

/// The matrices `b` and `c` (both `s × t`) and the change of basis `a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BcData {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    /// `arg σ_{s+k}(u_j)` in `(-π, π]`, rows indexed by generator.
    pub args: Vec<Vec<f64>>,
}

/// Solves `Σ_j a_ij p(v_j) = e_i`, then `b_ik = Σ_j a_ij v_j[s+k]` and
/// `c_ik = Σ_j a_ij arg σ_{s+k}(u_j)`.
pub fn compute_bc(emb: &Embeddings, generators: &[Generator]) -> Result<BcData> {
    let s = emb.s();
    let t = emb.t();
    if generators.len() != s {
        return Err(Error::InsufficientUnits {
            needed: s,
            found: generators.len(),
        });
    }
    let p = DMatrix::from_fn(s, s, |j, i| generators[j].log[i]);
    let a = p.clone().try_inverse().ok_or(Error::SingularProjection)?;
    if !a.iter().all(|x| x.is_finite()) || p.determinant().abs() < LOG_RANK_TOL {
        return Err(Error::SingularProjection);
    }
    let args: Vec<Vec<f64>> = generators
        .iter()
        .map(|g| {
            emb.evaluate(&g.coeffs)
                .1
                .iter()
                .map(|z| principal_arg(*z))
                .collect()
        })
        .collect();
    let tail = DMatrix::from_fn(s, t, |j, k| generators[j].log[s + k]);
    let argm = DMatrix::from_fn(s, t, |j, k| args[j][k]);
    let b = &a * tail;
    let c = &a * argm;
    let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|i| m.row(i).iter().copied().collect())
            .collect()
    };
    Ok(BcData {
        a: rows(&a),
        b: rows(&b),
        c: rows(&c),
        args,
    })
}

/// Argument in `(-π, π]`.
fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -std::f64::consts::PI {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}
