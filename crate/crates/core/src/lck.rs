//! Locally conformally symplectic and Kähler structures on Lie algebras:
//! Lee forms, integrability, the fundamental metric, the invariant Vaisman
//! obstruction, and harmonic forms for an invariant metric.

use serde::Serialize;

use crate::cohomology::{is_closed, twisted_exactness};
use crate::error::{Error, Result};
use crate::exterior::{binomial, gram_matrix, GradedForm};
use crate::lie::{LieAlgebra, MetaAbelianSplit};
use crate::linalg::Matrix;
use crate::scalar::{scale_of, RealScalar, Scalar};

/// Absolute residual below which a float form counts as harmonic.
pub const HARMONIC_RESIDUAL: f64 = 1e-7;

fn form_scale<S: Scalar>(f: &GradedForm<S>) -> f64 {
    scale_of(f.terms().map(|(_, c)| c))
}

fn check_form<S: Scalar>(g: &LieAlgebra<S>, f: &GradedForm<S>, grade: usize) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: f.dim(),
        });
    }
    if f.grade() != grade && !f.is_empty() {
        return Err(Error::GradeMismatch {
            expected: grade,
            got: f.grade(),
        });
    }
    Ok(())
}

fn regraded<S: Scalar>(f: &GradedForm<S>, grade: usize) -> GradedForm<S> {
    if f.is_empty() {
        GradedForm::zero(f.dim(), grade)
    } else {
        f.clone()
    }
}

/// `ω^{n/2} ≠ 0`.
pub fn is_nondegenerate<S: Scalar>(omega: &GradedForm<S>, tol: f64) -> Result<bool> {
    let n = omega.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let omega = regraded(omega, 2);
    let top = omega.power(n / 2)?;
    let scale = form_scale(&omega).powi((n / 2) as i32);
    Ok(!top.is_zero(tol * scale))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeeForm<S> {
    pub theta: GradedForm<S>,
    /// False when several 1-forms solve `dω = θ∧ω` (only in dimension 2);
    /// the returned one is then `θ = 0`.
    pub unique: bool,
}

/// The 1-form `θ` with `dω = θ∧ω`.
pub fn lee_form<S: Scalar>(g: &LieAlgebra<S>, omega: &GradedForm<S>) -> Result<LeeForm<S>> {
    check_form(g, omega, 2)?;
    let n = g.dim();
    if !is_nondegenerate(omega, g.tol())? {
        return Err(Error::Degenerate);
    }
    let omega = regraded(omega, 2);
    let rows = binomial(n, 3);
    let mut m = Matrix::zeros(rows, n);
    for k in 0..n {
        let col = GradedForm::basis(n, k).wedge(&omega)?;
        for (r, v) in col.to_vector().into_iter().enumerate() {
            m[(r, k)] = v;
        }
    }
    let d_omega = g.d(&omega)?;
    let rhs = if rows == 0 {
        Vec::new()
    } else {
        d_omega.to_vector()
    };
    let x = m.solve(&rhs, g.tol())?.ok_or(Error::NoLeeForm)?;
    let theta = GradedForm::from_vector(n, 1, &x);
    let scale = scale_of(g.constants()) * form_scale(&omega) * form_scale(&theta);
    if !d_omega.sub(&theta.wedge(&omega)?)?.is_zero(g.tol() * scale) {
        return Err(Error::NoLeeForm);
    }
    if !is_closed(g, &theta)? {
        return Err(Error::LeeFormNotClosed);
    }
    Ok(LeeForm {
        theta,
        unique: m.rank(g.tol()) == n,
    })
}

/// `dθ = 0`, `dω = θ∧ω` and `ω^{n/2} ≠ 0`.
pub fn is_lcs<S: Scalar>(g: &LieAlgebra<S>, omega: &GradedForm<S>, theta: &GradedForm<S>) -> Result<bool> {
    check_form(g, omega, 2)?;
    check_form(g, theta, 1)?;
    if !is_nondegenerate(omega, g.tol())? {
        return Ok(false);
    }
    let omega = regraded(omega, 2);
    let theta = regraded(theta, 1);
    if !is_closed(g, &theta)? {
        return Ok(false);
    }
    let diff = g.d(&omega)?.sub(&theta.wedge(&omega)?)?;
    let scale = scale_of(g.constants()) * form_scale(&omega) * form_scale(&theta);
    Ok(diff.is_zero(g.tol() * scale))
}

/// An endomorphism `J` of `g` with `J² = -1`; column `i` is `J e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure<S> {
    j: Matrix<S>,
}

impl<S: Scalar> ComplexStructure<S> {
    pub fn new(j: Matrix<S>, tol: f64) -> Result<Self> {
        if !j.is_square() {
            return Err(Error::DimensionMismatch {
                expected: j.rows(),
                got: j.cols(),
            });
        }
        let sq = j.mul(&j)?;
        let n = j.rows();
        let thr = tol * scale_of(j.entries()).powi(2);
        let ok = (0..n).all(|a| {
            (0..n).all(|b| {
                let target = if a == b { -S::one() } else { S::zero() };
                (sq[(a, b)].clone() - target).is_negligible(thr)
            })
        });
        if !ok {
            return Err(Error::JNotAlmostComplex);
        }
        Ok(ComplexStructure { j })
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.j
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        self.j.mul_vec(v).expect("matching dimension")
    }
}

/// The Nijenhuis tensor on basis pairs, stored like structure constants:
/// component `k` of `N(e_i, e_j)` at `(i * n + j) * n + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Nijenhuis<S> {
    dim: usize,
    values: Vec<S>,
}

impl<S: Scalar> Nijenhuis<S> {
    pub fn get(&self, i: usize, j: usize) -> &[S] {
        let n = self.dim;
        &self.values[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn is_zero(&self, threshold: f64) -> bool {
        self.values.iter().all(|x| x.is_negligible(threshold))
    }
}

/// `N(X,Y) = [JX,JY] - [X,Y] - J[JX,Y] - J[X,JY]`.
pub fn nijenhuis<S: Scalar>(g: &LieAlgebra<S>, j: &ComplexStructure<S>) -> Result<Nijenhuis<S>> {
    let n = g.dim();
    if j.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: j.dim(),
        });
    }
    let unit = |i: usize| -> Vec<S> {
        (0..n)
            .map(|k| if k == i { S::one() } else { S::zero() })
            .collect()
    };
    let je: Vec<Vec<S>> = (0..n).map(|i| j.apply(&unit(i))).collect();
    let mut values = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            let x = unit(a);
            let y = unit(b);
            let t1 = g.bracket(&je[a], &je[b]);
            let t2 = g.bracket(&x, &y);
            let t3 = j.apply(&g.bracket(&je[a], &y));
            let t4 = j.apply(&g.bracket(&x, &je[b]));
            for k in 0..n {
                values.push(t1[k].clone() - t2[k].clone() - t3[k].clone() - t4[k].clone());
            }
        }
    }
    Ok(Nijenhuis { dim: n, values })
}

pub fn is_integrable<S: Scalar>(g: &LieAlgebra<S>, j: &ComplexStructure<S>) -> Result<bool> {
    let thr = g.threshold() * scale_of(j.matrix().entries()).powi(2);
    Ok(nijenhuis(g, j)?.is_zero(thr))
}

/// A symmetric positive definite inner product on `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantMetric<S> {
    g: Matrix<S>,
}

impl<S: RealScalar> InvariantMetric<S> {
    pub fn new(g: Matrix<S>, tol: f64) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::DimensionMismatch {
                expected: g.rows(),
                got: g.cols(),
            });
        }
        if !g.is_symmetric(tol) {
            return Err(Error::NotSymmetric);
        }
        if !g.is_positive_definite(tol) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(InvariantMetric { g })
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// Gram matrix of the induced inner product on `Λ^p g*`.
    pub fn form_gram(&self, p: usize, tol: f64) -> Result<Matrix<S>> {
        gram_matrix(&self.g.inverse(tol)?, p, tol)
    }
}

/// The metric `G(X,Y) = ω(X, JY)`.
pub fn metric_from<S: RealScalar>(
    g: &LieAlgebra<S>,
    omega: &GradedForm<S>,
    j: &ComplexStructure<S>,
) -> Result<InvariantMetric<S>> {
    check_form(g, omega, 2)?;
    if j.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: j.dim(),
        });
    }
    let w = regraded(omega, 2).skew_matrix()?;
    let jm = j.matrix();
    let pulled = jm.transpose().mul(&w)?.mul(jm)?;
    let thr = g.tol() * form_scale(omega) * scale_of(jm.entries()).powi(2);
    if !pulled.sub(&w)?.is_zero(thr) {
        return Err(Error::NotJInvariant);
    }
    let metric = w.mul(jm)?;
    if !metric.is_positive_definite(g.tol()) {
        return Err(Error::NotPositive);
    }
    InvariantMetric::new(metric, g.tol())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    NoVaismanPossible,
    Inconclusive,
}

/// Invariant-level evidence that an LCS structure admits no Vaisman metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionCertificate<S> {
    pub split: MetaAbelianSplit<S>,
    pub dim_derived: usize,
    pub dim_g: usize,
    /// `dim [g, g] > dim g / 2`.
    pub hypothesis_ok: bool,
    pub theta: GradedForm<S>,
    /// Part of `ω` in `Λ²a* ⊕ a*∧n*`.
    pub omega_prime: GradedForm<S>,
    /// Part of `ω` in `Λ²n*`.
    pub omega_double_prime: GradedForm<S>,
    pub omega_dpp_nonzero: bool,
    pub theta_in_a: bool,
    /// `d_θ(Λ¹g*) ⊆ Λ²a* ⊕ a*∧n*`.
    pub containment_holds: bool,
    pub d_theta_exact: bool,
    /// `η` with `d_θ η = ω`, when `ω` is exact.
    pub witness: Option<GradedForm<S>>,
    pub verdict: Verdict,
}

/// Splits `ω` along the meta-abelian decomposition and decides whether its
/// class in `H²_θ(g)` can vanish.
///
/// Two independent checks are made: the structural one (if every `d_θ`-exact
/// 2-form lies in `Λ²a* ⊕ a*∧n*`, a nonzero `Λ²n*` part forbids
/// exactness) and a rank computation of `d_θ`. When both apply they must
/// agree.
pub fn vaisman_obstruction<S: Scalar>(
    g: &LieAlgebra<S>,
    split: &MetaAbelianSplit<S>,
    omega: &GradedForm<S>,
    theta: &GradedForm<S>,
) -> Result<ObstructionCertificate<S>> {
    split.validate(g)?;
    if !is_lcs(g, omega, theta)? {
        return Err(Error::NotLcs);
    }
    let n = g.dim();
    let omega = regraded(omega, 2);
    let theta = regraded(theta, 1);
    let n_mask = split.n_mask();
    let a_mask = split.a_mask();
    let touches_a = |m: crate::exterior::Monomial| !m.is_subset_of(n_mask);

    let dim_derived = g.derived_dim();
    let hypothesis_ok = 2 * dim_derived > n;
    let omega_prime = omega.filter(touches_a);
    let omega_double_prime = omega.filter(|m| !touches_a(m));
    let thr = g.tol() * form_scale(&omega);
    let omega_dpp_nonzero = !omega_double_prime.is_zero(thr);
    let theta_in_a = theta
        .filter(|m| !m.is_subset_of(a_mask))
        .is_zero(g.tol() * form_scale(&theta));

    let cthr = g.threshold() * form_scale(&theta);
    let containment_holds = (0..n).all(|k| {
        let e = GradedForm::basis(n, k);
        let dt = g
            .d(&e)
            .and_then(|d| d.sub(&theta.wedge(&e)?))
            .expect("same dimension");
        dt.filter(|m| !touches_a(m)).is_zero(cthr)
    });

    let exactness = twisted_exactness(g, &theta, &omega)?;
    if containment_holds && omega_dpp_nonzero && exactness.exact {
        return Err(Error::InconsistentCertificate(
            "omega has a nonzero part in Λ²n* yet solves d_θ η = ω".into(),
        ));
    }
    let verdict = if hypothesis_ok && omega_dpp_nonzero && !exactness.exact {
        Verdict::NoVaismanPossible
    } else {
        Verdict::Inconclusive
    };
    Ok(ObstructionCertificate {
        split: split.clone(),
        dim_derived,
        dim_g: n,
        hypothesis_ok,
        theta,
        omega_prime,
        omega_double_prime,
        omega_dpp_nonzero,
        theta_in_a,
        containment_holds,
        d_theta_exact: exactness.exact,
        witness: exactness.witness,
        verdict,
    })
}

/// Harmonic `p`-forms: `ker D_p ∩ ker δ_p`, with `δ_p` the adjoint of
/// `D_{p-1}` for the inner product induced by `metric`.
pub fn harmonic_basis<S: RealScalar>(
    g: &LieAlgebra<S>,
    metric: &InvariantMetric<S>,
    p: usize,
) -> Result<Vec<GradedForm<S>>> {
    let n = g.dim();
    if metric.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: metric.dim(),
        });
    }
    if p > n {
        return Err(Error::GradeMismatch { expected: n, got: p });
    }
    if !g.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    let system = harmonic_system(g, metric, p)?;
    Ok(system
        .nullspace(g.tol())
        .into_iter()
        .map(|v| GradedForm::from_vector(n, p, &v))
        .collect())
}

fn harmonic_system<S: RealScalar>(
    g: &LieAlgebra<S>,
    metric: &InvariantMetric<S>,
    p: usize,
) -> Result<Matrix<S>> {
    let d = g.ce_differential(p);
    if p == 0 {
        return Ok(d);
    }
    // ker δ_p = ker(D_{p-1}^T Gram_p) since Gram_{p-1} is invertible
    let co = g
        .ce_differential(p - 1)
        .transpose()
        .mul(&metric.form_gram(p, g.tol())?)?;
    d.vstack(&co)
}

/// A pair of harmonic forms whose product is not harmonic.
#[derive(Debug, Clone, PartialEq)]
pub struct FailingPair<S> {
    pub left: GradedForm<S>,
    pub right: GradedForm<S>,
    pub product: GradedForm<S>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalityReport<S> {
    pub formal: bool,
    /// Harmonic dimension in each grade.
    pub harmonic_dims: Vec<usize>,
    pub failing_pair: Option<FailingPair<S>>,
}

/// Checks that the wedge of any two harmonic basis forms is harmonic.
pub fn formality_check<S: RealScalar>(
    g: &LieAlgebra<S>,
    metric: &InvariantMetric<S>,
) -> Result<FormalityReport<S>> {
    let n = g.dim();
    let bases: Vec<Vec<GradedForm<S>>> = (0..=n)
        .map(|p| harmonic_basis(g, metric, p))
        .collect::<Result<_>>()?;
    let grams: Vec<Matrix<S>> = (0..=n)
        .map(|p| metric.form_gram(p, g.tol()))
        .collect::<Result<_>>()?;
    let harmonic_dims = bases.iter().map(Vec::len).collect();
    for p in 1..=n {
        for q in p..=n - p {
            for (i, left) in bases[p].iter().enumerate() {
                let start = if p == q { i } else { 0 };
                for right in &bases[q][start..] {
                    let product = left.wedge(right)?;
                    let residual = projection_residual(&product, &bases[p + q], &grams[p + q], g.tol())?;
                    let bad = if S::EXACT {
                        residual != 0.0
                    } else {
                        residual > HARMONIC_RESIDUAL
                    };
                    if bad {
                        return Ok(FormalityReport {
                            formal: false,
                            harmonic_dims,
                            failing_pair: Some(FailingPair {
                                left: left.clone(),
                                right: right.clone(),
                                product,
                                residual,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(FormalityReport {
        formal: true,
        harmonic_dims,
        failing_pair: None,
    })
}

/// Norm of the component of `w` orthogonal to `span(basis)`, for the inner
/// product with Gram matrix `gram`.
fn projection_residual<S: RealScalar>(
    w: &GradedForm<S>,
    basis: &[GradedForm<S>],
    gram: &Matrix<S>,
    tol: f64,
) -> Result<f64> {
    let dim = gram.rows();
    let wv = if w.is_empty() {
        vec![S::zero(); dim]
    } else {
        w.to_vector()
    };
    let inner = |x: &[S], y: &[S]| -> S {
        let gy = gram.mul_vec(y).expect("matching dimension");
        x.iter()
            .zip(&gy)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    };
    let mut r = wv.clone();
    if !basis.is_empty() {
        let vecs: Vec<Vec<S>> = basis.iter().map(|b| b.to_vector()).collect();
        let k = vecs.len();
        let normal = Matrix::from_fn(k, k, |i, j| inner(&vecs[i], &vecs[j]));
        let rhs: Vec<S> = vecs.iter().map(|v| inner(v, &wv)).collect();
        let c = normal.solve(&rhs, tol)?.ok_or(Error::Singular)?;
        for (ci, v) in c.iter().zip(&vecs) {
            for (ri, vi) in r.iter_mut().zip(v) {
                *ri = ri.clone() - ci.clone() * vi.clone();
            }
        }
    }
    let norm2 = inner(&r, &r);
    if S::EXACT {
        return Ok(if norm2.is_zero() {
            0.0
        } else {
            norm2.to_f64().sqrt().max(f64::MIN_POSITIVE)
        });
    }
    Ok(norm2.to_f64().max(0.0).sqrt())
}
