//! Assembly of the solvable Lie algebra `R^s ⋉ (R^s × C^t)` from `(b, c)`.

use crate::error::{Error, Result};
use crate::exterior::GradedForm;
use crate::lck::{metric_from, ComplexStructure, InvariantMetric};
use crate::lie::{build_meta_abelian, BlockSpec, LieAlgebra, MetaAbelianSplit};
use crate::linalg::Matrix;
use crate::scalar::{RealScalar, Scalar};

/// An OT-type algebra with its complex structure and, for `t = 1`, the LCK
/// pair and the metric it defines.
#[derive(Debug, Clone)]
pub struct OtAlgebra<S> {
    pub s: usize,
    pub t: usize,
    pub algebra: LieAlgebra<S>,
    pub split: MetaAbelianSplit<S>,
    pub j: ComplexStructure<S>,
    pub omega: Option<GradedForm<S>>,
    pub theta: Option<GradedForm<S>>,
}

/// Basis names: `alpha1..alphas` span `a`, then `beta1..betas` (real
/// blocks), then `gamma1..gamma2t` (complex blocks in pairs).
pub fn ot_names(s: usize, t: usize) -> Vec<String> {
    (1..=s)
        .map(|i| format!("alpha{i}"))
        .chain((1..=s).map(|i| format!("beta{i}")))
        .chain((1..=2 * t).map(|i| format!("gamma{i}")))
        .collect()
}

/// Index of `alpha_i` (0-based `i`).
pub fn alpha(i: usize) -> usize {
    i
}

pub fn beta(s: usize, i: usize) -> usize {
    s + i
}

pub fn gamma(s: usize, k: usize) -> usize {
    2 * s + k
}

/// Builds the algebra with `ad(alpha_i)` acting by `1` on `beta_i` and by
/// `½ b_ik + √-1 c_ik` on the `k`-th complex plane.
///
/// `b` and `c` are `s × t`. The complex structure has `(1,0)`-forms
/// `alpha_i + √-1 beta_i` and `gamma_{2k-1} + √-1 gamma_{2k}`.
pub fn ot_structure<S: Scalar>(b: &[Vec<S>], c: &[Vec<S>], tol: f64) -> Result<OtAlgebra<S>> {
    let s = b.len();
    if s == 0 {
        return Err(Error::MalformedBlock("s must be positive".into()));
    }
    let t = b[0].len();
    if t == 0 {
        return Err(Error::MalformedBlock("t must be positive".into()));
    }
    if c.len() != s || b.iter().chain(c).any(|r| r.len() != t) {
        return Err(Error::MalformedBlock("b and c must both be s × t".into()));
    }
    let half = S::from_ratio(1, 2);
    let mut blocks = Vec::with_capacity(s + t);
    for i in 0..s {
        blocks.push(BlockSpec::real(
            (0..s)
                .map(|p| if p == i { S::one() } else { S::zero() })
                .collect(),
        ));
    }
    for k in 0..t {
        blocks.push(BlockSpec::complex(
            (0..s).map(|i| half.clone() * b[i][k].clone()).collect(),
            (0..s).map(|i| c[i][k].clone()).collect(),
        ));
    }
    let (algebra, split) = build_meta_abelian(s, &blocks, tol)?;
    let algebra = algebra.with_names(ot_names(s, t))?;
    let n = algebra.dim();

    // α∘J = -β and β∘J = α, so J alpha_i = beta_i and J beta_i = -alpha_i
    let mut jm = Matrix::zeros(n, n);
    for i in 0..s {
        jm[(beta(s, i), alpha(i))] = S::one();
        jm[(alpha(i), beta(s, i))] = -S::one();
    }
    for k in 0..t {
        let (g1, g2) = (gamma(s, 2 * k), gamma(s, 2 * k + 1));
        jm[(g2, g1)] = S::one();
        jm[(g1, g2)] = -S::one();
    }
    let j = ComplexStructure::new(jm, tol)?;

    let (omega, theta) = if t == 1 {
        let mut terms = Vec::new();
        for i in 0..s {
            for l in 0..s {
                let coeff = if i == l { S::from_i64(2) } else { S::one() };
                terms.push((vec![alpha(i), beta(s, l)], coeff));
            }
        }
        terms.push((vec![gamma(s, 0), gamma(s, 1)], S::one()));
        let omega = GradedForm::from_terms(n, 2, terms)?;
        let theta = GradedForm::from_terms(n, 1, (0..s).map(|i| (vec![alpha(i)], S::one())).collect())?;
        (Some(omega), Some(theta))
    } else {
        (None, None)
    };
    Ok(OtAlgebra {
        s,
        t,
        algebra,
        split,
        j,
        omega,
        theta,
    })
}

impl<S: RealScalar> OtAlgebra<S> {
    /// `G(X, Y) = ω(X, JY)` for `t = 1`.
    pub fn metric(&self) -> Result<Option<InvariantMetric<S>>> {
        match &self.omega {
            Some(w) => Ok(Some(metric_from(&self.algebra, w, &self.j)?)),
            None => Ok(None),
        }
    }
}
