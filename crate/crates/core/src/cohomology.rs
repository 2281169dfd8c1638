//! Cohomology of the Chevalley–Eilenberg complex `(Λg*, d)`, of its twisted
//! version `d_θ = d - θ∧·`, and of the character-twisted weight complexes
//! that compute the cohomology of a solvmanifold from finitely many
//! unitary characters.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{binomial, monomial_rank, monomials, GradedForm, Monomial};
use crate::lie::{BlockKind, LieAlgebra, MetaAbelianSplit};
use crate::linalg::Matrix;
use crate::scalar::{scale_of, RealScalar, Scalar};

/// Per-grade data of a cochain complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GradeData {
    /// `dim C^p`
    pub dim: usize,
    /// rank of `D_p: C^p → C^{p+1}`
    pub rank: usize,
    pub nullity: usize,
    pub betti: usize,
}

/// The differentials of a finite cochain complex together with their ranks.
#[derive(Debug, Clone)]
pub struct CochainComplexSnapshot<S> {
    /// `differentials[p]` maps grade `p` to grade `p + 1`.
    pub differentials: Vec<Matrix<S>>,
    pub grades: Vec<GradeData>,
}

impl<S: Scalar> CochainComplexSnapshot<S> {
    pub fn from_differentials(differentials: Vec<Matrix<S>>, tol: f64) -> Self {
        let ranks: Vec<usize> = differentials.par_iter().map(|d| d.rank(tol)).collect();
        let grades = differentials
            .iter()
            .enumerate()
            .map(|(p, d)| {
                let dim = d.cols();
                let nullity = dim - ranks[p];
                let incoming = if p == 0 { 0 } else { ranks[p - 1] };
                GradeData {
                    dim,
                    rank: ranks[p],
                    nullity,
                    betti: nullity - incoming,
                }
            })
            .collect();
        CochainComplexSnapshot {
            differentials,
            grades,
        }
    }

    pub fn betti(&self) -> Vec<usize> {
        self.grades.iter().map(|g| g.betti).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.grades.iter().map(|g| g.rank).collect()
    }

    /// `Σ (-1)^p betti_p`.
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.grades.iter().map(|g| g.betti))
    }

    /// `Σ (-1)^p dim C^p`, which must equal [`Self::euler_characteristic`].
    pub fn euler_characteristic_of_chains(&self) -> i64 {
        alternating_sum(self.grades.iter().map(|g| g.dim))
    }
}

fn alternating_sum(values: impl Iterator<Item = usize>) -> i64 {
    values
        .enumerate()
        .map(|(p, b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum()
}

/// Matrix of `η ↦ θ ∧ η` from `Λ^p` to `Λ^{p+|θ|}`.
pub fn left_wedge_matrix<S: Scalar>(theta: &GradedForm<S>, p: usize) -> Matrix<S> {
    let n = theta.dim();
    let q = theta.grade();
    let mut m: Matrix<S> = Matrix::zeros(binomial(n, p + q), binomial(n, p));
    for (col, mono) in monomials(n, p).into_iter().enumerate() {
        for (tm, tc) in theta.terms() {
            if let Some((w, neg)) = tm.wedge(mono) {
                let r = monomial_rank(w, n);
                let v = if neg { -tc.clone() } else { tc.clone() };
                m[(r, col)] = m[(r, col)].clone() + v;
            }
        }
    }
    m
}

/// Snapshot of `(Λg*, d)`.
pub fn ce_complex<S: Scalar>(g: &LieAlgebra<S>) -> CochainComplexSnapshot<S> {
    let diffs = (0..=g.dim())
        .into_par_iter()
        .map(|p| g.ce_differential(p))
        .collect();
    CochainComplexSnapshot::from_differentials(diffs, g.tol())
}

/// Betti numbers of the Lie algebra, `betti[p] = dim H^p(g)`.
pub fn betti<S: Scalar>(g: &LieAlgebra<S>) -> Vec<usize> {
    ce_complex(g).betti()
}

/// Zero test for `d(form)` relative to the size of the structure constants
/// and of the form.
pub(crate) fn is_closed<S: Scalar>(g: &LieAlgebra<S>, form: &GradedForm<S>) -> Result<bool> {
    let d = g.d(form)?;
    let scale = scale_of(g.constants()) * scale_of(form.terms().map(|(_, c)| c));
    Ok(d.is_zero(g.tol() * scale))
}

fn check_theta<S: Scalar>(g: &LieAlgebra<S>, theta: &GradedForm<S>) -> Result<()> {
    if theta.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: theta.dim(),
        });
    }
    if theta.grade() != 1 && !theta.is_empty() {
        return Err(Error::GradeMismatch {
            expected: 1,
            got: theta.grade(),
        });
    }
    if !is_closed(g, theta)? {
        return Err(Error::ThetaNotClosed);
    }
    Ok(())
}

fn theta_as_one_form<S: Scalar>(theta: &GradedForm<S>) -> GradedForm<S> {
    if theta.is_empty() {
        GradedForm::zero(theta.dim(), 1)
    } else {
        theta.clone()
    }
}

/// Matrix of `d_θ = d - θ∧·` on `Λ^p`.
pub fn twisted_differential<S: Scalar>(g: &LieAlgebra<S>, theta: &GradedForm<S>, p: usize) -> Matrix<S> {
    let d = g.ce_differential(p);
    let w = left_wedge_matrix(theta, p);
    d.sub(&w).expect("same shape")
}

/// Snapshot of `(Λg*, d_θ)`.
pub fn twisted_complex<S: Scalar>(
    g: &LieAlgebra<S>,
    theta: &GradedForm<S>,
) -> Result<CochainComplexSnapshot<S>> {
    check_theta(g, theta)?;
    let theta = theta_as_one_form(theta);
    let diffs = (0..=g.dim())
        .into_par_iter()
        .map(|p| twisted_differential(g, &theta, p))
        .collect();
    Ok(CochainComplexSnapshot::from_differentials(diffs, g.tol()))
}

/// `dim H^p_θ(g)` for every grade.
pub fn twisted_cohomology<S: Scalar>(g: &LieAlgebra<S>, theta: &GradedForm<S>) -> Result<Vec<usize>> {
    Ok(twisted_complex(g, theta)?.betti())
}

/// Outcome of [`twisted_exactness`].
#[derive(Debug, Clone, PartialEq)]
pub struct Exactness<S> {
    pub exact: bool,
    /// A 1-form `η` with `d_θ η = ω`, when one exists.
    pub witness: Option<GradedForm<S>>,
}

/// Decides whether the `d_θ`-closed 2-form `ω` is `d_θ`-exact.
///
/// The witness is the basic solution of the reduced system: free variables
/// are zero and pivots are taken at the lowest monomial ranks.
pub fn twisted_exactness<S: Scalar>(
    g: &LieAlgebra<S>,
    theta: &GradedForm<S>,
    omega: &GradedForm<S>,
) -> Result<Exactness<S>> {
    check_theta(g, theta)?;
    if omega.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: omega.dim(),
        });
    }
    if omega.grade() != 2 && !omega.is_empty() {
        return Err(Error::GradeMismatch {
            expected: 2,
            got: omega.grade(),
        });
    }
    let theta = theta_as_one_form(theta);
    let n = g.dim();
    let scale = scale_of(g.constants())
        * scale_of(theta.terms().map(|(_, c)| c))
        * scale_of(omega.terms().map(|(_, c)| c));
    let d2 = twisted_differential(g, &theta, 2);
    let rhs = if omega.is_empty() {
        vec![S::zero(); binomial(n, 2)]
    } else {
        omega.to_vector()
    };
    if !d2.mul_vec(&rhs)?.iter().all(|x| x.is_negligible(g.tol() * scale)) {
        return Err(Error::OmegaNotDThetaClosed);
    }
    let d1 = twisted_differential(g, &theta, 1);
    match d1.solve(&rhs, g.tol())? {
        None => Ok(Exactness {
            exact: false,
            witness: None,
        }),
        Some(x) => {
            let eta = GradedForm::from_vector(n, 1, &x);
            let back = d1.mul_vec(&x)?;
            let ok = back.iter().zip(&rhs).all(|(a, b)| a.approx_eq(b, g.tol() * 10.0));
            Ok(Exactness {
                exact: ok,
                witness: ok.then_some(eta),
            })
        }
    }
}

/// A character of `G` through its log-derivative `θ = λ + iμ`, with `λ` and
/// `μ` real functionals on `g` (coefficients on the dual basis).
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterWeight<S> {
    pub name: String,
    pub lambda: Vec<S>,
    pub mu: Vec<S>,
}

impl<S: Scalar> CharacterWeight<S> {
    pub fn trivial(dim: usize) -> Self {
        CharacterWeight {
            name: "trivial".into(),
            lambda: vec![S::zero(); dim],
            mu: vec![S::zero(); dim],
        }
    }
}

/// True iff no block of the split has `λ = 0` together with `μ ≠ 0`, i.e.
/// no eigencharacter of the semisimple part of `Ad` is a nontrivial unitary
/// character.
pub fn is_weakly_completely_solvable<S: Scalar>(split: &MetaAbelianSplit<S>, tol: f64) -> bool {
    let thr = tol * scale_of(split.blocks.iter().flat_map(|b| b.lambda.iter().chain(&b.mu)));
    split.blocks.iter().all(|b| {
        let unitary = b.lambda.iter().all(|x| x.is_negligible(thr));
        let rotating = b.mu.iter().any(|x| !x.is_negligible(thr));
        !(unitary && rotating)
    })
}

/// Cohomology of each character-twisted weight complex and their sum.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CharacterCohomology {
    pub per_character: Vec<(String, Vec<usize>)>,
    pub total: Vec<usize>,
}

/// Cohomology of `⊕_α (α · Λg*_C)^T` for the supplied characters.
///
/// For each character `α` with log-derivative `θ_α`, the complexified forms
/// of `Ad_s`-weight equal to the weight of `α` form a subcomplex under
/// `d + θ_α∧·`; its cohomology dimensions are summed over the characters.
/// The characters are assumed to be trivial on the lattice; that is not
/// checked here.
pub fn character_cohomology<S: RealScalar>(
    g: &LieAlgebra<S>,
    split: &MetaAbelianSplit<S>,
    characters: &[CharacterWeight<S>],
) -> Result<CharacterCohomology> {
    split.validate(g)?;
    let n = g.dim();
    let m = split.a_indices.len();
    let tol = g.tol();
    let thr = g.threshold();
    type C<S> = Complex<S>;

    // Complex basis: a-vectors and real-block vectors unchanged; a complex
    // block (v1, v2) becomes u = (v1 - i v2)/2 at v1's slot and its conjugate
    // at v2's slot, dual to γ1 + iγ2 and γ1 - iγ2.
    let zero = || C::new(S::zero(), S::zero());
    let mut weight: Vec<Vec<C<S>>> = vec![vec![zero(); m]; n];
    for b in &split.blocks {
        #[allow(clippy::needless_range_loop)]
        for p in 0..m {
            match b.kind {
                BlockKind::Real => weight[b.indices[0]][p] = C::new(b.lambda[p].clone(), S::zero()),
                BlockKind::Complex => {
                    weight[b.indices[0]][p] = C::new(b.lambda[p].clone(), b.mu[p].clone());
                    weight[b.indices[1]][p] = C::new(b.lambda[p].clone(), -b.mu[p].clone());
                }
            }
        }
    }
    let mut c = vec![zero(); n * n * n];
    for (p, &x) in split.a_indices.iter().enumerate() {
        for v in split.n_indices() {
            let w = weight[v][p].clone();
            c[(x * n + v) * n + v] = w.clone();
            c[(v * n + x) * n + v] = -w;
        }
    }
    let gc = LieAlgebra::new(g.names().to_vec(), c, tol)?;

    // monomial weights
    let n_idx = split.n_indices();
    let monomial_weight = |mono: Monomial| -> Vec<C<S>> {
        let mut w = vec![zero(); m];
        for i in mono.indices() {
            if n_idx.contains(&i) {
                for (acc, x) in w.iter_mut().zip(&weight[i]) {
                    *acc = acc.clone() + x.clone();
                }
            }
        }
        w
    };
    let same = |a: &[C<S>], b: &[C<S>]| a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol));

    let all_weights: Vec<Vec<Vec<C<S>>>> = (0..=n)
        .map(|p| monomials(n, p).into_iter().map(&monomial_weight).collect())
        .collect();

    let mut per_character = Vec::with_capacity(characters.len());
    let mut total = vec![0usize; n + 1];
    for (ci, ch) in characters.iter().enumerate() {
        if ch.lambda.len() != n || ch.mu.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: ch.lambda.len().min(ch.mu.len()),
            });
        }
        if g.derived_dim() > 0 {
            let span = g.derived_span();
            let lv = span.mul_vec(&ch.lambda)?;
            let mv = span.mul_vec(&ch.mu)?;
            if !lv.iter().chain(&mv).all(|x| x.is_negligible(thr)) {
                return Err(Error::CharacterNotAbelian(ch.name.clone()));
            }
        }
        if characters[..ci].iter().any(|o| {
            o.lambda
                .iter()
                .zip(&ch.lambda)
                .chain(o.mu.iter().zip(&ch.mu))
                .all(|(a, b)| a.approx_eq(b, tol))
        }) {
            return Err(Error::Parse(format!("character '{}' listed twice", ch.name)));
        }
        // characters factor through Ad_s, which is trivial on n
        if n_idx
            .iter()
            .any(|&i| !ch.lambda[i].is_negligible(thr) || !ch.mu[i].is_negligible(thr))
        {
            return Err(Error::CharacterNotRealizable(ch.name.clone()));
        }
        let target: Vec<C<S>> = split
            .a_indices
            .iter()
            .map(|&i| C::new(ch.lambda[i].clone(), ch.mu[i].clone()))
            .collect();
        if !all_weights.iter().flatten().any(|w| same(w, &target)) {
            return Err(Error::CharacterNotRealizable(ch.name.clone()));
        }

        // d + θ_α∧· = d - (-θ_α)∧·
        let neg_theta = GradedForm::from_vector(
            n,
            1,
            &(0..n)
                .map(|i| -C::new(ch.lambda[i].clone(), ch.mu[i].clone()))
                .collect::<Vec<_>>(),
        );
        let selected: Vec<Vec<usize>> = all_weights
            .iter()
            .map(|ws| {
                ws.iter()
                    .enumerate()
                    .filter(|(_, w)| same(w, &target))
                    .map(|(r, _)| r)
                    .collect()
            })
            .collect();
        let diffs: Vec<Matrix<C<S>>> = (0..=n)
            .into_par_iter()
            .map(|p| {
                let full = twisted_differential(&gc, &neg_theta, p);
                let rows = if p < n { &selected[p + 1][..] } else { &[][..] };
                full.select(rows, &selected[p])
            })
            .collect();
        let snap = CochainComplexSnapshot::from_differentials(diffs, tol);
        let b = snap.betti();
        for (t, x) in total.iter_mut().zip(&b) {
            *t += x;
        }
        per_character.push((ch.name.clone(), b));
    }
    Ok(CharacterCohomology { per_character, total })
}
