//! Sparse exterior algebra over the dual of an `n`-dimensional space.
//!
//! Basis monomials `e^{i_1} ∧ ... ∧ e^{i_p}` (with `i_1 < ... < i_p`) are
//! stored as bitmasks, so `n` is limited to 64. Monomials of one grade are
//! ordered lexicographically by their index lists and ranked accordingly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{RealScalar, Scalar};

pub const MAX_DIM: usize = 64;

/// A basis monomial, i.e. a subset of `[0, n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const EMPTY: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn single(i: usize) -> Self {
        Monomial(1u64 << i)
    }

    /// Builds a monomial from strictly increasing indices.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        let mut last: Option<usize> = None;
        for &i in indices {
            if i >= MAX_DIM {
                return Err(Error::DimensionTooLarge(i + 1));
            }
            if last.is_some_and(|l| l >= i) {
                return Err(Error::Parse(format!(
                    "monomial indices must be strictly increasing: {indices:?}"
                )));
            }
            bits |= 1 << i;
            last = Some(i);
        }
        Ok(Monomial(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.grade());
        let mut b = self.0;
        while b != 0 {
            out.push(b.trailing_zeros() as usize);
            b &= b - 1;
        }
        out
    }

    /// Largest index plus one (0 for the empty monomial).
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// `self ∧ other = sign * (self ∪ other)`, or `None` if they share an index.
    pub fn wedge(self, other: Monomial) -> Option<(Monomial, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (a in self, b in other) with a > b
        let mut inversions = 0u32;
        let mut b = other.0;
        while b != 0 {
            let i = b.trailing_zeros();
            let above = if i >= 63 { 0 } else { !((1u64 << (i + 1)) - 1) };
            inversions += (self.0 & above).count_ones();
            b &= b - 1;
        }
        Some((Monomial(self.0 | other.0), inversions % 2 == 1))
    }

    pub fn is_subset_of(self, mask: u64) -> bool {
        self.0 & !mask == 0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            if self.0 == other.0 {
                return Ordering::Equal;
            }
            let d = self.0 ^ other.0;
            let low = d & d.wrapping_neg();
            if self.0 & low != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{:?}", self.indices())
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Position of `m` among the grade-`|m|` monomials of `[0, n)` in lex order.
pub fn monomial_rank(m: Monomial, n: usize) -> usize {
    let p = m.grade();
    let mut rank = 0;
    let mut next = 0;
    for (j, i) in m.indices().into_iter().enumerate() {
        for x in next..i {
            rank += binomial(n - 1 - x, p - 1 - j);
        }
        next = i + 1;
    }
    rank
}

/// Inverse of [`monomial_rank`].
pub fn monomial_unrank(mut rank: usize, n: usize, p: usize) -> Monomial {
    let mut bits = 0u64;
    let mut x = 0;
    for j in 0..p {
        loop {
            let block = binomial(n - 1 - x, p - 1 - j);
            if rank < block {
                break;
            }
            rank -= block;
            x += 1;
        }
        bits |= 1 << x;
        x += 1;
    }
    Monomial(bits)
}

/// All grade-`p` monomials of `[0, n)` in rank order.
pub fn monomials(n: usize, p: usize) -> Vec<Monomial> {
    (0..binomial(n, p)).map(|r| monomial_unrank(r, n, p)).collect()
}

/// A homogeneous element of `Λ^p` of an `n`-dimensional dual space.
#[derive(Clone, PartialEq)]
pub struct GradedForm<S> {
    dim: usize,
    grade: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> GradedForm<S> {
    pub fn zero(dim: usize, grade: usize) -> Self {
        GradedForm {
            dim,
            grade,
            terms: BTreeMap::new(),
        }
    }

    /// The unit 0-form.
    pub fn unit(dim: usize) -> Self {
        Self::monomial(dim, Monomial::EMPTY, S::one())
    }

    pub fn monomial(dim: usize, m: Monomial, coeff: S) -> Self {
        let mut f = Self::zero(dim, m.grade());
        f.add_term(m, coeff);
        f
    }

    /// The basis 1-form `e^i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        Self::monomial(dim, Monomial::single(i), S::one())
    }

    /// Builds a form from index lists in any order; each list is sorted with
    /// the corresponding permutation sign and lists with a repeated index
    /// contribute nothing.
    pub fn from_terms(dim: usize, grade: usize, terms: Vec<(Vec<usize>, S)>) -> Result<Self> {
        check_dim(dim)?;
        let mut f = Self::zero(dim, grade);
        for (idx, c) in terms {
            if idx.len() != grade {
                return Err(Error::GradeMismatch {
                    expected: grade,
                    got: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: bad + 1,
                });
            }
            let mut acc = Some((Monomial::EMPTY, false));
            for &i in &idx {
                acc = acc.and_then(|(m, s)| m.wedge(Monomial::single(i)).map(|(m2, s2)| (m2, s ^ s2)));
            }
            if let Some((m, neg)) = acc {
                f.add_term(m, if neg { -c } else { c });
            }
        }
        Ok(f)
    }

    /// Reads coefficients indexed by monomial rank.
    pub fn from_vector(dim: usize, grade: usize, v: &[S]) -> Self {
        let mut f = Self::zero(dim, grade);
        for (r, c) in v.iter().enumerate() {
            f.add_term(monomial_unrank(r, dim, grade), c.clone());
        }
        f
    }

    pub fn to_vector(&self) -> Vec<S> {
        let mut v = vec![S::zero(); binomial(self.dim, self.grade)];
        for (m, c) in &self.terms {
            v[monomial_rank(*m, self.dim)] = c.clone();
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> S {
        self.terms.get(&m).cloned().unwrap_or_else(S::zero)
    }

    /// Zero test; coefficients below `tol` times the largest one are ignored
    /// for approximate backends.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(tol))
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.grade(), self.grade);
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self.grade != other.grade && !self.terms.is_empty() && !other.terms.is_empty() {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                got: other.grade,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = if self.terms.is_empty() {
            other.clone()
        } else {
            self.clone()
        };
        if !self.terms.is_empty() {
            for (m, c) in &other.terms {
                out.add_term(*m, c.clone());
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero(self.dim, self.grade);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone() * k.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = Self::zero(self.dim, self.grade + other.grade);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.wedge(*mb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `self ∧ ... ∧ self` (`k` factors; the unit form for `k = 0`).
    pub fn power(&self, k: usize) -> Result<Self> {
        let mut acc = Self::unit(self.dim);
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Self {
        GradedForm {
            dim: self.dim,
            grade: self.grade,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drops coefficients at or below `tol` times the largest coefficient.
    pub fn pruned(&self, tol: f64) -> Self {
        if S::EXACT {
            return self.clone();
        }
        let scale = crate::scalar::scale_of(self.terms.values());
        self.filter(|m| !self.terms[&m].is_negligible(tol * scale))
    }

    /// Coefficient-wise comparison within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self.sub(other).is_ok_and(|d| {
                let scale = crate::scalar::scale_of(self.terms.values().chain(other.terms.values()));
                d.is_zero(tol * scale)
            })
    }

    /// Support as a bitmask of every index used by some term.
    pub fn support_mask(&self) -> u64 {
        self.terms.keys().fold(0, |acc, m| acc | m.bits())
    }

    /// For a 2-form, the skew matrix `Ω[i][j] = ω(e_i, e_j)`.
    pub fn skew_matrix(&self) -> Result<Matrix<S>> {
        if self.grade != 2 && !self.terms.is_empty() {
            return Err(Error::GradeMismatch {
                expected: 2,
                got: self.grade,
            });
        }
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (mono, c) in &self.terms {
            let idx = mono.indices();
            m[(idx[0], idx[1])] = c.clone();
            m[(idx[1], idx[0])] = -c.clone();
        }
        Ok(m)
    }

    /// Converts coefficients into another scalar type.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GradedForm<T> {
        let mut out = GradedForm::zero(self.dim, self.grade);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }
}

impl<S: fmt::Debug> fmt::Debug for GradedForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0[grade {}]", self.grade);
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c:?}*{m:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionTooLarge(dim))
    } else {
        Ok(())
    }
}

/// Gram matrix of the inner product induced on `Λ^p` by `metric`:
/// `⟨e^I, e^J⟩ = det metric[I, J]`, rows and columns indexed by monomial rank.
///
/// `metric` is the inner product on the degree-one generators themselves, so
/// for forms on a Lie algebra with metric `G` pass `G^{-1}`.
pub fn gram_matrix<S: RealScalar>(metric: &Matrix<S>, p: usize, tol: f64) -> Result<Matrix<S>> {
    let n = metric.rows();
    if !metric.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: metric.cols(),
        });
    }
    check_dim(n)?;
    if !metric.is_positive_definite(tol) {
        return Err(Error::NotPositiveDefinite);
    }
    let basis = monomials(n, p);
    let idx: Vec<Vec<usize>> = basis.iter().map(|m| m.indices()).collect();
    let mut g = Matrix::zeros(basis.len(), basis.len());
    for a in 0..basis.len() {
        for b in a..basis.len() {
            let v = metric.select(&idx[a], &idx[b]).determinant()?;
            g[(a, b)] = v.clone();
            g[(b, a)] = v;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type F = GradedForm<Rational>;

    fn e(n: usize, i: usize) -> F {
        F::basis(n, i)
    }

    #[test]
    fn wedge_examples() {
        assert!(e(3, 1).wedge(&e(3, 1)).unwrap().is_empty());
        let a = e(3, 2).wedge(&e(3, 1)).unwrap();
        let b = e(3, 1).wedge(&e(3, 2)).unwrap();
        assert_eq!(a, b.scale(&Rational::from_i64(-1)));
        let sum = e(2, 0).add(&e(2, 1)).unwrap();
        assert!(sum.wedge(&e(2, 0).wedge(&e(2, 1)).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn wedge_dimension_mismatch() {
        assert!(matches!(
            e(3, 0).wedge(&e(4, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(monomial_rank(Monomial::EMPTY, 5), 0);
        assert_eq!(monomial_rank(Monomial::from_indices(&[0, 1]).unwrap(), 4), 0);
        // lex enumeration of pairs in [0,4): 01 02 03 12 13 23
        let mut pairs = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                pairs.push(vec![i, j]);
            }
        }
        let pos = pairs.iter().position(|p| p == &vec![2, 3]).unwrap();
        assert_eq!(pos, 5);
        assert_eq!(monomial_rank(Monomial::from_indices(&[2, 3]).unwrap(), 4), pos);
    }

    #[test]
    fn rank_order_matches_monomial_order() {
        let ms = monomials(6, 3);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn from_terms_sorts_with_sign() {
        let f = F::from_terms(3, 2, vec![(vec![1, 0], Rational::from_i64(1))]).unwrap();
        assert_eq!(
            f.coeff(Monomial::from_indices(&[0, 1]).unwrap()),
            Rational::from_i64(-1)
        );
        let z = F::from_terms(3, 2, vec![(vec![1, 1], Rational::from_i64(1))]).unwrap();
        assert!(z.is_empty());
        assert!(F::from_terms(3, 2, vec![(vec![1], Rational::from_i64(1))]).is_err());
        assert!(F::from_terms(3, 1, vec![(vec![3], Rational::from_i64(1))]).is_err());
    }

    #[test]
    fn gram_examples() {
        let id = Matrix::<Rational>::identity(4);
        for p in 0..=4 {
            assert_eq!(
                gram_matrix(&id, p, 0.0).unwrap(),
                Matrix::identity(binomial(4, p))
            );
        }
        let d = Matrix::from_rows(vec![
            vec![Rational::from_i64(2), Rational::from_i64(0)],
            vec![Rational::from_i64(0), Rational::from_i64(2)],
        ])
        .unwrap();
        let g = gram_matrix(&d, 2, 0.0).unwrap();
        assert_eq!(g.rows(), 1);
        assert_eq!(g[(0, 0)], Rational::from_i64(4));
        let bad = Matrix::from_rows(vec![
            vec![Rational::from_i64(1), Rational::from_i64(2)],
            vec![Rational::from_i64(2), Rational::from_i64(1)],
        ])
        .unwrap();
        assert!(matches!(
            gram_matrix(&bad, 1, 0.0),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn skew_matrix_of_two_form() {
        let w = e(3, 0).wedge(&e(3, 2)).unwrap();
        let m = w.skew_matrix().unwrap();
        assert_eq!(m[(0, 2)], Rational::from_i64(1));
        assert_eq!(m[(2, 0)], Rational::from_i64(-1));
    }
}
