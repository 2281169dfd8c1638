//! Lie algebras given by structure constants, their Chevalley–Eilenberg
//! differential, and meta-abelian semidirect products `a ⋉ n`.
//!
//! Sign convention: for a 1-form `η`, `dη(X, Y) = -η([X, Y])`, extended to
//! higher degrees as a degree +1 antiderivation. With `[e_i, e_j] = Σ c_ijk e_k`
//! this gives `d e^k = -Σ_{i<j} c_ijk e^i ∧ e^j`.

use crate::error::{Error, Result};
use crate::exterior::{binomial, check_dim, monomial_rank, monomials, GradedForm, Monomial};
use crate::linalg::Matrix;
use crate::scalar::{scale_of, RealScalar, Scalar};

/// `[e_i, e_j] = Σ c_k e_k` as `(i, j, [(k, c_k)])`.
pub type Bracket<S> = (usize, usize, Vec<(usize, S)>);

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<S> {
    names: Vec<String>,
    /// `c[(i * n + j) * n + k]`
    constants: Vec<S>,
    tol: f64,
    /// `d e^k` for each basis 1-form.
    d_basis: Vec<GradedForm<S>>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Validates antisymmetry and the Jacobi identity of a dense `n×n×n` array.
    pub fn new(names: Vec<String>, constants: Vec<S>, tol: f64) -> Result<Self> {
        let n = names.len();
        check_dim(n)?;
        if constants.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                got: constants.len(),
            });
        }
        let thr = tol * scale_of(&constants);
        let at = |i: usize, j: usize, k: usize| &constants[(i * n + j) * n + k];
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let s = at(i, j, k).clone() + at(j, i, k).clone();
                    if !s.is_negligible(thr) {
                        return Err(Error::AntisymmetryViolation(i, j));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut r = S::zero();
                        for m in 0..n {
                            r = r
                                + at(i, j, m).clone() * at(m, k, l).clone()
                                + at(j, k, m).clone() * at(m, i, l).clone()
                                + at(k, i, m).clone() * at(m, j, l).clone();
                        }
                        if !r.is_negligible(thr) {
                            return Err(Error::JacobiViolation {
                                i,
                                j,
                                k,
                                residual: format!("{r:?}"),
                            });
                        }
                    }
                }
            }
        }
        let d_basis = (0..n)
            .map(|k| {
                let mut terms = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let c = at(i, j, k);
                        if !c.is_zero() {
                            terms.push((vec![i, j], -c.clone()));
                        }
                    }
                }
                GradedForm::from_terms(n, 2, terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LieAlgebra {
            names,
            constants,
            tol,
            d_basis,
        })
    }

    /// Builds an algebra from nonzero brackets `[e_i, e_j] = Σ coeff e_k`.
    /// Each listed pair also fixes `[e_j, e_i]`; listing both orders with
    /// non-opposite values, or `i == j` with a nonzero value, is an
    /// antisymmetry violation.
    pub fn from_brackets(names: Vec<String>, brackets: &[Bracket<S>], tol: f64) -> Result<Self> {
        let n = names.len();
        check_dim(n)?;
        let mut c = vec![S::zero(); n * n * n];
        let mut set = vec![false; n * n];
        for (i, j, terms) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: i.max(j) + 1,
                });
            }
            let mut row = vec![S::zero(); n];
            for (k, v) in terms {
                if *k >= n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: k + 1,
                    });
                }
                row[*k] = row[*k].clone() + v.clone();
            }
            if i == j {
                if row.iter().any(|x| !x.is_zero()) {
                    return Err(Error::AntisymmetryViolation(i, j));
                }
                continue;
            }
            if set[i * n + j] {
                return Err(Error::Parse(format!("bracket ({i},{j}) listed twice")));
            }
            if set[j * n + i] {
                let thr = tol * scale_of(&row);
                for k in 0..n {
                    let s = row[k].clone() + c[(j * n + i) * n + k].clone();
                    if !s.is_negligible(thr) {
                        return Err(Error::AntisymmetryViolation(i.min(j), i.max(j)));
                    }
                }
            }
            for (k, v) in row.into_iter().enumerate() {
                c[(j * n + i) * n + k] = -v.clone();
                c[(i * n + j) * n + k] = v;
            }
            set[i * n + j] = true;
        }
        Self::new(names, c, tol)
    }

    pub fn abelian(n: usize, tol: f64) -> Result<Self> {
        Self::new(default_names(n), vec![S::zero(); n * n * n], tol)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: names.len(),
            });
        }
        self.names = names;
        Ok(self)
    }

    /// `c_ijk`, the `e_k` component of `[e_i, e_j]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &S {
        let n = self.dim();
        &self.constants[(i * n + j) * n + k]
    }

    pub fn constants(&self) -> &[S] {
        &self.constants
    }

    /// Threshold below which an entry of size `scale` counts as zero.
    pub(crate) fn threshold(&self) -> f64 {
        self.tol * scale_of(&self.constants)
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let xy = xi.clone() * yj.clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + xy.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad e_i` (column `j` holds `[e_i, e_j]`).
    pub fn ad_matrix(&self, i: usize) -> Matrix<S> {
        Matrix::from_fn(self.dim(), self.dim(), |k, j| self.constant(i, j, k).clone())
    }

    /// `d e^k`.
    pub fn d_basis(&self, k: usize) -> &GradedForm<S> {
        &self.d_basis[k]
    }

    fn d_monomial(&self, m: Monomial) -> GradedForm<S> {
        let n = self.dim();
        let idx = m.indices();
        let mut out = GradedForm::zero(n, idx.len() + 1);
        for (r, &k) in idx.iter().enumerate() {
            let db = &self.d_basis[k];
            if db.is_empty() {
                continue;
            }
            let before = Monomial::from_indices(&idx[..r]).expect("sorted");
            let after = Monomial::from_indices(&idx[r + 1..]).expect("sorted");
            let pre = GradedForm::monomial(n, before, S::one());
            let post = GradedForm::monomial(n, after, S::one());
            let term = pre
                .wedge(db)
                .and_then(|f| f.wedge(&post))
                .expect("same dimension");
            let term = if r % 2 == 1 { term.scale(&-S::one()) } else { term };
            out = out.add(&term).expect("same grade");
        }
        out
    }

    /// Chevalley–Eilenberg differential of a form.
    pub fn d(&self, form: &GradedForm<S>) -> Result<GradedForm<S>> {
        if form.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: form.dim(),
            });
        }
        let mut out = GradedForm::zero(self.dim(), form.grade() + 1);
        for (m, c) in form.terms() {
            out = out.add(&self.d_monomial(*m).scale(c))?;
        }
        Ok(out)
    }

    /// Matrix of `d: Λ^p → Λ^{p+1}` in the monomial-rank bases.
    pub fn ce_differential(&self, p: usize) -> Matrix<S> {
        let n = self.dim();
        let mut mat = Matrix::zeros(binomial(n, p + 1), binomial(n, p));
        if p >= n {
            return mat;
        }
        for (col, m) in monomials(n, p).into_iter().enumerate() {
            for (mm, c) in self.d_monomial(m).terms() {
                mat[(monomial_rank(*mm, n), col)] = c.clone();
            }
        }
        mat
    }

    /// Span of all brackets `[e_i, e_j]`, as a matrix whose rows span `[g, g]`.
    pub fn derived_span(&self) -> Matrix<S> {
        let n = self.dim();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let row: Vec<S> = (0..n).map(|k| self.constant(i, j, k).clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return Matrix::zeros(0, n);
        }
        Matrix::from_rows(rows).expect("uniform rows")
    }

    /// `dim [g, g]`.
    pub fn derived_dim(&self) -> usize {
        let span = self.derived_span();
        if span.rows() == 0 {
            0
        } else {
            span.rank(self.tol)
        }
    }

    /// `trace(ad X) = 0` for every basis vector.
    pub fn is_unimodular(&self) -> bool {
        let thr = self.threshold();
        (0..self.dim()).all(|i| {
            (0..self.dim())
                .fold(S::zero(), |acc, j| acc + self.constant(i, j, j).clone())
                .is_negligible(thr)
        })
    }

    /// Lower central series reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.dim();
        let mut current: Vec<Vec<S>> = (0..n)
            .map(|i| {
                let mut v = vec![S::zero(); n];
                v[i] = S::one();
                v
            })
            .collect();
        for _ in 0..=n {
            let mut next = Vec::new();
            for x in 0..n {
                let mut ex = vec![S::zero(); n];
                ex[x] = S::one();
                for y in &current {
                    let b = self.bracket(&ex, y);
                    if b.iter().any(|v| !v.is_negligible(self.threshold())) {
                        next.push(b);
                    }
                }
            }
            if next.is_empty() {
                return true;
            }
            let m = Matrix::from_rows(next).expect("uniform rows");
            let basis = independent_rows(&m, self.tol);
            if basis.len() == current.len() {
                return false;
            }
            current = basis;
        }
        false
    }

    /// Converts coefficients into another backend (same names and tolerance).
    pub fn map_scalars<T: Scalar>(&self, tol: f64, f: impl Fn(&S) -> T) -> Result<LieAlgebra<T>> {
        LieAlgebra::new(self.names.clone(), self.constants.iter().map(f).collect(), tol)
    }
}

/// A maximal linearly independent subset of the rows, as a row basis.
fn independent_rows<S: Scalar>(m: &Matrix<S>, tol: f64) -> Vec<Vec<S>> {
    let rref = m.transpose().rref(tol);
    rref.pivots.iter().map(|&r| m.row(r).to_vec()).collect()
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// One basis vector scaled by `λ(X)`.
    Real,
    /// Two basis vectors `(v1, v2)` acted on by `λ(X)·I + μ(X)·rot`, where
    /// `rot v1 = v2` and `rot v2 = -v1`.
    Complex,
}

impl BlockKind {
    pub fn width(self) -> usize {
        match self {
            BlockKind::Real => 1,
            BlockKind::Complex => 2,
        }
    }
}

/// Input to [`build_meta_abelian`]: one irreducible block of the action of
/// `a = R^m` on `n`. `lambda` and `mu` are functionals on `a` (length `m`).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpec<S> {
    pub kind: BlockKind,
    pub lambda: Vec<S>,
    pub mu: Vec<S>,
}

impl<S: Scalar> BlockSpec<S> {
    pub fn real(lambda: Vec<S>) -> Self {
        let mu = vec![S::zero(); lambda.len()];
        BlockSpec {
            kind: BlockKind::Real,
            lambda,
            mu,
        }
    }

    pub fn complex(lambda: Vec<S>, mu: Vec<S>) -> Self {
        BlockSpec {
            kind: BlockKind::Complex,
            lambda,
            mu,
        }
    }
}

/// A block of `n` placed at concrete basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightBlock<S> {
    pub kind: BlockKind,
    pub indices: Vec<usize>,
    /// Growth weight, indexed like `MetaAbelianSplit::a_indices`.
    pub lambda: Vec<S>,
    /// Rotation weight, indexed like `MetaAbelianSplit::a_indices`.
    pub mu: Vec<S>,
}

impl<S: Scalar> WeightBlock<S> {
    pub fn is_trivial(&self, thr: f64) -> bool {
        self.lambda.iter().chain(&self.mu).all(|x| x.is_negligible(thr))
    }
}

/// A decomposition `g = a ⋉ n` with `a`, `n` abelian and `ad a` acting on `n`
/// block-diagonally by the recorded weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaAbelianSplit<S> {
    pub a_indices: Vec<usize>,
    pub blocks: Vec<WeightBlock<S>>,
}

impl<S: Scalar> MetaAbelianSplit<S> {
    pub fn n_indices(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|b| b.indices.iter().copied())
            .collect()
    }

    pub fn a_mask(&self) -> u64 {
        self.a_indices.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn n_mask(&self) -> u64 {
        self.n_indices().iter().fold(0, |m, &i| m | 1 << i)
    }

    /// Checks that the split partitions the basis and reproduces the brackets.
    pub fn validate(&self, g: &LieAlgebra<S>) -> Result<()> {
        let n = g.dim();
        let m = self.a_indices.len();
        let mut seen = vec![false; n];
        for &i in self.a_indices.iter().chain(self.n_indices().iter()) {
            if i >= n {
                return Err(Error::InconsistentSplit(format!("index {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InconsistentSplit(format!("index {i} used twice")));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InconsistentSplit(format!("index {i} not covered")));
        }
        let thr = g.threshold();
        for b in &self.blocks {
            if b.indices.len() != b.kind.width() || b.lambda.len() != m || b.mu.len() != m {
                return Err(Error::MalformedBlock(format!(
                    "block at {:?} has wrong shape",
                    b.indices
                )));
            }
            if b.kind == BlockKind::Real && b.mu.iter().any(|x| !x.is_negligible(thr)) {
                return Err(Error::MalformedBlock(format!(
                    "real block at {:?} has nonzero rotation weight",
                    b.indices
                )));
            }
        }
        let mut expected = vec![S::zero(); n * n * n];
        for b in &self.blocks {
            for (p, &x) in self.a_indices.iter().enumerate() {
                for (j, &v) in b.indices.iter().enumerate() {
                    for (k, coeff) in block_action(b, p, j) {
                        let w = b.indices[k];
                        expected[(x * n + v) * n + w] = coeff.clone();
                        expected[(v * n + x) * n + w] = -coeff;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let diff = g.constant(i, j, k).clone() - expected[(i * n + j) * n + k].clone();
                    if !diff.is_negligible(thr) {
                        return Err(Error::InconsistentSplit(format!(
                            "bracket [{},{}] component {} differs from the block action",
                            i, j, k
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `[X_p, v_j]` within a block, as (position in block, coefficient) pairs.
fn block_action<S: Scalar>(b: &WeightBlock<S>, p: usize, j: usize) -> Vec<(usize, S)> {
    let (l, mu) = (b.lambda[p].clone(), b.mu[p].clone());
    match (b.kind, j) {
        (BlockKind::Real, _) => vec![(0, l)],
        (BlockKind::Complex, 0) => vec![(0, l), (1, mu)],
        (BlockKind::Complex, _) => vec![(0, -mu), (1, l)],
    }
}

/// Builds `R^m ⋉ n` with basis `X_1..X_m` followed by the blocks in order.
pub fn build_meta_abelian<S: Scalar>(
    m: usize,
    blocks: &[BlockSpec<S>],
    tol: f64,
) -> Result<(LieAlgebra<S>, MetaAbelianSplit<S>)> {
    for (bi, b) in blocks.iter().enumerate() {
        if b.lambda.len() != m || b.mu.len() != m {
            return Err(Error::MalformedBlock(format!(
                "block {bi}: weights must have length {m}"
            )));
        }
        if b.kind == BlockKind::Real && b.mu.iter().any(|x| !x.is_zero()) {
            return Err(Error::MalformedBlock(format!(
                "block {bi}: real blocks carry no rotation weight"
            )));
        }
    }
    let mut names: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
    let mut next = m;
    let mut placed = Vec::with_capacity(blocks.len());
    for b in blocks {
        let indices: Vec<usize> = (next..next + b.kind.width()).collect();
        next += b.kind.width();
        placed.push(WeightBlock {
            kind: b.kind,
            indices,
            lambda: b.lambda.clone(),
            mu: b.mu.clone(),
        });
    }
    names.extend((1..=next - m).map(|i| format!("n{i}")));
    let n = next;
    check_dim(n)?;
    let mut c = vec![S::zero(); n * n * n];
    for b in &placed {
        for p in 0..m {
            for (j, &v) in b.indices.iter().enumerate() {
                for (k, coeff) in block_action(b, p, j) {
                    let w = b.indices[k];
                    c[(p * n + v) * n + w] = coeff.clone();
                    c[(v * n + p) * n + w] = -coeff;
                }
            }
        }
    }
    let g = LieAlgebra::new(names, c, tol)?;
    let split = MetaAbelianSplit {
        a_indices: (0..m).collect(),
        blocks: placed,
    };
    Ok((g, split))
}

/// Result of [`split_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplitReduction<S> {
    /// Split with every zero-weight block moved into the abelian factor.
    pub split: MetaAbelianSplit<S>,
    /// Dimension of the maximal trivial submodule that was moved.
    pub trivial_part_dim: usize,
    /// `dim [g, g]`, equal to the dimension of the reduced `n`.
    pub derived_dim: usize,
}

/// Validates `split` against `g` and moves trivial blocks of `n` into `a`,
/// so that afterwards `[a, n] = n` and `dim n = dim [g, g]`.
pub fn split_check<S: Scalar>(g: &LieAlgebra<S>, split: &MetaAbelianSplit<S>) -> Result<SplitReduction<S>> {
    split.validate(g)?;
    let thr = g.threshold();
    let (trivial, kept): (Vec<_>, Vec<_>) = split.blocks.iter().cloned().partition(|b| b.is_trivial(thr));
    let mut a_indices = split.a_indices.clone();
    a_indices.extend(trivial.iter().flat_map(|b| b.indices.iter().copied()));
    a_indices.sort_unstable();
    let old_pos = |i: usize| split.a_indices.iter().position(|&x| x == i);
    let blocks: Vec<WeightBlock<S>> = kept
        .into_iter()
        .map(|b| {
            let remap = |w: &[S]| {
                a_indices
                    .iter()
                    .map(|&i| old_pos(i).map_or_else(S::zero, |p| w[p].clone()))
                    .collect::<Vec<S>>()
            };
            WeightBlock {
                kind: b.kind,
                indices: b.indices.clone(),
                lambda: remap(&b.lambda),
                mu: remap(&b.mu),
            }
        })
        .collect();
    let reduced = MetaAbelianSplit { a_indices, blocks };
    reduced.validate(g)?;
    let derived_dim = g.derived_dim();
    let n_dim = reduced.n_indices().len();
    if derived_dim != n_dim {
        return Err(Error::InconsistentSplit(format!(
            "reduced n has dimension {n_dim} but [g,g] has dimension {derived_dim}"
        )));
    }
    Ok(SplitReduction {
        trivial_part_dim: trivial.iter().map(|b| b.indices.len()).sum(),
        split: reduced,
        derived_dim,
    })
}

/// Real-backend helpers shared by the file layer.
impl<S: RealScalar> LieAlgebra<S> {
    /// Nonzero brackets `[e_i, e_j]` for `i < j`, in index order.
    pub fn bracket_list(&self) -> Vec<Bracket<S>> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<(usize, S)> = (0..n)
                    .filter(|&k| !self.constant(i, j, k).is_zero())
                    .map(|k| (k, self.constant(i, j, k).clone()))
                    .collect();
                if !terms.is_empty() {
                    out.push((i, j, terms));
                }
            }
        }
        out
    }
}
