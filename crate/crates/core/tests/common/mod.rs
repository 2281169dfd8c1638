//! Strategies and property checks shared by `properties` and `acceptance`.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

use solvlck::catalog::ot_s1;
use solvlck::cohomology::{
    betti, character_cohomology, is_weakly_completely_solvable, left_wedge_matrix, twisted_complex,
    twisted_differential, CharacterWeight,
};
use solvlck::exterior::{binomial, monomial_rank, monomial_unrank, Monomial};
use solvlck::lck::{
    harmonic_basis, is_integrable, is_lcs, lee_form, nijenhuis, ComplexStructure, InvariantMetric,
};
use solvlck::lie::{build_meta_abelian, BlockSpec};
use solvlck::ot::{alpha, embeddings, log_embedding, ot_structure, unit_search, IntPoly};
use solvlck::{GradedForm, LieAlgebra, Matrix, MetaAbelianSplit, Rational, Scalar};

pub type PropResult = Result<(), TestCaseError>;

/// Weights of a random `R^m ⋉ n`: `(complex?, lambda, mu)` per block, in
/// half-integers.
#[derive(Debug, Clone)]
pub struct SemidirectShape {
    pub m: usize,
    pub blocks: Vec<(bool, Vec<i64>, Vec<i64>)>,
}

impl SemidirectShape {
    pub fn dim(&self) -> usize {
        self.m + self.blocks.iter().map(|b| if b.0 { 2 } else { 1 }).sum::<usize>()
    }

    /// Appends a real block that makes every `ad X` traceless.
    pub fn unimodular(mut self) -> Self {
        let trace: Vec<i64> = (0..self.m)
            .map(|p| {
                self.blocks
                    .iter()
                    .map(|(cx, l, _)| if *cx { 2 * l[p] } else { l[p] })
                    .sum()
            })
            .collect();
        self.blocks
            .push((false, trace.iter().map(|x| -x).collect(), vec![0; self.m]));
        self
    }

    pub fn build<S: Scalar>(&self) -> LieAlgebra<S> {
        self.build_with_split().0
    }

    pub fn build_with_split<S: Scalar>(&self) -> (LieAlgebra<S>, MetaAbelianSplit<S>) {
        let half = |v: &[i64]| v.iter().map(|&x| S::from_ratio(x, 2)).collect::<Vec<S>>();
        let specs: Vec<BlockSpec<S>> = self
            .blocks
            .iter()
            .map(|(cx, l, mu)| {
                if *cx {
                    BlockSpec::complex(half(l), half(mu))
                } else {
                    BlockSpec::real(half(l))
                }
            })
            .collect();
        build_meta_abelian(self.m, &specs, 1e-9).expect("valid shape")
    }
}

pub fn semidirect(max_dim: usize) -> impl Strategy<Value = SemidirectShape> {
    (1usize..=2)
        .prop_flat_map(|m| {
            let block = (
                any::<bool>(),
                prop::collection::vec(-4i64..=4, m),
                prop::collection::vec(-4i64..=4, m),
            );
            (Just(m), prop::collection::vec(block, 1..=3))
        })
        .prop_map(|(m, blocks)| SemidirectShape { m, blocks })
        .prop_filter("dimension bound", move |s| s.dim() <= max_dim)
}

fn int_form<S: Scalar>(n: usize, p: usize, coeffs: &[i64]) -> GradedForm<S> {
    let v: Vec<S> = coeffs.iter().map(|&c| S::from_i64(c)).collect();
    GradedForm::from_vector(n, p, &v)
}

/// `(n, [(p, coeffs)] × 3)` for three random forms on `R^n`.
pub fn three_forms() -> impl Strategy<Value = (usize, Vec<(usize, Vec<i64>)>)> {
    (1usize..=6).prop_flat_map(|n| {
        let one = (0..=n).prop_flat_map(move |p| (Just(p), prop::collection::vec(-3i64..=3, binomial(n, p))));
        (Just(n), prop::collection::vec(one, 3))
    })
}

fn wedge_laws<S: Scalar>(n: usize, forms: &[(usize, Vec<i64>)]) -> PropResult {
    let f: Vec<GradedForm<S>> = forms.iter().map(|(p, c)| int_form(n, *p, c)).collect();
    let (a, b, c) = (&f[0], &f[1], &f[2]);
    let ab = a.wedge(b).unwrap();
    let ba = b.wedge(a).unwrap();
    let sign = if (a.grade() * b.grade()) % 2 == 0 {
        S::one()
    } else {
        -S::one()
    };
    prop_assert!(ab.approx_eq(&ba.scale(&sign), 1e-9), "graded commutativity");
    let left = ab.wedge(c).unwrap();
    let right = a.wedge(&b.wedge(c).unwrap()).unwrap();
    prop_assert!(left.approx_eq(&right, 1e-9), "associativity");
    Ok(())
}

pub fn check_wedge((n, forms): (usize, Vec<(usize, Vec<i64>)>)) -> PropResult {
    wedge_laws::<Rational>(n, &forms)?;
    wedge_laws::<f64>(n, &forms)
}

pub fn rank_input() -> impl Strategy<Value = (usize, usize, usize)> {
    (0usize..=12)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, p)| (Just(n), Just(p), 0..binomial(n, p)))
}

pub fn check_rank_roundtrip((n, p, r): (usize, usize, usize)) -> PropResult {
    let m = monomial_unrank(r, n, p);
    prop_assert_eq!(m.grade(), p);
    prop_assert!(m.indices().iter().all(|&i| i < n));
    prop_assert_eq!(monomial_rank(m, n), r);
    prop_assert_eq!(
        monomial_unrank(monomial_rank(Monomial::from_bits(m.bits()), n), n, p),
        m
    );
    Ok(())
}

fn product_is_zero<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> bool {
    a.mul(b).unwrap().is_zero(1e-9)
}

/// Closed 1-form `Σ k_i a_i*` (every `a_i*` vanishes on `[g, g]`).
fn closed_theta<S: Scalar>(shape: &SemidirectShape, k: &[i64]) -> GradedForm<S> {
    let n = shape.dim();
    let mut v = vec![S::zero(); n];
    for (i, &x) in k.iter().take(shape.m).enumerate() {
        v[i] = S::from_i64(x);
    }
    GradedForm::from_vector(n, 1, &v)
}

pub fn shape_with_theta(max_dim: usize) -> impl Strategy<Value = (SemidirectShape, Vec<i64>)> {
    (semidirect(max_dim), prop::collection::vec(-3i64..=3, 2))
}

pub fn check_d_squared((shape, k): (SemidirectShape, Vec<i64>)) -> PropResult {
    let g = shape.build::<Rational>();
    let n = g.dim();
    let theta = closed_theta::<Rational>(&shape, &k);
    prop_assert!(g.d(&theta).unwrap().is_zero(0.0), "theta is closed");
    for p in 0..n {
        prop_assert!(
            product_is_zero(&g.ce_differential(p + 1), &g.ce_differential(p)),
            "d² ≠ 0 at {}",
            p
        );
        let dt = |q| twisted_differential(&g, &theta, q);
        prop_assert!(product_is_zero(&dt(p + 1), &dt(p)), "d_θ² ≠ 0 at {}", p);
        // θ∧θ = 0
        prop_assert!(product_is_zero(
            &left_wedge_matrix(&theta, p + 1),
            &left_wedge_matrix(&theta, p)
        ));
    }
    Ok(())
}

pub fn check_twisted_complex((shape, k): (SemidirectShape, Vec<i64>)) -> PropResult {
    let g = shape.build::<Rational>();
    let theta = closed_theta::<Rational>(&shape, &k);
    let snap = twisted_complex(&g, &theta).unwrap();
    prop_assert_eq!(snap.euler_characteristic(), 0);
    prop_assert_eq!(snap.euler_characteristic_of_chains(), 0);
    let zero = GradedForm::<Rational>::zero(g.dim(), 1);
    prop_assert_eq!(twisted_complex(&g, &zero).unwrap().betti(), betti(&g));
    Ok(())
}

pub fn check_backends_agree(shape: SemidirectShape) -> PropResult {
    prop_assert_eq!(betti(&shape.build::<Rational>()), betti(&shape.build::<f64>()));
    Ok(())
}

pub fn check_poincare_duality(shape: SemidirectShape) -> PropResult {
    let g = shape.unimodular().build::<Rational>();
    prop_assert!(g.is_unimodular());
    let b = betti(&g);
    let n = g.dim();
    for p in 0..=n {
        prop_assert_eq!(b[p], b[n - p], "b_{} ≠ b_{}", p, n - p);
    }
    Ok(())
}

pub fn check_harmonic_counts(shape: SemidirectShape) -> PropResult {
    let g = shape.unimodular().build::<Rational>();
    let n = g.dim();
    let metric = InvariantMetric::new(Matrix::identity(n), 1e-9).unwrap();
    for (p, b) in betti(&g).into_iter().enumerate() {
        prop_assert_eq!(harmonic_basis(&g, &metric, p).unwrap().len(), b);
    }
    Ok(())
}

fn standard_j<S: Scalar>(n: usize) -> ComplexStructure<S> {
    let j = Matrix::from_fn(n, n, |r, c| {
        if c % 2 == 0 && r == c + 1 {
            S::one()
        } else if c % 2 == 1 && r + 1 == c {
            -S::one()
        } else {
            S::zero()
        }
    });
    ComplexStructure::new(j, 1e-9).unwrap()
}

pub fn check_nijenhuis_antisymmetry(shape: SemidirectShape) -> PropResult {
    let mut shape = shape;
    if shape.dim() % 2 == 1 {
        shape.blocks.push((false, vec![1; shape.m], vec![0; shape.m]));
    }
    let g = shape.build::<Rational>();
    let n = g.dim();
    let nj = nijenhuis(&g, &standard_j(n)).unwrap();
    for i in 0..n {
        prop_assert!(nj.get(i, i).iter().all(|x| *x == Rational::from_i64(0)));
        for j in 0..n {
            let neg: Vec<Rational> = nj.get(j, i).iter().map(|x| -x.clone()).collect();
            prop_assert_eq!(nj.get(i, j), &neg[..]);
        }
    }
    Ok(())
}

/// `(b, c)` of shape `s × t` in half-integers.
pub fn ot_params() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(s, t)| {
        let rows = |lo: i64, hi: i64| prop::collection::vec(prop::collection::vec(lo..=hi, t), s);
        (rows(-6, 6), rows(-6, 6))
    })
}

pub fn check_ot_integrable((b, c): (Vec<Vec<i64>>, Vec<Vec<i64>>)) -> PropResult {
    let half = |m: &[Vec<i64>]| -> Vec<Vec<Rational>> {
        m.iter()
            .map(|r| r.iter().map(|&x| Rational::from_ratio(x, 2)).collect())
            .collect()
    };
    let ot = ot_structure(&half(&b), &half(&c), 1e-9).unwrap();
    prop_assert!(is_integrable(&ot.algebra, &ot.j).unwrap());
    Ok(())
}

pub fn lee_input() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=7), 1..=3)
}

pub fn check_lee_form(c: Vec<(i64, i64)>) -> PropResult {
    let c: Vec<Rational> = c.iter().map(|&(p, q)| Rational::from_ratio(p, q)).collect();
    let ot = ot_s1(&c, 1e-9).unwrap();
    let omega = ot.omega.clone().unwrap();
    let n = ot.algebra.dim();
    let mut expected = GradedForm::zero(n, 1);
    for i in 0..ot.s {
        expected = expected.add(&GradedForm::basis(n, alpha(i))).unwrap();
    }
    let lee = lee_form(&ot.algebra, &omega).unwrap();
    prop_assert!(lee.unique);
    prop_assert_eq!(&lee.theta, &expected);
    prop_assert!(is_lcs(&ot.algebra, &omega, &expected).unwrap());
    Ok(())
}

/// Monic cubics with unit constant term; reducible ones are rejected.
pub fn unit_cubic() -> impl Strategy<Value = Vec<i64>> {
    (prop::sample::select(vec![-1i64, 1]), -3i64..=3, -3i64..=3).prop_map(|(c0, c1, c2)| vec![c0, c1, c2, 1])
}

pub fn check_log_sums(coeffs: Vec<i64>) -> PropResult {
    let poly = IntPoly::new(coeffs).unwrap();
    if poly.check_irreducible(false).is_err() {
        return Err(TestCaseError::reject("reducible"));
    }
    let emb = embeddings(&poly, 1, 1)
        .or_else(|_| embeddings(&poly, 3, 0))
        .unwrap();
    let units = unit_search(&poly, &emb, 2);
    // θ itself is a unit
    prop_assert!(!units.is_empty());
    for u in &units {
        let log = log_embedding(&emb, &u.coeffs).unwrap();
        let scale = log.iter().map(|x| x.abs()).fold(1.0, f64::max);
        prop_assert!(
            log.iter().sum::<f64>().abs() <= 1e-9 * scale,
            "unit {:?}",
            u.coeffs
        );
    }
    Ok(())
}

pub fn check_trivial_character(shape: SemidirectShape) -> PropResult {
    let (g, split) = shape.build_with_split::<Rational>();
    if !is_weakly_completely_solvable(&split, 1e-9) {
        return Err(TestCaseError::reject("not weakly completely solvable"));
    }
    let k = character_cohomology(&g, &split, &[CharacterWeight::trivial(g.dim())]).unwrap();
    prop_assert_eq!(k.per_character[0].1[1], betti(&g)[1]);
    Ok(())
}

/// Runs one property with a deterministic runner.
pub fn run<T: std::fmt::Debug>(
    cases: u32,
    strategy: impl Strategy<Value = T>,
    check: impl Fn(T) -> PropResult,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, check).map_err(|e| match e {
        TestError::Abort(why) => format!("aborted: {why}"),
        TestError::Fail(why, input) => format!("{why} for {input:?}"),
    })
}

/// Every property with its case count, as run by the acceptance suite.
pub fn all_properties() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("wedge laws", run(256, three_forms(), check_wedge)),
        ("rank roundtrip", run(512, rank_input(), check_rank_roundtrip)),
        ("d squared", run(200, shape_with_theta(7), check_d_squared)),
        (
            "twisted complex",
            run(100, shape_with_theta(7), check_twisted_complex),
        ),
        ("backends agree", run(64, semidirect(7), check_backends_agree)),
        ("poincare duality", run(64, semidirect(6), check_poincare_duality)),
        ("harmonic counts", run(48, semidirect(6), check_harmonic_counts)),
        (
            "nijenhuis antisymmetry",
            run(48, semidirect(6), check_nijenhuis_antisymmetry),
        ),
        ("ot integrable", run(48, ot_params(), check_ot_integrable)),
        ("lee form", run(48, lee_input(), check_lee_form)),
        ("log sums", run(64, unit_cubic(), check_log_sums)),
        (
            "trivial character complex",
            run(64, semidirect(6), check_trivial_character),
        ),
    ]
}
