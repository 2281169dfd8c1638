//! Oeljeklaus–Toma algebras from a number field of signature `(s, t)`.
//!
//! Units are searched in the equation order `Z[θ]`, which may be a proper
//! subring of the maximal order. Any rank-`s` group of totally positive
//! units yields the same family of Lie algebras up to the choice of `(b, c)`.

mod field;
mod poly;
mod structure;

pub use field::{
    compute_bc, embeddings, log_embedding, select_u, totally_positive, unit_search, BcData, Embeddings,
    Generator, PositiveUnit, Replacement, UnitRecord, LOG_RANK_TOL,
};
pub use poly::{IntPoly, Irreducibility};
pub use structure::{alpha, beta, gamma, ot_names, ot_structure, OtAlgebra};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input of the pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    /// Coefficients, constant term first; must be monic.
    pub poly: Vec<i64>,
    pub s: usize,
    pub t: usize,
    pub coeff_bound: i64,
    /// Accept polynomials of degree above 4 without a rational root as
    /// irreducible.
    #[serde(default)]
    pub assume_irreducible: bool,
}

/// Everything the pipeline computed on the way to `(b, c)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OtFieldData {
    pub poly: Vec<i64>,
    pub s: usize,
    pub t: usize,
    pub irreducibility: Irreducibility,
    pub order: &'static str,
    pub real_embeddings: Vec<f64>,
    /// `[re, im]` of the representatives with positive imaginary part.
    pub complex_embeddings: Vec<[f64; 2]>,
    pub coeff_bound: i64,
    pub units: Vec<UnitRecord>,
    pub positive_units: Vec<PositiveUnit>,
    pub u_generators: Vec<Vec<i64>>,
    /// `l(u_j)` for each generator.
    pub v_basis: Vec<Vec<f64>>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    /// Arguments of the complex embeddings of the generators.
    pub args: Vec<Vec<f64>>,
    pub arg_branch: &'static str,
}

/// Runs the pipeline from the polynomial to the field data.
pub fn field_data(input: &FieldInput) -> Result<OtFieldData> {
    if input.s == 0 || input.t == 0 {
        return Err(Error::InvalidPolynomial(
            "the construction needs s ≥ 1 and t ≥ 1".into(),
        ));
    }
    if input.coeff_bound < 0 {
        return Err(Error::Parse("coeff_bound must be non-negative".into()));
    }
    let poly = IntPoly::new(input.poly.clone())?;
    let irreducibility = poly.check_irreducible(input.assume_irreducible)?;
    let emb = embeddings(&poly, input.s, input.t)?;
    let units = unit_search(&poly, &emb, input.coeff_bound);
    let positive_units = totally_positive(&poly, &emb, &units)?;
    let gens = select_u(&emb, &positive_units)?;
    let bc = compute_bc(&emb, &gens)?;
    Ok(OtFieldData {
        poly: input.poly.clone(),
        s: input.s,
        t: input.t,
        irreducibility,
        order: "Z[theta]",
        real_embeddings: emb.real.clone(),
        complex_embeddings: emb.complex.iter().map(|z| [z.re, z.im]).collect(),
        coeff_bound: input.coeff_bound,
        units,
        positive_units,
        u_generators: gens.iter().map(|g| g.coeffs.clone()).collect(),
        v_basis: gens.iter().map(|g| g.log.clone()).collect(),
        a: bc.a,
        b: bc.b,
        c: bc.c,
        args: bc.args,
        arg_branch: "(-pi, pi]",
    })
}

/// Field data together with the assembled algebra (float backend).
pub fn build_ot(input: &FieldInput, tol: f64) -> Result<(OtFieldData, OtAlgebra<f64>)> {
    let data = field_data(input)?;
    let ot = ot_structure(&data.b, &data.c, tol)?;
    Ok((data, ot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lck::{is_integrable, nijenhuis};
    use crate::lie::{build_meta_abelian, BlockSpec};

    #[test]
    fn plastic_field_gives_inoue_surface() {
        let input = FieldInput {
            poly: vec![-1, -1, 0, 1],
            s: 1,
            t: 1,
            coeff_bound: 2,
            assume_irreducible: false,
        };
        let (data, ot) = build_ot(&input, 1e-9).unwrap();
        assert_eq!(data.irreducibility, Irreducibility::Proven);
        assert!((data.b[0][0] + 1.0).abs() < 1e-9);
        let c = data.c[0][0];
        let (inoue, _) = build_meta_abelian(
            1,
            &[
                BlockSpec::real(vec![1.0]),
                BlockSpec::complex(vec![-0.5], vec![c]),
            ],
            1e-9,
        )
        .unwrap();
        let diff = ot
            .algebra
            .constants()
            .iter()
            .zip(inoue.constants())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-9);
        assert_eq!(ot.algebra.derived_dim(), 3);
        assert!(nijenhuis(&ot.algebra, &ot.j).unwrap().is_zero(1e-9));
        assert!(is_integrable(&ot.algebra, &ot.j).unwrap());
    }

    #[test]
    fn pipeline_errors() {
        let mut input = FieldInput {
            poly: vec![-1, -1, 0, 1],
            s: 3,
            t: 0,
            coeff_bound: 2,
            assume_irreducible: false,
        };
        assert!(matches!(field_data(&input), Err(Error::InvalidPolynomial(_))));
        input.s = 1;
        input.t = 1;
        input.coeff_bound = 0;
        assert!(matches!(field_data(&input), Err(Error::InsufficientUnits { .. })));
        input.poly = vec![-2, 0, -1, 0, 1];
        input.s = 2;
        assert!(matches!(field_data(&input), Err(Error::Reducible(_))));
        // x³ - 2 has signature (1, 1); asking for three real roots fails
        input.poly = vec![-2, 0, 0, 1];
        input.s = 3;
        input.t = 0;
        assert!(field_data(&input).is_err());
    }

    #[test]
    fn quartic_field_builds_ot21() {
        let input = FieldInput {
            poly: vec![-1, 0, 0, -1, 1],
            s: 2,
            t: 1,
            coeff_bound: 2,
            assume_irreducible: false,
        };
        let (data, ot) = build_ot(&input, 1e-9).unwrap();
        assert_eq!(data.u_generators.len(), 2);
        assert_eq!(ot.algebra.dim(), 6);
        assert_eq!(crate::cohomology::betti(&ot.algebra), vec![1, 2, 1, 0, 1, 2, 1]);
        for v in &data.v_basis {
            assert!(v.iter().sum::<f64>().abs() < 1e-8);
        }
    }
}
