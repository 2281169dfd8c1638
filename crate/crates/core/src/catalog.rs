//! Standard algebras used by the CLI `catalog` command and the tests.

use crate::error::Result;
use crate::lie::{Bracket, LieAlgebra, MetaAbelianSplit};
use crate::ot::{ot_structure, OtAlgebra};
use crate::scalar::Scalar;

pub fn abelian<S: Scalar>(n: usize, tol: f64) -> Result<LieAlgebra<S>> {
    LieAlgebra::abelian(n, tol)
}

/// `h(k)`: `[x_i, y_i] = z`, basis `x1..xk, y1..yk, z`.
pub fn heisenberg<S: Scalar>(k: usize, tol: f64) -> Result<LieAlgebra<S>> {
    heisenberg_plus_line(k, false, tol)
}

/// `h(k) ⊕ R`, with the extra basis vector `t` last.
pub fn heisenberg_line<S: Scalar>(k: usize, tol: f64) -> Result<LieAlgebra<S>> {
    heisenberg_plus_line(k, true, tol)
}

fn heisenberg_plus_line<S: Scalar>(k: usize, line: bool, tol: f64) -> Result<LieAlgebra<S>> {
    let suffix = |i: usize| if k == 1 { String::new() } else { i.to_string() };
    let mut names: Vec<String> = (1..=k).map(|i| format!("x{}", suffix(i))).collect();
    names.extend((1..=k).map(|i| format!("y{}", suffix(i))));
    names.push("z".into());
    if line {
        names.push("t".into());
    }
    let z = 2 * k;
    let brackets: Vec<Bracket<S>> = (0..k).map(|i| (i, k + i, vec![(z, S::one())])).collect();
    LieAlgebra::from_brackets(names, &brackets, tol)
}

/// The Inoue surface `S⁰` algebra: `ad(alpha1)` acts by `1` on `beta1`
/// and by `-1/2 + √-1 c` on the `gamma` plane.
pub fn inoue_s0<S: Scalar>(c: S, tol: f64) -> Result<OtAlgebra<S>> {
    ot_structure(&[vec![-S::one()]], &[vec![c]], tol)
}

/// OT-type algebra of type `(s, 1)` with `b = -1` and the given `c`.
pub fn ot_s1<S: Scalar>(c: &[S], tol: f64) -> Result<OtAlgebra<S>> {
    let b: Vec<Vec<S>> = c.iter().map(|_| vec![-S::one()]).collect();
    let c: Vec<Vec<S>> = c.iter().map(|x| vec![x.clone()]).collect();
    ot_structure(&b, &c, tol)
}

/// An algebra with its split and OT data, when it has them.
pub type Entry<S> = (LieAlgebra<S>, Option<MetaAbelianSplit<S>>, Option<OtAlgebra<S>>);

/// A named catalog entry.
pub fn by_name<S: Scalar>(name: &str, tol: f64) -> Result<Entry<S>> {
    let bad = || crate::error::Error::Parse(format!("unknown catalog entry '{name}'"));
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    let num = |default: usize| -> Result<usize> { arg.map_or(Ok(default), |a| a.parse().map_err(|_| bad())) };
    match base {
        "abelian" => Ok((abelian(num(4)?, tol)?, None, None)),
        "heisenberg" => Ok((heisenberg(num(1)?, tol)?, None, None)),
        "heisenberg-line" => Ok((heisenberg_line(num(1)?, tol)?, None, None)),
        "inoue-s0" => {
            let c = S::from_i64(num(1)? as i64);
            let ot = inoue_s0(c, tol)?;
            Ok((ot.algebra.clone(), Some(ot.split.clone()), Some(ot)))
        }
        "ot" => {
            let s = num(2)?;
            if s == 0 {
                return Err(bad());
            }
            let c: Vec<S> = (1..=s as i64).map(S::from_i64).collect();
            let ot = ot_s1(&c, tol)?;
            Ok((ot.algebra.clone(), Some(ot.split.clone()), Some(ot)))
        }
        _ => Err(bad()),
    }
}
