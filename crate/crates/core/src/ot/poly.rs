//! Monic integer polynomials and arithmetic in the equation order `Z[θ]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Rational;

/// How irreducibility over the rationals was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    /// No rational root and, for degree 4, no integer quadratic factor.
    Proven,
    /// Degree above 4 without a rational root; accepted on the caller's word.
    Attested,
}

/// A monic polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        if coeffs.last() != Some(&1) {
            return Err(Error::InvalidPolynomial(format!(
                "leading coefficient must be 1, got {:?}",
                coeffs.last()
            )));
        }
        Ok(IntPoly { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval_big(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + BigInt::from(*c))
    }

    /// Value and derivative at a complex point (Horner).
    pub fn eval_with_derivative(
        &self,
        z: num_complex::Complex64,
    ) -> (num_complex::Complex64, num_complex::Complex64) {
        let mut p = num_complex::Complex64::new(0.0, 0.0);
        let mut dp = p;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c as f64;
        }
        (p, dp)
    }

    /// Integer roots; for a monic polynomial these are all the rational roots.
    pub fn rational_roots(&self) -> Vec<i64> {
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return vec![0];
        }
        let mut roots: Vec<i64> = divisors(c0.unsigned_abs())
            .into_iter()
            .flat_map(|d| [d as i64, -(d as i64)])
            .filter(|r| self.eval_big(&BigInt::from(*r)).is_zero())
            .collect();
        roots.sort_unstable();
        roots
    }

    /// Factors `(x² + b x + c)(x² + d x + e)` of a quartic, as `(b, c, d, e)`.
    fn quadratic_factor(&self) -> Option<(i64, i64, i64, i64)> {
        if self.degree() != 4 {
            return None;
        }
        let a = &self.coeffs;
        let (a0, a1, a2, a3) = (a[0] as i128, a[1] as i128, a[2] as i128, a[3] as i128);
        if a0 == 0 {
            return None;
        }
        for dv in divisors(a0.unsigned_abs() as u64) {
            for c in [dv as i128, -(dv as i128)] {
                let e = a0 / c;
                // b + d = a3 and b d = a2 - c - e
                let disc = a3 * a3 - 4 * (a2 - c - e);
                if disc < 0 {
                    continue;
                }
                let r = integer_sqrt(disc as u128) as i128;
                if r * r != disc {
                    continue;
                }
                for b2 in [a3 + r, a3 - r] {
                    if b2 % 2 != 0 {
                        continue;
                    }
                    let b = b2 / 2;
                    let d = a3 - b;
                    if b * e + c * d == a1 {
                        return Some((b as i64, c as i64, d as i64, e as i64));
                    }
                }
            }
        }
        None
    }

    /// Irreducibility over the rationals, proven up to degree 4.
    pub fn check_irreducible(&self, attest_above_four: bool) -> Result<Irreducibility> {
        if let Some(r) = self.rational_roots().first() {
            return Err(Error::Reducible(format!("rational root {r}")));
        }
        if let Some((b, c, d, e)) = self.quadratic_factor() {
            return Err(Error::Reducible(format!("(x^2 + {b}x + {c})(x^2 + {d}x + {e})")));
        }
        if self.degree() <= 4 {
            Ok(Irreducibility::Proven)
        } else if attest_above_four {
            Ok(Irreducibility::Attested)
        } else {
            Err(Error::InvalidPolynomial(format!(
                "irreducibility of a degree-{} polynomial cannot be verified; \
                 set assume_irreducible to accept it",
                self.degree()
            )))
        }
    }

    /// Matrix of multiplication by `x` on `Z[θ]` in the basis `1, θ, …`.
    fn companion_big(&self) -> Vec<Vec<BigInt>> {
        let n = self.degree();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for j in 0..n - 1 {
            m[j + 1][j] = BigInt::one();
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[n - 1] = BigInt::from(-self.coeffs[i]);
        }
        m
    }

    /// Product of two elements of `Z[θ]` given by coefficient vectors.
    pub fn mul_mod(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        let n = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += BigInt::from(*x) * BigInt::from(*y);
            }
        }
        for k in (n..prod.len()).rev() {
            let top = std::mem::take(&mut prod[k]);
            for i in 0..n {
                prod[k - n + i] -= &top * BigInt::from(self.coeffs[i]);
            }
        }
        prod.truncate(n);
        prod.iter()
            .map(|v| {
                v.to_i64()
                    .ok_or_else(|| Error::InvalidPolynomial("coefficient overflow in Z[θ]".into()))
            })
            .collect()
    }

    /// Exact norm of `Σ a_k θ^k`: the determinant of multiplication by it.
    pub fn norm(&self, a: &[i64]) -> BigInt {
        let n = self.degree();
        let comp = self.companion_big();
        // multiplication matrix = Σ a_k C^k
        let mut power: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let mut total = vec![vec![BigInt::zero(); n]; n];
        for (k, ak) in a.iter().enumerate() {
            if k > 0 {
                power = mat_mul(&power, &comp);
            }
            if *ak == 0 {
                continue;
            }
            let ak = BigInt::from(*ak);
            for i in 0..n {
                for j in 0..n {
                    total[i][j] += &ak * &power[i][j];
                }
            }
        }
        let m = Matrix::from_fn(n, n, |i, j| Rational::from_integer(total[i][j].clone()));
        let det = m.determinant().expect("square");
        det.to_integer()
    }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

fn integer_sqrt(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub(crate) fn is_unit_norm(n: &BigInt) -> bool {
    n.abs().is_one()
}
