//! Ehrhart-like polynomials of cross-polytopes and orthant simplices.
//!
//! For axes `a_1, …, a_d > 0`, `p(t) = Σ_k c_k t^k` approximates the lattice
//! count of `tC`, `C = {Σ |x_i|/a_i ≤ 1}`, with
//!
//! ```text
//! c_d = 2^d a_1⋯a_d / d!
//! c_k = 2^d a_1⋯a_d / ((2πi)^{d-k} k!) · Σ_{l ≥ 1} Σ_{j_1<⋯<j_l}
//!       Σ_{i_1+⋯+i_l = d-k, i_m even ≥ 2} Π_m (-2ζ(i_m) / a_{j_m}^{i_m})
//! ```
//!
//! Writing `ζ(2n) = (-1)^{n+1} B_{2n} (2π)^{2n} / (2·(2n)!)`, every factor
//! `-2ζ(i)` becomes `(-1)^{i/2} B_i (2π)^i / i!`. The powers of `2π` cancel
//! against `(2π)^{d-k}` and the signs `Π (-1)^{i_m/2} = (-1)^{(d-k)/2}`
//! cancel against `i^{d-k}`, leaving
//!
//! ```text
//! c_k = 2^d a_1⋯a_d / k! · [u^{d-k}] Π_j (1 + Σ_{i even ≥ 2} B_i u^i / (i! a_j^i))
//! ```
//!
//! which is evaluated exactly in the field. [`p_coeffs_float`] evaluates the
//! original expression with floating `ζ` values as an independent check.
//!
//! `q(t) = 2^{-d} Σ_{I ⊆ [d]} p_{a_I}(t)` approximates the closed simplex
//! `tS`, `S = {x ≥ 0, Σ x_i/a_i ≤ 1}`, with `p_∅ = 1`.

mod fit;
mod float;

pub use fit::{fit_error_exponent, target_error_exponent};
pub use float::{p_coeffs_float, zeta_f64};

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::polytope::{sign_pattern, CrossPolytope, DilationVector};
use crate::qfield::{AlgebraicQuad, BernoulliTable, Rational};
use crate::{Error, Result};

/// `Σ_k c_k t^k` with coefficients in the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartLikePoly {
    coeffs: Vec<AlgebraicQuad>,
}

impl EhrhartLikePoly {
    /// From `c_0, …, c_d`.
    pub fn new(coeffs: Vec<AlgebraicQuad>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least c_0");
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[AlgebraicQuad] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &AlgebraicQuad {
        &self.coeffs[k]
    }

    pub fn leading(&self) -> &AlgebraicQuad {
        self.coeffs.last().expect("nonempty")
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> AlgebraicQuad {
        let mut acc = AlgebraicQuad::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(t) + c;
        }
        acc
    }

    pub fn eval_int(&self, t: i64) -> AlgebraicQuad {
        self.eval(&Rational::from_integer(BigInt::from(t)))
    }

    /// `f°(t) = (-1)^n f(-t)`, i.e. `c_k ↦ (-1)^{n+k} c_k`.
    pub fn interior_transform(&self, n: usize) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if (n + k).is_multiple_of(2) {
                        c.clone()
                    } else {
                        -c
                    }
                })
                .collect(),
        }
    }

    /// True iff `c_k = 0` whenever `degree - k` is odd, i.e.
    /// `f(-t) = (-1)^d f(t)` identically.
    pub fn has_parity(&self) -> bool {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| (d - k).is_multiple_of(2) || c.is_zero())
    }

    fn add_padded(&mut self, other: &Self) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs
                .resize(other.coeffs.len(), AlgebraicQuad::zero());
        }
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
    }
}

fn check_axes(axes: &[AlgebraicQuad]) -> Result<()> {
    match axes.iter().position(|a| a.sign() <= 0) {
        Some(index) => Err(Error::InvalidAxis { index }),
        None => Ok(()),
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Exact coefficients of `p_{a_1,…,a_d}`. An empty axis list gives `p = 1`.
pub fn p_coeffs(axes: &[AlgebraicQuad]) -> Result<EhrhartLikePoly> {
    check_axes(axes)?;
    let table = BernoulliTable::up_to(axes.len());
    p_coeffs_with(axes, &table)
}

fn p_coeffs_with(axes: &[AlgebraicQuad], table: &BernoulliTable) -> Result<EhrhartLikePoly> {
    let d = axes.len();
    // series[i] = [u^i] Π_j (1 + Σ_{i even ≥ 2} B_i u^i / (i! a_j^i))
    let mut series = vec![AlgebraicQuad::zero(); d + 1];
    series[0] = AlgebraicQuad::one();
    for a in axes {
        let inv = a.inv()?;
        let mut factor = vec![AlgebraicQuad::zero(); d + 1];
        factor[0] = AlgebraicQuad::one();
        let inv_sq = &inv * &inv;
        let mut inv_pow = AlgebraicQuad::one();
        for i in (2..=d).step_by(2) {
            inv_pow = &inv_pow * &inv_sq;
            let w = table.get(i) / Rational::from_integer(factorial(i));
            factor[i] = inv_pow.scale(&w);
        }
        let mut next = vec![AlgebraicQuad::zero(); d + 1];
        for (i, s) in series.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
            for (j, f) in factor.iter().enumerate().take(d + 1 - i) {
                if !f.is_zero() {
                    next[i + j] += &(s * f);
                }
            }
        }
        series = next;
    }
    let volume_factor = axes
        .iter()
        .fold(AlgebraicQuad::from_bigint(BigInt::one() << d), |acc, a| {
            &acc * a
        });
    let coeffs = (0..=d)
        .map(|k| {
            let w = Rational::new(BigInt::one(), factorial(k));
            (&volume_factor * &series[d - k]).scale(&w)
        })
        .collect();
    Ok(EhrhartLikePoly { coeffs })
}

/// Exact coefficients of `q_{a_1,…,a_d} = 2^{-d} Σ_{I ⊆ [d]} p_{a_I}`.
pub fn q_coeffs(axes: &[AlgebraicQuad]) -> Result<EhrhartLikePoly> {
    check_axes(axes)?;
    let d = axes.len();
    let table = BernoulliTable::up_to(d);
    let mut acc = EhrhartLikePoly {
        coeffs: vec![AlgebraicQuad::zero()],
    };
    for mask in 0usize..(1 << d) {
        let sub: Vec<AlgebraicQuad> = (0..d)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| axes[i].clone())
            .collect();
        acc.add_padded(&p_coeffs_with(&sub, &table)?);
    }
    let w = Rational::new(BigInt::one(), BigInt::one() << d);
    acc.coeffs = acc.coeffs.iter().map(|c| c.scale(&w)).collect();
    Ok(acc)
}

/// Both readings of the vector-dilated approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorDilatedApprox {
    /// `Σ_k q(t_k)` over the `2^d` facets.
    pub facet_sum: AlgebraicQuad,
    /// `facet_sum` minus, for every pair of facets sharing a coordinate
    /// hyperplane, the `(d-1)`-dimensional `q` at the smaller of the two
    /// factors. A heuristic for the faces the facet sum counts twice.
    pub face_corrected: AlgebraicQuad,
}

/// `Σ q(t_k)` for a vector-dilated cross-polytope, with the shared-face
/// correction alongside.
pub fn approx_vector_dilated(c: &CrossPolytope, t: &DilationVector) -> Result<VectorDilatedApprox> {
    let d = c.dim();
    if t.len() != c.num_facets() {
        return Err(Error::LengthMismatch {
            expected: c.num_facets(),
            actual: t.len(),
        });
    }
    if !c.is_admissible(t) {
        return Err(Error::Inadmissible(alloc::format!(
            "cross-polytope dilation factors must all be at least 1, got {:?}",
            t.as_slice()
        )));
    }
    let q = q_coeffs(c.axes())?;
    let facet_sum: AlgebraicQuad = t.as_slice().iter().map(|&tk| q.eval_int(tk)).sum();
    let face_polys: Vec<EhrhartLikePoly> = (0..d)
        .map(|i| {
            let rest: Vec<AlgebraicQuad> = c
                .axes()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, a)| a.clone())
                .collect();
            q_coeffs(&rest)
        })
        .collect::<Result<_>>()?;
    let mut face_corrected = facet_sum.clone();
    for k in 0..c.num_facets() {
        for (i, &s) in sign_pattern(k, d).iter().enumerate() {
            if s > 0 {
                let neighbour = k | 1 << i;
                let tmin = t.as_slice()[k].min(t.as_slice()[neighbour]);
                face_corrected -= &face_polys[i].eval_int(tmin);
            }
        }
    }
    Ok(VectorDilatedApprox {
        facet_sum,
        face_corrected,
    })
}
