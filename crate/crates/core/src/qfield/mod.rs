//! Exact arithmetic in real multi-quadratic fields.
//!
//! An [`AlgebraicQuad`] is a finite sum `Σ q_m·√m` over squarefree radicands
//! `m` with rational coefficients. Because square roots of distinct squarefree
//! integers are linearly independent over `Q`, the representation is unique,
//! so equality and the zero test are structural. Ordering is decided by
//! dyadic interval refinement, which always terminates once zero has been
//! ruled out.

mod bernoulli;
mod parse;
mod quad;

pub use bernoulli::{bernoulli, zeta_even_rational, BernoulliTable};
pub use quad::AlgebraicQuad;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds the rational `n/1`.
pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `num/den`, reduced. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// True iff `n` has no repeated prime factor. Zero is not squarefree.
pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Smallest prime factor of `n > 1`.
pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    debug_assert!(n > 1);
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 2;
    }
    n
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
