use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;
use crate::{Error, Result};

/// Bernoulli numbers `B_0 … B_n`, computed once and read many times.
///
/// Uses the convention `B_1 = -1/2` internally; only even indices are
/// exposed through [`BernoulliTable::get`].
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    /// Table covering indices `0..=max_index`.
    pub fn up_to(max_index: usize) -> Self {
        let mut table = Self { values: Vec::new() };
        table.extend_to(max_index);
        table
    }

    pub fn max_index(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Extends the table with `Σ_{k=0}^{n} C(n+1, k)·B_k = 0`.
    pub fn extend_to(&mut self, max_index: usize) {
        while self.values.len() <= max_index {
            let n = self.values.len();
            if n == 0 {
                self.values.push(Rational::one());
                continue;
            }
            if n >= 3 && n % 2 == 1 {
                self.values.push(Rational::zero());
                continue;
            }
            let mut binom = BigInt::one(); // C(n+1, 0)
            let mut acc = Rational::zero();
            for (k, b) in self.values.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * Rational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            self.values
                .push(-acc / Rational::from_integer(BigInt::from(n + 1)));
        }
    }

    /// `B_n`. Panics if `n` exceeds the table.
    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n]
    }
}

/// The Bernoulli number `B_n` for even `n ≥ 0`.
pub fn bernoulli(n: usize) -> Result<Rational> {
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "bernoulli index {n} is odd"
        )));
    }
    Ok(BernoulliTable::up_to(n).get(n).clone())
}

/// The rational `r` with `ζ(n) = r·πⁿ`, for even `n ≥ 2`:
/// `ζ(2k) = (-1)^{k+1}·B_{2k}·(2π)^{2k} / (2·(2k)!)`.
pub fn zeta_even_rational(n: usize) -> Result<Rational> {
    zeta_even_rational_with(&BernoulliTable::up_to(n), n)
}

pub(crate) fn zeta_even_rational_with(table: &BernoulliTable, n: usize) -> Result<Rational> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "zeta_even_rational needs an even index ≥ 2, got {n}"
        )));
    }
    let k = n / 2;
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    let two_pow = BigInt::one() << n;
    let mut r = table.get(n) * Rational::new(two_pow, factorial * 2u32);
    if k.is_multiple_of(2) {
        r = -r;
    }
    Ok(r)
}
