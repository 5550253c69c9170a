use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{gcd_u64, is_squarefree, smallest_prime_factor, Rational};
use crate::{Error, Result};

/// Precision, in bits, of the first dyadic enclosure tried by sign and floor.
const START_BITS: u64 = 64;

/// An element `Σ q_m·√m` of a real multi-quadratic field.
///
/// Keys are squarefree positive integers (key `1` is the rational part) and
/// no key maps to a zero coefficient, so the value is zero iff the map is
/// empty and equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct AlgebraicQuad {
    terms: BTreeMap<u64, Rational>,
}

impl AlgebraicQuad {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(super::rational_from_int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// `√m` for a squarefree `m`.
    pub fn sqrt(m: u64) -> Result<Self> {
        Self::term(Rational::one(), m)
    }

    /// `coeff·√m` for a squarefree `m`.
    pub fn term(coeff: Rational, m: u64) -> Result<Self> {
        if !is_squarefree(m) {
            return Err(Error::NotSquarefree(m));
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        Ok(Self { terms })
    }

    /// Builds an element from `(radicand, coefficient)` pairs, merging
    /// repeated radicands.
    pub fn from_terms<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        let mut out = Self::zero();
        for (m, q) in pairs {
            out += &Self::term(q, m)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the value lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&m| m == 1)
    }

    /// The value as a rational, if it is one.
    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// Iterates `(radicand, coefficient)` in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> + '_ {
        self.terms.iter().map(|(&m, q)| (m, q))
    }

    pub fn coefficient(&self, m: u64) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The radicands with nonzero coefficient.
    pub fn support(&self) -> Vec<u64> {
        self.terms.keys().copied().collect()
    }

    /// Largest numerator or denominator bit length among the coefficients.
    pub fn height_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|q| q.numer().bits().max(q.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, m: u64, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&m, q)| (m, q * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        let k = BigInt::from(k);
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&m, q)| {
                    (
                        m,
                        Rational::new_raw(q.numer() * &k, q.denom().clone()).reduced(),
                    )
                })
                .collect(),
        }
    }

    /// Flips the sign of every term whose radicand is divisible by `p`.
    fn conjugate_at(&self, p: u64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&m, q)| (m, if m % p == 0 { -q } else { q.clone() }))
                .collect(),
        }
    }

    /// Exact multiplicative inverse.
    ///
    /// Repeatedly multiplies by the conjugate flipping `√p` for a prime `p`
    /// still present in the denominator's support. Each step removes `p`
    /// from the support, so the denominator becomes rational.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = Self::one();
        let mut den = self.clone();
        while let Some(&m) = den.terms.keys().find(|&&m| m != 1) {
            let conj = den.conjugate_at(smallest_prime_factor(m));
            num = &num * &conj;
            den = &den * &conj;
        }
        let r = den
            .to_rational()
            .expect("denominator reduced to a rational");
        Ok(num.scale(&r.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer bounds `lo ≤ x·2^bits ≤ hi`.
    pub fn enclosure(&self, bits: u64) -> (BigInt, BigInt) {
        let scale = BigInt::one() << bits;
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (&m, q) in &self.terms {
            let (n, d) = (q.numer(), q.denom());
            if m == 1 {
                let v = n * &scale;
                lo += v.div_floor(d);
                hi += div_ceil(&v, d);
                continue;
            }
            let s = BigInt::from_biguint(
                Sign::Plus,
                (num_bigint::BigUint::from(m) << (2 * bits)).sqrt(),
            );
            let s1 = &s + 1u32;
            let (a, b) = if n.is_positive() {
                (&s, &s1)
            } else {
                (&s1, &s)
            };
            lo += (n * a).div_floor(d);
            hi += div_ceil(&(n * b), d);
        }
        (lo, hi)
    }

    /// Exact sign: `-1`, `0` or `+1`.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.to_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let mut bits = START_BITS.max(self.height_bits() + 16);
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// The unique integer `n` with `n ≤ x < n + 1`.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.to_rational() {
            return q.floor().to_integer();
        }
        // irrational, so x is never an integer and the enclosure separates
        let mut bits = START_BITS.max(self.height_bits() + 16);
        loop {
            let (lo, hi) = self.enclosure(bits);
            let n = lo >> bits;
            if hi < (&n + 1u32) << bits {
                return n;
            }
            bits *= 2;
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Rounds to the nearest integer, ties to even.
    pub fn round_half_even(&self) -> BigInt {
        let f = self.floor();
        let frac = self - &Self::from_bigint(f.clone());
        let half = Self::from_rational(Rational::new(BigInt::one(), BigInt::from(2)));
        match (&frac - &half).sign() {
            1 => f + 1u32,
            -1 => f,
            _ => {
                if f.is_even() {
                    f
                } else {
                    f + 1u32
                }
            }
        }
    }

    /// Nearest `f64`, from a 64-bit enclosure refined to the height of the
    /// coefficients.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = 64 + self.height_bits();
        let (lo, hi) = self.enclosure(bits);
        let mid: BigInt = (lo + hi) >> 1u32;
        bigint_to_f64(&mid) / libm::exp2(bits as f64)
    }

    /// Decimal rendering with `digits` significant digits, rounded half to
    /// even. Zero renders as `0.00…` with `digits - 1` fractional zeros.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let mut out = String::new();
        if self.is_zero() {
            out.push('0');
            if digits > 1 {
                out.push('.');
                out.extend(core::iter::repeat_n('0', digits - 1));
            }
            return out;
        }
        let neg = self.sign() < 0;
        let x = if neg { -self } else { self.clone() };
        let e = decimal_exponent(&x);
        let mut shift = digits as i64 - 1 - e;
        let mut n = scale_pow10(&x, shift).round_half_even();
        if n.to_string().len() > digits {
            // rounded up to 10^digits
            shift -= 1;
            n = scale_pow10(&x, shift).round_half_even();
        }
        if neg {
            out.push('-');
        }
        let s = n.to_string();
        if shift <= 0 {
            out.push_str(&s);
            out.extend(core::iter::repeat_n('0', (-shift) as usize));
        } else {
            let shift = shift as usize;
            let padded = if s.len() <= shift {
                let mut p = String::new();
                p.extend(core::iter::repeat_n('0', shift + 1 - s.len()));
                p.push_str(&s);
                p
            } else {
                s
            };
            let split = padded.len() - shift;
            out.push_str(&padded[..split]);
            out.push('.');
            out.push_str(&padded[split..]);
        }
        out
    }
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    // exact for |n| < 2^53, otherwise keep the top 64 bits
    let bits = n.bits();
    if bits <= 63 {
        return i64::try_from(n).expect("fits in i64") as f64;
    }
    let shift = bits - 63;
    let top: BigInt = n >> shift;
    i64::try_from(&top).expect("fits in i64") as f64 * libm::exp2(shift as f64)
}

/// `floor(log10(x))` for `x > 0`.
fn decimal_exponent(x: &AlgebraicQuad) -> i64 {
    let f = x.floor();
    if !f.is_zero() {
        return f.to_string().len() as i64 - 1;
    }
    let mut k = 1;
    loop {
        if !scale_pow10(x, k).floor().is_zero() {
            return -k;
        }
        k += 1;
    }
}

fn scale_pow10(x: &AlgebraicQuad, k: i64) -> AlgebraicQuad {
    let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
    let r = if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    };
    x.scale(&r)
}

impl From<Rational> for AlgebraicQuad {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for AlgebraicQuad {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl PartialOrd for AlgebraicQuad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicQuad {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl<'a> Add<&'a AlgebraicQuad> for &AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn add(self, rhs: &'a AlgebraicQuad) -> AlgebraicQuad {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn add(mut self, rhs: AlgebraicQuad) -> AlgebraicQuad {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a AlgebraicQuad> for AlgebraicQuad {
    fn add_assign(&mut self, rhs: &'a AlgebraicQuad) {
        for (&m, q) in &rhs.terms {
            self.add_term(m, q.clone());
        }
    }
}

impl<'a> SubAssign<&'a AlgebraicQuad> for AlgebraicQuad {
    fn sub_assign(&mut self, rhs: &'a AlgebraicQuad) {
        for (&m, q) in &rhs.terms {
            self.add_term(m, -q);
        }
    }
}

impl<'a> Sub<&'a AlgebraicQuad> for &AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn sub(self, rhs: &'a AlgebraicQuad) -> AlgebraicQuad {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn sub(mut self, rhs: AlgebraicQuad) -> AlgebraicQuad {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a AlgebraicQuad> for &AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn mul(self, rhs: &'a AlgebraicQuad) -> AlgebraicQuad {
        let mut out = AlgebraicQuad::zero();
        for (&m, p) in &self.terms {
            for (&n, q) in &rhs.terms {
                // √m·√n = g·√(mn/g²) with g = gcd(m, n)
                let g = gcd_u64(m, n);
                let key = (m / g)
                    .checked_mul(n / g)
                    .expect("radicand product overflows u64");
                let c = p * q;
                let c = if g == 1 {
                    c
                } else {
                    c * Rational::from_integer(BigInt::from(g))
                };
                out.add_term(key, c);
            }
        }
        out
    }
}

impl Mul for AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn mul(self, rhs: AlgebraicQuad) -> AlgebraicQuad {
        &self * &rhs
    }
}

impl Neg for &AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn neg(self) -> AlgebraicQuad {
        AlgebraicQuad {
            terms: self.terms.iter().map(|(&m, q)| (m, -q)).collect(),
        }
    }
}

impl Neg for AlgebraicQuad {
    type Output = AlgebraicQuad;
    fn neg(self) -> AlgebraicQuad {
        -&self
    }
}

impl core::iter::Sum for AlgebraicQuad {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Text form `q1 + q2*sqrt(m2) + …`, rational part first, radicands
/// increasing; unit coefficients on radicals are omitted.
impl fmt::Display for AlgebraicQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&m, q)) in self.terms.iter().enumerate() {
            let mag = q.abs();
            match (i, q.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m == 1 {
                fmt_rational(&mag, f)?;
            } else if mag.is_one() {
                write!(f, "sqrt({m})")?;
            } else {
                fmt_rational(&mag, f)?;
                write!(f, "*sqrt({m})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraicQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicQuad({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rational;

    fn q(s: &str) -> AlgebraicQuad {
        s.parse().unwrap()
    }

    #[test]
    fn addition_cancels() {
        assert_eq!(q("sqrt(2)") + q("1 - sqrt(2)"), AlgebraicQuad::one());
        assert_eq!(
            q("1/2 + 1/2*sqrt(5)") + q("1/2 - 1/2*sqrt(5)"),
            AlgebraicQuad::one()
        );
        let s = q("sqrt(2)") + q("sqrt(3)");
        assert_eq!(s.support(), [2, 3]);
        assert_eq!(s.coefficient(2), rational(1, 1));
        assert_eq!(s.coefficient(3), rational(1, 1));
    }

    #[test]
    fn multiplication_normalizes_radicands() {
        assert_eq!(q("sqrt(2)") * q("sqrt(2)"), AlgebraicQuad::from_int(2));
        assert_eq!(q("sqrt(2)") * q("sqrt(3)"), q("sqrt(6)"));
        assert_eq!(q("sqrt(6)") * q("sqrt(10)"), q("2*sqrt(15)"));
    }

    #[test]
    fn inverse() {
        assert_eq!(q("1 + sqrt(2)").inv().unwrap(), q("-1 + sqrt(2)"));
        assert_eq!(q("sqrt(2)").inv().unwrap(), q("1/2*sqrt(2)"));
        assert_eq!(AlgebraicQuad::from_int(2).inv().unwrap(), q("1/2"));
        assert_eq!(AlgebraicQuad::zero().inv(), Err(Error::DivisionByZero));
        let x = q("1 + sqrt(2) - 3*sqrt(3) + 1/7*sqrt(30)");
        assert_eq!(&x * &x.inv().unwrap(), AlgebraicQuad::one());
    }

    #[test]
    fn signs() {
        assert_eq!(q("sqrt(2) - 1").sign(), 1);
        assert_eq!(q("3/2 - sqrt(2)").sign(), 1);
        assert_eq!((q("1 - sqrt(2)") + q("sqrt(2) - 1")).sign(), 0);
        // 1 + √2 - √3 - √5/2 ≈ -0.0503
        assert_eq!(q("1 + sqrt(2) - sqrt(3) - 1/2*sqrt(5)").sign(), -1);
        // (√2 + √3)² = 5 + 2√6, differs from 9.899 by a tiny amount
        assert_eq!(q("5 + 2*sqrt(6) - 98989794855663/10000000000000").sign(), 1);
    }

    #[test]
    fn floors() {
        assert_eq!(q("sqrt(2)").floor(), BigInt::from(1));
        assert_eq!(q("-sqrt(2)").floor(), BigInt::from(-2));
        assert_eq!(q("10*sqrt(2)").floor(), BigInt::from(14));
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
        assert_eq!(q("3").floor(), BigInt::from(3));
        assert_eq!(q("-sqrt(2)").ceil(), BigInt::from(-1));
        assert_eq!(q("3").ceil(), BigInt::from(3));
    }

    #[test]
    fn decimals() {
        assert_eq!(q("sqrt(2)").to_decimal(6), "1.41421");
        assert_eq!(AlgebraicQuad::zero().to_decimal(3), "0.00");
        assert_eq!(q("1 - 1/6*sqrt(2)").to_decimal(6), "0.764298");
        assert_eq!(q("-sqrt(2)").to_decimal(3), "-1.41");
        assert_eq!(q("1000*sqrt(2)").to_decimal(2), "1400");
        assert_eq!(q("1/1000*sqrt(2)").to_decimal(3), "0.00141");
        // 9.996 rounds up into the next decade
        assert_eq!(q("9996/1000").to_decimal(3), "10.0");
        // ties go to even
        assert_eq!(q("5/2").to_decimal(1), "2");
        assert_eq!(q("7/2").to_decimal(1), "4");
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "0",
            "1 - 1/6*sqrt(2)",
            "4 + 2*sqrt(2)",
            "-sqrt(3)",
            "-1/2 + sqrt(2) - 3*sqrt(15)",
        ] {
            assert_eq!(q(s).to_string(), s);
        }
    }

    #[test]
    fn ordering_and_f64() {
        assert!(q("sqrt(3)") > q("sqrt(2)"));
        assert!(q("-sqrt(3)") < q("-sqrt(2)"));
        assert!((q("1 + sqrt(2)").to_f64() - 2.414_213_562_373_095).abs() < 1e-15);
    }
}
