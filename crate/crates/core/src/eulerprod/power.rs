//! Exact rationals whose denominator is a power of a fixed base.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `num / base^exp`. Products of Euler factors at `u = a / b` stay in this form with
/// `base = b`, which avoids gcd computations on very large integers until the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerFraction {
    num: BigInt,
    base: u64,
    exp: u64,
}

impl PowerFraction {
    pub fn new(num: BigInt, base: u64, exp: u64) -> Self {
        assert!(base >= 1, "base must be positive");
        Self { num, base, exp }
    }

    pub fn one(base: u64) -> Self {
        Self::new(BigInt::one(), base, 0)
    }

    pub fn zero(base: u64) -> Self {
        Self::new(BigInt::zero(), base, 0)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.base, other.base, "mixed bases");
        Self::new(&self.num * &other.num, self.base, self.exp + other.exp)
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::new(num_traits::pow(self.num.clone(), k as usize), self.base, self.exp * k as u64)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.base, other.base, "mixed bases");
        let b = BigInt::from(self.base);
        let (lo, hi) = if self.exp <= other.exp { (self, other) } else { (other, self) };
        let lifted = &lo.num * num_traits::pow(b, (hi.exp - lo.exp) as usize);
        Self::new(lifted + &hi.num, self.base, hi.exp)
    }

    /// Product of many factors, multiplied as a balanced tree.
    pub fn product(base: u64, factors: Vec<PowerFraction>) -> Self {
        let mut layer = factors;
        if layer.is_empty() {
            return Self::one(base);
        }
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len().div_ceil(2));
            let mut it = layer.into_iter();
            while let Some(a) = it.next() {
                next.push(match it.next() {
                    Some(b) => a.mul(&b),
                    None => a,
                });
            }
            layer = next;
        }
        layer.pop().unwrap_or_else(|| Self::one(base))
    }

    /// Reduced rational value; only the prime factors of the base need to be cancelled.
    pub fn to_rational(&self) -> BigRational {
        let mut num = self.num.clone();
        let mut den = num_traits::pow(BigInt::from(self.base), self.exp as usize);
        if num.is_zero() {
            return BigRational::zero();
        }
        for p in crate::ffpoly::field::prime_factors(self.base) {
            let p = BigInt::from(p);
            loop {
                let (qn, rn) = num.div_rem(&p);
                if !rn.is_zero() {
                    break;
                }
                let (qd, rd) = den.div_rem(&p);
                if !rd.is_zero() {
                    break;
                }
                num = qn;
                den = qd;
            }
        }
        BigRational::new_raw(num, den)
    }

    /// Floating-point value, correctly scaled even when the parts overflow `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let den = num_traits::pow(BigInt::from(self.base), self.exp as usize);
        // shift so the integer quotient carries about 64 significant bits
        let shift = 64 + den.bits() as i64 - self.num.bits() as i64;
        let scaled = if shift >= 0 { self.num.abs() << shift as u64 } else { self.num.abs() >> (-shift) as u64 };
        let quotient = (scaled / den).to_f64().unwrap_or(f64::NAN);
        let v = quotient * (-shift as f64).exp2();
        if self.num.is_negative() {
            -v
        } else {
            v
        }
    }
}
