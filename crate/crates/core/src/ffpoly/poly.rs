//! Dense univariate polynomials over a [`FiniteField`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ffpoly::field::{Elem, FiniteField};

/// A polynomial with ascending coefficients and no trailing zeros.
///
/// The zero polynomial has an empty coefficient vector and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FiniteField,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero(field: &FiniteField) -> Self {
        Self { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &FiniteField, c: Elem) -> Self {
        Self::from_raw(field, vec![c])
    }

    /// The indeterminate `X`.
    pub fn x(field: &FiniteField) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: &FiniteField, c: Elem, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_raw(field, coeffs)
    }

    /// Builds a polynomial from ascending coefficients, rejecting values `>= q`.
    pub fn from_coeffs(field: &FiniteField, coeffs: Vec<Elem>) -> Result<Self> {
        if let Some(pos) = coeffs.iter().position(|&c| c >= field.order()) {
            return Err(Error::Parse {
                pos,
                msg: format!("coefficient {} is not below q = {}", coeffs[pos], field.order()),
            });
        }
        Ok(Self::from_raw(field, coeffs))
    }

    /// Ascending integer coefficients reduced into the prime subfield.
    pub fn from_ints(field: &FiniteField, coeffs: &[i64]) -> Self {
        Self::from_raw(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub(crate) fn from_raw(field: &FiniteField, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field: field.clone(), coeffs }
    }

    /// The `idx`-th monic polynomial of degree `d`, where `idx = sum c_i q^i` over the
    /// non-leading coefficients. Increasing `idx` is lexicographic order on the
    /// coefficients read from `X^{d-1}` down to the constant term.
    pub fn from_monic_index(field: &FiniteField, d: usize, mut idx: u64) -> Self {
        let q = field.order() as u64;
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((idx % q) as Elem);
            idx /= q;
        }
        coeffs.push(1);
        Self { field: field.clone(), coeffs }
    }

    /// Inverse of [`Poly::from_monic_index`]; `None` unless monic.
    pub fn monic_index(&self) -> Option<u64> {
        if !self.is_monic() {
            return None;
        }
        let q = self.field.order() as u64;
        let d = self.coeffs.len() - 1;
        Some(self.coeffs[..d].iter().rev().fold(0u64, |acc, &c| acc * q + c as u64))
    }

    #[inline]
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `X^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// Degree, or `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating the zero polynomial as an error.
    pub fn deg(&self) -> Result<usize> {
        self.degree().ok_or(Error::ZeroPolynomial)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading_coeff(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    /// `self / lc(self)`; the zero polynomial maps to itself.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None | Some(1) => self.clone(),
            Some(c) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: Elem) -> Self {
        let f = &self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Self::from_raw(f, out))
    }

    /// Euclidean division: `self = quotient * divisor + remainder`, `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_field(divisor)?;
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv_lc = f.inv(divisor.coeffs[db]).expect("nonzero leading coefficient");
        let mut quot = vec![0; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, inv_lc);
            quot[k - db] = t;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - db + j;
                rem[idx] = f.sub(rem[idx], f.mul(t, b));
            }
        }
        rem.truncate(db);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic greatest common divisor; zero only when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `true` when the polynomials share no non-constant factor.
    pub fn is_coprime(&self, other: &Self) -> Result<bool> {
        Ok(self.gcd(other)?.is_one())
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect();
        Self::from_raw(f, coeffs)
    }

    /// Horner evaluation at a base-field element.
    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self> {
        self.try_mul(other)?.rem(modulus)
    }

    /// `self^k mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, k: &BigUint, modulus: &Self) -> Result<Self> {
        let mut acc = Self::one(&self.field).rem(modulus)?;
        let base = self.rem(modulus)?;
        for i in (0..k.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus)?;
            if k.bit(i) {
                acc = acc.mul_mod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// `self^k` without reduction.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then lexicographically from the leading coefficient down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            /// Panics when the operands live over different fields; use the `try_` form to recover.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomials over different fields")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}
