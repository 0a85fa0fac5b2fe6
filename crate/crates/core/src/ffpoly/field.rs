//! Finite fields `F_q` of odd characteristic.
//!
//! Elements are plain `u32` indices in `0..q`. For a prime field the index is
//! the residue. For `q = p^e` the index packs the coefficients of the
//! representative polynomial over `F_p` in base `p`, constant term least
//! significant, so that `0` and `1` keep their usual meaning.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffpoly::arith::is_irreducible;
use crate::ffpoly::poly::Poly;

/// Field element index.
pub type Elem = u32;

/// Largest field order supported by the table-driven arithmetic.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Ascending coefficients over `F_p` of the defining modulus (empty when `e = 1`).
    modulus: Vec<u32>,
    /// `exp[k] = g^k` for a primitive element `g`, doubled to skip a reduction.
    exp: Vec<u32>,
    /// Discrete logarithms; `log[0]` is unused.
    log: Vec<u32>,
    /// Quadratic character of every element.
    quad: Vec<i8>,
}

pub(crate) fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FiniteField {
    /// The prime field `F_p` for an odd prime `p`.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        if p > MAX_ORDER {
            return Err(Error::InvalidField(format!("order {p} exceeds {MAX_ORDER}")));
        }
        let quad = (0..p)
            .map(|a| {
                if a == 0 {
                    0
                } else if mod_pow(a as u64, ((p - 1) / 2) as u64, p as u64) == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Ok(Self {
            inner: Arc::new(Inner { p, e: 1, q: p, modulus: Vec::new(), exp: Vec::new(), log: Vec::new(), quad }),
        })
    }

    /// `F_{p^e}` defined by the lexicographically least monic irreducible of degree `e` over `F_p`.
    pub fn prime_power(p: u32, e: u32) -> Result<Self> {
        if e == 1 {
            return Self::prime(p);
        }
        let base = Self::prime(p)?;
        let modulus = crate::ffpoly::primes::least_irreducible(&base, e as usize)?;
        Self::with_modulus(p, modulus.coeffs().to_vec())
    }

    /// `F_{p^e}` given an explicit monic irreducible modulus over `F_p` (ascending coefficients).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let base = Self::prime(p)?;
        let m = Poly::from_coeffs(&base, modulus.clone())?;
        let e = match m.degree() {
            Some(d) if d >= 1 => d as u32,
            _ => return Err(Error::InvalidField("modulus must be non-constant".into())),
        };
        if e == 1 {
            return Ok(base);
        }
        if !m.is_monic() {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !is_irreducible(&m)? {
            return Err(Error::InvalidField(format!("modulus {m} is reducible over F_{p}")));
        }
        let q64 = (p as u64).pow(e);
        if q64 > MAX_ORDER as u64 {
            return Err(Error::InvalidField(format!("order {q64} exceeds {MAX_ORDER}")));
        }
        let q = q64 as u32;
        let m = m.coeffs().to_vec();
        let mulp = |a: u32, b: u32| poly_index_mul(a, b, p, &m);
        // primitive element search
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let pow = |mut base: u32, mut k: u64| {
            let mut acc = 1u32;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mulp(acc, base);
                }
                base = mulp(base, base);
                k >>= 1;
            }
            acc
        };
        let gen = (2..q)
            .find(|&g| factors.iter().all(|&r| pow(g, order / r) != 1))
            .ok_or_else(|| Error::InvalidField("no primitive element".into()))?;
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for k in 0..(q - 1) {
            exp[k as usize] = acc;
            exp[(k + q - 1) as usize] = acc;
            log[acc as usize] = k;
            acc = mulp(acc, gen);
        }
        let quad = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else if log[a as usize] % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Ok(Self { inner: Arc::new(Inner { p, e, q, modulus: m, exp, log, quad }) })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.inner.e == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.q
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.inner.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            digitwise(a, b, p, self.inner.e, |x, y| (x + y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            digitwise(a, 0, p, self.inner.e, |x, _| (p - x) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.inner.e == 1 {
            ((a as u64 * b as u64) % self.inner.p as u64) as Elem
        } else if a == 0 || b == 0 {
            0
        } else {
            let i = &self.inner;
            i.exp[(i.log[a as usize] + i.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let i = &self.inner;
        if i.e == 1 {
            Some(mod_pow(a as u64, (i.p - 2) as u64, i.p as u64) as Elem)
        } else {
            let l = i.log[a as usize];
            Some(i.exp[((i.q - 1 - l) % (i.q - 1)) as usize])
        }
    }

    pub fn pow(&self, a: Elem, mut k: u128) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The quadratic character of `F_q`: `0` at zero, `1` on non-zero squares, `-1` otherwise.
    #[inline]
    pub fn quadratic_character(&self, a: Elem) -> i8 {
        self.inner.quad[a as usize]
    }

    pub(crate) fn key(&self) -> FieldKey {
        FieldKey { p: self.inner.p, modulus: self.inner.modulus.clone() }
    }
}

/// Hashable identity of a field, used by the process-wide caches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct FieldKey {
    p: u32,
    modulus: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FiniteField {}

impl Hash for FiniteField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

pub(crate) fn mod_pow(mut b: u64, mut k: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        k >>= 1;
    }
    acc
}

#[inline]
fn digitwise(mut a: u32, mut b: u32, p: u32, e: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..e {
        out += op(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// Product of two packed `F_p[Y]/(m)` indices by schoolbook multiplication.
fn poly_index_mul(a: u32, b: u32, p: u32, m: &[u32]) -> u32 {
    let e = m.len() - 1;
    let digits = |mut x: u32| {
        let mut d = vec![0u64; e];
        for slot in d.iter_mut() {
            *slot = (x % p) as u64;
            x /= p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p as u64;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for (j, &mj) in m.iter().enumerate().take(e) {
                let idx = k - e + j;
                prod[idx] = (prod[idx] + (p as u64 - c) * mj as u64) % p as u64;
            }
            prod[k] = 0;
        }
    }
    let mut out = 0u32;
    for k in (0..e).rev() {
        out = out * p + prod[k] as u32;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_composite_characteristic() {
        assert!(FiniteField::prime(2).is_err());
        assert!(FiniteField::prime(9).is_err());
        assert!(FiniteField::prime(1).is_err());
        assert!(FiniteField::prime(7).is_ok());
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2), (3, 3), (5, 2), (3, 4), (7, 2)] {
            let f = FiniteField::prime_power(p, e).unwrap();
            let q = f.order();
            assert!(q <= 81);
            for a in f.elements() {
                assert_eq!(f.pow(a, q as u128), a, "{f}: {a}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_f9() {
        let f = FiniteField::prime_power(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn quadratic_character_counts() {
        for (p, e) in [(3, 1), (5, 1), (3, 2), (5, 2)] {
            let f = FiniteField::prime_power(p, e).unwrap();
            let squares: i32 = f.elements().map(|a| f.quadratic_character(a) as i32).sum();
            assert_eq!(squares, 0);
            assert_eq!(f.quadratic_character(1), 1);
        }
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(f3.quadratic_character(2), -1);
    }

    #[test]
    fn rejects_reducible_modulus() {
        // X^2 + 2 = (X - 1)(X + 1) over F_3
        assert!(FiniteField::with_modulus(3, vec![2, 0, 1]).is_err());
        assert!(FiniteField::with_modulus(3, vec![1, 0, 1]).is_ok());
    }
}
