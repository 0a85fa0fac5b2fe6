//! Extension fields `F_{q^n}` over a base [`FiniteField`].
//!
//! Elements are `u64` indices `sum c_i q^i` where `c_i` are base-field indices of the
//! coefficients of the representative modulo the defining polynomial. The base field
//! embeds as the indices below `q`. Small fields (up to [`TABLE_LIMIT`] elements) carry
//! exponent/logarithm tables; larger ones fall back to schoolbook arithmetic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::ffpoly::field::{prime_factors, Elem, FieldKey, FiniteField};
use crate::ffpoly::poly::Poly;
use crate::ffpoly::primes::least_irreducible;

/// Extension element index.
pub type ExtElem = u64;

/// Fields up to this order use table-driven multiplication.
pub const TABLE_LIMIT: u64 = 1 << 21;

/// Largest extension order accepted at all.
pub const MAX_EXT_ORDER: u64 = 1 << 40;

pub struct ExtensionField {
    base: FiniteField,
    n: usize,
    modulus: Poly,
    order: u64,
    tables: Option<Tables>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or [`LOG_ZERO`] when `1 + g^k = 0`.
    zech: Vec<u32>,
}

/// Logarithm sentinel standing for the zero element.
pub const LOG_ZERO: u32 = u32::MAX;

impl std::fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}^{} mod {}", self.base.order(), self.n, self.modulus)
    }
}

type ExtCache = HashMap<(FieldKey, usize), Arc<ExtensionField>>;

/// Shared instance of `F_{q^n}` built on the least irreducible modulus of degree `n`.
pub fn extension(base: &FiniteField, n: usize) -> Result<Arc<ExtensionField>> {
    static CACHE: OnceLock<Mutex<ExtCache>> = OnceLock::new();
    let key = (base.key(), n);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("extension cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let built = Arc::new(ExtensionField::new(base, n)?);
    let mut guard = cache.lock().expect("extension cache poisoned");
    Ok(guard.entry(key).or_insert(built).clone())
}

impl ExtensionField {
    pub fn new(base: &FiniteField, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let modulus = least_irreducible(base, n)?;
        Self::with_modulus(modulus)
    }

    /// Extension defined by an explicit irreducible modulus over the base field.
    pub fn with_modulus(modulus: Poly) -> Result<Self> {
        let base = modulus.field().clone();
        let n = modulus.deg()?;
        if n == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !crate::ffpoly::arith::is_irreducible(&modulus)? {
            return Err(Error::NotIrreducible(modulus.to_string()));
        }
        let modulus = modulus.monic();
        let order = (base.order() as u64)
            .checked_pow(n as u32)
            .filter(|&o| o <= MAX_EXT_ORDER)
            .ok_or(Error::Overflow("extension field order"))?;
        let mut ext = Self { base, n, modulus, order, tables: None };
        if order <= TABLE_LIMIT {
            ext.tables = Some(ext.build_tables());
        }
        Ok(ext)
    }

    fn build_tables(&self) -> Tables {
        let m = self.order - 1;
        let factors = prime_factors(m);
        let gen =
            (2..self.order).find(|&g| factors.iter().all(|&r| self.slow_pow(g, (m / r) as u128) != 1)).unwrap_or(1);
        let mut exp = vec![0u32; 2 * m as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut acc = 1u64;
        for k in 0..m as usize {
            exp[k] = acc as u32;
            exp[k + m as usize] = acc as u32;
            log[acc as usize] = k as u32;
            acc = self.slow_mul(acc, gen);
        }
        let zech = (0..m as usize)
            .map(|k| {
                let s = self.add_base(exp[k] as u64, 1);
                if s == 0 {
                    LOG_ZERO
                } else {
                    log[s as usize]
                }
            })
            .collect();
        Tables { exp, log, zech }
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    /// Degree `n` over the base field.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `q^n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<ExtElem> {
        0..self.order
    }

    /// Image of a base-field element.
    #[inline]
    pub fn embed(&self, c: Elem) -> ExtElem {
        c as ExtElem
    }

    /// Base-field coordinates, ascending.
    pub fn to_coeffs(&self, mut a: ExtElem) -> Vec<Elem> {
        let q = self.base.order() as u64;
        (0..self.n)
            .map(|_| {
                let c = (a % q) as Elem;
                a /= q;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[Elem]) -> ExtElem {
        let q = self.base.order() as u64;
        coeffs.iter().take(self.n).rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    pub fn add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let q = self.base.order() as u64;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        while a > 0 || b > 0 {
            out += self.base.add((a % q) as Elem, (b % q) as Elem) as u64 * scale;
            a /= q;
            b /= q;
            scale *= q;
        }
        out
    }

    /// `a + c` for a base-field constant `c`; only the lowest digit changes.
    #[inline]
    pub fn add_base(&self, a: ExtElem, c: Elem) -> ExtElem {
        let q = self.base.order() as u64;
        let d0 = a % q;
        a - d0 + self.base.add(d0 as Elem, c) as u64
    }

    pub fn neg(&self, a: ExtElem) -> ExtElem {
        let q = self.base.order() as u64;
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        while a > 0 {
            out += self.base.neg((a % q) as Elem) as u64 * scale;
            a /= q;
            scale *= q;
        }
        out
    }

    pub fn sub(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64
                }
            }
            None => self.slow_mul(a, b),
        }
    }

    fn slow_mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let f = &self.base;
        let (da, db) = (self.to_coeffs(a), self.to_coeffs(b));
        let mut prod = vec![0; 2 * self.n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        let m = self.modulus.coeffs();
        for k in (self.n..prod.len()).rev() {
            let c = prod[k];
            if c != 0 {
                for (j, &mj) in m.iter().enumerate().take(self.n) {
                    let idx = k - self.n + j;
                    prod[idx] = f.sub(prod[idx], f.mul(c, mj));
                }
            }
        }
        self.from_coeffs(&prod[..self.n])
    }

    fn slow_pow(&self, a: ExtElem, mut k: u128) -> ExtElem {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: ExtElem, k: u128) -> ExtElem {
        match &self.tables {
            Some(t) => {
                if a == 0 {
                    return if k == 0 { 1 } else { 0 };
                }
                let m = (self.order - 1) as u128;
                let e = (t.log[a as usize] as u128 * (k % m)) % m;
                t.exp[e as usize] as u64
            }
            None => self.slow_pow(a, k),
        }
    }

    pub fn inv(&self, a: ExtElem) -> Option<ExtElem> {
        (a != 0).then(|| self.pow(a, (self.order - 2) as u128))
    }

    /// Discrete logarithm with respect to the table generator, when tables exist.
    pub fn log(&self, a: ExtElem) -> Option<u32> {
        match &self.tables {
            Some(t) if a != 0 => Some(t.log[a as usize]),
            _ => None,
        }
    }

    /// `true` when log-domain arithmetic ([`Self::log_add`] and friends) is available.
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    fn t(&self) -> &Tables {
        self.tables.as_ref().expect("log-domain arithmetic needs a table-backed field")
    }

    /// Logarithm of any element, [`LOG_ZERO`] for zero. Panics without tables.
    #[inline]
    pub fn log_of(&self, a: ExtElem) -> u32 {
        if a == 0 {
            LOG_ZERO
        } else {
            self.t().log[a as usize]
        }
    }

    /// Inverse of [`Self::log_of`].
    #[inline]
    pub fn exp_of(&self, l: u32) -> ExtElem {
        if l == LOG_ZERO {
            0
        } else {
            self.t().exp[l as usize] as u64
        }
    }

    /// Product in the log domain.
    #[inline]
    pub fn log_mul(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO || b == LOG_ZERO {
            return LOG_ZERO;
        }
        let m = (self.order - 1) as u32;
        let s = a + b;
        if s >= m {
            s - m
        } else {
            s
        }
    }

    /// Sum in the log domain through the Zech table.
    #[inline]
    pub fn log_add(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO {
            return b;
        }
        if b == LOG_ZERO {
            return a;
        }
        let m = (self.order - 1) as u32;
        let d = if b >= a { b - a } else { b + m - a };
        let z = self.t().zech[d as usize];
        if z == LOG_ZERO {
            LOG_ZERO
        } else {
            let s = a + z;
            if s >= m {
                s - m
            } else {
                s
            }
        }
    }

    /// Quadratic character of the element with logarithm `l`.
    #[inline]
    pub fn log_chi(&self, l: u32) -> i8 {
        if l == LOG_ZERO {
            0
        } else if l % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The quadratic character of `F_{q^n}`.
    #[inline]
    pub fn quadratic_character(&self, a: ExtElem) -> i8 {
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                if t.log[a as usize] % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => {
                if self.slow_pow(a, ((self.order - 1) / 2) as u128) == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Euler-criterion evaluation of the quadratic character, ignoring the tables.
    pub fn quadratic_character_euler(&self, a: ExtElem) -> i8 {
        if a == 0 {
            0
        } else if self.slow_pow(a, ((self.order - 1) / 2) as u128) == 1 {
            1
        } else {
            -1
        }
    }

    /// `a^q`.
    pub fn frobenius(&self, a: ExtElem) -> ExtElem {
        self.pow(a, self.base.order() as u128)
    }

    /// Smallest `k` with `a^{q^k} = a`, i.e. the degree of the subfield generated by `a`.
    pub fn element_degree(&self, a: ExtElem) -> usize {
        let mut b = self.frobenius(a);
        let mut k = 1;
        while b != a {
            b = self.frobenius(b);
            k += 1;
        }
        k
    }

    /// Horner evaluation of a base-field polynomial.
    pub fn eval(&self, f: &Poly, x: ExtElem) -> ExtElem {
        f.coeffs().iter().rev().fold(0, |acc, &c| self.add_base(self.mul(acc, x), c))
    }

    /// Minimal polynomial over the base field, `prod (X - a^{q^i})` over the Frobenius orbit.
    pub fn minimal_polynomial(&self, a: ExtElem) -> Poly {
        let d = self.element_degree(a);
        // coefficients in the extension, ascending
        let mut acc: Vec<ExtElem> = vec![1];
        let mut conj = a;
        for _ in 0..d {
            let mut next = vec![0; acc.len() + 1];
            let neg = self.neg(conj);
            for (i, &c) in acc.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.add(next[i], self.mul(c, neg));
            }
            acc = next;
            conj = self.frobenius(conj);
        }
        let coeffs = acc
            .into_iter()
            .map(|c| {
                debug_assert!(c < self.base.order() as u64);
                c as Elem
            })
            .collect();
        Poly::from_raw(&self.base, coeffs)
    }
}
