//! Enumeration and exact counting of monic, prime and square-free polynomials.

use std::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffpoly::arith::is_squarefree;
use crate::ffpoly::field::FiniteField;
use crate::ffpoly::poly::Poly;
use crate::ffpoly::primes::primes_of_degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyKind {
    Monic,
    Prime,
    SquarefreeMonic,
}

/// `q^d` as a `u64`, or an overflow error.
pub fn monic_count(field: &FiniteField, d: usize) -> Result<u64> {
    (field.order() as u64).checked_pow(d as u32).ok_or(Error::Overflow("monic polynomial count"))
}

/// Qualifying polynomials of degree `d`, in increasing monic-index order.
pub fn enumerate(field: &FiniteField, d: usize, kind: PolyKind) -> Result<Vec<Poly>> {
    let total = monic_count(field, d)?;
    enumerate_range(field, d, kind, 0..total)
}

/// The members of `enumerate(field, d, kind)` whose monic index lies in `range`.
///
/// Disjoint ranges give disjoint outputs, so consumers can split the index space.
pub fn enumerate_range(field: &FiniteField, d: usize, kind: PolyKind, range: Range<u64>) -> Result<Vec<Poly>> {
    match kind {
        PolyKind::Monic => Ok(range.map(|i| Poly::from_monic_index(field, d, i)).collect()),
        PolyKind::SquarefreeMonic => {
            let mut out = Vec::new();
            for i in range {
                let p = Poly::from_monic_index(field, d, i);
                if is_squarefree(&p)? {
                    out.push(p);
                }
            }
            Ok(out)
        }
        PolyKind::Prime => {
            if d == 0 {
                return Err(Error::InvalidArgument("primes have degree at least 1".into()));
            }
            let all = primes_of_degree(field, d)?;
            Ok(all.iter().filter(|p| range.contains(&p.monic_index().expect("primes are monic"))).cloned().collect())
        }
    }
}

/// Möbius function on positive integers, by trial division.
pub fn integer_mobius(mut n: u64) -> i8 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `pi_q(n) = (1/n) sum_{d | n} mu(d) q^{n/d}`, exactly.
pub fn prime_count_exact(q: u64, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("prime counts need n >= 1".into()));
    }
    let mut total = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            let term = BigInt::from(q).pow((n / d) as u32);
            match integer_mobius(d as u64) {
                1 => total += term,
                -1 => total -= term,
                _ => {}
            }
        }
    }
    let (quot, rem) = (total.clone() / n, total % n);
    debug_assert!(rem.is_zero());
    quot.to_biguint().ok_or(Error::Consistency("negative prime count".into()))
}

/// `pi_q(n)` as `u64` when it fits.
pub fn prime_count(q: u64, n: usize) -> Result<u64> {
    prime_count_exact(q, n)?.to_u64().ok_or(Error::Overflow("prime count"))
}

/// Number of monic square-free polynomials of degree `d`: `q^d` for `d <= 1`, else `q^d - q^{d-1}`.
pub fn squarefree_count(q: u64, d: usize) -> BigUint {
    let qd = BigUint::from(q).pow(d as u32);
    if d <= 1 {
        qd
    } else {
        &qd - BigUint::from(q).pow(d as u32 - 1)
    }
}
