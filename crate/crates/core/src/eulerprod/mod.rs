//! Truncated Euler products with local factors `1 + delta(u; Q)`, evaluated exactly at
//! rational `u`, and their sums over primes.
//!
//! Every local factor used here is an integer polynomial in `v = u^{deg Q}`, so with
//! `u = a / b` a truncated product is an integer over a power of `b`
//! ([`PowerFraction`]).

mod power;

pub use power::PowerFraction;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffpoly::{is_irreducible, prime_count, primes_of_degree, FiniteField, Poly};
use crate::lfunc::{l_polynomial, zeta_q_value, QuadChar, Sign};
use crate::newton::power_sums;

/// The three families of local factors attached to a prime `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// `2 chi+(Q) v - (1 + 2 chi+(Q)) v^2`.
    Plus,
    /// `2 chi-(Q) v - (1 + 2 chi-(Q)) v^2`.
    Minus,
    /// `(chi+(Q) + chi-(Q)) v - (1 + chi+(Q) + chi-(Q)) v^2`.
    Zero,
}

impl FactorKind {
    pub const ALL: [FactorKind; 3] = [FactorKind::Plus, FactorKind::Minus, FactorKind::Zero];

    pub fn as_str(self) -> &'static str {
        match self {
            FactorKind::Plus => "plus",
            FactorKind::Minus => "minus",
            FactorKind::Zero => "zero",
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FactorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(FactorKind::Plus),
            "minus" | "-" => Ok(FactorKind::Minus),
            "zero" | "0" => Ok(FactorKind::Zero),
            _ => Err(Error::InvalidArgument(format!("unknown kind {s:?} (expected plus, minus or zero)"))),
        }
    }
}

/// `1 + delta` as a polynomial in `v`, given `chi+(Q)` and `deg Q`.
fn delta_poly(kind: FactorKind, chi_plus: i8, deg_q: usize) -> Vec<i64> {
    let twist = if deg_q % 2 == 0 { 1 } else { -1 };
    let s = match kind {
        FactorKind::Plus => 2 * chi_plus as i64,
        FactorKind::Minus => 2 * (chi_plus * twist) as i64,
        FactorKind::Zero => (chi_plus + chi_plus * twist) as i64,
    };
    vec![1, s, -(1 + s)]
}

fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Local factor of `H_{P,kind}`: `1 + delta` times the inverse local factors of the
/// L-functions it is divided by.
fn h_poly(kind: FactorKind, chi_plus: i8, deg_q: usize) -> Vec<i64> {
    let twist = if deg_q % 2 == 0 { 1 } else { -1 };
    let (c1, c2) = match kind {
        FactorKind::Plus => (chi_plus, chi_plus),
        FactorKind::Minus => (chi_plus * twist, chi_plus * twist),
        FactorKind::Zero => (chi_plus, chi_plus * twist),
    };
    let l_inv = convolve(&[1, -(c1 as i64)], &[1, -(c2 as i64)]);
    convolve(&delta_poly(kind, chi_plus, deg_q), &l_inv)
}

/// One term `c * chi(Q)` of the linear part of `delta`, with `chi = chi_D^sign`.
#[derive(Clone, Debug)]
pub struct CharacterTerm {
    pub coeff: BigRational,
    pub sign: Sign,
    pub modulus: Poly,
}

type FactorRule = dyn Fn(&Poly) -> Result<Vec<i64>> + Send + Sync;

/// A family of local factors: `exact_factor(Q)` is `1 + delta(u; Q)` as an integer
/// polynomial in `v = u^{deg Q}`, whose linear coefficient is `sum c_i chi_i(Q)` and
/// whose higher terms start at `v^{1 + eta}`.
#[derive(Clone)]
pub struct LocalFactorSpec {
    field: FiniteField,
    pub character_part: Vec<CharacterTerm>,
    pub eta: Rational64,
    rule: Arc<FactorRule>,
}

impl fmt::Debug for LocalFactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalFactorSpec")
            .field("q", &self.field.order())
            .field("character_part", &self.character_part)
            .field("eta", &self.eta)
            .finish()
    }
}

fn check_prime(p: &Poly) -> Result<()> {
    if !p.is_monic() || !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    Ok(())
}

impl LocalFactorSpec {
    pub fn custom(
        field: &FiniteField,
        character_part: Vec<CharacterTerm>,
        eta: Rational64,
        rule: impl Fn(&Poly) -> Result<Vec<i64>> + Send + Sync + 'static,
    ) -> Result<Self> {
        if eta <= Rational64::zero() {
            return Err(Error::InvalidArgument("eta must be positive".into()));
        }
        Ok(Self { field: field.clone(), character_part, eta, rule: Arc::new(rule) })
    }

    /// `delta_{P,kind}`.
    pub fn delta(kind: FactorKind, p: &Poly) -> Result<Self> {
        check_prime(p)?;
        let term =
            |c: i64, sign| CharacterTerm { coeff: BigRational::from_integer(c.into()), sign, modulus: p.clone() };
        let character_part = match kind {
            FactorKind::Plus => vec![term(2, Sign::Plus)],
            FactorKind::Minus => vec![term(2, Sign::Minus)],
            FactorKind::Zero => vec![term(1, Sign::Plus), term(1, Sign::Minus)],
        };
        let chi = QuadChar::new(p, Sign::Plus)?;
        Self::custom(p.field(), character_part, Rational64::one(), move |qp| {
            Ok(delta_poly(kind, chi.value(qp)?, qp.deg()?))
        })
    }

    /// Local factors of `H_{P,kind}`; these have no linear term.
    pub fn h(kind: FactorKind, p: &Poly) -> Result<Self> {
        check_prime(p)?;
        let chi = QuadChar::new(p, Sign::Plus)?;
        Self::custom(p.field(), Vec::new(), Rational64::one(), move |qp| Ok(h_poly(kind, chi.value(qp)?, qp.deg()?)))
    }

    /// `1 - |Q|^{-2}` at `u = 1/q`, i.e. `1 - v^2`.
    pub fn zeta2(field: &FiniteField) -> Self {
        Self {
            field: field.clone(),
            character_part: Vec::new(),
            eta: Rational64::one(),
            rule: Arc::new(|_| Ok(vec![1, 0, -1])),
        }
    }

    /// `delta = 0`.
    pub fn trivial(field: &FiniteField) -> Self {
        Self {
            field: field.clone(),
            character_part: Vec::new(),
            eta: Rational64::one(),
            rule: Arc::new(|_| Ok(vec![1])),
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// `1 + delta(u; Q)` as ascending coefficients in `v = u^{deg Q}`.
    pub fn exact_factor(&self, q: &Poly) -> Result<Vec<i64>> {
        (self.rule)(q)
    }

    /// Checks, for every prime `Q` of degree `<= max_deg`, that the constant term is 1,
    /// the linear term is `sum c_i chi_i(Q)`, and every higher term has exponent
    /// at least `1 + eta`.
    pub fn verify_expansion(&self, max_deg: usize) -> Result<()> {
        for k in 1..=max_deg {
            for qp in primes_of_degree(&self.field, k)?.iter() {
                let c = self.exact_factor(qp)?;
                if c.first() != Some(&1) {
                    return Err(Error::Consistency(format!("factor at {qp} does not start with 1")));
                }
                let mut linear = BigRational::zero();
                for t in &self.character_part {
                    let chi = QuadChar::new(&t.modulus, t.sign)?;
                    linear += &t.coeff * BigRational::from_integer(chi.value(qp)?.into());
                }
                let got = BigRational::from_integer(c.get(1).copied().unwrap_or(0).into());
                if got != linear {
                    return Err(Error::Consistency(format!("linear coefficient at {qp} is {got}, expected {linear}")));
                }
                for (j, &cj) in c.iter().enumerate().skip(2) {
                    if cj != 0 && Rational64::from_integer(j as i64 - 1) < self.eta {
                        return Err(Error::Consistency(format!(
                            "term v^{j} at {qp} is below the declared order 1 + eta"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `u = a / b` with `b` fitting in `u64`.
fn split_u(u: &BigRational) -> Result<(BigInt, u64)> {
    let b = u.denom().to_u64().ok_or_else(|| Error::InvalidArgument("denominator of u is too large".into()))?;
    Ok((u.numer().clone(), b))
}

/// `sum c_j v^j` at `v = (a/b)^k` as a [`PowerFraction`] with base `b`.
fn factor_value(c: &[i64], a: &BigInt, b: u64, k: usize) -> PowerFraction {
    let big_a = num_traits::pow(a.clone(), k);
    let big_b = num_traits::pow(BigInt::from(b), k);
    let top = c.len().saturating_sub(1);
    let mut num = BigInt::zero();
    let mut a_pow = BigInt::one();
    for (j, &cj) in c.iter().enumerate() {
        if cj != 0 {
            num += BigInt::from(cj) * &a_pow * num_traits::pow(big_b.clone(), top - j);
        }
        a_pow *= &big_a;
    }
    PowerFraction::new(num, b, (top * k) as u64)
}

/// `|u| < min(q^{-1/(1+eta)}, q^{-1/2})`.
fn inside_disc(q: u32, eta: Rational64, u: &BigRational) -> bool {
    let u = u.abs().to_f64().unwrap_or(f64::INFINITY);
    let eta = *eta.numer() as f64 / *eta.denom() as f64;
    let q = q as f64;
    u < q.powf(-1.0 / (1.0 + eta)).min(q.powf(-0.5))
}

/// `prod_{deg Q <= M} (1 + delta(u; Q))`, exact.
#[derive(Clone, Debug)]
pub struct TruncatedProduct {
    pub m: usize,
    pub u: BigRational,
    pub value: BigRational,
    /// `u` lies outside the disc where the full product converges.
    pub outside_disc: bool,
}

/// Exact product over primes with degree in `degrees`.
pub fn product_over_degrees(
    spec: &LocalFactorSpec,
    degrees: std::ops::RangeInclusive<usize>,
    u: &BigRational,
) -> Result<PowerFraction> {
    let (a, b) = split_u(u)?;
    let mut factors = Vec::new();
    for k in degrees {
        if k == 0 {
            continue;
        }
        let primes = primes_of_degree(&spec.field, k)?;
        let vals: Vec<PowerFraction> = primes
            .par_iter()
            .map(|qp| spec.exact_factor(qp).map(|c| factor_value(&c, &a, b, k)))
            .collect::<Result<_>>()?;
        factors.extend(vals);
    }
    Ok(PowerFraction::product(b, factors))
}

/// `Q_delta^{(M)}(u)`.
pub fn truncated_product(spec: &LocalFactorSpec, m: usize, u: &BigRational) -> Result<TruncatedProduct> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let value = product_over_degrees(spec, 1..=m, u)?.to_rational();
    let outside_disc = !inside_disc(spec.field.order(), spec.eta, u);
    Ok(TruncatedProduct { m, u: u.clone(), value, outside_disc })
}

/// Scale of the truncation error, `(sqrt(q)|u|)^M / M + (q |u|^{1+eta})^M / M`, without
/// the implied constant.
pub fn tail_bound(spec: &LocalFactorSpec, m: usize, u: &BigRational) -> f64 {
    let q = spec.field.order() as f64;
    let u = u.abs().to_f64().unwrap_or(f64::INFINITY);
    let eta = *spec.eta.numer() as f64 / *spec.eta.denom() as f64;
    let m_f = m as f64;
    (q.sqrt() * u).powf(m_f) / m_f + (q * u.powf(1.0 + eta)).powf(m_f) / m_f
}

/// `1 + delta_{P,kind}(u; Q)` for primes `P` and `Q`.
pub fn local_factor(kind: FactorKind, p: &Poly, q: &Poly, u: &BigRational) -> Result<BigRational> {
    check_prime(q)?;
    let spec = LocalFactorSpec::delta(kind, p)?;
    let (a, b) = split_u(u)?;
    Ok(factor_value(&spec.exact_factor(q)?, &a, b, q.deg()?).to_rational())
}

/// `L(u, chi_P^+)^2 H_{P,+}(u)`, `L(u, chi_P^-)^2 H_{P,-}(u)` or
/// `L(u, chi_P^+) L(u, chi_P^-) H_{P,0}(u)`, with exact L-polynomials and `H` truncated
/// at degree `M`.
pub fn assembled_product(kind: FactorKind, p: &Poly, u: &BigRational, m: usize) -> Result<BigRational> {
    let l_plus = l_polynomial(&QuadChar::new(p, Sign::Plus)?)?.eval(u);
    let l_minus = l_polynomial(&QuadChar::new(p, Sign::Minus)?)?.eval(u);
    let h = truncated_product(&LocalFactorSpec::h(kind, p)?, m, u)?.value;
    Ok(match kind {
        FactorKind::Plus => &l_plus * &l_plus * h,
        FactorKind::Minus => &l_minus * &l_minus * h,
        FactorKind::Zero => l_plus * l_minus * h,
    })
}

/// For `k = 1..=m`: how many monic primes `Q` of degree `k` have `chi_P(Q) = 1, -1, 0`.
///
/// Computed from the L-polynomial of `chi_P` alone: its power sums give the von Mangoldt
/// sums over degree `k`, from which the prime sums follow by removing prime powers.
pub fn character_prime_counts(p: &Poly, m: usize) -> Result<Vec<[u64; 3]>> {
    check_prime(p)?;
    let n = p.deg()?;
    let q = p.field().order() as u64;
    let l = l_polynomial(&QuadChar::new(p, Sign::Plus)?)?;
    let t = power_sums(l.coeffs(), m)?;
    let pi: Vec<i128> =
        (0..=m).map(|k| if k == 0 { Ok(0) } else { prime_count(q, k).map(|c| c as i128) }).collect::<Result<_>>()?;
    let zeros = |k: usize| i128::from(k == n);
    let mut pi_chi = vec![0i128; m + 1];
    for k in 1..=m {
        let mut acc = -t[k - 1];
        for j in 2..=k {
            if k % j != 0 {
                continue;
            }
            let e = k / j;
            let s = if j % 2 == 1 { pi_chi[e] } else { pi[e] - zeros(e) };
            acc -= e as i128 * s;
        }
        if acc % k as i128 != 0 {
            return Err(Error::Consistency(format!("prime character sum at degree {k} is not integral")));
        }
        pi_chi[k] = acc / k as i128;
    }
    (1..=m)
        .map(|k| {
            let rest = pi[k] - zeros(k);
            let plus = rest + pi_chi[k];
            if plus % 2 != 0 || plus < 0 || plus > 2 * rest {
                return Err(Error::Consistency(format!("inconsistent character counts at degree {k}")));
            }
            Ok([(plus / 2) as u64, ((rest - plus / 2) as u64), zeros(k) as u64])
        })
        .collect()
}

/// `Q_{delta_{P,kind}}^{(M)}(u)` from [`character_prime_counts`]: one power per degree
/// and character value instead of one factor per prime.
pub fn delta_product_by_counts(kind: FactorKind, p: &Poly, m: usize, u: &BigRational) -> Result<PowerFraction> {
    let (a, b) = split_u(u)?;
    let counts = character_prime_counts(p, m)?;
    let mut factors = Vec::new();
    for (k, c) in (1..=m).zip(&counts) {
        for (chi, &count) in [1i8, -1, 0].iter().zip(c) {
            if count > 0 {
                let count = u32::try_from(count).map_err(|_| Error::Overflow("prime count"))?;
                factors.push(factor_value(&delta_poly(kind, *chi, k), &a, b, k).pow(count));
            }
        }
    }
    Ok(PowerFraction::product(b, factors))
}

/// Floating-point `Q_{delta_{P,kind}}^{(M)}(u)` from the same counts, as a sum of logarithms.
pub fn delta_product_f64(kind: FactorKind, p: &Poly, m: usize, u: f64) -> Result<f64> {
    let counts = character_prime_counts(p, m)?;
    let mut log = 0.0f64;
    let mut negative = false;
    for (k, c) in (1..=m).zip(&counts) {
        let v = u.powi(k as i32);
        for (chi, &count) in [1i8, -1, 0].iter().zip(c) {
            if count == 0 {
                continue;
            }
            let f: f64 = delta_poly(kind, *chi, k).iter().rev().fold(0.0, |acc, &cj| acc * v + cj as f64);
            if f == 0.0 {
                return Ok(0.0);
            }
            log += count as f64 * f.abs().ln();
            negative ^= f < 0.0 && count % 2 == 1;
        }
    }
    Ok(if negative { -log.exp() } else { log.exp() })
}

/// `sum_{deg P = n} Q_{delta_{P,kind}}^{(M)}(1/q)` against `pi_q(n) / zeta_q(2)`.
#[derive(Clone, Debug)]
pub struct PrimeSumReport {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub kind: FactorKind,
    /// Exact sum, or `None` when only the floating-point value was computed.
    pub sum: Option<BigRational>,
    pub sum_f64: f64,
    pub reference: BigRational,
    /// `(sum - reference) * n / q^{n/2}`.
    pub scaled_gap: f64,
    /// `q^{n-2M}/n`, `q^{n/2} M^3 / n`, `q^n / (n M q^{M/2})`.
    pub error_scales: [f64; 3],
}

/// `pi_q(n) / zeta_q(2)`.
pub fn prime_sum_reference(q: u32, n: usize) -> Result<BigRational> {
    let pi = BigRational::from_integer(prime_count(q as u64, n)?.into());
    Ok(pi / zeta_q_value(q as u64, 2)?)
}

/// The three error scales of the prime-sum asymptotic.
pub fn prime_sum_error_scales(q: u32, n: usize, m: usize) -> [f64; 3] {
    let (q, n, m) = (q as f64, n as f64, m as f64);
    [q.powf(n - 2.0 * m) / n, q.powf(n / 2.0) * m.powi(3) / n, q.powf(n) / (n * m * q.powf(m / 2.0))]
}

/// Prime sum over all monic primes of degree `n` at `u = 1/q`. With `exact` the sum is a
/// rational; otherwise only the floating-point value is formed.
pub fn prime_sum(kind: FactorKind, field: &FiniteField, n: usize, m: usize, exact: bool) -> Result<PrimeSumReport> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and M must be at least 1".into()));
    }
    let q = field.order();
    let u = BigRational::new(BigInt::one(), BigInt::from(q));
    let primes = primes_of_degree(field, n)?;
    let (sum, sum_f64) = if exact {
        let parts: Vec<PowerFraction> =
            primes.par_iter().map(|p| delta_product_by_counts(kind, p, m, &u)).collect::<Result<_>>()?;
        let total = parts.iter().fold(PowerFraction::zero(q as u64), |acc, x| acc.add(x));
        (Some(total.to_rational()), total.to_f64())
    } else {
        let parts: Vec<f64> =
            primes.par_iter().map(|p| delta_product_f64(kind, p, m, 1.0 / q as f64)).collect::<Result<_>>()?;
        (None, parts.iter().sum())
    };
    let reference = prime_sum_reference(q, n)?;
    let ref_f = reference.to_f64().unwrap_or(f64::NAN);
    let scaled_gap = (sum_f64 - ref_f) * n as f64 / (q as f64).powf(n as f64 / 2.0);
    Ok(PrimeSumReport {
        q,
        n,
        m,
        kind,
        sum,
        sum_f64,
        reference,
        scaled_gap,
        error_scales: prime_sum_error_scales(q, n, m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FiniteField {
        FiniteField::prime(3).unwrap()
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn p21() -> Poly {
        Poly::from_ints(&f3(), &[1, 0, 1])
    }

    #[test]
    fn local_factor_examples() {
        let x = Poly::x(&f3());
        assert_eq!(local_factor(FactorKind::Plus, &p21(), &x, &r(1, 3)).unwrap(), r(4, 3));
        // Q = P: the character vanishes
        for kind in FactorKind::ALL {
            assert_eq!(local_factor(kind, &p21(), &p21(), &r(1, 3)).unwrap(), r(80, 81));
        }
        // even degree: plus and minus agree
        for qp in primes_of_degree(&f3(), 2).unwrap().iter() {
            assert_eq!(
                local_factor(FactorKind::Plus, &p21(), qp, &r(1, 3)).unwrap(),
                local_factor(FactorKind::Minus, &p21(), qp, &r(1, 3)).unwrap()
            );
        }
        assert!(local_factor(FactorKind::Plus, &p21(), &Poly::from_ints(&f3(), &[0, 0, 1]), &r(1, 3)).is_err());
    }

    #[test]
    fn factorization_identity() {
        // (1 - v)(1 + v + 2 chi v) = 1 + delta for every prime of degree <= 4
        for p in [Poly::x(&f3()), p21()] {
            for k in 1..=4 {
                for qp in primes_of_degree(&f3(), k).unwrap().iter() {
                    for kind in [FactorKind::Plus, FactorKind::Minus] {
                        let sign = if kind == FactorKind::Plus { Sign::Plus } else { Sign::Minus };
                        let chi = QuadChar::new(&p, sign).unwrap().value(qp).unwrap() as i64;
                        let lhs = convolve(&[1, -1], &[1, 1 + 2 * chi]);
                        let spec = LocalFactorSpec::delta(kind, &p).unwrap();
                        assert_eq!(lhs, spec.exact_factor(qp).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn expansions_match_declared_orders() {
        for kind in FactorKind::ALL {
            LocalFactorSpec::delta(kind, &p21()).unwrap().verify_expansion(4).unwrap();
            LocalFactorSpec::h(kind, &p21()).unwrap().verify_expansion(4).unwrap();
        }
        LocalFactorSpec::zeta2(&f3()).verify_expansion(4).unwrap();
        // a wrong linear term is caught
        let bad = LocalFactorSpec::custom(&f3(), Vec::new(), Rational64::one(), |_| Ok(vec![1, 1])).unwrap();
        assert!(bad.verify_expansion(2).is_err());
    }

    #[test]
    fn zeta_two_product_converges() {
        let spec = LocalFactorSpec::zeta2(&f3());
        let u = r(1, 3);
        let target = 2.0 / 3.0;
        let mut last = f64::INFINITY;
        for m in [2, 4, 6, 8] {
            let v = truncated_product(&spec, m, &u).unwrap().value.to_f64().unwrap();
            let err = (v - target).abs();
            assert!(err < last);
            // the tail of prod (1 - |Q|^{-2}) is about sum_{k > M} pi_q(k) q^{-2k} ~ q^{-M} / M
            assert!(err < 3f64.powi(-(m as i32)) / m as f64);
            last = err;
        }
        let trivial = truncated_product(&LocalFactorSpec::trivial(&f3()), 5, &u).unwrap();
        assert_eq!(trivial.value, BigRational::one());
    }

    #[test]
    fn partition_invariance() {
        let spec = LocalFactorSpec::delta(FactorKind::Zero, &p21()).unwrap();
        let u = r(1, 3);
        let whole = product_over_degrees(&spec, 1..=6, &u).unwrap();
        let a = product_over_degrees(&spec, 1..=2, &u).unwrap();
        let b = product_over_degrees(&spec, 3..=6, &u).unwrap();
        assert_eq!(whole.to_rational(), a.mul(&b).to_rational());
    }

    #[test]
    fn disc_flag_and_tail_bound() {
        let spec = LocalFactorSpec::delta(FactorKind::Plus, &p21()).unwrap();
        assert!(!truncated_product(&spec, 2, &r(1, 3)).unwrap().outside_disc);
        assert!(truncated_product(&spec, 2, &r(2, 3)).unwrap().outside_disc);
        let t = tail_bound(&spec, 6, &r(1, 3));
        let expected = 3f64.powi(-3) / 6.0 + 3f64.powi(-6) / 6.0;
        assert!((t - expected).abs() < 1e-15);
        assert!(tail_bound(&spec, 60, &r(1, 3)) < 1e-10);
    }

    #[test]
    fn stabilizes_in_m() {
        let u = r(1, 3);
        for kind in [FactorKind::Plus, FactorKind::Minus] {
            let spec = LocalFactorSpec::delta(kind, &p21()).unwrap();
            let vals: Vec<BigRational> = (1..=10).map(|m| truncated_product(&spec, m, &u).unwrap().value).collect();
            let diffs: Vec<BigRational> = vals.windows(2).map(|w| (&w[1] - &w[0]).abs()).collect();
            // consecutive steps alternate in size with the parity of M; each parity decreases
            for i in 0..diffs.len() - 2 {
                assert!(diffs[i + 2] < diffs[i], "{kind} M={}", i + 1);
            }
        }
    }

    #[test]
    fn assembled_agrees_with_truncation() {
        let u = r(1, 3);
        for kind in FactorKind::ALL {
            let spec = LocalFactorSpec::delta(kind, &p21()).unwrap();
            let mut last = f64::INFINITY;
            for m in [4, 6, 8] {
                let a = assembled_product(kind, &p21(), &u, m).unwrap().to_f64().unwrap();
                let t = truncated_product(&spec, m, &u).unwrap().value.to_f64().unwrap();
                let gap = ((a - t) / a).abs();
                assert!(gap < last, "{kind} m={m}");
                last = gap;
            }
        }
    }

    #[test]
    fn h_zero_is_even() {
        let spec = LocalFactorSpec::h(FactorKind::Zero, &p21()).unwrap();
        for u in [r(1, 3), r(1, 5), r(2, 9)] {
            let plus = truncated_product(&spec, 6, &u).unwrap().value;
            let minus = truncated_product(&spec, 6, &(-u.clone())).unwrap().value;
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn counts_route_matches_direct_product() {
        let u = r(1, 3);
        for p in [Poly::x(&f3()), p21(), Poly::from_ints(&f3(), &[1, 2, 0, 1])] {
            let counts = character_prime_counts(&p, 6).unwrap();
            let chi = QuadChar::new(&p, Sign::Plus).unwrap();
            for (k, c) in (1..=6).zip(&counts) {
                let mut direct = [0u64; 3];
                for qp in primes_of_degree(&f3(), k).unwrap().iter() {
                    match chi.value(qp).unwrap() {
                        1 => direct[0] += 1,
                        -1 => direct[1] += 1,
                        _ => direct[2] += 1,
                    }
                }
                assert_eq!(*c, direct, "{p} k={k}");
            }
            for kind in FactorKind::ALL {
                let spec = LocalFactorSpec::delta(kind, &p).unwrap();
                let direct = truncated_product(&spec, 6, &u).unwrap().value;
                let fast = delta_product_by_counts(kind, &p, 6, &u).unwrap().to_rational();
                assert_eq!(direct, fast);
                let f = delta_product_f64(kind, &p, 6, 1.0 / 3.0).unwrap();
                assert!((f - direct.to_f64().unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prime_sum_reference_values() {
        assert_eq!(prime_sum_reference(3, 1).unwrap(), r(2, 1));
        assert_eq!(prime_sum_reference(3, 2).unwrap(), r(2, 1));
        let rep = prime_sum(FactorKind::Plus, &f3(), 1, 6, true).unwrap();
        let s = rep.sum.unwrap().to_f64().unwrap();
        assert!((s - rep.sum_f64).abs() < 1e-12);
        assert!(s > 0.5 && s < 8.0);
    }
}
