//! Quadratic characters of `F_q[X]`, their L-polynomials and Frobenius traces.
//!
//! For a square-free modulus `D` the character `chi_D(F) = (F / D)` is the Jacobi symbol
//! with `F` on top; `chi_D^-(F) = (-1)^{deg F} chi_D(F)`. The L-polynomial
//! `L(u, chi) = sum_{d < deg D} (sum_{deg F = d} chi(F)) u^d` has a trivial zero at
//! `u = 1` (sign `+`) or `u = -1` (sign `-`) exactly when `deg D` is even; removing it
//! gives the completed polynomial `L*` of degree `2 delta = deg D - 1 - lambda`, whose
//! reciprocal roots all have absolute value `sqrt(q)`.

pub mod catalog;
pub mod roots;
pub mod sweep;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ffpoly::{enumerate::monic_count, is_squarefree, jacobi_symbol, primes_of_degree, FiniteField, Poly};
use crate::newton::power_sums;

pub use catalog::{verify_catalog, CatalogReport};
pub use roots::{reciprocal_roots, rh_max_deviation, roots_with_multiplicity};
pub use sweep::{sweep_characters, sweep_squarefree, SweepItem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `1` for `+`, `(-1)^deg` for `-`.
    #[inline]
    pub fn twist(self, deg: usize) -> i8 {
        match self {
            Sign::Minus if deg % 2 == 1 => -1,
            _ => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("unknown sign {other:?}"))),
        }
    }
}

/// The quadratic character `chi_D^{sign}` for a square-free modulus `D`.
///
/// A nonmonic modulus is replaced by its monic normalization; constants are units and
/// do not change the symbol `(F / P)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadChar {
    modulus: Poly,
    sign: Sign,
}

impl QuadChar {
    pub fn new(modulus: &Poly, sign: Sign) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !is_squarefree(modulus)? {
            return Err(Error::NotSquarefree(modulus.to_string()));
        }
        Ok(Self { modulus: modulus.monic(), sign })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn field(&self) -> &FiniteField {
        self.modulus.field()
    }

    pub fn modulus_degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// `1` when `deg D` is even (the L-polynomial then has a trivial zero), else `0`.
    pub fn lambda(&self) -> u8 {
        u8::from(self.modulus_degree() % 2 == 0)
    }

    /// Half the degree of the completed L-polynomial.
    pub fn delta(&self) -> Result<usize> {
        let d = self.modulus_degree();
        if d == 0 {
            return Err(Error::ConstantPolynomial);
        }
        Ok((d - 1 - self.lambda() as usize) / 2)
    }

    /// `chi(F)`; zero exactly when `F` and `D` share a factor.
    pub fn value(&self, f: &Poly) -> Result<i8> {
        let deg = f.deg()?;
        Ok(jacobi_symbol(f, &self.modulus)? * self.sign.twist(deg))
    }
}

/// Free-function form of [`QuadChar::value`].
pub fn char_value(chi: &QuadChar, f: &Poly) -> Result<i8> {
    chi.value(f)
}

/// Integer L-polynomial, raw (`completed == false`) or completed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    q: u32,
    coeffs: Vec<i128>,
    modulus_degree: usize,
    sign: Sign,
    completed: bool,
    lambda: u8,
    delta: usize,
}

impl LPoly {
    /// Raw L-polynomial from its coefficients `c_0..c_{deg D - 1}`.
    pub fn raw(q: u32, modulus_degree: usize, sign: Sign, coeffs: Vec<i128>) -> Result<Self> {
        if modulus_degree == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if coeffs.first() != Some(&1) || coeffs.len() > modulus_degree {
            return Err(Error::InvalidArgument("raw L-polynomial needs c_0 = 1 and at most deg D coefficients".into()));
        }
        let lambda = u8::from(modulus_degree % 2 == 0);
        let delta = (modulus_degree - 1 - lambda as usize) / 2;
        Ok(Self { q, coeffs, modulus_degree, sign, completed: false, lambda, delta })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Ascending coefficients; raw polynomials keep trailing zeros up to `u^{deg D - 1}`.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn modulus_degree(&self) -> usize {
        self.modulus_degree
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_completed(&self) -> bool {
        self.completed
    }

    pub fn lambda(&self) -> u8 {
        self.lambda
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// `c_j = q^{j - delta} c_{2 delta - j}` for every `j` (completed form only).
    pub fn satisfies_functional_equation(&self) -> bool {
        if !self.completed || self.coeffs.len() != 2 * self.delta + 1 {
            return false;
        }
        let q = self.q as i128;
        (self.delta..=2 * self.delta).all(|j| {
            q.checked_pow((j - self.delta) as u32).and_then(|s| s.checked_mul(self.coeffs[2 * self.delta - j]))
                == Some(self.coeffs[j])
        })
    }

    /// Exact value at a rational point.
    pub fn eval(&self, u: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, &c| acc * u + BigRational::from_integer(BigInt::from(c)))
    }

    /// Reciprocal roots as complex numbers.
    pub fn reciprocal_roots(&self) -> Result<Vec<Complex64>> {
        reciprocal_roots(&self.coeffs)
    }
}

/// Raw L-polynomial by direct character sums over monic `F` of degree `< deg D`.
pub fn l_polynomial(chi: &QuadChar) -> Result<LPoly> {
    let n = chi.modulus_degree();
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let coeffs = (0..n).map(|d| character_sum(chi, d)).collect::<Result<Vec<_>>>()?;
    LPoly::raw(chi.field().order(), n, chi.sign(), coeffs)
}

/// `sum_{F monic, deg F = d} chi(F)`.
pub fn character_sum(chi: &QuadChar, d: usize) -> Result<i128> {
    let field = chi.field();
    let mut total = 0i128;
    for idx in 0..monic_count(field, d)? {
        total += chi.value(&Poly::from_monic_index(field, d, idx))? as i128;
    }
    Ok(total)
}

/// Removes the trivial zero: `L* = L / (1 - u)^lambda` for `+`, `L / (1 + u)^lambda` for `-`.
///
/// The division is carried out exactly; a nonzero remainder means the raw polynomial
/// did not come from a valid character and is reported as [`Error::InexactCompletion`].
pub fn complete_l(l: &LPoly) -> Result<LPoly> {
    if l.completed {
        return Ok(l.clone());
    }
    let mut c = l.coeffs.clone();
    c.resize(l.modulus_degree, 0);
    let coeffs = if l.lambda == 1 {
        let s: i128 = match l.sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        // L = (1 - s u) M, so m_j = c_j + s m_{j-1}
        let mut m = Vec::with_capacity(c.len() - 1);
        let mut prev = 0i128;
        for &cj in &c[..c.len() - 1] {
            prev = cj.checked_add(s * prev).ok_or(Error::Overflow("completion"))?;
            m.push(prev);
        }
        let remainder = c[c.len() - 1] + s * prev;
        if remainder != 0 {
            return Err(Error::InexactCompletion {
                modulus: format!("degree {} ({})", l.modulus_degree, l.sign.as_str()),
                remainder,
            });
        }
        m
    } else {
        c
    };
    let out = LPoly { coeffs, completed: true, ..l.clone() };
    if out.coeffs.len() != 2 * out.delta + 1 || out.coeffs[2 * out.delta] == 0 {
        return Err(Error::Consistency(format!(
            "completed L-polynomial {:?} does not have degree {}",
            out.coeffs,
            2 * out.delta
        )));
    }
    Ok(out)
}

/// Exact power sums `t_n = sum rho_j^n` of the reciprocal roots of `L*`, with
/// `Tr(Theta^n) = t_n / q^{n/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData {
    pub q: u32,
    pub delta: usize,
    /// `t_1..=t_{n_max}`.
    pub traces: Vec<i128>,
    /// Arguments of the reciprocal roots in `(-pi, pi]`, when requested.
    pub eigenphases: Option<Vec<f64>>,
}

impl FrobeniusData {
    /// `t_n`, for `1 <= n <= n_max`.
    pub fn t(&self, n: usize) -> i128 {
        self.traces[n - 1]
    }

    /// `Tr(Theta^n) = t_n / q^{n/2}` as a float.
    pub fn trace(&self, n: usize) -> f64 {
        self.t(n) as f64 / (self.q as f64).powf(n as f64 / 2.0)
    }
}

pub fn frobenius_traces(lstar: &LPoly, n_max: usize) -> Result<FrobeniusData> {
    if !lstar.completed {
        return Err(Error::InvalidArgument("traces need a completed L-polynomial".into()));
    }
    let traces = power_sums(&lstar.coeffs, n_max)?;
    let bound = 2.0 * lstar.delta as f64;
    for (i, &t) in traces.iter().enumerate() {
        let scaled = t as f64 / (lstar.q as f64).powf((i + 1) as f64 / 2.0);
        if scaled.abs() > bound * (1.0 + 1e-9) {
            return Err(Error::Consistency(format!("|Tr(Theta^{})| = {} exceeds {bound}", i + 1, scaled.abs())));
        }
    }
    Ok(FrobeniusData { q: lstar.q, delta: lstar.delta, traces, eigenphases: None })
}

/// [`frobenius_traces`] plus eigenphases from numerically computed roots.
pub fn frobenius_with_phases(lstar: &LPoly, n_max: usize) -> Result<FrobeniusData> {
    let mut data = frobenius_traces(lstar, n_max)?;
    data.eigenphases = Some(lstar.reciprocal_roots()?.iter().map(|r| r.arg()).collect());
    Ok(data)
}

/// `sum_{deg F = n} Lambda(F) chi(F)` with `Lambda(P^k) = deg P`.
pub fn von_mangoldt_sum(chi: &QuadChar, n: usize) -> Result<i128> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut total = 0i128;
    for k in (1..=n).filter(|k| n % k == 0) {
        let power = (n / k) as u32;
        let mut s = 0i128;
        for p in primes_of_degree(chi.field(), k)?.iter() {
            s += (chi.value(p)? as i128).pow(power);
        }
        total += k as i128 * s;
    }
    Ok(total)
}

/// The trivial-zero contribution to `-t_n`: `lambda` for `+`, `(-1)^n lambda` for `-`.
pub fn trivial_zero_term(lambda: u8, sign: Sign, n: usize) -> i128 {
    lambda as i128 * sign.twist(n) as i128
}

/// `-t_n` from the explicit formula: trivial-zero term plus the von Mangoldt sum.
pub fn explicit_formula_trace(chi: &QuadChar, n: usize) -> Result<i128> {
    Ok(trivial_zero_term(chi.lambda(), chi.sign(), n) + von_mangoldt_sum(chi, n)?)
}

/// `zeta_q(s) = 1 / (1 - q^{1-s})` for integer `s >= 2`.
pub fn zeta_q_value(q: u64, s: u32) -> Result<BigRational> {
    if s <= 1 {
        return Err(Error::InvalidArgument(format!("zeta_q has a pole at s = {s}")));
    }
    let qs = BigInt::from(q).pow(s - 1);
    Ok(BigRational::new(qs.clone(), qs - BigInt::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FiniteField {
        FiniteField::prime(3).unwrap()
    }

    fn chi(coeffs: &[i64], sign: Sign) -> QuadChar {
        QuadChar::new(&Poly::from_ints(&f3(), coeffs), sign).unwrap()
    }

    #[test]
    fn character_values() {
        let plus = chi(&[1, 0, 1], Sign::Plus);
        let minus = chi(&[1, 0, 1], Sign::Minus);
        let x = Poly::x(&f3());
        assert_eq!(plus.value(&x).unwrap(), 1);
        assert_eq!(minus.value(&x).unwrap(), -1);
        let d = plus.modulus().clone();
        assert_eq!(plus.value(&(&d * &x)).unwrap(), 0);
        let sq = &x * &x;
        assert_eq!(plus.value(&sq).unwrap(), minus.value(&sq).unwrap());
    }

    #[test]
    fn rejects_non_squarefree_modulus() {
        assert!(matches!(QuadChar::new(&Poly::from_ints(&f3(), &[0, 0, 1]), Sign::Plus), Err(Error::NotSquarefree(_))));
    }

    #[test]
    fn worked_l_polynomials() {
        let lp = l_polynomial(&chi(&[1, 0, 1], Sign::Plus)).unwrap();
        assert_eq!(lp.coeffs(), &[1, -1]);
        let lm = l_polynomial(&chi(&[1, 0, 1], Sign::Minus)).unwrap();
        assert_eq!(lm.coeffs(), &[1, 1]);
        for l in [lp, lm] {
            let c = complete_l(&l).unwrap();
            assert_eq!(c.coeffs(), &[1]);
            assert_eq!(c.delta(), 0);
            let fr = frobenius_traces(&c, 4).unwrap();
            assert!(fr.traces.iter().all(|&t| t == 0));
        }
    }

    #[test]
    fn degree_five_modulus() {
        // X(X+1)(X+2)(X^2+1)
        let f = f3();
        let d = [[0, 1], [1, 1], [2, 1]]
            .iter()
            .fold(Poly::from_ints(&f, &[1, 0, 1]), |acc, c| &acc * &Poly::from_ints(&f, c));
        let c = QuadChar::new(&d, Sign::Plus).unwrap();
        assert_eq!(c.lambda(), 0);
        let lstar = complete_l(&l_polynomial(&c).unwrap()).unwrap();
        assert_eq!(lstar.coeffs().len(), 5);
        assert!(lstar.satisfies_functional_equation());
        assert!(rh_max_deviation(lstar.coeffs(), 3).unwrap() < 1e-9);
    }

    #[test]
    fn inexact_completion_is_reported() {
        let bogus = LPoly::raw(3, 2, Sign::Plus, vec![1, 1]).unwrap();
        assert!(matches!(complete_l(&bogus), Err(Error::InexactCompletion { remainder: 2, .. })));
    }

    #[test]
    fn explicit_formula_examples() {
        let c = chi(&[1, 0, 1], Sign::Plus);
        assert_eq!(von_mangoldt_sum(&c, 1).unwrap(), -1);
        assert_eq!(von_mangoldt_sum(&c, 2).unwrap(), -1);
        assert_eq!(explicit_formula_trace(&c, 1).unwrap(), 0);
        assert_eq!(explicit_formula_trace(&c, 2).unwrap(), 0);
        let m = chi(&[1, 0, 1], Sign::Minus);
        for n in 1..=4 {
            assert_eq!(explicit_formula_trace(&m, n).unwrap(), 0);
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_q_value(3, 2).unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(zeta_q_value(5, 2).unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(zeta_q_value(3, 3).unwrap(), BigRational::new(9.into(), 8.into()));
        assert!(zeta_q_value(3, 1).is_err());
    }

    #[test]
    fn exhaustive_small_catalog() {
        // every square-free monic D of degree <= 4 over F_3, both signs
        let f = f3();
        for deg in 1..=4 {
            for idx in 0..3u64.pow(deg as u32) {
                let d = Poly::from_monic_index(&f, deg, idx);
                if !is_squarefree(&d).unwrap() {
                    continue;
                }
                for sign in [Sign::Plus, Sign::Minus] {
                    let c = QuadChar::new(&d, sign).unwrap();
                    let raw = l_polynomial(&c).unwrap();
                    let lstar = complete_l(&raw).unwrap();
                    assert!(lstar.satisfies_functional_equation(), "{d} {sign:?}");
                    assert!(rh_max_deviation(lstar.coeffs(), 3).unwrap() < 1e-9);
                    let fr = frobenius_traces(&lstar, 6).unwrap();
                    for n in 1..=6 {
                        assert_eq!(-fr.t(n), explicit_formula_trace(&c, n).unwrap(), "{d} {sign:?} n={n}");
                    }
                    // the sum at degree deg D vanishes
                    assert_eq!(character_sum(&c, deg).unwrap(), 0);
                }
            }
        }
    }
}
