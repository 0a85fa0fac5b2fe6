//! Sums of `chi_P(f1 f2)` over square-free triples for a fixed prime `P`, and the
//! constants predicting their size.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::biquad::{enumerate_family, Variant};
use crate::error::{Error, Result};
use crate::eulerprod::{truncated_product, FactorKind, LocalFactorSpec};
use crate::ffpoly::{enumerate, is_irreducible, jacobi_symbol, primes_of_degree, FiniteField, Poly, PolyKind};
use crate::lfunc::{l_polynomial, zeta_q_value, QuadChar, Sign};
use crate::moments::eta;

fn check_prime(p: &Poly) -> Result<()> {
    if !p.is_monic() || !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    Ok(())
}

/// `N_{k1,k2}(d)` for all four parity classes, with an arbitrary completely
/// multiplicative weight `chi` on `f1 f2`.
fn nkk_with(field: &FiniteField, d: usize, chi: &(dyn Fn(&Poly) -> Result<i8> + Sync)) -> Result<[[i128; 2]; 2]> {
    let lists: Vec<Vec<(Poly, i8)>> = (0..=d)
        .map(|k| {
            enumerate(field, k, PolyKind::SquarefreeMonic)?
                .into_iter()
                .map(|f| chi(&f).map(|c| (f, c)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let splits: Vec<[usize; 3]> = (0..=d).flat_map(|d1| (0..=d - d1).map(move |d2| [d1, d2, d - d1 - d2])).collect();
    let parts: Vec<(usize, usize, i128)> = splits
        .par_iter()
        .map(|&[d1, d2, d3]| {
            let mut total = 0i128;
            for (f1, c1) in &lists[d1] {
                for (f2, c2) in &lists[d2] {
                    if *c1 * *c2 == 0 || !f1.is_coprime(f2)? {
                        continue;
                    }
                    for (f3, _) in &lists[d3] {
                        if f1.is_coprime(f3)? && f2.is_coprime(f3)? {
                            total += (*c1 * *c2) as i128;
                        }
                    }
                }
            }
            Ok(((d1 + d3) % 2, (d2 + d3) % 2, total))
        })
        .collect::<Result<_>>()?;
    let mut out = [[0i128; 2]; 2];
    for (k1, k2, t) in parts {
        out[k1][k2] += t;
    }
    Ok(out)
}

/// `N_{k1,k2}(d; P)` for all `(k1, k2)`, indexed `[k1][k2]`: the sum of
/// `mu^2(f1 f2 f3) chi_P(f1 f2)` over monic triples with `deg f1 f2 f3 = d`,
/// `deg f1 f3 = k1` and `deg f2 f3 = k2` mod 2.
pub fn nkk_all(field: &FiniteField, p: &Poly, d: usize) -> Result<[[i128; 2]; 2]> {
    check_prime(p)?;
    nkk_with(field, d, &|f: &Poly| jacobi_symbol(f, p))
}

/// One parity class of [`nkk_all`].
pub fn nkk_sum(field: &FiniteField, p: &Poly, d: usize, k1: usize, k2: usize) -> Result<i128> {
    if k1 > 1 || k2 > 1 {
        return Err(Error::InvalidArgument("k1 and k2 must be 0 or 1".into()));
    }
    Ok(nkk_all(field, p, d)?[k1][k2])
}

/// `sum_{(f1, f2, f3) in F_g} chi_P(f1 f2)` by enumeration of the monic family.
pub fn fixed_prime_family_sum(field: &FiniteField, g: usize, p: &Poly) -> Result<i128> {
    check_prime(p)?;
    enumerate_family(field, g, Variant::Monic)?
        .par_iter()
        .map(|t| Ok((jacobi_symbol(&t.f1, p)? * jacobi_symbol(&t.f2, p)?) as i128))
        .sum()
}

/// `sum_{deg f in {g+2, g+3}} mu^2(f) (2 chi_P(f) + 1)`, the contribution of the
/// excluded degree patterns for odd `g`.
pub fn excluded_correction(field: &FiniteField, g: usize, p: &Poly) -> Result<i128> {
    check_prime(p)?;
    let mut total = 0i128;
    for d in [g + 2, g + 3] {
        for f in enumerate(field, d, PolyKind::SquarefreeMonic)? {
            total += 2 * jacobi_symbol(&f, p)? as i128 + 1;
        }
    }
    Ok(total)
}

/// Building blocks at `u = 1/q`: exact L-values and `H` truncated at degree `M`.
#[derive(Clone, Debug)]
pub struct CConstants {
    pub q: u32,
    pub p: Poly,
    pub m: usize,
    pub l_plus: BigRational,
    pub l_minus: BigRational,
    pub h_plus: f64,
    pub h_minus: f64,
    pub h_zero: f64,
    /// `L(1/q, chi+)^2 H_+`.
    pub a_plus: f64,
    /// `L(1/q, chi-)^2 H_-`.
    pub a_minus: f64,
    /// `L(1/q, chi+) L(1/q, chi-) H_0`.
    pub a_zero: f64,
}

impl CConstants {
    /// `C_{k1,k2}(d; P) = A+ + (-1)^{k1+k2} A- + (-1)^d ((-1)^{k1} + (-1)^{k2}) A0`.
    pub fn c_kk(&self, d: usize, k1: usize, k2: usize) -> f64 {
        let s = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
        self.a_plus + s(k1 + k2) * self.a_minus + s(d) * (s(k1) + s(k2)) * self.a_zero
    }

    /// `C(g; P) = (q+3)/q A+ + (q-1)/q A- - 2 (-1)^g (q+1)/q A0`.
    pub fn c_genus(&self, g: usize) -> f64 {
        let q = self.q as f64;
        let sg = if g % 2 == 0 { 1.0 } else { -1.0 };
        (q + 3.0) / q * self.a_plus + (q - 1.0) / q * self.a_minus - 2.0 * sg * (q + 1.0) / q * self.a_zero
    }
}

/// L-values and truncated `H` products for the prime `P`.
pub fn c_constants(p: &Poly, m: usize) -> Result<CConstants> {
    check_prime(p)?;
    let q = p.field().order();
    let u = BigRational::new(BigInt::one(), BigInt::from(q));
    let l_plus = l_polynomial(&QuadChar::new(p, Sign::Plus)?)?.eval(&u);
    let l_minus = l_polynomial(&QuadChar::new(p, Sign::Minus)?)?.eval(&u);
    let h = |kind| -> Result<f64> {
        let spec = LocalFactorSpec::h(kind, p)?;
        Ok(truncated_product(&spec, m, &u)?.value.to_f64().unwrap_or(f64::NAN))
    };
    let (h_plus, h_minus, h_zero) = (h(FactorKind::Plus)?, h(FactorKind::Minus)?, h(FactorKind::Zero)?);
    let lp = l_plus.to_f64().unwrap_or(f64::NAN);
    let lm = l_minus.to_f64().unwrap_or(f64::NAN);
    Ok(CConstants {
        q,
        p: p.clone(),
        m,
        l_plus,
        l_minus,
        h_plus,
        h_minus,
        h_zero,
        a_plus: lp * lp * h_plus,
        a_minus: lm * lm * h_minus,
        a_zero: lp * lm * h_zero,
    })
}

/// The family sum for a fixed prime, its exact decomposition into `N_{k1,k2}` values,
/// and the predicted main term.
#[derive(Clone, Debug)]
pub struct FixedPrimeReport {
    pub p: Poly,
    pub g: usize,
    /// Brute-force family sum.
    pub exact_sum: i128,
    /// `[k1][k2]`: `N_{0,0}(g+3)` and `N_{k1,k2}(g+2)` for the other classes.
    pub nkk: [[i128; 2]; 2],
    /// Excluded-pattern correction (zero for even `g`).
    pub correction: i128,
    /// `N_{0,0}(g+3) + N_{0,1}(g+2) + N_{1,0}(g+2) + N_{1,1}(g+2) - correction`.
    pub decomposition_sum: i128,
    /// `C(g;P)/4 q^{g+3} - (1 - eta_g)(2 sum mu^2 chi_P + (q+1)/q q^{g+3} / zeta_q(2))`.
    pub predicted: f64,
    pub constants: CConstants,
}

impl FixedPrimeReport {
    pub fn decomposition_holds(&self) -> bool {
        self.exact_sum == self.decomposition_sum
    }
}

pub fn fixed_prime_report(field: &FiniteField, g: usize, p: &Poly, m: usize) -> Result<FixedPrimeReport> {
    let exact_sum = fixed_prime_family_sum(field, g, p)?;
    let top = nkk_all(field, p, g + 3)?;
    let low = nkk_all(field, p, g + 2)?;
    let nkk = [[top[0][0], low[0][1]], [low[1][0], low[1][1]]];
    let odd = 1 - eta(g);
    let correction = if odd == 1 { excluded_correction(field, g, p)? } else { 0 };
    let decomposition_sum = nkk[0][0] + nkk[0][1] + nkk[1][0] + nkk[1][1] - correction;

    let constants = c_constants(p, m)?;
    let q = field.order() as f64;
    let qg = q.powi(g as i32 + 3);
    let mut predicted = constants.c_genus(g) / 4.0 * qg;
    if odd == 1 {
        let mut chi_sum = 0i128;
        for d in [g + 2, g + 3] {
            for f in enumerate(field, d, PolyKind::SquarefreeMonic)? {
                chi_sum += jacobi_symbol(&f, p)? as i128;
            }
        }
        let zeta2 = zeta_q_value(field.order() as u64, 2)?.to_f64().unwrap_or(f64::NAN);
        predicted -= 2.0 * chi_sum as f64 + (q + 1.0) / q * qg / zeta2;
    }
    Ok(FixedPrimeReport { p: p.clone(), g, exact_sum, nkk, correction, decomposition_sum, predicted, constants })
}

/// One `(d, k1, k2)` comparison of `N_{k1,k2}(d; P)` with `C_{k1,k2}(d;P) q^d / 4`.
#[derive(Clone, Debug)]
pub struct Lemma61Row {
    pub d: usize,
    pub k1: usize,
    pub k2: usize,
    pub exact: i128,
    pub predicted: f64,
    /// `|exact - predicted| / q^{0.6 d}`.
    pub normalized_gap: f64,
}

pub fn lemma61_rows(field: &FiniteField, p: &Poly, d_max: usize, m: usize) -> Result<Vec<Lemma61Row>> {
    let constants = c_constants(p, m)?;
    let q = field.order() as f64;
    let mut rows = Vec::new();
    for d in 0..=d_max {
        let n = nkk_all(field, p, d)?;
        for (k1, row) in n.iter().enumerate() {
            for (k2, &exact) in row.iter().enumerate() {
                let predicted = constants.c_kk(d, k1, k2) / 4.0 * q.powi(d as i32);
                rows.push(Lemma61Row {
                    d,
                    k1,
                    k2,
                    exact,
                    predicted,
                    normalized_gap: (exact as f64 - predicted).abs() / q.powf(0.6 * d as f64),
                });
            }
        }
    }
    Ok(rows)
}

/// `sum_{deg D = d} sum_{deg P = n} mu^2(D) chi_D(P)` over monic `D` and primes `P`,
/// with its normalization `n / q^{d + n/2}` times the sum.
pub fn double_char_sum(field: &FiniteField, d: usize, n: usize) -> Result<(i128, f64)> {
    let moduli = enumerate(field, d, PolyKind::SquarefreeMonic)?;
    let primes = primes_of_degree(field, n)?;
    let total: i128 = moduli
        .par_iter()
        .map(|dm| primes.iter().map(|p| jacobi_symbol(p, dm).map(|v| v as i128)).sum::<Result<i128>>())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let q = field.order() as f64;
    Ok((total, n as f64 * total as f64 / q.powf(d as f64 + n as f64 / 2.0)))
}
