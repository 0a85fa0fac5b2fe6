//! Complex roots of integer polynomials.
//!
//! Repeated roots are split off first by Yun's square-free factorization over `Q`,
//! then each square-free factor is solved by Durand–Kerner iteration followed by a
//! Newton polish, so the reported roots keep full double precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

type QPoly = Vec<BigRational>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deriv(p: &QPoly) -> QPoly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect())
}

fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut quot = vec![BigRational::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let t = &r[k] / &b[db];
        for (j, bj) in b.iter().enumerate() {
            let v = &r[k - db + j] - &t * bj;
            r[k - db + j] = v;
        }
        quot[k - db] = t;
    }
    r.truncate(db);
    (trim(quot), trim(r))
}

fn monic(p: QPoly) -> QPoly {
    let lc = p.last().cloned().expect("nonzero polynomial");
    p.into_iter().map(|c| c / &lc).collect()
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = div_rem(&a, &b).1;
        a = b;
        b = r;
    }
    monic(a)
}

/// Yun's square-free factorization: pairs `(factor, multiplicity)` of a nonconstant polynomial.
fn squarefree_factors(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    let fp = deriv(f);
    let a0 = gcd(f, &fp);
    let mut b = div_rem(f, &a0).0;
    let c = div_rem(&fp, &a0).0;
    let mut d = sub(&c, &deriv(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        let nb = div_rem(&b, &a).0;
        let nc = div_rem(&d, &a).0;
        if a.len() > 1 {
            out.push((a, i));
        }
        d = sub(&nc, &deriv(&nb));
        b = nb;
        i += 1;
    }
    out
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of a square-free monic polynomial given by ascending float coefficients.
fn solve_squarefree(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    match n {
        0 => return Vec::new(),
        1 => return vec![-p[0]],
        _ => {}
    }
    // start on a circle through the geometric mean of the root moduli
    let r0 = match p[0].norm() {
        m if m > 0.0 => m.powf(1.0 / n as f64),
        _ => 1.0,
    };
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(r0, std::f64::consts::TAU * k as f64 / n as f64 + 0.4)).collect();
    for _ in 0..2000 {
        let mut change: f64 = 0.0;
        for i in 0..n {
            let (v, _) = horner(p, z[i]);
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            let step = v / denom;
            z[i] -= step;
            change = change.max(step.norm() / z[i].norm().max(1.0));
        }
        if change < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(p, *zi);
            if dv.norm() == 0.0 {
                break;
            }
            *zi -= v / dv;
        }
    }
    z
}

/// All complex roots of `sum c_k x^k`, each listed with its multiplicity.
pub fn roots_with_multiplicity(coeffs: &[i128]) -> Result<Vec<Complex64>> {
    let f: QPoly = trim(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect());
    if f.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if f.len() == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(f.len() - 1);
    for (factor, mult) in squarefree_factors(&f) {
        let fl: Vec<Complex64> =
            monic(factor).iter().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect();
        for r in solve_squarefree(&fl) {
            out.extend(std::iter::repeat(r).take(mult));
        }
    }
    if out.len() != f.len() - 1 {
        return Err(Error::Consistency("square-free factorization lost roots".into()));
    }
    Ok(out)
}

/// Reciprocal roots `r_j` of `sum c_k u^k = c_0 prod (1 - r_j u)`.
pub fn reciprocal_roots(coeffs: &[i128]) -> Result<Vec<Complex64>> {
    let mut rev: Vec<i128> = coeffs.to_vec();
    while rev.last() == Some(&0) {
        rev.pop();
    }
    rev.reverse();
    roots_with_multiplicity(&rev)
}

/// `max_j | |r_j| - sqrt(q) | / sqrt(q)` over the reciprocal roots; `0` when there are none.
pub fn rh_max_deviation(coeffs: &[i128], q: u32) -> Result<f64> {
    let s = (q as f64).sqrt();
    Ok(reciprocal_roots(coeffs)?.iter().map(|r| (r.norm() - s).abs() / s).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_quadratic_roots() {
        let r = reciprocal_roots(&[1, 0, 3]).unwrap();
        assert_eq!(r.len(), 2);
        for z in r {
            assert!(z.re.abs() < 1e-12);
            assert!((z.im.abs() - 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_roots_keep_precision() {
        // (1 + 3u^2)^2 = 1 + 6u^2 + 9u^4, and (1 - 3u)^3
        assert!(rh_max_deviation(&[1, 0, 6, 0, 9], 3).unwrap() < 1e-13);
        let r = reciprocal_roots(&[1, -9, 27, -27]).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|z| (z - Complex64::new(3.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn generic_quartic() {
        // (x - 1)(x + 2)(x^2 + x + 1)
        let roots = roots_with_multiplicity(&[-2, -1, 2, 2, 1]).unwrap();
        for z in &roots {
            let v = z.powu(4) + 2.0 * z.powu(3) + 2.0 * z * z - z - 2.0;
            assert!(v.norm() < 1e-12);
        }
    }
}
