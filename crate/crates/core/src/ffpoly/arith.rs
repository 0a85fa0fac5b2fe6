//! Arithmetic predicates on `F_q[X]`: square-freeness, Möbius, irreducibility,
//! residue symbols and the quadratic character on `P^1(F_{q^n})`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ffpoly::ext::{ExtElem, ExtensionField};
use crate::ffpoly::field::{prime_factors, Elem};
use crate::ffpoly::poly::Poly;

/// `X^{q^k} mod m`, computed by `k` successive `q`-th powers.
fn x_pow_q_iter(m: &Poly, k: usize) -> Result<Poly> {
    let q = BigUint::from(m.field().order());
    let mut h = Poly::x(m.field()).rem(m)?;
    for _ in 0..k {
        h = h.pow_mod(&q, m)?;
    }
    Ok(h)
}

/// `gcd(F, F') = 1`; constants count as square-free.
pub fn is_squarefree(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(true);
    }
    Ok(f.gcd(&f.derivative())?.is_one())
}

/// Number of irreducible factors of a square-free polynomial, by distinct-degree splitting.
pub fn count_prime_factors_squarefree(f: &Poly) -> Result<usize> {
    let mut rest = f.monic();
    let q = BigUint::from(f.field().order());
    let x = Poly::x(f.field());
    let mut h = x.clone();
    let mut count = 0;
    let mut d = 1;
    while rest.deg()? >= 2 * d {
        h = h.pow_mod(&q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            count += g.deg()? / d;
            rest = rest.div_rem(&g)?.0;
            h = h.rem(&rest)?;
        }
        d += 1;
    }
    if rest.deg()? > 0 {
        count += 1;
    }
    Ok(count)
}

/// Möbius value and square-free flag of a nonzero polynomial.
pub fn mobius_squarefree(f: &Poly) -> Result<(i8, bool)> {
    if !is_squarefree(f)? {
        return Ok((0, false));
    }
    let r = if f.is_constant() { 0 } else { count_prime_factors_squarefree(f)? };
    Ok((if r % 2 == 0 { 1 } else { -1 }, true))
}

/// Rabin's test: `X^{q^n} = X mod F` and `gcd(X^{q^{n/r}} - X, F) = 1` for primes `r | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = f.deg()?;
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if n == 1 {
        return Ok(true);
    }
    let m = f.monic();
    let x = Poly::x(f.field());
    for r in prime_factors(n as u64) {
        let h = x_pow_q_iter(&m, n / r as usize)?;
        if !(&h - &x).gcd(&m)?.is_one() {
            return Ok(false);
        }
    }
    Ok(x_pow_q_iter(&m, n)? == x.rem(&m)?)
}

/// Irreducibility by trial division against every monic polynomial of degree `<= deg/2`.
pub fn is_irreducible_trial(f: &Poly) -> Result<bool> {
    let n = f.deg()?;
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let q = f.field().order() as u64;
    for d in 1..=n / 2 {
        for idx in 0..q.pow(d as u32) {
            let g = Poly::from_monic_index(f.field(), d, idx);
            if f.rem(&g)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn constant_sign(p: &Poly) -> Result<i8> {
    match p.coeffs() {
        [] => Ok(0),
        [1] => Ok(1),
        [c] if *c == p.field().neg(1) => Ok(-1),
        _ => Err(Error::Consistency(format!("Euler criterion produced {p}"))),
    }
}

/// Legendre symbol `(F / P)` by Euler's criterion `F^{(|P|-1)/2} mod P`.
pub fn legendre_symbol(f: &Poly, p: &Poly) -> Result<i8> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    let r = f.rem(p)?;
    if r.is_zero() {
        return Ok(0);
    }
    let e = (BigUint::from(p.field().order()).pow(p.deg()? as u32) - BigUint::one()) >> 1;
    constant_sign(&r.pow_mod(&e, p)?)
}

/// Jacobi symbol `(A / B)` for nonzero `B`, the product of `(A / P)` over the prime
/// factors of `B` with multiplicity, evaluated by quadratic reciprocity.
///
/// A nonmonic `B` is replaced by its monic normalization.
pub fn jacobi_symbol(a: &Poly, b: &Poly) -> Result<i8> {
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = b.field();
    let odd_q = (field.order() - 1) / 2 % 2 == 1;
    let mut a = a.clone();
    let mut b = b.monic();
    let mut sign: i8 = 1;
    loop {
        let db = b.deg()?;
        if db == 0 {
            return Ok(sign);
        }
        a = a.rem(&b)?;
        let Some(c) = a.leading_coeff() else {
            return Ok(0);
        };
        if db % 2 == 1 {
            sign *= field.quadratic_character(c);
        }
        a = a.monic();
        let da = a.deg()?;
        if odd_q && da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Legendre symbol via reciprocity; agrees with [`legendre_symbol`] for prime `P`.
pub fn legendre_reciprocity(f: &Poly, p: &Poly) -> Result<i8> {
    jacobi_symbol(f, p)
}

/// A point of the projective line over an extension field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Finite(ExtElem),
    Infinity,
}

/// `chi_2(F(x))`, with `F(inf)` the leading coefficient for even degree and `0` for odd degree.
pub fn quad_char_eval(f: &Poly, x: ProjectivePoint, ext: &ExtensionField) -> Result<i8> {
    let d = f.deg()?;
    Ok(match x {
        ProjectivePoint::Finite(a) => ext.quadratic_character(ext.eval(f, a)),
        ProjectivePoint::Infinity => {
            if d % 2 == 0 {
                ext.quadratic_character(ext.embed(f.leading_coeff().unwrap_or(0)))
            } else {
                0
            }
        }
    })
}

/// Value of the quadratic character of `F_{q^n}` on the image of a base element,
/// which is `chi_q(c)^n`.
pub fn lifted_constant_character(c: Elem, field: &crate::FiniteField, n: usize) -> i8 {
    let chi = field.quadratic_character(c);
    if n % 2 == 0 {
        chi * chi
    } else {
        chi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::ext::extension;
    use crate::FiniteField;

    fn f(q: u32) -> FiniteField {
        FiniteField::prime(q).unwrap()
    }

    #[test]
    fn mobius_examples() {
        let f3 = f(3);
        assert_eq!(mobius_squarefree(&Poly::from_ints(&f3, &[0, 0, 1])).unwrap(), (0, false));
        assert_eq!(mobius_squarefree(&Poly::from_ints(&f3, &[0, 1, 1])).unwrap(), (1, true));
        assert_eq!(mobius_squarefree(&Poly::from_ints(&f3, &[1, 0, 1])).unwrap(), (-1, true));
        assert_eq!(mobius_squarefree(&Poly::one(&f3)).unwrap(), (1, true));
        assert!(mobius_squarefree(&Poly::zero(&f3)).is_err());
        // X^3 - X has derivative 3X^2 - 1 = -1: three linear factors
        assert_eq!(mobius_squarefree(&Poly::from_ints(&f3, &[0, -1, 0, 1])).unwrap(), (-1, true));
        // p-th powers have zero derivative
        assert_eq!(mobius_squarefree(&Poly::from_ints(&f3, &[1, 0, 0, 1])).unwrap().0, 0);
    }

    #[test]
    fn irreducibility_examples() {
        let f3 = f(3);
        assert!(is_irreducible(&Poly::x(&f3)).unwrap());
        assert!(is_irreducible(&Poly::from_ints(&f3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&Poly::from_ints(&f3, &[2, 0, 1])).unwrap());
        assert_eq!(is_irreducible(&Poly::one(&f3)), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn rabin_matches_trial_division_exhaustively() {
        for q in [3u32, 5, 7] {
            let field = f(q);
            let max_deg = match q {
                3 => 6,
                5 => 4,
                _ => 3,
            };
            for d in 1..=max_deg {
                for idx in 0..(q as u64).pow(d as u32) {
                    let p = Poly::from_monic_index(&field, d, idx);
                    assert_eq!(is_irreducible(&p).unwrap(), is_irreducible_trial(&p).unwrap(), "{p}");
                }
            }
        }
        let f9 = FiniteField::prime_power(3, 2).unwrap();
        for d in 1..=3 {
            for idx in (0..9u64.pow(d as u32)).step_by(3) {
                let p = Poly::from_monic_index(&f9, d, idx);
                assert_eq!(is_irreducible(&p).unwrap(), is_irreducible_trial(&p).unwrap());
            }
        }
    }

    #[test]
    fn legendre_examples() {
        let f3 = f(3);
        let p = Poly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(legendre_symbol(&Poly::x(&f3), &p).unwrap(), 1);
        let g = Poly::from_ints(&f3, &[1, 1]);
        assert_eq!(legendre_symbol(&(&p * &g), &p).unwrap(), 0);
        assert_eq!(legendre_symbol(&(&g * &g), &p).unwrap(), 1);
        assert!(matches!(legendre_symbol(&g, &Poly::from_ints(&f3, &[2, 0, 1])), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn reciprocity_matches_euler_exhaustively() {
        for q in [3u32, 5] {
            let field = f(q);
            for dp in 1..=4 {
                for ip in 0..(q as u64).pow(dp as u32) {
                    let p = Poly::from_monic_index(&field, dp, ip);
                    if !is_irreducible(&p).unwrap() {
                        continue;
                    }
                    let step = if q == 5 && dp >= 3 { 7 } else { 1 };
                    for df in 0..=4 {
                        for jf in (0..(q as u64).pow(df as u32)).step_by(step) {
                            let fpoly = Poly::from_monic_index(&field, df, jf).scale(q - 1);
                            assert_eq!(
                                legendre_symbol(&fpoly, &p).unwrap(),
                                legendre_reciprocity(&fpoly, &p).unwrap(),
                                "({fpoly} / {p})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quad_char_examples() {
        let f3 = f(3);
        let e1 = extension(&f3, 1).unwrap();
        let fx = Poly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(quad_char_eval(&fx, ProjectivePoint::Finite(1), &e1).unwrap(), -1);
        assert_eq!(quad_char_eval(&Poly::from_ints(&f3, &[1, 1]), ProjectivePoint::Infinity, &e1).unwrap(), 0);
        assert_eq!(quad_char_eval(&fx, ProjectivePoint::Infinity, &e1).unwrap(), 1);
        // values in the half-degree subfield are squares
        let e4 = extension(&f3, 4).unwrap();
        for a in e4.elements() {
            let v = e4.eval(&fx, a);
            if v != 0 && e4.pow(v, 9) == v {
                assert_eq!(quad_char_eval(&fx, ProjectivePoint::Finite(a), &e4).unwrap(), 1);
            }
        }
    }

    #[test]
    fn lifted_constants() {
        let f3 = f(3);
        for n in 1..5 {
            let e = extension(&f3, n).unwrap();
            for c in 1..3 {
                assert_eq!(lifted_constant_character(c, &f3, n), e.quadratic_character(e.embed(c)));
            }
        }
    }
}
