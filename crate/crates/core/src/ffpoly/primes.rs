//! Monic irreducible polynomials ("primes") by degree, with a process-wide cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::ffpoly::arith::is_irreducible;
use crate::ffpoly::ext::{extension, ExtElem, TABLE_LIMIT};
use crate::ffpoly::field::{FieldKey, FiniteField};
use crate::ffpoly::poly::Poly;

/// The least monic irreducible of degree `d` in monic-index order.
pub fn least_irreducible(field: &FiniteField, d: usize) -> Result<Poly> {
    if d == 0 {
        return Err(Error::InvalidArgument("irreducible degree must be at least 1".into()));
    }
    let q = field.order() as u64;
    let count = q.checked_pow(d as u32).ok_or(Error::Overflow("monic polynomial count"))?;
    for idx in 0..count {
        let p = Poly::from_monic_index(field, d, idx);
        if is_irreducible(&p)? {
            return Ok(p);
        }
    }
    Err(Error::Consistency(format!("no irreducible of degree {d} over {field}")))
}

type PrimeCache = HashMap<(FieldKey, usize), Arc<Vec<Poly>>>;

/// All monic primes of degree `d`, sorted by monic index.
///
/// Small degrees are generated as minimal polynomials of Frobenius orbits in `F_{q^d}`;
/// otherwise every monic polynomial is tested with Rabin's criterion.
pub fn primes_of_degree(field: &FiniteField, d: usize) -> Result<Arc<Vec<Poly>>> {
    static CACHE: OnceLock<Mutex<PrimeCache>> = OnceLock::new();
    if d == 0 {
        return Err(Error::InvalidArgument("prime degree must be at least 1".into()));
    }
    let key = (field.key(), d);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("prime cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let list = Arc::new(sieve_primes(field, d)?);
    let mut guard = cache.lock().expect("prime cache poisoned");
    Ok(guard.entry(key).or_insert(list).clone())
}

fn sieve_primes(field: &FiniteField, d: usize) -> Result<Vec<Poly>> {
    let q = field.order() as u64;
    let order = q.checked_pow(d as u32).ok_or(Error::Overflow("prime table size"))?;
    if d > 1 && order <= TABLE_LIMIT {
        return Ok(primes_with_roots(field, d)?.into_iter().map(|(p, _)| p).collect());
    }
    let mut out = Vec::new();
    for idx in 0..order {
        let p = Poly::from_monic_index(field, d, idx);
        if is_irreducible(&p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Monic primes of degree `d` in monic-index order, each paired with one of its roots
/// in the shared field [`extension`]`(field, d)`.
///
/// Requires `q^d <= TABLE_LIMIT`.
pub fn primes_with_roots(field: &FiniteField, d: usize) -> Result<Vec<(Poly, ExtElem)>> {
    let ext = extension(field, d)?;
    if !ext.has_tables() {
        return Err(Error::Overflow("prime roots need a table-backed extension"));
    }
    let mut seen = vec![false; ext.order() as usize];
    let mut out = Vec::new();
    for a in ext.elements() {
        if seen[a as usize] {
            continue;
        }
        let mut orbit = vec![a];
        let mut b = ext.frobenius(a);
        while b != a {
            orbit.push(b);
            b = ext.frobenius(b);
        }
        for &b in &orbit {
            seen[b as usize] = true;
        }
        if orbit.len() == d {
            out.push((ext.minimal_polynomial(a), a));
        }
    }
    out.sort_by_key(|(p, _)| p.monic_index());
    Ok(out)
}

/// All monic primes with `1 <= deg <= max_deg`, grouped by degree.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    field: FiniteField,
    by_degree: Vec<Arc<Vec<Poly>>>,
}

impl PrimeTable {
    pub fn new(field: &FiniteField, max_deg: usize) -> Result<Self> {
        let by_degree = (1..=max_deg).map(|d| primes_of_degree(field, d)).collect::<Result<_>>()?;
        Ok(Self { field: field.clone(), by_degree })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len()
    }

    /// Primes of degree exactly `d` (empty outside `1..=max_degree`).
    pub fn of_degree(&self, d: usize) -> &[Poly] {
        match d.checked_sub(1).and_then(|i| self.by_degree.get(i)) {
            Some(v) => v,
            None => &[],
        }
    }

    /// Every prime in the table, by degree then index.
    pub fn iter(&self) -> impl Iterator<Item = &Poly> {
        self.by_degree.iter().flat_map(|v| v.iter())
    }

    pub fn len(&self) -> usize {
        self.by_degree.iter().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::arith::is_irreducible_trial;

    #[test]
    fn quadratic_primes_over_f3() {
        let f3 = FiniteField::prime(3).unwrap();
        let got: Vec<Vec<u32>> = primes_of_degree(&f3, 2).unwrap().iter().map(|p| p.coeffs().to_vec()).collect();
        assert_eq!(got, vec![vec![1, 0, 1], vec![2, 1, 1], vec![2, 2, 1]]);
    }

    #[test]
    fn roots_are_roots() {
        let f5 = FiniteField::prime(5).unwrap();
        for d in 1..=4 {
            let ext = extension(&f5, d).unwrap();
            for (p, a) in primes_with_roots(&f5, d).unwrap() {
                assert_eq!(ext.eval(&p, a), 0);
            }
        }
    }

    #[test]
    fn orbit_generation_matches_sieve() {
        for q in [3u32, 5, 7, 9] {
            let field = FiniteField::prime_power(if q == 9 { 3 } else { q }, if q == 9 { 2 } else { 1 }).unwrap();
            let max_deg = if q <= 3 {
                5
            } else if q <= 5 {
                4
            } else {
                3
            };
            for d in 1..=max_deg {
                let fast = primes_of_degree(&field, d).unwrap();
                let slow: Vec<Poly> = (0..(q as u64).pow(d as u32))
                    .map(|i| Poly::from_monic_index(&field, d, i))
                    .filter(|p| is_irreducible_trial(p).unwrap())
                    .collect();
                assert_eq!(*fast, slow, "q={q} d={d}");
            }
        }
    }
}
