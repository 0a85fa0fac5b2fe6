//! Character values for every square-free modulus up to a degree bound, in one pass.
//!
//! For a monic prime `Q` with root `a` in `F_{q^k}` the symbol `(F / Q)` equals the
//! quadratic character of `F(a)`. Each prime therefore yields a vector of symbols over a
//! fixed list of monic test polynomials, and the vector of a square-free `D` is the
//! pointwise product over its prime factors. Evaluation happens in the logarithm
//! domain of table-backed extension fields, with Zech logarithms for addition.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffpoly::{primes_with_roots, ExtElem, ExtensionField, FiniteField, Poly, LOG_ZERO};

/// One square-free monic modulus and its symbols `(T / D)` over the test list.
pub struct SweepItem<'a> {
    pub modulus: &'a Poly,
    /// Prime factors of the modulus, largest first in `(degree, index)` order.
    pub factors: &'a [&'a Poly],
    pub values: &'a [i8],
}

struct Prime {
    poly: Poly,
    root: ExtElem,
    ext: std::sync::Arc<ExtensionField>,
}

/// Monic test polynomials as `(degree, monic index)`.
struct Tests {
    q: u64,
    items: Vec<(usize, u64)>,
    half_digits: usize,
}

impl Tests {
    fn new(field: &FiniteField, tests: &[Poly]) -> Result<Self> {
        let mut items = Vec::with_capacity(tests.len());
        let mut max_deg = 0;
        for t in tests {
            let idx =
                t.monic_index().ok_or_else(|| Error::InvalidArgument(format!("test polynomial {t} is not monic")))?;
            let d = t.deg()?;
            max_deg = max_deg.max(d);
            items.push((d, idx));
        }
        Ok(Self { q: field.order() as u64, items, half_digits: max_deg.div_ceil(2) })
    }

    /// Symbols `(T / Q)` for every test polynomial `T`, given a root of `Q`.
    fn symbols(&self, _q: &Poly, root: ExtElem, ext: &ExtensionField) -> Vec<i8> {
        let la = ext.log_of(root);
        let m = ext.order() - 1;
        let alpha_pow = |j: usize| {
            if la == LOG_ZERO {
                if j == 0 {
                    0
                } else {
                    LOG_ZERO
                }
            } else {
                ((la as u64 * j as u64) % m) as u32
            }
        };
        let const_log: Vec<u32> = (0..self.q).map(|c| ext.log_of(ext.embed(c as u32))).collect();
        // table[idx] = log sum_i c_i a^i over the base-q digits of idx
        let size = self.q.pow(self.half_digits as u32) as usize;
        let mut table = vec![LOG_ZERO; size];
        let mut top = 1usize;
        let mut pos = 0usize;
        for idx in 1..size {
            if idx == top * self.q as usize {
                top *= self.q as usize;
                pos += 1;
            }
            let c = idx / top;
            let rest = idx - c * top;
            let term = ext.log_mul(const_log[c], alpha_pow(pos));
            table[idx] = ext.log_add(table[rest], term);
        }
        self.items
            .iter()
            .map(|&(d, idx)| {
                let h = d / 2;
                let split = self.q.pow(h as u32);
                let lo = table[(idx % split) as usize];
                let hi = ext.log_mul(table[(idx / split) as usize], alpha_pow(h));
                ext.log_chi(ext.log_add(ext.log_add(alpha_pow(d), lo), hi))
            })
            .collect()
    }
}

/// Visits every square-free monic modulus `D` with `1 <= deg D <= max_deg` and maps
/// `f` over the corresponding [`SweepItem`], where the values are the symbols `(T / D)`
/// over `tests`.
pub fn sweep_characters<R, F>(field: &FiniteField, max_deg: usize, tests: &[Poly], f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&SweepItem) -> R + Sync,
{
    let tests = Tests::new(field, tests)?;
    sweep_squarefree(field, max_deg, |p: &Poly, root, ext: &ExtensionField| tests.symbols(p, root, ext), f)
}

/// Generic form of [`sweep_characters`]: `vector_of(Q, root, F_{q^deg Q})` supplies a
/// completely multiplicative per-prime vector, and each modulus receives the pointwise
/// product over its prime factors.
///
/// Results come back in a fixed order (by largest prime factor, then depth-first over
/// the remaining factors), independent of the number of worker threads.
pub fn sweep_squarefree<R, V, F>(field: &FiniteField, max_deg: usize, vector_of: V, f: F) -> Result<Vec<R>>
where
    R: Send,
    V: Fn(&Poly, ExtElem, &ExtensionField) -> Vec<i8> + Sync,
    F: Fn(&SweepItem) -> R + Sync,
{
    let mut primes = Vec::new();
    for k in 1..=max_deg {
        let ext = crate::ffpoly::extension(field, k)?;
        for (poly, root) in primes_with_roots(field, k)? {
            primes.push(Prime { poly, root, ext: ext.clone() });
        }
    }
    let vec_of = |p: &Prime| vector_of(&p.poly, p.root, &p.ext);
    let small: Vec<(usize, Vec<i8>)> = primes
        .iter()
        .enumerate()
        .filter(|(_, p)| 2 * p.poly.degree().unwrap_or(0) <= max_deg)
        .map(|(i, p)| (i, vec_of(p)))
        .collect();

    let per_top: Vec<Vec<R>> = primes
        .par_iter()
        .enumerate()
        .map(|(t, top)| {
            let values = vec_of(top);
            let mut out = Vec::new();
            let mut factors = vec![&top.poly];
            let remaining = max_deg - top.poly.degree().unwrap_or(0);
            visit(&primes, &small, t, remaining, &top.poly, &values, &mut factors, &f, &mut out);
            out
        })
        .collect();
    Ok(per_top.into_iter().flatten().collect())
}

#[allow(clippy::too_many_arguments)]
fn visit<'a, R, F>(
    primes: &'a [Prime],
    small: &[(usize, Vec<i8>)],
    bound: usize,
    remaining: usize,
    modulus: &Poly,
    values: &[i8],
    factors: &mut Vec<&'a Poly>,
    f: &F,
    out: &mut Vec<R>,
) where
    F: Fn(&SweepItem) -> R,
{
    out.push(f(&SweepItem { modulus, factors, values }));
    for (i, v) in small.iter().rev() {
        if *i >= bound {
            continue;
        }
        let p = &primes[*i].poly;
        let d = p.degree().unwrap_or(0);
        if d > remaining {
            continue;
        }
        let next: Vec<i8> = values.iter().zip(v).map(|(a, b)| a * b).collect();
        let product = modulus * p;
        factors.push(p);
        visit(primes, small, *i, remaining - d, &product, &next, factors, f, out);
        factors.pop();
    }
}
