//! Point sums `sum_x chi(D(x))` for every square-free monic `D` up to a degree bound.
//!
//! Family averages only ever need these sums for the three moduli of each member, so
//! they are computed once per modulus. Each sum over `F_{q^n}` is split by where `x`
//! lives: in the subfield `F_{q^{n/2}}` (even `n`), as a generator of `F_{q^n}`, or
//! neither.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffpoly::{extension, ExtensionField, FiniteField, Poly};
use crate::lfunc::sweep_squarefree;

/// Split point sums of one modulus over `F_{q^n}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointSums {
    /// `sum_{x in F_{q^n}} chi(D(x))`.
    pub affine: i64,
    /// `chi(D(inf))`: 1 for even degree (monic), 0 for odd degree.
    pub infinity: i8,
    /// Part of `affine` from `x` in `F_{q^{n/2}}`; zero for odd `n`.
    pub subfield: i64,
    /// Number of roots of `D` in `F_{q^{n/2}}`; zero for odd `n`.
    pub subfield_roots: i64,
    /// Part of `affine` from `x` generating `F_{q^n}`.
    pub generating: i64,
}

impl PointSums {
    /// Sum over the projective line.
    pub fn projective(&self) -> i64 {
        self.affine + self.infinity as i64
    }

    /// Part of `affine` from `x` neither in the half-degree subfield nor generating.
    pub fn nongenerating(&self) -> i64 {
        self.affine - self.subfield - self.generating
    }
}

const SUB: u8 = 1;
const GEN: u8 = 2;

/// Point sums for all square-free monic `D` with `deg D <= max_deg`, `n = 1..=n_max`.
pub struct CharSumTable {
    field: FiniteField,
    max_deg: usize,
    n_max: usize,
    offsets: Vec<usize>,
    present: Vec<bool>,
    sums: Vec<PointSums>,
}

impl CharSumTable {
    pub fn new(field: &FiniteField, max_deg: usize, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be at least 1".into()));
        }
        let q = field.order() as usize;
        let mut offsets = vec![0usize];
        for d in 0..=max_deg {
            let next = q
                .checked_pow(d as u32)
                .and_then(|c| c.checked_add(offsets[d]))
                .ok_or(Error::Overflow("modulus table size"))?;
            offsets.push(next);
        }
        let slots = offsets[max_deg + 1];
        let exts: Vec<Arc<ExtensionField>> = (1..=n_max).map(|n| extension(field, n)).collect::<Result<_>>()?;
        let classes: Vec<Vec<u8>> = exts.iter().map(|e| classify(e)).collect();

        let mut table = Self {
            field: field.clone(),
            max_deg,
            n_max,
            offsets,
            present: vec![false; slots],
            sums: vec![PointSums::default(); slots * n_max],
        };
        let one = Poly::one(field);
        let ones: Vec<i8> = exts.iter().flat_map(|e| std::iter::repeat(1i8).take(e.order() as usize)).collect();
        table.store(&one, reduce(&ones, &classes, 0));

        let vector_of = |p: &Poly, _root, _ext: &ExtensionField| {
            let mut v = Vec::with_capacity(ones.len());
            for e in &exts {
                v.extend(e.elements().map(|x| e.quadratic_character(e.eval(p, x))));
            }
            v
        };
        let rows = sweep_squarefree(field, max_deg, vector_of, |item| {
            let deg = item.modulus.degree().unwrap_or(0);
            (item.modulus.clone(), reduce(item.values, &classes, deg))
        })?;
        for (d, sums) in rows {
            table.store(&d, sums);
        }
        Ok(table)
    }

    /// Storage slot of a square-free monic modulus present in the table.
    pub fn slot_of(&self, d: &Poly) -> Option<usize> {
        self.slot(d).filter(|&s| self.present[s])
    }

    /// Sums at a slot from [`slot_of`](Self::slot_of), `1 <= n <= n_max`.
    pub fn at(&self, slot: usize, n: usize) -> &PointSums {
        &self.sums[slot * self.n_max + n - 1]
    }

    fn slot(&self, d: &Poly) -> Option<usize> {
        let deg = d.degree()?;
        if deg > self.max_deg {
            return None;
        }
        Some(self.offsets[deg] + d.monic_index()? as usize)
    }

    fn store(&mut self, d: &Poly, sums: Vec<PointSums>) {
        let s = self.slot(d).expect("modulus within the table");
        self.present[s] = true;
        self.sums[s * self.n_max..(s + 1) * self.n_max].copy_from_slice(&sums);
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn max_degree(&self) -> usize {
        self.max_deg
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Sums for a square-free monic `D`, or `None` if it is not in the table.
    pub fn get(&self, d: &Poly, n: usize) -> Option<&PointSums> {
        if n == 0 || n > self.n_max {
            return None;
        }
        let s = self.slot(d)?;
        self.present[s].then(|| &self.sums[s * self.n_max + n - 1])
    }

    /// Like [`get`](Self::get) with an error naming the missing modulus.
    pub fn lookup(&self, d: &Poly, n: usize) -> Result<&PointSums> {
        self.get(d, n).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "no point sums for {d} at n = {n} (need square-free monic, deg <= {})",
                self.max_deg
            ))
        })
    }
}

/// Per element of `F_{q^n}`: `SUB` if it lies in `F_{q^{n/2}}`, `GEN` if it generates.
fn classify(ext: &ExtensionField) -> Vec<u8> {
    let n = ext.degree();
    ext.elements()
        .map(|x| {
            let k = ext.element_degree(x);
            let mut c = 0;
            if n % 2 == 0 && (n / 2) % k == 0 {
                c |= SUB;
            }
            if k == n {
                c |= GEN;
            }
            c
        })
        .collect()
}

fn reduce(values: &[i8], classes: &[Vec<u8>], deg: usize) -> Vec<PointSums> {
    let mut out = Vec::with_capacity(classes.len());
    let mut start = 0;
    for cls in classes {
        let chunk = &values[start..start + cls.len()];
        start += cls.len();
        let mut s = PointSums { infinity: i8::from(deg % 2 == 0), ..Default::default() };
        for (&v, &c) in chunk.iter().zip(cls) {
            s.affine += v as i64;
            if c & SUB != 0 {
                s.subfield += v as i64;
                s.subfield_roots += i64::from(v == 0);
            }
            if c & GEN != 0 {
                s.generating += v as i64;
            }
        }
        out.push(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{enumerate, quad_char_eval, PolyKind, ProjectivePoint};

    #[test]
    fn table_matches_direct_evaluation() {
        for (q, max_deg, n_max) in [(3u32, 4usize, 4usize), (5, 3, 2)] {
            let field = FiniteField::prime(q).unwrap();
            let table = CharSumTable::new(&field, max_deg, n_max).unwrap();
            for deg in 0..=max_deg {
                for d in enumerate(&field, deg, PolyKind::SquarefreeMonic).unwrap() {
                    for n in 1..=n_max {
                        let ext = extension(&field, n).unwrap();
                        let s = table.get(&d, n).unwrap();
                        let mut affine = 0i64;
                        let mut sub = 0i64;
                        let mut roots = 0i64;
                        for x in ext.elements() {
                            let v = quad_char_eval(&d, ProjectivePoint::Finite(x), &ext).unwrap() as i64;
                            affine += v;
                            if n % 2 == 0 && ext.pow(x, (q as u128).pow(n as u32 / 2)) == x {
                                sub += v;
                                roots += i64::from(v == 0);
                            }
                        }
                        assert_eq!(s.affine, affine, "{d} n={n}");
                        assert_eq!(s.subfield, sub);
                        assert_eq!(s.subfield_roots, roots);
                        assert_eq!(
                            s.infinity as i64,
                            quad_char_eval(&d, ProjectivePoint::Infinity, &ext).unwrap() as i64
                        );
                    }
                }
            }
            // non-square-free moduli are absent
            let sq = Poly::from_ints(&field, &[0, 0, 1]);
            assert!(table.get(&sq, 1).is_none());
        }
    }
}
