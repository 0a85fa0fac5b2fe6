//! Degree patterns and enumeration of the families `F_g` (monic) and `F^_g` (full).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffpoly::{enumerate, is_squarefree, Elem, FiniteField, Poly, PolyKind};

/// `L(d1, d2, d3) = d1 + d2 + d3`, plus one unless `d1 + d3` and `d2 + d3` are both even.
pub fn genus_length(d1: usize, d2: usize, d3: usize) -> usize {
    let all_even = (d1 + d3) % 2 == 0 && (d2 + d3) % 2 == 0;
    d1 + d2 + d3 + usize::from(!all_even)
}

/// Which leading coefficients `f1` and `f2` may carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `f1, f2, f3` all monic.
    Monic,
    /// `f1, f2` range over all nonzero leading coefficients; `f3` stays monic.
    Full,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Monic => "monic",
            Variant::Full => "full",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monic" => Ok(Variant::Monic),
            "full" => Ok(Variant::Full),
            _ => Err(Error::InvalidArgument(format!("unknown variant {s:?} (expected monic or full)"))),
        }
    }
}

/// A degree triple with `L(d1, d2, d3) = g + 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DegreePattern {
    pub degrees: [usize; 3],
    /// Two of the three degrees are zero, so one of the defining polynomials is constant
    /// and the pattern is dropped from the family. This can only happen for odd `g`.
    pub excluded: bool,
}

fn is_degenerate(d: [usize; 3]) -> bool {
    d.iter().filter(|&&x| x == 0).count() >= 2
}

/// All `(d1, d2, d3)` with `d1 + d2 + d3 <= g + 3` and `L = g + 3`, in lexicographic order,
/// with the excluded ones flagged rather than removed.
pub fn degree_patterns(g: usize) -> Vec<DegreePattern> {
    let target = g + 3;
    let mut out = Vec::new();
    for d1 in 0..=target {
        for d2 in 0..=target - d1 {
            for d3 in 0..=target - d1 - d2 {
                if genus_length(d1, d2, d3) == target {
                    let degrees = [d1, d2, d3];
                    out.push(DegreePattern { degrees, excluded: is_degenerate(degrees) });
                }
            }
        }
    }
    out
}

/// A member `(f1, f2, f3)` of the family of genus `genus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveTriple {
    pub f1: Poly,
    pub f2: Poly,
    pub f3: Poly,
    pub variant: Variant,
    pub genus: usize,
}

impl CurveTriple {
    /// Validates the family conditions and computes the genus.
    pub fn new(f1: Poly, f2: Poly, f3: Poly, variant: Variant) -> Result<Self> {
        let field = f1.field().clone();
        if f2.field() != &field || f3.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if field.order() % 2 == 0 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        for (name, f) in [("f1", &f1), ("f2", &f2), ("f3", &f3)] {
            if f.is_zero() {
                return Err(Error::InvalidArgument(format!("{name} is zero")));
            }
            if !is_squarefree(f)? {
                return Err(Error::NotSquarefree(format!("{name} = {f}")));
            }
        }
        if !f3.is_monic() {
            return Err(Error::InvalidArgument(format!("f3 = {f3} must be monic")));
        }
        if variant == Variant::Monic && !(f1.is_monic() && f2.is_monic()) {
            return Err(Error::InvalidArgument("monic variant needs monic f1 and f2".into()));
        }
        if !(f1.is_coprime(&f2)? && f1.is_coprime(&f3)? && f2.is_coprime(&f3)?) {
            return Err(Error::InvalidArgument("f1, f2, f3 must be pairwise coprime".into()));
        }
        let d = [f1.deg()?, f2.deg()?, f3.deg()?];
        if is_degenerate(d) {
            return Err(Error::InvalidArgument(format!("degree pattern {d:?} has two constant polynomials")));
        }
        let genus = genus_length(d[0], d[1], d[2]) - 3;
        Ok(Self { f1, f2, f3, variant, genus })
    }

    pub fn field(&self) -> &FiniteField {
        self.f1.field()
    }

    /// The three moduli `D1 = f1 f3`, `D2 = f2 f3`, `D3 = f1 f2` (not normalized).
    pub fn moduli(&self) -> [Poly; 3] {
        [&self.f1 * &self.f3, &self.f2 * &self.f3, &self.f1 * &self.f2]
    }

    /// Leading coefficients of `f1` and `f2`.
    pub fn leading_coeffs(&self) -> (Elem, Elem) {
        (self.f1.leading_coeff().unwrap_or(1), self.f2.leading_coeff().unwrap_or(1))
    }
}

/// A fully materialized family in enumeration order.
#[derive(Clone, Debug)]
pub struct Family {
    pub field: FiniteField,
    pub genus: usize,
    pub variant: Variant,
    pub members: Vec<CurveTriple>,
}

impl Family {
    pub fn new(field: &FiniteField, genus: usize, variant: Variant) -> Result<Self> {
        Ok(Self { field: field.clone(), genus, variant, members: enumerate_family(field, genus, variant)? })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CurveTriple> {
        self.members.iter()
    }
}

/// Monic triples of one degree pattern, ordered by `(f1, f2, f3)`.
fn pattern_triples(sqfree: &[Vec<Poly>], d: [usize; 3]) -> Result<Vec<[Poly; 3]>> {
    let mut out = Vec::new();
    for f1 in &sqfree[d[0]] {
        for f2 in &sqfree[d[1]] {
            if !f1.is_coprime(f2)? {
                continue;
            }
            for f3 in &sqfree[d[2]] {
                if f1.is_coprime(f3)? && f2.is_coprime(f3)? {
                    out.push([f1.clone(), f2.clone(), f3.clone()]);
                }
            }
        }
    }
    Ok(out)
}

fn check_field(field: &FiniteField) -> Result<()> {
    if field.order() % 2 == 0 {
        return Err(Error::InvalidField("the family needs odd q".into()));
    }
    Ok(())
}

/// Every member of the family, each exactly once.
///
/// Order: degree pattern (lexicographic), then `(c1, c2)` leading coefficients for the
/// full variant, then `f1, f2, f3` by monic index. Patterns are processed in parallel but
/// the output order does not depend on the thread count.
pub fn enumerate_family(field: &FiniteField, g: usize, variant: Variant) -> Result<Vec<CurveTriple>> {
    check_field(field)?;
    let patterns: Vec<[usize; 3]> = degree_patterns(g).into_iter().filter(|p| !p.excluded).map(|p| p.degrees).collect();
    let sqfree: Vec<Vec<Poly>> =
        (0..=g + 3).map(|d| enumerate(field, d, PolyKind::SquarefreeMonic)).collect::<Result<_>>()?;
    let blocks: Vec<Vec<[Poly; 3]>> =
        patterns.par_iter().map(|&d| pattern_triples(&sqfree, d)).collect::<Result<_>>()?;
    let constants: Vec<(Elem, Elem)> = match variant {
        Variant::Monic => vec![(1, 1)],
        Variant::Full => {
            let q = field.order();
            (1..q).flat_map(|c1| (1..q).map(move |c2| (c1, c2))).collect()
        }
    };
    let mut out = Vec::new();
    for block in blocks {
        for &(c1, c2) in &constants {
            for [f1, f2, f3] in &block {
                out.push(CurveTriple { f1: f1.scale(c1), f2: f2.scale(c2), f3: f3.clone(), variant, genus: g });
            }
        }
    }
    Ok(out)
}

/// Exact family size and the ratio `|F_g| / q^{g+3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySize {
    pub count: u64,
    pub ratio: f64,
}

/// Counts the family without materializing it.
pub fn family_size(field: &FiniteField, g: usize, variant: Variant) -> Result<FamilySize> {
    check_field(field)?;
    let sqfree: Vec<Vec<Poly>> =
        (0..=g + 3).map(|d| enumerate(field, d, PolyKind::SquarefreeMonic)).collect::<Result<_>>()?;
    let counts: Vec<u64> = degree_patterns(g)
        .into_par_iter()
        .filter(|p| !p.excluded)
        .map(|p| pattern_triples(&sqfree, p.degrees).map(|v| v.len() as u64))
        .collect::<Result<_>>()?;
    let q = field.order() as u64;
    let mut count: u64 = counts.iter().sum();
    if variant == Variant::Full {
        count *= (q - 1) * (q - 1);
    }
    let ratio = count as f64 / (q as f64).powi(g as i32 + 3);
    Ok(FamilySize { count, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_length_examples() {
        assert_eq!(genus_length(1, 1, 1), 3);
        assert_eq!(genus_length(2, 2, 0), 4);
        assert_eq!(genus_length(3, 1, 0), 5);
        for d in 0..8 {
            for e in 0..8 {
                for f in 0..8 {
                    let l = genus_length(d, e, f);
                    assert_eq!(l, genus_length(e, d, f));
                    assert_eq!(l, genus_length(f, e, d));
                }
            }
        }
    }

    #[test]
    fn exclusion_only_for_odd_genus() {
        for g in 0..8 {
            let excluded: Vec<_> = degree_patterns(g).into_iter().filter(|p| p.excluded).collect();
            if g % 2 == 0 {
                assert!(excluded.is_empty(), "g = {g}");
            } else {
                let mut multisets: Vec<[usize; 3]> = excluded
                    .iter()
                    .map(|p| {
                        let mut d = p.degrees;
                        d.sort();
                        d
                    })
                    .collect();
                multisets.sort();
                multisets.dedup();
                assert_eq!(multisets, vec![[0, 0, g + 2], [0, 0, g + 3]]);
                assert_eq!(excluded.len(), 6);
            }
        }
    }

    #[test]
    fn genus_zero_counts() {
        let f3 = FiniteField::prime(3).unwrap();
        let monic = enumerate_family(&f3, 0, Variant::Monic).unwrap();
        assert_eq!(monic.len(), 24);
        let full = enumerate_family(&f3, 0, Variant::Full).unwrap();
        assert_eq!(full.len(), 96);
        assert_eq!(family_size(&f3, 0, Variant::Full).unwrap().count, 96);
        for t in &monic {
            let again = CurveTriple::new(t.f1.clone(), t.f2.clone(), t.f3.clone(), Variant::Monic).unwrap();
            assert_eq!(again.genus, 0);
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // filter over all triples of small monic polynomials with CurveTriple::new
        let f3 = FiniteField::prime(3).unwrap();
        for g in 0..=1 {
            let mut all = Vec::new();
            for d in 0..=g + 3 {
                all.extend(enumerate(&f3, d, PolyKind::Monic).unwrap());
            }
            let mut brute = 0usize;
            for a in &all {
                for b in &all {
                    for c in &all {
                        if let Ok(t) = CurveTriple::new(a.clone(), b.clone(), c.clone(), Variant::Monic) {
                            if t.genus == g {
                                brute += 1;
                            }
                        }
                    }
                }
            }
            let fam = enumerate_family(&f3, g, Variant::Monic).unwrap();
            assert_eq!(fam.len(), brute, "g = {g}");
            let mut sorted = fam.clone();
            sorted.sort_by(|x, y| (&x.f1, &x.f2, &x.f3).cmp(&(&y.f1, &y.f2, &y.f3)));
            sorted.dedup();
            assert_eq!(sorted.len(), fam.len());
        }
    }

    #[test]
    fn rejects_bad_triples() {
        let f3 = FiniteField::prime(3).unwrap();
        let p = |c: &[i64]| Poly::from_ints(&f3, c);
        // not coprime
        assert!(CurveTriple::new(p(&[0, 1]), p(&[0, 1, 1]), p(&[1]), Variant::Monic).is_err());
        // two constants
        assert!(CurveTriple::new(p(&[0, 1, 0, 1]), p(&[1]), p(&[1]), Variant::Monic).is_err());
        // nonmonic f3
        assert!(CurveTriple::new(p(&[0, 1]), p(&[1, 1]), p(&[2, 2]), Variant::Full).is_err());
        // nonmonic f1 in the monic variant
        assert!(CurveTriple::new(p(&[0, 2]), p(&[1, 1]), p(&[2, 1]), Variant::Monic).is_err());
        assert!(CurveTriple::new(p(&[0, 2]), p(&[1, 1]), p(&[2, 1]), Variant::Full).is_ok());
    }
}
