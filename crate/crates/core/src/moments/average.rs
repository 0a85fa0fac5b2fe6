//! Family averages of `T_n` and the even-`n` decomposition of the average.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::biquad::{curve_counts, degree_patterns, enumerate_family, CharSumTable, CurveTriple, Variant};
use crate::error::{Error, Result};
use crate::ffpoly::arith::lifted_constant_character;
use crate::ffpoly::{is_squarefree, jacobi_symbol, primes_of_degree, squarefree_count, FiniteField, Poly};
use crate::moments::{matrix_integral_reference, MatrixGroup};

fn ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// How a family average is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    /// Uniform sample with replacement of `size` members, driven by `seed`.
    Sample {
        size: usize,
        seed: u64,
    },
}

/// Average of `T_n` over a family, with the even-`n` decomposition when available.
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub q: u32,
    pub g: usize,
    pub n: usize,
    pub variant: Variant,
    /// Exact family size (also reported in sample mode).
    pub family_size: u64,
    /// Number of curves averaged: the family size, or the sample size.
    pub curves: u64,
    /// Exact average (or sample mean) of `T_n`.
    pub avg_t: BigRational,
    /// `avg_t / q^{n/2}`.
    pub avg_trace: f64,
    /// Matrix integral over `USp(2g)^3`.
    pub reference: f64,
    pub gap: f64,
    /// Standard error of `avg_trace` in sample mode.
    pub std_error: Option<f64>,
    /// Present for even `n` in exhaustive mode.
    pub decomposition: Option<Decomposition>,
}

/// Exact pieces of `avg_T / q^{n/2}` for even `n`, over the monic family.
///
/// `avg_T / q^{n/2} = -3 + roots_term - bilinear_term - infinity_term`, where the last
/// term is the contribution of the point at infinity.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n: usize,
    /// `avg_T / q^{n/2}` for the monic family.
    pub normalized_avg: BigRational,
    /// `(3 q^{-n/2} / |F_g|) sum_triples #{x in F_{q^{n/2}} : f1 f2 (x) = 0}`.
    pub roots_term: BigRational,
    /// `(3 q^{-n/2} / |F_g|) sum_{x in F_{q^n} \ F_{q^{n/2}}} sum_triples chi(f1 f2 (x))`.
    pub bilinear_term: BigRational,
    /// `(3 q^{-n/2} / |F_g|) #{triples with deg f1 f2 even}`.
    pub infinity_term: BigRational,
    /// Part of the bilinear term from `x` of degree exactly `n`.
    pub generating_term: BigRational,
    /// The same part as `(3 n q^{-n/2} / |F_g|) sum_{deg P = n} sum_triples chi_P(f1 f2)`.
    pub generating_prime_form: BigRational,
    /// Bilinear term minus its generating part.
    pub nongenerating_term: BigRational,
    /// `3 (g + 3) / q^{n/2}`.
    pub roots_bound: f64,
    /// `3 q^{-n/6}`.
    pub nongen_bound: f64,
}

impl Decomposition {
    /// `-3 + roots - bilinear - infinity` equals the normalized average.
    pub fn identity_holds(&self) -> bool {
        self.three_term_value() - &self.infinity_term == self.normalized_avg
    }

    /// `-3 + roots - bilinear`, the decomposition without the point at infinity.
    pub fn three_term_value(&self) -> BigRational {
        BigRational::from_integer((-3).into()) + &self.roots_term - &self.bilinear_term
    }

    pub fn prime_form_holds(&self) -> bool {
        self.generating_term == self.generating_prime_form
    }
}

/// The monic family of genus `g` with point sums of all moduli up to `n_max`.
pub struct FamilyMoments {
    field: FiniteField,
    g: usize,
    members: Vec<CurveTriple>,
    /// Table slots of `(monic D1, D2, D3)` per member.
    slots: Vec<[usize; 3]>,
    table: CharSumTable,
}

impl FamilyMoments {
    pub fn new(field: &FiniteField, g: usize, n_max: usize) -> Result<Self> {
        let members = enumerate_family(field, g, Variant::Monic)?;
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let table = CharSumTable::new(field, g + 3, n_max)?;
        let slots = members
            .iter()
            .map(|t| {
                let [a, b, c] = t.moduli();
                let s = |d: &Poly| {
                    table.slot_of(d).ok_or_else(|| Error::Consistency(format!("modulus {d} missing from table")))
                };
                Ok([s(&a)?, s(&b)?, s(&c)?])
            })
            .collect::<Result<_>>()?;
        Ok(Self { field: field.clone(), g, members, slots, table })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn n_max(&self) -> usize {
        self.table.n_max()
    }

    pub fn members(&self) -> &[CurveTriple] {
        &self.members
    }

    pub fn family_size(&self, variant: Variant) -> u64 {
        let q = self.field.order() as u64;
        let m = self.members.len() as u64;
        match variant {
            Variant::Monic => m,
            Variant::Full => m * (q - 1) * (q - 1),
        }
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n_max() {
            return Err(Error::InvalidArgument(format!("n = {n} outside 1..={}", self.n_max())));
        }
        Ok(())
    }

    /// `sum T_n` over the family.
    pub fn trace_sum(&self, n: usize, variant: Variant) -> Result<i128> {
        self.check_n(n)?;
        let s = |slot: usize| self.table.at(slot, n).projective() as i128;
        let total = match variant {
            Variant::Monic => self.slots.iter().map(|&[a, b, c]| -(s(a) + s(b) + s(c))).sum(),
            Variant::Full => {
                let q = self.field.order();
                let chi = |c: u32| lifted_constant_character(c, &self.field, n) as i128;
                let mut total = 0i128;
                for c1 in 1..q {
                    for c2 in 1..q {
                        let c12 = self.field.mul(c1, c2);
                        let (x1, x2, x3) = (chi(c1), chi(c2), chi(c12));
                        total += self.slots.iter().map(|&[a, b, c]| -(x1 * s(a) + x2 * s(b) + x3 * s(c))).sum::<i128>();
                    }
                }
                total
            }
        };
        Ok(total)
    }

    /// Exhaustive report for one `n`; the decomposition is attached for even `n`.
    pub fn report(&self, n: usize, variant: Variant) -> Result<MomentReport> {
        let size = self.family_size(variant);
        let avg_t = ratio(self.trace_sum(n, variant)?, size as i128);
        let decomposition = if n % 2 == 0 { Some(self.decomposition(n)?) } else { None };
        Ok(finish_report(&self.field, self.g, n, variant, size, size, avg_t, None, decomposition))
    }

    /// The even-`n` decomposition over the monic family.
    pub fn decomposition(&self, n: usize) -> Result<Decomposition> {
        self.check_n(n)?;
        if n % 2 != 0 {
            return Err(Error::InvalidArgument(format!("the decomposition needs even n, got {n}")));
        }
        let q = self.field.order() as i128;
        let half = q.pow(n as u32 / 2);
        let size = self.members.len() as i128;
        let mut roots = 0i128;
        let mut bilinear = 0i128;
        let mut infinity = 0i128;
        let mut generating = 0i128;
        for &[_, _, c] in &self.slots {
            let s = self.table.at(c, n);
            roots += s.subfield_roots as i128;
            bilinear += (s.affine - s.subfield) as i128;
            infinity += s.infinity as i128;
            generating += s.generating as i128;
        }
        let primes = primes_of_degree(&self.field, n)?;
        let prime_sum: i128 = primes
            .par_iter()
            .map(|p| {
                self.members.iter().map(|t| jacobi_symbol(&(&t.f1 * &t.f2), p).map(|v| v as i128)).sum::<Result<i128>>()
            })
            .collect::<Result<Vec<i128>>>()?
            .into_iter()
            .sum();
        let term = |x: i128| ratio(3 * x, half * size);
        let normalized_avg = ratio(self.trace_sum(n, Variant::Monic)?, size * half);
        Ok(Decomposition {
            n,
            normalized_avg,
            roots_term: term(roots),
            bilinear_term: term(bilinear),
            infinity_term: term(infinity),
            generating_term: term(generating),
            generating_prime_form: ratio(3 * n as i128 * prime_sum, half * size),
            nongenerating_term: term(bilinear - generating),
            roots_bound: 3.0 * (self.g + 3) as f64 / half as f64,
            nongen_bound: 3.0 * (q as f64).powf(-(n as f64) / 6.0),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    field: &FiniteField,
    g: usize,
    n: usize,
    variant: Variant,
    family_size: u64,
    curves: u64,
    avg_t: BigRational,
    std_error: Option<f64>,
    decomposition: Option<Decomposition>,
) -> MomentReport {
    let q = field.order();
    let avg_trace = to_f64(&avg_t) / (q as f64).powf(n as f64 / 2.0);
    let reference = matrix_integral_reference(MatrixGroup::USpCubed, g, n) as f64;
    MomentReport {
        q,
        g,
        n,
        variant,
        family_size,
        curves,
        avg_t,
        avg_trace,
        reference,
        gap: avg_trace - reference,
        std_error,
        decomposition,
    }
}

/// One uniform member: a pattern chosen by its number of square-free triples, uniform
/// square-free polynomials by rejection, and a restart unless the triple is coprime.
fn uniform_member(
    field: &FiniteField,
    g: usize,
    variant: Variant,
    weights: &[([usize; 3], u128)],
    total: u128,
    rng: &mut ChaCha8Rng,
) -> Result<CurveTriple> {
    let q = field.order();
    loop {
        let mut r = rng.random_range(0..total);
        let mut pattern = weights[0].0;
        for &(d, w) in weights {
            if r < w {
                pattern = d;
                break;
            }
            r -= w;
        }
        let mut fs = Vec::with_capacity(3);
        for &d in &pattern {
            let count = (q as u64).pow(d as u32);
            loop {
                let f = Poly::from_monic_index(field, d, rng.random_range(0..count));
                if is_squarefree(&f)? {
                    fs.push(f);
                    break;
                }
            }
        }
        let (c1, c2) = match variant {
            Variant::Monic => (1, 1),
            Variant::Full => (rng.random_range(1..q), rng.random_range(1..q)),
        };
        let f3 = fs.pop().unwrap_or_else(|| Poly::one(field));
        let f2 = fs.pop().unwrap_or_else(|| Poly::one(field)).scale(c2);
        let f1 = fs.pop().unwrap_or_else(|| Poly::one(field)).scale(c1);
        if let Ok(t) = CurveTriple::new(f1, f2, f3, variant) {
            debug_assert_eq!(t.genus, g);
            return Ok(t);
        }
    }
}

/// Draws `size` members uniformly with replacement; the sequence depends only on `seed`.
pub fn sample_family(
    field: &FiniteField,
    g: usize,
    variant: Variant,
    size: usize,
    seed: u64,
) -> Result<Vec<CurveTriple>> {
    let mut weights = Vec::new();
    let mut total = 0u128;
    for p in degree_patterns(g).into_iter().filter(|p| !p.excluded) {
        let mut w = 1u128;
        for &d in &p.degrees {
            let c = squarefree_count(field.order() as u64, d).to_u128().ok_or(Error::Overflow("pattern weight"))?;
            w = w.checked_mul(c).ok_or(Error::Overflow("pattern weight"))?;
        }
        total = total.checked_add(w).ok_or(Error::Overflow("pattern weight"))?;
        weights.push((p.degrees, w));
    }
    if total == 0 {
        return Err(Error::EmptyFamily);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| uniform_member(field, g, variant, &weights, total, &mut rng)).collect()
}

/// Sample-mode reports for `n = 1..=n_max` from direct point counts of sampled members.
pub fn sampled_reports(
    field: &FiniteField,
    g: usize,
    n_max: usize,
    variant: Variant,
    size: usize,
    seed: u64,
    family_size: u64,
) -> Result<Vec<MomentReport>> {
    if size == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    let sample = sample_family(field, g, variant, size, seed)?;
    let traces: Vec<Vec<i128>> =
        sample.par_iter().map(|t| curve_counts(t, n_max).map(|d| d.t)).collect::<Result<_>>()?;
    let q = field.order() as f64;
    (1..=n_max)
        .map(|n| {
            let vals: Vec<i128> = traces.iter().map(|t| t[n - 1]).collect();
            let sum: i128 = vals.iter().sum();
            let avg_t = ratio(sum, size as i128);
            let norm = q.powf(n as f64 / 2.0);
            let mean = to_f64(&avg_t) / norm;
            let var = if size > 1 {
                vals.iter().map(|&v| (v as f64 / norm - mean).powi(2)).sum::<f64>() / (size - 1) as f64
            } else {
                0.0
            };
            Ok(finish_report(
                field,
                g,
                n,
                variant,
                family_size,
                size as u64,
                avg_t,
                Some((var / size as f64).sqrt()),
                None,
            ))
        })
        .collect()
}

/// Average of `T_n` for `n = 1..=n_max`.
pub fn average_trace(
    field: &FiniteField,
    g: usize,
    n_max: usize,
    variant: Variant,
    mode: Mode,
) -> Result<Vec<MomentReport>> {
    match mode {
        Mode::Exhaustive => {
            let fm = FamilyMoments::new(field, g, n_max)?;
            (1..=n_max).map(|n| fm.report(n, variant)).collect()
        }
        Mode::Sample { size, seed } => {
            let family_size = crate::biquad::family_size(field, g, variant)?.count;
            if family_size == 0 {
                return Err(Error::EmptyFamily);
            }
            sampled_reports(field, g, n_max, variant, size, seed, family_size)
        }
    }
}

/// Rough cost of an exhaustive run: moduli in the table times points per modulus.
pub fn exhaustive_work(q: u32, g: usize, n_max: usize) -> f64 {
    let q = q as f64;
    let moduli = q.powi(g as i32 + 4) / (q - 1.0);
    let points: f64 = (1..=n_max).map(|n| q.powi(n as i32)).sum();
    moduli * points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biquad::{curve_counts, enumerate_family};
    use num_traits::Zero;

    fn direct_sum(field: &FiniteField, g: usize, n: usize, variant: Variant) -> i128 {
        enumerate_family(field, g, variant).unwrap().iter().map(|t| curve_counts(t, n).unwrap().t[n - 1]).sum()
    }

    #[test]
    fn table_sums_match_direct_point_counts() {
        let f3 = FiniteField::prime(3).unwrap();
        for g in 0..=2 {
            let fm = FamilyMoments::new(&f3, g, 3).unwrap();
            for n in 1..=3 {
                for variant in [Variant::Monic, Variant::Full] {
                    assert_eq!(
                        fm.trace_sum(n, variant).unwrap(),
                        direct_sum(&f3, g, n, variant),
                        "g={g} n={n} {variant}"
                    );
                }
            }
        }
    }

    #[test]
    fn genus_zero_averages_vanish() {
        let f3 = FiniteField::prime(3).unwrap();
        for r in average_trace(&f3, 0, 4, Variant::Full, Mode::Exhaustive).unwrap() {
            assert!(r.avg_t.is_zero());
        }
    }

    #[test]
    fn decomposition_identity_small() {
        let f3 = FiniteField::prime(3).unwrap();
        let fm = FamilyMoments::new(&f3, 1, 2).unwrap();
        let d = fm.decomposition(2).unwrap();
        assert!(d.identity_holds());
        assert!(d.prime_form_holds());
        // the point at infinity contributes, so the three-term form is off by exactly it
        assert!(!d.infinity_term.is_zero());
        assert_eq!(d.three_term_value() - &d.normalized_avg, d.infinity_term);
        assert!(fm.decomposition(3).is_err());
    }

    #[test]
    fn sampling_is_reproducible_and_in_family() {
        let f3 = FiniteField::prime(3).unwrap();
        let a = sample_family(&f3, 2, Variant::Full, 30, 7).unwrap();
        let b = sample_family(&f3, 2, Variant::Full, 30, 7).unwrap();
        assert_eq!(a, b);
        let family = enumerate_family(&f3, 2, Variant::Full).unwrap();
        for t in &a {
            assert!(family.contains(t));
        }
    }
}
