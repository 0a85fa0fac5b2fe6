//! Exhaustive verification of L-polynomial identities over all square-free moduli of
//! bounded degree.

use crate::error::Result;
use crate::ffpoly::{enumerate, FiniteField, Poly, PolyKind};
use crate::lfunc::roots::rh_max_deviation;
use crate::lfunc::{complete_l, frobenius_traces, sweep_characters, trivial_zero_term, LPoly, Sign};

/// Outcome of [`verify_catalog`]; `failures` lists human-readable descriptions.
#[derive(Clone, Debug, Default)]
pub struct CatalogReport {
    /// Number of (modulus, sign) pairs checked.
    pub characters: usize,
    pub max_rh_deviation: f64,
    pub completion_failures: Vec<String>,
    pub degree_failures: Vec<String>,
    pub functional_equation_failures: Vec<String>,
    pub rh_failures: Vec<String>,
    pub explicit_formula_failures: Vec<String>,
    pub vanishing_failures: Vec<String>,
}

impl CatalogReport {
    pub fn is_clean(&self) -> bool {
        self.completion_failures.is_empty()
            && self.degree_failures.is_empty()
            && self.functional_equation_failures.is_empty()
            && self.rh_failures.is_empty()
            && self.explicit_formula_failures.is_empty()
            && self.vanishing_failures.is_empty()
    }

    fn merge(&mut self, other: CatalogReport) {
        self.characters += other.characters;
        self.max_rh_deviation = self.max_rh_deviation.max(other.max_rh_deviation);
        self.completion_failures.extend(other.completion_failures);
        self.degree_failures.extend(other.degree_failures);
        self.functional_equation_failures.extend(other.functional_equation_failures);
        self.rh_failures.extend(other.rh_failures);
        self.explicit_formula_failures.extend(other.explicit_formula_failures);
        self.vanishing_failures.extend(other.vanishing_failures);
    }
}

/// For every square-free monic `D` with `1 <= deg D <= max_deg` and both signs: the
/// completion is exact, `deg L* = deg D - 1 - lambda`, the functional equation holds,
/// reciprocal roots have modulus `sqrt(q)` within `rh_tol` (relative), the character
/// sum at degree `deg D` vanishes, and `-t_n` from Newton's identities equals the
/// explicit-formula value for `1 <= n <= n_max`.
///
/// Character values come from [`sweep_characters`] evaluated at prime roots, so this
/// path is independent of the reciprocity-based [`crate::lfunc::QuadChar::value`].
pub fn verify_catalog(field: &FiniteField, max_deg: usize, n_max: usize, rh_tol: f64) -> Result<CatalogReport> {
    let q = field.order();
    let mut tests = Vec::new();
    let mut a_ranges = Vec::new();
    for d in 0..=max_deg {
        let start = tests.len();
        tests.extend(enumerate(field, d, PolyKind::Monic)?);
        a_ranges.push(start..tests.len());
    }
    // index 0 is unused so that b_ranges[k] covers degree k
    let mut b_ranges: Vec<std::ops::Range<usize>> = Vec::new();
    b_ranges.push(0..0);
    for k in 1..=n_max {
        let start = tests.len();
        tests.extend(enumerate(field, k, PolyKind::Prime)?);
        b_ranges.push(start..tests.len());
    }

    let reports = sweep_characters(field, max_deg, &tests, |item| {
        let v = item.values;
        let sum = |r: &std::ops::Range<usize>| v[r.clone()].iter().map(|&x| x as i128).sum::<i128>();
        let sq = |r: &std::ops::Range<usize>| v[r.clone()].iter().map(|&x| (x * x) as i128).sum::<i128>();
        let deg_d = item.modulus.degree().unwrap_or(0);
        let a_sums: Vec<i128> = a_ranges.iter().map(sum).collect();
        let b_sums: Vec<i128> = b_ranges.iter().map(sum).collect();
        let b_coprime: Vec<i128> = b_ranges.iter().map(sq).collect();
        let mut rep = CatalogReport::default();
        for sign in [Sign::Plus, Sign::Minus] {
            rep.characters += 1;
            check_one(q, item.modulus, deg_d, sign, &a_sums, &b_sums, &b_coprime, n_max, rh_tol, &mut rep);
        }
        rep
    })?;
    let mut total = CatalogReport::default();
    for r in reports {
        total.merge(r);
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn check_one(
    q: u32,
    modulus: &Poly,
    deg_d: usize,
    sign: Sign,
    a_sums: &[i128],
    b_sums: &[i128],
    b_coprime: &[i128],
    n_max: usize,
    rh_tol: f64,
    rep: &mut CatalogReport,
) {
    let label = || format!("{modulus} ({})", sign.as_str());
    let twisted = |d: usize, s: i128| s * sign.twist(d) as i128;
    if twisted(deg_d, a_sums[deg_d]) != 0 {
        rep.vanishing_failures.push(label());
    }
    let raw: Vec<i128> = (0..deg_d).map(|d| twisted(d, a_sums[d])).collect();
    let lstar = match LPoly::raw(q, deg_d, sign, raw).and_then(|l| complete_l(&l)) {
        Ok(l) => l,
        Err(e) => {
            rep.completion_failures.push(format!("{}: {e}", label()));
            return;
        }
    };
    let lambda = lstar.lambda() as usize;
    if lstar.coeffs().len() != deg_d - lambda {
        rep.degree_failures.push(label());
    }
    if !lstar.satisfies_functional_equation() {
        rep.functional_equation_failures.push(label());
    }
    match rh_max_deviation(lstar.coeffs(), q) {
        Ok(dev) => {
            rep.max_rh_deviation = rep.max_rh_deviation.max(dev);
            if dev >= rh_tol {
                rep.rh_failures.push(format!("{}: deviation {dev:e}", label()));
            }
        }
        Err(e) => rep.rh_failures.push(format!("{}: {e}", label())),
    }
    let traces = match frobenius_traces(&lstar, n_max) {
        Ok(t) => t,
        Err(e) => {
            rep.explicit_formula_failures.push(format!("{}: {e}", label()));
            return;
        }
    };
    for n in 1..=n_max {
        let mut lambda_sum = 0i128;
        for k in (1..=n).filter(|k| n % k == 0) {
            let s = if (n / k) % 2 == 1 { twisted(k, b_sums[k]) } else { b_coprime[k] };
            lambda_sum += k as i128 * s;
        }
        let explicit = trivial_zero_term(lstar.lambda(), sign, n) + lambda_sum;
        if explicit != -traces.t(n) {
            rep.explicit_formula_failures.push(format!(
                "{} n={n}: explicit {explicit} vs Newton {}",
                label(),
                -traces.t(n)
            ));
        }
    }
}
