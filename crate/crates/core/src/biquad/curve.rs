//! Point counts and zeta numerators of individual curves.

use crate::biquad::CurveTriple;
use crate::error::{Error, Result};
use crate::ffpoly::{extension, quad_char_eval, ProjectivePoint};
use crate::newton::{coeffs_from_power_sums, power_sums};

/// Point counts `N_n`, traces `T_n = q^n + 1 - N_n` for `n = 1..=n_max`, and optionally
/// the zeta numerator `P_C(u) = sum a_j u^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveData {
    pub genus: usize,
    pub q: u32,
    pub n: Vec<i128>,
    pub t: Vec<i128>,
    pub p_c: Option<Vec<i128>>,
}

impl CurveData {
    /// `N_n`, with `n` starting at 1.
    pub fn count(&self, n: usize) -> i128 {
        self.n[n - 1]
    }

    /// `T_n`, with `n` starting at 1.
    pub fn trace(&self, n: usize) -> i128 {
        self.t[n - 1]
    }
}

/// Character sums `S_i(n) = sum_{x in P^1(F_{q^n})} chi(D_i(x))` for the three moduli.
pub fn moduli_sums(t: &CurveTriple, n: usize) -> Result<[i128; 3]> {
    let ext = extension(t.field(), n)?;
    let moduli = t.moduli();
    let mut s = [0i128; 3];
    for (si, d) in s.iter_mut().zip(&moduli) {
        *si = quad_char_eval(d, ProjectivePoint::Infinity, &ext)? as i128;
    }
    for x in ext.elements() {
        for (si, d) in s.iter_mut().zip(&moduli) {
            *si += ext.quadratic_character(ext.eval(d, x)) as i128;
        }
    }
    Ok(s)
}

/// `N_n = sum_{x in P^1(F_{q^n})} (1 + chi(f1 f3(x)) + chi(f2 f3(x)) + chi(f1 f2(x)))`.
pub fn curve_counts(t: &CurveTriple, n_max: usize) -> Result<CurveData> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let q = t.field().order();
    let mut counts = Vec::with_capacity(n_max);
    let mut traces = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let points = (q as i128).pow(n as u32) + 1;
        let s = moduli_sums(t, n)?;
        let total: i128 = s.iter().sum();
        let count = points + total;
        if count < 0 || count > 4 * points {
            return Err(Error::Consistency(format!("point count {count} out of range at n = {n}")));
        }
        counts.push(count);
        traces.push(-total);
    }
    Ok(CurveData { genus: t.genus, q, n: counts, t: traces, p_c: None })
}

/// Point counts up to `max(n_max, g + 1)` together with `P_C`.
///
/// `a_1..a_g` come from `T_1..T_g` by Newton's identities, the upper half from the
/// functional equation `a_{2g-j} = q^{g-j} a_j`, and `T_{g+1}` recomputed from `P_C`
/// must match the point count.
pub fn zeta_numerator(t: &CurveTriple, n_max: usize) -> Result<CurveData> {
    let g = t.genus;
    let mut data = curve_counts(t, n_max.max(g + 1))?;
    let q = data.q as i128;
    let mut p = coeffs_from_power_sums(&data.t, g)?;
    for j in (0..g).rev() {
        let scale = q.checked_pow((g - j) as u32).ok_or(Error::Overflow("zeta numerator"))?;
        p.push(p[j].checked_mul(scale).ok_or(Error::Overflow("zeta numerator"))?);
    }
    let recomputed = power_sums(&p, g + 1)?;
    if recomputed[g] != data.t[g] {
        return Err(Error::Consistency(format!(
            "T_{} from P_C is {} but the point count gives {}",
            g + 1,
            recomputed[g],
            data.t[g]
        )));
    }
    data.n.truncate(n_max.max(1));
    data.t.truncate(n_max.max(1));
    data.p_c = Some(p);
    Ok(data)
}
