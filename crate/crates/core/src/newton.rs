//! Newton's identities between the coefficients of `prod (1 - r_j u)` and the power
//! sums `t_n = sum r_j^n`, in exact integer arithmetic.

use crate::error::{Error, Result};

/// Power sums `t_1..=t_{n_max}` of the reciprocal roots of `sum c_k u^k` (with `c_0 = 1`).
///
/// Uses `t_n = -n c_n - sum_{i=1}^{n-1} c_i t_{n-i}`.
pub fn power_sums(coeffs: &[i128], n_max: usize) -> Result<Vec<i128>> {
    if coeffs.first() != Some(&1) {
        return Err(Error::InvalidArgument("constant coefficient must be 1".into()));
    }
    let c = |k: usize| coeffs.get(k).copied().unwrap_or(0);
    let mut t: Vec<i128> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = (n as i128).checked_mul(c(n)).ok_or(Error::Overflow("power sum"))?;
        for i in 1..n {
            let term = c(i).checked_mul(t[n - i - 1]).ok_or(Error::Overflow("power sum"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("power sum"))?;
        }
        t.push(-acc);
    }
    Ok(t)
}

/// Coefficients `c_0..=c_k` with `c_0 = 1` from power sums `t_1..=t_k`.
///
/// Uses `k c_k = -sum_{i=1}^k t_i c_{k-i}`; an inexact division means the sums are not
/// those of an integer polynomial and is reported as an error.
pub fn coeffs_from_power_sums(t: &[i128], k: usize) -> Result<Vec<i128>> {
    if t.len() < k {
        return Err(Error::InvalidArgument(format!("need {k} power sums, got {}", t.len())));
    }
    let mut c = vec![1i128];
    for m in 1..=k {
        let mut acc: i128 = 0;
        for i in 1..=m {
            let term = t[i - 1].checked_mul(c[m - i]).ok_or(Error::Overflow("coefficient"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("coefficient"))?;
        }
        if acc % m as i128 != 0 {
            return Err(Error::Consistency(format!(
                "power sums give non-integral coefficient {}/{m} at degree {m}",
                -acc
            )));
        }
        c.push(-acc / m as i128);
    }
    Ok(c)
}
