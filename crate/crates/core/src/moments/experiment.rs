//! Family averages across genera, labelled by the ranges where the asymptotics apply.

use crate::biquad::{family_size, Variant};
use crate::error::Result;
use crate::ffpoly::FiniteField;
use crate::moments::{exhaustive_work, sampled_reports, FamilyMoments, MomentReport};

/// Which `n` to tabulate for each genus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NPolicy {
    /// `1..=n_max`.
    All { n_max: usize },
    /// Even `n` up to `n_max`.
    Even { n_max: usize },
    /// `1..=2g + 2`, crossing the `n = 2g` threshold.
    PastTwiceGenus,
}

impl NPolicy {
    fn values(self, g: usize) -> Vec<usize> {
        match self {
            NPolicy::All { n_max } => (1..=n_max).collect(),
            NPolicy::Even { n_max } => (2..=n_max).step_by(2).collect(),
            NPolicy::PastTwiceGenus => (1..=2 * g + 2).collect(),
        }
    }
}

/// One `(g, n)` cell.
#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub report: MomentReport,
    /// `"exhaustive"` or `"sample"`.
    pub mode: &'static str,
    /// `3 log_q g < n`.
    pub above_log_threshold: bool,
    /// `n <= 2g`.
    pub within_twice_genus: bool,
    /// `n < 2g - C log_q g`.
    pub error_term_range: bool,
    pub roots_bound: f64,
    pub nongen_bound: f64,
}

/// Runs every genus exhaustively when `exhaustive_work` fits in `work_budget`, otherwise
/// on a sample of `sample_size` members drawn with `seed`.
#[allow(clippy::too_many_arguments)]
pub fn theorem_experiment(
    field: &FiniteField,
    genera: &[usize],
    policy: NPolicy,
    variant: Variant,
    c_const: f64,
    work_budget: f64,
    sample_size: usize,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    let q = field.order();
    let mut rows = Vec::new();
    for &g in genera {
        let ns = policy.values(g);
        let Some(&n_max) = ns.iter().max() else { continue };
        let (reports, mode) = if exhaustive_work(q, g, n_max) <= work_budget {
            let fm = FamilyMoments::new(field, g, n_max)?;
            (ns.iter().map(|&n| fm.report(n, variant)).collect::<Result<Vec<_>>>()?, "exhaustive")
        } else {
            let size = family_size(field, g, variant)?.count;
            let all = sampled_reports(field, g, n_max, variant, sample_size, seed, size)?;
            (ns.iter().map(|&n| all[n - 1].clone()).collect(), "sample")
        };
        let log_g = if g > 0 { (g as f64).ln() / (q as f64).ln() } else { f64::NEG_INFINITY };
        for report in reports {
            let n = report.n;
            let nf = n as f64;
            rows.push(ExperimentRow {
                mode,
                above_log_threshold: 3.0 * log_g < nf,
                within_twice_genus: n <= 2 * g,
                error_term_range: nf < 2.0 * g as f64 - c_const * log_g,
                roots_bound: 3.0 * (g + 3) as f64 / (q as f64).powf(nf / 2.0),
                nongen_bound: 3.0 * (q as f64).powf(-nf / 6.0),
                report,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_rows_vanish_and_large_n_reference_is_zero() {
        let f3 = FiniteField::prime(3).unwrap();
        let rows = theorem_experiment(&f3, &[1, 2], NPolicy::PastTwiceGenus, Variant::Full, 5.0, 1e9, 10, 1).unwrap();
        for r in &rows {
            assert_eq!(r.mode, "exhaustive");
            if r.report.n % 2 == 1 {
                assert_eq!(r.report.gap, 0.0);
            }
            if r.report.n > 2 * r.report.g {
                assert_eq!(r.report.reference, 0.0);
            }
        }
        let sampled =
            theorem_experiment(&f3, &[2], NPolicy::Even { n_max: 2 }, Variant::Full, 5.0, 0.0, 20, 3).unwrap();
        assert_eq!(sampled[0].mode, "sample");
        assert!(sampled[0].report.std_error.is_some());
    }
}
