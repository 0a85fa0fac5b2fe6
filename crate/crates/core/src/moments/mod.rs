//! Family statistics: averages of Frobenius traces and their error decomposition,
//! fixed-prime character sums, random matrix reference values, and the one-level density.

mod average;
mod density;
mod experiment;
mod fixed_prime;

pub use average::{
    average_trace, exhaustive_work, sample_family, sampled_reports, Decomposition, FamilyMoments, Mode, MomentReport,
};
pub use density::{
    curve_density_paths, eigenphase_density, fejer_f, one_level_density, periodized_fejer, trace_density,
    DensityReport, Kernel,
};
pub use experiment::{theorem_experiment, ExperimentRow, NPolicy};
pub use fixed_prime::{
    c_constants, double_char_sum, excluded_correction, fixed_prime_family_sum, fixed_prime_report, lemma61_rows,
    nkk_all, nkk_sum, CConstants, FixedPrimeReport, Lemma61Row,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Compact groups whose trace moments serve as references.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixGroup {
    /// `USp(2g)`.
    USp,
    /// `USp(2g)^3`, acting block-diagonally.
    USpCubed,
    /// `U(2g)`.
    U,
}

impl MatrixGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixGroup::USp => "USp",
            MatrixGroup::USpCubed => "USp_cubed",
            MatrixGroup::U => "U",
        }
    }
}

impl fmt::Display for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "USp" | "usp" => Ok(MatrixGroup::USp),
            "USp_cubed" | "usp_cubed" | "USp3" => Ok(MatrixGroup::USpCubed),
            "U" | "u" => Ok(MatrixGroup::U),
            _ => Err(Error::InvalidArgument(format!("unknown group {s:?}"))),
        }
    }
}

/// `eta_n`: 1 for even `n`, 0 for odd `n`.
pub fn eta(n: usize) -> i64 {
    i64::from(n % 2 == 0)
}

/// `int Tr(U^n) dU` over the group (Haar measure), `n >= 1`:
/// `-eta_n` on `USp(2g)` and `-3 eta_n` on `USp(2g)^3` for `n <= 2g`, zero beyond, and
/// zero on `U(2g)`.
pub fn matrix_integral_reference(group: MatrixGroup, g: usize, n: usize) -> i64 {
    if n == 0 || n > 2 * g {
        return 0;
    }
    match group {
        MatrixGroup::USp => -eta(n),
        MatrixGroup::USpCubed => -3 * eta(n),
        MatrixGroup::U => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_table() {
        assert_eq!(matrix_integral_reference(MatrixGroup::USp, 3, 4), -1);
        assert_eq!(matrix_integral_reference(MatrixGroup::USpCubed, 3, 4), -3);
        assert_eq!(matrix_integral_reference(MatrixGroup::USp, 3, 8), 0);
        assert_eq!(matrix_integral_reference(MatrixGroup::USp, 3, 7), 0);
        assert_eq!(matrix_integral_reference(MatrixGroup::U, 3, 4), 0);
    }
}
