//! One-level density of eigenphases, through the trace expansion and directly from
//! eigenphases via the periodized test function.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::biquad::{zeta_numerator, Variant};
use crate::error::{Error, Result};
use crate::ffpoly::FiniteField;
use crate::lfunc::roots::reciprocal_roots;
use crate::moments::{matrix_integral_reference, sample_family, FamilyMoments, MatrixGroup, Mode};

/// Test function given through its Fourier transform `f^`, even with support in `(-alpha, alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Kernel {
    /// `f^(x) = max(0, 1 - |x| / alpha)`, so `f(y) = alpha (sin(pi alpha y) / (pi alpha y))^2`.
    Fejer { alpha: f64 },
    /// `values[n] = f^(n / 2g)` for `n = 0, 1, ...`; later grid points are zero.
    Sampled { alpha: f64, values: Vec<f64> },
}

impl Kernel {
    pub fn alpha(&self) -> f64 {
        match self {
            Kernel::Fejer { alpha } | Kernel::Sampled { alpha, .. } => *alpha,
        }
    }

    /// `f^(n / 2g)`.
    pub fn fhat(&self, n: usize, g: usize) -> f64 {
        match self {
            Kernel::Fejer { alpha } => {
                let x = n as f64 / (2 * g) as f64;
                (1.0 - x / alpha).max(0.0)
            }
            Kernel::Sampled { values, .. } => values.get(n).copied().unwrap_or(0.0),
        }
    }

    /// Number of grid points `1 <= n < 2 alpha g`.
    pub fn terms(&self, g: usize) -> usize {
        let bound = 2.0 * self.alpha() * g as f64;
        let mut n = bound.ceil() as usize;
        if n as f64 >= bound && n > 0 {
            n -= 1;
        }
        match self {
            Kernel::Sampled { values, .. } => n.min(values.len().saturating_sub(1)),
            Kernel::Fejer { .. } => n,
        }
    }

    fn validate(&self, g: usize) -> Result<()> {
        if g == 0 {
            return Err(Error::InvalidArgument("the density needs genus at least 1".into()));
        }
        let a = self.alpha();
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {a}")));
        }
        Ok(())
    }
}

/// `f^(0) + (1/g) sum_{1 <= n < 2 alpha g} f^(n/2g) traces[n-1]`.
pub fn trace_density(kernel: &Kernel, g: usize, traces: &[f64]) -> f64 {
    let mut sum = 0.0;
    for n in 1..=kernel.terms(g) {
        let w = kernel.fhat(n, g);
        if w != 0.0 {
            sum += w * traces[n - 1];
        }
    }
    kernel.fhat(0, g) + sum / g as f64
}

/// The Fejer test function `f(y)`.
pub fn fejer_f(alpha: f64, y: f64) -> f64 {
    let t = PI * alpha * y;
    if t.abs() < 1e-8 {
        alpha
    } else {
        alpha * (t.sin() / t).powi(2)
    }
}

/// `F(theta) = sum_{m in Z} f(2g (theta / 2 pi - m))` for the Fejer kernel.
///
/// The sum runs over `|m| <= K`; the remainder is replaced by its mean-value estimate,
/// which is accurate to `O(1/K^2)`.
pub fn periodized_fejer(alpha: f64, g: usize, theta: f64) -> f64 {
    const K: i64 = 20_000;
    let x = theta / (2.0 * PI);
    let scale = 2.0 * g as f64;
    let mut sum = 0.0;
    for m in -K..=K {
        sum += fejer_f(alpha, scale * (x - m as f64));
    }
    // tail: sin^2(pi alpha y) / (pi^2 alpha y^2) with y = 2g (x - m)
    let beta = alpha * scale;
    let mean_sin2 = if (beta - beta.round()).abs() < 1e-12 { (PI * beta * x).sin().powi(2) } else { 0.5 };
    let k = K as f64 + 0.5;
    let tail = mean_sin2 / (PI * PI * alpha * scale * scale) * (1.0 / (k - x) + 1.0 / (k + x));
    sum + tail
}

/// `sum_j F(theta_j)` for the Fejer kernel.
pub fn eigenphase_density(alpha: f64, g: usize, phases: &[f64]) -> f64 {
    phases.iter().map(|&t| periodized_fejer(alpha, g, t)).sum()
}

/// Family and reference values of the one-level density.
#[derive(Clone, Debug)]
pub struct DensityReport {
    pub q: u32,
    pub g: usize,
    pub alpha: f64,
    pub variant: Variant,
    pub terms: usize,
    pub family_value: f64,
    pub reference_value: f64,
    /// `alpha > 1`: the expansion uses traces beyond `n = 2g`.
    pub alpha_warning: bool,
    /// Curves checked with both the eigenphase and the trace computation (Fejer only).
    pub curves_checked: usize,
    pub max_path_discrepancy: Option<f64>,
}

/// Eigenphases `theta_j` of a curve, from the reciprocal roots of `P_C`.
fn eigenphases(p_c: &[i128]) -> Result<Vec<f64>> {
    Ok(reciprocal_roots(p_c)?.iter().map(|r| r.arg()).collect())
}

/// Both density paths for one curve: `(eigenphase value, trace value)`.
pub fn curve_density_paths(alpha: f64, t: &crate::biquad::CurveTriple) -> Result<(f64, f64)> {
    let g = t.genus;
    let kernel = Kernel::Fejer { alpha };
    kernel.validate(g)?;
    let data = zeta_numerator(t, kernel.terms(g).max(1))?;
    let p_c = data.p_c.as_deref().unwrap_or(&[1]);
    let phases = eigenphases(p_c)?;
    let q = data.q as f64;
    let traces: Vec<f64> = data.t.iter().enumerate().map(|(i, &tn)| tn as f64 / q.powf((i + 1) as f64 / 2.0)).collect();
    Ok((eigenphase_density(alpha, g, &phases), trace_density(&kernel, g, &traces)))
}

/// Averages the density over the family (or a sample) and compares with `USp(2g)^3`.
/// For the Fejer kernel, `check_curves` members are also evaluated through their
/// eigenphases.
pub fn one_level_density(
    field: &FiniteField,
    g: usize,
    kernel: &Kernel,
    variant: Variant,
    mode: Mode,
    check_curves: usize,
) -> Result<DensityReport> {
    kernel.validate(g)?;
    let terms = kernel.terms(g);
    let n_max = terms.max(1);
    let reports = crate::moments::average_trace(field, g, n_max, variant, mode)?;
    let traces: Vec<f64> = reports.iter().map(|r| r.avg_trace).collect();
    let family_value = trace_density(kernel, g, &traces);
    let reference: Vec<f64> =
        (1..=n_max).map(|n| matrix_integral_reference(MatrixGroup::USpCubed, g, n) as f64).collect();
    let reference_value = trace_density(kernel, g, &reference);

    let (curves_checked, max_path_discrepancy) = match kernel {
        Kernel::Fejer { alpha } if check_curves > 0 => {
            let curves = match mode {
                Mode::Exhaustive => {
                    let fm = FamilyMoments::new(field, g, 1)?;
                    fm.members().iter().take(check_curves).cloned().collect::<Vec<_>>()
                }
                Mode::Sample { seed, .. } => sample_family(field, g, Variant::Monic, check_curves, seed)?,
            };
            let gaps: Vec<f64> = curves
                .par_iter()
                .map(|t| curve_density_paths(*alpha, t).map(|(a, b)| (a - b).abs()))
                .collect::<Result<_>>()?;
            (gaps.len(), Some(gaps.into_iter().fold(0.0, f64::max)))
        }
        _ => (0, None),
    };
    Ok(DensityReport {
        q: field.order(),
        g,
        alpha: kernel.alpha(),
        variant,
        terms,
        family_value,
        reference_value,
        alpha_warning: kernel.alpha() > 1.0,
        curves_checked,
        max_path_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biquad::CurveTriple;
    use crate::ffpoly::Poly;

    #[test]
    fn worked_curve_paths_agree() {
        let f3 = FiniteField::prime(3).unwrap();
        let t = CurveTriple::new(
            Poly::from_ints(&f3, &[1, 0, 1]),
            Poly::from_ints(&f3, &[2, 1, 1]),
            Poly::one(&f3),
            Variant::Monic,
        )
        .unwrap();
        for alpha in [0.25, 0.75, 1.0, 1.5] {
            let (eig, tr) = curve_density_paths(alpha, &t).unwrap();
            assert!((eig - tr).abs() < 1e-6, "alpha={alpha}: {eig} vs {tr}");
        }
    }

    #[test]
    fn zero_only_kernel_is_exact() {
        let f3 = FiniteField::prime(3).unwrap();
        let k = Kernel::Sampled { alpha: 0.5, values: vec![0.8125] };
        let rep = one_level_density(&f3, 1, &k, Variant::Full, Mode::Exhaustive, 0).unwrap();
        assert_eq!(rep.family_value, 0.8125);
        assert_eq!(rep.reference_value, 0.8125);
    }

    #[test]
    fn fejer_reference_value() {
        let f3 = FiniteField::prime(3).unwrap();
        let k = Kernel::Fejer { alpha: 0.25 };
        let g = 3;
        let rep = one_level_density(&f3, g, &k, Variant::Full, Mode::Exhaustive, 4).unwrap();
        // 2 alpha g = 1.5: only n = 1 contributes, and it is odd
        assert_eq!(rep.terms, 1);
        assert_eq!(rep.reference_value, 1.0);
        assert!(rep.max_path_discrepancy.unwrap() < 1e-6);
        assert!(!rep.alpha_warning);
    }

    #[test]
    fn genus_zero_rejected() {
        let f3 = FiniteField::prime(3).unwrap();
        assert!(one_level_density(&f3, 0, &Kernel::Fejer { alpha: 0.5 }, Variant::Monic, Mode::Exhaustive, 0).is_err());
    }
}
