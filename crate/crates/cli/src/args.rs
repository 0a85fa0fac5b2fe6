//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffstat::eulerprod::FactorKind;
use ffstat::{Sign, Variant};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "ffstat", version, about = "Frobenius trace statistics of biquadratic curves over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Odd field size (a prime or a prime power).
    #[arg(long, global = true, default_value_t = 3)]
    pub q: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cache directory for prime lists and family enumerations (overrides FFSTAT_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on the estimated cost of exhaustive family runs.
    #[arg(long, global = true, default_value_t = 2_000_000_000)]
    pub work_budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sample,
    /// Exhaustive when within the work budget, sampled otherwise.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Fejer,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Plus,
    Minus,
    Zero,
    All,
}

impl KindArg {
    pub fn kinds(self) -> Vec<FactorKind> {
        match self {
            KindArg::Plus => vec![FactorKind::Plus],
            KindArg::Minus => vec![FactorKind::Minus],
            KindArg::Zero => vec![FactorKind::Zero],
            KindArg::All => FactorKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// L-polynomial of a quadratic character, its completion and Frobenius traces.
    ///
    /// Columns: modulus, sign, raw_coeffs, lambda, delta, lstar_coeffs, traces_t,
    /// rh_max_deviation. With --catalog-degree, a summary of every square-free modulus.
    Lfunc {
        /// Square-free monic modulus, "X^2+1" or "1,0,1".
        #[arg(long, required_unless_present = "catalog_degree")]
        modulus: Option<String>,
        #[arg(long, default_value = "plus")]
        sign: Sign,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long)]
        check_rh: bool,
        /// Verify all square-free moduli up to this degree instead.
        #[arg(long, conflicts_with = "modulus")]
        catalog_degree: Option<usize>,
    },
    /// Members of the curve family of a given genus.
    ///
    /// Columns: index, f1, f2, f3, deg_f1, deg_f2, deg_f3; with --count: q, g, variant,
    /// count, ratio.
    Family {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value = "monic")]
        variant: Variant,
        #[arg(long)]
        count: bool,
    },
    /// Point counts, traces and zeta numerator of one curve.
    ///
    /// Columns: q, f1, f2, f3, genus, N, T, P_C.
    Curve {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long, default_value = "1")]
        f3: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Family averages of T_n, their decomposition for even n, and diagnostics.
    ///
    /// Columns: q, g, n, family_size, avg_T_num, avg_T_den, avg_trace, reference, gap,
    /// roots_term, bilinear_term, roots_bound, nongen_bound, infinity_term, std_error,
    /// mode, curves, above_log_threshold, within_twice_genus, error_term_range.
    Moments {
        /// One genus or a comma-separated list.
        #[arg(long, value_delimiter = ',', required = true)]
        genus: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value = "full")]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        sample_size: usize,
        /// Constant C of the "n < 2g - C log_q g" label.
        #[arg(long, default_value_t = 5.0)]
        c_const: f64,
    },
    /// One-level density of the family against the matrix reference.
    ///
    /// Columns: q, g, alpha, kernel, variant, terms, family_value, reference_value,
    /// alpha_warning, curves_checked, max_path_discrepancy.
    Density {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = KernelArg::Fejer)]
        kernel: KernelArg,
        /// Values f^(n/2g), n = 0, 1, ..., comma-separated (sampled kernel).
        #[arg(long, value_delimiter = ',')]
        fhat: Vec<f64>,
        #[arg(long, default_value = "full")]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        sample_size: usize,
        /// Members also evaluated through their eigenphases (Fejer kernel).
        #[arg(long, default_value_t = 8)]
        check_curves: usize,
    },
    /// Parity-class sums N_{k1,k2}(d;P) against their predicted main terms.
    ///
    /// Columns: q, prime, M, d, k1, k2, exact, predicted, normalized_gap.
    Lemma61 {
        #[arg(long)]
        prime: String,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
        /// Euler-product truncation degree.
        #[arg(long = "M", visible_alias = "m", default_value_t = 10)]
        m: usize,
    },
    /// Sums of truncated Euler products over the primes of degree n.
    ///
    /// Columns: q, n, M, kind, sum_num, sum_den, reference_num, reference_den, scaled_gap,
    /// sum_float, abs_gap, envelope.
    Eulersum {
        #[arg(long)]
        n: usize,
        #[arg(long = "M", visible_alias = "m")]
        m: usize,
        #[arg(long, value_enum, default_value_t = KindArg::All)]
        kind: KindArg,
        /// Floating-point products only (no exact sum).
        #[arg(long)]
        float: bool,
    },
    /// Monic irreducible polynomials up to a degree.
    ///
    /// Columns: degree, prime; with --count: degree, count, necklace.
    Primes {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        count: bool,
    },
}
