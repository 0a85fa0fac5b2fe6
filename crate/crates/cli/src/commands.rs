//! One function per subcommand, each producing a [`Table`].

use std::path::PathBuf;

use ffstat::biquad::{enumerate_family, family_size, zeta_numerator};
use ffstat::eulerprod::prime_sum;
use ffstat::ffpoly::{is_irreducible, parse_poly, prime_count, primes_of_degree};
use ffstat::lfunc::{complete_l, frobenius_traces, l_polynomial, rh_max_deviation, verify_catalog};
use ffstat::moments::{exhaustive_work, lemma61_rows, one_level_density, theorem_experiment, Kernel, Mode, NPolicy};
use ffstat::{CurveTriple, FiniteField, Poly, QuadChar, Sign, Variant};
use num_traits::ToPrimitive;

use crate::args::{Command, Global, KernelArg, ModeArg};
use crate::cache::{Cache, CacheKey, Record};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

const MAX_GENUS: usize = 12;
const MAX_N: usize = 40;
const MAX_M: usize = 60;
const MAX_DEGREE: usize = 16;

pub struct Context {
    pub field: FiniteField,
    pub cache: Option<Cache>,
    pub seed: u64,
    pub work_budget: f64,
}

/// `q = p^e` with `p` an odd prime.
fn field_of(q: u32) -> CliResult<FiniteField> {
    if q < 3 || q % 2 == 0 {
        return Err(CliError::config("q", format!("{q} must be odd and at least 3")));
    }
    let p = (3..=q).step_by(2).find(|d| q % d == 0).unwrap_or(q);
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 {
        return Err(CliError::config("q", format!("{q} is not a prime power")));
    }
    FiniteField::prime_power(p, e).map_err(|err| CliError::config("q", err))
}

impl Context {
    pub fn new(global: &Global, cache_dir: Option<PathBuf>) -> CliResult<Self> {
        Ok(Self {
            field: field_of(global.q)?,
            cache: cache_dir.map(Cache::new),
            seed: global.seed,
            work_budget: global.work_budget as f64,
        })
    }

    fn q(&self) -> u32 {
        self.field.order()
    }

    fn poly(&self, flag: &str, text: &str) -> CliResult<Poly> {
        parse_poly(&self.field, text).map_err(|e| CliError::config(flag, e))
    }
}

fn check_range(flag: &str, v: usize, lo: usize, hi: usize) -> CliResult<()> {
    if v < lo || v > hi {
        return Err(CliError::config(flag, format!("{v} is outside {lo}..={hi}")));
    }
    Ok(())
}

fn mode_of(ctx: &Context, mode: ModeArg, sample_size: usize) -> CliResult<Option<Mode>> {
    if mode != ModeArg::Exhaustive && sample_size == 0 {
        return Err(CliError::config("sample-size", "must be positive"));
    }
    Ok(match mode {
        ModeArg::Exhaustive => Some(Mode::Exhaustive),
        ModeArg::Sample => Some(Mode::Sample { size: sample_size, seed: ctx.seed }),
        ModeArg::Auto => None,
    })
}

fn budget_error(q: u32, g: usize, work: f64, budget: f64) -> CliError {
    CliError::config(
        "work-budget",
        format!("exhaustive run for q={q}, g={g} needs about {work:.3e} > {budget:.3e}; raise it or use --mode sample"),
    )
}

pub fn run(ctx: &Context, command: &Command) -> CliResult<Table> {
    match command {
        Command::Lfunc { modulus, sign, n_max, check_rh, catalog_degree } => match catalog_degree {
            Some(d) => catalog(ctx, *d, *n_max),
            None => lfunc(ctx, modulus.as_deref().unwrap_or_default(), *sign, *n_max, *check_rh),
        },
        Command::Family { genus, variant, count } => family(ctx, *genus, *variant, *count),
        Command::Curve { f1, f2, f3, n_max } => curve(ctx, f1, f2, f3, *n_max),
        Command::Moments { genus, n_max, variant, mode, sample_size, c_const } => {
            moments(ctx, genus, *n_max, *variant, *mode, *sample_size, *c_const)
        }
        Command::Density { genus, alpha, kernel, fhat, variant, mode, sample_size, check_curves } => {
            density(ctx, *genus, *alpha, *kernel, fhat, *variant, *mode, *sample_size, *check_curves)
        }
        Command::Lemma61 { prime, d_max, m } => lemma61(ctx, prime, *d_max, *m),
        Command::Eulersum { n, m, kind, float } => eulersum(ctx, *n, *m, &kind.kinds(), *float),
        Command::Primes { degree, count } => primes(ctx, *degree, *count),
    }
}

fn lfunc(ctx: &Context, modulus: &str, sign: Sign, n_max: usize, check_rh: bool) -> CliResult<Table> {
    check_range("n-max", n_max, 1, MAX_N)?;
    let m = ctx.poly("modulus", modulus)?;
    let chi = QuadChar::new(&m, sign).map_err(|e| CliError::config("modulus", e))?;
    let raw = l_polynomial(&chi)?;
    let lstar = complete_l(&raw)?;
    let traces = frobenius_traces(&lstar, n_max)?;
    let rh = if check_rh { Some(rh_max_deviation(lstar.coeffs(), ctx.q())?) } else { None };
    Ok(Table::single(
        &["modulus", "sign", "raw_coeffs", "lambda", "delta", "lstar_coeffs", "traces_t", "rh_max_deviation"],
        vec![
            m.to_string().into(),
            sign.as_str().into(),
            Cell::Ints(raw.coeffs().to_vec()),
            (lstar.lambda() as usize).into(),
            lstar.delta().into(),
            Cell::Ints(lstar.coeffs().to_vec()),
            Cell::Ints((1..=n_max).map(|n| traces.t(n)).collect()),
            rh.into(),
        ],
    ))
}

fn catalog(ctx: &Context, max_deg: usize, n_max: usize) -> CliResult<Table> {
    check_range("catalog-degree", max_deg, 1, 8)?;
    check_range("n-max", n_max, 1, MAX_N)?;
    let rep = verify_catalog(&ctx.field, max_deg, n_max, 1e-9)?;
    let failures = rep.completion_failures.len()
        + rep.degree_failures.len()
        + rep.functional_equation_failures.len()
        + rep.rh_failures.len()
        + rep.explicit_formula_failures.len()
        + rep.vanishing_failures.len();
    for f in rep
        .completion_failures
        .iter()
        .chain(&rep.degree_failures)
        .chain(&rep.functional_equation_failures)
        .chain(&rep.rh_failures)
        .chain(&rep.explicit_formula_failures)
        .chain(&rep.vanishing_failures)
    {
        log::warn!("catalog failure: {f}");
    }
    Ok(Table::single(
        &["q", "max_degree", "n_max", "characters", "max_rh_deviation", "failures", "clean"],
        vec![
            ctx.q().into(),
            max_deg.into(),
            n_max.into(),
            rep.characters.into(),
            rep.max_rh_deviation.into(),
            failures.into(),
            rep.is_clean().into(),
        ],
    ))
}

fn record_of(polys: &[Poly]) -> Record {
    polys.iter().map(|p| p.coeffs().to_vec()).collect()
}

fn poly_of(field: &FiniteField, coeffs: &[u32]) -> CliResult<Poly> {
    Ok(Poly::from_coeffs(field, coeffs.to_vec())?)
}

/// Family members, through the cache when one is configured.
fn family_members(ctx: &Context, g: usize, variant: Variant) -> CliResult<Vec<CurveTriple>> {
    let build = || enumerate_family(&ctx.field, g, variant);
    let Some(cache) = &ctx.cache else { return Ok(build()?) };
    let key = CacheKey { kind: "family", q: ctx.q(), param: g, variant: Some(variant.as_str().to_string()) };
    let (entry, _) = cache.get_or_build(&key, || {
        Ok(build()?.iter().map(|t| record_of(&[t.f1.clone(), t.f2.clone(), t.f3.clone()])).collect())
    })?;
    entry
        .payload
        .iter()
        .map(|r| {
            if r.len() != 3 {
                return Err(CliError::Core(ffstat::Error::Consistency("cached triple has wrong length".into())));
            }
            let f = |i: usize| poly_of(&ctx.field, &r[i]);
            Ok(CurveTriple::new(f(0)?, f(1)?, f(2)?, variant)?)
        })
        .collect()
}

fn family(ctx: &Context, g: usize, variant: Variant, count: bool) -> CliResult<Table> {
    check_range("genus", g, 0, MAX_GENUS)?;
    if count {
        let size = family_size(&ctx.field, g, variant)?;
        return Ok(Table::single(
            &["q", "g", "variant", "count", "ratio"],
            vec![ctx.q().into(), g.into(), variant.as_str().into(), size.count.into(), size.ratio.into()],
        ));
    }
    let mut t = Table::new(&["index", "f1", "f2", "f3", "deg_f1", "deg_f2", "deg_f3"]);
    for (i, m) in family_members(ctx, g, variant)?.iter().enumerate() {
        let d = |p: &Poly| p.degree().unwrap_or(0);
        t.push(vec![
            i.into(),
            m.f1.to_string().into(),
            m.f2.to_string().into(),
            m.f3.to_string().into(),
            d(&m.f1).into(),
            d(&m.f2).into(),
            d(&m.f3).into(),
        ]);
    }
    Ok(t)
}

fn curve(ctx: &Context, f1: &str, f2: &str, f3: &str, n_max: usize) -> CliResult<Table> {
    check_range("n-max", n_max, 1, MAX_N)?;
    let (p1, p2, p3) = (ctx.poly("f1", f1)?, ctx.poly("f2", f2)?, ctx.poly("f3", f3)?);
    let variant = if p1.is_monic() && p2.is_monic() { Variant::Monic } else { Variant::Full };
    let t = CurveTriple::new(p1, p2, p3, variant).map_err(|e| CliError::config("f1", e))?;
    let data = zeta_numerator(&t, n_max)?;
    Ok(Table::single(
        &["q", "f1", "f2", "f3", "genus", "N", "T", "P_C"],
        vec![
            ctx.q().into(),
            t.f1.to_string().into(),
            t.f2.to_string().into(),
            t.f3.to_string().into(),
            data.genus.into(),
            Cell::Ints(data.n[..n_max].to_vec()),
            Cell::Ints(data.t[..n_max].to_vec()),
            data.p_c.map_or(Cell::Empty, Cell::Ints),
        ],
    ))
}

fn moments(
    ctx: &Context,
    genera: &[usize],
    n_max: usize,
    variant: Variant,
    mode: ModeArg,
    sample_size: usize,
    c_const: f64,
) -> CliResult<Table> {
    check_range("n-max", n_max, 1, MAX_N)?;
    for &g in genera {
        check_range("genus", g, 0, MAX_GENUS)?;
    }
    if !c_const.is_finite() {
        return Err(CliError::config("c-const", "must be finite"));
    }
    let budget = match mode_of(ctx, mode, sample_size)? {
        Some(Mode::Exhaustive) => {
            for &g in genera {
                let work = exhaustive_work(ctx.q(), g, n_max);
                if work > ctx.work_budget {
                    return Err(budget_error(ctx.q(), g, work, ctx.work_budget));
                }
            }
            f64::INFINITY
        }
        Some(Mode::Sample { .. }) => -1.0,
        None => ctx.work_budget,
    };
    let rows = theorem_experiment(
        &ctx.field,
        genera,
        NPolicy::All { n_max },
        variant,
        c_const,
        budget,
        sample_size,
        ctx.seed,
    )?;
    let mut t = Table::new(&[
        "q",
        "g",
        "n",
        "family_size",
        "avg_T_num",
        "avg_T_den",
        "avg_trace",
        "reference",
        "gap",
        "roots_term",
        "bilinear_term",
        "roots_bound",
        "nongen_bound",
        "infinity_term",
        "std_error",
        "mode",
        "curves",
        "above_log_threshold",
        "within_twice_genus",
        "error_term_range",
    ]);
    for row in rows {
        let r = &row.report;
        let dec = r.decomposition.as_ref();
        t.push(vec![
            r.q.into(),
            r.g.into(),
            r.n.into(),
            r.family_size.into(),
            r.avg_t.numer().to_string().into(),
            r.avg_t.denom().to_string().into(),
            r.avg_trace.into(),
            r.reference.into(),
            r.gap.into(),
            dec.map(|d| d.roots_term.clone()).into(),
            dec.map(|d| d.bilinear_term.clone()).into(),
            row.roots_bound.into(),
            row.nongen_bound.into(),
            dec.map(|d| d.infinity_term.clone()).into(),
            r.std_error.into(),
            row.mode.into(),
            r.curves.into(),
            row.above_log_threshold.into(),
            row.within_twice_genus.into(),
            row.error_term_range.into(),
        ]);
    }
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
fn density(
    ctx: &Context,
    g: usize,
    alpha: f64,
    kernel: KernelArg,
    fhat: &[f64],
    variant: Variant,
    mode: ModeArg,
    sample_size: usize,
    check_curves: usize,
) -> CliResult<Table> {
    check_range("genus", g, 1, MAX_GENUS)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::config("alpha", format!("{alpha} must be positive")));
    }
    let k = match kernel {
        KernelArg::Fejer => Kernel::Fejer { alpha },
        KernelArg::Sampled if fhat.is_empty() => {
            return Err(CliError::config("fhat", "the sampled kernel needs at least f^(0)"))
        }
        KernelArg::Sampled => Kernel::Sampled { alpha, values: fhat.to_vec() },
    };
    let n_max = k.terms(g).max(1);
    let mode = match mode_of(ctx, mode, sample_size)? {
        Some(m) => m,
        None if exhaustive_work(ctx.q(), g, n_max) <= ctx.work_budget => Mode::Exhaustive,
        None => Mode::Sample { size: sample_size, seed: ctx.seed },
    };
    if mode == Mode::Exhaustive {
        let work = exhaustive_work(ctx.q(), g, n_max);
        if work > ctx.work_budget {
            return Err(budget_error(ctx.q(), g, work, ctx.work_budget));
        }
    }
    let rep = one_level_density(&ctx.field, g, &k, variant, mode, check_curves)?;
    if rep.alpha_warning {
        log::warn!("alpha = {alpha} > 1: the expansion uses traces beyond n = 2g");
    }
    Ok(Table::single(
        &[
            "q",
            "g",
            "alpha",
            "kernel",
            "variant",
            "terms",
            "family_value",
            "reference_value",
            "alpha_warning",
            "curves_checked",
            "max_path_discrepancy",
        ],
        vec![
            rep.q.into(),
            rep.g.into(),
            rep.alpha.into(),
            match kernel {
                KernelArg::Fejer => "fejer",
                KernelArg::Sampled => "sampled",
            }
            .into(),
            rep.variant.as_str().into(),
            rep.terms.into(),
            rep.family_value.into(),
            rep.reference_value.into(),
            rep.alpha_warning.into(),
            rep.curves_checked.into(),
            rep.max_path_discrepancy.into(),
        ],
    ))
}

fn monic_prime(ctx: &Context, flag: &str, text: &str) -> CliResult<Poly> {
    let p = ctx.poly(flag, text)?;
    if p.is_constant() || !p.is_monic() || !is_irreducible(&p)? {
        return Err(CliError::config(flag, format!("{p} is not a monic irreducible polynomial")));
    }
    Ok(p)
}

fn lemma61(ctx: &Context, prime: &str, d_max: usize, m: usize) -> CliResult<Table> {
    check_range("d-max", d_max, 0, MAX_DEGREE)?;
    check_range("M", m, 1, MAX_M)?;
    let p = monic_prime(ctx, "prime", prime)?;
    let mut t = Table::new(&["q", "prime", "M", "d", "k1", "k2", "exact", "predicted", "normalized_gap"]);
    for r in lemma61_rows(&ctx.field, &p, d_max, m)? {
        t.push(vec![
            ctx.q().into(),
            p.to_string().into(),
            m.into(),
            r.d.into(),
            r.k1.into(),
            r.k2.into(),
            r.exact.into(),
            r.predicted.into(),
            r.normalized_gap.into(),
        ]);
    }
    Ok(t)
}

fn eulersum(
    ctx: &Context,
    n: usize,
    m: usize,
    kinds: &[ffstat::eulerprod::FactorKind],
    float: bool,
) -> CliResult<Table> {
    check_range("n", n, 1, MAX_DEGREE)?;
    check_range("M", m, 1, MAX_M)?;
    let mut t = Table::new(&[
        "q",
        "n",
        "M",
        "kind",
        "sum_num",
        "sum_den",
        "reference_num",
        "reference_den",
        "scaled_gap",
        "sum_float",
        "abs_gap",
        "envelope",
    ]);
    for &kind in kinds {
        let r = prime_sum(kind, &ctx.field, n, m, !float)?;
        let reference = r.reference.to_f64().unwrap_or(f64::NAN);
        t.push(vec![
            r.q.into(),
            r.n.into(),
            r.m.into(),
            kind.as_str().into(),
            r.sum.as_ref().map(|s| s.numer().to_string()).into(),
            r.sum.as_ref().map(|s| s.denom().to_string()).into(),
            r.reference.numer().to_string().into(),
            r.reference.denom().to_string().into(),
            r.scaled_gap.into(),
            r.sum_f64.into(),
            (r.sum_f64 - reference).abs().into(),
            r.error_scales[1].into(),
        ]);
    }
    Ok(t)
}

fn primes(ctx: &Context, max_deg: usize, count: bool) -> CliResult<Table> {
    check_range("degree", max_deg, 1, MAX_DEGREE)?;
    if count {
        let mut t = Table::new(&["degree", "count", "necklace"]);
        for d in 1..=max_deg {
            let listed = primes_of_degree(&ctx.field, d)?.len();
            t.push(vec![d.into(), listed.into(), prime_count(ctx.q() as u64, d)?.into()]);
        }
        return Ok(t);
    }
    let build = || -> CliResult<Vec<Poly>> {
        let mut all = Vec::new();
        for d in 1..=max_deg {
            all.extend(primes_of_degree(&ctx.field, d)?.iter().cloned());
        }
        Ok(all)
    };
    let list = match &ctx.cache {
        None => build()?,
        Some(cache) => {
            let key = CacheKey { kind: "primes", q: ctx.q(), param: max_deg, variant: None };
            let (entry, _) = cache
                .get_or_build(&key, || Ok(build()?.iter().map(|p| record_of(std::slice::from_ref(p))).collect()))?;
            entry
                .payload
                .iter()
                .map(|r| match r.as_slice() {
                    [c] => poly_of(&ctx.field, c),
                    _ => Err(CliError::Core(ffstat::Error::Consistency("cached prime has wrong length".into()))),
                })
                .collect::<CliResult<_>>()?
        }
    };
    let mut t = Table::new(&["degree", "prime"]);
    for p in list {
        t.push(vec![p.degree().unwrap_or(0).into(), p.to_string().into()]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_sizes() {
        assert_eq!(field_of(9).unwrap().order(), 9);
        assert_eq!(field_of(5).unwrap().order(), 5);
        for bad in [1, 2, 4, 15, 21] {
            assert!(matches!(field_of(bad), Err(CliError::Config(_))), "q={bad}");
        }
    }
}
