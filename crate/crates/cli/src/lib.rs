//! Command-line front end for `quasistatic-core`: bath files, CSV tables and
//! the five subcommands behind the `quasistatic` binary.

pub mod args;
pub mod bath_file;
pub mod error;
pub mod output;

use std::io::Write;

use quasistatic_core::bath::sample_bath;
use quasistatic_core::sequences::binary_label;
use quasistatic_core::spectrum::{coarse_grain_spectrum, fit_histogram, moment_sigma};
use quasistatic_core::{
    BathRealization, ExactEngine, FieldRegime, GaussianEnvironment, MeasurementModel, MeasurementSequence, Outcome,
};

use args::{
    AdaptiveArgs, BathGenArgs, Cli, CoherenceArgs, Command, EngineArgs, EngineKind, FieldArgs, FieldKind, ProbsArgs,
    SpectrumArgs,
};
use bath_file::{read_bath, write_bath};
use error::CliError;
use output::{num, Table};

/// Largest n for which `probs` lists every label.
pub const MAX_TABLE_N: u32 = 20;

/// Largest number of time points `coherence` will evaluate.
pub const MAX_TIME_POINTS: usize = 1_000_000;

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::BathGen(a) => bath_gen(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Probs(a) => probs(a),
        Command::Adaptive(a) => adaptive(a),
        Command::Coherence(a) => coherence(a),
    }
}

fn check_finite(flag: &str, x: f64) -> Result<(), CliError> {
    if !x.is_finite() {
        return Err(CliError::usage(flag, "must be a finite number"));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<(), CliError> {
    check_finite("--tau-us", tau)?;
    if tau < 0.0 {
        return Err(CliError::usage("--tau-us", "must be non-negative"));
    }
    Ok(())
}

fn regime(field: &FieldArgs) -> Result<FieldRegime, CliError> {
    let check = || {
        if !(field.b_tesla > 0.0 && field.b_tesla.is_finite()) {
            return Err(CliError::usage("--b-tesla", "must be a positive field"));
        }
        Ok(())
    };
    match field.field {
        FieldKind::Zero => Ok(FieldRegime::ZeroField),
        FieldKind::High => {
            check()?;
            Ok(FieldRegime::high_field(field.b_tesla)?)
        }
        FieldKind::HighExact => {
            check()?;
            Ok(FieldRegime::high_field_exact(field.b_tesla)?)
        }
    }
}

fn bath_gen(a: BathGenArgs) -> Result<(), CliError> {
    if a.n_spins == 0 {
        return Err(CliError::usage("--n-spins", "a bath needs at least one spin"));
    }
    check_finite("--r-min-nm", a.r_min_nm)?;
    check_finite("--r-max-nm", a.r_max_nm)?;
    if !(a.r_min_nm > 0.0) {
        return Err(CliError::usage("--r-min-nm", "must be positive"));
    }
    if !(a.r_max_nm > a.r_min_nm) {
        return Err(CliError::usage("--r-max-nm", "must exceed --r-min-nm"));
    }
    let bath = sample_bath(a.n_spins, a.r_min_nm, a.r_max_nm, a.seed)?;
    write_bath(&a.out, &bath)?;
    let zero = moment_sigma(&bath, FieldRegime::ZeroField)?;
    let high = bath.second_moment(FieldRegime::high_field(quasistatic_core::bath::DEFAULT_HIGH_FIELD_TESLA)?).sqrt();
    let mut out = std::io::stdout().lock();
    let report = format!(
        "n_spins={}\nsigma_zero_field_rad_per_us={}\nsigma_high_field_rad_per_us={}\n",
        bath.n_spins(),
        num(zero),
        num(high)
    );
    out.write_all(report.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

fn spectrum(a: SpectrumArgs) -> Result<(), CliError> {
    if a.bins < 2 {
        return Err(CliError::usage("--bins", "need at least two bins"));
    }
    let regime = regime(&a.field)?;
    let bath = read_bath(&a.bath)?;
    let sigma_moment = moment_sigma(&bath, regime)?;
    let dist = coarse_grain_spectrum(&bath, regime, a.bins)?;
    let sigma_fit = fit_histogram(&dist, sigma_moment)?;
    let mut table = Table::create(a.out.as_deref(), &["delta_omega_rad_per_us", "density"])?;
    for (c, d) in dist.bin_centers().into_iter().zip(dist.densities()) {
        table.row([num(c), num(*d)])?;
    }
    table.finish(&[
        format!("sigma_moment={}", num(sigma_moment)),
        format!("sigma_fit={}", num(sigma_fit)),
    ])
}

/// The engines selected by `--engine`, ready to evaluate.
struct Engines {
    exact: Option<ExactEngine>,
    gaussian: Option<GaussianEnvironment>,
}

fn engines(a: &EngineArgs) -> Result<Engines, CliError> {
    let kind = a.engine.unwrap_or(if a.bath.is_some() {
        EngineKind::Exact
    } else {
        EngineKind::Gaussian
    });
    let regime = regime(&a.field)?;
    let bath: Option<BathRealization> = a.bath.as_deref().map(read_bath).transpose()?;
    let wants_exact = kind != EngineKind::Gaussian;
    let wants_gaussian = kind != EngineKind::Exact;

    if let Some(s) = a.sigma {
        if !(s > 0.0 && s.is_finite()) {
            return Err(CliError::usage("--sigma", "must be positive and finite"));
        }
        if !wants_gaussian {
            return Err(CliError::usage("--sigma", "only used by the gaussian engine"));
        }
    }
    let exact = if wants_exact {
        let bath = bath
            .as_ref()
            .ok_or_else(|| CliError::usage("--bath", "required by the exact engine"))?;
        Some(ExactEngine::new(bath, regime, a.model)?)
    } else {
        None
    };
    let gaussian = if wants_gaussian {
        if a.model != MeasurementModel::Projective {
            return Err(CliError::usage("--model", "the gaussian engine handles projective measurements only"));
        }
        let sigma = match (a.sigma, &bath) {
            (Some(s), _) => s,
            (None, Some(b)) => moment_sigma(b, regime)?,
            (None, None) => return Err(CliError::usage("--sigma", "required by the gaussian engine without --bath")),
        };
        Some(GaussianEnvironment::new(sigma)?)
    } else {
        None
    };
    Ok(Engines { exact, gaussian })
}

fn probs(a: ProbsArgs) -> Result<(), CliError> {
    if a.n > MAX_TABLE_N {
        return Err(CliError::usage("--n", format!("at most {MAX_TABLE_N} for a full label table")));
    }
    for &tau in &a.tau_us {
        check_tau(tau)?;
    }
    let eng = engines(&a.engine)?;
    let n = a.n;
    let mut table = Table::create(
        a.out.as_deref(),
        &["engine", "tau_us", "n", "j", "binary_label", "k", "probability"],
    )?;
    for &tau in &a.tau_us {
        let mut columns: Vec<(&str, Vec<f64>)> = Vec::new();
        if let Some(e) = &eng.exact {
            columns.push(("exact", e.sequence_probability_table(n, tau)?));
        }
        if let Some(g) = &eng.gaussian {
            let per_k = (0..=n).map(|k| g.p_sequence_closed(n, k, tau)).collect::<Result<Vec<_>, _>>()?;
            columns.push(("gaussian", per_k));
        }
        for j in 0..(1u64 << n) {
            let k = j.count_ones();
            for (name, per_k) in &columns {
                table.row([
                    name.to_string(),
                    num(tau),
                    n.to_string(),
                    j.to_string(),
                    binary_label(j, n),
                    k.to_string(),
                    num(per_k[k as usize]),
                ])?;
            }
        }
    }
    table.finish(&[])
}

fn adaptive(a: AdaptiveArgs) -> Result<(), CliError> {
    if a.n_max == 0 {
        return Err(CliError::usage("--n-max", "must be at least 1"));
    }
    check_tau(a.tau_us)?;
    if a.tau_us == 0.0 {
        return Err(CliError::usage("--tau-us", "the all-(−x) record has probability zero at τ = 0"));
    }
    let eng = engines(&a.engine)?;
    let tau = a.tau_us;
    let both = eng.exact.is_some() && eng.gaussian.is_some();
    let header: &[&str] = if both {
        &["engine", "n", "ratio_m0", "ratio_all_minus"]
    } else {
        &["n", "ratio_m0", "ratio_all_minus"]
    };
    let exact = match &eng.exact {
        Some(e) => Some((
            e.adaptive_ratios(Outcome::Plus, a.n_max, tau)?,
            e.adaptive_ratios(Outcome::Minus, a.n_max, tau)?,
        )),
        None => None,
    };
    let mut table = Table::create(a.out.as_deref(), header)?;
    for n in 1..=a.n_max {
        let i = (n - 1) as usize;
        let mut rows: Vec<(&str, f64, f64)> = Vec::new();
        if let Some((plus, minus)) = &exact {
            rows.push(("exact", plus[i], minus[i]));
        }
        if let Some(g) = &eng.gaussian {
            rows.push(("gaussian", g.adaptive_ratio_m0(n, tau), g.adaptive_ratio_all_minus(n, tau)));
        }
        for (name, r0, r1) in rows {
            let mut fields = Vec::with_capacity(4);
            if both {
                fields.push(name.to_string());
            }
            fields.extend([n.to_string(), num(r0), num(r1)]);
            table.row(fields)?;
        }
    }
    table.finish(&[])
}

fn time_grid(a: &CoherenceArgs) -> Result<Vec<f64>, CliError> {
    check_finite("--t-start", a.t_start)?;
    check_finite("--t-stop", a.t_stop)?;
    check_finite("--t-step", a.t_step)?;
    if a.t_start < 0.0 {
        return Err(CliError::usage("--t-start", "must be non-negative"));
    }
    if a.t_stop < a.t_start {
        return Err(CliError::usage("--t-stop", "must not precede --t-start"));
    }
    if !(a.t_step > 0.0) {
        return Err(CliError::usage("--t-step", "must be positive"));
    }
    let steps = ((a.t_stop - a.t_start) / a.t_step + 1e-9).floor();
    if steps + 1.0 > MAX_TIME_POINTS as f64 {
        return Err(CliError::usage("--t-step", format!("grid exceeds {MAX_TIME_POINTS} points")));
    }
    Ok((0..=steps as usize).map(|i| a.t_start + i as f64 * a.t_step).collect())
}

fn coherence(a: CoherenceArgs) -> Result<(), CliError> {
    let (n, k) = match &a.seq {
        Some(s) => {
            let seq = MeasurementSequence::from_binary(s).map_err(|e| match e {
                quasistatic_core::Error::InvalidArgument { reason, .. } => CliError::usage("--seq", reason),
                other => other.into(),
            })?;
            (seq.n(), seq.path_length())
        }
        None => {
            if a.k > a.n {
                return Err(CliError::usage("--k", "cannot exceed --n"));
            }
            (a.n, a.k)
        }
    };
    check_tau(a.tau_us)?;
    let times = time_grid(&a)?;
    let eng = engines(&a.engine)?;
    let tau = a.tau_us;

    let exact = match &eng.exact {
        Some(e) => {
            let post = e.posterior(n, k, tau)?;
            if post.norm() == 0.0 {
                return Err(CliError::usage("--seq", "this record has probability zero for the bath and τ"));
            }
            Some(post.coherence(&times)?)
        }
        None => None,
    };
    let gaussian = match &eng.gaussian {
        Some(g) => Some(
            times
                .iter()
                .map(|&t| g.sigma_x_sequence(n, k, tau, t))
                .collect::<Result<Vec<f64>, _>>()?,
        ),
        None => None,
    };
    let header: Vec<&str> = match (&exact, &gaussian) {
        (Some(_), Some(_)) => vec!["t_us", "w_re", "w_im", "sigma_x"],
        (Some(_), None) => vec!["t_us", "w_re", "w_im"],
        _ => vec!["t_us", "sigma_x"],
    };
    let mut table = Table::create(a.out.as_deref(), &header)?;
    for (i, &t) in times.iter().enumerate() {
        let mut fields = vec![num(t)];
        if let Some(c) = &exact {
            fields.push(num(c.w_re[i]));
            fields.push(num(c.w_im[i]));
        }
        if let Some(g) = &gaussian {
            fields.push(num(g[i]));
        }
        table.row(fields)?;
    }
    table.finish(&[])
}
