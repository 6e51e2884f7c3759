//! One function per subcommand. Each writes its output and reports whether
//! the result met its quality threshold.

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use stepprony_core::budget::budget_table;
use stepprony_core::linear_approx::{n_term_error, DictionaryKind};
use stepprony_core::prony::{
    estimate_jump_count, estimate_order, reconstruct_piecewise, reconstruct_spikes,
    ReconstructionReport, SolveMode,
};
use stepprony_core::signals::{
    heaviside, random_signal, random_spike_train, PiecewiseConstantSignal,
};
use stepprony_core::spectral::{
    fourier_coefficients, moments, normalized_coefficients, AddNoise, FourierSpectrum,
};
use stepprony_core::widths::{covering_number, empirical_fourier_width, nm_width_construction};
use stepprony_core::{Complex64, Error};

use crate::cli::{
    Command, GenArgs, MeasureArgs, Order, ReconstructArgs, RoundtripArgs, SweepArgs, SweepKind,
};
use crate::config::RunConfig;
use crate::error::{CliError, Outcome};
use crate::formats::{
    csv_document, fmt_f64, json_document, moment_rows, parse_measurements, parse_signal, read_text,
    spectrum_rows, write_output, Measurements, SignalFile, MOMENT_COLUMNS, SPECTRUM_COLUMNS,
};

pub const WIDTH_COLUMNS: &str = "n,lower,empirical,upper";
pub const ENTROPY_COLUMNS: &str = "epsilon,count,entropy,theory";
pub const NM_COLUMNS: &str = "N,m,lower,empirical,upper";
pub const APPROX_COLUMNS: &str = "t,n,dict,error";
pub const BUDGET_COLUMNS: &str = "method,epsilon,bits,params";

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Measure(a) => measure(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Sweep(a) => sweep(a),
        Command::Roundtrip(a) => roundtrip(a),
    }
}

fn path_string(p: Option<&Path>) -> Option<String> {
    p.map(|p| p.display().to_string())
}

fn check_sigma(sigma: f64) -> Result<(), CliError> {
    if sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "--sigma must be finite and non-negative, got {sigma}"
        )))
    }
}

/// Errors that mean the data do not fit the model, as opposed to bad input.
fn is_model_mismatch(e: &Error) -> bool {
    matches!(
        e,
        Error::Singular { .. }
            | Error::NearDuplicateRoots { .. }
            | Error::IllConditioned(_)
            | Error::NodeOutOfRange(_)
            | Error::UnitCircleDeviation(_)
            | Error::InvalidSignal(_)
    )
}

fn rms(diffs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = diffs.fold((0.0, 0usize), |(s, c), d| (s + d * d, c + 1));
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    }
}

pub fn gen(a: &GenArgs) -> Result<Outcome, CliError> {
    let mut config = RunConfig::new("gen")
        .param("n", a.n)
        .param("min_separation", a.min_separation)
        .param("min_jump", a.min_jump)
        .param("spikes", a.spikes);
    config.output = path_string(a.out.as_deref());
    config.seed = a.seed;
    let doc = if a.spikes {
        json_document(
            &config,
            &random_spike_train(a.n, a.min_separation, a.min_jump, a.seed)?,
        )
    } else {
        json_document(
            &config,
            &random_signal(a.n, a.min_separation, a.min_jump, a.seed)?,
        )
    };
    write_output(a.out.as_deref(), &doc)?;
    Ok(Outcome::Success)
}

pub fn measure(a: &MeasureArgs) -> Result<Outcome, CliError> {
    check_sigma(a.sigma)?;
    let origin = a.input.display().to_string();
    let signal = parse_signal(&read_text(&a.input)?, &origin)?;
    let mut config = RunConfig::new("measure").param("k_max", a.k_max);
    config.input = Some(origin);
    config.output = path_string(a.out.as_deref());
    config.seed = a.seed;
    config.sigma = a.sigma;
    let doc = match signal {
        SignalFile::Piecewise(f) => {
            let s = fourier_coefficients(&f, a.k_max).add_noise(a.sigma, a.seed);
            csv_document(&config, SPECTRUM_COLUMNS, &spectrum_rows(&s))
        }
        SignalFile::Spikes(g) => {
            let m = moments(&g, a.k_max).add_noise(a.sigma, a.seed);
            csv_document(&config, MOMENT_COLUMNS, &moment_rows(&m))
        }
    };
    write_output(a.out.as_deref(), &doc)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct ReconstructPayload<S> {
    signal_kind: &'static str,
    order: usize,
    /// RMS misfit against every row of the input, in the input's units. The
    /// quality check uses this rather than the report's residual, which only
    /// covers the rows the solver used and is measured on `2πik·c_k`.
    data_residual: Option<f64>,
    threshold: f64,
    quality: &'static str,
    diagnostic: Option<String>,
    report: Option<ReconstructionReport<S>>,
}

/// Largest order whose reconstruction fits in `available` values, where
/// order `n` needs `per_order·n + base` of them (strictly more in
/// least-squares mode).
fn max_order(available: usize, per_order: usize, base: usize, mode: SolveMode) -> usize {
    let usable = match mode {
        SolveMode::Exact => available,
        SolveMode::LeastSquares => available.saturating_sub(1),
    };
    usable.saturating_sub(base) / per_order
}

fn spectrum_misfit(file: &FourierSpectrum, f: &PiecewiseConstantSignal) -> f64 {
    let k_max = file
        .iter()
        .map(|(k, _)| k.unsigned_abs())
        .max()
        .unwrap_or(0);
    let model = fourier_coefficients(f, u32::try_from(k_max).unwrap_or(u32::MAX));
    rms(file
        .iter()
        .map(|(k, c)| (model.get(k).unwrap_or_default() - c).norm()))
}

fn finish_reconstruction<S: Serialize>(
    config: &RunConfig,
    out: Option<&Path>,
    signal_kind: &'static str,
    order: usize,
    result: Result<ReconstructionReport<S>, Error>,
    misfit: impl FnOnce(&S) -> f64,
) -> Result<Outcome, CliError> {
    let threshold = config.tolerance;
    let (payload, outcome) = match result {
        Ok(report) => {
            let data_residual = misfit(&report.signal);
            let (quality, diagnostic, outcome) = if data_residual <= threshold {
                ("ok", None, Outcome::Success)
            } else {
                let msg = format!("residual {data_residual:e} exceeds threshold {threshold:e}");
                ("breach", Some(msg.clone()), Outcome::QualityBreach(msg))
            };
            let payload = ReconstructPayload {
                signal_kind,
                order,
                data_residual: Some(data_residual),
                threshold,
                quality,
                diagnostic,
                report: Some(report),
            };
            (payload, outcome)
        }
        Err(e) if is_model_mismatch(&e) => {
            let msg = e.to_string();
            let payload = ReconstructPayload {
                signal_kind,
                order,
                data_residual: None,
                threshold,
                quality: "breach",
                diagnostic: Some(msg.clone()),
                report: None,
            };
            (payload, Outcome::QualityBreach(msg))
        }
        Err(e) => return Err(e.into()),
    };
    write_output(out, &json_document(config, &payload))?;
    Ok(outcome)
}

pub fn reconstruct(a: &ReconstructArgs) -> Result<Outcome, CliError> {
    let origin = a.input.display().to_string();
    let data = parse_measurements(&read_text(&a.input)?, &origin)?;
    let mode = SolveMode::from(a.mode);
    let mut config = RunConfig::new("reconstruct")
        .param("order", a.order.to_string())
        .param("rank_tolerance", a.rank_tolerance);
    config.input = Some(origin.clone());
    config.output = path_string(a.out.as_deref());
    config.tolerance = a.tolerance;
    config.mode = mode;
    let out = a.out.as_deref();

    match data {
        Measurements::Spectrum(s) => {
            let c0 = s
                .get(0)
                .ok_or_else(|| CliError::input(format!("{origin}: no k = 0 row")))?
                .re;
            let chat = normalized_coefficients(&s)?;
            let order = match a.order {
                Order::Fixed(n) => n,
                Order::Auto => estimate_jump_count(&chat, a.rank_tolerance).min(max_order(
                    chat.len(),
                    2,
                    1,
                    mode,
                )),
            };
            let result = reconstruct_piecewise(c0, &chat, order, mode);
            finish_reconstruction(&config, out, "piecewise", order, result, |f| {
                spectrum_misfit(&s, f)
            })
        }
        Measurements::Moments(m) => {
            let order = match a.order {
                Order::Fixed(n) => n,
                Order::Auto => {
                    let seq: Vec<Complex64> = m
                        .as_slice()
                        .iter()
                        .map(|&x| Complex64::new(x, 0.0))
                        .collect();
                    estimate_order(&seq, a.rank_tolerance).min(max_order(m.len(), 2, 0, mode))
                }
            };
            let result = reconstruct_spikes(&m, order, mode);
            finish_reconstruction(&config, out, "spikes", order, result, |g| {
                let model = moments(g, m.len().saturating_sub(1) as u32);
                rms(model
                    .as_slice()
                    .iter()
                    .zip(m.as_slice())
                    .map(|(a, b)| a - b))
            })
        }
    }
}

const DEFAULT_WIDTH_DIMENSIONS: [u32; 5] = [5, 9, 17, 33, 65];
const DEFAULT_EPSILONS: [f64; 4] = [0.1, 0.05, 0.02, 0.01];
const DEFAULT_PAIRS: [&str; 4] = ["4x4", "8x2", "16x1", "2x8"];
const DEFAULT_BUDGET_EPSILONS: [f64; 4] = [0.0625, 0.015625, 0.00390625, 0.0009765625];

fn or_default<T: Clone>(given: &[T], default: &[T]) -> Vec<T> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

/// Odd dimensions to evaluate: odd `n` as given, even `n` bracketed by
/// `n − 1` and `n + 1`.
fn odd_dimensions(ns: &[u32]) -> Result<Vec<u32>, CliError> {
    let mut dims = BTreeSet::new();
    for &n in ns {
        if n < 2 {
            return Err(CliError::input(format!(
                "width dimensions must be at least 2, got {n}"
            )));
        }
        if n % 2 == 1 {
            dims.insert(n);
        } else {
            if n > 2 {
                dims.insert(n - 1);
            }
            dims.insert(n + 1);
        }
    }
    Ok(dims.into_iter().collect())
}

fn parse_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::input(format!("expected a pair like 4x4, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parallel_rows<T: Sync>(
    items: &[T],
    row: impl Fn(&T) -> Result<String, Error> + Sync + Send,
) -> Result<Vec<String>, CliError> {
    items
        .par_iter()
        .map(row)
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::from)
}

pub fn sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    if a.grid == 0 {
        return Err(CliError::input("--grid must be positive"));
    }
    let mut config = RunConfig::new("sweep").param("kind", a.kind.label());
    config.output = path_string(a.out.as_deref());
    config.grid = a.grid;
    let grid = a.grid;

    let (columns, rows) = match a.kind {
        SweepKind::Widths => {
            let dims = odd_dimensions(&or_default(&a.n, &DEFAULT_WIDTH_DIMENSIONS))?;
            config = config.param("n", dims.clone());
            let rows = parallel_rows(&dims, |&n| {
                let w = empirical_fourier_width((n - 1) / 2, grid)?;
                Ok(format!(
                    "{n},{},{},{}",
                    fmt_f64(w.lower_bound),
                    fmt_f64(w.empirical),
                    fmt_f64(w.upper_bound)
                ))
            })?;
            (WIDTH_COLUMNS, rows)
        }
        SweepKind::Entropy => {
            let eps = or_default(&a.epsilon, &DEFAULT_EPSILONS);
            config = config.param("epsilon", eps.clone());
            let rows = parallel_rows(&eps, |&e| {
                // The greedy cover needs a grid at least this fine to be exact.
                let resolution = grid.max((10.0 / (e * e)).ceil() as usize);
                let cover = covering_number(e, resolution)?;
                let count = cover.ball_count;
                Ok(format!(
                    "{},{count},{},{}",
                    fmt_f64(e),
                    fmt_f64((count as f64).log2()),
                    fmt_f64(2.0 * (1.0 / e).log2())
                ))
            })?;
            (ENTROPY_COLUMNS, rows)
        }
        SweepKind::Nm => {
            let names = or_default(&a.pairs, &DEFAULT_PAIRS.map(String::from));
            let pairs = names
                .iter()
                .map(|s| parse_pair(s))
                .collect::<Result<Vec<_>, _>>()?;
            config = config.param("pairs", names);
            let rows = parallel_rows(&pairs, |&(big_n, m)| {
                let w = nm_width_construction(big_n, m, grid)?;
                Ok(format!(
                    "{big_n},{m},{},{},{}",
                    fmt_f64(w.lower_bound),
                    fmt_f64(w.empirical),
                    fmt_f64(w.upper_bound)
                ))
            })?;
            (NM_COLUMNS, rows)
        }
        SweepKind::Approx => {
            let ts = or_default(
                &a.t,
                &(1..10).map(|i| f64::from(i) / 10.0).collect::<Vec<_>>(),
            );
            let ns = or_default(&a.n, &(1..=12).collect::<Vec<_>>());
            config = config.param("t", ts.clone()).param("n", ns.clone());
            let cases: Vec<(f64, u32, DictionaryKind)> = ts
                .iter()
                .flat_map(|&t| {
                    ns.iter()
                        .flat_map(move |&n| DictionaryKind::ALL.map(|d| (t, n, d)))
                })
                .collect();
            let rows = parallel_rows(&cases, |&(t, n, dict)| {
                let error = n_term_error(&heaviside(t)?, dict, n)?;
                Ok(format!(
                    "{},{n},{},{}",
                    fmt_f64(t),
                    dict.label(),
                    fmt_f64(error)
                ))
            })?;
            (APPROX_COLUMNS, rows)
        }
        SweepKind::Budget => {
            let eps = or_default(&a.epsilon, &DEFAULT_BUDGET_EPSILONS);
            config = config.param("epsilon", eps.clone());
            let rows = budget_table(&eps)?
                .into_iter()
                .map(|b| {
                    let params = b.params.map(|m| m.to_string()).unwrap_or_default();
                    format!(
                        "{},{},{},{params}",
                        b.method.label(),
                        fmt_f64(b.epsilon),
                        fmt_f64(b.bits)
                    )
                })
                .collect();
            (BUDGET_COLUMNS, rows)
        }
    };
    write_output(a.out.as_deref(), &csv_document(&config, columns, &rows))?;
    Ok(Outcome::Success)
}

#[derive(Debug, Clone, Serialize)]
struct Trial {
    trial: usize,
    signal_seed: u64,
    noise_seed: u64,
    jump_error: Option<f64>,
    value_error: Option<f64>,
    residual: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct RoundtripSummary {
    trials: usize,
    failures: usize,
    max_jump_error: Option<f64>,
    median_jump_error: Option<f64>,
    max_value_error: Option<f64>,
    median_value_error: Option<f64>,
    max_residual: Option<f64>,
    per_trial: Vec<Trial>,
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    })
}

fn max_of(xs: &[f64]) -> Option<f64> {
    xs.iter().copied().reduce(f64::max)
}

/// Trial `i` draws its signal from seed `seed + 2i` and its noise from
/// `seed + 2i + 1`, so runs that differ only in `k_max` or `mode` see the
/// same signals and the same noise on shared coefficients.
fn run_trial(a: &RoundtripArgs, k_max: u32, trial: usize) -> Result<Trial, CliError> {
    let signal_seed = a.seed.wrapping_add(2 * trial as u64);
    let noise_seed = signal_seed.wrapping_add(1);
    let f = random_signal(a.n, a.min_separation, a.min_jump, signal_seed)?;
    let s = fourier_coefficients(&f, k_max).add_noise(a.sigma, noise_seed);
    let c0 = s.get(0).map_or(0.0, |c| c.re);
    let chat = normalized_coefficients(&s)?;
    let mut record = Trial {
        trial,
        signal_seed,
        noise_seed,
        jump_error: None,
        value_error: None,
        residual: None,
        error: None,
    };
    match reconstruct_piecewise(c0, &chat, a.n, a.mode.into()) {
        Ok(report) => {
            let g = &report.signal;
            record.residual = Some(report.residual_norm);
            if g.jump_count() != f.jump_count() {
                record.error = Some(format!(
                    "recovered {} jumps, expected {}",
                    g.jump_count(),
                    f.jump_count()
                ));
            } else {
                let gap = |x: &[f64], y: &[f64]| {
                    x.iter()
                        .zip(y)
                        .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
                };
                record.jump_error = Some(gap(f.jumps(), g.jumps()));
                record.value_error = Some(gap(f.values(), g.values()));
            }
        }
        Err(e) if is_model_mismatch(&e) => record.error = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    Ok(record)
}

/// `1e-8` for clean data, otherwise `1e3·σ` (so `1e-3` at `σ = 1e-6`).
pub fn default_tolerance(sigma: f64) -> f64 {
    (1e3 * sigma).max(1e-8)
}

pub fn roundtrip(a: &RoundtripArgs) -> Result<Outcome, CliError> {
    check_sigma(a.sigma)?;
    if a.trials == 0 {
        return Err(CliError::input("--trials must be at least 1"));
    }
    let k_max = a.k_max.unwrap_or(2 * a.n as u32 + 1);
    let tolerance = a.tolerance.unwrap_or(default_tolerance(a.sigma));
    let mut config = RunConfig::new("roundtrip")
        .param("n", a.n)
        .param("trials", a.trials)
        .param("k_max", k_max)
        .param("min_separation", a.min_separation)
        .param("min_jump", a.min_jump);
    config.output = path_string(a.out.as_deref());
    config.seed = a.seed;
    config.sigma = a.sigma;
    config.mode = a.mode.into();
    config.tolerance = tolerance;

    let per_trial = (0..a.trials)
        .into_par_iter()
        .map(|i| run_trial(a, k_max, i))
        .collect::<Result<Vec<_>, _>>()?;

    let jumps: Vec<f64> = per_trial.iter().filter_map(|t| t.jump_error).collect();
    let values: Vec<f64> = per_trial.iter().filter_map(|t| t.value_error).collect();
    let residuals: Vec<f64> = per_trial.iter().filter_map(|t| t.residual).collect();
    let failures = per_trial
        .iter()
        .filter(|t| {
            t.error.is_some()
                || [t.jump_error, t.value_error]
                    .into_iter()
                    .flatten()
                    .any(|e| !(e < tolerance))
        })
        .count();
    let summary = RoundtripSummary {
        trials: a.trials,
        failures,
        max_jump_error: max_of(&jumps),
        median_jump_error: median(jumps),
        max_value_error: max_of(&values),
        median_value_error: median(values),
        max_residual: max_of(&residuals),
        per_trial,
    };
    write_output(a.out.as_deref(), &json_document(&config, &summary))?;
    Ok(if failures == 0 {
        Outcome::Success
    } else {
        Outcome::QualityBreach(format!(
            "{failures} of {} trials exceed {tolerance:e}",
            a.trials
        ))
    })
}
