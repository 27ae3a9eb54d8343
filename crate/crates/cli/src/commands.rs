use std::path::Path;

use serde::Serialize;
use wiener_chaos::applications::{
    bispectrum_deviation, bispectrum_l_bound, sheet_variance_quadrature, BispectrumModel, BrownianSheetModel, FbmModel,
};
use wiener_chaos::cumulants::{CumulantOptions, CumulantReport, EmpiricalOptions};
use wiener_chaos::deviations::{
    delta_from_k, delta_from_l, major_comparison, ratio_diagnostic, tail_bound, Delta, DeviationParams, ScaleSequence,
};
use wiener_chaos::diagrams::{
    alpha, count_bounds, count_partitions, diagram_classes, enumerate_partitions, matching_lower_bound, matching_number,
    GroupedIndexSet,
};
use wiener_chaos::kernels::compute_k;
use wiener_chaos::montecarlo::{
    draw, mdp_curve, tail_from_samples, wick_self_test, ChaosSampler, FbmVariationSampler, GaussianSampler,
    HermiteSumSampler, RngSpec, Sampler, TailMode,
};
use wiener_chaos::Kernel;

use crate::output::{Format, Sink};
use crate::{AppCmd, BoundsCmd, Cli, Command, CliError, CumulantArgs, CumulantCmd, DeltaArgs, DiagramsCmd, KernelArgs, McArgs, McCmd, Mode, Model, OutArgs, QmArgs};

/// Fewest samples a Monte Carlo command accepts.
const MIN_SAMPLES: usize = 100;
/// Random symmetric matrices checked by the Wick self-test before sampling.
const WICK_TRIALS: usize = 64;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn sink(o: &OutArgs) -> Sink {
    Sink { format: o.format, out: o.out.clone() }
}

fn factorial(q: usize) -> f64 {
    (2..=q).map(|k| k as f64).product()
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Diagrams(DiagramsCmd::Count(a)) => diagrams_count(&a),
        Command::Diagrams(DiagramsCmd::Enum(a)) => {
            diagrams_enum(a.q, a.m, a.cap, &Sink { format: a.format, out: a.out.clone() })
        }
        Command::Matching(a) => matching(&a),
        Command::Cumulant(CumulantCmd::Exact(a)) => cumulant(&a, None),
        Command::Cumulant(CumulantCmd::Mc(a)) => cumulant(&a.base, Some((&a.mc, a.bootstrap))),
        Command::Bounds(b) => bounds(b),
        Command::App(a) => app(a),
        Command::Mc(m) => mc(m),
    }
}

fn check_q(q: usize) -> Result<(), CliError> {
    if q < 2 {
        return Err(usage(format!("--q must be at least 2, got {q}")));
    }
    Ok(())
}

fn check_qm(q: usize, m: usize) -> Result<(), CliError> {
    check_q(q)?;
    if m < 2 {
        return Err(usage(format!("--m must be at least 2, got {m}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    q: usize,
    m: usize,
    count: u128,
    lower: Option<f64>,
    upper: Option<f64>,
}

fn diagrams_count(a: &QmArgs) -> Result<(), CliError> {
    check_qm(a.q, a.m)?;
    let count = count_partitions(a.q, a.m)?;
    let (lower, upper) = if a.m >= 3 {
        let b = count_bounds(a.q, a.m)?;
        (Some(b.lower()), Some(b.upper()))
    } else {
        (None, None)
    };
    sink(&a.out).record(&CountRow { q: a.q, m: a.m, count, lower, upper })
}

#[derive(Serialize)]
struct PartitionRow {
    partition: String,
}

fn diagrams_enum(q: usize, m: usize, cap: Option<usize>, out: &Sink) -> Result<(), CliError> {
    check_qm(q, m)?;
    let parts = enumerate_partitions(GroupedIndexSet::uniform(q, m)?, cap)?;
    let lines = parts.map(|p| p.to_string());
    match out.format {
        Format::Text => out.lines(lines),
        Format::Json => out.json(&lines.collect::<Vec<_>>()),
        Format::Csv => out.table(&lines.map(|partition| PartitionRow { partition }).collect::<Vec<_>>()),
    }
}

#[derive(Serialize)]
struct MatchingRow {
    q: usize,
    m: usize,
    classes: usize,
    partitions: u128,
    lower_bound: usize,
    min_matching: Option<usize>,
    max_matching: Option<usize>,
    holds: bool,
}

fn matching(a: &QmArgs) -> Result<(), CliError> {
    check_q(a.q)?;
    if a.m < 3 {
        return Err(usage(format!("--m must be at least 3, got {}", a.m)));
    }
    let classes = diagram_classes(&GroupedIndexSet::uniform(a.q, a.m)?)?;
    let lower_bound = matching_lower_bound(a.q, a.m)?;
    let numbers: Vec<usize> = classes.iter().map(|c| matching_number(&c.graph)).collect();
    let row = MatchingRow {
        q: a.q,
        m: a.m,
        classes: classes.len(),
        partitions: classes.iter().map(|c| c.count).sum(),
        lower_bound,
        min_matching: numbers.iter().copied().min(),
        max_matching: numbers.iter().copied().max(),
        holds: numbers.iter().all(|&k| k >= lower_bound),
    };
    sink(&a.out).record(&row)
}

fn read_kernel(path: &Path) -> Result<Kernel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Kernel::from_text(&text)?)
}

fn kernel(a: &KernelArgs) -> Result<Kernel, CliError> {
    match (&a.kernel, a.q, a.n_dim) {
        (Some(path), _, _) => read_kernel(path),
        (None, Some(q), Some(n)) => Ok(Kernel::hermite_sum_normalized(q, n)?),
        _ => Err(usage("give --kernel FILE, or --q and --N for the normalized Hermite-sum kernel")),
    }
}

fn start_mc(mc: &McArgs) -> Result<RngSpec, CliError> {
    if mc.samples < MIN_SAMPLES {
        return Err(usage(format!("--samples must be at least {MIN_SAMPLES}, got {}", mc.samples)));
    }
    wick_self_test(WICK_TRIALS, mc.seed)?;
    Ok(RngSpec::new(mc.seed, 0))
}

fn cumulant(a: &CumulantArgs, mc: Option<(&McArgs, usize)>) -> Result<(), CliError> {
    if a.m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    let h = kernel(&a.kernel)?;
    let mut opts = CumulantOptions::default();
    if let Some(cap) = a.cap {
        opts.work_cap = cap;
    }
    let samples = match mc {
        Some((mc, _)) => {
            let spec = start_mc(mc)?;
            Some(draw(&ChaosSampler::new(&h)?, mc.samples, &spec, mc.workers)?)
        }
        None => None,
    };
    let emp = EmpiricalOptions { bootstrap: mc.map_or(0, |(_, b)| b), seed: mc.map_or(0, |(m, _)| m.seed) };
    let report = CumulantReport::build(&h, a.m, samples.as_deref(), &opts, &emp)?;
    let out = sink(&a.out);
    match out.format {
        Format::Csv => out.table(&report.records),
        _ => out.record(&report),
    }
}

/// `None` is the unbounded Δ of an exactly Gaussian element.
fn resolve_delta(q: usize, d: &DeltaArgs) -> Result<Option<f64>, CliError> {
    let delta = match (d.delta, d.k, d.l) {
        (Some(x), _, _) if x.is_infinite() && x > 0.0 => Delta::Unbounded,
        (Some(x), _, _) if x > 0.0 => Delta::Finite(x),
        (Some(x), _, _) => return Err(usage(format!("--delta must be positive, got {x}"))),
        (None, Some(k), _) => delta_from_k(q, k)?,
        (None, None, Some(l)) => delta_from_l(q, l)?,
        (None, None, None) => Delta::Unbounded,
    };
    Ok(match delta {
        Delta::Finite(x) => Some(x),
        Delta::Unbounded => None,
    })
}

#[derive(Serialize)]
struct DeltaRow {
    q: usize,
    k: Option<f64>,
    l: Option<f64>,
    alpha: String,
    gamma: f64,
    /// Absent when Δ is unbounded.
    delta: Option<f64>,
}

#[derive(Serialize)]
struct TailRow {
    z: f64,
    q: usize,
    delta: Option<f64>,
    tail_bound: f64,
}

#[derive(Serialize)]
struct MajorRow {
    z: f64,
    q: usize,
    delta: Option<f64>,
    c: f64,
    c_flagged: bool,
    tail_bound: f64,
    major_bound: f64,
    tail_better: bool,
    exponent_better: bool,
}

#[derive(Serialize)]
struct RatioRow {
    p: f64,
    z: f64,
    q: usize,
    delta: f64,
    gaussian_tail: f64,
    log_ratio: f64,
    shape: f64,
}

fn bounds(cmd: BoundsCmd) -> Result<(), CliError> {
    match cmd {
        BoundsCmd::Delta { q, k, l, out } => {
            check_q(q)?;
            let p = match (k, l) {
                (Some(k), _) => DeviationParams::from_k(q, k)?,
                (None, Some(l)) => DeviationParams::from_l(q, l)?,
                (None, None) => return Err(usage("give --K or --L")),
            };
            let delta = match p.delta {
                Delta::Finite(x) => Some(x),
                Delta::Unbounded => None,
            };
            sink(&out).record(&DeltaRow { q, k: p.k, l: p.l, alpha: p.alpha.to_string(), gamma: p.gamma, delta })
        }
        BoundsCmd::Tail { z, q, delta, out } => {
            check_q(q)?;
            let d = resolve_delta(q, &delta)?;
            let rows = z
                .iter()
                .map(|&z| Ok(TailRow { z, q, delta: d, tail_bound: tail_bound(z, q, d.unwrap_or(f64::INFINITY))? }))
                .collect::<Result<Vec<_>, CliError>>()?;
            emit_rows(&sink(&out), &rows)
        }
        BoundsCmd::Major { z, q, c, delta, out } => {
            check_q(q)?;
            let d = resolve_delta(q, &delta)?;
            let rows = z
                .iter()
                .map(|&z| {
                    let m = major_comparison(z, q, d.unwrap_or(f64::INFINITY), c.unwrap_or(1.0))?;
                    Ok(MajorRow {
                        z,
                        q,
                        delta: d,
                        c: m.c,
                        c_flagged: c.is_none(),
                        tail_bound: m.tail_bound,
                        major_bound: m.major_bound,
                        tail_better: m.tail_better,
                        exponent_better: m.exponent_better,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            emit_rows(&sink(&out), &rows)
        }
        BoundsCmd::Ratio { p, z, q, delta, out } => {
            check_q(q)?;
            let d = resolve_delta(q, &delta)?.ok_or_else(|| usage("the ratio diagnostic needs a finite Δ (--delta, --K or --L)"))?;
            let r = ratio_diagnostic(p, z, q, d)?;
            sink(&out).record(&RatioRow { p, z, q, delta: d, gaussian_tail: r.gaussian_tail, log_ratio: r.log_ratio, shape: r.shape })
        }
    }
}

/// One row prints as a record, several as a table.
fn emit_rows<T: Serialize>(out: &Sink, rows: &[T]) -> Result<(), CliError> {
    match rows {
        [one] => out.record(one),
        _ => out.table(rows),
    }
}

#[derive(Serialize)]
struct SheetRow {
    d: u32,
    n: u64,
    mean: f64,
    variance: f64,
    k_bound: f64,
    delta: f64,
    variance_quadrature: Option<f64>,
}

#[derive(Serialize)]
struct FbmRow {
    hurst: f64,
    n: u64,
    sigma: f64,
    c_h: f64,
    rate: Option<f64>,
    delta: Option<f64>,
    /// Names of constants the model leaves unspecified.
    constants_flagged: &'static str,
}

#[derive(Serialize)]
struct IncrementRow {
    k: usize,
    increment: f64,
}

#[derive(Serialize)]
struct BispectrumRow {
    l1: u64,
    l2: u64,
    l3: u64,
    variance_factor: u32,
    n: Option<f64>,
    l_bound: Option<f64>,
    delta: Option<f64>,
}

/// Quadrature resolution of `app sheet --quadrature`.
const SHEET_POINTS: usize = 10;
const SHEET_PANELS: usize = 24;

fn app(cmd: AppCmd) -> Result<(), CliError> {
    match cmd {
        AppCmd::Sheet { d, n, quadrature, out } => {
            let rows = n
                .iter()
                .map(|&n| {
                    let m = BrownianSheetModel::new(d, n)?;
                    let variance_quadrature =
                        if quadrature { Some(sheet_variance_quadrature(d, n, SHEET_POINTS, SHEET_PANELS)?) } else { None };
                    Ok(SheetRow { d, n, mean: m.mean, variance: m.variance, k_bound: m.k_bound, delta: m.delta, variance_quadrature })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            emit_rows(&sink(&out), &rows)
        }
        AppCmd::Fbm { hurst, n, c_h, path, seed, out } => {
            let flagged = if c_h.is_some() { "" } else { "c_H" };
            let models = n.iter().map(|&n| FbmModel::new(hurst, n, c_h.unwrap_or(1.0))).collect::<Result<Vec<_>, _>>()?;
            if path {
                let [model] = models.as_slice() else {
                    return Err(usage("--path needs exactly one --n"));
                };
                let sampler = FbmVariationSampler::new(model.clone())?;
                let x = sampler.increments(&mut RngSpec::new(seed, 0).rng_for(0));
                let rows: Vec<IncrementRow> = x.iter().enumerate().map(|(k, &increment)| IncrementRow { k, increment }).collect();
                return sink(&out).table(&rows);
            }
            let rows: Vec<FbmRow> = models
                .into_iter()
                .map(|m| FbmRow { hurst: m.hurst, n: m.n, sigma: m.sigma, c_h: m.c_h, rate: m.rate, delta: m.delta, constants_flagged: flagged })
                .collect();
            emit_rows(&sink(&out), &rows)
        }
        AppCmd::Bispectrum { l, n, out } => {
            let b = BispectrumModel::new(l[0], l[1], l[2])?;
            let (l_bound, delta) = match n {
                Some(n) => (Some(bispectrum_l_bound(n)?), Some(bispectrum_deviation(n)?.delta.value())),
                None => (None, None),
            };
            sink(&out).record(&BispectrumRow {
                l1: b.l1,
                l2: b.l2,
                l3: b.l3,
                variance_factor: b.variance_factor(),
                n,
                l_bound,
                delta,
            })
        }
    }
}

#[derive(Serialize)]
struct McTailRow {
    model: String,
    z: f64,
    mode: TailMode,
    samples: u64,
    hits: u64,
    p_hat: f64,
    ci_low: f64,
    ci_high: f64,
    status: &'static str,
    tail_bound: Option<f64>,
    violated: Option<bool>,
    rng_seed: u64,
    rng_stream: u64,
    rng_algorithm: String,
}

#[derive(Serialize)]
struct McMdpRow {
    model: String,
    n: f64,
    a_n: f64,
    z: f64,
    samples: u64,
    hits: u64,
    p_hat: f64,
    scaled: Option<f64>,
    target: f64,
    status: &'static str,
    rng_seed: u64,
    rng_stream: u64,
    rng_algorithm: String,
}

fn status(censored: bool) -> &'static str {
    if censored {
        "censored"
    } else {
        "ok"
    }
}

/// A sampler together with the `Δ` of the element it draws (`None` when
/// unbounded or unknown).
fn tail_model(
    model: Model,
    q: usize,
    n: u64,
    hurst: Option<f64>,
    kernel: Option<&Path>,
) -> Result<(Box<dyn Sampler>, Option<f64>), CliError> {
    let n_usize = usize::try_from(n).map_err(|_| usage(format!("--n {n} is too large")))?;
    Ok(match model {
        Model::HermiteSum => {
            check_q(q)?;
            let delta = delta_from_k(q, 1.0 / (n as f64).sqrt())?;
            (Box::new(HermiteSumSampler::new(q, n_usize)?), Some(delta.value()))
        }
        Model::Gaussian => {
            check_q(q)?;
            (Box::new(GaussianSampler::new(factorial(q))?), None)
        }
        Model::Chaos => {
            let path = kernel.ok_or_else(|| usage("the chaos model needs --kernel"))?;
            let h = read_kernel(path)?.normalize()?;
            let q = h.order();
            check_q(q)?;
            let delta = match delta_from_k(q, compute_k(&h)?.min(1.0))? {
                Delta::Finite(x) => Some(x),
                Delta::Unbounded => None,
            };
            (Box::new(ChaosSampler::new(&h)?), delta)
        }
        Model::Fbm => {
            let h = hurst.ok_or_else(|| usage("the fbm model needs --H"))?;
            let m = FbmModel::new(h, n, 1.0)?;
            let delta = m.delta;
            (Box::new(FbmVariationSampler::new(m)?), delta)
        }
    })
}

fn mc(cmd: McCmd) -> Result<(), CliError> {
    match cmd {
        McCmd::Tail { model, q, n, hurst, kernel, z, mode, mc, out } => {
            let spec = start_mc(&mc)?;
            let (sampler, delta) = tail_model(model, q, n, hurst, kernel.as_deref())?;
            let q = match model {
                Model::Fbm => 2,
                Model::Chaos => read_kernel(kernel.as_deref().expect("checked by tail_model"))?.order(),
                _ => q,
            };
            let mode = match mode {
                Mode::Upper => TailMode::Upper,
                Mode::Absolute => TailMode::Absolute,
            };
            let x = draw(sampler.as_ref(), mc.samples, &spec, mc.workers)?;
            let rows = z
                .iter()
                .map(|&z| {
                    let t = tail_from_samples(&x, z, mode, &spec);
                    // the fBm Δ carries the flagged constant c_H = 1
                    let bound = if z >= 0.0 { Some(tail_bound(z, q, delta.unwrap_or(f64::INFINITY))?) } else { None };
                    Ok(McTailRow {
                        model: sampler.name(),
                        z,
                        mode,
                        samples: t.samples,
                        hits: t.hits,
                        p_hat: t.p_hat,
                        ci_low: t.ci_low,
                        ci_high: t.ci_high,
                        status: status(t.censored),
                        tail_bound: bound,
                        violated: bound.map(|b| t.ci_low > b),
                        rng_seed: t.rng_seed,
                        rng_stream: t.rng_stream,
                        rng_algorithm: t.rng_algorithm,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            sink(&out).table(&rows)
        }
        McCmd::Mdp { model, q, n, a_exponent, a, z, mc, out } => {
            check_q(q)?;
            let spec = start_mc(&mc)?;
            let (cells, name) = match model {
                Model::HermiteSum => {
                    let e = match a_exponent {
                        Some(e) => e,
                        None => {
                            let al = alpha(q)?;
                            (*al.numer() as f64 / *al.denom() as f64) / (4.0 * (q as f64 - 1.0))
                        }
                    };
                    let grid: Vec<f64> = n.iter().map(|&n| n as f64).collect();
                    let seq = ScaleSequence::power(1.0, e, &grid)?;
                    let cells = mdp_curve(|n| HermiteSumSampler::new(q, n as usize), &seq, &z, q, mc.samples, &spec, mc.workers)?;
                    (cells, format!("hermite-sum(q={q})"))
                }
                Model::Gaussian => {
                    let seq = ScaleSequence::tabulated(a.iter().map(|&a| (a, a)).collect())?;
                    let var = factorial(q);
                    let cells = mdp_curve(|_| GaussianSampler::new(var), &seq, &z, q, mc.samples, &spec, mc.workers)?;
                    (cells, format!("gaussian(var={var})"))
                }
                _ => return Err(usage("mc mdp supports the hermite-sum and gaussian models")),
            };
            let rows: Vec<McMdpRow> = cells
                .into_iter()
                .map(|c| McMdpRow {
                    model: name.clone(),
                    n: c.n,
                    a_n: c.a_n,
                    z: c.z,
                    samples: c.samples,
                    hits: c.hits,
                    p_hat: c.p_hat,
                    scaled: c.scaled,
                    target: c.target,
                    status: status(c.censored),
                    rng_seed: c.rng_seed,
                    rng_stream: c.rng_stream,
                    rng_algorithm: spec.algorithm.clone(),
                })
                .collect();
            sink(&out).table(&rows)
        }
    }
}
