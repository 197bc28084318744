//! Subcommand dispatch. Every command reads one TOML config, runs the
//! corresponding experiment from the core crate, and writes a CSV table
//! plus a plain-text summary into the output directory. Exit codes:
//! 0 success, 1 config or construction failure, 2 inconclusive
//! classification evidence.

use crate::config::{self, ChainConfig, Config, DiagnoseConfig, WitnessConfig};
use crate::output::{fmt, OutDir};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftlab_core::dynamics::{
    build_chain_constant_weight, chain_escape_test, concatenate_chains, decay_chain_to_zero,
    distributional_densities, li_yorke_check, orbit_trace, uniform_bound_probe, verify_chain,
    Chain, EscapeVerdict, LiYorkeVerdict,
};
use shiftlab_core::entropy::infinite_entropy_experiment;
use shiftlab_core::space::{GridFunction, Mode, Representation, SpaceSpec};
use shiftlab_core::weights::{
    certify_admissibility, classify_tier, sup_ratio, AdmissibilityCertificate, WeightError,
};
use shiftlab_core::witness::{
    build_nonvanishing_witness, build_periodic_witness, build_separated_family,
    build_windowed_witness, find_escape_sequences, quadratic_schedule, rate_increasing_schedule,
    verify_nonvanishing,
};
use std::io::Write;
use std::path::PathBuf;

/// Slack factors for measured-vs-certified comparisons, stated on the
/// p-th-power scale and converted per mode. Quadrature on the default
/// grids lands well inside these.
const UPPER_TOL: f64 = 1.01;
const LOWER_TOL: f64 = 0.95;

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "experiments with translation semigroups on weighted function spaces"
)]
struct Cli {
    /// Experiment description (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for CSV and summary files.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Seed for randomized searches; overrides the config value.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify admissibility and classify the weight's chaos tier.
    Classify,
    /// Build a witness function and verify its norm inequalities.
    Witness,
    /// Count separated orbit sets level by level.
    Entropy,
    /// Build and verify eps-chains, or search for chain escapes.
    Chain,
    /// Pairwise orbit statistics: traces, scrambling, densities, bounds.
    Diagnose,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Run(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            1
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let (cfg, hash) = config::load(path).map_err(CliError::Config)?;
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let out = OutDir::new(&cli.out, &hash, seed)?;
    match cli.command {
        Cmd::Classify => cmd_classify(&cfg, &out),
        Cmd::Witness => cmd_witness(&cfg, &out, seed),
        Cmd::Entropy => cmd_entropy(&cfg, &out),
        Cmd::Chain => cmd_chain(&cfg, &out, seed),
        Cmd::Diagnose => cmd_diagnose(&cfg, &out, seed),
    }
}

/// Certifies the configured weight on the configured grid and builds the
/// space around the certified copy.
fn certified_space(cfg: &Config) -> Result<(SpaceSpec, AdmissibilityCertificate), CliError> {
    let v = config::build_weight(&cfg.weight).map_err(CliError::Config)?;
    let cert = certify_admissibility(&v, cfg.space.x_max, cfg.space.step)
        .map_err(|e| CliError::Run(e.to_string()))?;
    let spec =
        config::build_space_with(v.with_certificate(cert.clone()), cfg).map_err(CliError::Config)?;
    Ok((spec, cert))
}

/// Norm-scale tolerance pair for the current mode: p-power slack turns into
/// a 1/p-power factor on norms.
fn mode_tols(spec: &SpaceSpec) -> (f64, f64) {
    match spec.mode() {
        Mode::Lp { p } => (UPPER_TOL.powf(1.0 / p), LOWER_TOL.powf(1.0 / p)),
        Mode::C0v => (UPPER_TOL, LOWER_TOL),
    }
}

fn cmd_classify(cfg: &Config, out: &OutDir) -> Result<i32, CliError> {
    let v = config::build_weight(&cfg.weight).map_err(CliError::Config)?;
    let (x_max, step) = (cfg.space.x_max, cfg.space.step);
    let cert =
        certify_admissibility(&v, x_max, step).map_err(|e| CliError::Run(e.to_string()))?;
    let v = v.with_certificate(cert.clone());
    match classify_tier(&v, x_max, step) {
        Ok(report) => {
            let mut w = out.create("classify.csv")?;
            report.write_csv(&mut w)?;
            let mut s = out.summary("classify_summary.txt", "weight tier classification")?;
            writeln!(s, "tier: {:?}", report.tier)?;
            writeln!(s, "admissibility: M = {}, rate = {}", fmt(cert.big_m), fmt(cert.rate))?;
            writeln!(s, "gamma: {}", fmt(cert.gamma))?;
            writeln!(s, "integral_estimate: {}", fmt(report.integral_estimate))?;
            writeln!(s, "integral_converged: {}", report.integral_converged)?;
            writeln!(s, "lim_is_zero: {}", report.lim_is_zero)?;
            writeln!(s, "liminf_estimate: {}", fmt(report.liminf_estimate))?;
            writeln!(s, "liminf_zero: {}", report.liminf_zero)?;
            writeln!(s, "sup_ratio_estimate: {}", fmt(report.sup_ratio_estimate))?;
            writeln!(s, "sup_ratio_divergent: {}", report.sup_ratio_divergent)?;
            writeln!(s, "evidence_chain_holds: {}", report.evidence_chain_holds())?;
            Ok(0)
        }
        Err(WeightError::InconclusiveEvidence { reason, evidence }) => {
            let mut s = out.summary("classify_summary.txt", "weight tier classification")?;
            writeln!(s, "tier: inconclusive")?;
            writeln!(s, "reason: {reason}")?;
            let mut j = out.create("classify_evidence.json")?;
            writeln!(j, "{}", serde_json::to_string_pretty(&evidence).expect("serialize"))?;
            eprintln!("InconclusiveEvidence: {reason}");
            Ok(2)
        }
        Err(e) => Err(CliError::Run(e.to_string())),
    }
}

/// Grid samples of one function: only nonzero entries, so sparse block
/// witnesses stay readable. `x` is the cell midpoint for piecewise constant
/// data and the node position otherwise.
fn write_samples(
    out: &OutDir,
    spec: &SpaceSpec,
    members: &[(usize, &GridFunction)],
) -> Result<(), CliError> {
    let mut w = out.create("witness_samples.csv")?;
    writeln!(w, "member,index,x,value")?;
    let offset = match spec.representation() {
        Representation::PiecewiseConstant => 0.5,
        Representation::PiecewiseLinear => 0.0,
    };
    for &(member, f) in members {
        for (i, &val) in f.values().iter().enumerate() {
            if val != 0.0 {
                let x = (i as f64 + offset) * spec.step();
                writeln!(w, "{member},{i},{},{}", fmt(x), fmt(val))?;
            }
        }
    }
    Ok(())
}

fn cmd_witness(cfg: &Config, out: &OutDir, seed: u64) -> Result<i32, CliError> {
    let wc = cfg
        .witness
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [witness] table".into()))?;
    let (spec, cert) = certified_space(cfg)?;
    let run = |e: &dyn std::fmt::Display| CliError::Run(e.to_string());
    let (tol_upper, tol_lower) = mode_tols(&spec);

    match wc {
        WitnessConfig::Nonvanishing { depth, samples } => {
            let seq = find_escape_sequences(spec.weight(), &cert, *depth, spec.x_max(), spec.step())
                .map_err(|e| run(&e))?;
            let f = build_nonvanishing_witness(&seq, &spec).map_err(|e| run(&e))?;
            let report = verify_nonvanishing(&f, &seq, &spec).map_err(|e| run(&e))?;
            let mut w = out.create("witness.csv")?;
            writeln!(w, "check,level,shift,measured,bound,pass")?;
            writeln!(
                w,
                "total_norm,,,{},{},{}",
                fmt(report.norm),
                fmt(report.norm_bound),
                report.norm <= report.norm_bound * tol_upper
            )?;
            for row in &report.levels {
                writeln!(
                    w,
                    "translated_norm,{},{},{},{},{}",
                    row.level,
                    fmt(row.shift),
                    fmt(row.translated_norm),
                    fmt(row.lower_bound),
                    row.translated_norm >= row.lower_bound * tol_lower
                )?;
                writeln!(
                    w,
                    "window_norm,{},{},{},{},{}",
                    row.level,
                    fmt(row.shift),
                    fmt(row.window_norm),
                    fmt(row.window_bound),
                    row.window_norm <= row.window_bound * tol_upper
                )?;
            }
            if samples.unwrap_or(true) {
                write_samples(out, &spec, &[(0, &f)])?;
            }
            let mut s = out.summary("witness_summary.txt", "non-vanishing orbit witness")?;
            writeln!(s, "kind: nonvanishing")?;
            writeln!(s, "levels: {}", seq.len())?;
            writeln!(s, "gamma: {}  M: {}", fmt(seq.gamma), fmt(seq.big_m))?;
            writeln!(s, "norm: {} (bound {})", fmt(report.norm), fmt(report.norm_bound))?;
            writeln!(s, "all_pass: {}", report.all_pass(tol_upper, tol_lower))?;
            Ok(0)
        }
        WitnessConfig::Separated { depth, a, schedule, budget, sample_budget } => {
            let seq = find_escape_sequences(spec.weight(), &cert, *depth, spec.x_max(), spec.step())
                .map_err(|e| run(&e))?;
            let a = resolve_schedule(&seq, a, schedule, budget.unwrap_or(24)).map_err(|e| match e
            {
                ScheduleError::Config(m) => CliError::Config(m),
                ScheduleError::Run(m) => CliError::Run(m),
            })?;
            let family =
                build_separated_family(&seq, &a, sample_budget.unwrap_or(0), seed, &spec)
                    .map_err(|e| run(&e))?;
            let mut w = out.create("witness.csv")?;
            writeln!(w, "level,t,members,min_translated_distance,distance_bound,pass")?;
            let mut all = true;
            for n in 0..seq.len() {
                let members = family.level_members(n);
                let t = seq.t[n];
                let translated: Vec<GridFunction> = members
                    .iter()
                    .map(|m| spec.translate(&m.f, t).map_err(|e| run(&e)))
                    .collect::<Result<_, _>>()?;
                let mut min_d = f64::INFINITY;
                for i in 0..translated.len() {
                    for j in i + 1..translated.len() {
                        min_d = min_d.min(spec.distance(&translated[i], &translated[j]));
                    }
                }
                let bound = family.separation_bound(&spec, n);
                let bound_dist = match spec.mode() {
                    Mode::Lp { p } => bound.powf(1.0 / p),
                    Mode::C0v => bound,
                };
                let pass = translated.len() < 2 || min_d >= bound_dist * tol_lower;
                all &= pass;
                writeln!(
                    w,
                    "{},{},{},{},{},{pass}",
                    n + 1,
                    fmt(t),
                    translated.len(),
                    fmt(if min_d.is_finite() { min_d } else { 0.0 }),
                    fmt(bound_dist)
                )?;
            }
            let refs: Vec<(usize, &GridFunction)> =
                family.members.iter().enumerate().map(|(i, m)| (i, &m.f)).collect();
            write_samples(out, &spec, &refs)?;
            let mut s = out.summary("witness_summary.txt", "separated orbit family")?;
            writeln!(s, "kind: separated")?;
            writeln!(s, "schedule: {a:?}")?;
            writeln!(s, "members: {}", family.members.len())?;
            writeln!(s, "all_pass: {all}")?;
            Ok(0)
        }
        WitnessConfig::Periodic { period, shape } => {
            let shape_f = config::build_function(&spec, shape);
            let f = build_periodic_witness(&spec, *period, &shape_f).map_err(|e| run(&e))?;
            let pc = spec.shift_cells(*period).map_err(|e| run(&e))?;
            let vals = f.values();
            let defect = (0..vals.len() - pc)
                .map(|i| (vals[i] - vals[i + pc]).abs())
                .fold(0.0, f64::max);
            let norm = spec.norm(&f);
            let mut w = out.create("witness.csv")?;
            writeln!(w, "check,measured,bound,pass")?;
            writeln!(w, "norm_finite,{},,{}", fmt(norm), norm.is_finite())?;
            writeln!(w, "tiling_defect,{},{},{}", fmt(defect), fmt(0.0), defect == 0.0)?;
            write_samples(out, &spec, &[(0, &f)])?;
            let mut s = out.summary("witness_summary.txt", "periodic orbit witness")?;
            writeln!(s, "kind: periodic")?;
            writeln!(s, "period: {}", fmt(*period))?;
            writeln!(s, "norm: {}", fmt(norm))?;
            writeln!(s, "tiling_defect: {}", fmt(defect))?;
            Ok(0)
        }
        WitnessConfig::Windowed { window, depth } => {
            let wit = build_windowed_witness(&spec, *window, *depth).map_err(|e| run(&e))?;
            let mut w = out.create("witness.csv")?;
            writeln!(w, "site,visit_time,site_weight,threshold,pass")?;
            for (k, (&t, &sw)) in wit.visit_times.iter().zip(&wit.site_weights).enumerate() {
                let thr = match spec.mode() {
                    Mode::Lp { p } => (2.0f64).powf(-((k + 1) as f64) * p),
                    Mode::C0v => (2.0f64).powi(-((k + 1) as i32)),
                };
                writeln!(w, "{},{},{},{},{}", k + 1, fmt(t), fmt(sw), fmt(thr), sw <= thr)?;
            }
            write_samples(out, &spec, &[(0, &wit.f)])?;
            let mut s = out.summary("witness_summary.txt", "windowed return witness")?;
            writeln!(s, "kind: windowed")?;
            writeln!(s, "window: {}", fmt(wit.window))?;
            writeln!(s, "sites: {}", wit.visit_times.len())?;
            writeln!(s, "c0: {}", fmt(wit.c0))?;
            Ok(0)
        }
    }
}

enum ScheduleError {
    Config(String),
    Run(String),
}

fn resolve_schedule(
    seq: &shiftlab_core::witness::EscapeSequences,
    a: &Option<Vec<usize>>,
    schedule: &Option<String>,
    budget: usize,
) -> Result<Vec<usize>, ScheduleError> {
    if let Some(a) = a {
        return Ok(a.clone());
    }
    match schedule.as_deref().unwrap_or("rate_increasing") {
        "rate_increasing" => {
            rate_increasing_schedule(seq, budget).map_err(|e| ScheduleError::Run(e.to_string()))
        }
        "quadratic" => Ok(quadratic_schedule(seq, budget)),
        other => Err(ScheduleError::Config(format!(
            "unknown schedule {other:?} (use \"rate_increasing\" or \"quadratic\")"
        ))),
    }
}

fn cmd_entropy(cfg: &Config, out: &OutDir) -> Result<i32, CliError> {
    let ec = cfg
        .entropy
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [entropy] table".into()))?;
    let (spec, cert) = certified_space(cfg)?;
    let seq = find_escape_sequences(spec.weight(), &cert, ec.depth, spec.x_max(), spec.step())
        .map_err(|e| CliError::Run(e.to_string()))?;
    let a = resolve_schedule(&seq, &ec.a, &ec.schedule, ec.budget.unwrap_or(24)).map_err(
        |e| match e {
            ScheduleError::Config(m) => CliError::Config(m),
            ScheduleError::Run(m) => CliError::Run(m),
        },
    )?;
    let report = infinite_entropy_experiment(spec.weight(), &cert, ec.depth, &a, &spec)
        .map_err(|e| CliError::Run(e.to_string()))?;
    let mut w = out.create("entropy.csv")?;
    writeln!(w, "level,t,scheduled,count,rate,rate_theory")?;
    for row in &report.levels {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            row.level,
            fmt(row.t),
            row.scheduled,
            row.measured_count,
            fmt(row.measured_rate),
            fmt(row.theoretical_rate)
        )?;
    }
    let mut s = out.summary("entropy_summary.txt", "separated-set growth")?;
    writeln!(s, "schedule: {a:?}")?;
    writeln!(s, "{report}")?;
    Ok(0)
}

/// One row per chain point: its norm, plus the verified link error to the
/// next point (blank on the last row). A chain of n steps prints n + 1 rows.
fn write_chain_csv(
    out: &OutDir,
    spec: &SpaceSpec,
    chain: &Chain,
    errors: &[f64],
) -> Result<(), CliError> {
    let mut w = out.create("chain.csv")?;
    writeln!(w, "index,norm,error_to_next")?;
    for (i, point) in chain.points.iter().enumerate() {
        let err = errors.get(i).map(|e| fmt(*e)).unwrap_or_default();
        writeln!(w, "{i},{},{err}", fmt(spec.norm(point)))?;
    }
    Ok(())
}

fn cmd_chain(cfg: &Config, out: &OutDir, seed: u64) -> Result<i32, CliError> {
    let cc = cfg
        .chain
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [chain] table".into()))?;
    let spec = config::build_space(cfg).map_err(CliError::Config)?;
    let run = |e: &dyn std::fmt::Display| CliError::Run(e.to_string());

    match cc {
        ChainConfig::Constant { target, t, epsilon, export_points } => {
            let g = config::build_function(&spec, target);
            let chain = build_chain_constant_weight(&g, &spec, *t, *epsilon).map_err(|e| run(&e))?;
            let errors = verify_chain(&chain, &spec).map_err(|e| run(&e))?;
            write_chain_csv(out, &spec, &chain, &errors)?;
            if export_points.unwrap_or(false) {
                let refs: Vec<(usize, &GridFunction)> =
                    chain.points.iter().enumerate().collect();
                write_samples(out, &spec, &refs)?;
            }
            let max_err = errors.iter().cloned().fold(0.0, f64::max);
            let mut s = out.summary("chain_summary.txt", "eps-chain under constant weight")?;
            writeln!(s, "points: {}", chain.len())?;
            writeln!(s, "t: {}  epsilon: {}", fmt(*t), fmt(*epsilon))?;
            writeln!(s, "max_step_error: {}", fmt(max_err))?;
            writeln!(s, "verified: {}", max_err < *epsilon)?;
            Ok(0)
        }
        ChainConfig::ThroughZero { start, target, t, epsilon } => {
            let f = config::build_function(&spec, start);
            let g = config::build_function(&spec, target);
            let down = decay_chain_to_zero(&f, &spec, *t, *epsilon).map_err(|e| run(&e))?;
            let up = build_chain_constant_weight(&g, &spec, *t, *epsilon).map_err(|e| run(&e))?;
            let chain = concatenate_chains(&down, &up).map_err(|e| run(&e))?;
            let errors = verify_chain(&chain, &spec).map_err(|e| run(&e))?;
            write_chain_csv(out, &spec, &chain, &errors)?;
            let max_err = errors.iter().cloned().fold(0.0, f64::max);
            let mut s = out.summary("chain_summary.txt", "eps-chain through zero")?;
            writeln!(s, "points: {} ({} down, {} up)", chain.len(), down.len(), up.len())?;
            writeln!(s, "t: {}  epsilon: {}", fmt(*t), fmt(*epsilon))?;
            writeln!(s, "max_step_error: {}", fmt(max_err))?;
            writeln!(s, "verified: {}", max_err < *epsilon)?;
            Ok(0)
        }
        ChainConfig::Escape { start, t, epsilon, budget } => {
            let f = config::build_function(&spec, start);
            let verdict = chain_escape_test(&spec, *t, &f, *epsilon, *budget, seed)
                .map_err(|e| run(&e))?;
            let mut w = out.create("chain.csv")?;
            writeln!(w, "verdict,step,norm")?;
            let mut s = out.summary("chain_summary.txt", "chain escape search")?;
            writeln!(s, "t: {}  epsilon: {}  budget: {budget}", fmt(*t), fmt(*epsilon))?;
            writeln!(s, "ball_radius: {}", fmt(spec.norm(&f) / 2.0))?;
            match verdict {
                EscapeVerdict::NoEscape { steps, max_norm } => {
                    writeln!(w, "no_escape,{steps},{}", fmt(max_norm))?;
                    writeln!(s, "verdict: no_escape after {steps} steps")?;
                    writeln!(s, "max_norm: {}", fmt(max_norm))?;
                }
                EscapeVerdict::Escaped { at_step, norm } => {
                    writeln!(w, "escaped,{at_step},{}", fmt(norm))?;
                    writeln!(s, "verdict: escaped at step {at_step}")?;
                    writeln!(s, "norm: {}", fmt(norm))?;
                }
            }
            Ok(0)
        }
    }
}

fn random_probes(spec: &SpaceSpec, count: usize, seed: u64) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x_max, step) = (spec.x_max(), spec.step());
    (0..count)
        .map(|_| {
            let blocks = rng.gen_range(1..=3);
            let mut f = spec.zero();
            for _ in 0..blocks {
                let a = rng.gen_range(0.0..x_max / 4.0);
                let w = rng.gen_range(step..x_max / 50.0);
                let amp = rng.gen_range(0.5..2.0);
                f = f.add(&spec.indicator(a, a + w, amp));
            }
            f
        })
        .collect()
}

fn cmd_diagnose(cfg: &Config, out: &OutDir, seed: u64) -> Result<i32, CliError> {
    let dc = cfg
        .diagnose
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [diagnose] table".into()))?;
    let spec = config::build_space(cfg).map_err(CliError::Config)?;
    let run = |e: &dyn std::fmt::Display| CliError::Run(e.to_string());

    match dc {
        DiagnoseConfig::Orbit { f, t_list, t_max, t_step, window } => {
            let f = config::build_function(&spec, f);
            let times = config::resolve_times(t_list, t_max, t_step).map_err(CliError::Config)?;
            let trace = orbit_trace(&f, &spec, &times, *window).map_err(|e| run(&e))?;
            let mut w = out.create("diagnose.csv")?;
            trace.write_csv(&mut w)?;
            let last = *trace.norms.last().expect("nonempty");
            let peak = trace.norms.iter().cloned().fold(0.0, f64::max);
            let mut s = out.summary("diagnose_summary.txt", "orbit trace")?;
            writeln!(s, "kind: orbit")?;
            writeln!(s, "initial_norm: {}", fmt(trace.norms[0]))?;
            writeln!(s, "peak_norm: {}", fmt(peak))?;
            writeln!(s, "final_norm: {}", fmt(last))?;
            Ok(0)
        }
        DiagnoseConfig::LiYorke { f, g, t_list, t_max, t_step, delta } => {
            let f = config::build_function(&spec, f);
            let g = g.as_ref().map(|g| config::build_function(&spec, g)).unwrap_or(spec.zero());
            let times = config::resolve_times(t_list, t_max, t_step).map_err(CliError::Config)?;
            let report = li_yorke_check(&f, &g, &spec, &times, *delta).map_err(|e| run(&e))?;
            let verdict = match report.verdict {
                LiYorkeVerdict::Scrambled => "scrambled",
                LiYorkeVerdict::NotScrambled => "not_scrambled",
                LiYorkeVerdict::Inconclusive => "inconclusive",
            };
            let mut w = out.create("diagnose.csv")?;
            writeln!(w, "verdict,min_distance,trailing_max,tol_zero,delta,horizon")?;
            writeln!(
                w,
                "{verdict},{},{},{},{},{}",
                fmt(report.min_distance),
                fmt(report.trailing_max),
                fmt(report.tol_zero),
                fmt(report.delta),
                fmt(report.horizon)
            )?;
            let mut s = out.summary("diagnose_summary.txt", "scrambled-pair test")?;
            writeln!(s, "kind: li_yorke")?;
            writeln!(s, "verdict: {verdict}")?;
            writeln!(s, "min_distance: {}", fmt(report.min_distance))?;
            writeln!(s, "trailing_max: {}", fmt(report.trailing_max))?;
            Ok(0)
        }
        DiagnoseConfig::Densities { f, g, horizon, delta, epsilon, stride } => {
            let f = config::build_function(&spec, f);
            let g = g.as_ref().map(|g| config::build_function(&spec, g)).unwrap_or(spec.zero());
            let report = distributional_densities(
                &f,
                &g,
                &spec,
                *horizon,
                *delta,
                *epsilon,
                stride.unwrap_or(1),
            )
            .map_err(|e| run(&e))?;
            let mut w = out.create("diagnose.csv")?;
            report.write_csv(&mut w)?;
            let mut s = out.summary("diagnose_summary.txt", "orbit closeness densities")?;
            writeln!(s, "kind: densities")?;
            writeln!(s, "lower_density (delta = {}): {}", fmt(report.delta), fmt(report.lower))?;
            writeln!(s, "upper_density (eps = {}): {}", fmt(report.epsilon), fmt(report.upper))?;
            Ok(0)
        }
        DiagnoseConfig::UniformBound { probes, random_probes: rp, t_list, t_max, t_step } => {
            let fns: Vec<GridFunction> = match (probes, rp) {
                (Some(list), _) => {
                    list.iter().map(|blocks| config::build_function(&spec, blocks)).collect()
                }
                (None, Some(n)) => random_probes(&spec, *n, seed),
                (None, None) => {
                    return Err(CliError::Config(
                        "uniform_bound needs probes or random_probes".into(),
                    ))
                }
            };
            let times = config::resolve_times(t_list, t_max, t_step).map_err(CliError::Config)?;
            let times: Vec<f64> = times.into_iter().filter(|&t| t > 0.0).collect();
            let report = uniform_bound_probe(&spec, &times, &fns).map_err(|e| run(&e))?;
            let ratio = sup_ratio(spec.weight(), spec.x_max(), spec.step())
                .map_err(|e| run(&e))?;
            let bound = match spec.mode() {
                Mode::Lp { p } => ratio.value.powf(1.0 / p),
                Mode::C0v => ratio.value,
            };
            let pass = report.max_ratio <= bound * UPPER_TOL;
            let mut w = out.create("diagnose.csv")?;
            writeln!(w, "max_ratio,probe,t,ratio_bound,pass")?;
            writeln!(
                w,
                "{},{},{},{},{pass}",
                fmt(report.max_ratio),
                report.probe,
                fmt(report.t),
                fmt(bound)
            )?;
            let mut s = out.summary("diagnose_summary.txt", "operator stretch probe")?;
            writeln!(s, "kind: uniform_bound")?;
            writeln!(s, "probes: {}  times: {}", fns.len(), times.len())?;
            writeln!(s, "max_ratio: {} at probe {}, t = {}", fmt(report.max_ratio), report.probe, fmt(report.t))?;
            writeln!(s, "grid_ratio_bound: {}", fmt(bound))?;
            writeln!(s, "within_bound: {pass}")?;
            Ok(0)
        }
    }
}
