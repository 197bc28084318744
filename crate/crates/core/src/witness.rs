//! Constructive witnesses for the chaos tiers.
//!
//! The central object is an escape sequence: interleaved grid points
//! y_1 < z_1 < y_2 < z_2 < ... with weight ratio v(y_n)/v(z_n) > 2^n and
//! windows [z_n - gamma, z_n] pairwise disjoint. From it we build the
//! non-vanishing witness (a sum of blocks whose translates by t_n keep norm
//! bounded below) and the separated family (blocks split across subwindows
//! J_n^k so that distinct members stay apart under T_{t_n}).
//!
//! Two further witnesses need no escape structure: a periodic extension
//! (finite norm iff the weight is integrable, resp. vanishing) and a windowed
//! witness of unit bumps placed where the weight is small (its translates
//! keep mass on a fixed window near the origin).

use crate::space::{GridFunction, Mode, Representation, SpaceError, SpaceSpec};
use crate::weights::{grid_cells, AdmissibilityCertificate, WeightFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("HorizonExhausted({achieved}): no grid pair with ratio > 2^{} exists before x_max; {achieved} levels were achieved", achieved + 1)]
    HorizonExhausted { achieved: usize },
    #[error("GridTooCoarse: {0}")]
    GridTooCoarse(String),
    #[error("ScheduleInfeasible: level {level} needs {needed} subintervals but only {cap} fit the window and budget")]
    ScheduleInfeasible {
        level: usize,
        needed: usize,
        cap: usize,
    },
    #[error("NormDiverged: {0}")]
    NormDiverged(String),
    #[error("NoSmallWeightSites: no window of width {window} with weight mass below {threshold:.3e} (level {level}) before the horizon")]
    NoSmallWeightSites {
        window: f64,
        level: usize,
        threshold: f64,
    },
    #[error("CertificateMissing: witness construction requires a certified weight")]
    CertificateMissing,
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Interleaved escape points with their derived shifts t_n = z_n - y_n -
/// gamma, snapped up to grid multiples (so the certified upper bound
/// ratio <= M exp(w (t_n + gamma)) survives snapping).
#[derive(Debug, Clone, Serialize)]
pub struct EscapeSequences {
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub t: Vec<f64>,
    pub ratios: Vec<f64>,
    pub gamma: f64,
    pub big_m: f64,
    pub rate: f64,
    pub step: f64,
    /// Working window width in cells: the largest even count with
    /// window_cells * step <= gamma. Blocks occupy [z - window, z].
    pub window_cells: usize,
}

impl EscapeSequences {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn window_width(&self) -> f64 {
        self.window_cells as f64 * self.step
    }
}

/// Even cell count fitting inside gamma; even so tents have a center node.
fn window_cells(gamma: f64, step: f64) -> Result<usize, WitnessError> {
    let half = (gamma / (2.0 * step) + 1e-9).floor() as usize;
    if half < 2 {
        return Err(WitnessError::GridTooCoarse(format!(
            "window gamma = {gamma} spans fewer than 4 cells at step = {step}"
        )));
    }
    Ok(2 * half)
}

/// Greedy escape search: for each level n the scan advances z over the grid
/// and tracks the best admissible y (the running argmax of v over
/// (z_{n-1}, z - sep]); the first z whose best ratio exceeds 2^n wins. This
/// yields the smallest feasible z_n, which keeps the horizon demand minimal.
pub fn find_escape_sequences(
    v: &WeightFunction,
    cert: &AdmissibilityCertificate,
    depth: usize,
    x_max: f64,
    step: f64,
) -> Result<EscapeSequences, WitnessError> {
    if depth == 0 {
        return Err(WitnessError::Mismatch("depth must be at least 1".into()));
    }
    let n = grid_cells(x_max, step)
        .map_err(|e| WitnessError::Mismatch(format!("bad grid: {e}")))?;
    let gamma = cert.gamma;
    let win = window_cells(gamma, step)?;
    // strict z - y > gamma in grid cells, so t_n > 0 before snapping
    let sep = (gamma / step + 1e-9).floor() as usize + 1;
    let vals: Vec<f64> = (0..=n)
        .map(|i| {
            v.try_value(i as f64 * step)
                .map_err(|e| WitnessError::Mismatch(format!("weight unusable: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut seq = EscapeSequences {
        y: Vec::new(),
        z: Vec::new(),
        t: Vec::new(),
        ratios: Vec::new(),
        gamma,
        big_m: cert.big_m,
        rate: cert.rate,
        step,
        window_cells: win,
    };
    let mut prev_z: Option<usize> = None;
    for level in 1..=depth {
        let target = (2.0f64).powi(level as i32);
        let y_lo = prev_z.map_or(0, |z| z + 1);
        let mut best = (f64::NEG_INFINITY, 0usize);
        let mut found = None;
        for z_idx in (y_lo + sep)..=n {
            let y_new = z_idx - sep;
            if vals[y_new] > best.0 {
                best = (vals[y_new], y_new);
            }
            if best.0 > target * vals[z_idx] {
                found = Some((best.1, z_idx));
                break;
            }
        }
        let Some((y_idx, z_idx)) = found else {
            return Err(WitnessError::HorizonExhausted { achieved: level - 1 });
        };
        let t_raw = (z_idx - y_idx) as f64 * step - gamma;
        let t = (t_raw / step - 1e-9).ceil().max(1.0) * step;
        seq.y.push(y_idx as f64 * step);
        seq.z.push(z_idx as f64 * step);
        seq.t.push(t);
        seq.ratios.push(vals[y_idx] / vals[z_idx]);
        prev_z = Some(z_idx);
    }
    Ok(seq)
}

fn check_compatible(seq: &EscapeSequences, spec: &SpaceSpec) -> Result<(), WitnessError> {
    if (seq.step - spec.step()).abs() > 1e-12 * seq.step.max(1.0) {
        return Err(WitnessError::Mismatch(format!(
            "escape sequence built at step {} but space uses {}",
            seq.step,
            spec.step()
        )));
    }
    let z_last = *seq.z.last().expect("nonempty sequence");
    if z_last > spec.x_max() + 1e-9 {
        return Err(WitnessError::Mismatch(format!(
            "escape window end {} exceeds the horizon {}",
            z_last,
            spec.x_max()
        )));
    }
    Ok(())
}

fn node_index(x: f64, step: f64) -> usize {
    (x / step).round() as usize
}

/// Places a constant-height block on the cell range [c0, c1). Piecewise
/// linear samples keep the range's end nodes at zero so the completed graph
/// stays inside the window; the sup-mode variant is a tent with its peak at
/// the center node.
fn add_block(spec: &SpaceSpec, values: &mut [f64], c0: usize, c1: usize, amp: f64) {
    match (spec.mode(), spec.representation()) {
        (Mode::C0v, _) => {
            let center = (c0 + c1) / 2;
            let half = ((c1 - c0) as f64) / 2.0;
            for node in c0..=c1 {
                let s = 1.0 - (node as f64 - center as f64).abs() / half;
                values[node] = values[node].max(amp * s.max(0.0));
            }
        }
        (_, Representation::PiecewiseConstant) => {
            for cell in c0..c1 {
                values[cell] = amp;
            }
        }
        (_, Representation::PiecewiseLinear) => {
            for node in (c0 + 1)..c1 {
                values[node] = amp;
            }
        }
    }
}

/// Block amplitude for a run of `width_cells` cells at level n: in Lp mode
/// the p-th power mass of the run is pinned to window_width / (v(z_n) 2^n)
/// regardless of how the tiling rounded the run width, so separation bounds
/// survive cell snapping. Sup mode is width-independent.
fn block_amplitude(
    spec: &SpaceSpec,
    seq: &EscapeSequences,
    level: usize,
    width_cells: usize,
    count: usize,
) -> f64 {
    let vz = spec.weight().value(seq.z[level]);
    let pow = (2.0f64).powi(level as i32 + 1);
    match spec.mode() {
        Mode::Lp { p } => {
            let width = width_cells as f64 * seq.step;
            (seq.window_width() / (width * vz * pow)).powf(1.0 / p)
        }
        Mode::C0v => count as f64 / (vz * pow),
    }
}

/// Sum of level blocks on [z_n - window, z_n] with amplitude chosen so the
/// translate by t_n keeps norm bounded below while the total norm stays
/// bounded above.
pub fn build_nonvanishing_witness(
    seq: &EscapeSequences,
    spec: &SpaceSpec,
) -> Result<GridFunction, WitnessError> {
    check_compatible(seq, spec)?;
    let mut values = spec.zero().values().to_vec();
    for level in 0..seq.len() {
        let z_idx = node_index(seq.z[level], seq.step);
        let amp = block_amplitude(spec, seq, level, seq.window_cells, 1);
        add_block(spec, &mut values, z_idx - seq.window_cells, z_idx, amp);
    }
    Ok(spec.from_values(values)?)
}

/// Per-level verification row for the non-vanishing witness.
#[derive(Debug, Clone, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub shift: f64,
    pub translated_norm: f64,
    /// Certified lower bound for translated_norm.
    pub lower_bound: f64,
    /// Norm of the witness restricted to this level's window.
    pub window_norm: f64,
    /// Certified upper bound for window_norm.
    pub window_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonvanishingReport {
    pub norm: f64,
    /// Certified upper bound for the total norm: (2 M gamma)^{1/p}, or M in
    /// sup mode.
    pub norm_bound: f64,
    pub levels: Vec<LevelCheck>,
}

impl NonvanishingReport {
    pub fn all_pass(&self, tol_upper: f64, tol_lower: f64) -> bool {
        self.norm <= self.norm_bound * tol_upper
            && self.levels.iter().all(|row| {
                row.translated_norm >= row.lower_bound * tol_lower
                    && row.window_norm <= row.window_bound * tol_upper
            })
    }
}

/// Measures the witness inequalities by quadrature: total norm against
/// (2 M gamma)^{1/p}, each translated norm against (gamma / 2M)^{1/p}, each
/// windowed norm against (M gamma / 2^{n-1})^{1/p} (sup mode: M, 1/(2M),
/// M/2^{n-1}).
pub fn verify_nonvanishing(
    f: &GridFunction,
    seq: &EscapeSequences,
    spec: &SpaceSpec,
) -> Result<NonvanishingReport, WitnessError> {
    check_compatible(seq, spec)?;
    let (m, gamma) = (seq.big_m, seq.gamma);
    let (norm_bound, lower_bound): (f64, f64) = match spec.mode() {
        Mode::Lp { p } => (
            (2.0 * m * gamma).powf(1.0 / p),
            (gamma / (2.0 * m)).powf(1.0 / p),
        ),
        Mode::C0v => (m, 1.0 / (2.0 * m)),
    };
    let mut levels = Vec::new();
    for level in 0..seq.len() {
        let z_idx = node_index(seq.z[level], seq.step);
        let shifted = spec.translate(f, seq.t[level])?;
        let window_bound = match spec.mode() {
            Mode::Lp { p } => {
                (m * gamma / (2.0f64).powi(level as i32)).powf(1.0 / p)
            }
            Mode::C0v => m / (2.0f64).powi(level as i32),
        };
        levels.push(LevelCheck {
            level: level + 1,
            shift: seq.t[level],
            translated_norm: spec.norm(&shifted),
            lower_bound,
            window_norm: spec.window_norm_cells(f, z_idx - seq.window_cells, z_idx),
            window_bound,
        });
    }
    Ok(NonvanishingReport {
        norm: spec.norm(f),
        norm_bound,
        levels,
    })
}

/// One member of a separated family: its subwindow choices and samples.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyMember {
    /// 1-based subwindow choice per level.
    pub phi: Vec<usize>,
    pub f: GridFunction,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparatedFamily {
    pub sequences: EscapeSequences,
    pub a: Vec<usize>,
    /// [level][k] -> (lo, hi) of subwindow J_n^k. k runs right to left: k = 1
    /// is the subwindow ending at z_n.
    pub intervals: Vec<Vec<(f64, f64)>>,
    pub members: Vec<FamilyMember>,
}

impl SeparatedFamily {
    /// Members whose choices are baseline (1) at every level except n, where
    /// all a_n choices occur: the canonical level-n separated set.
    pub fn level_members(&self, level: usize) -> Vec<&FamilyMember> {
        self.members
            .iter()
            .filter(|mem| {
                mem.phi
                    .iter()
                    .enumerate()
                    .all(|(m, &c)| m == level || c == 1)
            })
            .collect()
    }

    /// Certified pairwise lower bound (p-th power in Lp mode) for distinct
    /// level-n members after translating by t_n.
    pub fn separation_bound(&self, spec: &SpaceSpec, level: usize) -> f64 {
        let (m, gamma) = (self.sequences.big_m, self.sequences.gamma);
        match spec.mode() {
            Mode::Lp { .. } => gamma / m,
            Mode::C0v => self.a[level] as f64 / (2.0 * m),
        }
    }
}

fn member_function(
    spec: &SpaceSpec,
    seq: &EscapeSequences,
    tiling: &[Vec<(usize, usize)>],
    a: &[usize],
    phi: &[usize],
) -> Result<GridFunction, WitnessError> {
    let mut values = spec.zero().values().to_vec();
    for level in 0..seq.len() {
        let (c0, c1) = tiling[level][phi[level] - 1];
        let amp = block_amplitude(spec, seq, level, c1 - c0, a[level]);
        add_block(spec, &mut values, c0, c1, amp);
    }
    Ok(spec.from_values(values)?)
}

/// Builds the family {f_phi}: each member places one amplitude-adjusted block
/// per level in the subwindow its choice function phi selects. Materialized
/// members are, per level n, the a_n members varying only at n (the canonical
/// separated set), plus up to `sample_budget` random choice functions.
pub fn build_separated_family(
    seq: &EscapeSequences,
    a: &[usize],
    sample_budget: usize,
    seed: u64,
    spec: &SpaceSpec,
) -> Result<SeparatedFamily, WitnessError> {
    check_compatible(seq, spec)?;
    if a.len() != seq.len() {
        return Err(WitnessError::Mismatch(format!(
            "schedule has {} levels, sequence has {}",
            a.len(),
            seq.len()
        )));
    }
    if a.iter().any(|&c| c == 0) {
        return Err(WitnessError::Mismatch("schedule entries must be >= 1".into()));
    }
    // tile each window into a_n cell runs of >= 2 cells, right to left
    let mut tiling: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut intervals = Vec::new();
    for (level, &count) in a.iter().enumerate() {
        let win = seq.window_cells;
        if win / count < 2 {
            return Err(WitnessError::GridTooCoarse(format!(
                "level {}: window of {} cells cannot hold {} subintervals of >= 2 cells",
                level + 1,
                win,
                count
            )));
        }
        let z_idx = node_index(seq.z[level], seq.step);
        let base = win / count;
        let rem = win % count;
        let mut runs = Vec::with_capacity(count);
        let mut hi = z_idx;
        for k in 0..count {
            let width = base + usize::from(k < rem);
            runs.push((hi - width, hi));
            hi -= width;
        }
        intervals.push(
            runs.iter()
                .map(|&(c0, c1)| (c0 as f64 * seq.step, c1 as f64 * seq.step))
                .collect(),
        );
        tiling.push(runs);
    }

    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut members = Vec::new();
    let push = |phi: Vec<usize>, members: &mut Vec<FamilyMember>, seen: &mut Vec<Vec<usize>>|
     -> Result<(), WitnessError> {
        if seen.contains(&phi) {
            return Ok(());
        }
        let f = member_function(spec, seq, &tiling, a, &phi)?;
        seen.push(phi.clone());
        members.push(FamilyMember { phi, f });
        Ok(())
    };
    for level in 0..seq.len() {
        for choice in 1..=a[level] {
            let mut phi = vec![1usize; seq.len()];
            phi[level] = choice;
            push(phi, &mut members, &mut seen)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_budget {
        let phi: Vec<usize> = a.iter().map(|&c| rng.gen_range(1..=c)).collect();
        push(phi, &mut members, &mut seen)?;
    }
    Ok(SeparatedFamily {
        sequences: seq.clone(),
        a: a.to_vec(),
        intervals,
        members,
    })
}

/// Largest subinterval count a window can hold alongside a member budget.
pub fn level_capacity(seq: &EscapeSequences, budget: usize) -> usize {
    (seq.window_cells / 2).min(budget)
}

/// Smallest schedule whose rate column ln(a_n)/t_n strictly increases:
/// a_1 = 1, then each a_n is the least integer beating the previous rate.
/// The quadratic default grows much faster; this one respects small exact
/// search budgets.
pub fn rate_increasing_schedule(
    seq: &EscapeSequences,
    budget: usize,
) -> Result<Vec<usize>, WitnessError> {
    let cap = level_capacity(seq, budget);
    let mut a = Vec::with_capacity(seq.len());
    let mut prev_rate = 0.0f64;
    for level in 0..seq.len() {
        if level == 0 {
            a.push(1);
            continue;
        }
        let t = seq.t[level];
        let needed = (prev_rate * t).exp().floor() as usize + 1;
        if needed > cap {
            return Err(WitnessError::ScheduleInfeasible {
                level: level + 1,
                needed,
                cap,
            });
        }
        prev_rate = (needed as f64).ln() / t;
        a.push(needed);
    }
    Ok(a)
}

/// Doubly exponential default schedule a_n = 2^(n^2), capped by the window
/// capacity and the member budget. Capping can flatten the rate column; use
/// `rate_increasing_schedule` when strict growth matters.
pub fn quadratic_schedule(seq: &EscapeSequences, budget: usize) -> Vec<usize> {
    let cap = level_capacity(seq, budget).max(1);
    (1..=seq.len())
        .map(|n| {
            if n * n >= 63 {
                cap
            } else {
                (1usize << (n * n)).min(cap)
            }
        })
        .collect()
}

/// Tiles `shape`'s first period across the horizon. The result satisfies
/// T_period f = f exactly on the overlap. Fails with NormDiverged when the
/// tail test shows the weight cannot absorb a periodic function: in Lp mode
/// the last decade of [0, x_max] holds more than 10% of the p-mass, in sup
/// mode the trailing half of |f| v has not decayed.
pub fn build_periodic_witness(
    spec: &SpaceSpec,
    period: f64,
    shape: &GridFunction,
) -> Result<GridFunction, WitnessError> {
    let pc = spec.shift_cells(period)?;
    if pc == 0 {
        return Err(WitnessError::Mismatch("period must be positive".into()));
    }
    let len = shape.values().len();
    let values: Vec<f64> = (0..len).map(|i| shape.values()[i % pc]).collect();
    let f = spec.from_values(values)?;
    match spec.mode() {
        Mode::Lp { .. } => {
            let total = spec.norm(&f);
            let cells = spec.cells();
            let tail = spec.window_norm_cells(&f, cells / 10, cells);
            let p = spec.p().expect("lp mode");
            let frac = if total > 0.0 {
                (tail / total).powf(p)
            } else {
                0.0
            };
            if frac > 0.10 {
                return Err(WitnessError::NormDiverged(format!(
                    "periodic extension keeps {:.1}% of its p-mass in the last decade; the weight is not integrable",
                    frac * 100.0
                )));
            }
        }
        Mode::C0v => {
            let total = spec.norm(&f);
            let trailing = spec.window_norm_cells(&f, spec.cells() / 2, spec.cells());
            if total > 0.0 && trailing > 1e-6 * total {
                return Err(WitnessError::NormDiverged(format!(
                    "weighted envelope of the periodic extension has not vanished: trailing sup {trailing:.3e} vs overall {total:.3e}"
                )));
            }
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowedWitness {
    pub f: GridFunction,
    /// Shifts t_k = x_k bringing each bump onto [0, window].
    pub visit_times: Vec<f64>,
    /// Grid-snapped window width actually used.
    pub window: f64,
    /// Smallest windowed norm ||(T_{t_k} f) chi_[0,window]|| over the visits.
    pub c0: f64,
    /// Weight mass (Lp) or weight sup (sup mode) of each chosen site window.
    pub site_weights: Vec<f64>,
}

/// Unit bumps on K windows where the weight is small enough that bump k
/// contributes at most 2^-k to the norm, making the tail series geometric.
/// Each translate T_{x_k} f restores a full bump on [0, window], so the
/// windowed norms at visit times stay above the reported c0.
pub fn build_windowed_witness(
    spec: &SpaceSpec,
    window: f64,
    depth: usize,
) -> Result<WindowedWitness, WitnessError> {
    let ac = ((window / spec.step()) + 1e-9).floor() as usize;
    if ac < 1 {
        return Err(WitnessError::GridTooCoarse(format!(
            "window {window} is narrower than one grid cell"
        )));
    }
    if depth == 0 {
        return Err(WitnessError::Mismatch("need at least one site".into()));
    }
    let n = spec.cells();
    let v = spec.weight();
    let nodes: Vec<f64> = (0..=n).map(|i| v.value(i as f64 * spec.step())).collect();
    // per-cell trapezoid masses, prefix-summed for O(1) window mass
    let mut prefix = vec![0.0f64; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + 0.5 * spec.step() * (nodes[i] + nodes[i + 1]);
    }
    let site_weight = |c: usize| -> f64 {
        match spec.mode() {
            Mode::Lp { .. } => prefix[c + ac] - prefix[c],
            Mode::C0v => nodes[c..=c + ac].iter().cloned().fold(0.0, f64::max),
        }
    };
    let threshold = |k: usize| -> f64 {
        match spec.mode() {
            // norm contribution (integral)^{1/p} <= 2^-k
            Mode::Lp { p } => (2.0f64).powf(-(k as f64) * p),
            Mode::C0v => (2.0f64).powi(-(k as i32)),
        }
    };

    let mut sites = Vec::with_capacity(depth);
    let mut weights = Vec::with_capacity(depth);
    let mut c = 0usize;
    for k in 1..=depth {
        let thr = threshold(k);
        let found = loop {
            if c + ac > n {
                return Err(WitnessError::NoSmallWeightSites {
                    window: ac as f64 * spec.step(),
                    level: k,
                    threshold: thr,
                });
            }
            let w = site_weight(c);
            if w <= thr {
                break (c, w);
            }
            c += 1;
        };
        sites.push(found.0);
        weights.push(found.1);
        // two-cell gap so piecewise linear ramps of adjacent bumps stay apart
        c = found.0 + ac + 2;
    }

    let mut values = spec.zero().values().to_vec();
    for &site in &sites {
        match (spec.mode(), spec.representation()) {
            (Mode::C0v, _) => {
                let center = site + ac / 2;
                let half = (ac as f64 / 2.0).max(0.5);
                for node in site..=site + ac {
                    let s = 1.0 - (node as f64 - center as f64).abs() / half;
                    values[node] = values[node].max(s.max(0.0));
                }
            }
            (_, Representation::PiecewiseConstant) => {
                for cell in site..site + ac {
                    values[cell] = 1.0;
                }
            }
            (_, Representation::PiecewiseLinear) => {
                for node in site..=site + ac {
                    values[node] = 1.0;
                }
            }
        }
    }
    let f = spec.from_values(values)?;

    let mut c0 = f64::INFINITY;
    let visit_times: Vec<f64> = sites.iter().map(|&s| s as f64 * spec.step()).collect();
    for &t in &visit_times {
        let shifted = spec.translate(&f, t)?;
        c0 = c0.min(spec.window_norm_cells(&shifted, 0, ac));
    }
    Ok(WindowedWitness {
        f,
        visit_times,
        window: ac as f64 * spec.step(),
        c0,
        site_weights: weights,
    })
}
