//! Weight functions on the half line and their admissibility structure.
//!
//! A weight v > 0 is admissible when v(x) <= M * exp(w*t) * v(x + t) for all
//! x, t >= 0 and some M >= 1, w >= 0. Certification searches a finite lattice
//! of (w, M) pairs and checks the inequality exhaustively over grid pairs.
//! The certified pair fixes the window width gamma = ln(2)/w, for which
//! v(x)/v(x') <= 2M whenever x <= x' <= x + gamma.
//!
//! `classify_tier` sorts a certified weight into decay tiers using horizon
//! heuristics: integral tail tests, trailing envelope and infimum trends, and
//! growth of the pairwise ratio sup v(x)/v(y) over x <= y. All thresholds are
//! declared constants; when the evidence is contradictory the classifier
//! refuses to guess and returns `InconclusiveEvidence`.

use serde::Serialize;
use std::collections::VecDeque;
use std::io::{self, Write};
use thiserror::Error;

/// Window width attached to certificates with rate w = 0.
pub const DEFAULT_GAMMA: f64 = 1.0;

const RATE_LATTICE_STEP: f64 = 0.25;
const RATE_LATTICE_MAX: f64 = 8.0;
const BIG_M_STEP: f64 = 0.5;
const BIG_M_MAX: f64 = 64.0;

// Divergence heuristics. The integral is treated as divergent when the mass of
// the last decade [X/10, X] stays above TAIL_FRAC_LIMIT of the total at both
// the half and full horizon. The pairwise ratio counts as divergent once it
// exceeds RATIO_DIVERGED and at least doubled between the two horizons.
const TAIL_FRAC_LIMIT: f64 = 0.10;
const RATIO_DIVERGED: f64 = 1e6;
const RATIO_GROWTH: f64 = 2.0;
const RATIO_FLAT: f64 = 1.05;
const LIM_ZERO_REL: f64 = 1e-6;
const LIMINF_SMALL_REL: f64 = 0.05;
const SHRINKING_FACTOR: f64 = 0.75;
const STABLE_FACTOR: f64 = 0.9;

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("NotAdmissible: no lattice pair (w <= {max_rate}, M <= {max_m}) certifies the weight on [0, {x_max}]; smallest required M was {required_m:.3e}")]
    NotAdmissible {
        x_max: f64,
        max_rate: f64,
        max_m: f64,
        required_m: f64,
    },
    #[error("InconclusiveEvidence: {reason}")]
    InconclusiveEvidence {
        reason: String,
        evidence: Box<TierEvidence>,
    },
    #[error("domain violation: weight sampled at x = {x} outside its tabulated domain [0, {x_max}]")]
    DomainViolation { x: f64, x_max: f64 },
    #[error("invalid weight parameters: {0}")]
    InvalidParams(String),
    #[error("certificate missing: classification requires a certified weight")]
    CertificateMissing,
}

/// Closed-form and tabulated weight shapes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WeightKind {
    /// v(x) = c.
    Constant { c: f64 },
    /// v(x) = base^x. Growing for base > 1, decaying for base < 1.
    Exponential { base: f64 },
    /// v(x) = 1 / (1 + x).
    RationalDecay,
    /// v(x) = exp(-x).
    IntegrableExp,
    /// Baseline 1 with spikes of height e^n at x = n * spacing, n = 1..=count,
    /// rising and falling at `rate` in log scale.
    SpikeTrain { spacing: f64, rate: f64, count: usize },
    /// Samples (xs, vs) interpolated linearly in log v; defined on [0, xs.last()].
    Tabulated { xs: Vec<f64>, vs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightFunction {
    kind: WeightKind,
    certificate: Option<AdmissibilityCertificate>,
}

impl WeightFunction {
    pub fn new(kind: WeightKind) -> Result<Self, WeightError> {
        match &kind {
            WeightKind::Constant { c } => {
                if !c.is_finite() || *c <= 0.0 {
                    return Err(WeightError::InvalidParams(format!(
                        "constant weight must be positive, got {c}"
                    )));
                }
            }
            WeightKind::Exponential { base } => {
                if !base.is_finite() || *base <= 0.0 {
                    return Err(WeightError::InvalidParams(format!(
                        "exponential base must be positive, got {base}"
                    )));
                }
            }
            WeightKind::RationalDecay | WeightKind::IntegrableExp => {}
            WeightKind::SpikeTrain {
                spacing,
                rate,
                count,
            } => {
                if !spacing.is_finite() || *spacing <= 0.0 || !rate.is_finite() || *rate <= 0.0 {
                    return Err(WeightError::InvalidParams(
                        "spike train needs positive spacing and rate".into(),
                    ));
                }
                if *count == 0 || *count > 10_000 {
                    return Err(WeightError::InvalidParams(format!(
                        "spike count {count} outside 1..=10000"
                    )));
                }
            }
            WeightKind::Tabulated { xs, vs } => {
                if xs.len() < 2 || xs.len() != vs.len() {
                    return Err(WeightError::InvalidParams(
                        "tabulated weight needs matching xs/vs with at least two samples".into(),
                    ));
                }
                if xs[0].abs() > 1e-12 {
                    return Err(WeightError::InvalidParams(
                        "tabulated domain must start at 0".into(),
                    ));
                }
                if !xs.windows(2).all(|p| p[1] > p[0]) {
                    return Err(WeightError::InvalidParams(
                        "tabulated xs must be strictly increasing".into(),
                    ));
                }
                if !vs.iter().all(|v| v.is_finite() && *v > 0.0) {
                    return Err(WeightError::InvalidParams(
                        "tabulated values must be finite and positive".into(),
                    ));
                }
            }
        }
        Ok(Self {
            kind,
            certificate: None,
        })
    }

    pub fn constant(c: f64) -> Result<Self, WeightError> {
        Self::new(WeightKind::Constant { c })
    }

    pub fn exponential(base: f64) -> Result<Self, WeightError> {
        Self::new(WeightKind::Exponential { base })
    }

    pub fn rational_decay() -> Self {
        Self::new(WeightKind::RationalDecay).expect("parameterless")
    }

    pub fn integrable_exp() -> Self {
        Self::new(WeightKind::IntegrableExp).expect("parameterless")
    }

    pub fn spike_train(spacing: f64, rate: f64, count: usize) -> Result<Self, WeightError> {
        Self::new(WeightKind::SpikeTrain {
            spacing,
            rate,
            count,
        })
    }

    pub fn tabulated(xs: Vec<f64>, vs: Vec<f64>) -> Result<Self, WeightError> {
        Self::new(WeightKind::Tabulated { xs, vs })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn certificate(&self) -> Option<&AdmissibilityCertificate> {
        self.certificate.as_ref()
    }

    pub fn with_certificate(mut self, cert: AdmissibilityCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    /// Evaluates v(x). Panics if a tabulated weight is sampled outside its
    /// domain; validated call sites (norms over [0, x_max] of a checked
    /// `SpaceSpec`) rely on this being infallible.
    pub fn value(&self, x: f64) -> f64 {
        debug_assert!(x >= -1e-9, "weight sampled at negative x = {x}");
        match &self.kind {
            WeightKind::Constant { c } => *c,
            WeightKind::Exponential { base } => base.powf(x),
            WeightKind::RationalDecay => 1.0 / (1.0 + x),
            WeightKind::IntegrableExp => (-x).exp(),
            WeightKind::SpikeTrain {
                spacing,
                rate,
                count,
            } => {
                let mut log_v: f64 = 0.0;
                for n in 1..=*count {
                    let peak = n as f64;
                    let pos = peak * spacing;
                    log_v = log_v.max(peak - rate * (x - pos).abs());
                }
                log_v.exp()
            }
            WeightKind::Tabulated { xs, vs } => {
                let last = *xs.last().unwrap();
                assert!(
                    x <= last * (1.0 + 1e-12) + 1e-12,
                    "tabulated weight sampled at {x} beyond domain end {last}"
                );
                let x = x.min(last);
                let hi = xs.partition_point(|&p| p < x).max(1).min(xs.len() - 1);
                let lo = hi - 1;
                let s = (x - xs[lo]) / (xs[hi] - xs[lo]);
                (vs[lo].ln() * (1.0 - s) + vs[hi].ln() * s).exp()
            }
        }
    }

    /// Checked evaluation; errors instead of panicking on domain violations.
    pub fn try_value(&self, x: f64) -> Result<f64, WeightError> {
        if x < -1e-9 {
            return Err(WeightError::DomainViolation { x, x_max: 0.0 });
        }
        if let WeightKind::Tabulated { xs, .. } = &self.kind {
            let last = *xs.last().unwrap();
            if x > last * (1.0 + 1e-12) + 1e-12 {
                return Err(WeightError::DomainViolation { x, x_max: last });
            }
        }
        Ok(self.value(x.max(0.0)))
    }
}

/// Certified admissibility data: v(x) <= big_m * exp(rate * t) * v(x + t) held
/// on every ordered grid pair, and v(x)/v(x') <= 2 * big_m on every window of
/// width gamma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityCertificate {
    pub big_m: f64,
    pub rate: f64,
    pub gamma: f64,
    pub x_max: f64,
    pub step: f64,
}

pub(crate) fn grid_cells(x_max: f64, step: f64) -> Result<usize, WeightError> {
    if !(step > 0.0) || !(x_max > 0.0) {
        return Err(WeightError::InvalidParams(format!(
            "need positive x_max and step, got {x_max}, {step}"
        )));
    }
    let n = (x_max / step).round();
    if n < 1.0 || (x_max - n * step).abs() > 1e-9 * x_max.max(1.0) {
        return Err(WeightError::InvalidParams(format!(
            "x_max = {x_max} is not a multiple of step = {step}"
        )));
    }
    Ok(n as usize)
}

fn sample_log_nodes(v: &WeightFunction, n: usize, step: f64) -> Result<Vec<f64>, WeightError> {
    (0..=n)
        .map(|i| v.try_value(i as f64 * step).map(f64::ln))
        .collect()
}

/// Searches the (rate, M) lattice for the lexicographically smallest certified
/// pair: smallest rate first, then smallest M. For each candidate rate the
/// minimal M is the maximal drawdown of ln v(x) + rate * x over ordered grid
/// pairs, computed in one pass.
pub fn certify_admissibility(
    v: &WeightFunction,
    x_max: f64,
    step: f64,
) -> Result<AdmissibilityCertificate, WeightError> {
    let n = grid_cells(x_max, step)?;
    let log_v = sample_log_nodes(v, n, step)?;

    let mut best_required = f64::INFINITY;
    let lattice_len = (RATE_LATTICE_MAX / RATE_LATTICE_STEP).round() as usize;
    for k in 0..=lattice_len {
        let rate = k as f64 * RATE_LATTICE_STEP;
        let mut prefix_max = f64::NEG_INFINITY;
        let mut drawdown: f64 = 0.0;
        for (i, lv) in log_v.iter().enumerate() {
            let c = lv + rate * i as f64 * step;
            prefix_max = prefix_max.max(c);
            drawdown = drawdown.max(prefix_max - c);
        }
        let required_m = drawdown.exp();
        best_required = best_required.min(required_m);
        if required_m <= BIG_M_MAX * (1.0 + 1e-12) {
            let steps_up = ((required_m - 1.0) / BIG_M_STEP - 1e-12).ceil().max(0.0);
            let big_m = (1.0 + steps_up * BIG_M_STEP).min(BIG_M_MAX);
            let gamma = if rate > 0.0 {
                std::f64::consts::LN_2 / rate
            } else {
                DEFAULT_GAMMA
            };
            let cert = AdmissibilityCertificate {
                big_m,
                rate,
                gamma,
                x_max,
                step,
            };
            verify_gamma_window(&log_v, step, &cert)?;
            return Ok(cert);
        }
    }
    Err(WeightError::NotAdmissible {
        x_max,
        max_rate: RATE_LATTICE_MAX,
        max_m: BIG_M_MAX,
        required_m: best_required,
    })
}

/// Confirms v(x)/v(x') <= 2M for all grid pairs with x <= x' <= x + gamma.
/// Implied by the pairwise certificate, checked anyway as a guard against
/// float slop. Sliding window minimum, O(n).
fn verify_gamma_window(
    log_v: &[f64],
    step: f64,
    cert: &AdmissibilityCertificate,
) -> Result<(), WeightError> {
    let window = (cert.gamma / step).floor() as usize;
    let bound = (2.0 * cert.big_m).ln() + 1e-9;
    let mut deque: VecDeque<usize> = VecDeque::new();
    // deque holds indices of a nondecreasing run of log_v over [i, i + window]
    for i in (0..log_v.len()).rev() {
        while let Some(&b) = deque.back() {
            if b > i + window {
                deque.pop_back();
            } else {
                break;
            }
        }
        while let Some(&f) = deque.front() {
            if log_v[f] >= log_v[i] {
                deque.pop_front();
            } else {
                break;
            }
        }
        deque.push_front(i);
        let min_ahead = log_v[*deque.back().unwrap()];
        if log_v[i] - min_ahead > bound {
            return Err(WeightError::InvalidParams(format!(
                "gamma window check failed at x = {}: ratio {:.3e} exceeds 2M = {:.3e}",
                i as f64 * step,
                (log_v[i] - min_ahead).exp(),
                2.0 * cert.big_m
            )));
        }
    }
    Ok(())
}

/// Largest v(x)/v(y) over grid pairs with x <= y, with its argmax.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub value: f64,
    /// (x, y) attaining the maximum; ties resolve to the smallest x then y.
    pub at: (f64, f64),
}

/// Exact maximum of v(x_i)/v(x_j) over grid pairs i <= j via one suffix
/// minimum sweep.
pub fn sup_ratio(v: &WeightFunction, x_max: f64, step: f64) -> Result<RatioEstimate, WeightError> {
    let n = grid_cells(x_max, step)?;
    let log_v = sample_log_nodes(v, n, step)?;
    sup_ratio_of_logs(&log_v, step)
}

fn sup_ratio_of_logs(log_v: &[f64], step: f64) -> Result<RatioEstimate, WeightError> {
    let n = log_v.len();
    // suffix_min[i] = (min log_v over [i, n), first index attaining it)
    let mut suffix_min = vec![(0.0f64, 0usize); n];
    let mut cur = (log_v[n - 1], n - 1);
    for i in (0..n).rev() {
        if log_v[i] <= cur.0 {
            cur = (log_v[i], i);
        }
        suffix_min[i] = cur;
    }
    let mut best = f64::NEG_INFINITY;
    let mut at = (0usize, 0usize);
    for i in 0..n {
        let gap = log_v[i] - suffix_min[i].0;
        if gap > best {
            best = gap;
            at = (i, suffix_min[i].1);
        }
    }
    Ok(RatioEstimate {
        value: best.exp(),
        at: (at.0 as f64 * step, at.1 as f64 * step),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tier {
    /// Integral of v converges; every tier below also applies.
    TopTier,
    /// v(x) -> 0 confirmed at the horizon.
    Mixing,
    /// liminf v = 0 confirmed, full limit not.
    MiddleTier,
    /// Pairwise ratio diverges while v stays bounded away from 0.
    InfiniteEntropyOnly,
    /// Bounded ratio regime; orbits cannot be wilder than B^(1/p).
    Tame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntegralVerdict {
    Converged,
    Diverged,
    /// The two horizons disagree.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrendState {
    /// Below the zero threshold at the full horizon.
    Zero,
    /// Still moving down, not yet below threshold.
    Shrinking,
    /// Stable or growing between horizons.
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RatioState {
    Divergent,
    /// Growing but below the divergence threshold.
    Growing,
    /// Stopped growing between horizons.
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralEvidence {
    pub half: f64,
    pub full: f64,
    pub tail_frac_half: f64,
    pub tail_frac_full: f64,
    pub verdict: IntegralVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendEvidence {
    /// Statistic over the trailing window of the half horizon.
    pub half: f64,
    /// Statistic over the trailing window of the full horizon.
    pub full: f64,
    pub state: TrendState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioEvidence {
    pub half: f64,
    pub full: f64,
    pub at: (f64, f64),
    pub state: RatioState,
}

/// Raw two-horizon measurements backing a tier verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TierEvidence {
    pub x_max: f64,
    pub step: f64,
    pub integral: IntegralEvidence,
    /// Trailing maxima of v (limit proxy).
    pub envelope: TrendEvidence,
    /// Trailing minima of v (liminf proxy).
    pub trailing_min: TrendEvidence,
    pub ratio: RatioEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TierReport {
    pub tier: Tier,
    pub integral_estimate: f64,
    pub integral_converged: bool,
    pub lim_is_zero: bool,
    pub liminf_estimate: f64,
    pub liminf_zero: bool,
    pub sup_ratio_estimate: f64,
    pub sup_ratio_divergent: bool,
    pub evidence: TierEvidence,
}

impl TierReport {
    /// Monotone implication chain the classifier must never break:
    /// integral converged => lim 0 => liminf 0 => ratio divergent.
    pub fn evidence_chain_holds(&self) -> bool {
        (!self.integral_converged || self.lim_is_zero)
            && (!self.lim_is_zero || self.liminf_zero)
            && (!self.liminf_zero || self.sup_ratio_divergent)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "field,value")?;
        writeln!(out, "tier,{:?}", self.tier)?;
        writeln!(out, "integral_estimate,{:.11e}", self.integral_estimate)?;
        writeln!(out, "integral_converged,{}", self.integral_converged)?;
        writeln!(out, "integral_half,{:.11e}", self.evidence.integral.half)?;
        writeln!(
            out,
            "integral_tail_frac_half,{:.11e}",
            self.evidence.integral.tail_frac_half
        )?;
        writeln!(
            out,
            "integral_tail_frac_full,{:.11e}",
            self.evidence.integral.tail_frac_full
        )?;
        writeln!(out, "lim_is_zero,{}", self.lim_is_zero)?;
        writeln!(out, "envelope_half,{:.11e}", self.evidence.envelope.half)?;
        writeln!(out, "envelope_full,{:.11e}", self.evidence.envelope.full)?;
        writeln!(out, "liminf_estimate,{:.11e}", self.liminf_estimate)?;
        writeln!(out, "liminf_zero,{}", self.liminf_zero)?;
        writeln!(
            out,
            "trailing_min_half,{:.11e}",
            self.evidence.trailing_min.half
        )?;
        writeln!(out, "sup_ratio_estimate,{:.11e}", self.sup_ratio_estimate)?;
        writeln!(out, "sup_ratio_half,{:.11e}", self.evidence.ratio.half)?;
        writeln!(out, "sup_ratio_divergent,{}", self.sup_ratio_divergent)?;
        writeln!(
            out,
            "sup_ratio_at,{:.11e} {:.11e}",
            self.evidence.ratio.at.0, self.evidence.ratio.at.1
        )?;
        Ok(())
    }
}

/// Trapezoid integral of exp(log_v) over node range [a, b].
fn trapezoid(log_v: &[f64], step: f64, a: usize, b: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in a..b {
        sum += 0.5 * (log_v[i].exp() + log_v[i + 1].exp());
    }
    sum * step
}

fn integral_evidence(log_v: &[f64], step: f64, n: usize) -> IntegralEvidence {
    let frac = |cells: usize| -> (f64, f64) {
        let total = trapezoid(log_v, step, 0, cells);
        let tail = trapezoid(log_v, step, cells / 10, cells);
        (total, if total > 0.0 { tail / total } else { 0.0 })
    };
    let (half, tail_frac_half) = frac(n / 2);
    let (full, tail_frac_full) = frac(n);
    let verdict = match (
        tail_frac_half <= TAIL_FRAC_LIMIT,
        tail_frac_full <= TAIL_FRAC_LIMIT,
    ) {
        (true, true) => IntegralVerdict::Converged,
        (false, false) => IntegralVerdict::Diverged,
        _ => IntegralVerdict::Mixed,
    };
    IntegralEvidence {
        half,
        full,
        tail_frac_half,
        tail_frac_full,
        verdict,
    }
}

fn window_stat(log_v: &[f64], from: usize, to: usize, max: bool) -> f64 {
    let slice = &log_v[from..=to.min(log_v.len() - 1)];
    let fold = if max {
        slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    } else {
        slice.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    fold.exp()
}

fn trend_evidence(half: f64, full: f64, v_max: f64, zero_rel: f64) -> TrendEvidence {
    let state = if full <= zero_rel * v_max && full <= SHRINKING_FACTOR * half {
        TrendState::Zero
    } else if full >= STABLE_FACTOR * half {
        TrendState::Positive
    } else if full <= SHRINKING_FACTOR * half {
        TrendState::Shrinking
    } else {
        // between the shrink and stability factors: treat as settled
        TrendState::Positive
    };
    TrendEvidence { half, full, state }
}

/// Classifies a certified weight into its decay tier. Evidence is collected at
/// the half and full horizon so each heuristic can see its own trend. The
/// emitted report always satisfies `evidence_chain_holds`; contradictory
/// evidence yields `InconclusiveEvidence` instead of a report.
pub fn classify_tier(
    v: &WeightFunction,
    x_max: f64,
    step: f64,
) -> Result<TierReport, WeightError> {
    if v.certificate().is_none() {
        return Err(WeightError::CertificateMissing);
    }
    let n = grid_cells(x_max, step)?;
    if n < 8 {
        return Err(WeightError::InvalidParams(
            "classification horizon needs at least 8 cells".into(),
        ));
    }
    let log_v = sample_log_nodes(v, n, step)?;

    let integral = integral_evidence(&log_v, step, n);
    let v_max = window_stat(&log_v, 0, n, true);

    let envelope = trend_evidence(
        window_stat(&log_v, n / 4, n / 2, true),
        window_stat(&log_v, n / 2, n, true),
        v_max,
        LIM_ZERO_REL,
    );
    let trailing_min = trend_evidence(
        window_stat(&log_v, n / 4, n / 2, false),
        window_stat(&log_v, n / 2, n, false),
        v_max,
        LIMINF_SMALL_REL,
    );

    let ratio_half = sup_ratio_of_logs(&log_v[..=n / 2], step)?;
    let ratio_full = sup_ratio_of_logs(&log_v, step)?;
    let ratio_state = if ratio_full.value > RATIO_DIVERGED
        && ratio_full.value >= RATIO_GROWTH * ratio_half.value
    {
        RatioState::Divergent
    } else if ratio_full.value <= RATIO_FLAT * ratio_half.value {
        RatioState::Bounded
    } else {
        RatioState::Growing
    };
    let ratio = RatioEvidence {
        half: ratio_half.value,
        full: ratio_full.value,
        at: ratio_full.at,
        state: ratio_state,
    };

    let evidence = TierEvidence {
        x_max,
        step,
        integral,
        envelope,
        trailing_min,
        ratio,
    };

    let integral_converged = evidence.integral.verdict == IntegralVerdict::Converged;
    let lim_zero_raw = evidence.envelope.state == TrendState::Zero;
    let liminf_zero_raw = evidence.trailing_min.state == TrendState::Zero;
    let confirmed_zero_above = integral_converged || lim_zero_raw || liminf_zero_raw;

    // A flat ratio contradicts any confirmed vanishing, which forces ratio
    // divergence; refuse to pick a side.
    if evidence.ratio.state == RatioState::Bounded && confirmed_zero_above {
        return Err(WeightError::InconclusiveEvidence {
            reason: format!(
                "sup_ratio stopped growing ({:.3e} -> {:.3e}) while vanishing evidence implies it must diverge",
                evidence.ratio.half, evidence.ratio.full
            ),
            evidence: Box::new(evidence),
        });
    }
    // Divergent ratio with the trailing infimum still in transit: the verdict
    // would differ depending on where the infimum settles.
    if evidence.ratio.state == RatioState::Divergent
        && evidence.trailing_min.state == TrendState::Shrinking
        && !(integral_converged || lim_zero_raw)
    {
        return Err(WeightError::InconclusiveEvidence {
            reason: format!(
                "sup_ratio diverges but the trailing infimum is still shrinking ({:.3e} -> {:.3e})",
                evidence.trailing_min.half, evidence.trailing_min.full
            ),
            evidence: Box::new(evidence),
        });
    }

    let tier = if integral_converged {
        Tier::TopTier
    } else if lim_zero_raw {
        Tier::Mixing
    } else if liminf_zero_raw {
        Tier::MiddleTier
    } else if evidence.ratio.state == RatioState::Divergent {
        Tier::InfiniteEntropyOnly
    } else if evidence.ratio.state == RatioState::Bounded {
        Tier::Tame
    } else {
        return Err(WeightError::InconclusiveEvidence {
            reason: format!(
                "sup_ratio still growing ({:.3e} -> {:.3e}) below the divergence threshold with no vanishing confirmed",
                evidence.ratio.half, evidence.ratio.full
            ),
            evidence: Box::new(evidence),
        });
    };

    // Force the implication chain downward from the strongest confirmed
    // condition; the implications hold for every admissible weight, so a
    // stronger verdict always certifies the weaker ones.
    let lim_is_zero = lim_zero_raw || integral_converged;
    let liminf_zero = liminf_zero_raw || lim_is_zero;
    let sup_ratio_divergent = evidence.ratio.state == RatioState::Divergent || liminf_zero;

    let report = TierReport {
        tier,
        integral_estimate: evidence.integral.full,
        integral_converged,
        lim_is_zero,
        liminf_estimate: evidence.trailing_min.full,
        liminf_zero,
        sup_ratio_estimate: evidence.ratio.full,
        sup_ratio_divergent,
        evidence,
    };
    debug_assert!(report.evidence_chain_holds());
    Ok(report)
}
