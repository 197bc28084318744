//! Orbit-level diagnostics and epsilon-chain experiments.
//!
//! Orbit traces record ‖T_t f‖ along a time list, optionally restricted to a
//! fixed window near the origin. The Li-Yorke checker and the distributional
//! densities proxy liminf/limsup statements by trailing-half statistics over
//! the configured horizon; verdicts carry their evidence so an honest
//! "inconclusive" is possible.
//!
//! The chain experiments cover the two closed-form regimes: constant weight,
//! where translation is an isometry and an eps-chain from 0 to any g exists
//! with every step error exactly ‖g‖/n, and exponential weight c^x with
//! c > 1, where T_t is a strict contraction and no eps-chain escapes the
//! ball of radius ‖f‖/2 once eps is below (1/2)(1 - c^{-t/p})‖f‖.

use crate::space::{GridFunction, Mode, ShiftKernel, SpaceError, SpaceSpec};
use crate::weights::WeightKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("SupportOverflow: right shift would push mass {lost:.3e} past the grid edge")]
    SupportOverflow { lost: f64 },
    #[error("ContractionViolated: measured factor {measured:.9e} vs expected {expected:.9e}")]
    ContractionViolated { measured: f64, expected: f64 },
    #[error("ChainBroken: step {step} has error {error:.6e}, not below epsilon = {epsilon:.6e}")]
    ChainBroken { step: usize, error: f64, epsilon: f64 },
    #[error("DecayStalled: orbit norm only reached {best:.6e}, never below epsilon = {epsilon:.6e}")]
    DecayStalled { best: f64, epsilon: f64 },
    #[error("constant weight required: this construction is exact only for v = const")]
    ConstantWeightRequired,
    #[error("exponential weight required: this experiment needs v = c^x with c > 1")]
    ExponentialWeightRequired,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Norms of T_t f along a time list, with optional windowed norms on [0, a].
#[derive(Debug, Clone, Serialize)]
pub struct OrbitTrace {
    pub f: GridFunction,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub windowed: Option<(f64, Vec<f64>)>,
}

impl OrbitTrace {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        match &self.windowed {
            Some((a, wins)) => {
                writeln!(out, "t,norm,windowed_norm_0_{a}")?;
                for ((t, n), w) in self.times.iter().zip(&self.norms).zip(wins) {
                    writeln!(out, "{t:.11e},{n:.11e},{w:.11e}")?;
                }
            }
            None => {
                writeln!(out, "t,norm")?;
                for (t, n) in self.times.iter().zip(&self.norms) {
                    writeln!(out, "{t:.11e},{n:.11e}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn orbit_trace(
    f: &GridFunction,
    spec: &SpaceSpec,
    t_list: &[f64],
    window: Option<f64>,
) -> Result<OrbitTrace, DynamicsError> {
    let win_cells = match window {
        Some(a) => {
            let c = (a / spec.step() + 1e-9).floor() as usize;
            if c == 0 {
                return Err(DynamicsError::InvalidParams(format!(
                    "window {a} is narrower than one grid cell"
                )));
            }
            Some((a, c))
        }
        None => None,
    };
    let mut norms = Vec::with_capacity(t_list.len());
    let mut wins = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let shifted = spec.translate(f, t)?;
        norms.push(spec.norm(&shifted));
        if let Some((_, c)) = win_cells {
            wins.push(spec.window_norm_cells(&shifted, 0, c));
        }
    }
    Ok(OrbitTrace {
        f: f.clone(),
        times: t_list.to_vec(),
        norms,
        windowed: win_cells.map(|(a, _)| (a, wins)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LiYorkeVerdict {
    Scrambled,
    NotScrambled,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiYorkeReport {
    pub verdict: LiYorkeVerdict,
    /// Smallest pair distance over the whole time list.
    pub min_distance: f64,
    /// Largest pair distance over the trailing half of the time list.
    pub trailing_max: f64,
    pub tol_zero: f64,
    pub delta: f64,
    pub horizon: f64,
}

/// Horizon-relative Li-Yorke test for the pair (f, g): proximality is
/// "some distance fell below tol_zero = 1e-9 · d(0)", persistent separation
/// is "the trailing half still exceeds delta". Both together: scrambled.
/// Neither decade of evidence alone decides; separation without proximality
/// stays inconclusive.
pub fn li_yorke_check(
    f: &GridFunction,
    g: &GridFunction,
    spec: &SpaceSpec,
    t_list: &[f64],
    delta: f64,
) -> Result<LiYorkeReport, DynamicsError> {
    if t_list.is_empty() {
        return Err(DynamicsError::InvalidParams("empty time list".into()));
    }
    let kernel = ShiftKernel::new(spec, f, g);
    let dists = t_list
        .iter()
        .map(|&t| Ok(kernel.distance_at_cells(spec, spec.shift_cells(t)?)))
        .collect::<Result<Vec<f64>, DynamicsError>>()?;
    let tol_zero = 1e-9 * spec.distance(f, g);
    let min_distance = dists.iter().cloned().fold(f64::INFINITY, f64::min);
    let trailing_max = dists[dists.len() / 2..]
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let verdict = if trailing_max <= delta {
        LiYorkeVerdict::NotScrambled
    } else if min_distance < tol_zero {
        LiYorkeVerdict::Scrambled
    } else {
        LiYorkeVerdict::Inconclusive
    };
    Ok(LiYorkeReport {
        verdict,
        min_distance,
        trailing_max,
        tol_zero,
        delta,
        horizon: t_list.iter().cloned().fold(0.0, f64::max),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub delta: f64,
    pub epsilon: f64,
    pub horizon: f64,
    pub stride: usize,
    /// min over t in the trailing half of the delta-closeness occupancy of
    /// [0, t]: the lower-density proxy.
    pub lower: f64,
    /// max over all t of the eps-closeness occupancy: the upper-density
    /// proxy.
    pub upper: f64,
}

impl DensityReport {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "delta,epsilon,horizon,lower_density,upper_density")?;
        writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            self.delta, self.epsilon, self.horizon, self.lower, self.upper
        )
    }
}

/// Occupancy-based distributional statistics for the pair orbit: the
/// fraction of sampled times s in [0, t] with d(T_s f, T_s g) below the
/// threshold. Sampling walks every `stride`-th grid multiple; stride 1 is
/// the full grid.
pub fn distributional_densities(
    f: &GridFunction,
    g: &GridFunction,
    spec: &SpaceSpec,
    horizon: f64,
    delta: f64,
    epsilon: f64,
    stride: usize,
) -> Result<DensityReport, DynamicsError> {
    if stride == 0 {
        return Err(DynamicsError::InvalidParams("stride must be >= 1".into()));
    }
    let k_max = spec.shift_cells(horizon)?;
    if k_max == 0 {
        return Err(DynamicsError::InvalidParams(
            "horizon shorter than one grid step".into(),
        ));
    }
    let kernel = ShiftKernel::new(spec, f, g);
    let offsets: Vec<usize> = (0..=k_max / stride).map(|i| i * stride).collect();
    if offsets.len() < 4 {
        return Err(DynamicsError::InvalidParams(
            "horizon must cover at least a few strides".into(),
        ));
    }
    let dists: Vec<f64> = offsets
        .par_iter()
        .map(|&k| kernel.distance_at_cells(spec, k))
        .collect();

    let mut close_delta = 0usize;
    let mut close_eps = 0usize;
    let mut upper = 0.0f64;
    let mut occ_delta = Vec::with_capacity(dists.len());
    for (i, &d) in dists.iter().enumerate() {
        if d < delta {
            close_delta += 1;
        }
        if d < epsilon {
            close_eps += 1;
        }
        if i > 0 {
            let t = offsets[i] as f64 * spec.step();
            occ_delta.push(close_delta as f64 * (stride as f64 * spec.step()) / t);
            upper = upper.max(close_eps as f64 * (stride as f64 * spec.step()) / t);
        }
    }
    let lower = occ_delta[occ_delta.len() / 2..]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(DensityReport {
        delta,
        epsilon,
        horizon,
        stride,
        lower: lower.min(1.0),
        upper: upper.min(1.0),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformBoundReport {
    pub max_ratio: f64,
    /// Probe index and time where the maximum occurred.
    pub probe: usize,
    pub t: f64,
}

/// Largest observed operator stretch ‖T_t f‖ / ‖f‖ over all probes and
/// times. Compare against sup_ratio^{1/p}: a finite grid ratio bound caps
/// every orbit.
pub fn uniform_bound_probe(
    spec: &SpaceSpec,
    t_list: &[f64],
    probes: &[GridFunction],
) -> Result<UniformBoundReport, DynamicsError> {
    if probes.is_empty() || t_list.is_empty() {
        return Err(DynamicsError::InvalidParams(
            "need at least one probe and one time".into(),
        ));
    }
    let norms: Vec<f64> = probes.iter().map(|f| spec.norm(f)).collect();
    if let Some(i) = norms.iter().position(|&n| n == 0.0) {
        return Err(DynamicsError::InvalidParams(format!(
            "probe {i} has zero norm"
        )));
    }
    let jobs: Vec<(usize, f64)> = (0..probes.len())
        .flat_map(|i| t_list.iter().map(move |&t| (i, t)))
        .collect();
    let ratios = jobs
        .par_iter()
        .map(|&(i, t)| {
            let shifted = spec.translate(&probes[i], t)?;
            Ok((i, t, spec.norm(&shifted) / norms[i]))
        })
        .collect::<Result<Vec<_>, DynamicsError>>()?;
    let &(probe, t, max_ratio) = ratios
        .iter()
        .max_by(|a, b| a.2.partial_cmp(&b.2).expect("finite"))
        .expect("nonempty");
    Ok(UniformBoundReport { max_ratio, probe, t })
}

/// An eps-chain for T = T_t: consecutive points satisfy
/// d(T g_i, g_{i+1}) < epsilon.
#[derive(Debug, Clone, Serialize)]
pub struct Chain {
    pub points: Vec<GridFunction>,
    pub t: f64,
    pub epsilon: f64,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Rechecks every link and returns the step errors d(T g_i, g_{i+1}).
pub fn verify_chain(chain: &Chain, spec: &SpaceSpec) -> Result<Vec<f64>, DynamicsError> {
    let mut errors = Vec::with_capacity(chain.points.len().saturating_sub(1));
    for (i, pair) in chain.points.windows(2).enumerate() {
        let moved = spec.translate(&pair[0], chain.t)?;
        let err = spec.distance(&moved, &pair[1]);
        if err >= chain.epsilon {
            return Err(DynamicsError::ChainBroken {
                step: i,
                error: err,
                epsilon: chain.epsilon,
            });
        }
        errors.push(err);
    }
    Ok(errors)
}

/// Right shift by whole cells, filling zeros from the left; the inverse
/// translate on grid functions. Mass pushed past the right edge is an error.
fn right_shift(spec: &SpaceSpec, f: &GridFunction, k: usize) -> Result<GridFunction, DynamicsError> {
    let vals = f.values();
    let len = vals.len();
    if k > 0 {
        let scale = vals.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let lost = vals[len.saturating_sub(k)..]
            .iter()
            .fold(0.0f64, |m, &x| m.max(x.abs()));
        if lost > 1e-12 * scale.max(1.0) {
            return Err(DynamicsError::SupportOverflow { lost });
        }
    }
    let mut out = vec![0.0; len];
    out[k.min(len)..].copy_from_slice(&vals[..len - k.min(len)]);
    Ok(spec.from_values(out)?)
}

/// Constant-weight eps-chain from 0 to g: with n the least integer above
/// ‖g‖/eps, the points are g_i = (i/n) T^{-(n-i)} g. Right shift is an
/// isometry here, so every step error is exactly ‖g‖/n.
pub fn build_chain_constant_weight(
    g: &GridFunction,
    spec: &SpaceSpec,
    t: f64,
    epsilon: f64,
) -> Result<Chain, DynamicsError> {
    if !matches!(spec.weight().kind(), WeightKind::Constant { .. }) {
        return Err(DynamicsError::ConstantWeightRequired);
    }
    if !(epsilon > 0.0) {
        return Err(DynamicsError::InvalidParams("epsilon must be positive".into()));
    }
    let k = spec.shift_cells(t)?;
    let norm_g = spec.norm(g);
    if norm_g == 0.0 {
        return Ok(Chain {
            points: vec![g.clone()],
            t,
            epsilon,
        });
    }
    let n = (norm_g / epsilon).floor() as usize + 1;
    let mut points = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let shifted = right_shift(spec, g, (n - i) * k)?;
        points.push(shifted.scale(i as f64 / n as f64));
    }
    Ok(Chain { points, t, epsilon })
}

/// Decay chain <f, Tf, ..., T^{m-1} f, 0> where m is the first orbit index
/// with ‖T^m f‖ < eps. Interior steps are exact (error 0); only the final
/// drop to zero costs anything.
pub fn decay_chain_to_zero(
    f: &GridFunction,
    spec: &SpaceSpec,
    t: f64,
    epsilon: f64,
) -> Result<Chain, DynamicsError> {
    if !(epsilon > 0.0) {
        return Err(DynamicsError::InvalidParams("epsilon must be positive".into()));
    }
    let mut points = vec![f.clone()];
    let mut cur = f.clone();
    let mut best = spec.norm(f);
    let max_steps = (spec.x_max() / t).ceil() as usize + 1;
    for _ in 0..max_steps {
        let next = spec.translate(&cur, t)?;
        let n = spec.norm(&next);
        best = best.min(n);
        if n < epsilon {
            points.push(spec.zero());
            return Ok(Chain { points, t, epsilon });
        }
        points.push(next.clone());
        cur = next;
    }
    Err(DynamicsError::DecayStalled { best, epsilon })
}

/// Joins a chain ending at x with a chain starting at x (same T and eps).
pub fn concatenate_chains(a: &Chain, b: &Chain) -> Result<Chain, DynamicsError> {
    if (a.t - b.t).abs() > 1e-12 * a.t.max(1.0) {
        return Err(DynamicsError::InvalidParams(
            "chains use different step operators".into(),
        ));
    }
    let (end, start) = (a.points.last(), b.points.first());
    match (end, start) {
        (Some(e), Some(s)) if e.values() == s.values() => {}
        _ => {
            return Err(DynamicsError::InvalidParams(
                "chain endpoints do not match".into(),
            ))
        }
    }
    let mut points = a.points.clone();
    points.extend_from_slice(&b.points[1..]);
    Ok(Chain {
        points,
        t: a.t,
        epsilon: a.epsilon.max(b.epsilon),
    })
}

#[derive(Debug, Clone, Serialize)]
pub enum EscapeVerdict {
    /// Every reachable point stayed inside B(0, ‖f‖/2).
    NoEscape { steps: usize, max_norm: f64 },
    Escaped { at_step: usize, norm: f64 },
}

/// Exponential-weight chain search: first verifies the contraction factor
/// c^{-t/p} on random pairs supported in [t, x_max - t] (where the identity
/// is exact), then drives an eps-chain from 0 for up to `budget` steps,
/// alternating 50/50 between greedy radial pushes of size just below eps
/// and uniform random perturbations. Escaped means some point reached the
/// ball boundary ‖f‖/2; with eps below (1/2)(1 - c^{-t/p})‖f‖ the
/// contraction makes that impossible.
pub fn chain_escape_test(
    spec: &SpaceSpec,
    t: f64,
    f: &GridFunction,
    epsilon: f64,
    budget: usize,
    seed: u64,
) -> Result<EscapeVerdict, DynamicsError> {
    let c = match spec.weight().kind() {
        WeightKind::Exponential { base } if *base > 1.0 => *base,
        WeightKind::Exponential { .. } => {
            return Err(DynamicsError::InvalidParams(
                "contraction needs base c > 1".into(),
            ))
        }
        _ => return Err(DynamicsError::ExponentialWeightRequired),
    };
    let norm_f = spec.norm(f);
    if norm_f == 0.0 || !(epsilon > 0.0) {
        return Err(DynamicsError::InvalidParams(
            "need a nonzero target and positive epsilon".into(),
        ));
    }
    spec.shift_cells(t)?;
    let factor = match spec.mode() {
        Mode::Lp { p } => c.powf(-t / p),
        Mode::C0v => c.powf(-t),
    };
    if spec.x_max() <= 2.0 * t {
        return Err(DynamicsError::InvalidParams(
            "horizon too short to verify the contraction".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = spec.zero().values().len();
    // strictly inside [t, x_max - t]: one-cell margins keep interpolation
    // ramps inside the region where shifting is exactly conformal
    let lo = (t / spec.step()).round() as usize + 1;
    let hi = (((spec.x_max() - t) / spec.step()).round() as usize).min(len);
    for _ in 0..8 {
        let mut vals = vec![0.0; len];
        for v in vals.iter_mut().take(hi).skip(lo) {
            *v = rng.gen_range(-1.0..1.0);
        }
        let h = spec.from_values(vals)?;
        let d0 = spec.norm(&h);
        if d0 == 0.0 {
            continue;
        }
        let d1 = spec.norm(&spec.translate(&h, t)?);
        let measured = d1 / d0;
        if (measured - factor).abs() > 1e-6 {
            return Err(DynamicsError::ContractionViolated {
                measured,
                expected: factor,
            });
        }
    }

    let half = norm_f / 2.0;
    let kick = 0.999 * epsilon;
    let mut g = spec.zero();
    let mut max_norm = 0.0f64;
    for step in 1..=budget {
        let moved = spec.translate(&g, t)?;
        let moved_norm = spec.norm(&moved);
        g = if rng.gen_bool(0.5) {
            // greedy radial push: scale up along the current direction, or
            // step straight toward f from the origin
            if moved_norm > 0.0 {
                moved.scale(1.0 + kick / moved_norm)
            } else {
                moved.add(&f.scale(kick / norm_f))
            }
        } else {
            let mut vals = vec![0.0; len];
            for v in vals.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
            let r = spec.from_values(vals)?;
            let rn = spec.norm(&r);
            let mag = kick * rng.gen_range(0.1..1.0);
            moved.add(&r.scale(mag / rn))
        };
        let n = spec.norm(&g);
        if n >= half {
            return Ok(EscapeVerdict::Escaped { at_step: step, norm: n });
        }
        max_norm = max_norm.max(n);
    }
    Ok(EscapeVerdict::NoEscape {
        steps: budget,
        max_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Representation;
    use crate::weights::{sup_ratio, WeightFunction};
    use crate::witness::{build_nonvanishing_witness, build_windowed_witness, find_escape_sequences};
    use approx::assert_relative_eq;

    fn lp(v: WeightFunction, p: f64, x_max: f64, step: f64) -> SpaceSpec {
        SpaceSpec::new(
            v,
            Mode::Lp { p },
            Representation::PiecewiseConstant,
            x_max,
            step,
        )
        .unwrap()
    }

    #[test]
    fn orbit_of_compact_probe_decays_under_integrable_weight() {
        let spec = lp(WeightFunction::integrable_exp(), 1.0, 40.0, 0.01);
        let f = spec.indicator(2.0, 6.0, 1.0);
        let t_list: Vec<f64> = (0..=80).map(|k| k as f64 * 0.5).collect();
        let trace = orbit_trace(&f, &spec, &t_list, None).unwrap();
        // past the support start the norm only decreases, and vanishes once
        // the support leaves the grid
        let from = t_list.iter().position(|&t| t >= 2.0).unwrap();
        for w in trace.norms[from..].windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        assert_eq!(*trace.norms.last().unwrap(), 0.0);
        // decay bound: ‖T_t f‖^p ≤ B · (tail mass of f beyond t)
        let ratio = sup_ratio(spec.weight(), 40.0, 0.01).unwrap();
        for (i, &t) in t_list.iter().enumerate() {
            let cut = (t / 0.01).round() as usize;
            let tail = spec.window_norm_cells(&f, cut.min(spec.cells()), spec.cells());
            assert!(trace.norms[i] <= ratio.value * tail * (1.0 + 1e-9) + 1e-300);
        }
    }

    #[test]
    fn orbit_of_nonvanishing_witness_stays_large_at_escape_times() {
        let v = WeightFunction::spike_train(6.0, 6.0, 15).unwrap();
        let cert = crate::weights::certify_admissibility(&v, 100.0, 0.01).unwrap();
        let v = v.with_certificate(cert);
        let seq = find_escape_sequences(&v, &cert, 4, 100.0, 0.01).unwrap();
        let spec = lp(v, 1.0, 100.0, 0.01);
        let f = build_nonvanishing_witness(&seq, &spec).unwrap();
        let trace = orbit_trace(&f, &spec, &seq.t, None).unwrap();
        for &n in &trace.norms {
            assert!(n > seq.gamma / (2.0 * seq.big_m) * 0.95);
        }
    }

    #[test]
    fn orbit_windowed_norms_match_witness_visits() {
        let spec = lp(WeightFunction::rational_decay(), 1.0, 40.0, 0.01);
        let w = build_windowed_witness(&spec, 1.0, 4).unwrap();
        let trace = orbit_trace(&w.f, &spec, &w.visit_times, Some(w.window)).unwrap();
        let (_, wins) = trace.windowed.as_ref().unwrap();
        for &wn in wins {
            assert!(wn >= w.c0 * (1.0 - 1e-12));
        }
    }

    fn hole_weight() -> WeightFunction {
        WeightFunction::tabulated(
            vec![0.0, 29.0, 30.0, 40.0, 41.0, 60.0],
            vec![1.0, 1.0, 1e-20, 1e-20, 1.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn pair_passing_a_weight_hole_is_scrambled() {
        let spec = lp(hole_weight(), 1.0, 60.0, 0.01);
        let f = spec.indicator(50.0, 51.0, 1.0);
        let g = spec.zero();
        let t_list: Vec<f64> = (0..=490).map(|k| k as f64 * 0.1).collect();
        let report = li_yorke_check(&f, &g, &spec, &t_list, 0.1).unwrap();
        assert_eq!(report.verdict, LiYorkeVerdict::Scrambled);
        assert!(report.min_distance < report.tol_zero);
        // scrambled implies the difference orbit cannot decay: trailing sup
        // must clear the zero floor
        assert!(report.trailing_max > report.tol_zero);
    }

    #[test]
    fn identical_pair_is_not_scrambled() {
        let spec = lp(hole_weight(), 1.0, 60.0, 0.01);
        let f = spec.indicator(50.0, 51.0, 1.0);
        let t_list: Vec<f64> = (0..=100).map(|k| k as f64 * 0.2).collect();
        let report = li_yorke_check(&f, &f, &spec, &t_list, 0.1).unwrap();
        assert_eq!(report.verdict, LiYorkeVerdict::NotScrambled);
        assert_eq!(report.trailing_max, 0.0);
    }

    #[test]
    fn vanishing_difference_without_separation_is_not_scrambled() {
        let spec = lp(WeightFunction::integrable_exp(), 1.0, 40.0, 0.01);
        let f = spec.indicator(2.0, 3.0, 1.0);
        let g = spec.indicator(5.0, 6.0, 1.0);
        let t_list: Vec<f64> = (0..=120).map(|k| k as f64 * 0.25).collect();
        let report = li_yorke_check(&f, &g, &spec, &t_list, 0.1).unwrap();
        assert_eq!(report.verdict, LiYorkeVerdict::NotScrambled);
        assert_eq!(report.trailing_max, 0.0);
    }

    #[test]
    fn separation_without_proximality_is_inconclusive() {
        let spec = lp(WeightFunction::constant(1.0).unwrap(), 1.0, 10.0, 0.01);
        let f = spec.indicator(0.0, 8.0, 1.0);
        let g = spec.zero();
        let t_list: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let report = li_yorke_check(&f, &g, &spec, &t_list, 1.0).unwrap();
        assert_eq!(report.verdict, LiYorkeVerdict::Inconclusive);
        assert!(report.min_distance >= report.tol_zero);
        assert!(report.trailing_max > 1.0);
    }

    #[test]
    fn equal_pair_has_unit_densities() {
        let spec = lp(WeightFunction::integrable_exp(), 1.0, 20.0, 0.01);
        let f = spec.indicator(1.0, 2.0, 1.0);
        let report = distributional_densities(&f, &f, &spec, 10.0, 0.1, 0.1, 5).unwrap();
        assert_eq!(report.lower, 1.0);
        assert_eq!(report.upper, 1.0);
    }

    #[test]
    fn always_far_pair_has_zero_lower_density() {
        let spec = lp(WeightFunction::constant(1.0).unwrap(), 1.0, 20.0, 0.01);
        let f = spec.indicator(0.0, 15.0, 1.0);
        let g = spec.zero();
        // distance stays >= 5 over [0, 10]
        let report = distributional_densities(&f, &g, &spec, 10.0, 0.5, 0.5, 10).unwrap();
        assert_eq!(report.lower, 0.0);
        assert_eq!(report.upper, 0.0);
    }

    /// Block-designed orbit: the weight has three low-weight valleys placed
    /// so the bump's orbit alternates close/far stretches of lengths
    /// 400, 1200, 40, 4000, 40, 10000. The occupancy extremes follow from
    /// block arithmetic: an early all-close prefix pushes the running max
    /// near 1, while the trailing far dominance pins the trailing min near
    /// 480/15680.
    #[test]
    fn block_designed_pair_shows_distributional_asymmetry() {
        let xs = vec![
            0.0, 9999.0, 10000.0, 10041.0, 10042.0, 14039.0, 14040.0, 14081.0, 14082.0,
            15279.0, 15280.0, 15690.0,
        ];
        let vs = vec![
            1.0, 1.0, 1e-8, 1e-8, 1.0, 1.0, 1e-8, 1e-8, 1.0, 1.0, 1e-8, 1e-8,
        ];
        let v = WeightFunction::tabulated(xs, vs).unwrap();
        let spec = lp(v, 1.0, 15690.0, 1.0);
        let f = spec.indicator(15680.0, 15681.0, 1.0);
        let g = spec.zero();
        let report =
            distributional_densities(&f, &g, &spec, 15680.0, 1e-4, 1e-4, 4).unwrap();
        let expected_lower = 480.0 / 15680.0;
        assert!(report.upper > 0.9, "upper = {}", report.upper);
        assert!(
            (report.lower - expected_lower).abs() < 0.01,
            "lower = {} vs {expected_lower}",
            report.lower
        );
    }

    #[test]
    fn tame_weights_never_stretch_orbits() {
        for v in [
            WeightFunction::constant(1.0).unwrap(),
            WeightFunction::exponential(2.0).unwrap(),
        ] {
            let spec = lp(v, 2.0, 20.0, 0.01);
            let probes = [
                spec.indicator(0.0, 3.0, 1.0),
                spec.indicator(4.0, 9.5, 0.3),
                spec.tent(12.0, 2.0, 2.0),
            ];
            let t_list: Vec<f64> = (1..=40).map(|k| k as f64 * 0.25).collect();
            let report = uniform_bound_probe(&spec, &t_list, &probes).unwrap();
            assert!(report.max_ratio <= 1.0 + 1e-9, "ratio {}", report.max_ratio);
        }
    }

    #[test]
    fn spike_train_stretches_valley_probes_without_bound() {
        let v = WeightFunction::spike_train(6.0, 6.0, 15).unwrap();
        let cert = crate::weights::certify_admissibility(&v, 100.0, 0.01).unwrap();
        let v2 = v.clone().with_certificate(cert);
        let seq = find_escape_sequences(&v2, &cert, 4, 100.0, 0.01).unwrap();
        let spec = lp(v, 1.0, 100.0, 0.01);
        let mut ratios = Vec::new();
        for n in 0..4 {
            let probe = spec.indicator(seq.z[n] - seq.gamma, seq.z[n], 1.0);
            let report = uniform_bound_probe(&spec, &[seq.t[n]], &[probe]).unwrap();
            // the certified escape ratio shows up as orbit stretch, up to
            // the 2M window slack on either side
            let floor = seq.ratios[n] / (2.0 * seq.big_m).powi(2);
            assert!(report.max_ratio >= floor * 0.95, "level {n}");
            ratios.push(report.max_ratio);
        }
        for w in ratios.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn scaling_a_probe_leaves_the_ratio_unchanged() {
        let spec = lp(WeightFunction::integrable_exp(), 2.0, 20.0, 0.01);
        let f = spec.indicator(3.0, 5.0, 1.0);
        let t_list = [0.5, 1.0, 2.0];
        let r1 = uniform_bound_probe(&spec, &t_list, &[f.clone()]).unwrap();
        let r2 = uniform_bound_probe(&spec, &t_list, &[f.scale(7.5)]).unwrap();
        assert_relative_eq!(r1.max_ratio, r2.max_ratio, max_relative = 1e-12);
    }

    fn dyadic_flat_space() -> SpaceSpec {
        lp(WeightFunction::constant(1.0).unwrap(), 1.0, 20.0, 1.0 / 128.0)
    }

    #[test]
    fn constant_weight_chain_has_exact_step_errors() {
        let spec = dyadic_flat_space();
        let g = spec.indicator(0.0, 1.0, 1.0);
        assert_eq!(spec.norm(&g), 1.0);
        let chain = build_chain_constant_weight(&g, &spec, 0.25, 0.3).unwrap();
        assert_eq!(chain.len(), 5);
        let errors = verify_chain(&chain, &spec).unwrap();
        assert_eq!(errors.len(), 4);
        for err in errors {
            assert!((err - 0.25).abs() <= 1e-12, "err = {err}");
        }
        // endpoints: from zero to g itself
        assert!(chain.points[0].is_zero());
        assert_eq!(chain.points[4].values(), g.values());
    }

    #[test]
    fn zero_target_gives_singleton_chain() {
        let spec = dyadic_flat_space();
        let chain = build_chain_constant_weight(&spec.zero(), &spec, 0.25, 0.3).unwrap();
        assert_eq!(chain.len(), 1);
        assert!(verify_chain(&chain, &spec).unwrap().is_empty());
    }

    #[test]
    fn shifted_copies_must_fit_the_grid() {
        let spec = lp(WeightFunction::constant(1.0).unwrap(), 1.0, 2.0, 1.0 / 128.0);
        let g = spec.indicator(0.0, 1.0, 1.0);
        match build_chain_constant_weight(&g, &spec, 0.5, 0.3) {
            Err(DynamicsError::SupportOverflow { .. }) => {}
            other => panic!("expected SupportOverflow, got {other:?}"),
        }
    }

    #[test]
    fn nonconstant_weight_is_rejected() {
        let spec = lp(WeightFunction::integrable_exp(), 1.0, 20.0, 0.25);
        let g = spec.indicator(0.0, 1.0, 1.0);
        assert!(matches!(
            build_chain_constant_weight(&g, &spec, 0.25, 0.3),
            Err(DynamicsError::ConstantWeightRequired)
        ));
    }

    #[test]
    fn decay_then_build_concatenates_into_a_full_chain() {
        let spec = dyadic_flat_space();
        let f = spec.indicator(0.0, 2.0, 0.7);
        let g = spec.indicator(0.0, 1.0, 1.0);
        let down = decay_chain_to_zero(&f, &spec, 0.25, 0.3).unwrap();
        let errors = verify_chain(&down, &spec).unwrap();
        // interior steps are free, only the last one pays
        for err in &errors[..errors.len() - 1] {
            assert_eq!(*err, 0.0);
        }
        assert!(*errors.last().unwrap() < 0.3);
        let up = build_chain_constant_weight(&g, &spec, 0.25, 0.3).unwrap();
        let full = concatenate_chains(&down, &up).unwrap();
        assert_eq!(full.len(), down.len() + up.len() - 1);
        verify_chain(&full, &spec).unwrap();
        assert_eq!(full.points.first().unwrap().values(), f.values());
        assert_eq!(full.points.last().unwrap().values(), g.values());
    }

    #[test]
    fn broken_chain_is_rejected_by_verify() {
        let spec = dyadic_flat_space();
        let g = spec.indicator(0.0, 1.0, 1.0);
        let mut chain = build_chain_constant_weight(&g, &spec, 0.25, 0.3).unwrap();
        chain.epsilon = 0.2; // below the actual step error 0.25
        match verify_chain(&chain, &spec) {
            Err(DynamicsError::ChainBroken { step: 0, .. }) => {}
            other => panic!("expected ChainBroken, got {other:?}"),
        }
    }

    fn contraction_space() -> SpaceSpec {
        SpaceSpec::new(
            WeightFunction::exponential(std::f64::consts::E).unwrap(),
            Mode::Lp { p: 2.0 },
            Representation::PiecewiseConstant,
            30.0,
            1.0 / 64.0,
        )
        .unwrap()
    }

    #[test]
    fn contraction_chain_search_cannot_leave_the_half_ball() {
        let spec = contraction_space();
        let raw = spec.indicator(14.0, 15.0, 1.0);
        let f = raw.scale(1.0 / spec.norm(&raw));
        let factor = (-0.5f64).exp();
        let epsilon = 0.9 * (0.5 - 0.5 * factor) * spec.norm(&f);
        match chain_escape_test(&spec, 1.0, &f, epsilon, 2000, 13).unwrap() {
            EscapeVerdict::NoEscape { max_norm, steps } => {
                assert_eq!(steps, 2000);
                // the greedy fixed point sits at 0.999 eps/(1 - factor)
                let predicted = 0.999 * epsilon / (1.0 - factor);
                assert!(max_norm < 0.5 * spec.norm(&f));
                assert!(max_norm <= predicted * (1.0 + 1e-6));
            }
            other => panic!("escaped the contraction ball: {other:?}"),
        }
    }

    #[test]
    fn oversized_epsilon_escapes_in_one_step() {
        let spec = contraction_space();
        let raw = spec.indicator(14.0, 15.0, 1.0);
        let f = raw.scale(1.0 / spec.norm(&raw));
        match chain_escape_test(&spec, 1.0, &f, 1.2, 50, 13).unwrap() {
            EscapeVerdict::Escaped { at_step, norm } => {
                assert!(at_step <= 3, "escaped only at step {at_step}");
                assert!(norm >= 0.5);
            }
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn wrong_weight_kind_is_rejected_for_escape_test() {
        let spec = dyadic_flat_space();
        let f = spec.indicator(0.0, 1.0, 1.0);
        assert!(matches!(
            chain_escape_test(&spec, 0.25, &f, 0.1, 10, 1),
            Err(DynamicsError::ExponentialWeightRequired)
        ));
    }
}
