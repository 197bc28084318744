//! Grid-backed function spaces on [0, x_max] with weighted norms.
//!
//! Two representations share one uniform grid of `cells` cells of width
//! `step`. Piecewise constant functions hold one value per cell; piecewise
//! linear functions hold node samples and interpolate. Norms are quadratures
//! against the weight: midpoint per cell for piecewise constant, composite
//! trapezoid on a 4-fold subdivided grid for piecewise linear, and a weighted
//! node maximum for the sup mode.
//!
//! Left translation by grid multiples is exact: it moves samples, never
//! interpolates. `translate` therefore refuses shifts that are not multiples
//! of the step instead of silently resampling.

use crate::weights::WeightFunction;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("NonGridShift: t = {t} is not a nonnegative multiple of step = {step}")]
    NonGridShift { t: f64, step: f64 },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("sample length {got} does not match the {expected} samples of this space")]
    LengthMismatch { expected: usize, got: usize },
}

/// Norm selector. `Lp` integrates |f|^p v; `C0v` takes sup |f| v over nodes
/// and models functions vanishing at infinity relative to 1/v.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Mode {
    Lp { p: f64 },
    C0v,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Representation {
    PiecewiseConstant,
    PiecewiseLinear,
}

/// Function samples for one space; length is dictated by the representation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        assert_eq!(self.values.len(), other.values.len());
        GridFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        assert_eq!(self.values.len(), other.values.len());
        GridFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        GridFunction {
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|a| *a == 0.0)
    }
}

#[inline]
fn pow_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

#[inline]
fn root_p(s: f64, p: f64) -> f64 {
    if p == 1.0 {
        s
    } else if p == 2.0 {
        s.sqrt()
    } else {
        s.powf(1.0 / p)
    }
}

/// One configured space: weight, horizon, grid, norm mode, representation.
/// Weight quadrature factors are precomputed at construction, so norms and
/// shifted distances never re-evaluate the weight.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceSpec {
    weight: WeightFunction,
    x_max: f64,
    step: f64,
    cells: usize,
    mode: Mode,
    representation: Representation,
    /// Quadrature factors: per cell (pwc), per fine sample (pwl), or v at
    /// nodes (sup mode).
    #[serde(skip)]
    wq: Vec<f64>,
}

/// Fine subdivision per cell for piecewise linear quadrature.
const PWL_SUBDIV: usize = 4;

impl SpaceSpec {
    pub fn new(
        weight: WeightFunction,
        mode: Mode,
        representation: Representation,
        x_max: f64,
        step: f64,
    ) -> Result<Self, SpaceError> {
        if !(x_max.is_finite() && x_max > 0.0 && step.is_finite() && step > 0.0) {
            return Err(SpaceError::InvalidSpace(format!(
                "need positive finite x_max and step, got {x_max}, {step}"
            )));
        }
        let cells_f = (x_max / step).round();
        if (x_max - cells_f * step).abs() > 1e-9 * x_max.max(1.0) {
            return Err(SpaceError::InvalidSpace(format!(
                "x_max = {x_max} is not a multiple of step = {step}"
            )));
        }
        let cells = cells_f as usize;
        if cells < 10 {
            return Err(SpaceError::InvalidSpace(format!(
                "grid has {cells} cells, need at least 10"
            )));
        }
        if let Mode::Lp { p } = mode {
            if !(p.is_finite() && p >= 1.0) {
                return Err(SpaceError::InvalidSpace(format!(
                    "exponent p = {p} outside [1, inf)"
                )));
            }
        }
        if mode == Mode::C0v && representation == Representation::PiecewiseConstant {
            return Err(SpaceError::InvalidSpace(
                "the sup-weighted mode needs node samples; use the piecewise linear representation"
                    .into(),
            ));
        }
        let sample_v = |x: f64| -> Result<f64, SpaceError> {
            weight
                .try_value(x)
                .map_err(|e| SpaceError::InvalidSpace(format!("weight unusable on grid: {e}")))
        };
        let wq = match (mode, representation) {
            (Mode::Lp { .. }, Representation::PiecewiseConstant) => (0..cells)
                .map(|i| sample_v((i as f64 + 0.5) * step).map(|v| v * step))
                .collect::<Result<Vec<_>, _>>()?,
            (Mode::Lp { .. }, Representation::PiecewiseLinear) => {
                let h = step / PWL_SUBDIV as f64;
                let fine = cells * PWL_SUBDIV;
                (0..=fine)
                    .map(|s| {
                        let c = if s == 0 || s == fine { 0.5 } else { 1.0 };
                        sample_v(s as f64 * h).map(|v| v * c * h)
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            (Mode::C0v, Representation::PiecewiseLinear) => (0..=cells)
                .map(|i| sample_v(i as f64 * step))
                .collect::<Result<Vec<_>, _>>()?,
            (Mode::C0v, Representation::PiecewiseConstant) => unreachable!(),
        };
        Ok(Self {
            weight,
            x_max,
            step,
            cells,
            mode,
            representation,
            wq,
        })
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Exponent of the Lp mode, if any.
    pub fn p(&self) -> Option<f64> {
        match self.mode {
            Mode::Lp { p } => Some(p),
            Mode::C0v => None,
        }
    }

    fn sample_len(&self) -> usize {
        match self.representation {
            Representation::PiecewiseConstant => self.cells,
            Representation::PiecewiseLinear => self.cells + 1,
        }
    }

    pub fn zero(&self) -> GridFunction {
        GridFunction {
            values: vec![0.0; self.sample_len()],
        }
    }

    /// Samples a closure at cell midpoints (pwc) or nodes (pwl).
    pub fn from_fn<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        let values = match self.representation {
            Representation::PiecewiseConstant => (0..self.cells)
                .map(|i| f((i as f64 + 0.5) * self.step))
                .collect(),
            Representation::PiecewiseLinear => {
                (0..=self.cells).map(|i| f(i as f64 * self.step)).collect()
            }
        };
        GridFunction { values }
    }

    pub fn from_values(&self, values: Vec<f64>) -> Result<GridFunction, SpaceError> {
        if values.len() != self.sample_len() {
            return Err(SpaceError::LengthMismatch {
                expected: self.sample_len(),
                got: values.len(),
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(SpaceError::InvalidSpace(
                "function samples must be finite".into(),
            ));
        }
        Ok(GridFunction { values })
    }

    /// amp on [a, b] and 0 elsewhere, sampled per the representation.
    pub fn indicator(&self, a: f64, b: f64, amp: f64) -> GridFunction {
        self.from_fn(|x| if x >= a && x < b { amp } else { 0.0 })
    }

    /// Triangular bump centered at `center`, zero outside +-half_width.
    pub fn tent(&self, center: f64, half_width: f64, peak: f64) -> GridFunction {
        self.from_fn(|x| peak * (1.0 - (x - center).abs() / half_width).max(0.0))
    }

    /// Point evaluation of the represented function.
    pub fn value_at(&self, f: &GridFunction, x: f64) -> f64 {
        assert_eq!(f.values.len(), self.sample_len());
        if !(0.0..=self.x_max).contains(&x) {
            return 0.0;
        }
        match self.representation {
            Representation::PiecewiseConstant => {
                let i = ((x / self.step) as usize).min(self.cells - 1);
                f.values[i]
            }
            Representation::PiecewiseLinear => {
                let pos = x / self.step;
                let i = (pos as usize).min(self.cells - 1);
                let s = pos - i as f64;
                f.values[i] * (1.0 - s) + f.values[i + 1] * s
            }
        }
    }

    /// Cell count of a grid-aligned shift, or `NonGridShift`.
    pub fn shift_cells(&self, t: f64) -> Result<usize, SpaceError> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(SpaceError::NonGridShift { t, step: self.step });
        }
        let k = (t / self.step).round();
        if (t - k * self.step).abs() > 1e-9 * t.max(1.0) {
            return Err(SpaceError::NonGridShift { t, step: self.step });
        }
        Ok(k as usize)
    }

    /// Left translation (T_t f)(x) = f(x + t); zero fills from the right.
    pub fn translate(&self, f: &GridFunction, t: f64) -> Result<GridFunction, SpaceError> {
        let k = self.shift_cells(t)?;
        Ok(self.translate_cells(f, k))
    }

    pub(crate) fn translate_cells(&self, f: &GridFunction, k: usize) -> GridFunction {
        let n = f.values.len();
        let values = (0..n)
            .map(|i| if i + k < n { f.values[i + k] } else { 0.0 })
            .collect();
        GridFunction { values }
    }

    /// Zeroes samples beyond a. For piecewise linear functions the completed
    /// graph still ramps to zero across the one cell after a, and a signed
    /// crossing in that cell can trade for the ramp, so the norm contraction
    /// is exact only for samples of one sign.
    pub fn restrict(&self, f: &GridFunction, a: f64) -> GridFunction {
        assert_eq!(f.values.len(), self.sample_len());
        let m = ((a / self.step) + 1e-9).floor().max(0.0) as usize;
        let keep = |i: usize| match self.representation {
            Representation::PiecewiseConstant => i < m,
            Representation::PiecewiseLinear => i <= m,
        };
        GridFunction {
            values: (0..f.values.len())
                .map(|i| if keep(i) { f.values[i] } else { 0.0 })
                .collect(),
        }
    }

    /// Expands piecewise linear node samples to the subdivided quadrature
    /// grid. Exact for the represented function: interpolation is linear.
    fn fine_samples(&self, f: &GridFunction) -> Vec<f64> {
        let n = self.cells * PWL_SUBDIV;
        let mut fine = Vec::with_capacity(n + 1);
        for i in 0..self.cells {
            let a = f.values[i];
            let b = f.values[i + 1];
            for j in 0..PWL_SUBDIV {
                let s = j as f64 / PWL_SUBDIV as f64;
                fine.push(a * (1.0 - s) + b * s);
            }
        }
        fine.push(f.values[self.cells]);
        fine
    }

    pub fn norm(&self, f: &GridFunction) -> f64 {
        assert_eq!(f.values.len(), self.sample_len());
        match (self.mode, self.representation) {
            (Mode::Lp { p }, Representation::PiecewiseConstant) => {
                let sum: f64 = f
                    .values
                    .iter()
                    .zip(&self.wq)
                    .map(|(x, w)| w * pow_p(x.abs(), p))
                    .sum();
                root_p(sum, p)
            }
            (Mode::Lp { p }, Representation::PiecewiseLinear) => {
                let fine = self.fine_samples(f);
                let sum: f64 = fine
                    .iter()
                    .zip(&self.wq)
                    .map(|(x, w)| w * pow_p(x.abs(), p))
                    .sum();
                root_p(sum, p)
            }
            (Mode::C0v, _) => f
                .values
                .iter()
                .zip(&self.wq)
                .map(|(x, w)| w * x.abs())
                .fold(0.0, f64::max),
        }
    }

    pub fn distance(&self, f: &GridFunction, g: &GridFunction) -> f64 {
        self.norm(&f.sub(g))
    }

    /// Norm restricted to the cell range [c0, c1), quadrature-consistent with
    /// `norm`. Piecewise linear node c1 enters with its usual half weight.
    pub(crate) fn window_norm_cells(&self, f: &GridFunction, c0: usize, c1: usize) -> f64 {
        assert!(c0 <= c1 && c1 <= self.cells);
        match (self.mode, self.representation) {
            (Mode::Lp { p }, Representation::PiecewiseConstant) => {
                let sum: f64 = (c0..c1)
                    .map(|i| self.wq[i] * pow_p(f.values[i].abs(), p))
                    .sum();
                root_p(sum, p)
            }
            (Mode::Lp { p }, Representation::PiecewiseLinear) => {
                if c1 == c0 {
                    return 0.0;
                }
                let h = self.step / PWL_SUBDIV as f64;
                let mut sum = 0.0;
                for i in c0..c1 {
                    let a = f.values[i];
                    let b = f.values[i + 1];
                    for j in 0..=PWL_SUBDIV {
                        let s = j as f64 / PWL_SUBDIV as f64;
                        let x = (i as f64 + s) * self.step;
                        let c = if j == 0 || j == PWL_SUBDIV { 0.5 } else { 1.0 };
                        let val = a * (1.0 - s) + b * s;
                        sum += c * h * self.weight.value(x) * pow_p(val.abs(), p);
                    }
                }
                root_p(sum, p)
            }
            (Mode::C0v, _) => (c0..=c1)
                .map(|i| self.wq[i] * f.values[i].abs())
                .fold(0.0, f64::max),
        }
    }
}

/// Precomputed pairwise data for distances between translated orbits:
/// d(k) = || T_{k step} f - T_{k step} g ||, evaluated for many k without
/// re-translating. Holds |f - g|^p (or |f - g| in sup mode) at quadrature
/// sample resolution; a shift by k cells is an index offset of `stride * k`.
#[derive(Debug, Clone)]
pub(crate) struct ShiftKernel {
    diff: Vec<f64>,
    stride: usize,
    p: Option<f64>,
}

impl ShiftKernel {
    pub(crate) fn new(space: &SpaceSpec, f: &GridFunction, g: &GridFunction) -> Self {
        let delta = f.sub(g);
        match (space.mode, space.representation) {
            (Mode::Lp { p }, Representation::PiecewiseConstant) => ShiftKernel {
                diff: delta.values.iter().map(|x| pow_p(x.abs(), p)).collect(),
                stride: 1,
                p: Some(p),
            },
            (Mode::Lp { p }, Representation::PiecewiseLinear) => {
                let mut diff: Vec<f64> = space
                    .fine_samples(&delta)
                    .iter()
                    .map(|x| pow_p(x.abs(), p))
                    .collect();
                // Translation zero-fills node samples, so the represented
                // function ramps from the last node to 0 across one cell.
                // Appending those ramp samples keeps the offset dot product
                // identical to translate-then-norm for every shift.
                let last = delta.values[space.cells];
                for j in 1..PWL_SUBDIV {
                    let s = j as f64 / PWL_SUBDIV as f64;
                    diff.push(pow_p((last * (1.0 - s)).abs(), p));
                }
                ShiftKernel {
                    diff,
                    stride: PWL_SUBDIV,
                    p: Some(p),
                }
            }
            (Mode::C0v, _) => ShiftKernel {
                diff: delta.values.iter().map(|x| x.abs()).collect(),
                stride: 1,
                p: None,
            },
        }
    }

    /// Distance after translating both arguments by k cells. Matches
    /// translate-then-distance exactly: both walk the same samples in the
    /// same order.
    pub(crate) fn distance_at_cells(&self, space: &SpaceSpec, k: usize) -> f64 {
        let off = k * self.stride;
        match self.p {
            Some(p) => {
                let sum: f64 = space
                    .wq
                    .iter()
                    .enumerate()
                    .take_while(|(i, _)| i + off < self.diff.len())
                    .map(|(i, w)| w * self.diff[i + off])
                    .sum();
                root_p(sum, p)
            }
            None => space
                .wq
                .iter()
                .enumerate()
                .take_while(|(i, _)| i + off < self.diff.len())
                .map(|(i, w)| w * self.diff[i + off])
                .fold(0.0, f64::max),
        }
    }
}
