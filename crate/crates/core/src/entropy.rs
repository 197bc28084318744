//! Separated-set entropy estimation.
//!
//! A pair f, g is (t, eps)-separated when some shift u in [0, t] pushes them
//! at least eps apart. Compact sets are represented by finite families; the
//! maximal separated subset size s(t, eps) and its growth rate
//! (1/t) ln s(t, eps) are the observable stand-ins for Bowen entropy.
//!
//! The sup over u runs over every grid multiple in [0, t], which is exact
//! for translation dynamics of grid-supported functions. Rates use natural
//! log throughout; the base only rescales them.

use crate::space::{GridFunction, Mode, ShiftKernel, SpaceError, SpaceSpec};
use crate::weights::{AdmissibilityCertificate, WeightFunction};
use crate::witness::{build_separated_family, find_escape_sequences, WitnessError};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::io::Write;
use thiserror::Error;

/// Exact search cap: 2^24 subsets worst case is still desk scale with
/// branch-and-bound pruning.
pub const EXACT_CAP: usize = 24;

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("ExactBudgetExceeded: family of {size} exceeds the exact search cap of {EXACT_CAP}")]
    ExactBudgetExceeded { size: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    Exact,
    Greedy,
}

/// One separated-set counting problem: a finite family, a horizon t, a gap
/// eps, and the shifts probed for the sup.
#[derive(Debug, Clone)]
pub struct SeparationQuery<'a> {
    pub family: &'a [GridFunction],
    pub t: f64,
    pub epsilon: f64,
    pub time_grid: Vec<f64>,
}

impl<'a> SeparationQuery<'a> {
    /// Query with the default time grid: every grid multiple in [0, t].
    pub fn new(
        family: &'a [GridFunction],
        t: f64,
        epsilon: f64,
        spec: &SpaceSpec,
    ) -> Result<Self, EntropyError> {
        let k_max = (t / spec.step() + 1e-9).floor() as i64;
        let grid = (0..=k_max.max(0)).map(|k| k as f64 * spec.step()).collect();
        Self::with_time_grid(family, t, epsilon, grid)
    }

    pub fn with_time_grid(
        family: &'a [GridFunction],
        t: f64,
        epsilon: f64,
        time_grid: Vec<f64>,
    ) -> Result<Self, EntropyError> {
        if family.is_empty() {
            return Err(EntropyError::InvalidQuery("family is empty".into()));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(EntropyError::InvalidQuery(format!(
                "epsilon must be a positive real, got {epsilon}"
            )));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(EntropyError::InvalidQuery(format!(
                "horizon must be a nonnegative real, got {t}"
            )));
        }
        if time_grid.is_empty() {
            return Err(EntropyError::InvalidQuery("time grid is empty".into()));
        }
        if let Some(&u) = time_grid
            .iter()
            .find(|&&u| u < 0.0 || u > t * (1.0 + 1e-9) + 1e-12)
        {
            return Err(EntropyError::InvalidQuery(format!(
                "time grid point {u} outside [0, {t}]"
            )));
        }
        Ok(SeparationQuery {
            family,
            t,
            epsilon,
            time_grid,
        })
    }

    /// Cell offsets of the time grid, largest first. The sup over u is
    /// order-free, and for the constructed witnesses the separating shift is
    /// the largest one, so the reversed scan short-circuits earliest.
    fn offsets_desc(&self, spec: &SpaceSpec) -> Result<Vec<usize>, EntropyError> {
        let mut offsets = self
            .time_grid
            .iter()
            .map(|&u| spec.shift_cells(u).map_err(EntropyError::from))
            .collect::<Result<Vec<_>, _>>()?;
        offsets.sort_unstable_by(|a, b| b.cmp(a));
        offsets.dedup();
        Ok(offsets)
    }
}

fn pair_separated(
    spec: &SpaceSpec,
    f: &GridFunction,
    g: &GridFunction,
    offsets_desc: &[usize],
    epsilon: f64,
) -> bool {
    let kernel = ShiftKernel::new(spec, f, g);
    offsets_desc
        .iter()
        .any(|&k| kernel.distance_at_cells(spec, k) >= epsilon)
}

/// True iff some probed shift pushes f and g at least eps apart.
pub fn is_separated_pair(
    f: &GridFunction,
    g: &GridFunction,
    q: &SeparationQuery,
    spec: &SpaceSpec,
) -> Result<bool, EntropyError> {
    let offsets = q.offsets_desc(spec)?;
    Ok(pair_separated(spec, f, g, &offsets, q.epsilon))
}

/// Flat m x m boolean separation matrix, pairs computed in parallel.
fn separation_matrix(q: &SeparationQuery, spec: &SpaceSpec) -> Result<Vec<bool>, EntropyError> {
    let m = q.family.len();
    let offsets = q.offsets_desc(spec)?;
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let bits: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| pair_separated(spec, &q.family[i], &q.family[j], &offsets, q.epsilon))
        .collect();
    let mut matrix = vec![false; m * m];
    for (&(i, j), &sep) in pairs.iter().zip(&bits) {
        matrix[i * m + j] = sep;
        matrix[j * m + i] = sep;
    }
    Ok(matrix)
}

/// Carraghan-Pardalos branch and bound over bitmask adjacency. Returns the
/// maximum clique and one witness mask.
fn max_clique(adj: &[u32], n: usize) -> (usize, u32) {
    fn expand(
        adj: &[u32],
        mut cand: u32,
        cur: u32,
        cur_size: usize,
        best: &mut (usize, u32),
    ) {
        if cand == 0 {
            if cur_size > best.0 {
                *best = (cur_size, cur);
            }
            return;
        }
        while cand != 0 {
            if cur_size + cand.count_ones() as usize <= best.0 {
                return;
            }
            let v = cand.trailing_zeros();
            let bit = 1u32 << v;
            cand &= !bit;
            expand(adj, cand & adj[v as usize], cur | bit, cur_size + 1, best);
        }
    }
    let mut best = (0usize, 0u32);
    let full = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
    expand(adj, full, 0, 0, &mut best);
    best
}

/// Size of a maximal (t, eps)-separated subset, with that subset's indices.
/// Exact mode searches the separation graph for a maximum clique; Greedy
/// scans the family in order and keeps whatever stays separated from the
/// kept set. Greedy never exceeds Exact.
pub fn max_separated(
    q: &SeparationQuery,
    spec: &SpaceSpec,
    mode: SearchMode,
) -> Result<(usize, Vec<usize>), EntropyError> {
    let m = q.family.len();
    if mode == SearchMode::Exact && m > EXACT_CAP {
        return Err(EntropyError::ExactBudgetExceeded { size: m });
    }
    let matrix = separation_matrix(q, spec)?;
    match mode {
        SearchMode::Greedy => {
            let mut kept: Vec<usize> = Vec::new();
            for i in 0..m {
                if kept.iter().all(|&j| matrix[i * m + j]) {
                    kept.push(i);
                }
            }
            Ok((kept.len(), kept))
        }
        SearchMode::Exact => {
            let adj: Vec<u32> = (0..m)
                .map(|i| {
                    (0..m)
                        .filter(|&j| matrix[i * m + j])
                        .fold(0u32, |acc, j| acc | (1 << j))
                })
                .collect();
            // every singleton is a clique, so size >= 1 for nonempty families
            let (size, mask) = max_clique(&adj, m);
            let subset: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
            Ok((size, subset))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyRow {
    pub t: f64,
    pub epsilon: f64,
    pub s_count: usize,
    /// (1/t) ln s_count.
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyTable {
    pub family: String,
    pub rows: Vec<EntropyRow>,
}

impl EntropyTable {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "t,epsilon,count,rate")?;
        for row in &self.rows {
            writeln!(
                out,
                "{:.11e},{:.11e},{},{:.11e}",
                row.t, row.epsilon, row.s_count, row.rate
            )?;
        }
        Ok(())
    }
}

/// Counts and rates over the (t, eps) lattice, rows sorted by
/// (epsilon descending, t ascending).
pub fn entropy_scan(
    family: &[GridFunction],
    t_list: &[f64],
    eps_list: &[f64],
    spec: &SpaceSpec,
    mode: SearchMode,
) -> Result<EntropyTable, EntropyError> {
    if t_list.is_empty() || eps_list.is_empty() {
        return Err(EntropyError::InvalidQuery("empty scan lists".into()));
    }
    if let Some(&t) = t_list.iter().find(|&&t| t <= 0.0) {
        return Err(EntropyError::InvalidQuery(format!(
            "scan horizons must be positive for rates, got {t}"
        )));
    }
    let mut ts = t_list.to_vec();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut epss = eps_list.to_vec();
    epss.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut rows = Vec::with_capacity(ts.len() * epss.len());
    for &eps in &epss {
        for &t in &ts {
            let q = SeparationQuery::new(family, t, eps, spec)?;
            let (count, _) = max_separated(&q, spec, mode)?;
            rows.push(EntropyRow {
                t,
                epsilon: eps,
                s_count: count,
                rate: (count as f64).ln() / t,
            });
        }
    }
    Ok(EntropyTable {
        family: format!(
            "{} members on a {}-cell grid",
            family.len(),
            spec.cells()
        ),
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyLevel {
    pub level: usize,
    pub t: f64,
    pub scheduled: usize,
    pub measured_count: usize,
    pub measured_rate: f64,
    /// (1/t_n) ln a_n from the construction.
    pub theoretical_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfiniteEntropyReport {
    pub epsilon: f64,
    pub gamma: f64,
    pub big_m: f64,
    pub levels: Vec<EntropyLevel>,
    /// Measured rates strictly increase level to level.
    pub rates_increasing: bool,
}

impl fmt::Display for InfiniteEntropyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "separated-set growth at eps = {:.6e} (gamma = {:.6e}, M = {:.6e})",
            self.epsilon, self.gamma, self.big_m
        )?;
        writeln!(f, "level        t  scheduled  measured      rate  rate(theory)")?;
        for row in &self.levels {
            writeln!(
                f,
                "{:>5} {:>8.4} {:>10} {:>9} {:>9.4} {:>13.4}",
                row.level, row.t, row.scheduled, row.measured_count, row.measured_rate,
                row.theoretical_rate
            )?;
        }
        write!(
            f,
            "rates strictly increasing: {}",
            if self.rates_increasing { "yes" } else { "no" }
        )
    }
}

/// End-to-end growth experiment: escape sequences, separated family, then an
/// exact count per level at the separation gap eps = (1/2)(gamma/M)^{1/p}
/// (sup mode: 1/(4M)). Each level's count must reach its schedule a_n; the
/// rate column is the entropy evidence.
pub fn infinite_entropy_experiment(
    v: &WeightFunction,
    cert: &AdmissibilityCertificate,
    depth: usize,
    a_schedule: &[usize],
    spec: &SpaceSpec,
) -> Result<InfiniteEntropyReport, EntropyError> {
    if a_schedule.len() != depth {
        return Err(EntropyError::InvalidQuery(format!(
            "schedule has {} levels, requested {depth}",
            a_schedule.len()
        )));
    }
    let seq = find_escape_sequences(v, cert, depth, spec.x_max(), spec.step())?;
    let family = build_separated_family(&seq, a_schedule, 0, 0, spec)?;
    let epsilon = match spec.mode() {
        Mode::Lp { p } => 0.5 * (seq.gamma / seq.big_m).powf(1.0 / p),
        Mode::C0v => 0.25 / seq.big_m,
    };
    let mut levels = Vec::with_capacity(depth);
    for n in 0..depth {
        let members: Vec<GridFunction> = family
            .level_members(n)
            .into_iter()
            .map(|mem| mem.f.clone())
            .collect();
        let mode = if members.len() <= EXACT_CAP {
            SearchMode::Exact
        } else {
            SearchMode::Greedy
        };
        let q = SeparationQuery::new(&members, seq.t[n], epsilon, spec)?;
        let (count, _) = max_separated(&q, spec, mode)?;
        levels.push(EntropyLevel {
            level: n + 1,
            t: seq.t[n],
            scheduled: a_schedule[n],
            measured_count: count,
            measured_rate: (count as f64).ln() / seq.t[n],
            theoretical_rate: (a_schedule[n] as f64).ln() / seq.t[n],
        });
    }
    let rates_increasing = levels
        .windows(2)
        .all(|w| w[1].measured_rate > w[0].measured_rate);
    Ok(InfiniteEntropyReport {
        epsilon,
        gamma: seq.gamma,
        big_m: seq.big_m,
        levels,
        rates_increasing,
    })
}
