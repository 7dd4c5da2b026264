//! Parameter grids and their evaluation.
//!
//! Grid points are independent, so with the `parallel` feature they are
//! evaluated on the rayon pool; results always come back in row-major order
//! (`axis1` outer, `axis2` inner) whichever execution mode is used.

use std::fmt;
use std::str::FromStr;

use crate::correlations::{concurrence, concurrence_closed_form, correlated_coherence, fidelity_pure, l1_coherence};
use crate::error::{Error, Result};
use crate::model::{analytic_energies, ground_state, ModelParams};
use crate::search;
use crate::thermal::{log_temperatures, thermal_state};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DQD_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Epsilon,
    Tunneling,
    Bz,
    Bx,
    Temperature,
}

impl Param {
    pub const ALL: [Param; 5] = [
        Param::Epsilon,
        Param::Tunneling,
        Param::Bz,
        Param::Bx,
        Param::Temperature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Epsilon => "epsilon",
            Param::Tunneling => "t",
            Param::Bz => "bz",
            Param::Bx => "bx",
            Param::Temperature => "T",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown parameter `{s}` (expected epsilon, t, bz, bx or T)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            _ => Err(Error::Config(format!("unknown scale `{s}` (expected linear or log)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn new(param: Param, min: f64, max: f64, count: usize, scale: Scale) -> Self {
        Self {
            param,
            min,
            max,
            count,
            scale,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Config(format!("axis {}: count must be at least 2", self.param)));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::Config(format!("axis {}: bounds must be finite", self.param)));
        }
        if self.scale == Scale::Log && self.min <= 0.0 {
            return Err(Error::Config(format!("axis {}: log scale needs min > 0", self.param)));
        }
        if self.param == Param::Temperature && self.min <= 0.0 {
            return Err(Error::Config("axis T: temperatures must be positive".into()));
        }
        if self.param == Param::Tunneling && self.min < 0.0 {
            return Err(Error::Config("axis t: tunneling must be non-negative".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match self.scale {
            Scale::Log => log_temperatures(self.min, self.max, self.count),
            Scale::Linear => {
                let n = self.count - 1;
                (0..self.count)
                    .map(|i| {
                        if i == n {
                            self.max
                        } else {
                            self.min + (self.max - self.min) * i as f64 / n as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Energies,
    Populations,
    Concurrence,
    ConcurrenceClosed,
    FidelityPure,
    L1,
    CorrelatedCoherence,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Energies,
        Measure::Populations,
        Measure::Concurrence,
        Measure::ConcurrenceClosed,
        Measure::FidelityPure,
        Measure::L1,
        Measure::CorrelatedCoherence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Energies => "energies",
            Measure::Populations => "populations",
            Measure::Concurrence => "concurrence",
            Measure::ConcurrenceClosed => "concurrence_closed",
            Measure::FidelityPure => "fidelity_pure",
            Measure::L1 => "l1",
            Measure::CorrelatedCoherence => "correlated_coherence",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Measure::Energies => &["E1", "E2", "E3", "E4"],
            Measure::Populations => &["rho11", "rho22", "rho33", "rho44"],
            Measure::Concurrence => &["C"],
            Measure::ConcurrenceClosed => &["C_closed", "C_closed_alt", "C_closed_residual"],
            Measure::FidelityPure => &["F"],
            Measure::L1 => &["l1"],
            Measure::CorrelatedCoherence => &["Ccc"],
        }
    }

    pub fn needs_temperature(self) -> bool {
        self != Measure::Energies
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown measure `{s}`")))
    }
}

/// One grid point. Temperature is absent for purely spectral grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub params: ModelParams,
    pub temperature: Option<f64>,
}

impl Point {
    pub fn get(&self, p: Param) -> Option<f64> {
        match p {
            Param::Epsilon => Some(self.params.epsilon),
            Param::Tunneling => Some(self.params.t),
            Param::Bz => Some(self.params.bz),
            Param::Bx => Some(self.params.bx),
            Param::Temperature => self.temperature,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub point: Point,
    /// Measure columns in [`SweepGrid::measure_columns`] order.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub fixed: Vec<(Param, f64)>,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub measures: Vec<Measure>,
}

impl SweepGrid {
    pub fn new(axis1: Axis, measures: Vec<Measure>) -> Self {
        Self {
            fixed: Vec::new(),
            axis1,
            axis2: None,
            measures,
        }
    }

    pub fn fix(mut self, param: Param, value: f64) -> Self {
        self.fixed.retain(|(p, _)| *p != param);
        self.fixed.push((param, value));
        self
    }

    pub fn with_axis2(mut self, axis: Axis) -> Self {
        self.axis2 = Some(axis);
        self
    }

    fn axes(&self) -> impl Iterator<Item = &Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref())
    }

    fn has_temperature(&self) -> bool {
        self.fixed.iter().any(|(p, _)| *p == Param::Temperature) || self.axes().any(|a| a.param == Param::Temperature)
    }

    pub fn validate(&self) -> Result<()> {
        if self.measures.is_empty() {
            return Err(Error::Config("no measures requested".into()));
        }
        for a in self.axes() {
            a.validate()?;
        }
        if let Some(a2) = &self.axis2 {
            if a2.param == self.axis1.param {
                return Err(Error::Config(format!("both axes sweep {}", a2.param)));
            }
        }
        for (p, v) in &self.fixed {
            if self.axes().any(|a| a.param == *p) {
                return Err(Error::Config(format!("{p} is both fixed and swept")));
            }
            if !v.is_finite() {
                return Err(Error::Config(format!("{p} must be finite")));
            }
        }
        for p in [Param::Epsilon, Param::Tunneling, Param::Bz, Param::Bx] {
            if self.value_source(p).is_none() {
                return Err(Error::Config(format!("parameter {p} is neither fixed nor swept")));
            }
        }
        if self.measures.iter().any(|m| m.needs_temperature()) && !self.has_temperature() {
            return Err(Error::Config("thermal measures need a temperature T".into()));
        }
        if let Some(&(_, t)) = self.fixed.iter().find(|(p, _)| *p == Param::Temperature) {
            if t <= 0.0 {
                return Err(Error::Config("T must be positive".into()));
            }
        }
        if let Some(&(_, t)) = self.fixed.iter().find(|(p, _)| *p == Param::Tunneling) {
            if t < 0.0 {
                return Err(Error::Config("t must be non-negative".into()));
            }
        }
        Ok(())
    }

    fn value_source(&self, p: Param) -> Option<()> {
        (self.fixed.iter().any(|(q, _)| *q == p) || self.axes().any(|a| a.param == p)).then_some(())
    }

    /// Parameter columns present in the output, in canonical order.
    pub fn param_columns(&self) -> Vec<Param> {
        let with_t = self.has_temperature();
        Param::ALL
            .into_iter()
            .filter(|p| *p != Param::Temperature || with_t)
            .collect()
    }

    pub fn measure_columns(&self) -> Vec<&'static str> {
        self.measures.iter().flat_map(|m| m.columns().iter().copied()).collect()
    }

    pub fn header(&self) -> Vec<String> {
        self.param_columns()
            .iter()
            .map(|p| p.name().to_string())
            .chain(self.measure_columns().into_iter().map(String::from))
            .collect()
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> Result<Vec<Point>> {
        self.validate()?;
        let xs = self.axis1.values();
        let ys = self.axis2.map(|a| a.values());
        let mut out = Vec::with_capacity(xs.len() * ys.as_ref().map_or(1, Vec::len));
        for &x in &xs {
            match &ys {
                None => out.push(self.point_at(&[(self.axis1.param, x)])),
                Some(ys) => {
                    let a2 = self.axis2.expect("axis2 present").param;
                    for &y in ys {
                        out.push(self.point_at(&[(self.axis1.param, x), (a2, y)]));
                    }
                }
            }
        }
        Ok(out)
    }

    fn point_at(&self, swept: &[(Param, f64)]) -> Point {
        let lookup = |p: Param| {
            swept
                .iter()
                .chain(self.fixed.iter())
                .find(|(q, _)| *q == p)
                .map(|&(_, v)| v)
        };
        Point {
            params: ModelParams {
                epsilon: lookup(Param::Epsilon).unwrap_or(0.0),
                t: lookup(Param::Tunneling).unwrap_or(0.0),
                bz: lookup(Param::Bz).unwrap_or(0.0),
                bx: lookup(Param::Bx).unwrap_or(0.0),
            },
            temperature: lookup(Param::Temperature),
        }
    }

    /// One CSV row: parameter columns followed by measure columns.
    pub fn row(&self, record: &SweepRecord) -> Vec<f64> {
        self.param_columns()
            .iter()
            .map(|&p| record.point.get(p).unwrap_or(f64::NAN))
            .chain(record.values.iter().copied())
            .collect()
    }
}

/// Evaluates the requested measures at one point.
pub fn evaluate_point(point: &Point, measures: &[Measure]) -> Result<Vec<f64>> {
    let params = &point.params;
    params.validate()?;
    let state = match (measures.iter().any(|m| m.needs_temperature()), point.temperature) {
        (true, Some(temp)) => Some(thermal_state(params, temp)?),
        (true, None) => return Err(Error::Config("thermal measure without temperature".into())),
        (false, _) => None,
    };
    let thermal = || state.as_ref().expect("thermal state computed above");

    let mut values = Vec::with_capacity(measures.len() * 2);
    let mut wootters = None;
    for m in measures {
        match m {
            Measure::Energies => values.extend(analytic_energies(params)?),
            Measure::Populations => values.extend(thermal().populations()),
            Measure::Concurrence => {
                let c = concurrence(&thermal().rho)?;
                wootters = Some(c);
                values.push(c);
            }
            Measure::ConcurrenceClosed => {
                let c = match wootters {
                    Some(c) => c,
                    None => concurrence(&thermal().rho)?,
                };
                let cf = concurrence_closed_form(&thermal().rho)?;
                values.extend([cf.value, cf.value_alt, (cf.value - c).abs()]);
            }
            Measure::FidelityPure => {
                let gs = ground_state(params)?;
                values.push(fidelity_pure(&gs.vector, &thermal().rho)?);
            }
            Measure::L1 => values.push(l1_coherence(thermal().rho.matrix())),
            Measure::CorrelatedCoherence => {
                let cc = correlated_coherence(&thermal().rho)?.value;
                if cc < -1e-12 {
                    return Err(Error::InvariantViolation(format!(
                        "negative correlated coherence {cc:e} at {point:?}"
                    )));
                }
                values.push(cc.max(0.0));
            }
        }
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvariantViolation(format!(
            "non-finite value {bad} at {point:?}"
        )));
    }
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool; identical to `Sequential` without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Evaluates `f` over `items`, preserving order.
pub fn map_points<T, U, F>(items: &[T], execution: Execution, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<SweepRecord>> {
    run_sweep_with(grid, Execution::default())
}

pub fn run_sweep_with(grid: &SweepGrid, execution: Execution) -> Result<Vec<SweepRecord>> {
    let points = grid.points()?;
    map_points(&points, execution, |p| {
        Ok(SweepRecord {
            point: *p,
            values: evaluate_point(p, &grid.measures)?,
        })
    })
}

/// Reads [`THREADS_ENV`]; `None` when unset.
pub fn worker_threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::Config(format!("{THREADS_ENV}: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got `{s}`"
            ))),
        },
    }
}

/// Sizes the global rayon pool from [`THREADS_ENV`]. Call once, before any sweep.
pub fn init_thread_pool() -> Result<()> {
    let threads = worker_threads_from_env()?;
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        // a pool that is already initialized keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub value: f64,
    /// Index of the best grid point before refinement.
    pub grid_index: usize,
}

/// Maximum of `f` over a log-spaced grid, refined by golden section in
/// `ln x` between the neighbours of the best grid point.
pub fn find_peak_log<F>(f: F, grid: &[f64], execution: Execution) -> Result<Peak>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    let values = map_points(grid, execution, |&x| f(x))?;
    let i = search::argmax(&values).ok_or_else(|| Error::Config("empty grid".into()))?;
    if i == 0 || i + 1 == grid.len() {
        return Ok(Peak {
            x: grid[i],
            value: values[i],
            grid_index: i,
        });
    }
    let neg = |u: f64| f(u.exp()).map(|v| -v).unwrap_or(f64::INFINITY);
    let (u, nv) = search::golden_section_min(neg, grid[i - 1].ln(), grid[i + 1].ln(), 1e-10);
    if -nv >= values[i] {
        Ok(Peak {
            x: u.exp(),
            value: -nv,
            grid_index: i,
        })
    } else {
        Ok(Peak {
            x: grid[i],
            value: values[i],
            grid_index: i,
        })
    }
}

/// Temperature at which correlated coherence peaks, scanning `n` log-spaced
/// temperatures in `[t_min, t_max]`.
pub fn correlated_coherence_peak(params: &ModelParams, t_min: f64, t_max: f64, n: usize) -> Result<Peak> {
    let grid = log_temperatures(t_min, t_max, n);
    find_peak_log(
        |temp| Ok(correlated_coherence(&thermal_state(params, temp)?.rho)?.value),
        &grid,
        Execution::default(),
    )
}
