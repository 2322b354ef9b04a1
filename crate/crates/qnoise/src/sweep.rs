//! Parameter sweeps over (t, q, γ/ν) grids.
//!
//! All externally visible times are dimensionless νt and switching rates are
//! supplied as γ/ν; internally ν = 1. Grid points are dispatched to the rayon
//! pool but rows are assembled in a fixed (γ/ν, q, t) order, so the output is
//! identical for any thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{analytic_evolve, mc_evolve, McConfig};
use crate::matrix::{trace_distance, CMatrix};
use crate::measures::{
    lbc, linear_entropy, negativity_n, qjsd, vn_entropy, witness_expectation, MeasureRecord,
};
use crate::noise::NoiseParams;
use crate::states::{initial_density, maximally_mixed, witness, Coupling, Family, SystemConfig};

/// How the evolved states are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Mc,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Analytic => write!(f, "analytic"),
            Mode::Mc => write!(f, "mc"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(Mode::Analytic),
            "mc" => Ok(Mode::Mc),
            other => Err(Error::InvalidSweep(format!(
                "unknown mode {other:?}, expected analytic or mc"
            ))),
        }
    }
}

/// Which measure columns to compute; the emitted schema never changes, the
/// unselected columns are just left empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureSet {
    pub negativity: bool,
    pub lbc: bool,
    pub witness: bool,
    pub vn_entropy: bool,
    pub linear_entropy: bool,
    pub qjsd_init: bool,
    pub qjsd_mm: bool,
}

impl MeasureSet {
    pub const NAMES: [&'static str; 7] = [
        "negativity",
        "lbc",
        "witness",
        "vn_entropy",
        "linear_entropy",
        "qjsd_init",
        "qjsd_mm",
    ];

    pub fn all() -> Self {
        Self {
            negativity: true,
            lbc: true,
            witness: true,
            vn_entropy: true,
            linear_entropy: true,
            qjsd_init: true,
            qjsd_mm: true,
        }
    }

    pub fn none() -> Self {
        Self {
            negativity: false,
            lbc: false,
            witness: false,
            vn_entropy: false,
            linear_entropy: false,
            qjsd_init: false,
            qjsd_mm: false,
        }
    }

    fn enable(&mut self, name: &str) -> Result<()> {
        match name {
            "negativity" => self.negativity = true,
            "lbc" => self.lbc = true,
            "witness" => self.witness = true,
            "vn_entropy" => self.vn_entropy = true,
            "linear_entropy" => self.linear_entropy = true,
            "qjsd_init" => self.qjsd_init = true,
            "qjsd_mm" => self.qjsd_mm = true,
            other => {
                return Err(Error::InvalidSweep(format!(
                    "unknown measure {other:?}, expected one of {:?} or all",
                    Self::NAMES
                )))
            }
        }
        Ok(())
    }
}

impl FromStr for MeasureSet {
    type Err = Error;

    /// Parses a comma-separated measure list, or `all`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::all());
        }
        let mut set = Self::none();
        for token in s.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            set.enable(&token.to_ascii_lowercase())?;
        }
        if set == Self::none() {
            return Err(Error::InvalidSweep("empty measure set".into()));
        }
        Ok(set)
    }
}

/// A full sweep description: the grid, the measures and the evolution mode.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub coupling: Coupling,
    pub q_values: Vec<f64>,
    pub gamma_over_nu_values: Vec<f64>,
    /// Largest νt on the time grid.
    pub t_max: f64,
    /// Number of grid points, including νt = 0 and νt = t_max.
    pub t_steps: usize,
    pub measures: MeasureSet,
    pub mode: Mode,
    pub mc_trajectories: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.t_steps < 2 {
            return Err(Error::InvalidSweep(format!(
                "t_steps must be >= 2, got {}",
                self.t_steps
            )));
        }
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return Err(Error::InvalidSweep(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.q_values.is_empty() {
            return Err(Error::InvalidSweep("no q values".into()));
        }
        if self.q_values.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return Err(Error::InvalidSweep(format!(
                "q values must lie in [0, 1]: {:?}",
                self.q_values
            )));
        }
        if self.gamma_over_nu_values.is_empty() {
            return Err(Error::InvalidSweep("no gamma/nu values".into()));
        }
        if self
            .gamma_over_nu_values
            .iter()
            .any(|g| !g.is_finite() || *g < 0.0)
        {
            return Err(Error::InvalidSweep(format!(
                "gamma/nu values must be non-negative: {:?}",
                self.gamma_over_nu_values
            )));
        }
        if self.mode == Mode::Mc && self.mc_trajectories == 0 {
            return Err(Error::InvalidSweep(
                "mc mode needs at least one trajectory".into(),
            ));
        }
        Ok(())
    }
}

/// Uniform grid of `t_steps` points covering [0, t_max].
pub fn time_grid(t_max: f64, t_steps: usize) -> Vec<f64> {
    (0..t_steps)
        .map(|k| t_max * k as f64 / (t_steps - 1) as f64)
        .collect()
}

fn sorted_dedup(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Everything a grid point shares with its (γ/ν, q) block.
struct GridContext<'a> {
    q: f64,
    gamma_over_nu: f64,
    family: Family,
    coupling: Coupling,
    rho_init: &'a CMatrix,
    mm: &'a CMatrix,
    w_op: &'a CMatrix,
    measures: &'a MeasureSet,
}

fn compute_record(t: f64, rho: &CMatrix, ctx: &GridContext<'_>) -> Result<MeasureRecord> {
    let m = ctx.measures;
    Ok(MeasureRecord {
        t,
        q: ctx.q,
        gamma_over_nu: ctx.gamma_over_nu,
        family: ctx.family,
        coupling: ctx.coupling,
        negativity: if m.negativity {
            Some(negativity_n(rho, 4)?)
        } else {
            None
        },
        lbc: if m.lbc { Some(lbc(rho, 4)?) } else { None },
        witness: if m.witness {
            Some(witness_expectation(ctx.w_op, rho)?)
        } else {
            None
        },
        vn_entropy: if m.vn_entropy {
            Some(vn_entropy(rho)?)
        } else {
            None
        },
        linear_entropy: if m.linear_entropy {
            Some(linear_entropy(rho)?)
        } else {
            None
        },
        qjsd_init: if m.qjsd_init {
            Some(qjsd(rho, ctx.rho_init)?)
        } else {
            None
        },
        qjsd_mm: if m.qjsd_mm {
            Some(qjsd(rho, ctx.mm)?)
        } else {
            None
        },
    })
}

/// Runs the sweep; one record per (γ/ν, q, νt) grid point, rows sorted by
/// (γ/ν, q, t). Deterministic given the seed.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<MeasureRecord>> {
    spec.validate()?;
    let grid = time_grid(spec.t_max, spec.t_steps);
    let gammas = sorted_dedup(&spec.gamma_over_nu_values);
    let qs = sorted_dedup(&spec.q_values);
    let w_op = witness(spec.family, 4)?;
    let mm = maximally_mixed(4);

    let mut records = Vec::with_capacity(gammas.len() * qs.len() * grid.len());
    for &gamma in &gammas {
        let p = NoiseParams::new(1.0, gamma)?;
        for &q in &qs {
            let cfg = SystemConfig::new(spec.family, spec.coupling, q)?;
            let rho_init = initial_density(&cfg);
            let states: Vec<(f64, CMatrix)> = match spec.mode {
                Mode::Analytic => grid
                    .par_iter()
                    .map(|&t| analytic_evolve(&cfg, &p, t).map(|s| (t, s.rho)))
                    .collect::<Result<_>>()?,
                Mode::Mc => {
                    let mc = McConfig::new(spec.mc_trajectories, spec.seed, grid.clone())?;
                    mc_evolve(&cfg, &p, &mc)?
                        .into_iter()
                        .map(|s| (s.t, s.rho))
                        .collect()
                }
            };
            let ctx = GridContext {
                q,
                gamma_over_nu: gamma,
                family: spec.family,
                coupling: spec.coupling,
                rho_init: &rho_init,
                mm: &mm,
                w_op: &w_op,
                measures: &spec.measures,
            };
            let rows: Vec<MeasureRecord> = states
                .par_iter()
                .map(|(t, rho)| compute_record(*t, rho, &ctx))
                .collect::<Result<_>>()?;
            records.extend(rows);
        }
    }
    Ok(records)
}

/// One row of a Monte Carlo vs analytic comparison.
#[derive(Debug, Clone, Serialize)]
pub struct McCompareRow {
    pub t: f64,
    pub q: f64,
    pub gamma_over_nu: f64,
    pub family: Family,
    pub coupling: Coupling,
    pub trace_distance: f64,
    pub negativity_mc: f64,
    pub negativity_analytic: f64,
}

/// Evolves the same grid through both routes and reports their distance.
pub fn mc_compare(
    family: Family,
    coupling: Coupling,
    q_values: &[f64],
    gamma_over_nu_values: &[f64],
    t_points: &[f64],
    trajectories: usize,
    seed: u64,
) -> Result<Vec<McCompareRow>> {
    if t_points.is_empty() {
        return Err(Error::InvalidGrid("no comparison times".into()));
    }
    let ts = sorted_dedup(t_points);
    if ts[0] < 0.0 {
        return Err(Error::InvalidGrid("times must be non-negative".into()));
    }
    let gammas = sorted_dedup(gamma_over_nu_values);
    let qs = sorted_dedup(q_values);
    let mut rows = Vec::new();
    for &gamma in &gammas {
        let p = NoiseParams::new(1.0, gamma)?;
        for &q in &qs {
            let cfg = SystemConfig::new(family, coupling, q)?;
            let mc = McConfig::new(trajectories, seed, ts.clone())?;
            let mc_states = mc_evolve(&cfg, &p, &mc)?;
            for state in mc_states {
                let exact = analytic_evolve(&cfg, &p, state.t)?;
                rows.push(McCompareRow {
                    t: state.t,
                    q,
                    gamma_over_nu: gamma,
                    family,
                    coupling,
                    trace_distance: trace_distance(&state.rho, &exact.rho)?,
                    negativity_mc: negativity_n(&state.rho, 4)?,
                    negativity_analytic: negativity_n(&exact.rho, 4)?,
                });
            }
        }
    }
    Ok(rows)
}
