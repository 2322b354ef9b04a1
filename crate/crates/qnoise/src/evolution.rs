//! Time evolution of the four-qubit state under RTN.
//!
//! Two routes are implemented. `analytic_evolve` builds the 16×16 averaged
//! density matrix entry-by-entry from the closed-form coefficient tables,
//! everything expressed through β_κ(t): the independent-environment variants
//! involve powers of β₂ only, the common-environment variants β₂, β₄, β₆ and
//! β₈. `mc_evolve` averages explicitly over sampled unitary trajectories and
//! serves as an independent check able to catch transcription errors in the
//! coefficient tables.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{hermiticity_defect, kron, CMatrix};
use crate::noise::{beta, sample_trajectory_with, trajectory_rng, NoiseParams};
use crate::states::{initial_density, Coupling, Family, SystemConfig};

/// Monte Carlo ensemble configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n_traj: usize,
    pub master_seed: u64,
    /// Evaluation times (strictly increasing, non-negative).
    pub t_grid: Vec<f64>,
}

impl McConfig {
    pub fn new(n_traj: usize, master_seed: u64, t_grid: Vec<f64>) -> Result<Self> {
        if n_traj == 0 {
            return Err(Error::InvalidConfig("n_traj must be >= 1".into()));
        }
        if t_grid.is_empty() {
            return Err(Error::InvalidGrid("empty time grid".into()));
        }
        if t_grid[0] < 0.0 || t_grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("times must be non-negative".into()));
        }
        if t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "grid must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            n_traj,
            master_seed,
            t_grid,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    MonteCarlo,
}

/// A density matrix at one instant, tagged with how it was obtained.
#[derive(Debug, Clone)]
pub struct EvolvedState {
    pub t: f64,
    pub rho: CMatrix,
    pub provenance: Provenance,
}

/// State-invariant tolerances for the analytic route.
pub const ANALYTIC_TRACE_TOL: f64 = 1e-12;
pub const ANALYTIC_HERM_TOL: f64 = 1e-12;
pub const ANALYTIC_EIG_FLOOR: f64 = -1e-9;
/// State-invariant tolerances for the Monte Carlo route.
pub const MC_TRACE_TOL: f64 = 1e-10;
pub const MC_HERM_TOL: f64 = 1e-10;
pub const MC_EIG_FLOOR: f64 = -1e-8;

impl EvolvedState {
    /// Checks trace, Hermiticity and positivity; the error message names the
    /// offending entries so a bad coefficient cell can be located.
    pub fn validate(&self, trace_tol: f64, herm_tol: f64, eig_floor: f64) -> Result<()> {
        let mut problems = Vec::new();
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            let diag: Vec<String> = (0..self.rho.nrows())
                .map(|i| format!("({i},{i})={:.6e}", self.rho[(i, i)].re))
                .collect();
            problems.push(format!(
                "trace = {tr} (defect {:.3e}); diagonal: {}",
                (tr.re - 1.0).abs().max(tr.im.abs()),
                diag.join(" ")
            ));
        }
        let herm = hermiticity_defect(&self.rho);
        if herm > herm_tol {
            let mut cells = Vec::new();
            for i in 0..self.rho.nrows() {
                for j in i..self.rho.ncols() {
                    let d = (self.rho[(i, j)] - self.rho[(j, i)].conj()).norm();
                    if d > herm_tol {
                        cells.push(format!("({i},{j}) defect {d:.3e}"));
                    }
                }
            }
            cells.truncate(6);
            problems.push(format!(
                "Hermiticity defect {herm:.3e} at {}",
                cells.join(", ")
            ));
        }
        if problems.is_empty() {
            // positivity only meaningful once the matrix is Hermitian
            let vals = crate::matrix::hermitian_eigvals(&self.rho)?;
            let min_eig = *vals.last().unwrap();
            if min_eig < eig_floor {
                problems.push(format!(
                    "min eigenvalue {min_eig:.3e} below {eig_floor:.1e}"
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDensity(problems.join("; ")))
        }
    }
}

/// Single-qubit propagator e^(−iε₀t)·[[cos η, −i sin η], [−i sin η, cos η]].
pub fn single_qubit_u(eta: f64, epsilon0: f64, t: f64) -> CMatrix {
    let phase = Complex64::from_polar(1.0, -epsilon0 * t);
    let c = Complex64::new(eta.cos(), 0.0);
    let s = Complex64::new(0.0, -eta.sin());
    CMatrix::from_row_slice(2, 2, &[phase * c, phase * s, phase * s, phase * c])
}

const W1: [usize; 4] = [1, 2, 4, 8];
const W2: [usize; 6] = [3, 5, 6, 9, 10, 12];
const W3: [usize; 4] = [7, 11, 13, 14];

fn real_matrix(fill: impl Fn(&mut dyn FnMut(usize, usize, f64))) -> CMatrix {
    let mut m = CMatrix::zeros(16, 16);
    let mut set = |r: usize, c: usize, v: f64| {
        m[(r, c)] = Complex64::new(v, 0.0);
    };
    fill(&mut set);
    m
}

fn ghz_ie_matrix(q: f64, b2: f64) -> CMatrix {
    let varphi = 1.0 / 16.0 + 3.0 * q / 8.0 * b2.powi(2) + q / 16.0 * b2.powi(4);
    let eps = -q / 16.0 * b2.powi(4) + 1.0 / 16.0;
    let chi = 1.0 / 16.0 + q * (b2.powi(4) / 16.0 - b2.powi(2) / 8.0);
    let phi = q / 16.0 * (b2.powi(4) + 6.0 * b2.powi(2) + 1.0);
    let psi = -q / 16.0 * (b2.powi(4) - 1.0);
    let xi = q / 16.0 * (1.0 + b2).powi(2) * (b2.powi(2) - 2.0 * b2 + 1.0);
    real_matrix(|set| {
        for d in [0, 15] {
            set(d, d, varphi);
        }
        for d in W1.into_iter().chain(W3) {
            set(d, d, eps);
            set(d, 15 - d, psi);
        }
        for d in W2 {
            set(d, d, chi);
            set(d, 15 - d, xi);
        }
        set(0, 15, phi);
        set(15, 0, phi);
    })
}

fn ghz_ce_matrix(q: f64, b4: f64, b8: f64) -> CMatrix {
    let varphi = 15.0 * q / 64.0 + 1.0 / 16.0 + q * (3.0 * b4 / 16.0 + b8 / 64.0);
    let mu = q * (b4 / 16.0 + b8 / 64.0 - 5.0 / 64.0);
    let phi = q * (3.0 * b4 / 16.0 + b8 / 64.0 + 19.0 / 64.0);
    let eps = 1.0 / 16.0 - q * (3.0 / 64.0 + b8 / 64.0);
    let delta = q / 64.0 * (1.0 - b8);
    let theta = 1.0 / 16.0 - q / 64.0 + q * (-b4 / 16.0 + b8 / 64.0);
    let omega = q * (b8 / 64.0 - b4 / 16.0 + 3.0 / 64.0);
    real_matrix(|set| {
        for d in [0, 15] {
            set(d, d, varphi);
        }
        set(0, 15, phi);
        set(15, 0, phi);
        for d in W2 {
            set(0, d, mu);
            set(d, 0, mu);
            set(15, d, mu);
            set(d, 15, mu);
            set(d, d, theta);
            for e in W2 {
                if e != d {
                    set(d, e, omega);
                }
            }
        }
        for d in W1.into_iter().chain(W3) {
            set(d, d, eps);
            for e in W1.into_iter().chain(W3) {
                if e != d {
                    set(d, e, delta);
                }
            }
        }
    })
}

fn w_ie_matrix(q: f64, b2: f64) -> CMatrix {
    let varphi = 1.0 / 16.0 + q * (b2 / 8.0 - b2.powi(3) / 8.0 - b2.powi(4) / 16.0);
    let mu = -q / 32.0 * (b2.powi(4) + 2.0 * b2.powi(3) - 2.0 * b2 - 1.0);
    let eps = 1.0 / 16.0 + q / 16.0 * (b2 + b2.powi(3) + b2.powi(4));
    let eta = 1.0 / 16.0 + q / 16.0 * (b2.powi(4) - b2.powi(3) - b2);
    let delta = q / 32.0 * (1.0 + b2.powi(4) + 2.0 * b2.powi(3) + 2.0 * b2.powi(2) + 2.0 * b2);
    let phi = q / 32.0 * (1.0 + b2.powi(4) - 2.0 * b2.powi(2));
    let chi = q / 32.0 * (1.0 + b2.powi(4) - 2.0 * b2.powi(3) + 2.0 * b2.powi(2) - 2.0 * b2);
    let omega = q / 32.0 * (1.0 - b2.powi(4));
    let psi = -q / 32.0 * (b2.powi(4) - 2.0 * b2.powi(3) + 2.0 * b2 - 1.0);
    let theta = 1.0 / 16.0 * (1.0 - q * b2.powi(4));
    let alpha = 1.0 / 16.0 - q / 16.0 * (b2.powi(4) - 2.0 * b2.powi(3) + 2.0 * b2);
    real_matrix(|set| {
        set(0, 0, varphi);
        set(15, 15, alpha);
        // the coherence between a basis state and its bit-complement averages
        // to zero under independent environments; those cells stay empty
        for d in W2 {
            set(0, d, mu);
            set(d, 0, mu);
            set(15, d, psi);
            set(d, 15, psi);
            set(d, d, theta);
            for e in W2 {
                if e != d && e != 15 - d {
                    set(d, e, omega);
                }
            }
        }
        for d in W1 {
            set(d, d, eps);
            for e in W1 {
                if e != d {
                    set(d, e, delta);
                }
            }
        }
        for d in W3 {
            set(d, d, eta);
            for e in W3 {
                if e != d {
                    set(d, e, chi);
                }
            }
        }
        for d in W1 {
            for e in W3 {
                if e != 15 - d {
                    set(d, e, phi);
                    set(e, d, phi);
                }
            }
        }
    })
}

fn w_ce_matrix(q: f64, b2: f64, b4: f64, b6: f64, b8: f64) -> CMatrix {
    let varphi = 3.0 * q / 32.0 + 1.0 / 16.0 + q / 8.0 * (b2 - b4 - b6 - b8 / 4.0);
    let mu = q / 32.0 * (-2.0 * b6 - b8 + 2.0 * b2 + 1.0);
    let theta = 1.0 / 16.0 - q / 32.0 * (1.0 + b8);
    let eps = 1.0 / 16.0 + q / 32.0 * (2.0 * b2 + 2.0 * b6 + b8 + b4);
    let delta = q / 32.0 * (2.0 * b2 + 2.0 * b6 + b4 + b8 + 2.0);
    let phi = q / 32.0 * (b8 - b4);
    let omega = -q / 32.0 * (b8 - 1.0);
    let psi = q / 32.0 * (-2.0 * b2 - b8 + 2.0 * b6 + 1.0);
    let eta = 1.0 / 16.0 + q / 32.0 * (b8 + b4 - 2.0 * b6 - 2.0 * b2);
    let chi = -q / 32.0 * (2.0 * b2 - b4 - b8 + 2.0 * b6 - 2.0);
    let alpha = 3.0 * q / 32.0 + 1.0 / 16.0 - q / 32.0 * (b8 - 4.0 * b6 + 4.0 * b4 + 4.0 * b2);
    let zeta = -q / 32.0 * (3.0 - 4.0 * b4 + b8);
    real_matrix(|set| {
        set(0, 0, varphi);
        set(15, 15, alpha);
        set(0, 15, zeta);
        set(15, 0, zeta);
        for d in W2 {
            set(0, d, mu);
            set(d, 0, mu);
            set(15, d, psi);
            set(d, 15, psi);
            set(d, d, theta);
            for e in W2 {
                if e != d {
                    set(d, e, omega);
                }
            }
        }
        for d in W1 {
            set(d, d, eps);
            for e in W1 {
                if e != d {
                    set(d, e, delta);
                }
            }
        }
        for d in W3 {
            set(d, d, eta);
            for e in W3 {
                if e != d {
                    set(d, e, chi);
                }
            }
        }
        for d in W1 {
            for e in W3 {
                set(d, e, phi);
                set(e, d, phi);
            }
        }
    })
}

/// Closed-form averaged state of the four-qubit system at time t.
pub fn analytic_evolve(cfg: &SystemConfig, p: &NoiseParams, t: f64) -> Result<EvolvedState> {
    if cfg.n_qubits != 4 {
        return Err(Error::Unsupported(format!(
            "analytic evolution is defined for 4 qubits, got {}",
            cfg.n_qubits
        )));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidGrid(format!("time must be >= 0, got {t}")));
    }
    let q = cfg.q;
    let rho = match (cfg.family, cfg.coupling) {
        (Family::Ghz, Coupling::Ie) => ghz_ie_matrix(q, beta(2, p, t)),
        (Family::Ghz, Coupling::Ce) => ghz_ce_matrix(q, beta(4, p, t), beta(8, p, t)),
        (Family::W, Coupling::Ie) => w_ie_matrix(q, beta(2, p, t)),
        (Family::W, Coupling::Ce) => w_ce_matrix(
            q,
            beta(2, p, t),
            beta(4, p, t),
            beta(6, p, t),
            beta(8, p, t),
        ),
    };
    let state = EvolvedState {
        t,
        rho,
        provenance: Provenance::Analytic,
    };
    state
        .validate(ANALYTIC_TRACE_TOL, ANALYTIC_HERM_TOL, ANALYTIC_EIG_FLOOR)
        .map_err(|e| Error::StateInvariant {
            variant: format!("{}-{}", cfg.family, cfg.coupling),
            q,
            gamma_ratio: p.gamma / p.nu,
            t: t * p.nu,
            detail: e.to_string(),
        })?;
    Ok(state)
}

const MC_CHUNK: usize = 256;

/// Monte Carlo average of U({ϑ},t)·ρ(0)·U† over sampled RTN realizations.
///
/// A common environment draws one phase path per trajectory and applies it to
/// every qubit; independent environments draw one path per qubit. Trajectory
/// i always uses ChaCha stream i of the master seed and partial sums are
/// combined in fixed chunk order, so results are bitwise reproducible for any
/// thread count.
pub fn mc_evolve(cfg: &SystemConfig, p: &NoiseParams, mc: &McConfig) -> Result<Vec<EvolvedState>> {
    let n = cfg.n_qubits;
    let dim = cfg.dim();
    let rho0 = initial_density(cfg);

    // the sampler integrates the phase from t = 0
    let (sample_grid, skip) = if mc.t_grid[0] == 0.0 {
        (mc.t_grid.clone(), 0usize)
    } else {
        let mut g = Vec::with_capacity(mc.t_grid.len() + 1);
        g.push(0.0);
        g.extend_from_slice(&mc.t_grid);
        (g, 1usize)
    };
    let n_eval = mc.t_grid.len();

    let chunks: Vec<(usize, usize)> = (0..mc.n_traj)
        .step_by(MC_CHUNK)
        .map(|s| (s, (s + MC_CHUNK).min(mc.n_traj)))
        .collect();

    let partials: Vec<Result<Vec<CMatrix>>> = chunks
        .par_iter()
        .map(|&(start, end)| {
            let mut acc = vec![CMatrix::zeros(dim, dim); n_eval];
            for i in start..end {
                let mut rng = trajectory_rng(mc.master_seed, i as u64);
                let paths: Vec<Vec<f64>> = match cfg.coupling {
                    Coupling::Ce => {
                        let s = sample_trajectory_with(p, &sample_grid, &mut rng)?;
                        vec![s.eta]
                    }
                    Coupling::Ie => (0..n)
                        .map(|_| sample_trajectory_with(p, &sample_grid, &mut rng).map(|s| s.eta))
                        .collect::<Result<_>>()?,
                };
                for k in 0..n_eval {
                    let t = mc.t_grid[k];
                    let mut u = single_qubit_u(paths[0][k + skip], p.epsilon0, t);
                    for qubit in 1..n {
                        let path = if paths.len() == 1 { 0 } else { qubit };
                        u = kron(&u, &single_qubit_u(paths[path][k + skip], p.epsilon0, t));
                    }
                    acc[k] += &u * &rho0 * u.adjoint();
                }
            }
            Ok(acc)
        })
        .collect();

    let mut totals = vec![CMatrix::zeros(dim, dim); n_eval];
    for partial in partials {
        let partial = partial?;
        for (tot, part) in totals.iter_mut().zip(partial) {
            *tot += part;
        }
    }

    let scale = 1.0 / mc.n_traj as f64;
    mc.t_grid
        .iter()
        .zip(totals)
        .map(|(&t, sum)| {
            let state = EvolvedState {
                t,
                rho: sum.scale(scale),
                provenance: Provenance::MonteCarlo,
            };
            state
                .validate(MC_TRACE_TOL, MC_HERM_TOL, MC_EIG_FLOOR)
                .map_err(|e| Error::StateInvariant {
                    variant: format!("{}-{} (monte carlo)", cfg.family, cfg.coupling),
                    q: cfg.q,
                    gamma_ratio: p.gamma / p.nu,
                    t: t * p.nu,
                    detail: e.to_string(),
                })?;
            Ok(state)
        })
        .collect()
}
