//! The random telegraph noise process.
//!
//! A bistable fluctuator ϑ(t) ∈ {+1, −1} starts in either value with equal
//! probability and switches at Poisson rate γ; its autocorrelation is
//! exp(−2γ|τ|). A qubit coupled with strength ν accumulates the random phase
//! η(t) = ν ∫₀ᵗ ϑ(τ) dτ. Trajectories are sampled event-by-event and the
//! phase is integrated exactly between switches, so the only statistical
//! error in Monte Carlo averages is the finite sample count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};

/// RTN parameters: coupling strength ν, switching rate γ, qubit energy ε₀.
///
/// ε₀ contributes only a global phase to the single-qubit propagator and
/// cancels in every density matrix; it defaults to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub nu: f64,
    pub gamma: f64,
    pub epsilon0: f64,
}

impl NoiseParams {
    pub fn new(nu: f64, gamma: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "coupling strength nu must be positive, got {nu}"
            )));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "switching rate gamma must be non-negative, got {gamma}"
            )));
        }
        Ok(Self {
            nu,
            gamma,
            epsilon0: 0.0,
        })
    }

    pub fn with_epsilon0(mut self, epsilon0: f64) -> Self {
        self.epsilon0 = epsilon0;
        self
    }

    /// Markovian regime test for the harmonic κ: γ > κν.
    pub fn is_markovian(&self, kappa: u32) -> bool {
        self.gamma > kappa as f64 * self.nu
    }
}

/// One RTN realization: switch times and the accumulated phase on a time grid.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t_grid: Vec<f64>,
    /// η(t_k) in radians, exact piecewise-linear integral of ν·ϑ.
    pub eta: Vec<f64>,
    /// Initial fluctuator sign, +1 or −1.
    pub theta0: i8,
    pub switch_times: Vec<f64>,
}

/// RNG for trajectory `index` of an ensemble. Each trajectory gets its own
/// ChaCha stream, so ensembles are reproducible under any parallel schedule.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidGrid(format!(
            "trajectory grid must start at 0, got {}",
            t_grid[0]
        )));
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Samples one fluctuator realization, deterministically from `seed`.
pub fn sample_trajectory(p: &NoiseParams, t_grid: &[f64], seed: u64) -> Result<TrajectorySample> {
    let mut rng = trajectory_rng(seed, 0);
    sample_trajectory_with(p, t_grid, &mut rng)
}

/// Samples one fluctuator realization drawing from the supplied generator.
pub fn sample_trajectory_with(
    p: &NoiseParams,
    t_grid: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<TrajectorySample> {
    check_grid(t_grid)?;
    let t_max = *t_grid.last().unwrap();
    let theta0: i8 = if rng.random_bool(0.5) { 1 } else { -1 };

    let mut switch_times = Vec::new();
    if p.gamma > 0.0 {
        let exp = Exp::new(p.gamma).expect("gamma > 0");
        let mut t = 0.0;
        loop {
            t += exp.sample(rng);
            if t >= t_max {
                break;
            }
            switch_times.push(t);
        }
    }

    let mut eta = Vec::with_capacity(t_grid.len());
    let nu = p.nu;
    let mut t_cur = 0.0;
    let mut eta_cur = 0.0;
    let mut theta = theta0 as f64;
    let mut next_switch = 0usize;
    for &g in t_grid {
        while next_switch < switch_times.len() && switch_times[next_switch] <= g {
            let ts = switch_times[next_switch];
            eta_cur += nu * theta * (ts - t_cur);
            t_cur = ts;
            theta = -theta;
            next_switch += 1;
        }
        let value = eta_cur + nu * theta * (g - t_cur);
        eta.push(value);
        eta_cur = value;
        t_cur = g;
    }

    Ok(TrajectorySample {
        t_grid: t_grid.to_vec(),
        eta,
        theta0,
        switch_times,
    })
}

/// RTN characteristic function β_κ(t) = ⟨cos(κ η(t))⟩.
///
/// Markovian branch (γ > κν): e^(−γt)[cosh(Γt) + (γ/Γ)sinh(Γt)] with
/// Γ = √(γ² − (κν)²), evaluated in overflow-free exponential form.
/// Non-Markovian branch (γ < κν): e^(−γt)[cos(Γt) + (γ/Γ)sin(Γt)] with
/// Γ = √((κν)² − γ²). At γ = κν both branches share the limit
/// e^(−γt)(1 + γt). κ = 0 degenerates to 1. Negative times are rejected.
pub fn beta(kappa: u32, p: &NoiseParams, t: f64) -> f64 {
    assert!(t >= 0.0, "beta: time must be non-negative, got {t}");
    if kappa == 0 {
        return 1.0;
    }
    let kv = kappa as f64 * p.nu;
    let gamma = p.gamma;
    if gamma == kv {
        return (-gamma * t).exp() * (1.0 + gamma * t);
    }
    if gamma > kv {
        let cap = (gamma * gamma - kv * kv).sqrt();
        // e^{-γt}cosh(Γt) = (e^{(Γ-γ)t} + e^{-(Γ+γ)t})/2, exponents all <= 0
        let ep = ((cap - gamma) * t).exp();
        let em = (-(cap + gamma) * t).exp();
        0.5 * (ep + em) + (gamma / cap) * 0.5 * (ep - em)
    } else {
        let cap = (kv * kv - gamma * gamma).sqrt();
        (-gamma * t).exp() * ((cap * t).cos() + (gamma / cap) * (cap * t).sin())
    }
}
