//! Initial states, witness operators and reference states.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{identity, CMatrix, CVector};

/// Initial-state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ghz,
    W,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Ghz => write!(f, "ghz"),
            Family::W => write!(f, "w"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(Family::Ghz),
            "w" => Ok(Family::W),
            other => Err(Error::InvalidConfig(format!(
                "unknown family {other:?}, expected ghz or w"
            ))),
        }
    }
}

/// Qubit-environment coupling topology: one shared noise source or one per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// Common environment: a single RTN realization drives all qubits.
    Ce,
    /// Independent environments: each qubit sees its own realization.
    Ie,
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Ce => write!(f, "ce"),
            Coupling::Ie => write!(f, "ie"),
        }
    }
}

impl FromStr for Coupling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ce" => Ok(Coupling::Ce),
            "ie" => Ok(Coupling::Ie),
            other => Err(Error::InvalidConfig(format!(
                "unknown coupling {other:?}, expected ce or ie"
            ))),
        }
    }
}

/// System preparation: state family, purity and coupling topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub n_qubits: usize,
    pub family: Family,
    /// Purity of the initial state: weight of the pure target against I/2ⁿ.
    pub q: f64,
    pub coupling: Coupling,
}

impl SystemConfig {
    /// Four-qubit configuration (the main case).
    pub fn new(family: Family, coupling: Coupling, q: f64) -> Result<Self> {
        Self::with_n_qubits(4, family, coupling, q)
    }

    pub fn with_n_qubits(
        n_qubits: usize,
        family: Family,
        coupling: Coupling,
        q: f64,
    ) -> Result<Self> {
        if !(2..=5).contains(&n_qubits) {
            return Err(Error::InvalidConfig(format!(
                "n_qubits must be in 2..=5, got {n_qubits}"
            )));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidConfig(format!(
                "purity q must be in [0, 1], got {q}"
            )));
        }
        Ok(Self {
            n_qubits,
            family,
            q,
            coupling,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "state families need at least 2 qubits, got {n}"
        )));
    }
    Ok(())
}

/// |GHZ_n⟩ = (|0…0⟩ + |1…1⟩)/√2.
pub fn ghz_vector(n: usize) -> Result<CVector> {
    check_n(n)?;
    let dim = 1 << n;
    let mut v = CVector::zeros(dim);
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = amp;
    v[dim - 1] = amp;
    Ok(v)
}

/// |W_n⟩: uniform superposition of the single-excitation basis states.
pub fn w_vector(n: usize) -> Result<CVector> {
    check_n(n)?;
    let dim = 1 << n;
    let mut v = CVector::zeros(dim);
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for j in 0..n {
        v[1 << j] = amp;
    }
    Ok(v)
}

fn family_vector(family: Family, n: usize) -> Result<CVector> {
    match family {
        Family::Ghz => ghz_vector(n),
        Family::W => w_vector(n),
    }
}

/// ρ(0) = (1−q)/2ⁿ · 𝕀 + q |ψ⟩⟨ψ| for the configured family.
pub fn initial_density(cfg: &SystemConfig) -> CMatrix {
    let v = family_vector(cfg.family, cfg.n_qubits).expect("validated n_qubits");
    let pure = &v * v.adjoint();
    identity(cfg.dim()).scale((1.0 - cfg.q) / cfg.dim() as f64) + pure.scale(cfg.q)
}

/// Projector-based entanglement witness for the family:
/// 𝒲_GHZ = ½𝕀 − |GHZ⟩⟨GHZ| and 𝒲_W = (n−1)/n 𝕀 − |W⟩⟨W|.
pub fn witness(family: Family, n: usize) -> Result<CMatrix> {
    let v = family_vector(family, n)?;
    let pure = &v * v.adjoint();
    let weight = match family {
        Family::Ghz => 0.5,
        Family::W => (n as f64 - 1.0) / n as f64,
    };
    Ok(identity(1 << n).scale(weight) - pure)
}

/// 𝕀/2ⁿ.
pub fn maximally_mixed(n: usize) -> CMatrix {
    let dim = 1usize << n;
    identity(dim).scale(1.0 / dim as f64)
}
