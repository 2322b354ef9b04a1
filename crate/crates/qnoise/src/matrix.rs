//! Dense complex linear algebra on multi-qubit Hilbert spaces.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex<f64>`. Qubit 0 is
//! the leftmost tensor factor, so a computational basis index decomposes as
//! `b = sum_j bit_j * 2^(n-1-j)`; the ket |0001⟩ of a four-qubit register is
//! basis index 1. Everything here is dense: dimensions never exceed 32.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entrywise tolerance below which a matrix is accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues above this (negative) floor are treated as roundoff and clamped.
pub const PSD_TOL: f64 = -1e-10;

/// An ordered subset of the qubits of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitSubset {
    n_qubits: usize,
    members: Vec<usize>,
}

impl QubitSubset {
    /// Builds a subset from qubit indices; members are sorted ascending.
    pub fn new(n_qubits: usize, members: impl Into<Vec<usize>>) -> Result<Self> {
        let mut members = members.into();
        if members.is_empty() {
            return Err(Error::InvalidSubset("empty member list".into()));
        }
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!(
                "duplicate qubit index in {members:?}"
            )));
        }
        if *members.last().unwrap() >= n_qubits {
            return Err(Error::InvalidSubset(format!(
                "qubit index out of range for n={n_qubits}: {members:?}"
            )));
        }
        Ok(Self { n_qubits, members })
    }

    pub fn single(n_qubits: usize, qubit: usize) -> Result<Self> {
        Self::new(n_qubits, vec![qubit])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: non-empty by construction
    }

    /// True when the subset is a proper subset (usable as one side of a bipartition).
    pub fn is_proper(&self) -> bool {
        self.members.len() < self.n_qubits
    }

    pub fn complement(&self) -> Result<Self> {
        let rest: Vec<usize> = (0..self.n_qubits)
            .filter(|j| !self.members.contains(j))
            .collect();
        Self::new(self.n_qubits, rest)
    }

    /// Bit mask over basis indices covered by the member qubits.
    fn index_mask(&self) -> usize {
        self.members
            .iter()
            .map(|&j| 1usize << (self.n_qubits - 1 - j))
            .fold(0, |a, b| a | b)
    }
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Number of qubits for a square matrix whose dimension is a power of two.
pub fn n_qubits_of(m: &CMatrix) -> Result<usize> {
    let dim = m.nrows();
    if m.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!(
            "dimension {dim} is not a power of two >= 2"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Kronecker product; the left factor is the more significant register.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Max entrywise deviation from Hermiticity, max |A - A†|.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

fn check_same_dims(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

fn check_subset(rho: &CMatrix, part: &QubitSubset) -> Result<usize> {
    let n = n_qubits_of(rho)?;
    if part.n_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "subset declared for {} qubits, matrix has {n}",
            part.n_qubits()
        )));
    }
    Ok(n)
}

/// Transposes the bra/ket indices of the qubits in `part` only.
pub fn partial_transpose(rho: &CMatrix, part: &QubitSubset) -> Result<CMatrix> {
    check_subset(rho, part)?;
    let dim = rho.nrows();
    let mask = part.index_mask();
    let keep = !mask;
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let rt = (r & keep) | (c & mask);
            let ct = (c & keep) | (r & mask);
            out[(rt, ct)] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// Reduced state on the kept qubits (ascending order), tracing out the rest.
pub fn partial_trace(rho: &CMatrix, keep: &QubitSubset) -> Result<CMatrix> {
    let n = check_subset(rho, keep)?;
    let dim = rho.nrows();
    let k = keep.len();
    let kept_bits: Vec<usize> = keep
        .members()
        .iter()
        .map(|&j| 1usize << (n - 1 - j))
        .collect();
    let traced_mask = !keep.index_mask() & (dim - 1);
    let compress = |idx: usize| -> usize {
        let mut out = 0usize;
        for (pos, &bit) in kept_bits.iter().enumerate() {
            if idx & bit != 0 {
                out |= 1 << (k - 1 - pos);
            }
        }
        out
    };
    let mut out = CMatrix::zeros(1 << k, 1 << k);
    for r in 0..dim {
        for c in 0..dim {
            if r & traced_mask == c & traced_mask {
                out[(compress(r), compress(c))] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Relabels the qubits: input qubit `i` becomes output qubit `perm[i]`.
pub fn permute_qubits(rho: &CMatrix, perm: &[usize]) -> Result<CMatrix> {
    let n = n_qubits_of(rho)?;
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "permutation length {} for {n} qubits",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
        seen[p] = true;
    }
    let dim = rho.nrows();
    let relabel = |idx: usize| -> usize {
        let mut out = 0usize;
        for (i, &p) in perm.iter().enumerate() {
            if idx & (1 << (n - 1 - i)) != 0 {
                out |= 1 << (n - 1 - p);
            }
        }
        out
    };
    let new_row: Vec<usize> = (0..dim).map(relabel).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            out[(new_row[r], new_row[c])] = rho[(r, c)];
        }
    }
    Ok(out)
}

fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = hermiticity_defect(h);
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            defect,
            tol: HERMITICITY_TOL,
        });
    }
    // symmetrize before factoring so roundoff in the input cannot leak through
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Real eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigvals(h: &CMatrix) -> Result<Vec<f64>> {
    let (mut vals, _) = hermitian_eigen(h)?;
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Hermitian PSD square root via eigendecomposition; roundoff-negative
/// eigenvalues are clamped to zero.
pub fn sqrt_psd(rho: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(rho)?;
    if let Some(&min_eig) = vals.iter().min_by(|a, b| a.total_cmp(b)) {
        if min_eig < PSD_TOL {
            return Err(Error::NotPsd { min_eig });
        }
    }
    let dim = rho.nrows();
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let s = Complex64::new(v.max(0.0).sqrt(), 0.0);
        for i in 0..dim {
            scaled[(i, j)] *= s;
        }
    }
    Ok(&scaled * vecs.adjoint())
}

/// Singular values, sorted descending (all non-negative).
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let svd = a.clone().svd(false, false);
    let mut vals: Vec<f64> = svd.singular_values.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

/// Trace distance (1/2)·Σ|eig(r1 - r2)| between two Hermitian unit-trace matrices.
pub fn trace_distance(r1: &CMatrix, r2: &CMatrix) -> Result<f64> {
    check_same_dims(r1, r2)?;
    let diff = r1 - r2;
    let vals = hermitian_eigvals(&diff)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}
