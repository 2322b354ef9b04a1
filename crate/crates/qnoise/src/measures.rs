//! Entanglement and distance quantifiers.
//!
//! Negativity is averaged over all inequivalent bipartitions; the concurrence
//! lower bound follows the SO(2^(n−1)) ⊗ SO(2) generator construction; the
//! witness expectations come both from traces against evolved states and from
//! the four closed forms in terms of β_κ(t).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_eigvals, hermiticity_defect, kron, partial_transpose, permute_qubits,
    singular_values, sqrt_psd, CMatrix, QubitSubset, HERMITICITY_TOL,
};
use crate::noise::{beta, NoiseParams};
use crate::states::{Coupling, Family};

/// One row of a sweep: every quantifier at a single (t, q, γ/ν) grid point.
///
/// Measures that were not requested are `None` and serialize as null/NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub t: f64,
    pub q: f64,
    pub gamma_over_nu: f64,
    pub family: Family,
    pub coupling: Coupling,
    pub negativity: Option<f64>,
    pub lbc: Option<f64>,
    pub witness: Option<f64>,
    pub vn_entropy: Option<f64>,
    pub linear_entropy: Option<f64>,
    pub qjsd_init: Option<f64>,
    pub qjsd_mm: Option<f64>,
}

fn check_density(rho: &CMatrix) -> Result<()> {
    let defect = hermiticity_defect(rho);
    if defect > HERMITICITY_TOL {
        return Err(Error::InvalidDensity(format!(
            "Hermiticity defect {defect:.3e}"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
    }
    Ok(())
}

/// All inequivalent bipartitions k|n−k, grouped by ascending block size k.
///
/// For even n the k = n/2 stratum counts unordered splits once (the half
/// containing qubit 0 labels the split); n = 4 yields the four 1|3 cuts plus
/// the three 2|2 cuts.
pub fn bipartitions(n: usize) -> Result<Vec<(usize, QubitSubset)>> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "bipartitions need n >= 2, got {n}"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let k = mask.count_ones() as usize;
        if 2 * k > n {
            continue;
        }
        if 2 * k == n && mask & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        out.push((k, QubitSubset::new(n, members)?));
    }
    out.sort_by(|a, b| (a.0, a.1.members()).cmp(&(b.0, b.1.members())));
    Ok(out)
}

/// Negativity across one bipartition: Σ|eig(ρ^T_part)| − 1, clamped at zero.
pub fn negativity_bipartition(rho: &CMatrix, part: &QubitSubset) -> Result<f64> {
    check_density(rho)?;
    let pt = partial_transpose(rho, part)?;
    let vals = hermitian_eigvals(&pt)?;
    Ok((vals.iter().map(|v| v.abs()).sum::<f64>() - 1.0).max(0.0))
}

/// Negativity averaged over all bipartitions:
/// (2/n)·Σ_k [ mean over the k|n−k splits of the bipartite negativity ].
pub fn negativity_n(rho: &CMatrix, n: usize) -> Result<f64> {
    if rho.nrows() != 1 << n {
        return Err(Error::DimensionMismatch(format!(
            "expected dimension {} for n={n}, got {}",
            1 << n,
            rho.nrows()
        )));
    }
    let mut sums = vec![0.0f64; n / 2 + 1];
    let mut counts = vec![0usize; n / 2 + 1];
    for (k, part) in bipartitions(n)? {
        sums[k] += negativity_bipartition(rho, &part)?;
        counts[k] += 1;
    }
    let total: f64 = sums
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| s / c as f64)
        .sum();
    Ok(2.0 / n as f64 * total)
}

/// Hermitian generators of SO(d): entry −i at (p, q) and +i at (q, p), p < q.
fn so_generators(d: usize) -> Vec<CMatrix> {
    let mut gens = Vec::with_capacity(d * (d - 1) / 2);
    for p in 0..d {
        for qq in (p + 1)..d {
            let mut g = CMatrix::zeros(d, d);
            g[(p, qq)] = Complex64::new(0.0, -1.0);
            g[(qq, p)] = Complex64::new(0.0, 1.0);
            gens.push(g);
        }
    }
    gens
}

/// Lower bound to the n-qubit concurrence.
///
/// For every cut that separates qubit j from the rest, the qubits are
/// relabelled so j sits last; each generator pair S = L^(pq) ⊗ L₀ (L₀ the
/// SO(2) generator on qubit j) contributes λ₁ − λ₂ − λ₃ − λ₄ where the λ are
/// the four largest singular values of √ρ · S · √(ρᵀ). S has rank four, so
/// the remaining singular values must vanish; this is asserted.
pub fn lbc(rho: &CMatrix, n: usize) -> Result<f64> {
    if n > 5 {
        return Err(Error::Unsupported(format!("lbc supports n <= 5, got {n}")));
    }
    if rho.nrows() != 1 << n {
        return Err(Error::DimensionMismatch(format!(
            "expected dimension {} for n={n}, got {}",
            1 << n,
            rho.nrows()
        )));
    }
    check_density(rho)?;
    let d_rest = 1usize << (n - 1);
    let l0 = so_generators(2).pop().expect("SO(2) has one generator");
    let sandwich_ops: Vec<CMatrix> = so_generators(d_rest).iter().map(|g| kron(g, &l0)).collect();

    let mut total = 0.0;
    for j in 0..n {
        // input qubit j -> last output slot, others keep relative order
        let mut perm = vec![0usize; n];
        let mut slot = 0;
        for (i, p) in perm.iter_mut().enumerate() {
            if i == j {
                *p = n - 1;
            } else {
                *p = slot;
                slot += 1;
            }
        }
        let rp = permute_qubits(rho, &perm)?;
        let sq = sqrt_psd(&rp)?;
        let sqt = sqrt_psd(&rp.transpose())?;
        for s in &sandwich_ops {
            let m = &sq * s * &sqt;
            let sv = singular_values(&m);
            if sv.len() > 4 {
                assert!(
                    sv[4] < 1e-9,
                    "sandwich operator produced more than four non-vanishing singular values: {:?}",
                    &sv[..6.min(sv.len())]
                );
            }
            let c = (sv[0] - sv[1] - sv[2] - sv[3]).max(0.0);
            total += c * c;
        }
    }
    Ok((total / n as f64).sqrt())
}

/// Re Tr(w·ρ); the imaginary part must be numerical noise.
pub fn witness_expectation(w: &CMatrix, rho: &CMatrix) -> Result<f64> {
    if w.nrows() != rho.nrows() || w.ncols() != rho.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "witness {}x{}, state {}x{}",
            w.nrows(),
            w.ncols(),
            rho.nrows(),
            rho.ncols()
        )));
    }
    let tr = (w * rho).trace();
    if tr.im.abs() > 1e-10 {
        return Err(Error::InvalidDensity(format!(
            "witness expectation has imaginary part {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// Closed-form witness expectation ⟨𝒲⟩(t) for each family/coupling variant,
/// written in terms of the characteristic function β_κ(t).
///
/// At t = 0 the GHZ forms vanish at q = 7/15 and the W forms at q = 11/15;
/// in the long-time limit the GHZ/common-environment form vanishes at
/// q = 14/17 ≈ 0.8235, the purity above which the witness still detects the
/// trapped entanglement.
pub fn witness_closed_form(
    family: Family,
    coupling: Coupling,
    q: f64,
    p: &NoiseParams,
    t: f64,
) -> f64 {
    let b2 = beta(2, p, t);
    match (family, coupling) {
        (Family::Ghz, Coupling::Ce) => {
            let b4 = beta(4, p, t);
            let b8 = beta(8, p, t);
            7.0 / 16.0 - 3.0 * q / 8.0 * (b4 + b8 / 12.0 + 17.0 / 12.0)
        }
        (Family::Ghz, Coupling::Ie) => 7.0 / 16.0 - q / 8.0 * (b2.powi(4) + 6.0 * b2.powi(2) + 0.5),
        (Family::W, Coupling::Ce) => {
            let b4 = beta(4, p, t);
            let b6 = beta(6, p, t);
            let b8 = beta(8, p, t);
            11.0 / 16.0 - q / 4.0 * (b2 + 0.5 * (b4 + b8) + b6 + 0.75)
        }
        (Family::W, Coupling::Ie) => {
            11.0 / 16.0
                - q / 4.0 * (0.625 * b2.powi(4) + b2.powi(3) + 0.75 * b2.powi(2) + b2 + 0.375)
        }
    }
}

/// Von Neumann entropy −Tr(ρ log₂ ρ) with 0·log 0 = 0.
pub fn vn_entropy(rho: &CMatrix) -> Result<f64> {
    check_density(rho)?;
    let vals = hermitian_eigvals(rho)?;
    Ok(vals
        .iter()
        .map(|v| v.clamp(0.0, 1.0))
        .filter(|v| *v > 0.0)
        .map(|v| -v * v.log2())
        .sum())
}

/// Quantum Jensen–Shannon divergence
/// ℋ((ρ₁+ρ₂)/2) − ℋ(ρ₁)/2 − ℋ(ρ₂)/2, clamped into [0, 1].
pub fn qjsd(r1: &CMatrix, r2: &CMatrix) -> Result<f64> {
    if r1.nrows() != r2.nrows() || r1.ncols() != r2.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            r1.nrows(),
            r1.ncols(),
            r2.nrows(),
            r2.ncols()
        )));
    }
    let mix = (r1 + r2).scale(0.5);
    let d = vn_entropy(&mix)? - 0.5 * vn_entropy(r1)? - 0.5 * vn_entropy(r2)?;
    Ok(d.clamp(0.0, 1.0))
}

/// Linear entropy d/(d−1)·[1 − Tr(ρ²)]; 16/15·[1 − Tr(ρ²)] on four qubits.
pub fn linear_entropy(rho: &CMatrix) -> Result<f64> {
    check_density(rho)?;
    let d = rho.nrows() as f64;
    if rho.nrows() < 2 {
        return Err(Error::DimensionMismatch(
            "linear entropy needs dimension >= 2".into(),
        ));
    }
    let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    Ok(d / (d - 1.0) * (1.0 - purity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::identity;
    use crate::states::{ghz_vector, initial_density, maximally_mixed, w_vector, SystemConfig};
    use approx::assert_abs_diff_eq;

    fn pure(v: &crate::matrix::CVector) -> CMatrix {
        v * v.adjoint()
    }

    fn ghz4() -> CMatrix {
        pure(&ghz_vector(4).unwrap())
    }

    fn w4() -> CMatrix {
        pure(&w_vector(4).unwrap())
    }

    #[test]
    fn bipartition_counts() {
        let b4 = bipartitions(4).unwrap();
        assert_eq!(b4.len(), 7);
        let sizes: Vec<usize> = b4.iter().map(|(k, _)| *k).collect();
        assert_eq!(sizes, vec![1, 1, 1, 1, 2, 2, 2]);
        // the 2|2 stratum is the three unordered splits containing qubit 0
        let halves: Vec<&[usize]> = b4[4..].iter().map(|(_, p)| p.members()).collect();
        assert_eq!(halves, vec![&[0, 1][..], &[0, 2][..], &[0, 3][..]]);

        assert_eq!(bipartitions(2).unwrap().len(), 1);
        assert_eq!(bipartitions(3).unwrap().len(), 3);
        assert!(bipartitions(1).is_err());
    }

    #[test]
    fn negativity_of_separable_state_is_zero() {
        let mm = maximally_mixed(4);
        for (_, part) in bipartitions(4).unwrap() {
            assert_eq!(negativity_bipartition(&mm, &part).unwrap(), 0.0);
        }
        assert_eq!(negativity_n(&mm, 4).unwrap(), 0.0);
    }

    #[test]
    fn negativity_of_pure_ghz() {
        let part = QubitSubset::single(4, 0).unwrap();
        assert_abs_diff_eq!(
            negativity_bipartition(&ghz4(), &part).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(negativity_n(&ghz4(), 4).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn negativity_of_pure_w() {
        // single-qubit cut: Schmidt weights {3/4, 1/4} give sqrt(3)/2
        let part = QubitSubset::single(4, 0).unwrap();
        assert_abs_diff_eq!(
            negativity_bipartition(&w4(), &part).unwrap(),
            3.0f64.sqrt() / 2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            negativity_n(&w4(), 4).unwrap(),
            (1.0 + 3.0f64.sqrt() / 2.0) / 2.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn negativity_is_generic_in_qubit_count() {
        // Bell pair: the single 0|1 cut has negativity one
        let bell = pure(&ghz_vector(2).unwrap());
        assert_abs_diff_eq!(negativity_n(&bell, 2).unwrap(), 1.0, epsilon = 1e-12);
        // three-qubit GHZ: three 1|2 cuts of negativity one, weighted 2/3
        let ghz3 = pure(&ghz_vector(3).unwrap());
        assert_abs_diff_eq!(negativity_n(&ghz3, 3).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn negativity_monotone_in_purity() {
        let mut prev = -1.0;
        for i in 0..=20 {
            let q = i as f64 * 0.05;
            let cfg = SystemConfig::new(Family::Ghz, Coupling::Ce, q).unwrap();
            let neg = negativity_n(&initial_density(&cfg), 4).unwrap();
            assert!(neg >= prev - 1e-12, "q={q}: {neg} < {prev}");
            prev = neg;
        }
    }

    #[test]
    fn lbc_pure_state_values() {
        assert_abs_diff_eq!(lbc(&ghz4(), 4).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lbc(&w4(), 4).unwrap(), 3.0f64.sqrt() / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lbc(&maximally_mixed(4), 4).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn lbc_two_qubit_bell_state() {
        let bell = ghz_vector(2).unwrap();
        assert_abs_diff_eq!(lbc(&pure(&bell), 2).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(lbc(&maximally_mixed(2), 2).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn lbc_generator_count_matches_cut_structure() {
        // n = 4: SO(8) has 28 generator pairs per cut
        assert_eq!(so_generators(8).len(), 28);
        assert_eq!(so_generators(2).len(), 1);
    }

    #[test]
    fn witness_expectation_examples() {
        let wg = crate::states::witness(Family::Ghz, 4).unwrap();
        assert_abs_diff_eq!(
            witness_expectation(&wg, &ghz4()).unwrap(),
            -0.5,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            witness_expectation(&wg, &maximally_mixed(4)).unwrap(),
            7.0 / 16.0,
            epsilon = 1e-13
        );
        let ww = crate::states::witness(Family::W, 4).unwrap();
        for q in [0.0, 0.4, 1.0] {
            let cfg = SystemConfig::new(Family::W, Coupling::Ie, q).unwrap();
            assert_abs_diff_eq!(
                witness_expectation(&ww, &initial_density(&cfg)).unwrap(),
                11.0 / 16.0 - 15.0 * q / 16.0,
                epsilon = 1e-13
            );
        }
        assert!(witness_expectation(&wg, &maximally_mixed(2)).is_err());
    }

    #[test]
    fn witness_closed_form_at_t_zero() {
        let p = NoiseParams::new(1.0, 10.0).unwrap();
        for q in [0.0, 0.3, 0.8, 1.0] {
            for coupling in [Coupling::Ce, Coupling::Ie] {
                assert_abs_diff_eq!(
                    witness_closed_form(Family::Ghz, coupling, q, &p, 0.0),
                    7.0 / 16.0 - 15.0 * q / 16.0,
                    epsilon = 1e-13
                );
                assert_abs_diff_eq!(
                    witness_closed_form(Family::W, coupling, q, &p, 0.0),
                    11.0 / 16.0 - 15.0 * q / 16.0,
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn witness_closed_form_long_time_ghz_ce() {
        // β → 0 leaves 7/16 − 17q/32, vanishing at q = 14/17
        let p = NoiseParams::new(1.0, 10.0).unwrap();
        let q = 14.0 / 17.0;
        let v = witness_closed_form(Family::Ghz, Coupling::Ce, q, &p, 500.0);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn vn_entropy_examples() {
        assert_abs_diff_eq!(vn_entropy(&ghz4()).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            vn_entropy(&maximally_mixed(4)).unwrap(),
            4.0,
            epsilon = 1e-12
        );
        // diag(1/2, 1/2) ⊗ pure qubit has one bit of entropy
        let mut half = CMatrix::zeros(2, 2);
        half[(0, 0)] = Complex64::new(0.5, 0.0);
        half[(1, 1)] = Complex64::new(0.5, 0.0);
        let mut p0 = CMatrix::zeros(2, 2);
        p0[(0, 0)] = Complex64::new(1.0, 0.0);
        assert_abs_diff_eq!(vn_entropy(&kron(&half, &p0)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn qjsd_examples() {
        let g = ghz4();
        assert_abs_diff_eq!(qjsd(&g, &g).unwrap(), 0.0, epsilon = 1e-12);

        // orthogonal pure states are at maximal divergence
        let w = w4();
        assert_abs_diff_eq!(qjsd(&g, &w).unwrap(), 1.0, epsilon = 1e-10);

        // frozen oracle: mixture spectrum {17/32, 1/32 x15}
        let mut p0 = CMatrix::zeros(16, 16);
        p0[(0, 0)] = Complex64::new(1.0, 0.0);
        let expect = 3.0 - 17.0 / 32.0 * 17.0f64.log2();
        assert_abs_diff_eq!(
            qjsd(&p0, &maximally_mixed(4)).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(expect, 0.8285353655857572, epsilon = 1e-15);

        assert!(qjsd(&p0, &maximally_mixed(2)).is_err());
    }

    #[test]
    fn linear_entropy_examples() {
        assert_abs_diff_eq!(linear_entropy(&ghz4()).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            linear_entropy(&maximally_mixed(4)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let cfg = SystemConfig::new(Family::Ghz, Coupling::Ce, 0.5).unwrap();
        let expect = 16.0 / 15.0 * (1.0 - (15.0 / 1024.0 + (17.0f64 / 32.0).powi(2)));
        assert_abs_diff_eq!(
            linear_entropy(&initial_density(&cfg)).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(expect, 0.75, epsilon = 1e-15);
    }

    #[test]
    fn measures_reject_invalid_density() {
        let not_density = identity(16); // trace 16
        assert!(vn_entropy(&not_density).is_err());
        assert!(negativity_bipartition(&not_density, &QubitSubset::single(4, 0).unwrap()).is_err());
        assert!(lbc(&not_density, 4).is_err());
    }
}
