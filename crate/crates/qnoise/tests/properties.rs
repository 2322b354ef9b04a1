//! Property tests for the linear-algebra kernel and the measures.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use qnoise::matrix::{
    hermitian_eigvals, hermiticity_defect, kron, partial_transpose, permute_qubits,
    singular_values, sqrt_psd, CMatrix, CVector, QubitSubset,
};
use qnoise::measures::{negativity_n, qjsd, witness_expectation};
use qnoise::states::witness;

fn matrix_from(parts: &[(f64, f64)], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = parts[i * dim + j];
        Complex64::new(re, im)
    })
}

fn hermitian_from(parts: &[(f64, f64)], dim: usize) -> CMatrix {
    let m = matrix_from(parts, dim);
    (&m + m.adjoint()).scale(0.5)
}

fn density_from(parts: &[(f64, f64)], dim: usize) -> CMatrix {
    let m = matrix_from(parts, dim);
    let psd = &m * m.adjoint() + DMatrix::identity(dim, dim).scale(1e-6);
    let tr = psd.trace().re;
    psd.scale(1.0 / tr)
}

fn entries(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_preserves_trace_and_hermiticity(parts in entries(16)) {
        let h = hermitian_from(&parts, 16);
        let part = QubitSubset::new(4, vec![0, 2]).unwrap();
        let pt = partial_transpose(&h, &part).unwrap();
        prop_assert!((pt.trace() - h.trace()).norm() < 1e-12);
        prop_assert!(hermiticity_defect(&pt) < 1e-12);
    }

    #[test]
    fn permutation_preserves_spectrum(parts in entries(16), a in 0usize..4, b in 0usize..4) {
        let h = hermitian_from(&parts, 16);
        let mut perm = [0usize, 1, 2, 3];
        perm.swap(a, b);
        let permuted = permute_qubits(&h, &perm).unwrap();
        let e1 = hermitian_eigvals(&h).unwrap();
        let e2 = hermitian_eigvals(&permuted).unwrap();
        for (x, y) in e1.iter().zip(e2.iter()) {
            prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn sqrt_psd_squares_back(parts in entries(8)) {
        let rho = density_from(&parts, 8);
        let root = sqrt_psd(&rho).unwrap();
        let diff = (&root * &root - &rho)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        prop_assert!(diff < 1e-9, "entrywise error {diff}");
    }

    #[test]
    fn singular_values_match_gram_spectrum(parts in entries(8)) {
        let a = matrix_from(&parts, 8);
        let sv = singular_values(&a);
        let gram = a.adjoint() * &a;
        let ev = hermitian_eigvals(&gram).unwrap();
        for (s, e) in sv.iter().zip(ev.iter()) {
            prop_assert!((s * s - e).abs() < 1e-9, "{s}^2 vs {e}");
        }
    }

    #[test]
    fn qjsd_is_symmetric_and_bounded(pa in entries(8), pb in entries(8)) {
        let r1 = density_from(&pa, 8);
        let r2 = density_from(&pb, 8);
        let ab = qjsd(&r1, &r2).unwrap();
        let ba = qjsd(&r2, &r1).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn kron_dimension_law(pa in entries(2), pb in entries(4)) {
        let a = matrix_from(&pa, 2);
        let b = matrix_from(&pb, 4);
        prop_assert_eq!(kron(&a, &b).nrows(), 8);
    }
}

// ---------------------------------------------------------------------------
// sampled invariants with fixed ensemble sizes
// ---------------------------------------------------------------------------

fn random_pure_qubit(rng: &mut ChaCha8Rng) -> CVector {
    let uniform = Uniform::new(0.0, std::f64::consts::TAU).unwrap();
    let phi = uniform.sample(rng);
    let z: f64 = Uniform::new(-1.0f64, 1.0).unwrap().sample(rng);
    let theta = z.acos();
    CVector::from_vec(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

fn random_product_state(rng: &mut ChaCha8Rng) -> CMatrix {
    let mut rho = DMatrix::identity(1, 1).map(|v: f64| Complex64::new(v, 0.0));
    for _ in 0..4 {
        let v = random_pure_qubit(rng);
        rho = kron(&rho, &(&v * v.adjoint()));
    }
    rho
}

#[test]
fn witnesses_are_non_negative_on_product_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(4_242);
    let wg = witness(qnoise::states::Family::Ghz, 4).unwrap();
    let ww = witness(qnoise::states::Family::W, 4).unwrap();
    for _ in 0..1000 {
        let rho = random_product_state(&mut rng);
        assert!(witness_expectation(&wg, &rho).unwrap() >= -1e-10);
        assert!(witness_expectation(&ww, &rho).unwrap() >= -1e-10);
    }
}

#[test]
fn negativity_vanishes_on_separable_mixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(1_717);
    let weight = Uniform::new(0.05f64, 1.0).unwrap();
    for _ in 0..1000 {
        let k = 1 + (weight.sample(&mut rng) * 4.0) as usize;
        let mut ws: Vec<f64> = (0..k).map(|_| weight.sample(&mut rng)).collect();
        let total: f64 = ws.iter().sum();
        for w in &mut ws {
            *w /= total;
        }
        let mut rho = CMatrix::zeros(16, 16);
        for w in ws {
            rho += random_product_state(&mut rng).scale(w);
        }
        let neg = negativity_n(&rho, 4).unwrap();
        assert!(neg < 1e-9, "separable mixture has negativity {neg}");
    }
}

#[test]
fn random_densities_have_unit_trace_after_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let g = CMatrix::from_fn(16, 16, |_, _| {
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        });
        let m = &g * g.adjoint();
        let rho = m.scale(1.0 / m.trace().re);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(hermiticity_defect(&rho) < 1e-12);
    }
}
