//! Gradient checking against central finite differences. The oracle
//! below touches only the forward pass, never the analytic backward
//! path it is checking.

use beamdetect_core::damage::Sample;
use beamdetect_core::net::{
    forward, init_weights, jacobian, network_mse, NetworkArchitecture, NetworkWeights,
};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FD_STEP: f64 = 1e-6;

fn residuals(arch: &NetworkArchitecture, w: &[f64], samples: &[Sample]) -> Vec<f64> {
    let net = NetworkWeights::unflatten(arch, w).unwrap();
    let mut out = Vec::new();
    for s in samples {
        let (y, _) = forward(&net, &s.input).unwrap();
        for (yi, ti) in y.iter().zip(&s.target) {
            out.push(yi - ti);
        }
    }
    out
}

/// Central-difference Jacobian, column by column.
fn fd_jacobian(weights: &NetworkWeights, samples: &[Sample]) -> Vec<Vec<f64>> {
    let arch = weights.arch().clone();
    let w0 = weights.flatten();
    let n_rows = samples.len() * arch.output_size;
    let mut cols = Vec::with_capacity(w0.len());
    for c in 0..w0.len() {
        let mut wp = w0.clone();
        wp[c] += FD_STEP;
        let mut wm = w0.clone();
        wm[c] -= FD_STEP;
        let rp = residuals(&arch, &wp, samples);
        let rm = residuals(&arch, &wm, samples);
        let col: Vec<f64> = (0..n_rows)
            .map(|r| (rp[r] - rm[r]) / (2.0 * FD_STEP))
            .collect();
        cols.push(col);
    }
    cols
}

fn random_samples<R: Rng>(rng: &mut R, n: usize, input: usize, output: usize) -> Vec<Sample> {
    (0..n)
        .map(|_| Sample {
            input: (0..input).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            target: (0..output).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        })
        .collect()
}

fn check_jacobian(seed: u64, hidden: &[usize], input: usize, output: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arch = NetworkArchitecture::new(input, hidden.to_vec(), output).unwrap();
    let weights = init_weights(&arch, &mut rng).unwrap();
    let samples = random_samples(&mut rng, 5, input, output);
    let (j, _) = jacobian(&weights, &samples).unwrap();
    let fd = fd_jacobian(&weights, &samples);
    for r in 0..j.rows() {
        for c in 0..j.cols() {
            let a = j[(r, c)];
            let f = fd[c][r];
            let err = (a - f).abs();
            assert!(
                err <= (1e-5 * f.abs()).max(1e-10),
                "seed {seed} row {r} col {c}: analytic {a} vs fd {f}"
            );
        }
    }
}

#[test]
fn analytic_jacobian_matches_finite_differences() {
    check_jacobian(1, &[4], 3, 2);
    check_jacobian(2, &[5, 3], 4, 2);
    check_jacobian(3, &[], 3, 3);
    check_jacobian(4, &[8, 16, 8], 9, 8);
    check_jacobian(5, &[2], 1, 1);
}

// Jᵀe = (N·M/2)·∇MSE, with the gradient taken by central differences
// of the MSE itself.
#[test]
fn gradient_identity_holds() {
    for seed in 10..15 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arch = NetworkArchitecture::new(3, vec![4], 2).unwrap();
        let weights = init_weights(&arch, &mut rng).unwrap();
        let samples = random_samples(&mut rng, 5, 3, 2);
        let (j, e) = jacobian(&weights, &samples).unwrap();
        let jte = j.tr_mul_vec(&e).unwrap();
        let scale = (samples.len() * arch.output_size) as f64 / 2.0;

        let w0 = weights.flatten();
        for c in 0..w0.len() {
            let mut wp = w0.clone();
            wp[c] += FD_STEP;
            let mut wm = w0.clone();
            wm[c] -= FD_STEP;
            let mp = network_mse(&NetworkWeights::unflatten(&arch, &wp).unwrap(), &samples)
                .unwrap();
            let mm = network_mse(&NetworkWeights::unflatten(&arch, &wm).unwrap(), &samples)
                .unwrap();
            let grad = (mp - mm) / (2.0 * FD_STEP);
            let expected = scale * grad;
            assert!(
                (jte[c] - expected).abs() <= (1e-5 * expected.abs()).max(1e-9),
                "seed {seed} coord {c}: Jᵀe {} vs scaled gradient {expected}",
                jte[c]
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flatten_unflatten_is_identity(w in prop::collection::vec(-3.0..3.0f64, 51)) {
        // 3-(4,4)-3 net: 4·(3+1) + 4·(4+1) + 3·(4+1) = 51 params.
        let arch = NetworkArchitecture::new(3, vec![4, 4], 3).unwrap();
        let net = NetworkWeights::unflatten(&arch, &w).unwrap();
        prop_assert_eq!(net.flatten(), w);
    }

    // Outputs move O(δ) under weight perturbations.
    #[test]
    fn forward_is_continuous_in_weights(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arch = NetworkArchitecture::new(4, vec![6], 3).unwrap();
        let weights = init_weights(&arch, &mut rng).unwrap();
        let input: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (y0, _) = forward(&weights, &input).unwrap();

        let delta = 1e-8;
        let mut w = weights.flatten();
        for v in w.iter_mut() {
            *v += delta * rng.gen_range(-1.0..1.0);
        }
        let perturbed = NetworkWeights::unflatten(&arch, &w).unwrap();
        let (y1, _) = forward(&perturbed, &input).unwrap();
        let max_change = y0
            .iter()
            .zip(&y1)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        prop_assert!(max_change <= 1e3 * delta, "change {max_change} for delta {delta}");
    }
}
