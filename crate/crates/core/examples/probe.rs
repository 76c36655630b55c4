use beamdetect_core::beam::BeamSpec;
use beamdetect_core::damage::{
    fit_normalization, generate_dataset, normalize_samples, InputKind, SamplerConfig,
};
use beamdetect_core::net::{init_weights, NetworkArchitecture};
use beamdetect_core::train::{train, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn run(kind: InputKind, beta: f64, seed: u64, max_epochs: usize) {
    let spec = BeamSpec::reference_cantilever();
    let ds = generate_dataset(&spec, 500, kind, seed, &SamplerConfig::default()).unwrap();
    let params = fit_normalization(&ds).unwrap();
    let samples = normalize_samples(&ds, &params).unwrap();
    let arch = NetworkArchitecture::new(9, vec![16, 8], 8).unwrap();
    let weights = init_weights(&arch, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let cfg = TrainConfig {
        beta,
        error_goal: 1e-5,
        max_epochs,
        ..TrainConfig::default()
    };
    let t0 = Instant::now();
    let (_, log) = train(weights, &samples, &cfg).unwrap();
    let accepted = log.records.iter().filter(|r| r.accepted).count();
    let goal_at = log.epochs_to_goal(1e-5);
    let mse_at = |ep: usize| {
        log.records
            .iter()
            .find(|r| r.epoch >= ep)
            .map(|r| r.mse)
            .unwrap_or(f64::NAN)
    };
    println!(
        "kind={:?} beta={} seed={}: epochs={} acc={} goal@{:?} mse@60={:.2e} mse@150={:.2e} final={:.3e} stop={:?} {:.1?}",
        kind,
        beta,
        seed,
        log.epochs(),
        accepted,
        goal_at,
        mse_at(60),
        mse_at(150),
        log.final_mse(),
        log.stop_reason,
        t0.elapsed()
    );
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() > 1 && args[1] == "long" {
        run(InputKind::Strain, 2.0, 1, 900);
        return;
    }
    for seed in 1..=5 {
        run(InputKind::Strain, 2.0, seed, 300);
    }
    for seed in 1..=5 {
        run(InputKind::Strain, 1.0, seed, 300);
    }
    for seed in 1..=5 {
        run(InputKind::Displacement, 2.0, seed, 300);
    }
}
