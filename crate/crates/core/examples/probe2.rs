use beamdetect_core::beam::BeamSpec;
use beamdetect_core::damage::{
    fit_normalization, generate_dataset, normalize_samples, InputKind, SamplerConfig,
};
use beamdetect_core::net::{init_weights, init_weights_nguyen_widrow, NetworkArchitecture};
use beamdetect_core::train::{train, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(kind: InputKind, beta: f64, seed: u64, mu0: f64, nw: bool) -> (Option<usize>, f64) {
    let spec = BeamSpec::reference_cantilever();
    let ds = generate_dataset(&spec, 500, kind, seed, &SamplerConfig::default()).unwrap();
    let params = fit_normalization(&ds).unwrap();
    let samples = normalize_samples(&ds, &params).unwrap();
    let arch = NetworkArchitecture::new(9, vec![16, 8], 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = if nw {
        init_weights_nguyen_widrow(&arch, &mut rng).unwrap()
    } else {
        init_weights(&arch, &mut rng).unwrap()
    };
    let cfg = TrainConfig { beta, mu_init: mu0, error_goal: 1e-5, max_epochs: 300, ..TrainConfig::default() };
    let (_, log) = train(weights, &samples, &cfg).unwrap();
    (log.epochs_to_goal(1e-5), log.final_mse())
}

fn main() {
    for nw in [false, true] {
        for mu0 in [1.0f64, 100.0] {
            let mut hits = 0;
            for seed in 1..=5 {
                let (goal, fin) = run(InputKind::Strain, 2.0, seed, mu0, nw);
                if goal.is_some() { hits += 1; }
                println!("nw={nw} mu0={mu0} seed={seed}: goal@{goal:?} final={fin:.3e}");
            }
            println!("== nw={nw} mu0={mu0}: {hits}/5 reached goal\n");
        }
    }
    // beta=1 progression check under larger mu0
    for mu0 in [1.0f64, 100.0] {
        let (goal, fin) = run(InputKind::Strain, 1.0, 1, mu0, true);
        println!("beta1 nw=true mu0={mu0} seed=1: goal@{goal:?} final={fin:.3e}");
    }
}
