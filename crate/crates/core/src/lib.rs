//! Core numerics for beam damage detection.
//!
//! The pipeline: an Euler-Bernoulli cantilever (or simply supported
//! beam) is meshed into 2-node bending elements whose stiffness can be
//! scaled down per element by a reduction factor ee ∈ (0, 1]. Static
//! responses (nodal displacements or extreme-fiber strains) under
//! randomized damage scenarios form a dataset, and a tanh MLP is
//! trained with full-batch Levenberg-Marquardt to invert the map from
//! response back to the per-element factors.
//!
//! Everything here is pure computation over heap-allocated vectors;
//! the crate builds without `std` (`--no-default-features`) and leaves
//! file formats and the CLI to the companion `beamdetect` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod beam;
pub mod damage;
pub mod error;
pub mod linalg;
pub mod net;
pub mod train;

pub use beam::{BeamSpec, StaticResponse, Support};
pub use damage::{DamageScenario, Dataset, InputKind, NormalizationParams, Sample, SamplerConfig};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, DenseVector};
pub use net::{NetworkArchitecture, NetworkWeights};
pub use train::{StopReason, TrainConfig, TrainLog};
