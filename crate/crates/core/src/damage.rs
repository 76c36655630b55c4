//! Randomized damage scenarios and training datasets: per-element
//! stiffness reduction sampling, FEM response extraction, and min-max
//! input normalization.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::beam::{solve_static, BeamSpec, StaticResponse};
use crate::error::{Error, Result};

/// Per-element stiffness reduction factors ee ∈ (0, 1]; ee = 1 means
/// undamaged, smaller values scale the element stiffness down.
#[derive(Debug, Clone, PartialEq)]
pub struct DamageScenario {
    factors: Vec<f64>,
}

impl DamageScenario {
    pub fn new(factors: Vec<f64>) -> Result<Self> {
        if factors.iter().any(|f| !f.is_finite()) {
            return Err(Error::NonFinite("damage factor"));
        }
        if factors.iter().any(|&f| f <= 0.0 || f > 1.0) {
            return Err(Error::InvalidConfig("damage factors must lie in (0, 1]"));
        }
        Ok(Self { factors })
    }

    pub fn undamaged(n_elements: usize) -> Self {
        Self {
            factors: vec![1.0; n_elements],
        }
    }

    pub fn factors(&self) -> &[f64] {
        &self.factors
    }
}

/// Which response is fed to the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Displacement,
    Strain,
}

impl InputKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InputKind::Displacement => "displacement",
            InputKind::Strain => "strain",
        }
    }
}

impl core::fmt::Display for InputKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "displacement" => Ok(InputKind::Displacement),
            "strain" => Ok(InputKind::Strain),
            _ => Err(Error::InvalidConfig(
                "input kind must be `displacement` or `strain`",
            )),
        }
    }
}

/// Scenario sampler parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    /// Upper bound on damaged elements per scenario; defaults to no
    /// effective cap (every element may be damaged).
    pub max_damaged_elements: usize,
    /// Smallest allowed reduction factor; keeps the FEM solvable.
    pub ee_floor: f64,
    /// Probability that an individual element is damaged.
    pub p_element_damaged: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            max_damaged_elements: usize::MAX,
            ee_floor: 0.05,
            p_element_damaged: 0.3,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ee_floor > 0.0 && self.ee_floor < 1.0) {
            return Err(Error::InvalidConfig("ee_floor must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.p_element_damaged) {
            return Err(Error::InvalidConfig(
                "p_element_damaged must lie in [0, 1]",
            ));
        }
        Ok(())
    }
}

/// One training pair: a response vector and the damage factors that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub input: Vec<f64>,
    pub target: Vec<f64>,
}

/// A generated set of samples with the beam that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub input_kind: InputKind,
    pub spec: BeamSpec,
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn input_size(&self) -> usize {
        self.spec.n_nodes()
    }

    pub fn target_size(&self) -> usize {
        self.spec.n_elements
    }

    /// Seeded Fisher-Yates shuffle followed by a tail split. The holdout
    /// fraction is rounded down; a fraction of 0 returns an empty
    /// holdout set.
    pub fn shuffle_split(&self, holdout_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(0.0..1.0).contains(&holdout_fraction) {
            return Err(Error::InvalidConfig("holdout fraction must lie in [0, 1)"));
        }
        let mut indices: Vec<usize> = (0..self.samples.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..indices.len()).rev() {
            let j = rng.gen_range(0..=i);
            indices.swap(i, j);
        }
        let n_holdout = (self.samples.len() as f64 * holdout_fraction) as usize;
        let split = self.samples.len() - n_holdout;
        let pick = |idx: &[usize]| Dataset {
            input_kind: self.input_kind,
            spec: self.spec.clone(),
            samples: idx.iter().map(|&i| self.samples[i].clone()).collect(),
        };
        Ok((pick(&indices[..split]), pick(&indices[split..])))
    }
}

/// Draws one damage scenario: each element is independently marked
/// damaged with probability `p_element_damaged` until the cap is
/// reached; damaged elements get ee uniform in `[ee_floor, 1)`,
/// undamaged elements ee = 1.
pub fn sample_scenario<R: Rng>(
    rng: &mut R,
    n_elements: usize,
    cfg: &SamplerConfig,
) -> Result<DamageScenario> {
    cfg.validate()?;
    let cap = cfg.max_damaged_elements.min(n_elements);
    let mut factors = vec![1.0; n_elements];
    let mut damaged = 0usize;
    for f in factors.iter_mut() {
        if damaged >= cap {
            break;
        }
        if rng.gen_bool(cfg.p_element_damaged) {
            *f = rng.gen_range(cfg.ee_floor..1.0);
            damaged += 1;
        }
    }
    DamageScenario::new(factors)
}

fn response_input(kind: InputKind, response: &StaticResponse) -> Vec<f64> {
    match kind {
        InputKind::Displacement => response.displacements_m.clone(),
        InputKind::Strain => response.strains.clone(),
    }
}

/// Generates `n_samples` pairs of (response, damage factors).
///
/// Sample 0 is always the undamaged baseline so the healthy state is
/// in-distribution. Each remaining sample draws from its own ChaCha
/// stream indexed by the sample position, which makes the result a
/// function of `(spec, n_samples, input_kind, seed, cfg)` alone,
/// independent of evaluation order.
pub fn generate_dataset(
    spec: &BeamSpec,
    n_samples: usize,
    input_kind: InputKind,
    seed: u64,
    cfg: &SamplerConfig,
) -> Result<Dataset> {
    spec.validate()?;
    cfg.validate()?;
    if n_samples < 1 {
        return Err(Error::InvalidConfig("at least one sample required"));
    }
    let mut samples = Vec::with_capacity(n_samples);
    for index in 0..n_samples {
        let scenario = scenario_for_index(spec, seed, index, cfg)?;
        let response = solve_static(spec, &scenario)?;
        samples.push(Sample {
            input: response_input(input_kind, &response),
            target: scenario.factors().to_vec(),
        });
    }
    Ok(Dataset {
        input_kind,
        spec: spec.clone(),
        samples,
    })
}

/// The scenario for one sample index under a master seed; index 0 is
/// the undamaged baseline.
pub fn scenario_for_index(
    spec: &BeamSpec,
    seed: u64,
    index: usize,
    cfg: &SamplerConfig,
) -> Result<DamageScenario> {
    if index == 0 {
        return Ok(DamageScenario::undamaged(spec.n_elements));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    sample_scenario(&mut rng, spec.n_elements, cfg)
}

/// Feature class selector for normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureClass {
    Input,
    Target,
}

/// Per-feature ranges fitted on a training set. Inputs are affinely
/// mapped to [−1, 1]; targets are already O(1) in (0, 1] and pass
/// through unchanged. Constant features map to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationParams {
    pub input_min: Vec<f64>,
    pub input_max: Vec<f64>,
    pub target_min: Vec<f64>,
    pub target_max: Vec<f64>,
}

impl NormalizationParams {
    pub fn normalize(&self, values: &[f64], class: FeatureClass) -> Result<Vec<f64>> {
        let (min, max) = self.range(class);
        check_len(values, min.len())?;
        match class {
            FeatureClass::Target => Ok(values.to_vec()),
            FeatureClass::Input => Ok(values
                .iter()
                .zip(min.iter().zip(max))
                .map(|(&v, (&lo, &hi))| {
                    if hi > lo {
                        2.0 * (v - lo) / (hi - lo) - 1.0
                    } else {
                        0.0
                    }
                })
                .collect()),
        }
    }

    pub fn denormalize(&self, values: &[f64], class: FeatureClass) -> Result<Vec<f64>> {
        let (min, max) = self.range(class);
        check_len(values, min.len())?;
        match class {
            FeatureClass::Target => Ok(values.to_vec()),
            FeatureClass::Input => Ok(values
                .iter()
                .zip(min.iter().zip(max))
                .map(|(&v, (&lo, &hi))| {
                    if hi > lo {
                        lo + (v + 1.0) * (hi - lo) / 2.0
                    } else {
                        lo
                    }
                })
                .collect()),
        }
    }

    fn range(&self, class: FeatureClass) -> (&[f64], &[f64]) {
        match class {
            FeatureClass::Input => (&self.input_min, &self.input_max),
            FeatureClass::Target => (&self.target_min, &self.target_max),
        }
    }
}

fn check_len(values: &[f64], expected: usize) -> Result<()> {
    if values.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "feature vector",
            expected,
            actual: values.len(),
        });
    }
    Ok(())
}

/// Fits per-feature min/max over a dataset.
pub fn fit_normalization(ds: &Dataset) -> Result<NormalizationParams> {
    if ds.samples.is_empty() {
        return Err(Error::InvalidConfig("cannot fit normalization on empty dataset"));
    }
    let fit = |extract: fn(&Sample) -> &[f64], size: usize| {
        let mut min = vec![f64::INFINITY; size];
        let mut max = vec![f64::NEG_INFINITY; size];
        for s in &ds.samples {
            for (i, &v) in extract(s).iter().enumerate() {
                min[i] = min[i].min(v);
                max[i] = max[i].max(v);
            }
        }
        (min, max)
    };
    let (input_min, input_max) = fit(|s| &s.input, ds.input_size());
    let (target_min, target_max) = fit(|s| &s.target, ds.target_size());
    Ok(NormalizationParams {
        input_min,
        input_max,
        target_min,
        target_max,
    })
}

/// Applies input normalization to every sample; targets pass through.
pub fn normalize_samples(ds: &Dataset, params: &NormalizationParams) -> Result<Vec<Sample>> {
    ds.samples
        .iter()
        .map(|s| {
            Ok(Sample {
                input: params.normalize(&s.input, FeatureClass::Input)?,
                target: s.target.clone(),
            })
        })
        .collect()
}
