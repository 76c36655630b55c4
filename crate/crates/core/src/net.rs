//! Feedforward multilayer perceptron with tanh hidden layers and a
//! linear output layer: initialization, forward pass, batch MSE, and
//! the per-residual Jacobian with respect to every weight and bias.
//!
//! The parameter vector `w` flattens layer by layer, weight matrix in
//! row-major order followed by the bias vector; the Jacobian's columns
//! follow the same order, and its rows are sample-major with the
//! output component as the minor index.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::damage::Sample;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// Layer widths of the network. Hidden layers use tanh, the output
/// layer is linear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkArchitecture {
    pub input_size: usize,
    pub hidden_sizes: Vec<usize>,
    pub output_size: usize,
}

impl NetworkArchitecture {
    pub fn new(input_size: usize, hidden_sizes: Vec<usize>, output_size: usize) -> Result<Self> {
        if input_size < 1 || output_size < 1 || hidden_sizes.iter().any(|&h| h < 1) {
            return Err(Error::InvalidConfig("layer sizes must be at least 1"));
        }
        Ok(Self {
            input_size,
            hidden_sizes,
            output_size,
        })
    }

    /// All layer widths: input, hidden layers, output.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::with_capacity(self.hidden_sizes.len() + 2);
        sizes.push(self.input_size);
        sizes.extend_from_slice(&self.hidden_sizes);
        sizes.push(self.output_size);
        sizes
    }

    pub fn n_layers(&self) -> usize {
        self.hidden_sizes.len() + 1
    }

    /// Total parameter count: Σ fan_out·(fan_in + 1).
    pub fn n_weights(&self) -> usize {
        let sizes = self.layer_sizes();
        sizes
            .windows(2)
            .map(|pair| pair[1] * (pair[0] + 1))
            .sum()
    }
}

/// Weight matrix (fan_out × fan_in) and bias vector of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: DenseMatrix,
    pub bias: Vec<f64>,
}

/// Full parameter set of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkWeights {
    arch: NetworkArchitecture,
    layers: Vec<Layer>,
}

impl NetworkWeights {
    pub fn arch(&self) -> &NetworkArchitecture {
        &self.arch
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Canonical parameter vector.
    pub fn flatten(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.arch.n_weights());
        for layer in &self.layers {
            w.extend_from_slice(layer.weights.entries());
            w.extend_from_slice(&layer.bias);
        }
        w
    }

    /// Rebuilds weights from a flattened parameter vector.
    pub fn unflatten(arch: &NetworkArchitecture, w: &[f64]) -> Result<Self> {
        if w.len() != arch.n_weights() {
            return Err(Error::DimensionMismatch {
                what: "flattened weights",
                expected: arch.n_weights(),
                actual: w.len(),
            });
        }
        let sizes = arch.layer_sizes();
        let mut layers = Vec::with_capacity(arch.n_layers());
        let mut offset = 0;
        for pair in sizes.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let weights =
                DenseMatrix::new(fan_out, fan_in, w[offset..offset + fan_out * fan_in].to_vec())?;
            offset += fan_out * fan_in;
            let bias = w[offset..offset + fan_out].to_vec();
            offset += fan_out;
            layers.push(Layer { weights, bias });
        }
        Ok(Self {
            arch: arch.clone(),
            layers,
        })
    }

    /// Applies a descent step `w − Δw` in flattened order.
    pub fn step(&self, delta: &DenseVector) -> Result<Self> {
        let mut w = self.flatten();
        if delta.len() != w.len() {
            return Err(Error::DimensionMismatch {
                what: "weight update",
                expected: w.len(),
                actual: delta.len(),
            });
        }
        for (wi, di) in w.iter_mut().zip(delta.as_slice()) {
            *wi -= di;
        }
        Self::unflatten(&self.arch, &w)
    }
}

/// Uniform init in [−s, s) with s = √(6/(fan_in + fan_out)) per layer;
/// biases start at zero. Deterministic for a given RNG state.
pub fn init_weights<R: Rng>(arch: &NetworkArchitecture, rng: &mut R) -> Result<NetworkWeights> {
    let sizes = arch.layer_sizes();
    let mut layers = Vec::with_capacity(arch.n_layers());
    for pair in sizes.windows(2) {
        let (fan_in, fan_out) = (pair[0], pair[1]);
        let s = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
        let entries: Vec<f64> = (0..fan_out * fan_in).map(|_| rng.gen_range(-s..s)).collect();
        layers.push(Layer {
            weights: DenseMatrix::new(fan_out, fan_in, entries)?,
            bias: vec![0.0; fan_out],
        });
    }
    Ok(NetworkWeights {
        arch: arch.clone(),
        layers,
    })
}

/// Nguyen-Widrow init for the hidden layers, assuming inputs in
/// [−1, 1]: each unit's weight row is a random direction scaled to
/// norm 0.7·fan_out^(1/fan_in), and biases spread the unit centers
/// evenly across the active range. The linear output layer keeps the
/// plain uniform init (its optimum is one Gauss-Newton solve away
/// regardless).
///
/// Zero-bias uniform init leaves every tanh unit centered at the
/// origin, which on this crate's inverse problems stalls a large
/// fraction of runs in poor basins; spreading the centers removes
/// that failure mode.
pub fn init_weights_nguyen_widrow<R: Rng>(
    arch: &NetworkArchitecture,
    rng: &mut R,
) -> Result<NetworkWeights> {
    let sizes = arch.layer_sizes();
    let n_layers = arch.n_layers();
    let mut layers = Vec::with_capacity(n_layers);
    for (l, pair) in sizes.windows(2).enumerate() {
        let (fan_in, fan_out) = (pair[0], pair[1]);
        if l + 1 == n_layers {
            let s = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
            let entries: Vec<f64> =
                (0..fan_out * fan_in).map(|_| rng.gen_range(-s..s)).collect();
            layers.push(Layer {
                weights: DenseMatrix::new(fan_out, fan_in, entries)?,
                bias: vec![0.0; fan_out],
            });
            continue;
        }
        let magnitude = 0.7 * libm::pow(fan_out as f64, 1.0 / fan_in as f64);
        let mut entries = Vec::with_capacity(fan_out * fan_in);
        let mut first_signs = Vec::with_capacity(fan_out);
        for _ in 0..fan_out {
            let row: Vec<f64> = (0..fan_in).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = libm::sqrt(row.iter().map(|v| v * v).sum::<f64>());
            let scale = if norm > 0.0 { magnitude / norm } else { 0.0 };
            first_signs.push(if row[0] < 0.0 { -1.0 } else { 1.0 });
            entries.extend(row.iter().map(|v| v * scale));
        }
        let bias: Vec<f64> = (0..fan_out)
            .map(|i| {
                if fan_out == 1 {
                    0.0
                } else {
                    let center = -1.0 + 2.0 * i as f64 / (fan_out - 1) as f64;
                    magnitude * center * first_signs[i]
                }
            })
            .collect();
        layers.push(Layer {
            weights: DenseMatrix::new(fan_out, fan_in, entries)?,
            bias,
        });
    }
    Ok(NetworkWeights {
        arch: arch.clone(),
        layers,
    })
}

/// Pre-activations and activations of every layer for one input;
/// `activations[0]` is the input itself.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub pre_activations: Vec<Vec<f64>>,
    pub activations: Vec<Vec<f64>>,
}

/// Affine + activation chain. Returns the output and the intermediates
/// needed to reuse the pass for Jacobian rows.
pub fn forward(weights: &NetworkWeights, input: &[f64]) -> Result<(Vec<f64>, ForwardTrace)> {
    let arch = weights.arch();
    if input.len() != arch.input_size {
        return Err(Error::DimensionMismatch {
            what: "network input",
            expected: arch.input_size,
            actual: input.len(),
        });
    }
    let n_layers = arch.n_layers();
    let mut pre_activations = Vec::with_capacity(n_layers);
    let mut activations = Vec::with_capacity(n_layers + 1);
    activations.push(input.to_vec());
    for (l, layer) in weights.layers.iter().enumerate() {
        let prev = &activations[l];
        let fan_out = layer.bias.len();
        let mut z = layer.bias.clone();
        for i in 0..fan_out {
            let row = layer.weights.row(i);
            let mut acc = 0.0;
            for (w, a) in row.iter().zip(prev) {
                acc += w * a;
            }
            z[i] += acc;
        }
        let a = if l + 1 == n_layers {
            z.clone() // linear output layer
        } else {
            z.iter().map(|&v| libm::tanh(v)).collect()
        };
        pre_activations.push(z);
        activations.push(a);
    }
    let output = activations.last().cloned().unwrap_or_default();
    Ok((
        output,
        ForwardTrace {
            pre_activations,
            activations,
        },
    ))
}

fn check_samples(arch: &NetworkArchitecture, samples: &[Sample]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidConfig("at least one sample required"));
    }
    for s in samples {
        if s.input.len() != arch.input_size {
            return Err(Error::DimensionMismatch {
                what: "sample input",
                expected: arch.input_size,
                actual: s.input.len(),
            });
        }
        if s.target.len() != arch.output_size {
            return Err(Error::DimensionMismatch {
                what: "sample target",
                expected: arch.output_size,
                actual: s.target.len(),
            });
        }
    }
    Ok(())
}

/// Mean squared error over all N·M scalar residuals y − t.
pub fn network_mse(weights: &NetworkWeights, samples: &[Sample]) -> Result<f64> {
    check_samples(weights.arch(), samples)?;
    let m = weights.arch().output_size;
    let mut sum = 0.0;
    for s in samples {
        let (y, _) = forward(weights, &s.input)?;
        for (yi, ti) in y.iter().zip(&s.target) {
            let e = yi - ti;
            sum += e * e;
        }
    }
    Ok(sum / (samples.len() * m) as f64)
}

/// Analytic Jacobian of the residual vector with respect to the
/// flattened weights, plus the residuals themselves.
///
/// Row `s·M + m` holds ∂(y_m − t_m)/∂w for sample s, built by one
/// backward pass per output component from the shared forward trace.
pub fn jacobian(
    weights: &NetworkWeights,
    samples: &[Sample],
) -> Result<(DenseMatrix, DenseVector)> {
    let arch = weights.arch();
    check_samples(arch, samples)?;
    let n_out = arch.output_size;
    let n_w = arch.n_weights();
    let n_rows = samples.len() * n_out;
    let n_layers = arch.n_layers();

    // Column offset of each layer's parameter block.
    let sizes = arch.layer_sizes();
    let mut offsets = Vec::with_capacity(n_layers);
    let mut off = 0;
    for pair in sizes.windows(2) {
        offsets.push(off);
        off += pair[1] * (pair[0] + 1);
    }

    let mut rows = vec![0.0; n_rows * n_w];
    let mut residuals = vec![0.0; n_rows];

    for (s_idx, sample) in samples.iter().enumerate() {
        let (y, trace) = forward(weights, &sample.input)?;
        for m in 0..n_out {
            let row_idx = s_idx * n_out + m;
            residuals[row_idx] = y[m] - sample.target[m];
            let row = &mut rows[row_idx * n_w..(row_idx + 1) * n_w];

            // Output layer is linear, so ∂y_m/∂z_L is the m-th basis vector.
            let mut delta = vec![0.0; n_out];
            delta[m] = 1.0;

            for l in (0..n_layers).rev() {
                let layer = &weights.layers[l];
                let prev = &trace.activations[l];
                let fan_in = prev.len();
                let base = offsets[l];
                for (i, &d) in delta.iter().enumerate() {
                    if d != 0.0 {
                        let w_base = base + i * fan_in;
                        for (j, &a) in prev.iter().enumerate() {
                            row[w_base + j] = d * a;
                        }
                    }
                    row[base + layer.bias.len() * fan_in + i] = d;
                }
                if l == 0 {
                    break;
                }
                // δ_{l−1} = (W_lᵀ δ_l) ⊙ tanh′(z_{l−1}), with
                // tanh′ = 1 − a² read from the stored activation.
                let mut next = vec![0.0; fan_in];
                for (i, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    for (n, w) in next.iter_mut().zip(layer.weights.row(i)) {
                        *n += w * d;
                    }
                }
                for (n, &a) in next.iter_mut().zip(prev) {
                    *n *= 1.0 - a * a;
                }
                delta = next;
            }
        }
    }

    Ok((
        DenseMatrix::new(n_rows, n_w, rows)?,
        DenseVector::new(residuals)?,
    ))
}
