//! Single-hidden-layer sigmoid network trained by full-batch
//! backpropagation with momentum, stopping at a mean-squared-error target.
//!
//! Labels map to sigmoid targets (−1 → 0, +1 → 1); the lone output unit
//! thresholds at 0.5. The hidden width defaults to twice the input width
//! plus one.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{apply_normalizer, LabeledDataset, NormalizationParams};
use crate::math;

/// Default hidden-layer width: `2 * input_dim + 1`.
pub fn hidden_size_rule(input_dim: usize) -> usize {
    2 * input_dim + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BpnConfig {
    /// Step size for the input→hidden layer (and the output layer unless
    /// overridden).
    pub learning_rate: f64,
    /// Optional separate step size for the hidden→output layer.
    pub learning_rate_output: Option<f64>,
    pub momentum: f64,
    /// Stop once batch MSE falls to this value.
    pub target_error: f64,
    pub max_epochs: usize,
    /// Uniform weight-initialization interval.
    pub init_low: f64,
    pub init_high: f64,
    pub rng_seed: u64,
    /// Hidden width override; `None` applies [`hidden_size_rule`].
    pub hidden_dim: Option<usize>,
}

impl Default for BpnConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.4,
            learning_rate_output: None,
            momentum: 0.2,
            target_error: 0.01,
            max_epochs: 5000,
            init_low: -0.5,
            init_high: 0.5,
            rng_seed: 0,
            hidden_dim: None,
        }
    }
}

impl BpnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.learning_rate < 0.0
            || self.momentum < 0.0
            || !(self.target_error > 0.0)
            || self.max_epochs == 0
            || self.init_low > self.init_high
        {
            return Err(Error::Config(alloc::string::String::from(
                "BPN config requires rates >= 0, target_error > 0, max_epochs >= 1, init_low <= init_high",
            )));
        }
        Ok(())
    }
}

/// Trained network. `w1` is hidden×input row-major; `w2` feeds the single
/// output unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpnModel {
    input_dim: usize,
    hidden_dim: usize,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
    feature_subset: Option<Vec<usize>>,
    normalization: Option<NormalizationParams>,
    pub config: BpnConfig,
}

/// Epoch count and final batch error of a training run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainStats {
    pub epochs: usize,
    pub final_mse: f64,
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + math::exp(-t))
}

impl BpnModel {
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn feature_subset(&self) -> Option<&[usize]> {
        self.feature_subset.as_deref()
    }

    pub fn normalization(&self) -> Option<&NormalizationParams> {
        self.normalization.as_ref()
    }

    /// Attach raw-input preprocessing: project onto `subset`, then normalize.
    pub fn with_preprocessing(
        mut self,
        subset: Option<Vec<usize>>,
        normalization: Option<NormalizationParams>,
    ) -> Self {
        self.feature_subset = subset;
        self.normalization = normalization;
        self
    }

    fn prepare(&self, x: &[f64]) -> Result<Vec<f64>> {
        let projected: Vec<f64> = match &self.feature_subset {
            Some(subset) => {
                if let Some(&bad) = subset.iter().find(|&&f| f >= x.len()) {
                    return Err(Error::DimensionMismatch {
                        expected: bad + 1,
                        actual: x.len(),
                    });
                }
                subset.iter().map(|&f| x[f]).collect()
            }
            None => x.to_vec(),
        };
        match &self.normalization {
            Some(params) => apply_normalizer(params, &projected),
            None => Ok(projected),
        }
    }

    fn hidden_activations(&self, x: &[f64]) -> Vec<f64> {
        (0..self.hidden_dim)
            .map(|h| {
                let net = self.b1[h]
                    + self.w1[h * self.input_dim..(h + 1) * self.input_dim]
                        .iter()
                        .zip(x)
                        .map(|(w, v)| w * v)
                        .sum::<f64>();
                sigmoid(net)
            })
            .collect()
    }

    fn forward_prepared(&self, x: &[f64]) -> f64 {
        let hidden = self.hidden_activations(x);
        let net = self.b2 + self.w2.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>();
        sigmoid(net)
    }

    /// Network output in (0, 1) for a raw input vector.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        let z = self.prepare(x)?;
        if z.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                actual: z.len(),
            });
        }
        Ok(self.forward_prepared(&z))
    }

    /// `(label, score)`: +1 when the sigmoid output reaches 0.5.
    pub fn predict(&self, x: &[f64]) -> Result<(i8, f64)> {
        let score = self.forward(x)?;
        Ok((if score >= 0.5 { 1 } else { -1 }, score))
    }

    /// All weights flattened in the fixed order `w1, b1, w2, b2`.
    pub fn flat_weights(&self) -> Vec<f64> {
        let mut out = self.w1.clone();
        out.extend_from_slice(&self.b1);
        out.extend_from_slice(&self.w2);
        out.push(self.b2);
        out
    }

    /// Inverse of [`flat_weights`].
    pub fn set_flat_weights(&mut self, flat: &[f64]) -> Result<()> {
        let expected = self.w1.len() + self.b1.len() + self.w2.len() + 1;
        if flat.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: flat.len(),
            });
        }
        let (w1, rest) = flat.split_at(self.w1.len());
        let (b1, rest) = rest.split_at(self.b1.len());
        let (w2, b2) = rest.split_at(self.w2.len());
        self.w1.copy_from_slice(w1);
        self.b1.copy_from_slice(b1);
        self.w2.copy_from_slice(w2);
        self.b2 = b2[0];
        Ok(())
    }

    /// Mean squared error of the batch against the 0/1 targets, on prepared
    /// vectors.
    pub fn batch_mse(&self, data: &LabeledDataset) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut sum = 0.0;
        for (v, &label) in data.vectors().iter().zip(data.labels()) {
            let target = if label == 1 { 1.0 } else { 0.0 };
            let e = self.forward_prepared(v) - target;
            sum += e * e;
        }
        Ok(sum / data.len() as f64)
    }

    /// Analytic gradient of [`batch_mse`] in [`flat_weights`] order.
    pub fn batch_gradient(&self, data: &LabeledDataset) -> Result<Vec<f64>> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = data.len() as f64;
        let mut g_w1 = vec![0.0; self.w1.len()];
        let mut g_b1 = vec![0.0; self.b1.len()];
        let mut g_w2 = vec![0.0; self.w2.len()];
        let mut g_b2 = 0.0;
        for (v, &label) in data.vectors().iter().zip(data.labels()) {
            let target = if label == 1 { 1.0 } else { 0.0 };
            let hidden = self.hidden_activations(v);
            let out =
                sigmoid(self.b2 + self.w2.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>());
            let delta_out = 2.0 / n * (out - target) * out * (1.0 - out);
            g_b2 += delta_out;
            for h in 0..self.hidden_dim {
                g_w2[h] += delta_out * hidden[h];
                let delta_h = delta_out * self.w2[h] * hidden[h] * (1.0 - hidden[h]);
                g_b1[h] += delta_h;
                for (i, &x) in v.iter().enumerate() {
                    g_w1[h * self.input_dim + i] += delta_h * x;
                }
            }
        }
        let mut out = g_w1;
        out.extend_from_slice(&g_b1);
        out.extend_from_slice(&g_w2);
        out.push(g_b2);
        Ok(out)
    }
}

/// Train on prepared vectors. Each epoch accumulates the full-batch MSE
/// gradient and applies `Δw = −lr·∇ + momentum·Δw_prev`; training stops when
/// the batch MSE reaches `target_error` or the epoch cap is hit.
pub fn train(data: &LabeledDataset, cfg: &BpnConfig) -> Result<(BpnModel, TrainStats)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let input_dim = data.dim();
    if input_dim == 0 {
        return Err(Error::InconsistentDataset(alloc::string::String::from(
            "zero-dimensional vectors",
        )));
    }
    let hidden_dim = cfg.hidden_dim.unwrap_or_else(|| hidden_size_rule(input_dim));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let span = cfg.init_high - cfg.init_low;
    let mut draw = |count: usize| -> Vec<f64> {
        (0..count)
            .map(|_| cfg.init_low + rng.random::<f64>() * span)
            .collect()
    };
    let mut model = BpnModel {
        input_dim,
        hidden_dim,
        w1: draw(hidden_dim * input_dim),
        b1: draw(hidden_dim),
        w2: draw(hidden_dim),
        b2: draw(1)[0],
        feature_subset: None,
        normalization: None,
        config: *cfg,
    };

    let lr_hidden = cfg.learning_rate;
    let lr_output = cfg.learning_rate_output.unwrap_or(cfg.learning_rate);
    let n_weights = model.flat_weights().len();
    let boundary_w2 = model.w1.len() + model.b1.len();
    let mut velocity = vec![0.0f64; n_weights];

    let mut epochs = 0;
    for epoch in 1..=cfg.max_epochs {
        epochs = epoch;
        let mse = model.batch_mse(data)?;
        if !mse.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        if mse <= cfg.target_error {
            return Ok((model, TrainStats {
                epochs: epoch - 1,
                final_mse: mse,
            }));
        }
        let grad = model.batch_gradient(data)?;
        let mut flat = model.flat_weights();
        for (k, w) in flat.iter_mut().enumerate() {
            let lr = if k < boundary_w2 { lr_hidden } else { lr_output };
            velocity[k] = -lr * grad[k] + cfg.momentum * velocity[k];
            *w += velocity[k];
        }
        model.set_flat_weights(&flat)?;
    }
    let final_mse = model.batch_mse(data)?;
    if !final_mse.is_finite() {
        return Err(Error::Diverged { epoch: epochs });
    }
    Ok((model, TrainStats {
        epochs,
        final_mse,
    }))
}
