//! Binary soft-margin SVM trained by sequential minimal optimization.
//!
//! The solver works two Lagrange multipliers at a time with the analytic
//! clipping bounds, picking the second index by maximum error gap and
//! falling back to a seeded random sweep when that step makes no progress.
//! Training stops once every example satisfies the KKT conditions within
//! tolerance for `max_passes` consecutive sweeps.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{apply_normalizer, LabeledDataset, NormalizationParams};
use crate::math;

/// Kernel function selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    Linear,
    Polynomial { degree: u32, coef0: f64 },
    Gaussian { gamma: f64 },
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::Gaussian { gamma: 1.0 }
    }
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { degree, .. } if degree >= 1 => Ok(()),
            KernelSpec::Polynomial { .. } => Err(Error::Config(alloc::string::String::from(
                "polynomial degree must be >= 1",
            ))),
            KernelSpec::Gaussian { gamma } if gamma > 0.0 => Ok(()),
            KernelSpec::Gaussian { .. } => Err(Error::Config(alloc::string::String::from(
                "gaussian gamma must be > 0",
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Polynomial { .. } => "polynomial",
            KernelSpec::Gaussian { .. } => "gaussian",
        }
    }
}

/// Evaluate the kernel on two equal-length vectors.
pub fn kernel_eval(kernel: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(match *kernel {
        KernelSpec::Linear => dot(x, y),
        KernelSpec::Polynomial { degree, coef0 } => math::powi(dot(x, y) + coef0, degree as i32),
        KernelSpec::Gaussian { gamma } => {
            let d2: f64 = x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            math::exp(-gamma * d2)
        }
    })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    /// Soft-margin bound on the multipliers.
    pub c: f64,
    /// KKT tolerance.
    pub tol: f64,
    /// Consecutive clean sweeps before stopping.
    pub max_passes: usize,
    pub rng_seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 10.0,
            tol: 1e-3,
            max_passes: 20,
            rng_seed: 0,
        }
    }
}

impl SvmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !(self.tol > 0.0) || self.max_passes == 0 {
            return Err(Error::Config(alloc::string::String::from(
                "SVM config requires c > 0, tol > 0, max_passes >= 1",
            )));
        }
        Ok(())
    }
}

/// Trained model: the retained support vectors and, when set, the raw-input
/// preprocessing (feature subset, then min–max normalization) applied before
/// every kernel evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel: KernelSpec,
    support_vectors: Vec<Vec<f64>>,
    alphas: Vec<f64>,
    sv_labels: Vec<i8>,
    bias: f64,
    feature_subset: Option<Vec<usize>>,
    normalization: Option<NormalizationParams>,
    pub config: SvmConfig,
}

impl SvmModel {
    pub fn support_vectors(&self) -> &[Vec<f64>] {
        &self.support_vectors
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn sv_labels(&self) -> &[i8] {
        &self.sv_labels
    }

    pub fn bias(&self) -> f64 {
        self.bias
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

    /// Signed distance-like score `f(x) = Σ αᵢ yᵢ K(xᵢ, x) + ρ`; its
    /// magnitude doubles as the classification confidence.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        let z = self.prepare(x)?;
        let mut sum = self.bias;
        for ((sv, &alpha), &label) in self
            .support_vectors
            .iter()
            .zip(&self.alphas)
            .zip(&self.sv_labels)
        {
            sum += alpha * label as f64 * kernel_eval(&self.kernel, sv, &z)?;
        }
        Ok(sum)
    }

    /// Sign of the decision value; an exact zero classifies as +1.
    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        Ok(if self.decision_value(x)? >= 0.0 { 1 } else { -1 })
    }
}

/// Multipliers below this are treated as zero and dropped from the model.
const SV_THRESHOLD: f64 = 1e-8;
/// Safety bound on total sweeps; the stall rule terminates long before this
/// on anything non-pathological.
const MAX_SWEEPS: usize = 100_000;

/// Train on prepared vectors (any projection/normalization already applied).
pub fn train(data: &LabeledDataset, kernel: KernelSpec, cfg: &SvmConfig) -> Result<SvmModel> {
    kernel.validate()?;
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (pos, neg) = data.class_counts();
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }

    let n = data.len();
    let x = data.vectors();
    let y: Vec<f64> = data.labels().iter().map(|&l| l as f64).collect();
    let c = cfg.c;
    let tol = cfg.tol;

    let mut gram = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i..n {
            let k = kernel_eval(&kernel, &x[i], &x[j])?;
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }
    let k_at = |i: usize, j: usize| gram[i * n + j];

    let mut alphas = vec![0.0f64; n];
    let mut bias = 0.0f64;
    // E_i = f(x_i) - y_i; with all multipliers zero f is identically zero.
    let mut errors: Vec<f64> = y.iter().map(|&yi| -yi).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    let take_step = |i: usize,
                         j: usize,
                         alphas: &mut Vec<f64>,
                         bias: &mut f64,
                         errors: &mut Vec<f64>|
     -> bool {
        if i == j {
            return false;
        }
        let (ai_old, aj_old) = (alphas[i], alphas[j]);
        let (lo, hi) = if y[i] != y[j] {
            ((aj_old - ai_old).max(0.0), (c + aj_old - ai_old).min(c))
        } else {
            ((ai_old + aj_old - c).max(0.0), (ai_old + aj_old).min(c))
        };
        if lo >= hi {
            return false;
        }
        let eta = k_at(i, i) + k_at(j, j) - 2.0 * k_at(i, j);
        if eta <= 0.0 {
            return false;
        }
        let mut aj_new = aj_old + y[j] * (errors[i] - errors[j]) / eta;
        aj_new = aj_new.clamp(lo, hi);
        if math::abs(aj_new - aj_old) < 1e-8 {
            return false;
        }
        let ai_new = ai_old + y[i] * y[j] * (aj_old - aj_new);
        let di = y[i] * (ai_new - ai_old);
        let dj = y[j] * (aj_new - aj_old);
        let b1 = *bias - errors[i] - di * k_at(i, i) - dj * k_at(i, j);
        let b2 = *bias - errors[j] - di * k_at(i, j) - dj * k_at(j, j);
        let b_new = if ai_new > 0.0 && ai_new < c {
            b1
        } else if aj_new > 0.0 && aj_new < c {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        let db = b_new - *bias;
        for k in 0..n {
            errors[k] += di * k_at(i, k) + dj * k_at(j, k) + db;
        }
        alphas[i] = ai_new;
        alphas[j] = aj_new;
        *bias = b_new;
        true
    };

    let mut stall = 0usize;
    let mut sweeps = 0usize;
    while stall < cfg.max_passes && sweeps < MAX_SWEEPS {
        let mut changed = 0usize;
        for i in 0..n {
            let r = y[i] * errors[i];
            let violates = (r < -tol && alphas[i] < c) || (r > tol && alphas[i] > 0.0);
            if !violates {
                continue;
            }
            // Second-choice heuristic: widest error gap first.
            let mut best_j = usize::MAX;
            let mut best_gap = -1.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let gap = math::abs(errors[i] - errors[j]);
                if gap > best_gap {
                    best_gap = gap;
                    best_j = j;
                }
            }
            let mut stepped =
                best_j != usize::MAX && take_step(i, best_j, &mut alphas, &mut bias, &mut errors);
            if !stepped {
                let start = rng.random_range(0..n);
                for off in 0..n {
                    let j = (start + off) % n;
                    if j == i || j == best_j {
                        continue;
                    }
                    if take_step(i, j, &mut alphas, &mut bias, &mut errors) {
                        stepped = true;
                        break;
                    }
                }
            }
            if stepped {
                changed += 1;
            }
        }
        sweeps += 1;
        if changed == 0 {
            stall += 1;
        } else {
            stall = 0;
        }
    }

    // Recompute the bias from the unbounded support vectors, which sit
    // exactly on the margin; fall back to the running value if none exist.
    let f_without_bias = |k: usize, alphas: &[f64]| -> f64 {
        (0..n).map(|j| alphas[j] * y[j] * k_at(j, k)).sum()
    };
    let unbounded: Vec<usize> = (0..n)
        .filter(|&i| alphas[i] > SV_THRESHOLD && alphas[i] < c - SV_THRESHOLD)
        .collect();
    if !unbounded.is_empty() {
        bias = unbounded
            .iter()
            .map(|&i| y[i] - f_without_bias(i, &alphas))
            .sum::<f64>()
            / unbounded.len() as f64;
    }

    let mut support_vectors = Vec::new();
    let mut kept_alphas = Vec::new();
    let mut sv_labels = Vec::new();
    for i in 0..n {
        if alphas[i] > SV_THRESHOLD {
            support_vectors.push(x[i].clone());
            kept_alphas.push(alphas[i]);
            sv_labels.push(data.labels()[i]);
        }
    }
    if support_vectors.is_empty() {
        // Both classes present but no progress made; should not happen for
        // finite data, treat as a configuration problem.
        return Err(Error::Config(alloc::string::String::from(
            "SMO retained no support vectors",
        )));
    }

    Ok(SvmModel {
        kernel,
        support_vectors,
        alphas: kept_alphas,
        sv_labels,
        bias,
        feature_subset: None,
        normalization: None,
        config: *cfg,
    })
}
