//! Labeled feature-vector datasets and the min–max normalization fitted on
//! training data only, applied with clamping so out-of-range values map to
//! the interval endpoints.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feature vectors with ±1 labels (+1 abnormal, −1 normal) and opaque ids.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    vectors: Vec<Vec<f64>>,
    labels: Vec<i8>,
    ids: Vec<String>,
}

impl LabeledDataset {
    pub fn new(vectors: Vec<Vec<f64>>, labels: Vec<i8>, ids: Vec<String>) -> Result<Self> {
        if vectors.len() != labels.len() || vectors.len() != ids.len() {
            return Err(Error::InconsistentDataset(format!(
                "{} vectors, {} labels, {} ids",
                vectors.len(),
                labels.len(),
                ids.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l != 1 && l != -1) {
            return Err(Error::BadLabel(bad));
        }
        if let Some(first) = vectors.first() {
            let dim = first.len();
            for (i, v) in vectors.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::InconsistentDataset(format!(
                        "vector {i} has dimension {}, expected {dim}",
                        v.len()
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite("feature vector"));
                }
            }
        }
        Ok(Self {
            vectors,
            labels,
            ids,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// `(abnormal, normal)` counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        (pos, self.labels.len() - pos)
    }

    /// Copy out the cases at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        let mut ids = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InconsistentDataset(format!(
                    "index {i} out of range for {} cases",
                    self.len()
                )));
            }
            vectors.push(self.vectors[i].clone());
            labels.push(self.labels[i]);
            ids.push(self.ids[i].clone());
        }
        LabeledDataset::new(vectors, labels, ids)
    }

    /// Keep only the feature columns listed in `features`.
    pub fn project(&self, features: &[usize]) -> Result<Self> {
        let dim = self.dim();
        if let Some(&bad) = features.iter().find(|&&f| f >= dim) {
            return Err(Error::InconsistentDataset(format!(
                "feature index {bad} out of range for dimension {dim}"
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| features.iter().map(|&f| v[f]).collect())
            .collect();
        LabeledDataset::new(vectors, self.labels.clone(), self.ids.clone())
    }

    /// Replace every vector with its normalized form.
    pub fn normalized(&self, params: &NormalizationParams) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| apply_normalizer(params, v))
            .collect::<Result<Vec<_>>>()?;
        LabeledDataset::new(vectors, self.labels.clone(), self.ids.clone())
    }
}

/// Per-column minima and maxima learned from a training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl NormalizationParams {
    pub fn new(mins: Vec<f64>, maxs: Vec<f64>) -> Result<Self> {
        if mins.len() != maxs.len() {
            return Err(Error::DimensionMismatch {
                expected: mins.len(),
                actual: maxs.len(),
            });
        }
        if mins.iter().zip(&maxs).any(|(lo, hi)| lo > hi) {
            return Err(Error::InconsistentDataset(String::from(
                "normalization min exceeds max",
            )));
        }
        Ok(Self { mins, maxs })
    }

    pub fn dim(&self) -> usize {
        self.mins.len()
    }

    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn maxs(&self) -> &[f64] {
        &self.maxs
    }

    /// Restrict the parameters to the listed feature columns.
    pub fn project(&self, features: &[usize]) -> Result<Self> {
        if let Some(&bad) = features.iter().find(|&&f| f >= self.dim()) {
            return Err(Error::InconsistentDataset(format!(
                "feature index {bad} out of range for dimension {}",
                self.dim()
            )));
        }
        Ok(Self {
            mins: features.iter().map(|&f| self.mins[f]).collect(),
            maxs: features.iter().map(|&f| self.maxs[f]).collect(),
        })
    }
}

/// Column-wise minima and maxima over the training vectors only.
pub fn fit_normalizer(train: &LabeledDataset) -> Result<NormalizationParams> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dim = train.dim();
    let mut mins = alloc::vec![f64::INFINITY; dim];
    let mut maxs = alloc::vec![f64::NEG_INFINITY; dim];
    for v in train.vectors() {
        for (c, &x) in v.iter().enumerate() {
            mins[c] = mins[c].min(x);
            maxs[c] = maxs[c].max(x);
        }
    }
    NormalizationParams::new(mins, maxs)
}

/// Clamp into `[min, max]` then rescale onto `[0, 1]`; degenerate columns
/// (min == max) map to 0.
pub fn apply_normalizer(params: &NormalizationParams, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != params.dim() {
        return Err(Error::DimensionMismatch {
            expected: params.dim(),
            actual: v.len(),
        });
    }
    Ok(v.iter()
        .enumerate()
        .map(|(c, &x)| {
            let (lo, hi) = (params.mins[c], params.maxs[c]);
            if hi > lo {
                (x.clamp(lo, hi) - lo) / (hi - lo)
            } else {
                0.0
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dataset(vectors: Vec<Vec<f64>>) -> LabeledDataset {
        let n = vectors.len();
        let labels = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let ids = (0..n).map(|i| i.to_string()).collect();
        LabeledDataset::new(vectors, labels, ids).unwrap()
    }

    #[test]
    fn fit_takes_column_extrema() {
        let ds = dataset(vec![vec![2.0, -1.0], vec![4.0, 0.0], vec![6.0, 5.0]]);
        let p = fit_normalizer(&ds).unwrap();
        assert_eq!(p.mins(), &[2.0, -1.0]);
        assert_eq!(p.maxs(), &[6.0, 5.0]);
    }

    #[test]
    fn single_vector_gives_degenerate_columns() {
        let ds = dataset(vec![vec![3.0, 7.0]]);
        let p = fit_normalizer(&ds).unwrap();
        assert_eq!(p.mins(), p.maxs());
        assert_eq!(apply_normalizer(&p, &[3.0, 7.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(apply_normalizer(&p, &[99.0, -4.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn fit_matches_naive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vectors: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..3).map(|_| rng.random::<f64>() * 100.0 - 50.0).collect())
            .collect();
        let ds = dataset(vectors.clone());
        let p = fit_normalizer(&ds).unwrap();
        for c in 0..3 {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for v in &vectors {
                lo = lo.min(v[c]);
                hi = hi.max(v[c]);
            }
            assert_eq!(p.mins()[c], lo);
            assert_eq!(p.maxs()[c], hi);
        }
    }

    #[test]
    fn apply_scales_and_clamps() {
        let p = NormalizationParams::new(vec![2.0], vec![6.0]).unwrap();
        assert_eq!(apply_normalizer(&p, &[4.0]).unwrap(), vec![0.5]);
        assert_eq!(apply_normalizer(&p, &[8.0]).unwrap(), vec![1.0]);
        assert_eq!(apply_normalizer(&p, &[0.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let p = NormalizationParams::new(vec![0.0], vec![1.0]).unwrap();
        assert!(matches!(
            apply_normalizer(&p, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn training_data_normalizes_onto_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let vectors: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..4).map(|_| rng.random::<f64>() * 10.0).collect())
            .collect();
        let ds = dataset(vectors);
        let p = fit_normalizer(&ds).unwrap();
        let normalized = ds.normalized(&p).unwrap();
        for c in 0..4 {
            let col: Vec<f64> = normalized.vectors().iter().map(|v| v[c]).collect();
            let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(lo >= 0.0 && hi <= 1.0);
            assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn normalization_is_idempotent_on_unit_params() {
        let p = NormalizationParams::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let v = vec![0.25, 0.75];
        let once = apply_normalizer(&p, &v).unwrap();
        let twice = apply_normalizer(&p, &once).unwrap();
        assert_eq!(once, v);
        assert_eq!(twice, v);
    }

    #[test]
    fn dataset_validation_catches_mistakes() {
        assert!(matches!(
            LabeledDataset::new(vec![vec![1.0]], vec![2], vec!["a".to_string()]),
            Err(Error::BadLabel(2))
        ));
        assert!(LabeledDataset::new(
            vec![vec![1.0], vec![1.0, 2.0]],
            vec![1, -1],
            vec!["a".to_string(), "b".to_string()]
        )
        .is_err());
        assert!(fit_normalizer(&dataset(vec![])).is_err());
    }

    #[test]
    fn project_and_subset_select_expected_slices() {
        let ds = dataset(vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]);
        let projected = ds.project(&[2, 0]).unwrap();
        assert_eq!(projected.vectors()[0], vec![3.0, 1.0]);
        assert_eq!(projected.vectors()[1], vec![6.0, 4.0]);
        let sub = ds.subset(&[1]).unwrap();
        assert_eq!(sub.len(), 1);
        assert_eq!(sub.vectors()[0], vec![4.0, 5.0, 6.0]);
        assert!(ds.project(&[3]).is_err());
        assert!(ds.subset(&[2]).is_err());
    }
}
