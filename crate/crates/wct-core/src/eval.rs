//! Classifier evaluation: contingency counts, the three headline rates,
//! stratified k-fold and leave-one-out cross-validation, and ROC/AUC from
//! real-valued scores. Abnormal (+1) is the positive class throughout.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::LabeledDataset;

/// Contingency counts of predicted vs actual class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
}

impl ConfusionMatrix {
    pub fn new(true_pos: usize, true_neg: usize, false_pos: usize, false_neg: usize) -> Self {
        Self {
            true_pos,
            true_neg,
            false_pos,
            false_neg,
        }
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    pub fn correct(&self) -> usize {
        self.true_pos + self.true_neg
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        self.true_pos += other.true_pos;
        self.true_neg += other.true_neg;
        self.false_pos += other.false_pos;
        self.false_neg += other.false_neg;
    }
}

/// Count predictions against labels.
pub fn confusion(predictions: &[i8], labels: &[i8]) -> Result<ConfusionMatrix> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: predictions.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        for v in [p, y] {
            if v != 1 && v != -1 {
                return Err(Error::BadLabel(v));
            }
        }
        match (y, p) {
            (1, 1) => cm.true_pos += 1,
            (-1, -1) => cm.true_neg += 1,
            (-1, 1) => cm.false_pos += 1,
            (1, -1) => cm.false_neg += 1,
            _ => unreachable!(),
        }
    }
    Ok(cm)
}

/// Sensitivity, specificity, and accuracy. A rate whose denominator is zero
/// is reported as absent rather than forced to a number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub accuracy: f64,
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyConfusion);
    }
    let pos = cm.true_pos + cm.false_neg;
    let neg = cm.true_neg + cm.false_pos;
    Ok(Metrics {
        sensitivity: (pos > 0).then(|| cm.true_pos as f64 / pos as f64),
        specificity: (neg > 0).then(|| cm.true_neg as f64 / neg as f64),
        accuracy: cm.correct() as f64 / total as f64,
    })
}

/// Cross-validation schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CvScheme {
    /// Stratified k-fold: per-class seeded shuffle, round-robin assignment.
    KFold { k: usize },
    /// Leave-one-out: n folds of a single case each.
    Loocv,
}

/// Fold assignment per case index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvPlan {
    pub scheme: CvScheme,
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl CvPlan {
    pub fn n_folds(&self) -> usize {
        match self.scheme {
            CvScheme::KFold { k } => k,
            CvScheme::Loocv => self.assignments.len(),
        }
    }

    pub fn fold_indices(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &f) in self.assignments.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }
}

/// Stratified k-fold plan: shuffle each class with the seeded generator,
/// then deal its members round-robin across folds, so per-fold class counts
/// differ by at most one.
pub fn kfold_plan(data: &LabeledDataset, k: usize, seed: u64) -> Result<CvPlan> {
    if k < 2 {
        return Err(Error::Config(alloc::string::String::from(
            "k-fold needs k >= 2",
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0usize; data.len()];
    for label in [1i8, -1] {
        let mut members: Vec<usize> = data
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(i, _)| i)
            .collect();
        if members.len() < k {
            return Err(Error::ClassSmallerThanFolds {
                label,
                count: members.len(),
                k,
            });
        }
        members.shuffle(&mut rng);
        for (pos, &case) in members.iter().enumerate() {
            assignments[case] = pos % k;
        }
    }
    Ok(CvPlan {
        scheme: CvScheme::KFold { k },
        assignments,
        seed,
    })
}

/// Leave-one-out plan.
pub fn loocv_plan(data: &LabeledDataset) -> Result<CvPlan> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(CvPlan {
        scheme: CvScheme::Loocv,
        assignments: (0..data.len()).collect(),
        seed: 0,
    })
}

/// Everything a cross-validation run produces. Scores and predictions are
/// aligned to the dataset order, each case scored by the model of the fold
/// that held it out.
#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub fold_matrices: Vec<ConfusionMatrix>,
    pub fold_metrics: Vec<Metrics>,
    pub pooled: ConfusionMatrix,
    /// Pooled correct / n — the headline number.
    pub pooled_accuracy: f64,
    /// Unweighted mean of per-fold accuracies.
    pub mean_fold_accuracy: f64,
    pub predictions: Vec<i8>,
    pub scores: Vec<f64>,
}

/// Run the plan: per fold, `train` fits on the training split (normalization
/// included — nothing from the held-out split may leak in), then `score`
/// maps each held-out vector to `(label, score)`.
pub fn cross_validate<M>(
    data: &LabeledDataset,
    plan: &CvPlan,
    mut train: impl FnMut(&LabeledDataset, usize) -> Result<M>,
    score: impl Fn(&M, &[f64]) -> Result<(i8, f64)>,
) -> Result<CvOutcome> {
    if plan.assignments.len() != data.len() {
        return Err(Error::DimensionMismatch {
            expected: data.len(),
            actual: plan.assignments.len(),
        });
    }
    let n_folds = plan.n_folds();
    let mut fold_matrices = Vec::with_capacity(n_folds);
    let mut fold_metrics = Vec::with_capacity(n_folds);
    let mut pooled = ConfusionMatrix::default();
    let mut predictions = vec![0i8; data.len()];
    let mut scores = vec![0.0f64; data.len()];

    for fold in 0..n_folds {
        let (train_idx, test_idx) = plan.fold_indices(fold);
        if test_idx.is_empty() {
            continue;
        }
        let train_set = data.subset(&train_idx)?;
        let (pos, neg) = train_set.class_counts();
        if pos == 0 || neg == 0 {
            return Err(Error::SingleClassFold { fold });
        }
        let model = train(&train_set, fold)?;
        let mut fold_preds = Vec::with_capacity(test_idx.len());
        let mut fold_labels = Vec::with_capacity(test_idx.len());
        for &case in &test_idx {
            let (label, s) = score(&model, &data.vectors()[case])?;
            predictions[case] = label;
            scores[case] = s;
            fold_preds.push(label);
            fold_labels.push(data.labels()[case]);
        }
        let cm = confusion(&fold_preds, &fold_labels)?;
        fold_metrics.push(metrics(&cm)?);
        pooled.add(&cm);
        fold_matrices.push(cm);
    }

    let pooled_accuracy = pooled.correct() as f64 / pooled.total() as f64;
    let mean_fold_accuracy =
        fold_metrics.iter().map(|m| m.accuracy).sum::<f64>() / fold_metrics.len() as f64;
    Ok(CvOutcome {
        fold_matrices,
        fold_metrics,
        pooled,
        pooled_accuracy,
        mean_fold_accuracy,
        predictions,
        scores,
    })
}

/// One ROC operating point; the curve runs from threshold +∞ down to −∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// Threshold sweep over the distinct score values, descending. Tied scores
/// flip together, producing diagonal segments whose trapezoids award the
/// conventional half credit; the resulting area equals the Mann–Whitney
/// pair statistic.
pub fn roc(scores: &[f64], labels: &[i8]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: scores.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("ROC scores"));
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::OneClassRoc);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut auc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        // Consume the whole tie group at this threshold.
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let prev = *points.last().expect("curve starts non-empty");
        let point = RocPoint {
            threshold,
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
        };
        auc += (point.fpr - prev.fpr) * (point.tpr + prev.tpr) / 2.0;
        points.push(point);
    }
    Ok(RocCurve { points, auc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy_dataset(labels: &[i8]) -> LabeledDataset {
        let vectors = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| vec![i as f64, l as f64])
            .collect();
        let ids = (0..labels.len()).map(|i| i.to_string()).collect();
        LabeledDataset::new(vectors, labels.to_vec(), ids).unwrap()
    }

    /// Expected-value AUC by pair counting (ties score one half).
    fn mann_whitney(scores: &[f64], labels: &[i8]) -> f64 {
        let mut concordant = 0.0;
        let mut pairs = 0.0;
        for (i, &si) in scores.iter().enumerate() {
            if labels[i] != 1 {
                continue;
            }
            for (j, &sj) in scores.iter().enumerate() {
                if labels[j] != -1 {
                    continue;
                }
                pairs += 1.0;
                if si > sj {
                    concordant += 1.0;
                } else if si == sj {
                    concordant += 0.5;
                }
            }
        }
        concordant / pairs
    }

    #[test]
    fn confusion_counts_basic_cases() {
        let cm = confusion(&[1, 1, 1, -1, -1], &[1, 1, 1, -1, -1]).unwrap();
        assert_eq!(cm, ConfusionMatrix::new(3, 2, 0, 0));
        let cm = confusion(&[1, 1, 1, 1], &[-1, -1, -1, -1]).unwrap();
        assert_eq!(cm, ConfusionMatrix::new(0, 0, 4, 0));
        assert!(confusion(&[1], &[1, -1]).is_err());
    }

    #[test]
    fn confusion_matches_naive_count_on_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let preds: Vec<i8> = (0..50).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let labels: Vec<i8> = (0..50).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let cm = confusion(&preds, &labels).unwrap();
        let mut expect = ConfusionMatrix::default();
        for i in 0..50 {
            match (labels[i], preds[i]) {
                (1, 1) => expect.true_pos += 1,
                (1, -1) => expect.false_neg += 1,
                (-1, 1) => expect.false_pos += 1,
                _ => expect.true_neg += 1,
            }
        }
        assert_eq!(cm, expect);
        assert_eq!(cm.total(), 50);
    }

    #[test]
    fn metrics_reproduce_published_tables() {
        // 100-case wavelet-domain SVM column.
        let m = metrics(&ConfusionMatrix::new(49, 47, 2, 2)).unwrap();
        assert!((m.sensitivity.unwrap() - 49.0 / 51.0).abs() < 1e-15);
        assert!((m.specificity.unwrap() - 47.0 / 49.0).abs() < 1e-15);
        assert!((m.accuracy - 0.96).abs() < 1e-15);
        // BPN wavelet column.
        let m = metrics(&ConfusionMatrix::new(46, 45, 5, 4)).unwrap();
        assert!((m.accuracy - 0.91).abs() < 1e-15);
        // Gray-level SVM column.
        let m = metrics(&ConfusionMatrix::new(47, 45, 5, 3)).unwrap();
        assert!((m.sensitivity.unwrap() - 0.94).abs() < 1e-15);
        assert!((m.specificity.unwrap() - 0.90).abs() < 1e-15);
        assert!((m.accuracy - 0.92).abs() < 1e-15);
    }

    #[test]
    fn metrics_report_undefined_rates_as_absent() {
        let m = metrics(&ConfusionMatrix::new(0, 3, 1, 0)).unwrap();
        assert!(m.sensitivity.is_none());
        assert!(m.specificity.is_some());
        assert!(matches!(
            metrics(&ConfusionMatrix::default()),
            Err(Error::EmptyConfusion)
        ));
    }

    #[test]
    fn kfold_plan_balances_the_100_case_setup() {
        let labels: Vec<i8> = (0..100).map(|i| if i < 50 { 1 } else { -1 }).collect();
        let data = toy_dataset(&labels);
        let plan = kfold_plan(&data, 10, 42).unwrap();
        for fold in 0..10 {
            let (_, test) = plan.fold_indices(fold);
            let pos = test.iter().filter(|&&i| labels[i] == 1).count();
            assert_eq!(test.len(), 10);
            assert_eq!(pos, 5, "fold {fold} should hold 5 abnormal cases");
        }
    }

    #[test]
    fn kfold_plan_small_exact_split() {
        let labels: Vec<i8> = (0..10).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let data = toy_dataset(&labels);
        let plan = kfold_plan(&data, 5, 1).unwrap();
        for fold in 0..5 {
            let (_, test) = plan.fold_indices(fold);
            assert_eq!(test.len(), 2);
            let pos = test.iter().filter(|&&i| labels[i] == 1).count();
            assert_eq!(pos, 1);
        }
    }

    #[test]
    fn kfold_rejects_class_smaller_than_k() {
        let labels: Vec<i8> = vec![1, 1, -1, -1, -1, -1];
        let data = toy_dataset(&labels);
        assert!(matches!(
            kfold_plan(&data, 3, 0),
            Err(Error::ClassSmallerThanFolds { label: 1, count: 2, k: 3 })
        ));
    }

    #[test]
    fn stratified_fold_counts_within_one_exhaustively() {
        for n_pos in 2..=15usize {
            for n_neg in 2..=15usize {
                let n = n_pos + n_neg;
                if n > 30 {
                    continue;
                }
                for k in 2..=5usize {
                    if n_pos < k || n_neg < k {
                        continue;
                    }
                    let labels: Vec<i8> = (0..n).map(|i| if i < n_pos { 1 } else { -1 }).collect();
                    let data = toy_dataset(&labels);
                    let plan = kfold_plan(&data, k, 7).unwrap();
                    for class in [1i8, -1] {
                        let mut counts = vec![0usize; k];
                        for (i, &f) in plan.assignments.iter().enumerate() {
                            if labels[i] == class {
                                counts[f] += 1;
                            }
                        }
                        let lo = *counts.iter().min().unwrap();
                        let hi = *counts.iter().max().unwrap();
                        assert!(hi - lo <= 1, "n_pos={n_pos} n_neg={n_neg} k={k}");
                    }
                }
            }
        }
    }

    /// 1-NN memorizer: with every point duplicated across folds it scores
    /// perfectly, which pins the plumbing end to end.
    fn memorizer(train: &LabeledDataset) -> impl Fn(&[f64]) -> (i8, f64) {
        let vectors = train.vectors().to_vec();
        let labels = train.labels().to_vec();
        move |x: &[f64]| {
            let mut best = (f64::INFINITY, 0usize);
            for (i, v) in vectors.iter().enumerate() {
                let d: f64 = v.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                if d < best.0 {
                    best = (d, i);
                }
            }
            (labels[best.1], labels[best.1] as f64)
        }
    }

    #[test]
    fn cross_validate_memorizer_on_duplicated_points_is_perfect() {
        // Same eight points appear in both halves of the dataset.
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for rep in 0..2 {
            let _ = rep;
            for i in 0..8 {
                vectors.push(vec![i as f64, (i * i) as f64]);
                labels.push(if i < 4 { 1 } else { -1 });
            }
        }
        let ids = (0..16).map(|i| i.to_string()).collect();
        let data = LabeledDataset::new(vectors, labels, ids).unwrap();
        // Fixed plan that puts each duplicate pair on opposite sides.
        let plan = CvPlan {
            scheme: CvScheme::KFold { k: 2 },
            assignments: (0..16).map(|i| i / 8).collect(),
            seed: 0,
        };
        let outcome = cross_validate(
            &data,
            &plan,
            |train, _| Ok(memorizer(train)),
            |model, x| Ok(model(x)),
        )
        .unwrap();
        assert_eq!(outcome.pooled.total(), 16);
        assert_eq!(outcome.pooled_accuracy, 1.0);
    }

    #[test]
    fn pooled_accuracy_reproduces_the_96_of_100_arithmetic() {
        // Ten folds of ten with fold errors 2,1,1,0,0,0,0,0,0,0.
        let mut pooled = ConfusionMatrix::default();
        let mut fold_accs = Vec::new();
        for fold in 0..10 {
            let errors = match fold {
                0 => 2,
                1 | 2 => 1,
                _ => 0,
            };
            let cm = ConfusionMatrix::new(5 - errors, 5, 0, errors);
            fold_accs.push(metrics(&cm).unwrap().accuracy);
            pooled.add(&cm);
        }
        assert_eq!(pooled.total(), 100);
        assert_eq!(pooled.correct(), 96);
        let pooled_accuracy = pooled.correct() as f64 / pooled.total() as f64;
        assert!((pooled_accuracy - 0.96).abs() < 1e-15);
        let mean: f64 = fold_accs.iter().sum::<f64>() / 10.0;
        assert!((mean - 0.96).abs() < 1e-12);
    }

    #[test]
    fn loocv_equals_kfold_with_k_equal_n() {
        let labels = [1i8, 1, 1, -1, -1, -1];
        let data = toy_dataset(&labels);
        let loo = loocv_plan(&data).unwrap();
        assert_eq!(loo.n_folds(), 6);
        let run = |plan: &CvPlan| {
            cross_validate(
                &data,
                plan,
                |train, _| Ok(memorizer(train)),
                |model, x| Ok(model(x)),
            )
            .unwrap()
        };
        let a = run(&loo);
        // k = n with each case alone in its own fold is the same partition,
        // up to fold order; compare the order-free summaries.
        let kplan = CvPlan {
            scheme: CvScheme::KFold { k: 6 },
            assignments: (0..6).collect(),
            seed: 0,
        };
        let b = run(&kplan);
        assert_eq!(a.pooled, b.pooled);
        assert_eq!(a.predictions, b.predictions);
    }

    #[test]
    fn single_class_training_fold_errors() {
        let labels = [1i8, -1, -1, -1];
        let data = toy_dataset(&labels);
        // Manual plan that puts the only positive in the training complement
        // of every fold except fold 0.
        let plan = CvPlan {
            scheme: CvScheme::KFold { k: 2 },
            assignments: vec![1, 0, 1, 0],
            seed: 0,
        };
        let result = cross_validate(
            &data,
            &plan,
            |train, _| Ok(memorizer(train)),
            |model, x| Ok(model(x)),
        );
        assert!(matches!(result, Err(Error::SingleClassFold { fold: 1 })));
    }

    #[test]
    fn roc_ordered_and_antiordered() {
        let labels = [1i8, 1, -1, -1];
        let perfect = roc(&[0.9, 0.8, 0.2, 0.1], &labels).unwrap();
        assert_eq!(perfect.auc, 1.0);
        let inverted = roc(&[0.1, 0.2, 0.8, 0.9], &labels).unwrap();
        assert_eq!(inverted.auc, 0.0);
        let first = perfect.points.first().unwrap();
        let last = perfect.points.last().unwrap();
        assert_eq!((first.fpr, first.tpr), (0.0, 0.0));
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
    }

    #[test]
    fn roc_four_point_hand_case() {
        let scores = [0.9, 0.4, 0.6, 0.2];
        let labels = [1i8, 1, -1, -1];
        let curve = roc(&scores, &labels).unwrap();
        assert!((curve.auc - 0.75).abs() < 1e-15);
        assert!((mann_whitney(&scores, &labels) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn roc_rejects_one_class_input() {
        assert!(matches!(
            roc(&[0.1, 0.2], &[1, 1]),
            Err(Error::OneClassRoc)
        ));
    }

    #[test]
    fn roc_is_monotone_and_matches_mann_whitney_with_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..1000 {
            let n = 4 + (rng.random::<u32>() % 30) as usize;
            let mut labels: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
            // Guarantee both classes.
            labels[0] = 1;
            labels[1] = -1;
            // Coarse score grid produces plenty of exact ties.
            let scores: Vec<f64> = (0..n)
                .map(|_| (rng.random::<u32>() % 8) as f64 / 4.0)
                .collect();
            let curve = roc(&scores, &labels).unwrap();
            let expected = mann_whitney(&scores, &labels);
            assert!(
                (curve.auc - expected).abs() < 1e-12,
                "auc {} vs mann-whitney {expected}",
                curve.auc
            );
            for pair in curve.points.windows(2) {
                assert!(pair[1].fpr >= pair[0].fpr);
                assert!(pair[1].tpr >= pair[0].tpr);
            }
        }
    }

    #[test]
    fn roc_is_invariant_under_monotone_score_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 40;
        let mut labels: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        labels[0] = 1;
        labels[1] = -1;
        let scores: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let base = roc(&scores, &labels).unwrap();
        let squashed: Vec<f64> = scores.iter().map(|&s| 1.0 / (1.0 + (-3.0 * s).exp())).collect();
        let transformed = roc(&squashed, &labels).unwrap();
        assert!((base.auc - transformed.auc).abs() < 1e-12);
        for (a, b) in base.points.iter().zip(&transformed.points) {
            assert_eq!((a.fpr, a.tpr), (b.fpr, b.tpr));
        }
    }
}
