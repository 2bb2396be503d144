//! Cross-validated experiment arms: feature selection inside each training
//! fold (no test leakage), one classifier per fold, pooled scoring, ROC.
//! The four comparison arms share fold assignments and stage seeds derive
//! from named sub-streams of the root seed.

use wct_core::error::Result as CoreResult;
use wct_core::eval::{self, CvOutcome, CvPlan, RocCurve};
use wct_core::features::{fit_normalizer, LabeledDataset};
use wct_core::selection::{self, Chromosome, FitnessReport};
use wct_core::svm::{self, KernelSpec, SvmModel};
use wct_core::{bpn, bpn::BpnModel};

use crate::config::{Classifier, Config, CvChoice, Domain, Selection};
use crate::dataset::{extract_dataset, feature_label};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;
use crate::seeds;

/// A trained fold model of either family, scoring raw feature vectors.
#[derive(Debug, Clone)]
pub enum TrainedModel {
    Svm(SvmModel),
    Bpn(BpnModel),
}

impl TrainedModel {
    /// `(label, score)`; the score drives the ROC sweep (decision value for
    /// the SVM, sigmoid output for the network).
    pub fn score(&self, x: &[f64]) -> CoreResult<(i8, f64)> {
        match self {
            TrainedModel::Svm(m) => {
                let d = m.decision_value(x)?;
                Ok((if d >= 0.0 { 1 } else { -1 }, d))
            }
            TrainedModel::Bpn(m) => m.predict(x),
        }
    }
}

/// What one training fold selected and how the GA got there.
#[derive(Debug, Clone)]
pub struct FoldSelection {
    pub fold: usize,
    pub bits: String,
    pub indices: Vec<usize>,
    /// Subset performance and fitness of the winning chromosome (GA runs
    /// only; fixed/all selections carry no search trail).
    pub best: Option<FitnessReport>,
    pub history: Vec<FitnessReport>,
}

/// Everything one arm produces.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub arm: String,
    pub domain: Domain,
    pub classifier: Classifier,
    pub outcome: CvOutcome,
    pub roc: RocCurve,
    pub labels: Vec<i8>,
    pub ids: Vec<String>,
    pub fold_selections: Vec<FoldSelection>,
    /// Most frequent selected subset across folds (ties: first reached).
    pub modal_subset: Vec<usize>,
    pub modal_names: Vec<String>,
    /// Report label of every feature column, in vector order.
    pub feature_names: Vec<String>,
    pub config_echo: String,
}

/// Technique label in the comparison-table vocabulary.
pub fn arm_name(domain: Domain, classifier: Classifier, selection: &Selection) -> String {
    let front = match domain {
        Domain::Wavelet => "WT+SGLDM",
        Domain::Graylevel => "SGLDM",
    };
    let middle = match selection {
        Selection::Ga => "+GA",
        Selection::All | Selection::Fixed(_) => "",
    };
    format!("{front}{middle}+{}", classifier.name().to_uppercase())
}

fn core_err(context: &str) -> impl FnOnce(wct_core::Error) -> CliError + '_ {
    move |source| CliError::Core {
        context: context.to_string(),
        source,
    }
}

/// Fit normalizer on the (projected) training split, train the classifier,
/// and wrap it so it scores raw full-width vectors.
fn train_on_subset(
    train: &LabeledDataset,
    subset: &[usize],
    classifier: Classifier,
    kernel: KernelSpec,
    config: &Config,
    svm_seed: u64,
) -> CoreResult<TrainedModel> {
    let projected = train.project(subset)?;
    let params = fit_normalizer(&projected)?;
    let normalized = projected.normalized(&params)?;
    match classifier {
        Classifier::Svm => {
            let model = svm::train(&normalized, kernel, &config.svm_config(svm_seed))?;
            Ok(TrainedModel::Svm(model.with_preprocessing(
                Some(subset.to_vec()),
                Some(params),
            )))
        }
        Classifier::Bpn => {
            let (model, _) = bpn::train(&normalized, &config.bpn_config(svm_seed))?;
            Ok(TrainedModel::Bpn(model.with_preprocessing(
                Some(subset.to_vec()),
                Some(params),
            )))
        }
    }
}

/// The GA's subset evaluator J: pooled accuracy of a stratified inner CV of
/// the Gaussian-kernel SVM on the training split only.
fn subset_accuracy(
    train: &LabeledDataset,
    inner_plan: &CvPlan,
    subset: &[usize],
    config: &Config,
    svm_seed: u64,
) -> CoreResult<f64> {
    let kernel = KernelSpec::Gaussian {
        gamma: config.svm_gamma,
    };
    let outcome = eval::cross_validate(
        train,
        inner_plan,
        |fold_train, _| {
            train_on_subset(fold_train, subset, Classifier::Svm, kernel, config, svm_seed)
        },
        |model, x| model.score(x),
    )?;
    Ok(outcome.pooled_accuracy)
}

/// Choose the feature subset for one training fold.
fn select_subset(
    train: &LabeledDataset,
    fold: usize,
    arm: u64,
    config: &Config,
    dim: usize,
) -> CliResult<FoldSelection> {
    match &config.selection {
        Selection::All => Ok(FoldSelection {
            fold,
            bits: "1".repeat(dim),
            indices: (0..dim).collect(),
            best: None,
            history: Vec::new(),
        }),
        Selection::Fixed(indices) => {
            if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
                return Err(CliError::Usage(format!(
                    "fixed feature index {bad} out of range for dimension {dim}"
                )));
            }
            let mut bits = vec![false; dim];
            for &i in indices {
                bits[i] = true;
            }
            Ok(FoldSelection {
                fold,
                bits: Chromosome::new(bits).to_bitstring(),
                indices: indices.clone(),
                best: None,
                history: Vec::new(),
            })
        }
        Selection::Ga => {
            let inner_plan = eval::kfold_plan(
                train,
                config.inner_folds,
                seeds::derive(config.seed, "ga-inner", &[arm, fold as u64]),
            )
            .map_err(core_err("inner CV plan for feature selection"))?;
            let svm_seed = seeds::derive(config.seed, "ga-inner-svm", &[arm, fold as u64]);
            let ga_cfg = config.ga_config(seeds::derive(config.seed, "ga", &[arm, fold as u64]));
            let mut j_fn = |subset: &[usize]| -> CoreResult<f64> {
                subset_accuracy(train, &inner_plan, subset, config, svm_seed)
            };
            let run = selection::run_ga(dim, &ga_cfg, &mut j_fn)
                .map_err(core_err("genetic feature selection"))?;
            let indices = run.best.chromosome.decode();
            if indices.is_empty() {
                return Err(CliError::Data(
                    "feature selection converged on an empty subset".into(),
                ));
            }
            Ok(FoldSelection {
                fold,
                bits: run.best.chromosome.to_bitstring(),
                indices,
                best: Some(run.best.clone()),
                history: run.history,
            })
        }
    }
}

/// Run one arm over an already-extracted feature dataset.
///
/// `arm` indexes the seed sub-streams so concurrent arms of a comparison
/// stay independent; the outer fold plan deliberately ignores it so every
/// arm sees the same splits.
pub fn run_on_features(
    data: &LabeledDataset,
    domain: Domain,
    classifier: Classifier,
    config: &Config,
    arm: u64,
) -> CliResult<ReportBundle> {
    let dim = data.dim();
    let plan = match config.cv {
        CvChoice::KFold => eval::kfold_plan(
            data,
            config.cv_folds,
            seeds::derive(config.seed, "folds", &[]),
        )
        .map_err(core_err("cross-validation plan"))?,
        CvChoice::Loocv => eval::loocv_plan(data).map_err(core_err("cross-validation plan"))?,
    };

    let kernel = config.kernel_spec();
    let mut fold_selections: Vec<FoldSelection> = Vec::new();
    let outcome = eval::cross_validate(
        data,
        &plan,
        |train, fold| {
            let selection = select_subset(train, fold, arm, config, dim).map_err(|e| match e {
                CliError::Core { source, .. } => source,
                other => wct_core::Error::Config(other.to_string()),
            })?;
            let seed = seeds::derive(
                config.seed,
                match classifier {
                    Classifier::Svm => "svm",
                    Classifier::Bpn => "bpn",
                },
                &[arm, fold as u64],
            );
            let model =
                train_on_subset(train, &selection.indices, classifier, kernel, config, seed)?;
            fold_selections.push(selection);
            Ok(model)
        },
        |model, x| model.score(x),
    )
    .map_err(core_err("cross-validation"))?;

    let roc = eval::roc(&outcome.scores, data.labels()).map_err(core_err("ROC analysis"))?;

    // Modal subset: the bit string chosen by the most folds.
    let mut counts: Vec<(String, usize)> = Vec::new();
    for sel in &fold_selections {
        match counts.iter_mut().find(|(bits, _)| *bits == sel.bits) {
            Some((_, n)) => *n += 1,
            None => counts.push((sel.bits.clone(), 1)),
        }
    }
    let mut modal_bits = String::new();
    let mut modal_count = 0usize;
    for (bits, n) in &counts {
        // Strict comparison keeps the first-reached subset on ties.
        if *n > modal_count {
            modal_count = *n;
            modal_bits = bits.clone();
        }
    }
    let modal_subset = Chromosome::from_bitstring(&modal_bits)
        .map(|c| c.decode())
        .unwrap_or_default();
    let feature_names: Vec<String> = (0..dim).map(|i| feature_label(domain, config, i)).collect();
    let modal_names = modal_subset
        .iter()
        .map(|&i| feature_names[i].clone())
        .collect();

    Ok(ReportBundle {
        arm: arm_name(domain, classifier, &config.selection),
        domain,
        classifier,
        outcome,
        roc,
        labels: data.labels().to_vec(),
        ids: data.ids().to_vec(),
        fold_selections,
        modal_subset,
        modal_names,
        feature_names,
        config_echo: config.echo(),
    })
}

/// Extract features for the configured domain and run one arm.
pub fn run_experiment(manifest: &Manifest, config: &Config) -> CliResult<ReportBundle> {
    let data = extract_dataset(manifest, config.domain, config)?;
    run_on_features(&data, config.domain, config.classifier, config, 0)
}

/// The four comparison arms in table order, sharing extracted features per
/// domain and fold assignments across arms.
pub fn compare(manifest: &Manifest, config: &Config) -> CliResult<Vec<ReportBundle>> {
    let wavelet = extract_dataset(manifest, Domain::Wavelet, config)?;
    let gray = extract_dataset(manifest, Domain::Graylevel, config)?;
    let arms = [
        (Domain::Wavelet, Classifier::Svm),
        (Domain::Graylevel, Classifier::Svm),
        (Domain::Wavelet, Classifier::Bpn),
        (Domain::Graylevel, Classifier::Bpn),
    ];
    let mut bundles = Vec::with_capacity(arms.len());
    for (k, (domain, classifier)) in arms.into_iter().enumerate() {
        let data = match domain {
            Domain::Wavelet => &wavelet,
            Domain::Graylevel => &gray,
        };
        let mut arm_config = config.clone();
        arm_config.domain = domain;
        arm_config.classifier = classifier;
        bundles.push(run_on_features(
            data, domain, classifier, &arm_config, k as u64,
        )?);
    }
    Ok(bundles)
}

/// Train one model on the whole manifest (no held-out split); used by the
/// `train` subcommand whose artifact feeds `segment` and `roc`.
pub fn train_full(
    data: &LabeledDataset,
    config: &Config,
) -> CliResult<(TrainedModel, FoldSelection)> {
    let dim = data.dim();
    let selection = select_subset(data, 0, 0, config, dim)?;
    let seed = seeds::derive(config.seed, "final-model", &[]);
    let model = train_on_subset(
        data,
        &selection.indices,
        config.classifier,
        config.kernel_spec(),
        config,
        seed,
    )
    .map_err(core_err("final training"))?;
    Ok((model, selection))
}
