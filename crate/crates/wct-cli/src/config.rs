//! Run configuration: one struct holding every tunable with its default,
//! loadable from a `key=value` file and overridable by CLI flags
//! (flags > config file > defaults; the `WCT_SEED` environment variable is
//! deliberately ignored).

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use wct_core::bpn::BpnConfig;
use wct_core::imaging::BlockSpec;
use wct_core::selection::{GaConfig, PenaltyMode};
use wct_core::svm::{KernelSpec, SvmConfig};
use wct_core::texture::GlcmSpec;

use crate::error::{read_text, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Wavelet,
    Graylevel,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Wavelet => "wavelet",
            Domain::Graylevel => "graylevel",
        }
    }

    /// Feature-vector width produced in this domain.
    pub fn dim(self) -> usize {
        match self {
            Domain::Wavelet => 27,
            Domain::Graylevel => 9,
        }
    }
}

impl FromStr for Domain {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "wavelet" => Ok(Domain::Wavelet),
            "graylevel" | "gray" => Ok(Domain::Graylevel),
            other => Err(format!("unknown domain {other:?} (wavelet | graylevel)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    Svm,
    Bpn,
}

impl Classifier {
    pub fn name(self) -> &'static str {
        match self {
            Classifier::Svm => "svm",
            Classifier::Bpn => "bpn",
        }
    }
}

impl FromStr for Classifier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "svm" => Ok(Classifier::Svm),
            "bpn" => Ok(Classifier::Bpn),
            other => Err(format!("unknown classifier {other:?} (svm | bpn)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    Ga,
    All,
    /// Explicit 0-based feature indices.
    Fixed(Vec<usize>),
}

impl Selection {
    pub fn name(&self) -> String {
        match self {
            Selection::Ga => "ga".into(),
            Selection::All => "all".into(),
            Selection::Fixed(idx) => format!(
                "fixed:{}",
                idx.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            ),
        }
    }
}

impl FromStr for Selection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ga" => Ok(Selection::Ga),
            "all" => Ok(Selection::All),
            other => {
                if let Some(list) = other.strip_prefix("fixed:") {
                    let idx = list
                        .split(';')
                        .map(|p| {
                            p.trim()
                                .parse::<usize>()
                                .map_err(|_| format!("bad feature index {p:?}"))
                        })
                        .collect::<Result<Vec<usize>, String>>()?;
                    if idx.is_empty() {
                        return Err("fixed selection needs at least one index".into());
                    }
                    Ok(Selection::Fixed(idx))
                } else {
                    Err(format!(
                        "unknown selection {other:?} (ga | all | fixed:i;j;k)"
                    ))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvChoice {
    KFold,
    Loocv,
}

impl FromStr for CvChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kfold" => Ok(CvChoice::KFold),
            "loocv" => Ok(CvChoice::Loocv),
            other => Err(format!("unknown cv scheme {other:?} (kfold | loocv)")),
        }
    }
}

/// Every tunable of the pipeline, at its documented default.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub domain: Domain,
    pub classifier: Classifier,
    pub selection: Selection,
    pub cv: CvChoice,
    pub cv_folds: usize,
    /// Folds of the internal CV behind the GA's subset evaluator.
    pub inner_folds: usize,

    pub block_size: usize,
    pub stride: usize,
    /// Gray levels the raw image is reduced to before the wavelet path
    /// (256 keeps pixels untouched).
    pub image_levels: usize,
    pub glcm_levels: usize,
    pub glcm_distance: usize,
    /// Also extract first-level detail features (54 instead of 27).
    pub include_level1: bool,

    pub ga_population: usize,
    pub ga_crossover: f64,
    pub ga_mutation: f64,
    pub ga_penalty_w: f64,
    pub ga_target_size: usize,
    pub ga_generations: usize,
    pub ga_penalty_mode: PenaltyMode,

    pub svm_kernel: String,
    pub svm_gamma: f64,
    pub svm_degree: u32,
    pub svm_coef0: f64,
    pub svm_c: f64,
    pub svm_tol: f64,
    pub svm_max_passes: usize,

    pub bpn_learning_rate: f64,
    pub bpn_momentum: f64,
    pub bpn_target_error: f64,
    pub bpn_max_epochs: usize,
    pub bpn_init_low: f64,
    pub bpn_init_high: f64,

    pub synth_normal: usize,
    pub synth_abnormal: usize,
    pub synth_image_size: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 0,
            domain: Domain::Wavelet,
            classifier: Classifier::Svm,
            selection: Selection::Ga,
            cv: CvChoice::KFold,
            cv_folds: 10,
            inner_folds: 5,
            block_size: 32,
            stride: 32,
            image_levels: 256,
            glcm_levels: 64,
            glcm_distance: 1,
            include_level1: false,
            ga_population: 30,
            ga_crossover: 1.0,
            ga_mutation: 0.1,
            ga_penalty_w: 0.5,
            ga_target_size: 4,
            ga_generations: 100,
            ga_penalty_mode: PenaltyMode::Signed,
            svm_kernel: "gaussian".into(),
            svm_gamma: 1.0,
            svm_degree: 3,
            svm_coef0: 1.0,
            svm_c: 10.0,
            svm_tol: 1e-3,
            svm_max_passes: 20,
            bpn_learning_rate: 0.4,
            bpn_momentum: 0.2,
            bpn_target_error: 0.01,
            bpn_max_epochs: 5000,
            bpn_init_low: -0.5,
            bpn_init_high: 0.5,
            synth_normal: 50,
            synth_abnormal: 50,
            synth_image_size: 128,
        }
    }
}

impl Config {
    /// Overlay `key=value` lines from a file. Blank lines and `#` comments
    /// are skipped; unknown keys are errors so typos stay loud.
    pub fn load_file(&mut self, path: &Path) -> CliResult<()> {
        let text = read_text(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!("expected key=value, found {line:?}"),
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|message| CliError::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    message,
                })?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse::<T>()
                .map_err(|_| format!("bad value {value:?} for {key}"))
        }
        match key {
            "seed" => self.seed = num(key, value)?,
            "domain" => self.domain = value.parse()?,
            "classifier" => self.classifier = value.parse()?,
            "selection" => self.selection = value.parse()?,
            "cv" => self.cv = value.parse()?,
            "cv_folds" => self.cv_folds = num(key, value)?,
            "inner_folds" => self.inner_folds = num(key, value)?,
            "block_size" => self.block_size = num(key, value)?,
            "stride" => self.stride = num(key, value)?,
            "image_levels" => self.image_levels = num(key, value)?,
            "glcm_levels" => self.glcm_levels = num(key, value)?,
            "glcm_distance" => self.glcm_distance = num(key, value)?,
            "include_level1" => self.include_level1 = num(key, value)?,
            "ga_population" => self.ga_population = num(key, value)?,
            "ga_crossover" => self.ga_crossover = num(key, value)?,
            "ga_mutation" => self.ga_mutation = num(key, value)?,
            "ga_penalty_w" => self.ga_penalty_w = num(key, value)?,
            "ga_target_size" => self.ga_target_size = num(key, value)?,
            "ga_generations" => self.ga_generations = num(key, value)?,
            "ga_penalty_mode" => {
                self.ga_penalty_mode = match value {
                    "signed" => PenaltyMode::Signed,
                    "absolute" => PenaltyMode::Absolute,
                    other => return Err(format!("unknown penalty mode {other:?}")),
                }
            }
            "svm_kernel" => {
                if !matches!(value, "linear" | "polynomial" | "gaussian") {
                    return Err(format!("unknown kernel {value:?}"));
                }
                self.svm_kernel = value.to_string();
            }
            "svm_gamma" => self.svm_gamma = num(key, value)?,
            "svm_degree" => self.svm_degree = num(key, value)?,
            "svm_coef0" => self.svm_coef0 = num(key, value)?,
            "svm_c" => self.svm_c = num(key, value)?,
            "svm_tol" => self.svm_tol = num(key, value)?,
            "svm_max_passes" => self.svm_max_passes = num(key, value)?,
            "bpn_learning_rate" => self.bpn_learning_rate = num(key, value)?,
            "bpn_momentum" => self.bpn_momentum = num(key, value)?,
            "bpn_target_error" => self.bpn_target_error = num(key, value)?,
            "bpn_max_epochs" => self.bpn_max_epochs = num(key, value)?,
            "bpn_init_low" => self.bpn_init_low = num(key, value)?,
            "bpn_init_high" => self.bpn_init_high = num(key, value)?,
            "synth_normal" => self.synth_normal = num(key, value)?,
            "synth_abnormal" => self.synth_abnormal = num(key, value)?,
            "synth_image_size" => self.synth_image_size = num(key, value)?,
            other => return Err(format!("unknown configuration key {other:?}")),
        }
        Ok(())
    }

    pub fn block_spec(&self) -> CliResult<BlockSpec> {
        BlockSpec::new(self.block_size, self.stride)
            .map_err(CliError::core("block configuration"))
    }

    pub fn glcm_spec(&self) -> GlcmSpec {
        GlcmSpec {
            distance: self.glcm_distance,
            levels: self.glcm_levels,
            ..GlcmSpec::default()
        }
    }

    pub fn kernel_spec(&self) -> KernelSpec {
        match self.svm_kernel.as_str() {
            "linear" => KernelSpec::Linear,
            "polynomial" => KernelSpec::Polynomial {
                degree: self.svm_degree,
                coef0: self.svm_coef0,
            },
            _ => KernelSpec::Gaussian {
                gamma: self.svm_gamma,
            },
        }
    }

    pub fn svm_config(&self, rng_seed: u64) -> SvmConfig {
        SvmConfig {
            c: self.svm_c,
            tol: self.svm_tol,
            max_passes: self.svm_max_passes,
            rng_seed,
        }
    }

    pub fn bpn_config(&self, rng_seed: u64) -> BpnConfig {
        BpnConfig {
            learning_rate: self.bpn_learning_rate,
            momentum: self.bpn_momentum,
            target_error: self.bpn_target_error,
            max_epochs: self.bpn_max_epochs,
            init_low: self.bpn_init_low,
            init_high: self.bpn_init_high,
            rng_seed,
            ..BpnConfig::default()
        }
    }

    pub fn ga_config(&self, rng_seed: u64) -> GaConfig {
        GaConfig {
            population_size: self.ga_population,
            crossover_prob: self.ga_crossover,
            mutation_rate: self.ga_mutation,
            penalty_w: self.ga_penalty_w,
            target_size: self.ga_target_size,
            generations: self.ga_generations,
            rng_seed,
            penalty_mode: self.ga_penalty_mode,
        }
    }

    /// Deterministic `key=value` rendering of every setting, used both as
    /// the config-echo section of reports and as a writable config file.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        push("seed", self.seed.to_string());
        push("domain", self.domain.name().to_string());
        push("classifier", self.classifier.name().to_string());
        push("selection", self.selection.name());
        push(
            "cv",
            match self.cv {
                CvChoice::KFold => "kfold".into(),
                CvChoice::Loocv => "loocv".into(),
            },
        );
        push("cv_folds", self.cv_folds.to_string());
        push("inner_folds", self.inner_folds.to_string());
        push("block_size", self.block_size.to_string());
        push("stride", self.stride.to_string());
        push("image_levels", self.image_levels.to_string());
        push("glcm_levels", self.glcm_levels.to_string());
        push("glcm_distance", self.glcm_distance.to_string());
        push("include_level1", self.include_level1.to_string());
        push("ga_population", self.ga_population.to_string());
        push("ga_crossover", format!("{}", self.ga_crossover));
        push("ga_mutation", format!("{}", self.ga_mutation));
        push("ga_penalty_w", format!("{}", self.ga_penalty_w));
        push("ga_target_size", self.ga_target_size.to_string());
        push("ga_generations", self.ga_generations.to_string());
        push(
            "ga_penalty_mode",
            match self.ga_penalty_mode {
                PenaltyMode::Signed => "signed".into(),
                PenaltyMode::Absolute => "absolute".into(),
            },
        );
        push("svm_kernel", self.svm_kernel.clone());
        push("svm_gamma", format!("{}", self.svm_gamma));
        push("svm_degree", self.svm_degree.to_string());
        push("svm_coef0", format!("{}", self.svm_coef0));
        push("svm_c", format!("{}", self.svm_c));
        push("svm_tol", format!("{}", self.svm_tol));
        push("svm_max_passes", self.svm_max_passes.to_string());
        push("bpn_learning_rate", format!("{}", self.bpn_learning_rate));
        push("bpn_momentum", format!("{}", self.bpn_momentum));
        push("bpn_target_error", format!("{}", self.bpn_target_error));
        push("bpn_max_epochs", self.bpn_max_epochs.to_string());
        push("bpn_init_low", format!("{}", self.bpn_init_low));
        push("bpn_init_high", format!("{}", self.bpn_init_high));
        push("synth_normal", self.synth_normal.to_string());
        push("synth_abnormal", self.synth_abnormal.to_string());
        push("synth_image_size", self.synth_image_size.to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_echoed_key_parses_back() {
        let config = Config::default();
        let mut other = Config::default();
        other.seed = 1;
        for line in config.echo().lines() {
            let (k, v) = line.split_once('=').unwrap();
            other.set(k, v).unwrap_or_else(|e| panic!("{k}: {e}"));
        }
        assert_eq!(config, other);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut config = Config::default();
        assert!(config.set("no_such_key", "1").is_err());
        assert!(config.set("domain", "sideways").is_err());
        assert!(config.set("selection", "fixed:0;4;8").is_ok());
        assert_eq!(config.selection, Selection::Fixed(vec![0, 4, 8]));
    }
}
