//! Versioned JSON model documents. Besides the trained classifier the file
//! records the whole feature pathway (domain, block tiling, co-occurrence
//! parameters) so `segment` and `roc` rebuild exactly the vectors the model
//! was trained on.

use std::path::Path;

use serde::{Deserialize, Serialize};

use wct_core::bpn::BpnModel;
use wct_core::svm::SvmModel;
use wct_core::texture::GlcmSpec;

use crate::config::{Config, Domain};
use crate::error::{read_text, write_text, CliError, CliResult};
use crate::experiment::TrainedModel;

pub const FORMAT: &str = "wct-model";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StoredModel {
    Svm(SvmModel),
    Bpn(BpnModel),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeaturePathway {
    pub domain: Domain,
    pub block_size: usize,
    pub stride: usize,
    pub image_levels: usize,
    pub include_level1: bool,
    pub glcm: GlcmSpec,
}

impl FeaturePathway {
    pub fn from_config(config: &Config, domain: Domain) -> Self {
        Self {
            domain,
            block_size: config.block_size,
            stride: config.stride,
            image_levels: config.image_levels,
            include_level1: config.include_level1,
            glcm: config.glcm_spec(),
        }
    }

    /// Overlay the pathway back onto a config so extraction code sees the
    /// training-time settings.
    pub fn apply_to(&self, config: &mut Config) {
        config.domain = self.domain;
        config.block_size = self.block_size;
        config.stride = self.stride;
        config.image_levels = self.image_levels;
        config.include_level1 = self.include_level1;
        config.glcm_levels = self.glcm.levels;
        config.glcm_distance = self.glcm.distance;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    pub pathway: FeaturePathway,
    /// Selected feature indices (0-based) and their report names.
    pub selected_features: Vec<usize>,
    pub selected_names: Vec<String>,
    pub model: StoredModel,
}

impl ModelFile {
    pub fn new(
        model: TrainedModel,
        config: &Config,
        domain: Domain,
        selected: Vec<usize>,
        names: Vec<String>,
    ) -> Self {
        let stored = match model {
            TrainedModel::Svm(m) => StoredModel::Svm(m),
            TrainedModel::Bpn(m) => StoredModel::Bpn(m),
        };
        Self {
            format: FORMAT.to_string(),
            version: VERSION,
            seed: config.seed,
            pathway: FeaturePathway::from_config(config, domain),
            selected_features: selected,
            selected_names: names,
            model: stored,
        }
    }

    pub fn trained(&self) -> TrainedModel {
        match &self.model {
            StoredModel::Svm(m) => TrainedModel::Svm(m.clone()),
            StoredModel::Bpn(m) => TrainedModel::Bpn(m.clone()),
        }
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let json = serde_json::to_string_pretty(self).map_err(|e| CliError::Data(e.to_string()))?;
        write_text(path, &json)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        let file: ModelFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?;
        if file.format != FORMAT {
            return Err(CliError::Data(format!(
                "{} is not a {FORMAT} document (format {:?})",
                path.display(),
                file.format
            )));
        }
        if file.version != VERSION {
            return Err(CliError::Data(format!(
                "{}: unsupported model version {} (expected {VERSION})",
                path.display(),
                file.version
            )));
        }
        Ok(file)
    }
}
