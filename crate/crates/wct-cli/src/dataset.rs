//! Feature extraction over manifests: block tiling, per-block texture
//! vectors, and the per-image aggregate (mean vector over the largest
//! centered tiling) that the cross-validated experiments consume.
//! Feature tables round-trip through CSV with full-precision floats.

use std::path::Path;

use wct_core::features::LabeledDataset;
use wct_core::imaging::{extract_blocks, load_pgm, quantize, BlockSpec, GrayImage};
use wct_core::texture::{self, FEATURE_NAMES};

use crate::config::{Config, Domain};
use crate::error::{read_bytes, read_text, write_text, CliError, CliResult};
use crate::manifest::{Label, Manifest};

/// Reduce an image to `levels` gray values (identity at 256); the wavelet
/// path runs on these reduced intensities.
pub fn requantize(img: &GrayImage, levels: usize) -> CliResult<GrayImage> {
    if levels == 256 {
        return Ok(img.clone());
    }
    let q = quantize(img, levels).map_err(CliError::core("image quantization"))?;
    let pixels = q.values().iter().map(|&v| v as u8).collect();
    GrayImage::new(img.width(), img.height(), pixels).map_err(CliError::core("image quantization"))
}

/// Largest tiling of full blocks, centered: the crop every per-image
/// aggregate is computed over.
pub fn centered_tiling(img: &GrayImage, spec: &BlockSpec) -> CliResult<GrayImage> {
    let b = spec.block_size;
    let s = spec.stride;
    if b > img.width() || b > img.height() {
        return Err(CliError::Data(format!(
            "block size {b} exceeds image {}x{}",
            img.width(),
            img.height()
        )));
    }
    let span = |extent: usize| ((extent - b) / s) * s + b;
    let (w, h) = (span(img.width()), span(img.height()));
    let (x0, y0) = ((img.width() - w) / 2, (img.height() - h) / 2);
    img.crop(y0, x0, w, h)
        .map_err(CliError::core("centered tiling"))
}

/// Texture features of one block in the given domain.
pub fn block_feature_vector(
    block: &GrayImage,
    domain: Domain,
    config: &Config,
) -> CliResult<Vec<f64>> {
    let glcm = config.glcm_spec();
    match domain {
        Domain::Wavelet => {
            texture::extract_wct_levels(block, &glcm, config.include_level1)
                .map_err(CliError::core("wavelet feature extraction"))
        }
        Domain::Graylevel => {
            texture::extract_gray(block, &glcm).map_err(CliError::core("gray feature extraction"))
        }
    }
}

/// Feature width for a domain under this configuration.
pub fn feature_dim(domain: Domain, config: &Config) -> usize {
    match domain {
        Domain::Wavelet => {
            if config.include_level1 {
                54
            } else {
                27
            }
        }
        Domain::Graylevel => 9,
    }
}

/// Human-readable feature name for reports (Table-style short names,
/// prefixed by subband in the wavelet domain).
pub fn feature_label(domain: Domain, config: &Config, index: usize) -> String {
    match domain {
        Domain::Graylevel => FEATURE_NAMES[index % 9].to_string(),
        Domain::Wavelet => {
            let bands: &[&str] = if config.include_level1 {
                &["H1", "V1", "D1", "H2", "V2", "D2"]
            } else {
                &["H2", "V2", "D2"]
            };
            format!("{}.{}", bands[index / 9], FEATURE_NAMES[index % 9])
        }
    }
}

fn prepare_for_domain(img: &GrayImage, domain: Domain, config: &Config) -> CliResult<GrayImage> {
    match domain {
        Domain::Wavelet => requantize(img, config.image_levels),
        Domain::Graylevel => Ok(img.clone()),
    }
}

fn validate_block_spec(domain: Domain, config: &Config) -> CliResult<BlockSpec> {
    let spec = config.block_spec()?;
    if domain == Domain::Wavelet {
        spec.validate_for_wavelet()
            .map_err(CliError::core("block configuration"))?;
    }
    Ok(spec)
}

/// Per-block feature rows for one image, top-left tiling order. Ids are
/// `r{row}c{col}` grid positions.
pub fn block_rows(
    img: &GrayImage,
    domain: Domain,
    config: &Config,
) -> CliResult<Vec<(String, Vec<f64>)>> {
    let spec = validate_block_spec(domain, config)?;
    let prepared = prepare_for_domain(img, domain, config)?;
    let blocks =
        extract_blocks(&prepared, &spec).map_err(CliError::core("block extraction"))?;
    let (_, cols) = wct_core::imaging::block_grid(&prepared, &spec)
        .map_err(CliError::core("block extraction"))?;
    let mut rows = Vec::with_capacity(blocks.len());
    for (k, block) in blocks.iter().enumerate() {
        let v = block_feature_vector(block, domain, config)?;
        rows.push((format!("r{}c{}", k / cols, k % cols), v));
    }
    Ok(rows)
}

/// Per-image vector: mean of the per-block vectors over the largest
/// centered tiling.
pub fn image_vector(img: &GrayImage, domain: Domain, config: &Config) -> CliResult<Vec<f64>> {
    let spec = validate_block_spec(domain, config)?;
    let prepared = prepare_for_domain(img, domain, config)?;
    let cropped = centered_tiling(&prepared, &spec)?;
    let blocks = extract_blocks(&cropped, &spec).map_err(CliError::core("block extraction"))?;
    let mut mean = vec![0.0f64; feature_dim(domain, config)];
    for block in &blocks {
        let v = block_feature_vector(block, domain, config)?;
        for (m, x) in mean.iter_mut().zip(&v) {
            *m += x;
        }
    }
    let n = blocks.len() as f64;
    for m in &mut mean {
        *m /= n;
    }
    Ok(mean)
}

pub fn load_image(path: &Path) -> CliResult<GrayImage> {
    let bytes = read_bytes(path)?;
    load_pgm(&bytes).map_err(|source| CliError::Core {
        context: format!("loading {}", path.display()),
        source,
    })
}

/// Extract the labeled per-image dataset for a whole manifest.
pub fn extract_dataset(
    manifest: &Manifest,
    domain: Domain,
    config: &Config,
) -> CliResult<LabeledDataset> {
    let mut vectors = Vec::with_capacity(manifest.entries.len());
    let mut labels = Vec::with_capacity(manifest.entries.len());
    let mut ids = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        let img = load_image(&entry.path)?;
        let v = image_vector(&img, domain, config).map_err(|e| match e {
            CliError::Core { context, source } => CliError::Core {
                context: format!("{} ({context})", entry.id),
                source,
            },
            other => other,
        })?;
        vectors.push(v);
        labels.push(entry.label.sign());
        ids.push(entry.id.clone());
    }
    LabeledDataset::new(vectors, labels, ids).map_err(CliError::core("assembling dataset"))
}

/// Full-precision float rendering used by every emitted table: 17
/// significant digits round-trip f64 exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a feature table: `block_id,label,f00..` with one row per case.
pub fn write_feature_csv(path: &Path, data: &LabeledDataset) -> CliResult<()> {
    let dim = data.dim();
    let mut out = String::from("block_id,label");
    for k in 0..dim {
        out.push_str(&format!(",f{k:02}"));
    }
    out.push('\n');
    for i in 0..data.len() {
        let label = if data.labels()[i] == 1 {
            Label::Abnormal
        } else {
            Label::Normal
        };
        out.push_str(&format!("{},{}", data.ids()[i], label.name()));
        for v in &data.vectors()[i] {
            out.push(',');
            out.push_str(&format_float(*v));
        }
        out.push('\n');
    }
    write_text(path, &out)
}

/// Read a feature table written by [`write_feature_csv`].
pub fn read_feature_csv(path: &Path) -> CliResult<LabeledDataset> {
    let text = read_text(path)?;
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    let mut ids = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            message,
        };
        if line.is_empty() {
            continue;
        }
        if lineno == 0 {
            if !line.starts_with("block_id,label") {
                return Err(err("expected a block_id,label,f00.. header".into()));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 3 {
            return Err(err("expected block_id,label and features".into()));
        }
        let label = match fields[1] {
            "normal" => -1i8,
            "abnormal" => 1,
            other => return Err(err(format!("unknown label {other:?}"))),
        };
        let values = fields[2..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| err(format!("bad float: {e}")))?;
        ids.push(fields[0].to_string());
        labels.push(label);
        vectors.push(values);
    }
    if vectors.is_empty() {
        return Err(CliError::Data(format!(
            "feature table {} has no rows",
            path.display()
        )));
    }
    LabeledDataset::new(vectors, labels, ids).map_err(CliError::core("feature table"))
}
