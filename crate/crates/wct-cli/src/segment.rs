//! Block-level abnormal-region marking: classify every block of an image
//! with a trained model and render the grid as a mask plus an overlay with
//! abnormal blocks outlined at intensity 255.

use wct_core::imaging::{block_grid, extract_blocks, BlockSpec, GrayImage};

use crate::config::Config;
use crate::dataset::requantize;
use crate::error::{CliError, CliResult};
use crate::experiment::TrainedModel;
use crate::model_file::ModelFile;

/// Per-block ±1 labels on the tiling grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub labels: Vec<i8>,
    pub block_size: usize,
    pub stride: usize,
    pub image_width: usize,
    pub image_height: usize,
}

impl RegionMask {
    pub fn label(&self, grid_row: usize, grid_col: usize) -> i8 {
        self.labels[grid_row * self.grid_cols + grid_col]
    }

    pub fn abnormal_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    /// One pixel per block: 255 abnormal, 0 normal.
    pub fn to_pgm_grid(&self) -> GrayImage {
        let pixels = self
            .labels
            .iter()
            .map(|&l| if l == 1 { 255 } else { 0 })
            .collect();
        GrayImage::new(self.grid_cols, self.grid_rows, pixels)
            .expect("grid dimensions match labels")
    }
}

/// Classify every block (top-left tiling) of `img` with the stored model.
pub fn segment_image(img: &GrayImage, file: &ModelFile) -> CliResult<(RegionMask, GrayImage)> {
    let mut config = Config::default();
    file.pathway.apply_to(&mut config);
    let spec = BlockSpec::new(config.block_size, config.stride)
        .map_err(CliError::core("model block spec"))?;

    let prepared = match file.pathway.domain {
        crate::config::Domain::Wavelet => requantize(img, config.image_levels)?,
        crate::config::Domain::Graylevel => img.clone(),
    };
    let (grid_rows, grid_cols) =
        block_grid(&prepared, &spec).map_err(CliError::core("segmentation tiling"))?;
    let blocks = extract_blocks(&prepared, &spec).map_err(CliError::core("segmentation tiling"))?;

    let model = file.trained();
    let mut labels = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let v = crate::dataset::block_feature_vector(block, file.pathway.domain, &config)?;
        let (label, _) = match &model {
            TrainedModel::Svm(m) => {
                let d = m.decision_value(&v).map_err(CliError::core("block scoring"))?;
                (if d >= 0.0 { 1 } else { -1 }, d)
            }
            TrainedModel::Bpn(m) => m.predict(&v).map_err(CliError::core("block scoring"))?,
        };
        labels.push(label);
    }

    let mask = RegionMask {
        grid_rows,
        grid_cols,
        labels,
        block_size: spec.block_size,
        stride: spec.stride,
        image_width: img.width(),
        image_height: img.height(),
    };
    let overlay = draw_overlay(img, &mask);
    Ok((mask, overlay))
}

/// Copy of the image with a bright one-pixel frame around every abnormal
/// block.
fn draw_overlay(img: &GrayImage, mask: &RegionMask) -> GrayImage {
    let mut pixels = img.pixels().to_vec();
    let w = img.width();
    let b = mask.block_size;
    for gr in 0..mask.grid_rows {
        for gc in 0..mask.grid_cols {
            if mask.label(gr, gc) != 1 {
                continue;
            }
            let (top, left) = (gr * mask.stride, gc * mask.stride);
            for c in left..left + b {
                pixels[top * w + c] = 255;
                pixels[(top + b - 1) * w + c] = 255;
            }
            for r in top..top + b {
                pixels[r * w + left] = 255;
                pixels[r * w + left + b - 1] = 255;
            }
        }
    }
    GrayImage::new(img.width(), img.height(), pixels).expect("overlay keeps dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_pgm_matches_mask_layout() {
        let mask = RegionMask {
            grid_rows: 2,
            grid_cols: 3,
            labels: vec![-1, 1, -1, 1, -1, -1],
            block_size: 4,
            stride: 4,
            image_width: 12,
            image_height: 8,
        };
        let pgm = mask.to_pgm_grid();
        assert_eq!((pgm.width(), pgm.height()), (3, 2));
        assert_eq!(pgm.pixels(), &[0, 255, 0, 255, 0, 0]);
        assert_eq!(mask.abnormal_count(), 2);
    }

    #[test]
    fn overlay_outlines_abnormal_blocks() {
        let img = GrayImage::new(8, 8, vec![7; 64]).unwrap();
        let mask = RegionMask {
            grid_rows: 2,
            grid_cols: 2,
            labels: vec![1, -1, -1, -1],
            block_size: 4,
            stride: 4,
            image_width: 8,
            image_height: 8,
        };
        let overlay = draw_overlay(&img, &mask);
        assert_eq!(overlay.pixel(0, 0), 255);
        assert_eq!(overlay.pixel(3, 3), 255);
        assert_eq!(overlay.pixel(1, 1), 7);
        assert_eq!(overlay.pixel(4, 4), 7);
    }
}
