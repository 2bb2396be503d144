//! Synthetic ground-truth corpus: smooth low-frequency "normal" images and
//! "abnormal" counterparts carrying one block-aligned high-frequency,
//! high-variance texture patch. Patch rectangles are written alongside the
//! manifest so segmentation can be scored against construction truth.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wct_core::imaging::{write_pgm, GrayImage};

use crate::config::Config;
use crate::error::{read_text, write_bytes, write_text, CliError, CliResult};
use crate::manifest::{Label, Manifest, ManifestEntry};
use crate::seeds;

/// Pixel rectangle; `x` is the column of the left edge, `y` the row of the
/// top edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        col >= self.x && col < self.x + self.width && row >= self.y && row < self.y + self.height
    }
}

/// Deterministically generate image `index` of the corpus. The base field
/// consumes the generator stream first, so an abnormal image differs from
/// its would-be normal counterpart only inside the returned rectangle.
pub fn generate_image(
    root_seed: u64,
    index: u64,
    abnormal: bool,
    size: usize,
    block: usize,
) -> (GrayImage, Option<Rect>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(root_seed, "synth", &[index]));

    // Three low-frequency sinusoids: periods no shorter than 1.5 blocks so
    // second-level detail subbands stay quiet.
    let mut components = Vec::with_capacity(3);
    for _ in 0..3 {
        let amplitude = 8.0 + rng.random::<f64>() * 10.0;
        let period_r = 48.0 + rng.random::<f64>() * 80.0;
        let period_c = 48.0 + rng.random::<f64>() * 80.0;
        let phase = rng.random::<f64>() * core::f64::consts::TAU;
        components.push((amplitude, period_r, period_c, phase));
    }
    let mut field = vec![0.0f64; size * size];
    for r in 0..size {
        for c in 0..size {
            let mut v = 128.0;
            for &(a, pr, pc, phase) in &components {
                v += a * (core::f64::consts::TAU * (r as f64 / pr + c as f64 / pc) + phase).sin();
            }
            field[r * size + c] = v;
        }
    }
    // Mild wide-band noise so no subband is ever exactly constant.
    for v in &mut field {
        *v += rng.random::<f64>() * 4.0 - 2.0;
    }

    let rect = if abnormal {
        let cells = size / block;
        let gx = rng.random_range(0..=cells - 2);
        let gy = rng.random_range(0..=cells - 2);
        let rect = Rect {
            x: gx * block,
            y: gy * block,
            width: 2 * block,
            height: 2 * block,
        };
        // Checkerboard of 4-pixel squares plus stronger noise: most of its
        // energy lands in the second-level detail bands, and its bimodal
        // profile survives the per-subband min-max quantization.
        let amplitude = 50.0 + rng.random::<f64>() * 15.0;
        for r in rect.y..rect.y + rect.height {
            for c in rect.x..rect.x + rect.width {
                let checker = if ((r / 4) + (c / 4)) % 2 == 0 { 1.0 } else { -1.0 };
                field[r * size + c] += checker * amplitude + (rng.random::<f64>() * 20.0 - 10.0);
            }
        }
        Some(rect)
    } else {
        None
    };

    let pixels = field
        .iter()
        .map(|&v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    (
        GrayImage::new(size, size, pixels).expect("generator produces a full raster"),
        rect,
    )
}

/// Generate the corpus under `out_dir`: PGM files, `manifest.csv`, and
/// `truth.csv` (one `id,x,y,width,height` row per abnormal image).
pub fn synth_dataset(out_dir: &Path, config: &Config) -> CliResult<PathBuf> {
    let size = config.synth_image_size;
    let block = config.block_size;
    if config.synth_normal == 0 || config.synth_abnormal == 0 {
        return Err(CliError::Usage(
            "synth needs at least one image of each class".into(),
        ));
    }
    if block < 4 || size % block != 0 || size / block < 2 {
        return Err(CliError::Usage(format!(
            "synth_image_size {size} must be a multiple of block_size {block} with at least two blocks per side"
        )));
    }

    let mut entries = Vec::new();
    let mut truth = String::from("id,x,y,width,height\n");
    let mut index = 0u64;
    for (label, count) in [
        (Label::Normal, config.synth_normal),
        (Label::Abnormal, config.synth_abnormal),
    ] {
        for k in 0..count {
            let (img, rect) = generate_image(
                config.seed,
                index,
                label == Label::Abnormal,
                size,
                block,
            );
            let id = format!("{}_{k:03}", label.name());
            let file = out_dir.join(format!("{id}.pgm"));
            write_bytes(&file, &write_pgm(&img))?;
            if let Some(rect) = rect {
                truth.push_str(&format!(
                    "{id},{},{},{},{}\n",
                    rect.x, rect.y, rect.width, rect.height
                ));
            }
            entries.push(ManifestEntry {
                path: file,
                label,
                id,
            });
            index += 1;
        }
    }

    write_text(&out_dir.join("truth.csv"), &truth)?;
    let manifest_path = out_dir.join("manifest.csv");
    Manifest::new(entries)?.save(&manifest_path)?;
    Ok(manifest_path)
}

/// Read the truth table written by [`synth_dataset`].
pub fn load_truth(path: &Path) -> CliResult<Vec<(String, Rect)>> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || (lineno == 0 && line == "id,x,y,width,height") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let err = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            message,
        };
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let nums: Vec<usize> = fields[1..]
            .iter()
            .map(|f| f.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| err(format!("bad number: {e}")))?;
        out.push((
            fields[0].to_string(),
            Rect {
                x: nums[0],
                y: nums[1],
                width: nums[2],
                height: nums[3],
            },
        ));
    }
    Ok(out)
}
