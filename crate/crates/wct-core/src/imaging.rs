//! Grayscale rasters, gray-level quantization, and block tiling.
//!
//! Images enter the pipeline as 8-bit PGM (P2 ASCII or P5 binary) and are
//! cut into square sub-image blocks starting from the top left corner.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config(String::from("image dimensions must be > 0")));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Copy out the `w`×`h` sub-rectangle with top-left corner at (`row`, `col`).
    pub fn crop(&self, row: usize, col: usize, w: usize, h: usize) -> Result<GrayImage> {
        if row + h > self.height || col + w > self.width {
            return Err(Error::BlockTooLarge {
                block: w.max(h),
                width: self.width,
                height: self.height,
            });
        }
        let mut pixels = Vec::with_capacity(w * h);
        for r in row..row + h {
            let start = r * self.width + col;
            pixels.extend_from_slice(&self.pixels[start..start + w]);
        }
        GrayImage::new(w, h, pixels)
    }
}

/// Raster reduced to `levels` discrete gray levels; values in `0..levels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedImage {
    width: usize,
    height: usize,
    levels: usize,
    values: Vec<u16>,
}

impl QuantizedImage {
    pub fn new(width: usize, height: usize, levels: usize, values: Vec<u16>) -> Result<Self> {
        if levels < 2 {
            return Err(Error::Config(String::from("levels must be at least 2")));
        }
        if values.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|&&v| v as usize >= levels) {
            return Err(Error::Config(alloc::format!(
                "value {v} not below levels {levels}"
            )));
        }
        Ok(Self {
            width,
            height,
            levels,
            values,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> u16 {
        self.values[row * self.width + col]
    }
}

/// Square tiling parameters for block extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub block_size: usize,
    pub stride: usize,
}

impl BlockSpec {
    pub fn new(block_size: usize, stride: usize) -> Result<Self> {
        if block_size == 0 || stride == 0 {
            return Err(Error::Config(String::from(
                "block_size and stride must be >= 1",
            )));
        }
        Ok(Self { block_size, stride })
    }

    /// Wavelet-path requirement: two decomposition levels need a multiple
    /// of 4, at least 4.
    pub fn validate_for_wavelet(&self) -> Result<()> {
        if self.block_size < 4 || self.block_size % 4 != 0 {
            return Err(Error::NotDivisible {
                context: "block_size",
                size: self.block_size,
                required: 4,
            });
        }
        Ok(())
    }
}

impl Default for BlockSpec {
    fn default() -> Self {
        Self {
            block_size: 32,
            stride: 32,
        }
    }
}

/// Reduce to `levels` gray levels by uniform binning `floor(p * levels / 256)`.
pub fn quantize(img: &GrayImage, levels: usize) -> Result<QuantizedImage> {
    if !(2..=256).contains(&levels) {
        return Err(Error::Config(alloc::format!(
            "quantization levels {levels} outside 2..=256"
        )));
    }
    let values = img
        .pixels
        .iter()
        .map(|&p| ((p as usize * levels) / 256) as u16)
        .collect();
    QuantizedImage::new(img.width, img.height, levels, values)
}

/// Cut square blocks row-major from the top-left corner; each block is an
/// owned copy. Positions are every `stride` pixels where the block fits
/// entirely inside the image.
pub fn extract_blocks(img: &GrayImage, spec: &BlockSpec) -> Result<Vec<GrayImage>> {
    let b = spec.block_size;
    if b > img.width || b > img.height {
        return Err(Error::BlockTooLarge {
            block: b,
            width: img.width,
            height: img.height,
        });
    }
    let rows = (img.height - b) / spec.stride + 1;
    let cols = (img.width - b) / spec.stride + 1;
    let mut blocks = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            blocks.push(img.crop(r * spec.stride, c * spec.stride, b, b)?);
        }
    }
    Ok(blocks)
}

/// Number of block positions per axis: `(rows, cols)` of the tiling grid.
pub fn block_grid(img: &GrayImage, spec: &BlockSpec) -> Result<(usize, usize)> {
    let b = spec.block_size;
    if b > img.width || b > img.height {
        return Err(Error::BlockTooLarge {
            block: b,
            width: img.width,
            height: img.height,
        });
    }
    Ok((
        (img.height - b) / spec.stride + 1,
        (img.width - b) / spec.stride + 1,
    ))
}

/// PGM codec failure; offsets are byte positions into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("not a PGM: expected magic P2 or P5 at byte 0")]
    BadMagic,
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: &'static str },
    #[error("maxval {maxval} at byte {offset} exceeds 255")]
    MaxvalTooLarge { maxval: u32, offset: usize },
    #[error("truncated payload at byte {offset}: expected {expected} pixels, found {found}")]
    TruncatedPayload {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("pixel value {value} at byte {offset} exceeds maxval {maxval}")]
    ValueOutOfRange {
        value: u32,
        offset: usize,
        maxval: u32,
    },
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn read_uint(&mut self, what: &'static str) -> core::result::Result<(u32, usize), PgmError> {
        self.skip_separators();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Err(PgmError::MalformedHeader {
                offset: start,
                reason: what,
            });
        }
        let mut value: u32 = 0;
        let mut digits = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            value = value
                .saturating_mul(10)
                .saturating_add((self.bytes[self.pos] - b'0') as u32);
            digits += 1;
            self.pos += 1;
        }
        if digits == 0 {
            return Err(PgmError::MalformedHeader {
                offset: start,
                reason: what,
            });
        }
        Ok((value, start))
    }
}

/// Parse a P2 (ASCII) or P5 (binary) PGM with maxval up to 255.
///
/// Pixel values are returned exactly as stored; the two encodings of the
/// same raster decode to the same image.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let binary = match bytes.get(0..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(PgmError::BadMagic.into()),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let (width, woff) = cur.read_uint("expected width")?;
    if width == 0 {
        return Err(PgmError::MalformedHeader {
            offset: woff,
            reason: "width must be > 0",
        }
        .into());
    }
    let (height, hoff) = cur.read_uint("expected height")?;
    if height == 0 {
        return Err(PgmError::MalformedHeader {
            offset: hoff,
            reason: "height must be > 0",
        }
        .into());
    }
    let (maxval, moff) = cur.read_uint("expected maxval")?;
    if maxval == 0 {
        return Err(PgmError::MalformedHeader {
            offset: moff,
            reason: "maxval must be > 0",
        }
        .into());
    }
    if maxval > 255 {
        return Err(PgmError::MaxvalTooLarge {
            maxval,
            offset: moff,
        }
        .into());
    }

    let count = width as usize * height as usize;
    let pixels = if binary {
        // Exactly one separator byte between maxval and the raster.
        if cur.pos >= bytes.len() || !matches!(bytes[cur.pos], b' ' | b'\t' | b'\r' | b'\n') {
            return Err(PgmError::MalformedHeader {
                offset: cur.pos,
                reason: "expected single whitespace before binary raster",
            }
            .into());
        }
        let start = cur.pos + 1;
        let available = bytes.len().saturating_sub(start);
        if available < count {
            return Err(PgmError::TruncatedPayload {
                offset: bytes.len(),
                expected: count,
                found: available,
            }
            .into());
        }
        let raster = &bytes[start..start + count];
        if let Some(i) = raster.iter().position(|&v| v as u32 > maxval) {
            return Err(PgmError::ValueOutOfRange {
                value: raster[i] as u32,
                offset: start + i,
                maxval,
            }
            .into());
        }
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for i in 0..count {
            cur.skip_separators();
            if cur.pos >= bytes.len() {
                return Err(PgmError::TruncatedPayload {
                    offset: bytes.len(),
                    expected: count,
                    found: i,
                }
                .into());
            }
            let (value, off) = cur.read_uint("expected pixel value")?;
            if value > maxval {
                return Err(PgmError::ValueOutOfRange {
                    value,
                    offset: off,
                    maxval,
                }
                .into());
            }
            pixels.push(value as u8);
        }
        pixels
    };
    GrayImage::new(width as usize, height as usize, pixels)
}

/// Encode as binary P5 with maxval 255.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = alloc::format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(body: &str) -> Vec<u8> {
        body.as_bytes().to_vec()
    }

    #[test]
    fn p2_and_p5_decode_identically() {
        let ascii = p2("P2\n2 2\n255\n0 128 255 64\n");
        let mut binary = b"P5\n2 2\n255\n".to_vec();
        binary.extend_from_slice(&[0, 128, 255, 64]);
        let a = load_pgm(&ascii).unwrap();
        let b = load_pgm(&binary).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pixels(), &[0, 128, 255, 64]);
        assert_eq!((a.width(), a.height()), (2, 2));
    }

    #[test]
    fn comments_are_skipped() {
        let img = load_pgm(&p2("P2 # magic\n# a comment line\n2 1 # dims\n255\n7 9\n")).unwrap();
        assert_eq!(img.pixels(), &[7, 9]);
    }

    #[test]
    fn truncated_ascii_payload_is_reported() {
        let err = load_pgm(&p2("P2\n3 3\n255\n0 1 2 3 4 5 6 7\n")).unwrap_err();
        match err {
            Error::Pgm(PgmError::TruncatedPayload {
                expected, found, ..
            }) => {
                assert_eq!(expected, 9);
                assert_eq!(found, 8);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn truncated_binary_payload_is_reported() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        let err = load_pgm(&bytes).unwrap_err();
        assert!(matches!(
            err,
            Error::Pgm(PgmError::TruncatedPayload {
                expected: 4,
                found: 3,
                ..
            })
        ));
    }

    #[test]
    fn maxval_over_255_is_rejected_with_offset() {
        let err = load_pgm(&p2("P2\n1 1\n65535\n0\n")).unwrap_err();
        match err {
            Error::Pgm(PgmError::MaxvalTooLarge { maxval, offset }) => {
                assert_eq!(maxval, 65535);
                assert_eq!(offset, 7);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_magic_is_rejected() {
        assert!(matches!(
            load_pgm(b"P6\n1 1\n255\n0"),
            Err(Error::Pgm(PgmError::BadMagic))
        ));
    }

    #[test]
    fn ascii_value_above_maxval_is_rejected() {
        let err = load_pgm(&p2("P2\n2 1\n100\n50 101\n")).unwrap_err();
        assert!(matches!(
            err,
            Error::Pgm(PgmError::ValueOutOfRange { value: 101, .. })
        ));
    }

    #[test]
    fn write_then_load_round_trips() {
        let img = GrayImage::new(3, 2, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(load_pgm(&write_pgm(&img)).unwrap(), img);
    }

    #[test]
    fn quantize_matches_floor_rule() {
        let img = GrayImage::new(3, 1, vec![255, 0, 128]).unwrap();
        let q = quantize(&img, 8).unwrap();
        assert_eq!(q.values(), &[7, 0, 4]);
        let identity = quantize(&img, 256).unwrap();
        assert_eq!(identity.values(), &[255, 0, 128]);
    }

    #[test]
    fn quantize_rejects_bad_levels() {
        let img = GrayImage::new(1, 1, vec![0]).unwrap();
        assert!(quantize(&img, 1).is_err());
        assert!(quantize(&img, 257).is_err());
    }

    #[test]
    fn quantize_is_monotone() {
        let img = GrayImage::new(256, 1, (0..=255).collect()).unwrap();
        for levels in [2, 3, 8, 64, 255, 256] {
            let q = quantize(&img, levels).unwrap();
            for w in q.values().windows(2) {
                assert!(w[0] <= w[1], "levels {levels}: {} > {}", w[0], w[1]);
            }
            assert_eq!(*q.values().last().unwrap() as usize, levels - 1);
        }
    }

    #[test]
    fn extract_blocks_covers_exact_grid() {
        let img = GrayImage::new(4, 4, (0..16).collect()).unwrap();
        let spec = BlockSpec::new(2, 2).unwrap();
        let blocks = extract_blocks(&img, &spec).unwrap();
        assert_eq!(blocks.len(), 4);
        assert_eq!(blocks[0].pixels(), &[0, 1, 4, 5]);
        assert_eq!(blocks[3].pixels(), &[10, 11, 14, 15]);
    }

    #[test]
    fn extract_blocks_drops_remainder() {
        let img = GrayImage::new(5, 5, (0..25).map(|v| v as u8).collect()).unwrap();
        let spec = BlockSpec::new(2, 2).unwrap();
        assert_eq!(extract_blocks(&img, &spec).unwrap().len(), 4);
    }

    #[test]
    fn oversized_block_errors() {
        let img = GrayImage::new(4, 4, vec![0; 16]).unwrap();
        let spec = BlockSpec::new(8, 8).unwrap();
        assert!(matches!(
            extract_blocks(&img, &spec),
            Err(Error::BlockTooLarge { block: 8, .. })
        ));
    }

    #[test]
    fn block_concatenation_reconstructs_image() {
        let img = GrayImage::new(6, 4, (0..24).map(|v| v as u8).collect()).unwrap();
        let spec = BlockSpec::new(2, 2).unwrap();
        let blocks = extract_blocks(&img, &spec).unwrap();
        let (rows, cols) = block_grid(&img, &spec).unwrap();
        let mut rebuilt = vec![0u8; 24];
        for (k, block) in blocks.iter().enumerate() {
            let (gr, gc) = (k / cols, k % cols);
            for r in 0..2 {
                for c in 0..2 {
                    rebuilt[(gr * 2 + r) * 6 + gc * 2 + c] = block.pixel(r, c);
                }
            }
        }
        assert_eq!(rows * cols, blocks.len());
        assert_eq!(rebuilt, img.pixels());
    }
}
