//! Two-level 2-D discrete wavelet decomposition with the Daubechies order-2
//! filter pair, plus the inverse transform used for verification.
//!
//! Boundary handling is periodic (circular), which keeps the transform
//! orthonormal: reconstruction and Parseval energy checks hold to machine
//! precision. Analysis correlates the signal with the filters and keeps
//! even-indexed outputs; synthesis is the exact adjoint.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::imaging::GrayImage;
use crate::math;

/// Rectangular grid of real coefficients, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Subband {
    rows: usize,
    cols: usize,
    coeffs: Vec<f64>,
}

impl Subband {
    pub fn new(rows: usize, cols: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: coeffs.len(),
            });
        }
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("subband coefficients"));
        }
        Ok(Self { rows, cols, coeffs })
    }

    pub fn from_image(img: &GrayImage) -> Self {
        Self {
            rows: img.height(),
            cols: img.width(),
            coeffs: img.pixels().iter().map(|&p| p as f64).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.coeffs[row * self.cols + col]
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.coeffs[r * self.cols..(r + 1) * self.cols]
    }

    fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|v| v * v).sum()
    }

    /// Coefficient variance, the statistic used to pick the most textured
    /// detail band for reporting.
    pub fn variance(&self) -> f64 {
        let n = self.coeffs.len() as f64;
        let mean = self.coeffs.iter().sum::<f64>() / n;
        self.coeffs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
    }
}

/// One decomposition level: approximation plus the three detail orientations.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionLevel {
    pub approx: Subband,
    pub horizontal: Subband,
    pub vertical: Subband,
    pub diagonal: Subband,
}

impl DecompositionLevel {
    pub fn details(&self) -> [&Subband; 3] {
        [&self.horizontal, &self.vertical, &self.diagonal]
    }
}

/// Detail orientation labels in the fixed feature-vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetailBand {
    Horizontal,
    Vertical,
    Diagonal,
}

impl DetailBand {
    pub const ALL: [DetailBand; 3] = [
        DetailBand::Horizontal,
        DetailBand::Vertical,
        DetailBand::Diagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DetailBand::Horizontal => "H",
            DetailBand::Vertical => "V",
            DetailBand::Diagonal => "D",
        }
    }
}

/// Multi-level decomposition; `levels()[0]` is the first (finest) level.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    levels: Vec<DecompositionLevel>,
}

impl WaveletPyramid {
    pub fn levels(&self) -> &[DecompositionLevel] {
        &self.levels
    }

    pub fn deepest(&self) -> &DecompositionLevel {
        self.levels.last().expect("pyramid has at least one level")
    }
}

/// Daubechies order-2 analysis filters: `(lowpass, highpass)`.
///
/// The highpass is the quadrature mirror `g[k] = (-1)^k h[3-k]`.
pub fn db2_filters() -> ([f64; 4], [f64; 4]) {
    let s3 = math::sqrt(3.0);
    let norm = 4.0 * math::sqrt(2.0);
    let h = [
        (1.0 + s3) / norm,
        (3.0 + s3) / norm,
        (3.0 - s3) / norm,
        (1.0 - s3) / norm,
    ];
    let g = [h[3], -h[2], h[1], -h[0]];
    (h, g)
}

fn check_signal(context: &'static str, len: usize) -> Result<()> {
    if len < 4 || len % 2 != 0 {
        return Err(Error::BadSignalLength { context, len });
    }
    Ok(())
}

/// One level of the periodic 1-D transform: `(approx, detail)`, each half
/// the input length.
pub fn dwt1d(signal: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_signal("dwt1d", signal.len())?;
    let (h, g) = db2_filters();
    let n = signal.len();
    let half = n / 2;
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    for i in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for k in 0..4 {
            let x = signal[(2 * i + k) % n];
            a += h[k] * x;
            d += g[k] * x;
        }
        approx.push(a);
        detail.push(d);
    }
    Ok((approx, detail))
}

/// Inverse of [`dwt1d`]: the adjoint scatter of the analysis correlation.
pub fn idwt1d(approx: &[f64], detail: &[f64]) -> Result<Vec<f64>> {
    if approx.len() != detail.len() {
        return Err(Error::DimensionMismatch {
            expected: approx.len(),
            actual: detail.len(),
        });
    }
    let n = approx.len() * 2;
    check_signal("idwt1d", n)?;
    let (h, g) = db2_filters();
    let mut signal = vec![0.0; n];
    for i in 0..approx.len() {
        for k in 0..4 {
            signal[(2 * i + k) % n] += h[k] * approx[i] + g[k] * detail[i];
        }
    }
    Ok(signal)
}

/// One separable 2-D level: rows filtered first, then columns.
///
/// Naming fixes H as lowpass-rows/highpass-columns and V as the converse;
/// all three detail bands feed the feature extractor, so the labels carry
/// no downstream weight.
pub fn dwt2d(mat: &Subband) -> Result<DecompositionLevel> {
    check_signal("dwt2d rows", mat.rows)?;
    check_signal("dwt2d cols", mat.cols)?;
    let (rows, cols) = (mat.rows, mat.cols);
    let (hr, hc) = (rows / 2, cols / 2);

    // Row pass: each image row splits into low and high halves.
    let mut row_low = vec![0.0; rows * hc];
    let mut row_high = vec![0.0; rows * hc];
    for r in 0..rows {
        let (lo, hi) = dwt1d(mat.row(r))?;
        row_low[r * hc..(r + 1) * hc].copy_from_slice(&lo);
        row_high[r * hc..(r + 1) * hc].copy_from_slice(&hi);
    }

    // Column pass over both halves.
    let mut approx = vec![0.0; hr * hc];
    let mut horizontal = vec![0.0; hr * hc];
    let mut vertical = vec![0.0; hr * hc];
    let mut diagonal = vec![0.0; hr * hc];
    let mut col = vec![0.0; rows];
    for c in 0..hc {
        for r in 0..rows {
            col[r] = row_low[r * hc + c];
        }
        let (lo, hi) = dwt1d(&col)?;
        for r in 0..hr {
            approx[r * hc + c] = lo[r];
            horizontal[r * hc + c] = hi[r];
        }
        for r in 0..rows {
            col[r] = row_high[r * hc + c];
        }
        let (lo, hi) = dwt1d(&col)?;
        for r in 0..hr {
            vertical[r * hc + c] = lo[r];
            diagonal[r * hc + c] = hi[r];
        }
    }

    Ok(DecompositionLevel {
        approx: Subband::new(hr, hc, approx)?,
        horizontal: Subband::new(hr, hc, horizontal)?,
        vertical: Subband::new(hr, hc, vertical)?,
        diagonal: Subband::new(hr, hc, diagonal)?,
    })
}

/// Inverse of [`dwt2d`].
pub fn idwt2d(level: &DecompositionLevel) -> Result<Subband> {
    let (hr, hc) = (level.approx.rows, level.approx.cols);
    for sb in [&level.horizontal, &level.vertical, &level.diagonal] {
        if sb.rows != hr || sb.cols != hc {
            return Err(Error::DimensionMismatch {
                expected: hr * hc,
                actual: sb.rows * sb.cols,
            });
        }
    }
    let rows = hr * 2;
    let cols = hc * 2;

    // Undo the column pass.
    let mut row_low = vec![0.0; rows * hc];
    let mut row_high = vec![0.0; rows * hc];
    for c in 0..hc {
        let lo = idwt1d(&level.approx.column(c), &level.horizontal.column(c))?;
        let hi = idwt1d(&level.vertical.column(c), &level.diagonal.column(c))?;
        for r in 0..rows {
            row_low[r * hc + c] = lo[r];
            row_high[r * hc + c] = hi[r];
        }
    }

    // Undo the row pass.
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        let full = idwt1d(
            &row_low[r * hc..(r + 1) * hc],
            &row_high[r * hc..(r + 1) * hc],
        )?;
        out[r * cols..(r + 1) * cols].copy_from_slice(&full);
    }
    Subband::new(rows, cols, out)
}

/// Decompose an image `levels` times, each level re-decomposing the previous
/// approximation. Width and height must be divisible by `2^levels`.
pub fn decompose(img: &GrayImage, levels: usize) -> Result<WaveletPyramid> {
    if levels == 0 {
        return Err(Error::Config(alloc::string::String::from(
            "levels must be >= 1",
        )));
    }
    let required = 1usize << levels;
    for (context, size) in [("image width", img.width()), ("image height", img.height())] {
        if size % required != 0 {
            return Err(Error::NotDivisible {
                context,
                size,
                required,
            });
        }
        // The deepest transform still needs a length-4 signal.
        if size >> (levels - 1) < 4 {
            return Err(Error::BadSignalLength {
                context: "decompose deepest level",
                len: size >> (levels - 1),
            });
        }
    }
    let mut current = Subband::from_image(img);
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        let level = dwt2d(&current)?;
        current = level.approx.clone();
        out.push(level);
    }
    Ok(WaveletPyramid { levels: out })
}

/// Invert a full pyramid back to the original raster values.
pub fn reconstruct(pyramid: &WaveletPyramid) -> Result<Subband> {
    let mut levels = pyramid.levels.iter().rev();
    let deepest = levels.next().ok_or(Error::EmptyDataset)?;
    let mut approx = idwt2d(deepest)?;
    for level in levels {
        if approx.rows != level.approx.rows || approx.cols != level.approx.cols {
            return Err(Error::DimensionMismatch {
                expected: level.approx.rows * level.approx.cols,
                actual: approx.rows * approx.cols,
            });
        }
        let stitched = DecompositionLevel {
            approx,
            horizontal: level.horizontal.clone(),
            vertical: level.vertical.clone(),
            diagonal: level.diagonal.clone(),
        };
        approx = idwt2d(&stitched)?;
    }
    Ok(approx)
}

/// Detail band of a level whose coefficient histogram has maximum variance,
/// reported alongside features as a descriptive statistic.
pub fn max_variance_band(level: &DecompositionLevel) -> (DetailBand, f64) {
    let mut best = (DetailBand::Horizontal, level.horizontal.variance());
    for (band, sb) in [
        (DetailBand::Vertical, &level.vertical),
        (DetailBand::Diagonal, &level.diagonal),
    ] {
        let var = sb.variance();
        if var > best.1 {
            best = (band, var);
        }
    }
    best
}
