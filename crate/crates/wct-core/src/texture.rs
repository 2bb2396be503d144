//! Direction-averaged co-occurrence matrices and the nine second-order
//! texture features computed from them, in either the wavelet domain
//! (second-level detail subbands) or straight from the quantized image.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{self, GrayImage, QuantizedImage};
use crate::math;
use crate::wavelet::{self, Subband};

/// Pair direction for co-occurrence counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Angle {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Angle {
    pub const ALL: [Angle; 4] = [Angle::Deg0, Angle::Deg45, Angle::Deg90, Angle::Deg135];

    /// (row, col) displacement at the given pair distance.
    pub fn offset(self, distance: usize) -> (isize, isize) {
        let d = distance as isize;
        match self {
            Angle::Deg0 => (0, d),
            Angle::Deg45 => (-d, d),
            Angle::Deg90 => (-d, 0),
            Angle::Deg135 => (-d, -d),
        }
    }

    pub fn degrees(self) -> u16 {
        match self {
            Angle::Deg0 => 0,
            Angle::Deg45 => 45,
            Angle::Deg90 => 90,
            Angle::Deg135 => 135,
        }
    }
}

/// Co-occurrence parameters: pair distance, direction set, gray levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlcmSpec {
    pub distance: usize,
    pub angles: Vec<Angle>,
    pub levels: usize,
}

impl Default for GlcmSpec {
    fn default() -> Self {
        Self {
            distance: 1,
            angles: Angle::ALL.to_vec(),
            levels: 64,
        }
    }
}

impl GlcmSpec {
    pub fn validate(&self) -> Result<()> {
        if self.distance == 0 {
            return Err(Error::Config(alloc::string::String::from(
                "GLCM distance must be >= 1",
            )));
        }
        if self.angles.is_empty() {
            return Err(Error::Config(alloc::string::String::from(
                "GLCM angle set must be non-empty",
            )));
        }
        if self.levels < 2 {
            return Err(Error::Config(alloc::string::String::from(
                "GLCM levels must be >= 2",
            )));
        }
        Ok(())
    }
}

/// Normalized symmetric co-occurrence probability matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    p: Vec<f64>,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    #[inline]
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }
}

/// The nine co-occurrence texture features, one struct field per row of the
/// fixed feature order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WctFeatures {
    pub entropy: f64,
    pub energy: f64,
    pub contrast: f64,
    pub sum_average: f64,
    pub variance: f64,
    pub correlation: f64,
    pub max_probability: f64,
    pub idm: f64,
    pub cluster_tendency: f64,
}

/// Short feature names in vector order.
pub const FEATURE_NAMES: [&str; 9] = [
    "ENT", "ENE", "CON", "SA", "VAR", "COR", "MP", "IDM", "CT",
];

/// Subband labels in vector order for the two-level wavelet feature set.
pub const BAND_NAMES: [&str; 3] = ["H2", "V2", "D2"];

/// Human-readable name of feature index `i` in a `bands * 9` layout,
/// e.g. index 10 of the wavelet set is `V2.ENE`.
pub fn feature_name(index: usize, wavelet_domain: bool) -> alloc::string::String {
    if wavelet_domain {
        let band = BAND_NAMES[(index / 9) % 3];
        alloc::format!("{band}.{}", FEATURE_NAMES[index % 9])
    } else {
        alloc::string::String::from(FEATURE_NAMES[index % 9])
    }
}

impl WctFeatures {
    pub fn to_array(&self) -> [f64; 9] {
        [
            self.entropy,
            self.energy,
            self.contrast,
            self.sum_average,
            self.variance,
            self.correlation,
            self.max_probability,
            self.idm,
            self.cluster_tendency,
        ]
    }
}

/// Rescale real coefficients linearly onto `0..levels`, rounding half-up.
/// A constant subband maps to all zeros.
pub fn quantize_subband(sb: &Subband, levels: usize) -> Result<QuantizedImage> {
    if levels < 2 {
        return Err(Error::Config(alloc::string::String::from(
            "levels must be >= 2",
        )));
    }
    if sb.coeffs().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("subband coefficients"));
    }
    let min = sb.coeffs().iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sb
        .coeffs()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let top = (levels - 1) as f64;
    let values = if max > min {
        sb.coeffs()
            .iter()
            .map(|&v| {
                let scaled = (v - min) / (max - min) * top;
                (math::floor(scaled + 0.5).clamp(0.0, top)) as u16
            })
            .collect()
    } else {
        vec![0u16; sb.coeffs().len()]
    };
    QuantizedImage::new(sb.cols(), sb.rows(), levels, values)
}

/// Single-direction GLCM with symmetric accumulation: every in-bounds pair
/// increments both (i,j) and (j,i) before normalization.
pub fn glcm_single(q: &QuantizedImage, distance: usize, angle: Angle) -> Result<Glcm> {
    let levels = q.levels();
    let (dr, dc) = angle.offset(distance);
    let (rows, cols) = (q.height() as isize, q.width() as isize);
    let mut counts = vec![0.0f64; levels * levels];
    let mut pairs = 0u64;
    for r in 0..rows {
        for c in 0..cols {
            let (r2, c2) = (r + dr, c + dc);
            if r2 < 0 || r2 >= rows || c2 < 0 || c2 >= cols {
                continue;
            }
            let i = q.value(r as usize, c as usize) as usize;
            let j = q.value(r2 as usize, c2 as usize) as usize;
            counts[i * levels + j] += 1.0;
            counts[j * levels + i] += 1.0;
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(Error::EmptyPairs {
            dr,
            dc,
            rows: q.height(),
            cols: q.width(),
        });
    }
    let total = (pairs * 2) as f64;
    for v in &mut counts {
        *v /= total;
    }
    Ok(Glcm { levels, p: counts })
}

/// Element-wise mean of the per-angle GLCMs; still sums to one.
pub fn glcm_averaged(q: &QuantizedImage, spec: &GlcmSpec) -> Result<Glcm> {
    spec.validate()?;
    let levels = q.levels();
    let mut acc = vec![0.0f64; levels * levels];
    for &angle in &spec.angles {
        let single = glcm_single(q, spec.distance, angle)?;
        for (a, p) in acc.iter_mut().zip(single.p.iter()) {
            *a += p;
        }
    }
    let n = spec.angles.len() as f64;
    for a in &mut acc {
        *a /= n;
    }
    Ok(Glcm { levels, p: acc })
}

/// Compute the nine features of a normalized GLCM.
///
/// Entropy uses log base 2 with `0 log 0 = 0`; correlation is reported as 0
/// when either marginal is degenerate.
pub fn haralick(glcm: &Glcm) -> WctFeatures {
    let g = glcm.levels;
    let mut entropy = 0.0;
    let mut energy = 0.0;
    let mut contrast = 0.0;
    let mut max_probability = 0.0f64;
    let mut idm = 0.0;
    let mut mean_i = 0.0;
    let mut mean_j = 0.0;
    let mut p_sum = vec![0.0f64; 2 * g - 1];
    for i in 0..g {
        for j in 0..g {
            let p = glcm.prob(i, j);
            if p > 0.0 {
                entropy -= p * math::log2(p);
            }
            energy += p * p;
            let diff = i as f64 - j as f64;
            contrast += diff * diff * p;
            max_probability = max_probability.max(p);
            idm += p / (1.0 + diff * diff);
            mean_i += i as f64 * p;
            mean_j += j as f64 * p;
            p_sum[i + j] += p;
        }
    }
    let sum_average = p_sum
        .iter()
        .enumerate()
        .map(|(k, &p)| k as f64 * p)
        .sum::<f64>();

    let mut var_i = 0.0;
    let mut var_j = 0.0;
    let mut cov = 0.0;
    let mut variance = 0.0;
    let mut cluster_tendency = 0.0;
    let mu = (mean_i + mean_j) / 2.0;
    for i in 0..g {
        for j in 0..g {
            let p = glcm.prob(i, j);
            let di = i as f64 - mean_i;
            let dj = j as f64 - mean_j;
            var_i += di * di * p;
            var_j += dj * dj * p;
            cov += di * dj * p;
            let dm = i as f64 - mu;
            variance += dm * dm * p;
            let dc = i as f64 + j as f64 - mean_i - mean_j;
            cluster_tendency += dc * dc * p;
        }
    }
    let sigma = math::sqrt(var_i) * math::sqrt(var_j);
    let correlation = if sigma > 0.0 { cov / sigma } else { 0.0 };

    WctFeatures {
        entropy,
        energy,
        contrast,
        sum_average,
        variance,
        correlation,
        max_probability,
        idm,
        cluster_tendency,
    }
}

fn band_features(sb: &Subband, spec: &GlcmSpec) -> Result<WctFeatures> {
    let q = quantize_subband(sb, spec.levels)?;
    Ok(haralick(&glcm_averaged(&q, spec)?))
}

/// Wavelet-domain feature vector: decompose two levels, then nine features
/// per second-level detail band, concatenated `[H2, V2, D2]` — 27 values.
pub fn extract_wct(block: &GrayImage, spec: &GlcmSpec) -> Result<Vec<f64>> {
    extract_wct_levels(block, spec, false)
}

/// As [`extract_wct`], optionally prepending the first-level detail bands
/// (54 values) for experimentation.
pub fn extract_wct_levels(
    block: &GrayImage,
    spec: &GlcmSpec,
    include_first_level: bool,
) -> Result<Vec<f64>> {
    let pyramid = wavelet::decompose(block, 2)?;
    let mut out = Vec::with_capacity(if include_first_level { 54 } else { 27 });
    if include_first_level {
        for sb in pyramid.levels()[0].details() {
            out.extend_from_slice(&band_features(sb, spec)?.to_array());
        }
    }
    for sb in pyramid.deepest().details() {
        out.extend_from_slice(&band_features(sb, spec)?.to_array());
    }
    Ok(out)
}

/// Gray-level-domain baseline: nine features straight from the quantized
/// block, no wavelet transform.
pub fn extract_gray(block: &GrayImage, spec: &GlcmSpec) -> Result<Vec<f64>> {
    let q = imaging::quantize(block, spec.levels)?;
    Ok(haralick(&glcm_averaged(&q, spec)?).to_array().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::GrayImage;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Straight-line re-evaluation of each feature formula with nested
    /// loops; intentionally kept independent of `haralick`.
    fn naive_features(glcm: &Glcm) -> [f64; 9] {
        let g = glcm.levels();
        let p = |i: usize, j: usize| glcm.prob(i, j);
        let mut ent = 0.0;
        for i in 0..g {
            for j in 0..g {
                if p(i, j) > 0.0 {
                    ent -= p(i, j) * p(i, j).log2();
                }
            }
        }
        let mut ene = 0.0;
        for i in 0..g {
            for j in 0..g {
                ene += p(i, j) * p(i, j);
            }
        }
        let mut con = 0.0;
        for i in 0..g {
            for j in 0..g {
                con += (i as f64 - j as f64).powi(2) * p(i, j);
            }
        }
        let mut sa = 0.0;
        for k in 0..(2 * g - 1) {
            let mut pk = 0.0;
            for i in 0..g {
                for j in 0..g {
                    if i + j == k {
                        pk += p(i, j);
                    }
                }
            }
            sa += k as f64 * pk;
        }
        let mut mx = 0.0;
        let mut my = 0.0;
        for i in 0..g {
            for j in 0..g {
                mx += i as f64 * p(i, j);
                my += j as f64 * p(i, j);
            }
        }
        let mu = (mx + my) / 2.0;
        let mut var = 0.0;
        for i in 0..g {
            for j in 0..g {
                var += (i as f64 - mu).powi(2) * p(i, j);
            }
        }
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut cov = 0.0;
        for i in 0..g {
            for j in 0..g {
                sx += (i as f64 - mx).powi(2) * p(i, j);
                sy += (j as f64 - my).powi(2) * p(i, j);
                cov += (i as f64 - mx) * (j as f64 - my) * p(i, j);
            }
        }
        let cor = if sx.sqrt() * sy.sqrt() > 0.0 {
            cov / (sx.sqrt() * sy.sqrt())
        } else {
            0.0
        };
        let mut mp = 0.0f64;
        for i in 0..g {
            for j in 0..g {
                mp = mp.max(p(i, j));
            }
        }
        let mut idm = 0.0;
        for i in 0..g {
            for j in 0..g {
                idm += p(i, j) / (1.0 + (i as f64 - j as f64).powi(2));
            }
        }
        let mut ct = 0.0;
        for i in 0..g {
            for j in 0..g {
                ct += (i as f64 + j as f64 - mx - my).powi(2) * p(i, j);
            }
        }
        [ent, ene, con, sa, var, cor, mp, idm, ct]
    }

    fn random_glcm(rng: &mut ChaCha8Rng, levels: usize) -> Glcm {
        // Random symmetric probabilities with a sprinkle of exact zeros.
        let mut p = vec![0.0f64; levels * levels];
        for i in 0..levels {
            for j in i..levels {
                let v = if rng.random::<f64>() < 0.25 {
                    0.0
                } else {
                    rng.random::<f64>()
                };
                p[i * levels + j] = v;
                p[j * levels + i] = v;
            }
        }
        let total: f64 = p.iter().sum();
        assert!(total > 0.0);
        for v in &mut p {
            *v /= total;
        }
        Glcm { levels, p }
    }

    #[test]
    fn quantize_subband_maps_endpoints() {
        let sb = Subband::new(1, 3, vec![-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(quantize_subband(&sb, 3).unwrap().values(), &[0, 1, 2]);
        let sb = Subband::new(1, 2, vec![0.0, 10.0]).unwrap();
        assert_eq!(quantize_subband(&sb, 64).unwrap().values(), &[0, 63]);
        let flat = Subband::new(2, 2, vec![4.2; 4]).unwrap();
        assert_eq!(quantize_subband(&flat, 16).unwrap().values(), &[0; 4]);
    }

    #[test]
    fn glcm_hand_counts_2x2() {
        let img = GrayImage::new(2, 2, vec![0, 0, 1, 1]).unwrap();
        let q = crate::imaging::quantize(&img, 256).unwrap();
        let horizontal = glcm_single(&q, 1, Angle::Deg0).unwrap();
        assert_eq!(horizontal.prob(0, 0), 0.5);
        assert_eq!(horizontal.prob(1, 1), 0.5);
        assert_eq!(horizontal.prob(0, 1), 0.0);

        let vertical = glcm_single(&q, 1, Angle::Deg90).unwrap();
        assert_eq!(vertical.prob(0, 1), 0.5);
        assert_eq!(vertical.prob(1, 0), 0.5);
        assert_eq!(vertical.prob(0, 0), 0.0);
    }

    #[test]
    fn constant_image_glcm_is_point_mass() {
        let img = GrayImage::new(3, 3, vec![10; 9]).unwrap();
        let q = crate::imaging::quantize(&img, 8).unwrap();
        for angle in Angle::ALL {
            let glcm = glcm_single(&q, 1, angle).unwrap();
            assert_eq!(glcm.prob(0, 0), 1.0);
        }
        let avg = glcm_averaged(&q, &GlcmSpec { levels: 8, ..GlcmSpec::default() }).unwrap();
        assert_eq!(avg.prob(0, 0), 1.0);
    }

    #[test]
    fn checkerboard_0_and_90_glcms_agree() {
        let pixels: Vec<u8> = (0..16)
            .map(|i| if (i / 4 + i % 4) % 2 == 0 { 0 } else { 255 })
            .collect();
        let img = GrayImage::new(4, 4, pixels).unwrap();
        let q = crate::imaging::quantize(&img, 2).unwrap();
        let a0 = glcm_single(&q, 1, Angle::Deg0).unwrap();
        let a90 = glcm_single(&q, 1, Angle::Deg90).unwrap();
        assert_eq!(a0.probabilities(), a90.probabilities());
        // Every horizontal neighbor pair flips color.
        assert_eq!(a0.prob(0, 1), 0.5);
        assert_eq!(a0.prob(1, 0), 0.5);
        // And their average equals either one.
        let spec = GlcmSpec {
            angles: vec![Angle::Deg0, Angle::Deg90],
            levels: 2,
            ..GlcmSpec::default()
        };
        let avg = glcm_averaged(&q, &spec).unwrap();
        assert_eq!(avg.probabilities(), a0.probabilities());
    }

    #[test]
    fn glcm_errors_when_offset_exceeds_image() {
        let img = GrayImage::new(2, 1, vec![0, 1]).unwrap();
        let q = crate::imaging::quantize(&img, 2).unwrap();
        assert!(matches!(
            glcm_single(&q, 3, Angle::Deg0),
            Err(Error::EmptyPairs { .. })
        ));
    }

    #[test]
    fn glcm_is_symmetric_normalized_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pixels: Vec<u8> = (0..64).map(|_| rng.random::<u8>()).collect();
            let img = GrayImage::new(8, 8, pixels).unwrap();
            let q = crate::imaging::quantize(&img, 16).unwrap();
            let glcm = glcm_averaged(&q, &GlcmSpec { levels: 16, ..GlcmSpec::default() }).unwrap();
            let sum: f64 = glcm.probabilities().iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            for i in 0..16 {
                for j in 0..16 {
                    assert!(glcm.prob(i, j) >= 0.0);
                    assert!((glcm.prob(i, j) - glcm.prob(j, i)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn haralick_point_mass_closed_form() {
        for k in [0usize, 3, 7] {
            let levels = 8;
            let mut p = vec![0.0; levels * levels];
            p[k * levels + k] = 1.0;
            let f = haralick(&Glcm { levels, p });
            assert_eq!(f.energy, 1.0);
            assert_eq!(f.entropy, 0.0);
            assert_eq!(f.contrast, 0.0);
            assert_eq!(f.idm, 1.0);
            assert_eq!(f.max_probability, 1.0);
            assert!(f.variance.abs() < 1e-12);
            assert!(f.cluster_tendency.abs() < 1e-12);
            assert_eq!(f.correlation, 0.0);
            assert!((f.sum_average - 2.0 * k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn haralick_uniform_2x2_closed_form() {
        let f = haralick(&Glcm {
            levels: 2,
            p: vec![0.25; 4],
        });
        assert!((f.entropy - 2.0).abs() < 1e-12);
        assert!((f.energy - 0.25).abs() < 1e-12);
        assert!((f.contrast - 0.5).abs() < 1e-12);
        assert!((f.max_probability - 0.25).abs() < 1e-12);
        assert!((f.idm - 0.75).abs() < 1e-12);
        assert!((f.sum_average - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haralick_matches_naive_loops_on_random_glcms() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for round in 0..100 {
            let levels = 2 + (rng.random::<u32>() % 15) as usize;
            let glcm = random_glcm(&mut rng, levels);
            let fast = haralick(&glcm).to_array();
            let slow = naive_features(&glcm);
            for (k, (a, b)) in fast.iter().zip(slow.iter()).enumerate() {
                assert!(
                    (a - b).abs() < 1e-10,
                    "round {round} feature {} differs: {a} vs {b}",
                    FEATURE_NAMES[k]
                );
            }
        }
    }

    #[test]
    fn energy_never_exceeds_max_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..50 {
            let glcm = random_glcm(&mut rng, 6);
            let f = haralick(&glcm);
            assert!(f.energy <= f.max_probability + 1e-15);
        }
    }

    #[test]
    fn extract_wct_layout_and_constant_block() {
        let block = GrayImage::new(32, 32, vec![77; 1024]).unwrap();
        let spec = GlcmSpec::default();
        let v = extract_wct(&block, &spec).unwrap();
        assert_eq!(v.len(), 27);
        // All detail bands vanish, so every band reduces to the point-mass
        // feature values in Table-order: ENT ENE CON SA VAR COR MP IDM CT.
        let expected = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0];
        for band in 0..3 {
            for (k, e) in expected.iter().enumerate() {
                assert!(
                    (v[band * 9 + k] - e).abs() < 1e-12,
                    "band {band} feature {k}"
                );
            }
        }
    }

    #[test]
    fn extract_wct_ignores_constant_intensity_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base: Vec<u8> = (0..1024).map(|_| 40 + (rng.random::<u8>() % 120)).collect();
        let shifted: Vec<u8> = base.iter().map(|&p| p + 60).collect();
        let a = GrayImage::new(32, 32, base).unwrap();
        let b = GrayImage::new(32, 32, shifted).unwrap();
        let spec = GlcmSpec::default();
        let va = extract_wct(&a, &spec).unwrap();
        let vb = extract_wct(&b, &spec).unwrap();
        for (x, y) in va.iter().zip(&vb) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn extract_wct_equals_manual_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pixels: Vec<u8> = (0..1024).map(|_| rng.random::<u8>()).collect();
        let block = GrayImage::new(32, 32, pixels).unwrap();
        let spec = GlcmSpec::default();
        let auto = extract_wct(&block, &spec).unwrap();

        let pyramid = wavelet::decompose(&block, 2).unwrap();
        let mut manual = Vec::new();
        for sb in pyramid.deepest().details() {
            let q = quantize_subband(sb, spec.levels).unwrap();
            let glcm = glcm_averaged(&q, &spec).unwrap();
            manual.extend_from_slice(&haralick(&glcm).to_array());
        }
        assert_eq!(auto, manual);
    }

    #[test]
    fn extract_gray_orders_contrast_sensibly() {
        let checker: Vec<u8> = (0..1024)
            .map(|i| {
                let (r, c) = (i / 32, i % 32);
                if (r + c) % 2 == 0 {
                    0
                } else {
                    255
                }
            })
            .collect();
        let smooth: Vec<u8> = (0..1024).map(|i| ((i % 32) * 8) as u8).collect();
        let spec = GlcmSpec::default();
        let f_checker = extract_gray(&GrayImage::new(32, 32, checker).unwrap(), &spec).unwrap();
        let f_smooth = extract_gray(&GrayImage::new(32, 32, smooth).unwrap(), &spec).unwrap();
        // CON is index 2.
        assert!(f_checker[2] > f_smooth[2]);
        // Constant 9 quantizes to bin 2 at 64 levels: point mass at (2,2),
        // whose sum average is 2k = 4.
        let constant = extract_gray(&GrayImage::new(8, 8, vec![9; 64]).unwrap(), &spec).unwrap();
        assert_eq!(
            constant,
            vec![0.0, 1.0, 0.0, 4.0, 0.0, 0.0, 1.0, 1.0, 0.0]
        );
    }

    #[test]
    fn extract_gray_equals_manual_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let pixels: Vec<u8> = (0..1024).map(|_| rng.random::<u8>()).collect();
        let block = GrayImage::new(32, 32, pixels).unwrap();
        let spec = GlcmSpec::default();
        let auto = extract_gray(&block, &spec).unwrap();
        let q = crate::imaging::quantize(&block, spec.levels).unwrap();
        let manual = haralick(&glcm_averaged(&q, &spec).unwrap()).to_array().to_vec();
        assert_eq!(auto, manual);
    }
}
