//! Embedding codewords into grayscale images with one level of the Haar
//! wavelet transform, and blind detection by correlation.
//!
//! Embedding scales each HL and LH coefficient as `V' = V + α·|V|·wm`, so a
//! `+1` chip enlarges `|V|` when it agrees with the sign of `V` and shrinks it
//! otherwise. The detector therefore looks at the coefficient energy `y²`
//! weighted by `wm·sign(y)`, sums it over [`CHIPS`] interleaved groups, and
//! reports the cosine between the group sums and the all-ones vector. That
//! value lies in `[-1, 1]`, sits near 0 for an unmarked image (spread about
//! `1/√CHIPS`) and clearly above the default threshold for a marked one.

mod pgm;

pub use pgm::{decode_pgm, encode_pgm};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gossip::Symbol;
use crate::tracing::Entry;

pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_THRESHOLD: f64 = 0.3;

/// Number of coefficient groups the detector correlates over.
pub const CHIPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Row-major pixels. Both dimensions must be even and positive.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || width % 2 == 1 || height % 2 == 1 {
            return Err(Error::Parameter(format!(
                "image is {width}x{height}; one transform level needs even dimensions"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::Parameter(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(GrayImage {
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

    /// Gaussian noise around mid-gray (σ = 32), clamped.
    pub fn noise(width: usize, height: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Normal::new(128.0, 32.0).expect("positive deviation");
        let pixels = (0..width * height)
            .map(|_| quantize(dist.sample(&mut rng)))
            .collect();
        GrayImage::new(width, height, pixels)
    }

    /// Adds seeded Gaussian noise of deviation `sigma`.
    pub fn with_noise(&self, sigma: f64, seed: u64) -> Result<Self> {
        let dist = Normal::new(0.0, sigma)
            .map_err(|e| Error::Parameter(format!("noise deviation {sigma}: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pixels = self
            .pixels
            .iter()
            .map(|&p| quantize(f64::from(p) + dist.sample(&mut rng)))
            .collect();
        GrayImage::new(self.width, self.height, pixels)
    }
}

fn quantize(x: f64) -> u8 {
    x.round_ties_even().clamp(0.0, 255.0) as u8
}

/// One level of the 2-D Haar transform; each band is `(w/2)×(h/2)`,
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Bands {
    pub width: usize,
    pub height: usize,
    pub ll: Vec<f64>,
    pub hl: Vec<f64>,
    pub lh: Vec<f64>,
    pub hh: Vec<f64>,
}

/// Forward transform of real samples laid out as a `width×height` image.
pub fn haar_dwt2_f64(width: usize, height: usize, samples: &[f64]) -> Result<Bands> {
    if width % 2 == 1 || height % 2 == 1 || samples.len() != width * height {
        return Err(Error::Parameter(format!(
            "{} samples do not form an even {width}x{height} image",
            samples.len()
        )));
    }
    let (hw, hh) = (width / 2, height / 2);
    let mut bands = Bands {
        width: hw,
        height: hh,
        ll: Vec::with_capacity(hw * hh),
        hl: Vec::with_capacity(hw * hh),
        lh: Vec::with_capacity(hw * hh),
        hh: Vec::with_capacity(hw * hh),
    };
    for i in 0..hh {
        for j in 0..hw {
            let a = samples[2 * i * width + 2 * j];
            let b = samples[2 * i * width + 2 * j + 1];
            let c = samples[(2 * i + 1) * width + 2 * j];
            let d = samples[(2 * i + 1) * width + 2 * j + 1];
            bands.ll.push((a + b + c + d) / 2.0);
            bands.hl.push((a - b + c - d) / 2.0);
            bands.lh.push((a + b - c - d) / 2.0);
            bands.hh.push((a - b - c + d) / 2.0);
        }
    }
    Ok(bands)
}

pub fn haar_dwt2(image: &GrayImage) -> Bands {
    let samples: Vec<f64> = image.pixels.iter().map(|&p| f64::from(p)).collect();
    haar_dwt2_f64(image.width, image.height, &samples).expect("images have even dimensions")
}

/// Inverse transform, unquantized.
pub fn inverse_haar_dwt2(bands: &Bands) -> Vec<f64> {
    let width = 2 * bands.width;
    let mut out = vec![0.0; width * 2 * bands.height];
    for i in 0..bands.height {
        for j in 0..bands.width {
            let k = i * bands.width + j;
            let (ll, hl, lh, hh) = (bands.ll[k], bands.hl[k], bands.lh[k], bands.hh[k]);
            out[2 * i * width + 2 * j] = (ll + hl + lh + hh) / 2.0;
            out[2 * i * width + 2 * j + 1] = (ll - hl + lh - hh) / 2.0;
            out[(2 * i + 1) * width + 2 * j] = (ll + hl - lh - hh) / 2.0;
            out[(2 * i + 1) * width + 2 * j + 1] = (ll - hl - lh + hh) / 2.0;
        }
    }
    out
}

/// A ±1 sequence derived from a codeword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WatermarkSequence {
    pub values: Vec<i8>,
    pub codeword: Vec<Symbol>,
    pub seed: u64,
}

/// Expands the codeword into base-2 digits (`⌈log₂ q⌉` per symbol), tiles
/// them to `length`, and flips each chip with a keyed pseudorandom mask. The
/// mask is keyed by the seed and the codeword together, so distinct
/// codewords give unrelated sequences.
pub fn codeword_to_wm(
    codeword: &[Entry],
    q: usize,
    length: usize,
    seed: u64,
) -> Result<WatermarkSequence> {
    if length == 0 || codeword.is_empty() {
        return Err(Error::Parameter(
            "watermark needs a positive length and a codeword".into(),
        ));
    }
    if q < 2 {
        return Err(Error::Parameter(format!("alphabet size {q}")));
    }
    let symbols: Vec<Symbol> = codeword
        .iter()
        .map(|e| {
            e.symbol()
                .ok_or_else(|| Error::Parameter("codeword contains an erasure".into()))
        })
        .collect::<Result<_>>()?;
    if let Some(s) = symbols.iter().find(|&&s| usize::from(s) >= q) {
        return Err(Error::Parameter(format!("symbol {s} outside 0..{q}")));
    }
    let width = usize::BITS - (q - 1).leading_zeros();
    let bits: Vec<u8> = symbols
        .iter()
        .flat_map(|&s| (0..width).rev().map(move |b| ((s >> b) & 1) as u8))
        .collect();

    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((q as u64).to_le_bytes());
    hasher.update(&bits);
    let key: [u8; 32] = hasher.finalize().into();
    let mut rng = ChaCha8Rng::from_seed(key);

    let values = (0..length)
        .map(|i| {
            let flip: bool = rng.gen();
            if (bits[i % bits.len()] == 1) ^ flip {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(WatermarkSequence {
        values,
        codeword: symbols,
        seed,
    })
}

fn symbols_to_entries(codeword: &[Symbol]) -> Vec<Entry> {
    codeword.iter().map(|&s| Entry::Symbol(s)).collect()
}

/// Applies `V' = V + α·|V|·wm` to HL then LH (row-major), leaving LL and HH.
pub fn embed_bands(bands: &mut Bands, wm: &WatermarkSequence, alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::Parameter(format!(
            "strength α = {alpha} must be non-negative"
        )));
    }
    let n = bands.hl.len() + bands.lh.len();
    if wm.values.len() != n {
        return Err(Error::Parameter(format!(
            "watermark has {} chips, image has {n} detail coefficients",
            wm.values.len()
        )));
    }
    for (v, &w) in bands
        .hl
        .iter_mut()
        .chain(bands.lh.iter_mut())
        .zip(&wm.values)
    {
        *v += alpha * v.abs() * f64::from(w);
    }
    Ok(())
}

pub fn embed(
    image: &GrayImage,
    codeword: &[Symbol],
    q: usize,
    alpha: f64,
    seed: u64,
) -> Result<GrayImage> {
    let mut bands = haar_dwt2(image);
    let n = bands.hl.len() + bands.lh.len();
    let wm = codeword_to_wm(&symbols_to_entries(codeword), q, n, seed)?;
    embed_bands(&mut bands, &wm, alpha)?;
    let pixels = inverse_haar_dwt2(&bands)
        .into_iter()
        .map(quantize)
        .collect();
    GrayImage::new(image.width, image.height, pixels)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detection {
    pub correlation: f64,
    pub detected: bool,
}

/// Chipped cosine between `wm` and the received detail coefficients.
pub fn correlate(bands: &Bands, wm: &WatermarkSequence) -> Result<f64> {
    let coeffs: Vec<f64> = bands.hl.iter().chain(&bands.lh).copied().collect();
    if wm.values.len() != coeffs.len() {
        return Err(Error::Parameter(format!(
            "watermark has {} chips, image has {} detail coefficients",
            wm.values.len(),
            coeffs.len()
        )));
    }
    let mean_energy = coeffs.iter().map(|y| y * y).sum::<f64>() / coeffs.len() as f64;
    let chips = CHIPS.min(coeffs.len());
    let mut sums = vec![0.0; chips];
    for (i, (&y, &w)) in coeffs.iter().zip(&wm.values).enumerate() {
        let sign = if y > 0.0 {
            1.0
        } else if y < 0.0 {
            -1.0
        } else {
            0.0
        };
        sums[i % chips] += f64::from(w) * sign * (y * y - mean_energy);
    }
    let norm = sums.iter().map(|s| s * s).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(sums.iter().sum::<f64>() / ((chips as f64).sqrt() * norm))
}

/// Blind detection: only the received image, the codeword and the seed.
pub fn detect(
    image: &GrayImage,
    codeword: &[Symbol],
    q: usize,
    seed: u64,
    threshold: f64,
) -> Result<Detection> {
    let bands = haar_dwt2(image);
    let n = bands.hl.len() + bands.lh.len();
    let wm = codeword_to_wm(&symbols_to_entries(codeword), q, n, seed)?;
    let correlation = correlate(&bands, &wm)?;
    Ok(Detection {
        correlation,
        detected: correlation > threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_butterfly() {
        let img = GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        let b = haar_dwt2(&img);
        assert_eq!((b.ll[0], b.hl[0], b.lh[0], b.hh[0]), (5.0, -1.0, -2.0, 0.0));
        assert_eq!(inverse_haar_dwt2(&b), [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn constant_images_have_no_detail() {
        let b = haar_dwt2(&GrayImage::new(4, 4, vec![77; 16]).unwrap());
        assert!(b.hl.iter().chain(&b.lh).chain(&b.hh).all(|&v| v == 0.0));
    }

    #[test]
    fn odd_dimensions_are_rejected() {
        assert!(matches!(
            GrayImage::new(3, 2, vec![0; 6]),
            Err(Error::Parameter(_))
        ));
        assert!(haar_dwt2_f64(2, 2, &[0.0; 3]).is_err());
    }

    #[test]
    fn sequences_are_deterministic_and_pm_one() {
        let cw = [Entry::Symbol(3)];
        let a = codeword_to_wm(&cw, 4, 8, 5).unwrap();
        assert_eq!(a, codeword_to_wm(&cw, 4, 8, 5).unwrap());
        assert_eq!(a.values.len(), 8);
        assert!(a.values.iter().all(|&v| v == 1 || v == -1));
        assert!(codeword_to_wm(&[Entry::Symbol(1), Entry::Erasure], 4, 8, 5).is_err());
        assert!(codeword_to_wm(&[Entry::Symbol(4)], 4, 8, 5).is_err());
    }

    #[test]
    fn zero_coefficients_stay_put() {
        let mut b = haar_dwt2(&GrayImage::new(2, 2, vec![9; 4]).unwrap());
        let wm = WatermarkSequence {
            values: vec![1, -1],
            codeword: vec![0],
            seed: 0,
        };
        embed_bands(&mut b, &wm, 0.4).unwrap();
        assert_eq!((b.hl[0], b.lh[0]), (0.0, 0.0));
        assert!(embed_bands(&mut b, &wm, -0.1).is_err());
    }

    #[test]
    fn alpha_zero_is_identity() {
        let img = GrayImage::noise(16, 16, 3).unwrap();
        assert_eq!(embed(&img, &[1, 0, 2], 3, 0.0, 1).unwrap(), img);
    }
}
