use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::RasterImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentOp {
    Grayscale,
    ColorJitter,
    RotateSmall,
    Noise,
}

fn luma(p: &[u8]) -> u8 {
    (0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64).round() as u8
}

fn grayscale(img: &mut RasterImage) {
    for p in img.pixels.chunks_exact_mut(3) {
        let y = luma(p);
        p.fill(y);
    }
}

/// Brightness, contrast and saturation each scaled by a factor in [0.8, 1.2].
fn color_jitter(img: &mut RasterImage, rng: &mut ChaCha8Rng) {
    let brightness = rng.random_range(0.8..1.2);
    let contrast = rng.random_range(0.8..1.2);
    let saturation = rng.random_range(0.8..1.2);
    let mean = img.pixels.iter().map(|&v| v as f64).sum::<f64>() / img.pixels.len().max(1) as f64;
    for p in img.pixels.chunks_exact_mut(3) {
        let gray = luma(p) as f64;
        for c in p.iter_mut() {
            let mut v = *c as f64 * brightness;
            v = (v - mean) * contrast + mean;
            v = gray + (v - gray) * saturation;
            *c = v.round().clamp(0.0, 255.0) as u8;
        }
    }
}

/// Rotation by up to ±5° about the centre with bilinear sampling; uncovered
/// pixels take the top-left corner colour.
fn rotate_small(img: &mut RasterImage, rng: &mut ChaCha8Rng) {
    let angle = rng.random_range(-5.0f64..5.0).to_radians();
    let (s, c) = angle.sin_cos();
    let (w, h) = (img.width as usize, img.height as usize);
    let fill = [img.pixels[0], img.pixels[1], img.pixels[2]];
    let src = img.pixels.clone();
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let at = |x: isize, y: isize, ch: usize| -> f64 {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            fill[ch] as f64
        } else {
            src[(y as usize * w + x as usize) * 3 + ch] as f64
        }
    };
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 + 0.5 - cx;
            let dy = y as f64 + 0.5 - cy;
            let sx = c * dx + s * dy + cx - 0.5;
            let sy = -s * dx + c * dy + cy - 0.5;
            let (x0, y0) = (sx.floor(), sy.floor());
            let (fx, fy) = (sx - x0, sy - y0);
            let (xi, yi) = (x0 as isize, y0 as isize);
            for ch in 0..3 {
                let v = at(xi, yi, ch) * (1.0 - fx) * (1.0 - fy)
                    + at(xi + 1, yi, ch) * fx * (1.0 - fy)
                    + at(xi, yi + 1, ch) * (1.0 - fx) * fy
                    + at(xi + 1, yi + 1, ch) * fx * fy;
                img.pixels[(y * w + x) * 3 + ch] = v.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
}

/// Gaussian pixel noise, σ = 6 levels. Gray pixels stay gray.
fn noise(img: &mut RasterImage, rng: &mut ChaCha8Rng) {
    let n = Normal::new(0.0, 6.0).unwrap();
    for p in img.pixels.chunks_exact_mut(3) {
        let gray = p[0] == p[1] && p[1] == p[2];
        if gray {
            let d = n.sample(rng);
            let v = (p[0] as f64 + d).round().clamp(0.0, 255.0) as u8;
            p.fill(v);
        } else {
            for c in p.iter_mut() {
                *c = (*c as f64 + n.sample(rng)).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
}

/// Applies `ops` in order; the same seed always gives the same output.
pub fn augment(img: &RasterImage, seed: u64, ops: &[AugmentOp]) -> RasterImage {
    let mut out = img.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for op in ops {
        match op {
            AugmentOp::Grayscale => grayscale(&mut out),
            AugmentOp::ColorJitter => color_jitter(&mut out, &mut rng),
            AugmentOp::RotateSmall => rotate_small(&mut out, &mut rng),
            AugmentOp::Noise => noise(&mut out, &mut rng),
        }
    }
    out
}
