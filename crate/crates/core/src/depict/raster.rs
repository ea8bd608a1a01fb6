use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::layout::Point;
use super::scene::Scene;
use super::style::ImageStyle;
use super::{DepictError, RasterImage};

/// Smallest legible bond length in pixels.
pub const MIN_SCALE: f64 = 12.0;
pub const MAX_SCALE: f64 = 150.0;
/// Blank border around the drawing, in bond-length units.
pub const MARGIN: f64 = 0.6;

struct Canvas {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Canvas {
    fn blend(&mut self, x: usize, y: usize, color: [u8; 3], coverage: f64) {
        let i = (y * self.width + x) * 3;
        for c in 0..3 {
            let old = self.pixels[i + c] as f64;
            let new = old + (color[c] as f64 - old) * coverage;
            self.pixels[i + c] = new.round().clamp(0.0, 255.0) as u8;
        }
    }

    /// Anti-aliased thick line: coverage falls off linearly over one pixel
    /// past the half-width.
    fn line(&mut self, p: Point, q: Point, width: f64, color: [u8; 3]) {
        let hw = width / 2.0;
        let pad = hw + 1.0;
        let x0 = (p[0].min(q[0]) - pad).floor().max(0.0) as usize;
        let y0 = (p[1].min(q[1]) - pad).floor().max(0.0) as usize;
        let x1 = ((p[0].max(q[0]) + pad).ceil().max(0.0) as usize).min(self.width.saturating_sub(1));
        let y1 = ((p[1].max(q[1]) + pad).ceil().max(0.0) as usize).min(self.height.saturating_sub(1));
        let d = [q[0] - p[0], q[1] - p[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        for y in y0..=y1 {
            for x in x0..=x1 {
                let c = [x as f64 + 0.5, y as f64 + 0.5];
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    (((c[0] - p[0]) * d[0] + (c[1] - p[1]) * d[1]) / len2).clamp(0.0, 1.0)
                };
                let near = [p[0] + t * d[0], p[1] + t * d[1]];
                let dist = (c[0] - near[0]).hypot(c[1] - near[1]);
                let coverage = (hw + 0.5 - dist).clamp(0.0, 1.0);
                if coverage > 0.0 {
                    self.blend(x, y, color, coverage);
                }
            }
        }
    }
}

/// Scale (pixels per bond length) that fits `scene` on the canvas.
pub fn fit_scale(scene: &Scene, width: u32, height: u32) -> f64 {
    let b = scene.bbox();
    let bw = b[2] - b[0] + 2.0 * MARGIN;
    let bh = b[3] - b[1] + 2.0 * MARGIN;
    (width as f64 / bw).min(height as f64 / bh).min(MAX_SCALE)
}

/// Jitters shared vertices consistently and splits segments into wobbly pieces.
fn handwritten_strokes(
    lines: Vec<(Point, Point, [u8; 3], f64)>,
    rng: &mut ChaCha8Rng,
) -> Vec<(Point, Point, [u8; 3], f64)> {
    let jitter = Normal::new(0.0, 0.05).unwrap();
    let wobble = Normal::new(0.0, 0.015).unwrap();
    let mut moved: HashMap<(i64, i64), Point> = HashMap::new();
    let mut vertex = |p: Point, rng: &mut ChaCha8Rng| -> Point {
        let key = ((p[0] * 1000.0).round() as i64, (p[1] * 1000.0).round() as i64);
        *moved
            .entry(key)
            .or_insert_with(|| [p[0] + jitter.sample(rng), p[1] + jitter.sample(rng)])
    };
    let mut out = Vec::new();
    for (p, q, color, width) in lines {
        let p = vertex(p, rng);
        let q = vertex(q, rng);
        let w = width * rng.random_range(0.75..1.35);
        let d = [q[0] - p[0], q[1] - p[1]];
        let len = d[0].hypot(d[1]);
        let pieces = ((len / 0.2).ceil() as usize).clamp(1, 8);
        let nrm = if len > 0.0 { [-d[1] / len, d[0] / len] } else { [0.0, 0.0] };
        let mut prev = p;
        for k in 1..=pieces {
            let t = k as f64 / pieces as f64;
            let off = if k == pieces { 0.0 } else { wobble.sample(rng) };
            let next = [p[0] + d[0] * t + nrm[0] * off, p[1] + d[1] * t + nrm[1] * off];
            out.push((prev, next, color, w));
            prev = next;
        }
    }
    out
}

pub fn rasterize(
    scene: &Scene,
    style: ImageStyle,
    width: u32,
    height: u32,
    seed: u64,
) -> Result<RasterImage, DepictError> {
    let scale = fit_scale(scene, width, height);
    if scale < MIN_SCALE {
        let b = scene.bbox();
        return Err(DepictError::CanvasTooSmall {
            width,
            height,
            needed_width: ((b[2] - b[0] + 2.0 * MARGIN) * MIN_SCALE).ceil() as u32,
            needed_height: ((b[3] - b[1] + 2.0 * MARGIN) * MIN_SCALE).ceil() as u32,
        });
    }
    let b = scene.bbox();
    let cx = (b[0] + b[2]) / 2.0;
    let cy = (b[1] + b[3]) / 2.0;
    let to_px = |p: Point| -> Point {
        [
            (p[0] - cx) * scale + width as f64 / 2.0,
            height as f64 / 2.0 - (p[1] - cy) * scale,
        ]
    };

    let mut lines: Vec<(Point, Point, [u8; 3], f64)> = scene
        .segments
        .iter()
        .map(|s| (s.a, s.b, s.color, style.line_width()))
        .collect();
    for l in &scene.labels {
        let size = l.glyphs.first().map_or(0.5, |g| g.size);
        for (p, q) in l.segments() {
            lines.push((p, q, l.color, size * style.glyph_weight()));
        }
    }
    if style == ImageStyle::Handwritten {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        lines = handwritten_strokes(lines, &mut rng);
    }

    let bg = style.background();
    let mut canvas = Canvas {
        width: width as usize,
        height: height as usize,
        pixels: bg.iter().copied().cycle().take(width as usize * height as usize * 3).collect(),
    };
    for (p, q, color, w) in lines {
        canvas.line(to_px(p), to_px(q), (w * scale).max(1.2), color);
    }
    Ok(RasterImage {
        width,
        height,
        pixels: canvas.pixels,
        style,
    })
}
