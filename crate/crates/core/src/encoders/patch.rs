use ndarray::{s, Array1, Array2, Axis};

use super::{gaussian, normalize_rows, weight_rng, EncoderError, Modality};
use crate::depict::{RasterImage, TileSet};

const DIM: usize = 1024;
const COLOR_FEATURES: usize = 3;
const POS_FEATURES: usize = 8;

/// Patch embedder: mean colour of each square patch, optionally joined with
/// sinusoidal row/column features, through a seeded linear map and tanh.
pub struct ImageEncoder {
    pub patch_size: u32,
    pub positions: bool,
    w: Array2<f64>,
    b: Array1<f64>,
}

impl ImageEncoder {
    pub fn new(seed: u64) -> Self {
        let mut rng = weight_rng(seed, Modality::Image);
        ImageEncoder {
            patch_size: 14,
            positions: true,
            w: gaussian(&mut rng, COLOR_FEATURES + POS_FEATURES, DIM, 0.5),
            b: gaussian(&mut rng, 1, DIM, 0.1).remove_axis(Axis(0)),
        }
    }

    pub fn without_positions(mut self) -> Self {
        self.positions = false;
        self
    }

    /// Row-major patches of one square tile.
    pub fn encode_tile(&self, tile: &RasterImage) -> Result<Array2<f64>, EncoderError> {
        let p = self.patch_size;
        if tile.width != tile.height || p == 0 || tile.width % p != 0 {
            return Err(EncoderError::TileShape {
                width: tile.width,
                height: tile.height,
                patch: p,
            });
        }
        let side = (tile.width / p) as usize;
        let p = p as usize;
        let mut x = Array2::zeros((side * side, COLOR_FEATURES + POS_FEATURES));
        for r in 0..side {
            for c in 0..side {
                let row = r * side + c;
                let mut sum = [0.0; 3];
                for y in r * p..(r + 1) * p {
                    for xx in c * p..(c + 1) * p {
                        let px = tile.pixel(xx as u32, y as u32);
                        for k in 0..3 {
                            sum[k] += px[k] as f64;
                        }
                    }
                }
                for k in 0..3 {
                    x[[row, k]] = sum[k] / (p * p) as f64 / 127.5 - 1.0;
                }
                if self.positions {
                    let (fr, fc) = (r as f64 / side as f64, c as f64 / side as f64);
                    for (j, freq) in [1.0, 4.0].iter().enumerate() {
                        let a = std::f64::consts::PI * freq;
                        x[[row, 3 + 4 * j]] = (a * fr).sin();
                        x[[row, 4 + 4 * j]] = (a * fr).cos();
                        x[[row, 5 + 4 * j]] = (a * fc).sin();
                        x[[row, 6 + 4 * j]] = (a * fc).cos();
                    }
                }
            }
        }
        let mut h = (x.dot(&self.w) + &self.b).mapv(f64::tanh);
        normalize_rows(&mut h);
        Ok(h)
    }

    pub fn encode(&self, tiles: &TileSet) -> Result<Vec<Array2<f64>>, EncoderError> {
        tiles.tiles.iter().map(|t| self.encode_tile(t)).collect()
    }

    pub fn weights(&self) -> Vec<(String, Array2<f64>)> {
        vec![
            ("w".into(), self.w.clone()),
            ("b".into(), self.b.clone().insert_axis(Axis(0))),
        ]
    }
}

/// One `patches × 1024` matrix per tile.
pub fn encode_image(tiles: &TileSet, seed: u64) -> Result<Vec<Array2<f64>>, EncoderError> {
    ImageEncoder::new(seed).encode(tiles)
}

/// Mean over each run of `n` consecutive patches.
pub fn h_reduce(patches: &Array2<f64>, n: usize) -> Result<Array2<f64>, EncoderError> {
    let len = patches.nrows();
    if n == 0 || len % n != 0 {
        return Err(EncoderError::Reduce { len, n });
    }
    let mut out = Array2::zeros((len / n, patches.ncols()));
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        let group = patches.slice(s![i * n..(i + 1) * n, ..]);
        row.assign(&group.mean_axis(Axis(0)).unwrap());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depict::ImageStyle;

    fn uniform(side: u32, rgb: [u8; 3]) -> RasterImage {
        RasterImage {
            width: side,
            height: side,
            pixels: rgb.iter().copied().cycle().take((side * side * 3) as usize).collect(),
            style: ImageStyle::CleanA,
        }
    }

    #[test]
    fn patch_shape_and_reduce() {
        let e = ImageEncoder::new(0);
        let h = e.encode_tile(&uniform(336, [200, 10, 10])).unwrap();
        assert_eq!(h.dim(), (576, 1024));
        assert_eq!(h_reduce(&h, 8).unwrap().dim(), (72, 1024));
        assert_eq!(h_reduce(&h, 1).unwrap(), h);
        assert!(h_reduce(&h, 7).is_err());
    }

    #[test]
    fn uniform_tile_rows_equal_without_positions() {
        let e = ImageEncoder::new(4).without_positions();
        let h = e.encode_tile(&uniform(336, [30, 90, 200])).unwrap();
        assert!(h.rows().into_iter().all(|r| r == h.row(0)));
        let reduced = h_reduce(&h, 8).unwrap();
        assert!(reduced.rows().into_iter().all(|r| (&r - &h.row(0)).iter().all(|v| v.abs() < 1e-12)));
        let with = ImageEncoder::new(4).encode_tile(&uniform(336, [30, 90, 200])).unwrap();
        assert_ne!(with.row(0), with.row(1));
    }

    #[test]
    fn rejects_non_square_tiles() {
        let mut t = uniform(336, [0, 0, 0]);
        t.height = 335;
        t.pixels.truncate((336 * 335 * 3) as usize);
        assert!(ImageEncoder::new(0).encode_tile(&t).is_err());
    }
}
