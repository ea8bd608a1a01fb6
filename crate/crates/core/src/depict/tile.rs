use serde::{Deserialize, Serialize};

use super::RasterImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageEncoderConfig {
    pub tile_size: u32,
    pub patch_size: u32,
    pub reduce_factor: u32,
}

impl Default for ImageEncoderConfig {
    fn default() -> Self {
        ImageEncoderConfig {
            tile_size: 336,
            patch_size: 14,
            reduce_factor: 8,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TileConfigError {
    #[error("tile size {tile} is not a multiple of patch size {patch}")]
    PatchMismatch { tile: u32, patch: u32 },
    #[error("{patches} patches per tile cannot be reduced by {factor}")]
    ReduceMismatch { patches: u32, factor: u32 },
}

impl ImageEncoderConfig {
    pub fn validate(&self) -> Result<(), TileConfigError> {
        if self.patch_size == 0 || self.tile_size % self.patch_size != 0 {
            return Err(TileConfigError::PatchMismatch {
                tile: self.tile_size,
                patch: self.patch_size,
            });
        }
        if self.reduce_factor == 0 || self.patches_per_tile() % self.reduce_factor != 0 {
            return Err(TileConfigError::ReduceMismatch {
                patches: self.patches_per_tile(),
                factor: self.reduce_factor,
            });
        }
        Ok(())
    }

    pub fn patches_per_side(&self) -> u32 {
        self.tile_size / self.patch_size
    }

    pub fn patches_per_tile(&self) -> u32 {
        self.patches_per_side() * self.patches_per_side()
    }

    pub fn tokens_per_tile(&self) -> u32 {
        self.patches_per_tile() / self.reduce_factor
    }

    /// (rows, cols) of tiles covering a `width` × `height` image.
    pub fn grid(&self, width: u32, height: u32) -> (u32, u32) {
        (height.div_ceil(self.tile_size), width.div_ceil(self.tile_size))
    }

    pub fn image_tokens(&self, width: u32, height: u32) -> u32 {
        let (r, c) = self.grid(width, height);
        r * c * self.tokens_per_tile()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileSet {
    pub tiles: Vec<RasterImage>,
    pub grid: (u32, u32),
    pub tile_size: u32,
    pub tokens_per_tile: u32,
}

impl TileSet {
    pub fn token_count(&self) -> u32 {
        self.tiles.len() as u32 * self.tokens_per_tile
    }
}

/// Pads with the style background to whole tiles, then cuts row-major.
pub fn tile_image(img: &RasterImage, cfg: &ImageEncoderConfig) -> Result<TileSet, TileConfigError> {
    cfg.validate()?;
    let ts = cfg.tile_size as usize;
    let (rows, cols) = cfg.grid(img.width, img.height);
    let bg = img.style.background();
    let mut tiles = Vec::with_capacity((rows * cols) as usize);
    for r in 0..rows as usize {
        for c in 0..cols as usize {
            let mut pixels = Vec::with_capacity(ts * ts * 3);
            for y in 0..ts {
                for x in 0..ts {
                    let (sx, sy) = (c * ts + x, r * ts + y);
                    if sx < img.width as usize && sy < img.height as usize {
                        let i = (sy * img.width as usize + sx) * 3;
                        pixels.extend_from_slice(&img.pixels[i..i + 3]);
                    } else {
                        pixels.extend_from_slice(&bg);
                    }
                }
            }
            tiles.push(RasterImage {
                width: cfg.tile_size,
                height: cfg.tile_size,
                pixels,
                style: img.style,
            });
        }
    }
    Ok(TileSet {
        tiles,
        grid: (rows, cols),
        tile_size: cfg.tile_size,
        tokens_per_tile: cfg.tokens_per_tile(),
    })
}
