//! Molecule and reaction pictures: 2D layout, vector scene, rasterization in
//! three styles, augmentation, and tiling into encoder-sized sub-images.

mod augment;
mod font;
mod layout;
mod raster;
mod scene;
mod style;
mod tile;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};

use crate::chem::{MolGraph, Reaction};

pub use augment::{augment, AugmentOp};
pub use layout::{layout_2d, smallest_rings, Point};
pub use raster::{fit_scale, rasterize, MARGIN, MAX_SCALE, MIN_SCALE};
pub use scene::{molecule_scene, reaction_scene, Glyph, Label, Scene, Segment, SegmentKind};
pub use style::ImageStyle;
pub use tile::{tile_image, ImageEncoderConfig, TileConfigError, TileSet};

/// Pixels per bond length used when the canvas is sized to the drawing.
pub const AUTO_SCALE: f64 = 32.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DepictError {
    #[error("canvas {width}x{height} too small for a legible drawing (needs at least {needed_width}x{needed_height})")]
    CanvasTooSmall {
        width: u32,
        height: u32,
        needed_width: u32,
        needed_height: u32,
    },
    #[error("png encoding: {0}")]
    Png(String),
}

/// 8-bit RGB, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
    pub style: ImageStyle,
}

impl RasterImage {
    pub const CHANNELS: usize = 3;

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    /// Share of pixels that differ from the style background.
    pub fn ink_fraction(&self) -> f64 {
        let bg = self.style.background();
        let inked = self.pixels.chunks_exact(3).filter(|p| **p != bg).count();
        inked as f64 / (self.width as f64 * self.height as f64)
    }

    pub fn to_png(&self) -> Result<Vec<u8>, DepictError> {
        let mut out = Vec::new();
        PngEncoder::new(&mut out)
            .write_image(&self.pixels, self.width, self.height, ExtendedColorType::Rgb8)
            .map_err(|e| DepictError::Png(e.to_string()))?;
        Ok(out)
    }

    pub fn from_png(bytes: &[u8], style: ImageStyle) -> Result<Self, DepictError> {
        let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
            .map_err(|e| DepictError::Png(e.to_string()))?
            .to_rgb8();
        Ok(RasterImage {
            width: img.width(),
            height: img.height(),
            pixels: img.into_raw(),
            style,
        })
    }
}

pub fn png_file_name(sample_id: &str, style: ImageStyle) -> String {
    format!("{sample_id}_{}.png", style.name())
}

/// Canvas size that holds `scene` at [`AUTO_SCALE`], never below one tile.
pub fn auto_canvas(scene: &Scene, min_side: u32) -> (u32, u32) {
    let b = scene.bbox();
    let w = ((b[2] - b[0] + 2.0 * MARGIN) * AUTO_SCALE).ceil() as u32;
    let h = ((b[3] - b[1] + 2.0 * MARGIN) * AUTO_SCALE).ceil() as u32;
    (w.max(min_side), h.max(min_side))
}

pub fn render_molecule(
    m: &MolGraph,
    style: ImageStyle,
    canvas: (u32, u32),
    seed: u64,
) -> Result<RasterImage, DepictError> {
    rasterize(&molecule_scene(m, style), style, canvas.0, canvas.1, seed)
}

pub fn render_reaction(
    r: &Reaction,
    style: ImageStyle,
    canvas: (u32, u32),
    seed: u64,
) -> Result<RasterImage, DepictError> {
    rasterize(&reaction_scene(r, style), style, canvas.0, canvas.1, seed)
}

/// Renders on a canvas sized to the drawing (see [`auto_canvas`]).
pub fn render_molecule_auto(m: &MolGraph, style: ImageStyle, min_side: u32, seed: u64) -> Result<RasterImage, DepictError> {
    let scene = molecule_scene(m, style);
    let (w, h) = auto_canvas(&scene, min_side);
    rasterize(&scene, style, w, h, seed)
}

pub fn render_reaction_auto(r: &Reaction, style: ImageStyle, min_side: u32, seed: u64) -> Result<RasterImage, DepictError> {
    let scene = reaction_scene(r, style);
    let (w, h) = auto_canvas(&scene, min_side);
    rasterize(&scene, style, w, h, seed)
}
