use serde::{Deserialize, Serialize};

use crate::chem::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageStyle {
    CleanA,
    CleanB,
    Handwritten,
}

impl ImageStyle {
    pub const ALL: [ImageStyle; 3] = [ImageStyle::CleanA, ImageStyle::CleanB, ImageStyle::Handwritten];

    pub fn name(self) -> &'static str {
        match self {
            ImageStyle::CleanA => "clean_a",
            ImageStyle::CleanB => "clean_b",
            ImageStyle::Handwritten => "handwritten",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|st| st.name() == s)
    }

    pub fn background(self) -> [u8; 3] {
        match self {
            ImageStyle::CleanA => [255, 255, 255],
            ImageStyle::CleanB => [250, 250, 246],
            ImageStyle::Handwritten => [252, 250, 240],
        }
    }

    pub fn bond_color(self) -> [u8; 3] {
        match self {
            ImageStyle::CleanA => [0, 0, 0],
            ImageStyle::CleanB => [40, 40, 48],
            ImageStyle::Handwritten => [20, 30, 90],
        }
    }

    pub fn atom_color(self, e: Element) -> [u8; 3] {
        if self == ImageStyle::Handwritten {
            return self.bond_color();
        }
        let a = self == ImageStyle::CleanA;
        match e.atomic_number() {
            6 => self.bond_color(),
            7 => if a { [0, 0, 255] } else { [48, 80, 248] },
            8 => if a { [255, 0, 0] } else { [200, 30, 40] },
            9 | 17 => if a { [0, 160, 0] } else { [30, 150, 90] },
            16 => if a { [190, 160, 0] } else { [200, 140, 20] },
            15 => if a { [255, 128, 0] } else { [220, 110, 20] },
            35 => if a { [150, 40, 40] } else { [130, 50, 30] },
            53 => if a { [148, 0, 148] } else { [110, 20, 150] },
            _ => if a { [90, 90, 90] } else { [100, 60, 140] },
        }
    }

    /// Stroke width in bond-length units.
    pub fn line_width(self) -> f64 {
        match self {
            ImageStyle::CleanA => 0.08,
            ImageStyle::CleanB => 0.10,
            ImageStyle::Handwritten => 0.09,
        }
    }

    /// Glyph stroke width relative to glyph height.
    pub fn glyph_weight(self) -> f64 {
        match self {
            ImageStyle::CleanA => 0.12,
            ImageStyle::CleanB => 0.15,
            ImageStyle::Handwritten => 0.14,
        }
    }
}
