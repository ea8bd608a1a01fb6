//! Untrained encoders with fixed seeded weights, per-modality projectors into
//! decoder space, the patch-sequence reducer and prompt splice planning.
//!
//! Every encoder is a pure function of its inputs and seed. Output widths and
//! token counts follow [`Modality::dim`] and [`TokenRule`].

mod gin;
mod molconf;
mod patch;
mod projector;
mod prompt;
mod seq;
mod weights;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::chem::Element;

pub use gin::{encode_graph, GraphEncoder, GIN_LAYERS};
pub use molconf::{encode_conformation, ConformationEncoder, RADIAL_CENTERS};
pub use patch::{encode_image, h_reduce, ImageEncoder};
pub use projector::{gelu, gelu_grad, gelu_tanh, project, project_jacobian, ProjectorParams, DEFAULT_DIM_OUT};
pub use prompt::{assemble_prompt, PlanItem, PromptPlan};
pub use seq::{encode_ir, encode_ms2, IrEncoder, Ms2Encoder, SequenceMixer};
pub use weights::{read_weights, write_weights, WeightsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    Graph,
    Conformation,
    Image,
    Ms2,
    Ir,
}

/// How many embeddings a modality contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenRule {
    /// One per heavy atom.
    Atoms,
    /// A fixed number per image sub-tile.
    PerTile(u32),
    /// One per spectrum peak.
    Peaks,
    Static(u32),
}

impl Modality {
    pub const ALL: [Modality; 5] = [
        Modality::Graph,
        Modality::Conformation,
        Modality::Image,
        Modality::Ms2,
        Modality::Ir,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Modality::Graph => "graph",
            Modality::Conformation => "conformation",
            Modality::Image => "image",
            Modality::Ms2 => "ms2",
            Modality::Ir => "ir",
        }
    }

    /// Accepts the full names plus `conf`.
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "conf" => Some(Modality::Conformation),
            _ => Self::ALL.into_iter().find(|m| m.name() == s),
        }
    }

    /// Encoder output width.
    pub fn dim(self) -> usize {
        match self {
            Modality::Graph => 300,
            Modality::Conformation => 512,
            Modality::Image => 1024,
            Modality::Ms2 | Modality::Ir => 768,
        }
    }

    pub fn token_rule(self) -> TokenRule {
        match self {
            Modality::Graph | Modality::Conformation => TokenRule::Atoms,
            Modality::Image => TokenRule::PerTile(72),
            Modality::Ms2 => TokenRule::Peaks,
            Modality::Ir => TokenRule::Static(50),
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl TokenRule {
    /// Token count given the payload's natural size (atoms, tiles or peaks).
    pub fn tokens(self, units: usize) -> usize {
        match self {
            TokenRule::Atoms | TokenRule::Peaks => units,
            TokenRule::PerTile(k) => units * k as usize,
            TokenRule::Static(k) => k as usize,
        }
    }

    pub fn describe(self) -> String {
        match self {
            TokenRule::Atoms => "dynamic(atoms)".into(),
            TokenRule::PerTile(k) => format!("{k}-per-tile"),
            TokenRule::Peaks => "dynamic(peaks)".into(),
            TokenRule::Static(k) => format!("static({k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderSpec {
    pub modality: Modality,
    pub dim: usize,
    pub token_rule: TokenRule,
}

pub fn encoder_spec(m: Modality) -> EncoderSpec {
    EncoderSpec {
        modality: m,
        dim: m.dim(),
        token_rule: m.token_rule(),
    }
}

/// Embeddings one modality payload contributes to a prompt.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalityTokenSequence {
    pub modality: Modality,
    pub embeddings: Array2<f64>,
}

impl ModalityTokenSequence {
    pub fn tokens(&self) -> usize {
        self.embeddings.nrows()
    }

    pub fn dim(&self) -> usize {
        self.embeddings.ncols()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncoderError {
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("sequence of {len} patches cannot be reduced by {n}")]
    Reduce { len: usize, n: usize },
    #[error("template has {slots} modality slots but {given} sequences were given")]
    SlotCount { slots: usize, given: usize },
    #[error("tile is {width}x{height}, expected a square multiple of the patch size {patch}")]
    TileShape { width: u32, height: u32, patch: u32 },
}

/// ChaCha stream dedicated to one modality so encoders with the same seed
/// never share weights.
pub(crate) fn weight_rng(seed: u64, m: Modality) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(m.stream());
    rng
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize, std: f64) -> Array2<f64> {
    let n = Normal::new(0.0, std).unwrap();
    Array2::from_shape_simple_fn((rows, cols), || n.sample(rng))
}

/// Zero-mean, unit-variance rows.
pub(crate) fn normalize_rows(x: &mut Array2<f64>) {
    for mut row in x.rows_mut() {
        let n = row.len() as f64;
        let mean = row.sum() / n;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let inv = 1.0 / (var + 1e-5).sqrt();
        row.mapv_inplace(|v| (v - mean) * inv);
    }
}

pub(crate) const ELEMENT_BUCKETS: usize = 13;

/// Index into a small element vocabulary; everything unlisted shares the last slot.
pub(crate) fn element_bucket(e: Element) -> usize {
    match e.atomic_number() {
        6 => 0,
        7 => 1,
        8 => 2,
        9 => 3,
        15 => 4,
        16 => 5,
        17 => 6,
        35 => 7,
        53 => 8,
        5 => 9,
        14 => 10,
        34 => 11,
        _ => 12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_rules() {
        let dims: Vec<_> = Modality::ALL.iter().map(|m| m.dim()).collect();
        assert_eq!(dims, [300, 512, 1024, 768, 768]);
        assert_eq!(Modality::Image.token_rule().tokens(2), 144);
        assert_eq!(Modality::Ir.token_rule().tokens(7), 50);
        assert_eq!(Modality::from_name("conf"), Some(Modality::Conformation));
        assert_eq!(Modality::Ms2.token_rule().describe(), "dynamic(peaks)");
    }

    #[test]
    fn streams_differ() {
        let a = gaussian(&mut weight_rng(1, Modality::Graph), 2, 2, 1.0);
        let b = gaussian(&mut weight_rng(1, Modality::Ir), 2, 2, 1.0);
        assert_ne!(a, b);
    }
}
