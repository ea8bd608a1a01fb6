use std::collections::BTreeMap;

use ndarray::Axis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::sample::ModalityRef;
use super::ForgeError;
use crate::chem::{MolGraph, Reaction};
use crate::conformer::{generate_conformation, read_blob};
use crate::depict::{
    augment, render_molecule_auto, render_reaction_auto, tile_image, AugmentOp, ImageEncoderConfig, ImageStyle,
    RasterImage,
};
use crate::encoders::{
    h_reduce, ConformationEncoder, GraphEncoder, ImageEncoder, IrEncoder, Modality, ModalityTokenSequence, Ms2Encoder,
};
use crate::spectra::{
    simulate_ir, simulate_ms2, tokenize_ir, tokenize_ms2, MS2Codebook, SpectrumIR, SpectrumMS2, IR_TOKENS,
};

/// Content-addressed payload files keyed by relative path.
pub type BlobStore = BTreeMap<String, Vec<u8>>;

pub fn extension(m: Modality) -> &'static str {
    match m {
        Modality::Graph => "graph.json",
        Modality::Conformation => "cnf",
        Modality::Image => "png",
        Modality::Ms2 => "ms2",
        Modality::Ir => "irs",
    }
}

pub fn blob_path(bytes: &[u8], m: Modality) -> String {
    format!("blobs/{}.{}", hex::encode(Sha256::digest(bytes)), extension(m))
}

/// Stable 64-bit digest of a string, used to derive per-item seeds.
pub(crate) fn digest64(parts: &[&[u8]]) -> u64 {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    u64::from_le_bytes(h.finalize()[..8].try_into().unwrap())
}

/// Token count re-derived from a payload's bytes.
pub fn payload_tokens(m: Modality, bytes: &[u8]) -> Result<usize, ForgeError> {
    let bad = |what: &str| ForgeError::Data(format!("unreadable {} payload: {what}", m.name()));
    match m {
        Modality::Graph => {
            let g: MolGraph = serde_json::from_slice(bytes).map_err(|e| bad(&e.to_string()))?;
            Ok(g.atom_count())
        }
        Modality::Conformation => Ok(read_blob(bytes).map_err(|e| bad(&e.to_string()))?.0.len()),
        Modality::Image => {
            let img = RasterImage::from_png(bytes, ImageStyle::CleanA).map_err(|e| bad(&e.to_string()))?;
            Ok(ImageEncoderConfig::default().image_tokens(img.width, img.height) as usize)
        }
        Modality::Ms2 => Ok(SpectrumMS2::from_binary(bytes).ok_or_else(|| bad("bad MS2 record"))?.n_peaks()),
        Modality::Ir => {
            SpectrumIR::from_binary(bytes).ok_or_else(|| bad("bad IR record"))?;
            Ok(IR_TOKENS)
        }
    }
}

/// Runs a payload through its modality encoder. Image tiles are reduced to
/// their token rows and stacked.
pub fn encode_payload(m: Modality, bytes: &[u8], seed: u64) -> Result<ModalityTokenSequence, ForgeError> {
    let bad = |what: String| ForgeError::Data(format!("{} payload: {what}", m.name()));
    let embeddings = match m {
        Modality::Graph => {
            let g: MolGraph = serde_json::from_slice(bytes).map_err(|e| bad(e.to_string()))?;
            GraphEncoder::new(seed).encode(&g)
        }
        Modality::Conformation => {
            let (elements, coords) = read_blob(bytes).map_err(|e| bad(e.to_string()))?;
            ConformationEncoder::new(seed).encode_points(&elements, &coords)
        }
        Modality::Image => {
            let img = RasterImage::from_png(bytes, ImageStyle::CleanA).map_err(|e| bad(e.to_string()))?;
            let cfg = ImageEncoderConfig::default();
            let tiles = tile_image(&img, &cfg).map_err(|e| bad(e.to_string()))?;
            let per_tile = ImageEncoder::new(seed).encode(&tiles).map_err(|e| bad(e.to_string()))?;
            let reduced = per_tile
                .iter()
                .map(|p| h_reduce(p, cfg.reduce_factor as usize))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(e.to_string()))?;
            let views: Vec<_> = reduced.iter().map(|r| r.view()).collect();
            ndarray::concatenate(Axis(0), &views).map_err(|e| bad(e.to_string()))?
        }
        Modality::Ms2 => {
            let s = SpectrumMS2::from_binary(bytes).ok_or_else(|| bad("bad MS2 record".into()))?;
            Ms2Encoder::new(seed).encode(&tokenize_ms2(&s, &MS2Codebook::default()))
        }
        Modality::Ir => {
            let s = SpectrumIR::from_binary(bytes).ok_or_else(|| bad("bad IR record".into()))?;
            let windows = tokenize_ir(&s).map_err(|e| bad(e.to_string()))?;
            IrEncoder::new(seed).encode(&windows).map_err(|e| bad(e.to_string()))?
        }
    };
    Ok(ModalityTokenSequence { modality: m, embeddings })
}

/// Renders one molecule in a modality. `seed` drives style and augmentation.
pub struct Renderer {
    pub modality: Modality,
    pub ms2_depth: u32,
    pub image_min_side: u32,
    pub base_seed: u64,
}

impl Renderer {
    fn image_style(rng: &mut ChaCha8Rng) -> (ImageStyle, Vec<AugmentOp>) {
        let style = ImageStyle::ALL[rng.random_range(0..3)];
        let mut ops = Vec::new();
        if style != ImageStyle::Handwritten {
            if rng.random_bool(0.2) {
                ops.push(AugmentOp::Grayscale);
            }
            if rng.random_bool(0.3) {
                ops.push(AugmentOp::ColorJitter);
            }
        }
        (style, ops)
    }

    fn png(img: RasterImage, rng: &mut ChaCha8Rng, ops: &[AugmentOp]) -> Result<Vec<u8>, ForgeError> {
        let img = if ops.is_empty() { img } else { augment(&img, rng.random(), ops) };
        img.to_png().map_err(|e| ForgeError::Data(e.to_string()))
    }

    /// Payload bytes and token count for a molecule.
    pub fn molecule(&self, m: &MolGraph, canonical: &str, seed: u64) -> Result<(Vec<u8>, usize), ForgeError> {
        // structure-derived payloads depend only on the molecule so identical
        // molecules share one blob
        let mol_seed = digest64(&[&self.base_seed.to_le_bytes(), canonical.as_bytes()]);
        match self.modality {
            Modality::Graph => Ok((serde_json::to_vec(m).expect("graph serializes"), m.atom_count())),
            Modality::Conformation => {
                let c = generate_conformation(m, mol_seed)
                    .map_err(|e| ForgeError::Data(format!("conformation for {canonical}: {e}")))?;
                Ok((c.to_blob(), c.atom_count()))
            }
            Modality::Image => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (style, ops) = Self::image_style(&mut rng);
                let img = render_molecule_auto(m, style, self.image_min_side, rng.random())
                    .map_err(|e| ForgeError::Data(e.to_string()))?;
                let tokens = ImageEncoderConfig::default().image_tokens(img.width, img.height) as usize;
                Ok((Self::png(img, &mut rng, &ops)?, tokens))
            }
            Modality::Ms2 => {
                let s = simulate_ms2(m, self.ms2_depth);
                Ok((s.to_binary(), s.n_peaks()))
            }
            Modality::Ir => Ok((simulate_ir(m).to_binary(), IR_TOKENS)),
        }
    }

    /// A whole reaction drawn as one image.
    pub fn reaction_image(&self, r: &Reaction, seed: u64) -> Result<(Vec<u8>, usize), ForgeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let style = ImageStyle::ALL[rng.random_range(0..2)];
        let img = render_reaction_auto(r, style, self.image_min_side, rng.random()).map_err(|e| ForgeError::Data(e.to_string()))?;
        let tokens = ImageEncoderConfig::default().image_tokens(img.width, img.height) as usize;
        Ok((img.to_png().map_err(|e| ForgeError::Data(e.to_string()))?, tokens))
    }
}

pub(crate) fn store(blobs: &mut BlobStore, m: Modality, bytes: Vec<u8>, tokens: usize) -> ModalityRef {
    let path = blob_path(&bytes, m);
    blobs.entry(path.clone()).or_insert(bytes);
    ModalityRef { kind: m, path, tokens }
}
