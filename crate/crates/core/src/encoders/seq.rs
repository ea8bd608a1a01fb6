use ndarray::{Array1, Array2, Axis};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gaussian, normalize_rows, weight_rng, EncoderError, Modality};
use crate::spectra::IR_TOKENS;

const DIM: usize = 768;
const KEY_DIM: usize = 64;
const MIX_LAYERS: usize = 2;

struct AttentionLayer {
    wq: Array2<f64>,
    wk: Array2<f64>,
    wv: Array2<f64>,
}

/// Single-head residual self-attention stack with row normalization. Without
/// position features it commutes with any reordering of the rows.
pub struct SequenceMixer {
    layers: Vec<AttentionLayer>,
}

impl SequenceMixer {
    fn new(rng: &mut ChaCha8Rng) -> Self {
        let std = 1.0 / (DIM as f64).sqrt();
        let layers = (0..MIX_LAYERS)
            .map(|_| AttentionLayer {
                wq: gaussian(rng, DIM, KEY_DIM, std),
                wk: gaussian(rng, DIM, KEY_DIM, std),
                wv: gaussian(rng, DIM, DIM, std),
            })
            .collect();
        SequenceMixer { layers }
    }

    pub fn apply(&self, mut x: Array2<f64>) -> Array2<f64> {
        for l in &self.layers {
            let q = x.dot(&l.wq);
            let k = x.dot(&l.wk);
            let mut a = q.dot(&k.t()) / (KEY_DIM as f64).sqrt();
            for mut row in a.rows_mut() {
                let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
                row.mapv_inplace(|v| (v - max).exp());
                let z = row.sum();
                row /= z;
            }
            x = &x + &a.dot(&x.dot(&l.wv));
            normalize_rows(&mut x);
        }
        x
    }

    fn weights(&self, prefix: &str) -> Vec<(String, Array2<f64>)> {
        let mut out = Vec::new();
        for (i, l) in self.layers.iter().enumerate() {
            out.push((format!("{prefix}mix{i}.wq"), l.wq.clone()));
            out.push((format!("{prefix}mix{i}.wk"), l.wk.clone()));
            out.push((format!("{prefix}mix{i}.wv"), l.wv.clone()));
        }
        out
    }
}

fn add_positions(x: &mut Array2<f64>) {
    for (pos, mut row) in x.rows_mut().into_iter().enumerate() {
        for i in 0..DIM / 2 {
            let angle = pos as f64 / 10000f64.powf(2.0 * i as f64 / DIM as f64);
            row[2 * i] += angle.sin();
            row[2 * i + 1] += angle.cos();
        }
    }
}

/// Token ids index a virtual embedding table: each row is drawn from its own
/// ChaCha stream on demand, so the full vocabulary is never materialized.
pub struct Ms2Encoder {
    pub positions: bool,
    seed: u64,
    mixer: SequenceMixer,
}

impl Ms2Encoder {
    pub fn new(seed: u64) -> Self {
        let mut rng = weight_rng(seed, Modality::Ms2);
        Ms2Encoder {
            positions: true,
            seed: rng.next_u64(),
            mixer: SequenceMixer::new(&mut rng),
        }
    }

    pub fn without_positions(mut self) -> Self {
        self.positions = false;
        self
    }

    pub fn embedding(&self, token: u32) -> Array1<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(token as u64);
        gaussian(&mut rng, 1, DIM, 1.0).remove_axis(Axis(0))
    }

    pub fn encode(&self, tokens: &[u32]) -> Array2<f64> {
        let mut x = Array2::zeros((tokens.len(), DIM));
        for (i, &t) in tokens.iter().enumerate() {
            x.row_mut(i).assign(&self.embedding(t));
        }
        if self.positions {
            add_positions(&mut x);
        }
        self.mixer.apply(x)
    }

    /// Mixer weights only; embeddings are re-derivable from `embedding`.
    pub fn weights(&self) -> Vec<(String, Array2<f64>)> {
        self.mixer.weights("")
    }
}

/// Linear lift of each 36-point spectrum window, then the mixer.
pub struct IrEncoder {
    pub positions: bool,
    lift: Array2<f64>,
    bias: Array1<f64>,
    mixer: SequenceMixer,
}

impl IrEncoder {
    pub const WINDOW: usize = crate::spectra::GRID_LEN / IR_TOKENS;

    pub fn new(seed: u64) -> Self {
        let mut rng = weight_rng(seed, Modality::Ir);
        let lift = gaussian(&mut rng, Self::WINDOW, DIM, 1.0);
        let bias = gaussian(&mut rng, 1, DIM, 0.1).remove_axis(Axis(0));
        IrEncoder {
            positions: true,
            lift,
            bias,
            mixer: SequenceMixer::new(&mut rng),
        }
    }

    pub fn without_positions(mut self) -> Self {
        self.positions = false;
        self
    }

    pub fn encode(&self, windows: &[Vec<f64>]) -> Result<Array2<f64>, EncoderError> {
        let mismatch = EncoderError::ShapeMismatch {
            expected_rows: IR_TOKENS,
            expected_cols: Self::WINDOW,
            rows: windows.len(),
            cols: windows.first().map_or(0, Vec::len),
        };
        if windows.len() != IR_TOKENS || windows.iter().any(|w| w.len() != Self::WINDOW) {
            return Err(mismatch);
        }
        let flat: Vec<f64> = windows.iter().flatten().copied().collect();
        let f = Array2::from_shape_vec((IR_TOKENS, Self::WINDOW), flat).expect("checked shape");
        let mut x = f.dot(&self.lift) + &self.bias;
        if self.positions {
            add_positions(&mut x);
        }
        Ok(self.mixer.apply(x))
    }

    pub fn weights(&self) -> Vec<(String, Array2<f64>)> {
        let mut out = vec![
            ("lift".to_string(), self.lift.clone()),
            ("bias".to_string(), self.bias.clone().insert_axis(Axis(0))),
        ];
        out.extend(self.mixer.weights(""));
        out
    }
}

pub fn encode_ms2(tokens: &[u32], seed: u64) -> Array2<f64> {
    Ms2Encoder::new(seed).encode(tokens)
}

pub fn encode_ir(windows: &[Vec<f64>], seed: u64) -> Result<Array2<f64>, EncoderError> {
    IrEncoder::new(seed).encode(windows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ms2_shape_and_equivariance() {
        let toks = [150u32, 170, 290, 310, 460];
        assert_eq!(encode_ms2(&toks, 0).dim(), (5, 768));
        let enc = Ms2Encoder::new(2).without_positions();
        let a = enc.encode(&toks);
        let rev: Vec<u32> = toks.iter().rev().copied().collect();
        let b = enc.encode(&rev);
        for i in 0..5 {
            let d = (&a.row(i) - &b.row(4 - i)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(d < 1e-9, "{d}");
        }
        let p = Ms2Encoder::new(2).encode(&toks);
        assert_ne!(p, a);
    }

    #[test]
    fn ir_shape_contract() {
        let w = vec![vec![0.1; 36]; 50];
        assert_eq!(encode_ir(&w, 1).unwrap().dim(), (50, 768));
        assert!(encode_ir(&w[..49], 1).is_err());
        assert!(encode_ir(&vec![vec![0.0; 35]; 50], 1).is_err());
    }
}
