use serde::{Deserialize, Serialize};

use super::ms2::SpectrumMS2;

/// Fixed-width m/z binning vocabulary with two reserved ids after the bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MS2Codebook {
    pub bin_width: f64,
    pub max_mz: f64,
}

impl Default for MS2Codebook {
    fn default() -> Self {
        MS2Codebook {
            bin_width: 0.1,
            max_mz: 1000.0,
        }
    }
}

impl MS2Codebook {
    pub fn n_bins(&self) -> u32 {
        (self.max_mz / self.bin_width).round() as u32
    }

    /// Shared by every peak above `max_mz`.
    pub fn overflow_token(&self) -> u32 {
        self.n_bins()
    }

    pub fn pad_token(&self) -> u32 {
        self.n_bins() + 1
    }

    pub fn vocab_size(&self) -> u32 {
        self.n_bins() + 2
    }

    pub fn token(&self, mz: f64) -> u32 {
        let bin = (mz / self.bin_width).floor();
        if bin < 0.0 {
            0
        } else if bin >= self.n_bins() as f64 {
            self.overflow_token()
        } else {
            bin as u32
        }
    }

    /// Lower edge of a bin; `None` for the reserved ids.
    pub fn bin_start(&self, token: u32) -> Option<f64> {
        (token < self.n_bins()).then(|| token as f64 * self.bin_width)
    }
}

/// One token per peak, in peak order.
pub fn tokenize_ms2(s: &SpectrumMS2, cb: &MS2Codebook) -> Vec<u32> {
    s.peaks.iter().map(|&(mz, _)| cb.token(mz)).collect()
}
