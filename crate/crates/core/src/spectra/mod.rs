//! Rule-based MS2 and IR spectrum simulation plus their tokenizers.

mod codebook;
mod ir;
mod ms2;

pub use codebook::{tokenize_ms2, MS2Codebook};
pub use ir::{
    detect_groups, simulate_ir, tokenize_ir, untokenize_ir, IrTokenError, SpectrumIR, GRID_LEN,
    GRID_START, GRID_STEP, GROUP_TABLE, IR_TOKENS, SIGMA,
};
pub use ms2::{
    bin_peaks, cleavable_bonds, fragment_mass, fragments, simulate_ms2, simulate_ms2_with,
    Ms2Settings, SpectrumMS2,
};
