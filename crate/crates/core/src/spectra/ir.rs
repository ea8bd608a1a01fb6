use serde::{Deserialize, Serialize};

use crate::chem::{BondOrder, Element, MolGraph};

pub const GRID_START: f64 = 400.0;
pub const GRID_STEP: f64 = 2.0;
pub const GRID_LEN: usize = 1800;
pub const IR_TOKENS: usize = 50;
pub const SIGMA: f64 = 20.0;

/// Absorbance on a uniform wavenumber grid (cm⁻¹).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumIR {
    pub grid_start: f64,
    pub grid_step: f64,
    pub intensity: Vec<f64>,
}

impl SpectrumIR {
    pub fn grid(&self) -> Vec<f64> {
        (0..self.intensity.len())
            .map(|i| self.grid_start + self.grid_step * i as f64)
            .collect()
    }

    pub fn index_of(&self, wavenumber: f64) -> usize {
        (((wavenumber - self.grid_start) / self.grid_step).round().max(0.0) as usize)
            .min(self.intensity.len().saturating_sub(1))
    }

    /// Grid indices that are strict local maxima above `floor`.
    pub fn local_maxima(&self, floor: f64) -> Vec<usize> {
        let y = &self.intensity;
        (1..y.len().saturating_sub(1))
            .filter(|&i| y[i] > floor && y[i] > y[i - 1] && y[i] >= y[i + 1])
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "grid_start": self.grid_start,
            "grid_step": self.grid_step,
            "intensity": self.intensity,
        })
    }

    /// `IRS1`, u32 length, f32 start, f32 step, then f32 intensities.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 4 * self.intensity.len());
        out.extend_from_slice(b"IRS1");
        out.extend_from_slice(&(self.intensity.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.grid_start as f32).to_le_bytes());
        out.extend_from_slice(&(self.grid_step as f32).to_le_bytes());
        for &v in &self.intensity {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Option<Self> {
        if bytes.len() < 16 || &bytes[..4] != b"IRS1" {
            return None;
        }
        let n = u32::from_le_bytes(bytes[4..8].try_into().ok()?) as usize;
        if bytes.len() != 16 + 4 * n {
            return None;
        }
        let f = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as f64;
        Some(SpectrumIR {
            grid_start: f(8),
            grid_step: f(12),
            intensity: (0..n).map(|k| f(16 + 4 * k)).collect(),
        })
    }
}

/// Characteristic absorption bands: (label, wavenumber, amplitude per occurrence).
pub const GROUP_TABLE: &[(&str, f64, f64)] = &[
    ("O-H stretch", 3350.0, 1.0),
    ("N-H stretch", 3400.0, 0.6),
    ("sp C-H stretch", 3300.0, 0.6),
    ("aromatic C-H stretch", 3050.0, 0.3),
    ("sp2 C-H stretch", 3080.0, 0.3),
    ("sp3 C-H stretch", 2950.0, 0.4),
    ("S-H stretch", 2550.0, 0.4),
    ("P-H stretch", 2350.0, 0.4),
    ("X-H stretch", 2200.0, 0.3),
    ("C#N stretch", 2250.0, 0.8),
    ("C#C stretch", 2150.0, 0.3),
    ("C=O stretch", 1715.0, 1.5),
    ("C=C stretch", 1650.0, 0.5),
    ("C=N stretch", 1660.0, 0.5),
    ("aromatic ring", 1600.0, 0.15),
    ("aromatic ring", 1500.0, 0.15),
    ("N=O stretch", 1530.0, 1.0),
    ("C-H bend", 1460.0, 0.2),
    ("P=O stretch", 1250.0, 1.0),
    ("C-N stretch", 1200.0, 0.5),
    ("S=O stretch", 1150.0, 1.0),
    ("C-F stretch", 1100.0, 1.0),
    ("C-O stretch", 1050.0, 1.0),
    ("skeletal", 900.0, 0.1),
    ("C-Cl stretch", 750.0, 0.8),
    ("C-Br stretch", 600.0, 0.7),
    ("C-I stretch", 500.0, 0.6),
];

fn band(label: &str) -> impl Iterator<Item = (f64, f64)> + '_ {
    GROUP_TABLE
        .iter()
        .filter(move |(l, _, _)| *l == label)
        .map(|&(_, w, a)| (w, a))
}

/// Counts each group occurrence as (label, multiplicity).
pub fn detect_groups(m: &MolGraph) -> Vec<(&'static str, usize)> {
    let mut hits: Vec<(&'static str, usize)> = Vec::new();
    let mut add = |label: &'static str, n: usize| {
        if n == 0 {
            return;
        }
        match hits.iter_mut().find(|(l, _)| *l == label) {
            Some(e) => e.1 += n,
            None => hits.push((label, n)),
        }
    };
    let atoms = m.atoms();
    for (v, a) in atoms.iter().enumerate() {
        let h = a.h_count as usize;
        let orders: Vec<BondOrder> = m.neighbors(v).iter().map(|&(_, bi)| m.bonds()[bi].order).collect();
        match a.element {
            Element::O => add("O-H stretch", h),
            Element::N => add("N-H stretch", h),
            Element::S => add("S-H stretch", h),
            Element::P => add("P-H stretch", h),
            Element::C => {
                if a.aromatic {
                    add("aromatic C-H stretch", h);
                } else if orders.contains(&BondOrder::Triple) {
                    add("sp C-H stretch", h);
                } else if orders.contains(&BondOrder::Double) {
                    add("sp2 C-H stretch", h);
                } else {
                    add("sp3 C-H stretch", h);
                    add("C-H bend", (h > 0) as usize);
                }
            }
            _ => add("X-H stretch", h),
        }
    }
    for b in m.bonds() {
        let (ea, eb) = (atoms[b.a].element, atoms[b.b].element);
        let pair = |x: Element, y: Element| (ea == x && eb == y) || (ea == y && eb == x);
        let label = match b.order {
            BondOrder::Aromatic => "aromatic ring",
            BondOrder::Double if pair(Element::C, Element::O) => "C=O stretch",
            BondOrder::Double if pair(Element::C, Element::C) => "C=C stretch",
            BondOrder::Double if pair(Element::C, Element::N) => "C=N stretch",
            BondOrder::Double if pair(Element::N, Element::O) => "N=O stretch",
            BondOrder::Double if pair(Element::S, Element::O) => "S=O stretch",
            BondOrder::Double if pair(Element::P, Element::O) => "P=O stretch",
            BondOrder::Triple if pair(Element::C, Element::N) => "C#N stretch",
            BondOrder::Triple if pair(Element::C, Element::C) => "C#C stretch",
            BondOrder::Single if pair(Element::C, Element::O) => "C-O stretch",
            BondOrder::Single if pair(Element::C, Element::N) => "C-N stretch",
            BondOrder::Single if pair(Element::C, Element::F) => "C-F stretch",
            BondOrder::Single if pair(Element::C, Element::CL) => "C-Cl stretch",
            BondOrder::Single if pair(Element::C, Element::BR) => "C-Br stretch",
            BondOrder::Single if pair(Element::C, Element::I) => "C-I stretch",
            _ => "skeletal",
        };
        add(label, 1);
    }
    hits
}

/// Group-frequency synthesis: Gaussians at tabulated wavenumbers per detected
/// group, scaled to a maximum of 1.
pub fn simulate_ir(m: &MolGraph) -> SpectrumIR {
    let mut intensity = vec![0.0; GRID_LEN];
    for (label, count) in detect_groups(m) {
        for (w0, amp) in band(label) {
            let a = amp * count as f64;
            for (i, y) in intensity.iter_mut().enumerate() {
                let w = GRID_START + GRID_STEP * i as f64;
                let z = (w - w0) / SIGMA;
                if z.abs() < 8.0 {
                    *y += a * (-0.5 * z * z).exp();
                }
            }
        }
    }
    let max = intensity.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        for y in intensity.iter_mut() {
            *y = (*y / max).clamp(0.0, 1.0);
        }
    }
    SpectrumIR {
        grid_start: GRID_START,
        grid_step: GRID_STEP,
        intensity,
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum IrTokenError {
    #[error("grid length {0} is not divisible by {IR_TOKENS}")]
    Indivisible(usize),
}

/// Splits the curve into 50 contiguous windows.
pub fn tokenize_ir(s: &SpectrumIR) -> Result<Vec<Vec<f64>>, IrTokenError> {
    let n = s.intensity.len();
    if n == 0 || n % IR_TOKENS != 0 {
        return Err(IrTokenError::Indivisible(n));
    }
    Ok(s.intensity.chunks(n / IR_TOKENS).map(<[f64]>::to_vec).collect())
}

pub fn untokenize_ir(tokens: &[Vec<f64>], grid_start: f64, grid_step: f64) -> SpectrumIR {
    SpectrumIR {
        grid_start,
        grid_step,
        intensity: tokens.concat(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    #[test]
    fn ethanol_bands() {
        let s = simulate_ir(&parse_smiles("CCO").unwrap());
        let maxima = s.local_maxima(0.05);
        for w in [3350.0, 1050.0] {
            let i = s.index_of(w);
            assert!(maxima.iter().any(|&m| m.abs_diff(i) <= 2), "{w}");
        }
    }

    #[test]
    fn propane_has_no_carbonyl() {
        let s = simulate_ir(&parse_smiles("CCC").unwrap());
        let (a, b) = (s.index_of(1600.0), s.index_of(1850.0));
        assert!(s.intensity[a..=b].iter().all(|&v| v <= 0.05));
    }

    #[test]
    fn benzene_aromatic_band() {
        let s = simulate_ir(&parse_smiles("c1ccccc1").unwrap());
        let i = s.index_of(1600.0);
        assert!(s.local_maxima(0.05).iter().any(|&m| m.abs_diff(i) <= 2));
    }

    #[test]
    fn lone_atom_is_silent() {
        assert!(simulate_ir(&parse_smiles("[Ar]").unwrap()).intensity.iter().all(|&v| v == 0.0));
        assert!(simulate_ir(&parse_smiles("C").unwrap()).intensity.iter().any(|&v| v > 0.0));
    }

    #[test]
    fn reshape_partition() {
        let s = simulate_ir(&parse_smiles("CC(=O)Nc1ccccc1").unwrap());
        let t = tokenize_ir(&s).unwrap();
        assert_eq!(t.len(), 50);
        assert!(t.iter().all(|w| w.len() == 36));
        assert_eq!(untokenize_ir(&t, s.grid_start, s.grid_step), s);
        let bad = SpectrumIR { intensity: vec![0.0; 7], ..s };
        assert_eq!(tokenize_ir(&bad), Err(IrTokenError::Indivisible(7)));
    }
}
