use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::chem::{monoisotopic_mass, BondOrder, MolGraph};

/// Peak list sorted by m/z with intensities normalized to a maximum of 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMS2 {
    pub precursor_mz: f64,
    pub peaks: Vec<(f64, f64)>,
}

impl SpectrumMS2 {
    pub fn n_peaks(&self) -> usize {
        self.peaks.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "precursor_mz": self.precursor_mz,
            "peaks": self.peaks.iter().map(|&(m, i)| [m, i]).collect::<Vec<_>>(),
        })
    }

    /// `MS21`, u32 peak count, f32 precursor, then (mz, intensity) f32 pairs.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + 8 * self.peaks.len());
        out.extend_from_slice(b"MS21");
        out.extend_from_slice(&(self.peaks.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.precursor_mz as f32).to_le_bytes());
        for &(m, i) in &self.peaks {
            out.extend_from_slice(&(m as f32).to_le_bytes());
            out.extend_from_slice(&(i as f32).to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Option<Self> {
        if bytes.len() < 12 || &bytes[..4] != b"MS21" {
            return None;
        }
        let n = u32::from_le_bytes(bytes[4..8].try_into().ok()?) as usize;
        if bytes.len() != 12 + 8 * n {
            return None;
        }
        let f = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as f64;
        Some(SpectrumMS2 {
            precursor_mz: f(8),
            peaks: (0..n).map(|k| (f(12 + 8 * k), f(16 + 8 * k))).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ms2Settings {
    pub depth: u32,
    pub bin_width: f64,
    pub decay: f64,
}

impl Default for Ms2Settings {
    fn default() -> Self {
        Ms2Settings {
            depth: 2,
            bin_width: 0.1,
            decay: 0.5,
        }
    }
}

/// Bonds that may break: acyclic, non-aromatic single bonds.
pub fn cleavable_bonds(m: &MolGraph) -> Vec<bool> {
    let ring = m.ring_bonds();
    m.bonds()
        .iter()
        .zip(ring)
        .map(|(b, in_ring)| b.order == BondOrder::Single && !in_ring)
        .collect()
}

/// Mass of an atom subset with every atom keeping its hydrogens.
pub fn fragment_mass(m: &MolGraph, atoms: &[usize]) -> f64 {
    atoms.iter().map(|&a| m.atoms()[a].mass_with_hydrogens()).sum()
}

/// Atoms reachable from `start` inside `members` without crossing `cut`.
fn side(m: &MolGraph, members: &[bool], start: usize, cut: usize) -> Vec<usize> {
    let mut seen = vec![false; m.atom_count()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        out.push(v);
        for &(u, bi) in m.neighbors(v) {
            if bi != cut && members[u] && !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every distinct fragment (as a sorted atom list) reachable by at most
/// `depth` successive cleavages, with the fewest cleavages needed.
pub fn fragments(m: &MolGraph, depth: u32) -> Vec<(Vec<usize>, u32)> {
    let all: Vec<usize> = (0..m.atom_count()).collect();
    let cleavable = cleavable_bonds(m);
    let mut seen: HashSet<Vec<usize>> = HashSet::from([all.clone()]);
    let mut out = vec![(all.clone(), 0)];
    let mut frontier = vec![all];
    for d in 1..=depth {
        let mut next = Vec::new();
        for frag in &frontier {
            let mut members = vec![false; m.atom_count()];
            for &a in frag {
                members[a] = true;
            }
            for (bi, b) in m.bonds().iter().enumerate() {
                if !cleavable[bi] || !members[b.a] || !members[b.b] {
                    continue;
                }
                for piece in [side(m, &members, b.a, bi), side(m, &members, b.b, bi)] {
                    if seen.insert(piece.clone()) {
                        out.push((piece.clone(), d));
                        next.push(piece);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// Bins (mass, intensity) contributions: intensities summed per bin, peak
/// position the intensity-weighted mean, then scaled to a maximum of 1.
pub fn bin_peaks(contributions: &[(f64, f64)], bin_width: f64) -> Vec<(f64, f64)> {
    let mut bins: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for &(mz, w) in contributions {
        let entry = bins.entry((mz / bin_width).floor() as i64).or_insert((0.0, 0.0));
        entry.0 += mz * w;
        entry.1 += w;
    }
    let max = bins.values().map(|v| v.1).fold(0.0, f64::max);
    bins.values().map(|&(mw, w)| (mw / w, w / max)).collect()
}

/// Rule-based MS2 spectrum from exhaustive cleavage of acyclic single bonds.
pub fn simulate_ms2(m: &MolGraph, depth: u32) -> SpectrumMS2 {
    simulate_ms2_with(
        m,
        &Ms2Settings {
            depth,
            ..Ms2Settings::default()
        },
    )
}

pub fn simulate_ms2_with(m: &MolGraph, s: &Ms2Settings) -> SpectrumMS2 {
    let contributions: Vec<(f64, f64)> = fragments(m, s.depth)
        .into_iter()
        .map(|(atoms, d)| (fragment_mass(m, &atoms), s.decay.powi(d as i32)))
        .collect();
    SpectrumMS2 {
        precursor_mz: monoisotopic_mass(m),
        peaks: bin_peaks(&contributions, s.bin_width),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    #[test]
    fn methane_single_peak() {
        let s = simulate_ms2(&parse_smiles("C").unwrap(), 1);
        assert_eq!(s.n_peaks(), 1);
        assert!((s.peaks[0].0 - 16.0313).abs() < 1e-3);
        assert_eq!(s.peaks[0].1, 1.0);
    }

    #[test]
    fn ethanol_depth_one() {
        let s = simulate_ms2(&parse_smiles("CCO").unwrap(), 1);
        let expected = [15.0235, 17.0027, 29.0391, 31.0184, 46.0419];
        assert_eq!(s.n_peaks(), 5);
        for (p, e) in s.peaks.iter().zip(expected) {
            assert!((p.0 - e).abs() < 1e-3, "{p:?} vs {e}");
        }
        assert_eq!(s.peaks[4].1, 1.0);
        assert_eq!(s.peaks[0].1, 0.5);
    }

    #[test]
    fn ring_bonds_do_not_fragment() {
        let s = simulate_ms2(&parse_smiles("C1CCCCC1").unwrap(), 2);
        assert_eq!(s.n_peaks(), 1);
        let t = simulate_ms2(&parse_smiles("c1ccccc1C").unwrap(), 1);
        assert_eq!(t.n_peaks(), 3);
    }

    #[test]
    fn binary_round_trip() {
        let s = simulate_ms2(&parse_smiles("CCOC(=O)C").unwrap(), 2);
        let back = SpectrumMS2::from_binary(&s.to_binary()).unwrap();
        assert_eq!(back.n_peaks(), s.n_peaks());
        for (a, b) in back.peaks.iter().zip(&s.peaks) {
            assert!((a.0 - b.0).abs() < 1e-4);
        }
    }
}
