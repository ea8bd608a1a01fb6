use std::collections::BTreeMap;

use super::elements::Element;
use super::graph::MolGraph;

/// Element counts including hydrogens, keyed by atomic number.
pub fn element_counts(m: &MolGraph) -> BTreeMap<Element, usize> {
    let mut counts = BTreeMap::new();
    let mut h = 0usize;
    for a in m.atoms() {
        *counts.entry(a.element).or_insert(0) += 1;
        h += a.h_count as usize;
    }
    if h > 0 {
        counts.insert(Element::H, h);
    }
    counts
}

/// Hill-order formula: C then H then the rest alphabetically (alphabetical
/// throughout when there is no carbon), followed by the net charge sign.
pub fn molecular_formula(m: &MolGraph) -> String {
    let counts = element_counts(m);
    let mut order: Vec<(Element, usize)> = counts.into_iter().collect();
    let has_carbon = order.iter().any(|(e, _)| *e == Element::C);
    order.sort_by(|(a, _), (b, _)| {
        let rank = |e: &Element| -> (u8, &'static str) {
            if has_carbon && *e == Element::C {
                (0, "")
            } else if has_carbon && *e == Element::H {
                (1, "")
            } else {
                (2, e.symbol())
            }
        };
        rank(a).cmp(&rank(b))
    });
    let mut out = String::new();
    for (e, n) in order {
        out.push_str(e.symbol());
        if n > 1 {
            out.push_str(&n.to_string());
        }
    }
    let charge: i32 = m.atoms().iter().map(|a| a.formal_charge as i32).sum();
    match charge {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        c if c > 0 => out.push_str(&format!("+{c}")),
        c => out.push_str(&format!("-{}", -c)),
    }
    out
}

/// Neutral monoisotopic mass, honouring isotope labels.
pub fn monoisotopic_mass(m: &MolGraph) -> f64 {
    m.atoms().iter().map(|a| a.mass_with_hydrogens()).sum()
}

pub fn heavy_atom_count(m: &MolGraph) -> usize {
    m.atom_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    // Standard isotope masses used by the oracles below.
    const C12: f64 = 12.000000;
    const H1: f64 = 1.007825;
    const O16: f64 = 15.994915;
    const C13: f64 = 13.003355;

    fn formula(s: &str) -> String {
        molecular_formula(&parse_smiles(s).unwrap())
    }

    fn mass(s: &str) -> f64 {
        monoisotopic_mass(&parse_smiles(s).unwrap())
    }

    #[test]
    fn hill_formulas() {
        assert_eq!(formula("CCO"), "C2H6O");
        assert_eq!(formula("C"), "CH4");
        assert_eq!(formula("c1ccccc1"), "C6H6");
        assert_eq!(formula("[NH4+]"), "H4N+");
        assert_eq!(formula("OS(=O)(=O)[O-]"), "HO4S-");
        assert_eq!(formula("ClC(Cl)Cl"), "CHCl3");
        assert_eq!(formula("[O-]C(=O)C(=O)[O-]"), "C2O4-2");
        assert_eq!(formula("O"), "H2O");
    }

    #[test]
    fn masses() {
        assert!((mass("C") - (C12 + 4.0 * H1)).abs() < 5e-4);
        assert!((mass("C") - 16.0313).abs() < 5e-4);
        assert!((mass("CCO") - (2.0 * C12 + 6.0 * H1 + O16)).abs() < 5e-4);
        assert!((mass("CCO") - 46.0419).abs() < 5e-4);
        assert!((mass("[13CH4]") - (C13 + 4.0 * H1)).abs() < 5e-4);
        assert!((mass("[13CH4]") - 17.0347).abs() < 5e-4);
    }

    #[test]
    fn heavy_atoms() {
        for (s, n) in [("CCO", 3), ("C", 1), ("c1ccccc1", 6)] {
            assert_eq!(heavy_atom_count(&parse_smiles(s).unwrap()), n);
        }
    }
}
