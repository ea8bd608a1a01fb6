//! Molecular graphs: SMILES reading and canonical writing, formulas and masses,
//! reaction strings.

mod canon;
mod elements;
mod formula;
mod graph;
mod reaction;
mod smiles;
mod valence;

pub use canon::{canonical_rank, emit, symmetry_classes, write_smiles};
pub use elements::Element;
pub use formula::{element_counts, heavy_atom_count, molecular_formula, monoisotopic_mass};
pub use graph::{AtomNode, BondEdge, BondOrder, BondStereo, Chirality, GraphError, MolGraph};
pub use reaction::{parse_reaction, Reaction, ReactionError, ReactionRole};
pub use smiles::{parse_smiles, smiles_lines, SmilesError};
pub use valence::implicit_hydrogens;

/// Parses and re-writes in canonical form.
pub fn canonical_smiles(text: &str) -> Result<String, SmilesError> {
    parse_smiles(text).map(|g| write_smiles(&g))
}
