use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::elements::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to an atom's valence; aromatic bonds count as one.
    pub fn valence(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }
}

/// Tetrahedral marker copied from the input. Carried as an annotation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    #[default]
    None,
    /// `@`
    Anticlockwise,
    /// `@@`
    Clockwise,
    /// Any other `@XXn` form.
    Other,
}

/// Directional single-bond marker (`/` or `\`). Annotation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondStereo {
    #[default]
    None,
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomNode {
    pub index: usize,
    pub element: Element,
    #[serde(default)]
    pub formal_charge: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isotope: Option<u16>,
    /// Hydrogen count written inside brackets, if the atom was bracketed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_h: Option<u8>,
    /// Total attached hydrogens (explicit or derived from the valence table).
    pub h_count: u8,
    #[serde(default)]
    pub aromatic: bool,
    #[serde(default, skip_serializing_if = "is_default")]
    pub chirality: Chirality,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom_class: Option<u32>,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

impl AtomNode {
    pub fn new(element: Element) -> Self {
        AtomNode {
            index: 0,
            element,
            formal_charge: 0,
            isotope: None,
            explicit_h: None,
            h_count: 0,
            aromatic: false,
            chirality: Chirality::None,
            atom_class: None,
        }
    }

    /// Mass of the atom's nucleus choice (isotope label honoured), without hydrogens.
    pub fn mass(&self) -> f64 {
        match self.isotope {
            Some(a) => self.element.isotope_mass(a),
            None => self.element.monoisotopic_mass(),
        }
    }

    /// Mass including attached hydrogens.
    pub fn mass_with_hydrogens(&self) -> f64 {
        self.mass() + self.h_count as f64 * Element::H.monoisotopic_mass()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BondEdge {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    #[serde(default, skip_serializing_if = "is_default")]
    pub stereo: BondStereo,
}

impl BondEdge {
    pub fn other(&self, atom: usize) -> usize {
        if atom == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("bond {bond} references atom {atom}, but the graph has {len} atoms")]
    AtomOutOfRange { bond: usize, atom: usize, len: usize },
    #[error("bond {bond} connects atom {atom} to itself")]
    SelfLoop { bond: usize, atom: usize },
    #[error("atoms {a} and {b} are bonded more than once")]
    DuplicateBond { a: usize, b: usize },
    #[error("aromatic bond {bond} joins a non-aromatic atom")]
    AromaticBondOnAliphaticAtom { bond: usize },
    #[error("element {element} at atom {atom} cannot be aromatic")]
    AromaticElement { atom: usize, element: Element },
    #[error("hydrogen atoms must be folded into heavy-atom hydrogen counts (atom {atom})")]
    HydrogenNode { atom: usize },
}

/// Undirected typed graph of heavy atoms. Hydrogens live in `AtomNode::h_count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct MolGraph {
    atoms: Vec<AtomNode>,
    bonds: Vec<BondEdge>,
    source_smiles: Option<String>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    atoms: Vec<AtomNode>,
    bonds: Vec<BondEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source_smiles: Option<String>,
}

impl TryFrom<RawGraph> for MolGraph {
    type Error = GraphError;
    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        let mut g = MolGraph::new(raw.atoms, raw.bonds)?;
        g.source_smiles = raw.source_smiles;
        Ok(g)
    }
}

impl From<MolGraph> for RawGraph {
    fn from(g: MolGraph) -> Self {
        RawGraph {
            atoms: g.atoms,
            bonds: g.bonds,
            source_smiles: g.source_smiles,
        }
    }
}

impl MolGraph {
    /// Builds a graph, normalizing bond endpoints (`a < b`) and atom indices, and
    /// checking every structural invariant.
    pub fn new(mut atoms: Vec<AtomNode>, mut bonds: Vec<BondEdge>) -> Result<Self, GraphError> {
        let n = atoms.len();
        for (i, atom) in atoms.iter_mut().enumerate() {
            atom.index = i;
            if atom.element == Element::H {
                return Err(GraphError::HydrogenNode { atom: i });
            }
            if atom.aromatic && !atom.element.can_be_aromatic() {
                return Err(GraphError::AromaticElement {
                    atom: i,
                    element: atom.element,
                });
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, bond) in bonds.iter_mut().enumerate() {
            for atom in [bond.a, bond.b] {
                if atom >= n {
                    return Err(GraphError::AtomOutOfRange { bond: i, atom, len: n });
                }
            }
            if bond.a == bond.b {
                return Err(GraphError::SelfLoop { bond: i, atom: bond.a });
            }
            if bond.a > bond.b {
                std::mem::swap(&mut bond.a, &mut bond.b);
            }
            if bond.order == BondOrder::Aromatic && !(atoms[bond.a].aromatic && atoms[bond.b].aromatic)
            {
                return Err(GraphError::AromaticBondOnAliphaticAtom { bond: i });
            }
            if adjacency[bond.a].iter().any(|&(nb, _)| nb == bond.b) {
                return Err(GraphError::DuplicateBond { a: bond.a, b: bond.b });
            }
            adjacency[bond.a].push((bond.b, i));
            adjacency[bond.b].push((bond.a, i));
        }
        Ok(MolGraph {
            atoms,
            bonds,
            source_smiles: None,
            adjacency,
        })
    }

    pub fn with_source(mut self, smiles: impl Into<String>) -> Self {
        self.source_smiles = Some(smiles.into());
        self
    }

    pub fn atoms(&self) -> &[AtomNode] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[BondEdge] {
        &self.bonds
    }

    pub fn source_smiles(&self) -> Option<&str> {
        self.source_smiles.as_deref()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// `(neighbour, bond index)` pairs of an atom.
    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&BondEdge> {
        self.adjacency[a]
            .iter()
            .find(|&&(nb, _)| nb == b)
            .map(|&(_, bi)| &self.bonds[bi])
    }

    /// Sum of bond valence contributions (aromatic counted as one).
    pub fn bond_order_sum(&self, atom: usize) -> u8 {
        self.adjacency[atom]
            .iter()
            .map(|&(_, bi)| self.bonds[bi].order.valence())
            .sum()
    }

    /// Relabels atoms: atom `i` of `self` becomes atom `perm[i]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> MolGraph {
        assert_eq!(perm.len(), self.atoms.len(), "permutation length mismatch");
        let mut atoms = self.atoms.clone();
        for (old, atom) in self.atoms.iter().enumerate() {
            atoms[perm[old]] = atom.clone();
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| BondEdge {
                a: perm[b.a],
                b: perm[b.b],
                ..b.clone()
            })
            .collect();
        let mut g = MolGraph::new(atoms, bonds).expect("permutation preserves validity");
        g.source_smiles = self.source_smiles.clone();
        g
    }

    /// Connected components as sorted atom index lists, ordered by lowest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for &(nb, _) in &self.adjacency[v] {
                    if !seen[nb] {
                        seen[nb] = true;
                        comp.push(nb);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Marks bonds that lie on at least one cycle.
    pub fn ring_bonds(&self) -> Vec<bool> {
        // Tarjan bridge finding; every non-bridge is a ring bond.
        let n = self.atoms.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_bridge = vec![false; self.bonds.len()];
        let mut timer = 0usize;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent bond, next neighbour position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(top) = stack.last_mut() {
                let (v, parent_bond) = (top.0, top.1);
                if top.2 < self.adjacency[v].len() {
                    let (nb, bi) = self.adjacency[v][top.2];
                    top.2 += 1;
                    if bi == parent_bond {
                        continue;
                    }
                    if disc[nb] == usize::MAX {
                        disc[nb] = timer;
                        low[nb] = timer;
                        timer += 1;
                        stack.push((nb, bi, 0));
                    } else {
                        low[v] = low[v].min(disc[nb]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            is_bridge[parent_bond] = true;
                        }
                    }
                }
            }
        }
        is_bridge.iter().map(|b| !b).collect()
    }

    /// Structural isomorphism on element, charge, isotope, hydrogen count,
    /// aromaticity and bond order. Stereo annotations are ignored.
    pub fn is_isomorphic_to(&self, other: &MolGraph) -> bool {
        if self.atoms.len() != other.atoms.len() || self.bonds.len() != other.bonds.len() {
            return false;
        }
        let a = self.to_petgraph();
        let b = other.to_petgraph();
        petgraph::algo::is_isomorphic_matching(&a, &b, |x, y| x == y, |x, y| x == y)
    }

    fn to_petgraph(&self) -> petgraph::graph::UnGraph<(u8, i8, u16, u8, bool), BondOrder> {
        let mut g = petgraph::graph::UnGraph::with_capacity(self.atoms.len(), self.bonds.len());
        let nodes: Vec<_> = self
            .atoms
            .iter()
            .map(|a| {
                g.add_node((
                    a.element.atomic_number(),
                    a.formal_charge,
                    a.isotope.unwrap_or(0),
                    a.h_count,
                    a.aromatic,
                ))
            })
            .collect();
        for b in &self.bonds {
            g.add_edge(nodes[b.a], nodes[b.b], b.order);
        }
        g
    }
}
