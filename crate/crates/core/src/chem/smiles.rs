//! SMILES reader.
//!
//! Supports the organic subset, bracket atoms (isotope, chirality, hydrogen
//! count, charge, atom class), branches, `.` disconnection, ring closures
//! `0-9` and `%nn`, and the bond symbols `- = # : / \`. Stereo markers are
//! kept as annotations.

use std::collections::BTreeMap;

use thiserror::Error;

use super::elements::Element;
use super::graph::{AtomNode, BondEdge, BondOrder, BondStereo, Chirality, GraphError, MolGraph};
use super::valence::implicit_hydrogens;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("empty SMILES")]
    Empty,
    #[error("ring bond {digit} opened at byte {opened_at} is never closed (detected at byte {offset})")]
    UnclosedRing {
        digit: u16,
        opened_at: usize,
        offset: usize,
    },
    #[error("unbalanced parenthesis at byte {offset}")]
    UnbalancedParenthesis { offset: usize },
    #[error("unknown element {symbol:?} at byte {offset}")]
    UnknownElement { symbol: String, offset: usize },
    #[error("malformed bracket atom at byte {offset}: {reason}")]
    BadBracketAtom { offset: usize, reason: &'static str },
    #[error("unexpected character {ch:?} at byte {offset}")]
    UnexpectedCharacter { ch: char, offset: usize },
    #[error("bond symbol at byte {offset} is not followed by an atom or ring closure")]
    DanglingBond { offset: usize },
    #[error("conflicting bond symbols for ring closure {digit} at byte {offset}")]
    ConflictingRingBond { digit: u16, offset: usize },
    #[error("invalid ring closure {digit} at byte {offset}: {reason}")]
    InvalidRingClosure {
        digit: u16,
        offset: usize,
        reason: &'static str,
    },
    #[error("explicit hydrogen atom at byte {offset} cannot be folded into a heavy atom")]
    UnsupportedHydrogen { offset: usize },
    #[error("{element} at byte {offset} has bond-order sum {bond_sum}, exceeding its allowed valences")]
    Valence {
        element: Element,
        bond_sum: u8,
        offset: usize,
    },
    #[error("aromatic bond at byte {offset} joins a non-aromatic atom")]
    AromaticBond { offset: usize },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

impl SmilesError {
    /// Byte offset the diagnostic points at, when there is one.
    pub fn offset(&self) -> Option<usize> {
        match self {
            SmilesError::Empty | SmilesError::Graph(_) => None,
            SmilesError::UnclosedRing { offset, .. }
            | SmilesError::UnbalancedParenthesis { offset }
            | SmilesError::UnknownElement { offset, .. }
            | SmilesError::BadBracketAtom { offset, .. }
            | SmilesError::UnexpectedCharacter { offset, .. }
            | SmilesError::DanglingBond { offset }
            | SmilesError::ConflictingRingBond { offset, .. }
            | SmilesError::InvalidRingClosure { offset, .. }
            | SmilesError::UnsupportedHydrogen { offset }
            | SmilesError::Valence { offset, .. }
            | SmilesError::AromaticBond { offset } => Some(*offset),
        }
    }
}

#[derive(Clone, Copy)]
struct PendingBond {
    order: Option<BondOrder>,
    stereo: BondStereo,
    offset: usize,
}

struct ParsedAtom {
    node: AtomNode,
    bracketed: bool,
    offset: usize,
}

struct RawBond {
    a: usize,
    b: usize,
    order: Option<BondOrder>,
    stereo: BondStereo,
    offset: usize,
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    atoms: Vec<ParsedAtom>,
    bonds: Vec<RawBond>,
    /// Bracket `[H]` atoms, folded into their neighbour afterwards.
    hydrogens: Vec<usize>,
}

/// Parses one SMILES string into a validated heavy-atom graph.
pub fn parse_smiles(text: &str) -> Result<MolGraph, SmilesError> {
    if text.trim().is_empty() {
        return Err(SmilesError::Empty);
    }
    let mut p = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        hydrogens: Vec::new(),
    };
    p.run()?;
    Ok(p.finish()?.with_source(text))
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        let mut prev: Option<usize> = None;
        let mut branches: Vec<(Option<usize>, usize)> = Vec::new();
        let mut pending: Option<PendingBond> = None;
        let mut rings: BTreeMap<u16, (usize, Option<PendingBond>, usize)> = BTreeMap::new();

        while let Some(c) = self.peek() {
            let offset = self.pos;
            match c {
                b'(' => {
                    if prev.is_none() || pending.is_some() {
                        return Err(SmilesError::UnbalancedParenthesis { offset });
                    }
                    branches.push((prev, offset));
                    self.pos += 1;
                }
                b')' => {
                    if let Some(b) = pending {
                        return Err(SmilesError::DanglingBond { offset: b.offset });
                    }
                    let (p, _) = branches
                        .pop()
                        .ok_or(SmilesError::UnbalancedParenthesis { offset })?;
                    prev = p;
                    self.pos += 1;
                }
                b'.' => {
                    if let Some(b) = pending {
                        return Err(SmilesError::DanglingBond { offset: b.offset });
                    }
                    if !branches.is_empty() {
                        // dot inside a branch is legal SMILES but rare; keep it simple
                        return Err(SmilesError::UnexpectedCharacter { ch: '.', offset });
                    }
                    prev = None;
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if pending.is_some() || prev.is_none() {
                        return Err(SmilesError::DanglingBond { offset });
                    }
                    let (order, stereo) = match c {
                        b'-' => (BondOrder::Single, BondStereo::None),
                        b'=' => (BondOrder::Double, BondStereo::None),
                        b'#' => (BondOrder::Triple, BondStereo::None),
                        b':' => (BondOrder::Aromatic, BondStereo::None),
                        b'/' => (BondOrder::Single, BondStereo::Up),
                        _ => (BondOrder::Single, BondStereo::Down),
                    };
                    pending = Some(PendingBond {
                        order: Some(order),
                        stereo,
                        offset,
                    });
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => {
                    let Some(atom) = prev else {
                        return Err(SmilesError::UnexpectedCharacter { ch: c as char, offset });
                    };
                    let digit = self.ring_number()?;
                    if let Some((other, open_bond, _)) = rings.remove(&digit) {
                        if other == atom {
                            return Err(SmilesError::InvalidRingClosure {
                                digit,
                                offset,
                                reason: "ring closes on its own atom",
                            });
                        }
                        let order = match (open_bond.and_then(|b| b.order), pending.and_then(|b| b.order)) {
                            (Some(x), Some(y)) if x != y => {
                                return Err(SmilesError::ConflictingRingBond { digit, offset });
                            }
                            (Some(x), _) | (None, Some(x)) => Some(x),
                            (None, None) => None,
                        };
                        let stereo = pending
                            .map(|b| b.stereo)
                            .filter(|s| *s != BondStereo::None)
                            .or(open_bond.map(|b| b.stereo))
                            .unwrap_or_default();
                        if self
                            .bonds
                            .iter()
                            .any(|b| (b.a == other && b.b == atom) || (b.a == atom && b.b == other))
                        {
                            return Err(SmilesError::InvalidRingClosure {
                                digit,
                                offset,
                                reason: "atoms are already bonded",
                            });
                        }
                        self.bonds.push(RawBond {
                            a: other,
                            b: atom,
                            order,
                            stereo,
                            offset,
                        });
                    } else {
                        rings.insert(digit, (atom, pending, offset));
                    }
                    pending = None;
                }
                b'[' => {
                    let idx = self.bracket_atom()?;
                    self.connect(prev, idx, pending.take());
                    prev = Some(idx);
                }
                _ if c.is_ascii_alphabetic() || c == b'*' => {
                    let idx = self.organic_atom()?;
                    self.connect(prev, idx, pending.take());
                    prev = Some(idx);
                }
                _ => {
                    let ch = self.text[offset..].chars().next().unwrap_or('?');
                    return Err(SmilesError::UnexpectedCharacter { ch, offset });
                }
            }
        }
        if let Some(b) = pending {
            return Err(SmilesError::DanglingBond { offset: b.offset });
        }
        if let Some(&(_, offset)) = branches.last() {
            return Err(SmilesError::UnbalancedParenthesis { offset });
        }
        if let Some((&digit, &(_, _, opened_at))) = rings.iter().next() {
            return Err(SmilesError::UnclosedRing {
                digit,
                opened_at,
                offset: self.bytes.len(),
            });
        }
        Ok(())
    }

    fn connect(&mut self, prev: Option<usize>, atom: usize, bond: Option<PendingBond>) {
        if let Some(p) = prev {
            self.bonds.push(RawBond {
                a: p,
                b: atom,
                order: bond.and_then(|b| b.order),
                stereo: bond.map(|b| b.stereo).unwrap_or_default(),
                offset: bond.map(|b| b.offset).unwrap_or(self.atoms[atom].offset),
            });
        }
    }

    fn ring_number(&mut self) -> Result<u16, SmilesError> {
        let offset = self.pos;
        if self.bytes[self.pos] == b'%' {
            let digits = self.bytes.get(self.pos + 1..self.pos + 3);
            match digits {
                Some(d) if d.iter().all(u8::is_ascii_digit) => {
                    self.pos += 3;
                    Ok(((d[0] - b'0') as u16) * 10 + (d[1] - b'0') as u16)
                }
                _ => Err(SmilesError::UnexpectedCharacter { ch: '%', offset }),
            }
        } else {
            self.pos += 1;
            Ok((self.bytes[offset] - b'0') as u16)
        }
    }

    fn push_atom(&mut self, node: AtomNode, bracketed: bool, offset: usize) -> usize {
        let idx = self.atoms.len();
        self.atoms.push(ParsedAtom {
            node,
            bracketed,
            offset,
        });
        idx
    }

    fn organic_atom(&mut self) -> Result<usize, SmilesError> {
        let offset = self.pos;
        let rest = &self.bytes[offset..];
        let (symbol, aromatic, len) = match rest {
            [b'C', b'l', ..] => ("Cl", false, 2),
            [b'B', b'r', ..] => ("Br", false, 2),
            [b'B', ..] => ("B", false, 1),
            [b'C', ..] => ("C", false, 1),
            [b'N', ..] => ("N", false, 1),
            [b'O', ..] => ("O", false, 1),
            [b'P', ..] => ("P", false, 1),
            [b'S', ..] => ("S", false, 1),
            [b'F', ..] => ("F", false, 1),
            [b'I', ..] => ("I", false, 1),
            [b'b', ..] => ("B", true, 1),
            [b'c', ..] => ("C", true, 1),
            [b'n', ..] => ("N", true, 1),
            [b'o', ..] => ("O", true, 1),
            [b'p', ..] => ("P", true, 1),
            [b's', ..] => ("S", true, 1),
            _ => {
                let symbol: String = self.text[offset..]
                    .chars()
                    .take_while(|c| c.is_ascii_alphabetic() || *c == '*')
                    .take(2)
                    .collect();
                return Err(SmilesError::UnknownElement { symbol, offset });
            }
        };
        self.pos += len;
        let mut node = AtomNode::new(Element::from_symbol(symbol).expect("organic subset"));
        node.aromatic = aromatic;
        Ok(self.push_atom(node, false, offset))
    }

    fn bracket_atom(&mut self) -> Result<usize, SmilesError> {
        let offset = self.pos;
        let close = self.text[offset..]
            .find(']')
            .map(|i| offset + i)
            .ok_or(SmilesError::BadBracketAtom {
                offset,
                reason: "missing ']'",
            })?;
        let body = &self.bytes[offset + 1..close];
        let bad = |reason| SmilesError::BadBracketAtom { offset, reason };
        let mut i = 0;

        let mut isotope: Option<u16> = None;
        let start = i;
        while i < body.len() && body[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            let v: u32 = std::str::from_utf8(&body[start..i])
                .unwrap()
                .parse()
                .map_err(|_| bad("isotope out of range"))?;
            isotope = Some(u16::try_from(v).map_err(|_| bad("isotope out of range"))?);
        }

        // element symbol
        if i >= body.len() {
            return Err(bad("missing element symbol"));
        }
        let (element, aromatic) = {
            let c0 = body[i];
            let c1 = body.get(i + 1).copied();
            if c0.is_ascii_uppercase() {
                let two = c1
                    .filter(u8::is_ascii_lowercase)
                    .and_then(|c1| Element::from_symbol(std::str::from_utf8(&[c0, c1]).unwrap()));
                if let Some(e) = two {
                    i += 2;
                    (e, false)
                } else {
                    let sym = (c0 as char).to_string();
                    let e = Element::from_symbol(&sym).ok_or_else(|| SmilesError::UnknownElement {
                        symbol: sym,
                        offset: offset + 1 + i,
                    })?;
                    i += 1;
                    (e, false)
                }
            } else if c0.is_ascii_lowercase() {
                let pair = c1.map(|c1| [c0, c1]);
                let two = match pair.as_ref().map(|p| &p[..]) {
                    Some(b"se") => Some(Element::from_symbol("Se").unwrap()),
                    Some(b"as") => Some(Element::from_symbol("As").unwrap()),
                    Some(b"te") => Some(Element::from_symbol("Te").unwrap()),
                    _ => None,
                };
                if let Some(e) = two {
                    i += 2;
                    (e, true)
                } else {
                    let e = match c0 {
                        b'b' => Element::B,
                        b'c' => Element::C,
                        b'n' => Element::N,
                        b'o' => Element::O,
                        b'p' => Element::P,
                        b's' => Element::S,
                        _ => {
                            return Err(SmilesError::UnknownElement {
                                symbol: (c0 as char).to_string(),
                                offset: offset + 1 + i,
                            })
                        }
                    };
                    i += 1;
                    (e, true)
                }
            } else if c0 == b'*' {
                return Err(SmilesError::UnknownElement {
                    symbol: "*".into(),
                    offset: offset + 1 + i,
                });
            } else {
                return Err(bad("missing element symbol"));
            }
        };

        let mut chirality = Chirality::None;
        if body.get(i) == Some(&b'@') {
            i += 1;
            chirality = Chirality::Anticlockwise;
            if body.get(i) == Some(&b'@') {
                i += 1;
                chirality = Chirality::Clockwise;
            } else if body.get(i).is_some_and(u8::is_ascii_uppercase) {
                while body.get(i).is_some_and(|c| c.is_ascii_uppercase() || c.is_ascii_digit()) {
                    i += 1;
                }
                chirality = Chirality::Other;
            }
        }

        let mut explicit_h: u8 = 0;
        if body.get(i) == Some(&b'H') {
            i += 1;
            explicit_h = 1;
            let start = i;
            while body.get(i).is_some_and(u8::is_ascii_digit) {
                i += 1;
            }
            if i > start {
                explicit_h = std::str::from_utf8(&body[start..i])
                    .unwrap()
                    .parse()
                    .map_err(|_| bad("hydrogen count out of range"))?;
            }
        }

        let mut charge: i32 = 0;
        if let Some(&sign @ (b'+' | b'-')) = body.get(i) {
            let s = if sign == b'+' { 1 } else { -1 };
            i += 1;
            let start = i;
            while body.get(i).is_some_and(u8::is_ascii_digit) {
                i += 1;
            }
            if i > start {
                let mag: i32 = std::str::from_utf8(&body[start..i])
                    .unwrap()
                    .parse()
                    .map_err(|_| bad("charge out of range"))?;
                charge = s * mag;
            } else {
                charge = s;
                while body.get(i) == Some(&sign) {
                    charge += s;
                    i += 1;
                }
            }
        }
        let formal_charge = i8::try_from(charge)
            .ok()
            .filter(|c| c.abs() <= 15)
            .ok_or(bad("charge out of range"))?;

        let mut atom_class = None;
        if body.get(i) == Some(&b':') {
            i += 1;
            let start = i;
            while body.get(i).is_some_and(u8::is_ascii_digit) {
                i += 1;
            }
            if i == start {
                return Err(bad("empty atom class"));
            }
            atom_class = Some(
                std::str::from_utf8(&body[start..i])
                    .unwrap()
                    .parse()
                    .map_err(|_| bad("atom class out of range"))?,
            );
        }
        if i != body.len() {
            return Err(bad("unexpected trailing characters"));
        }
        self.pos = close + 1;

        if element == Element::H {
            // [H] bonded to one heavy atom becomes part of that atom's H count.
            if isotope.is_some() || formal_charge != 0 || explicit_h != 0 {
                return Err(SmilesError::UnsupportedHydrogen { offset });
            }
            let idx = self.push_atom(AtomNode::new(Element::H), true, offset);
            self.hydrogens.push(idx);
            return Ok(idx);
        }

        let mut node = AtomNode::new(element);
        node.isotope = isotope;
        node.aromatic = aromatic;
        node.explicit_h = Some(explicit_h);
        node.h_count = explicit_h;
        node.formal_charge = formal_charge;
        node.chirality = chirality;
        node.atom_class = atom_class;
        Ok(self.push_atom(node, true, offset))
    }

    fn finish(self) -> Result<MolGraph, SmilesError> {
        let Parser {
            mut atoms,
            bonds,
            hydrogens,
            ..
        } = self;

        // Fold explicit hydrogen atoms into their heavy neighbour.
        let mut is_h = vec![false; atoms.len()];
        for &h in &hydrogens {
            is_h[h] = true;
        }
        let mut extra_h = vec![0u8; atoms.len()];
        let mut kept_bonds = Vec::with_capacity(bonds.len());
        let mut h_degree = vec![0usize; atoms.len()];
        for bond in bonds {
            match (is_h[bond.a], is_h[bond.b]) {
                (false, false) => kept_bonds.push(bond),
                (true, true) => {
                    return Err(SmilesError::UnsupportedHydrogen {
                        offset: atoms[bond.a].offset,
                    })
                }
                (ha, _) => {
                    let (h, heavy) = if ha { (bond.a, bond.b) } else { (bond.b, bond.a) };
                    if bond.order.is_some_and(|o| o != BondOrder::Single) {
                        return Err(SmilesError::UnsupportedHydrogen {
                            offset: atoms[h].offset,
                        });
                    }
                    h_degree[h] += 1;
                    extra_h[heavy] += 1;
                }
            }
        }
        for &h in &hydrogens {
            if h_degree[h] != 1 {
                return Err(SmilesError::UnsupportedHydrogen {
                    offset: atoms[h].offset,
                });
            }
        }

        // Compact indices to heavy atoms only.
        let mut remap = vec![usize::MAX; atoms.len()];
        let mut next = 0;
        for (i, flag) in is_h.iter().enumerate() {
            if !flag {
                remap[i] = next;
                next += 1;
            }
        }

        let mut edges = Vec::with_capacity(kept_bonds.len());
        let mut bond_sum = vec![0u8; atoms.len()];
        for b in &kept_bonds {
            let both_aromatic = atoms[b.a].node.aromatic && atoms[b.b].node.aromatic;
            let order = match b.order {
                Some(BondOrder::Aromatic) if !both_aromatic => {
                    return Err(SmilesError::AromaticBond { offset: b.offset })
                }
                Some(o) => o,
                None if both_aromatic => BondOrder::Aromatic,
                None => BondOrder::Single,
            };
            bond_sum[b.a] += order.valence();
            bond_sum[b.b] += order.valence();
            edges.push(BondEdge {
                a: remap[b.a],
                b: remap[b.b],
                order,
                stereo: b.stereo,
            });
        }

        let mut nodes = Vec::with_capacity(next);
        for (i, parsed) in atoms.iter_mut().enumerate() {
            if is_h[i] {
                continue;
            }
            let node = &mut parsed.node;
            if parsed.bracketed {
                node.h_count += extra_h[i];
                node.explicit_h = Some(node.h_count);
            } else {
                let sum = bond_sum[i] + extra_h[i];
                let implicit = implicit_hydrogens(node.element, node.aromatic, sum).ok_or(
                    SmilesError::Valence {
                        element: node.element,
                        bond_sum: sum,
                        offset: parsed.offset,
                    },
                )?;
                node.h_count = implicit + extra_h[i];
            }
            nodes.push(node.clone());
        }
        Ok(MolGraph::new(nodes, edges)?)
    }
}

/// Reads a line-oriented SMILES file body: blank lines and `#` comments are
/// skipped; only the first whitespace-separated field of each line is returned.
pub fn smiles_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            line.split_whitespace().next().map(|s| (i + 1, s))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_counts(s: &str) -> Vec<u8> {
        parse_smiles(s).unwrap().atoms().iter().map(|a| a.h_count).collect()
    }

    #[test]
    fn methane() {
        let g = parse_smiles("C").unwrap();
        assert_eq!(g.atom_count(), 1);
        assert_eq!(g.bonds().len(), 0);
        assert_eq!(g.atoms()[0].h_count, 4);
    }

    #[test]
    fn ethanol() {
        let g = parse_smiles("CCO").unwrap();
        assert_eq!(g.atom_count(), 3);
        assert_eq!(g.bonds().len(), 2);
        assert!(g.bonds().iter().all(|b| b.order == BondOrder::Single));
        assert_eq!(h_counts("CCO"), vec![3, 2, 1]);
    }

    #[test]
    fn benzene_ring_closure() {
        // Hand-expanded walk: atoms 0..5 in order, chain bonds 0-1..4-5, closure 0-5.
        let g = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(g.atom_count(), 6);
        assert!(g.atoms().iter().all(|a| a.aromatic && a.h_count == 1));
        let mut pairs: Vec<_> = g.bonds().iter().map(|b| (b.a, b.b, b.order)).collect();
        pairs.sort();
        let expected: Vec<_> = [(0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5)]
            .into_iter()
            .map(|(a, b)| (a, b, BondOrder::Aromatic))
            .collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn unclosed_ring_at_end() {
        match parse_smiles("C1CC") {
            Err(SmilesError::UnclosedRing {
                digit,
                opened_at,
                offset,
            }) => {
                assert_eq!(digit, 1);
                assert_eq!(opened_at, 1);
                assert_eq!(offset, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn error_offsets() {
        assert_eq!(
            parse_smiles("CC(C"),
            Err(SmilesError::UnbalancedParenthesis { offset: 2 })
        );
        assert_eq!(
            parse_smiles("CC)C"),
            Err(SmilesError::UnbalancedParenthesis { offset: 2 })
        );
        assert!(matches!(
            parse_smiles("CXC"),
            Err(SmilesError::UnknownElement { offset: 1, .. })
        ));
        assert!(matches!(
            parse_smiles("C[Xy]"),
            Err(SmilesError::UnknownElement { offset: 2, .. })
        ));
        assert!(matches!(
            parse_smiles("C[C"),
            Err(SmilesError::BadBracketAtom { offset: 1, .. })
        ));
        assert!(matches!(
            parse_smiles("[13]"),
            Err(SmilesError::BadBracketAtom { offset: 0, .. })
        ));
        assert!(matches!(parse_smiles("C="), Err(SmilesError::DanglingBond { offset: 1 })));
        assert_eq!(parse_smiles(""), Err(SmilesError::Empty));
    }

    #[test]
    fn bracket_atoms() {
        let g = parse_smiles("[13CH4]").unwrap();
        let a = &g.atoms()[0];
        assert_eq!(a.isotope, Some(13));
        assert_eq!(a.h_count, 4);
        let g = parse_smiles("[NH4+]").unwrap();
        assert_eq!(g.atoms()[0].formal_charge, 1);
        let g = parse_smiles("[O-]C(=O)C").unwrap();
        assert_eq!(g.atoms()[0].formal_charge, -1);
        assert_eq!(g.atoms()[0].h_count, 0);
        let g = parse_smiles("[Fe++]").unwrap();
        assert_eq!(g.atoms()[0].formal_charge, 2);
        let g = parse_smiles("c1cc[nH]c1").unwrap();
        assert_eq!(g.atoms()[3].h_count, 1);
        let g = parse_smiles("[C@@H](N)(C)C(=O)O").unwrap();
        assert_eq!(g.atoms()[0].chirality, Chirality::Clockwise);
        let g = parse_smiles("[CH3:7]C").unwrap();
        assert_eq!(g.atoms()[0].atom_class, Some(7));
    }

    #[test]
    fn explicit_hydrogen_atoms_fold() {
        let g = parse_smiles("[H]C([H])([H])[H]").unwrap();
        assert_eq!(g.atom_count(), 1);
        assert_eq!(g.atoms()[0].h_count, 4);
        let g = parse_smiles("[H]OC").unwrap();
        assert_eq!(g.atoms()[0].h_count, 1);
        assert!(parse_smiles("[H][H]").is_err());
        assert!(parse_smiles("[2H]C").is_err());
    }

    #[test]
    fn ring_bond_rules() {
        let g = parse_smiles("C=1CCCCC1").unwrap();
        assert_eq!(g.bond_between(0, 5).unwrap().order, BondOrder::Double);
        let g = parse_smiles("C1CCCCC=1").unwrap();
        assert_eq!(g.bond_between(0, 5).unwrap().order, BondOrder::Double);
        assert!(matches!(
            parse_smiles("C=1CCCCC#1"),
            Err(SmilesError::ConflictingRingBond { .. })
        ));
        assert!(matches!(
            parse_smiles("C11"),
            Err(SmilesError::InvalidRingClosure { .. })
        ));
        assert!(matches!(
            parse_smiles("C12CC12"),
            Err(SmilesError::InvalidRingClosure { .. })
        ));
        let g = parse_smiles("C%12CC%12").unwrap();
        assert_eq!(g.bonds().len(), 3);
    }

    #[test]
    fn aromatic_single_bond_and_stereo() {
        let g = parse_smiles("c1ccccc1-c1ccccc1").unwrap();
        assert_eq!(g.bond_between(5, 6).unwrap().order, BondOrder::Single);
        let g = parse_smiles("F/C=C/F").unwrap();
        assert_eq!(g.bonds()[0].stereo, BondStereo::Up);
        assert!(matches!(parse_smiles("C:C"), Err(SmilesError::AromaticBond { .. })));
    }

    #[test]
    fn valence_rejection() {
        assert!(matches!(parse_smiles("C(C)(C)(C)(C)C"), Err(SmilesError::Valence { .. })));
        assert!(matches!(parse_smiles("FCl(C)"), Err(SmilesError::Valence { .. })));
        assert_eq!(h_counts("CS(=O)(=O)C"), vec![3, 0, 0, 0, 3]);
        assert_eq!(h_counts("OP(=O)(O)O"), vec![1, 0, 0, 1, 1]);
    }

    #[test]
    fn disconnected() {
        let g = parse_smiles("[Na+].[Cl-]").unwrap();
        assert_eq!(g.atom_count(), 2);
        assert_eq!(g.components().len(), 2);
        assert!(parse_smiles("C..C").is_ok());
    }
}
