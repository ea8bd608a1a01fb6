//! Canonical atom ranking and canonical SMILES output.
//!
//! Ranks start from per-atom invariants and are refined Morgan-style by the
//! sorted ranks of neighbours until the partition stops splitting. Remaining
//! ties are individualized one class at a time; every non-twin member of the
//! tied class is tried and the lexicographically smallest SMILES wins, so the
//! result does not depend on input atom order.

use super::graph::{BondOrder, MolGraph};
use super::valence::implicit_hydrogens;

/// Upper bound on the number of complete labelings examined per molecule.
const SEARCH_BUDGET: usize = 2048;

type AtomKey = (u8, u16, i8, usize, u8, bool, u32);

fn initial_key(g: &MolGraph, v: usize) -> AtomKey {
    let a = &g.atoms()[v];
    (
        a.element.atomic_number(),
        a.isotope.unwrap_or(0),
        a.formal_charge,
        g.degree(v),
        a.h_count,
        a.aromatic,
        a.atom_class.map_or(0, |c| c + 1),
    )
}

/// Dense ranks (0..k) of `keys`, equal keys sharing a rank.
fn dense_ranks<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    let mut r = 0;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[order[i - 1]] != keys[v] {
            r += 1;
        }
        ranks[v] = r;
    }
    ranks
}

fn class_count(ranks: &[usize]) -> usize {
    ranks.iter().max().map_or(0, |m| m + 1)
}

/// Iteratively refines ranks by neighbour ranks until stable.
fn refine(g: &MolGraph, mut ranks: Vec<usize>) -> Vec<usize> {
    let mut classes = class_count(&ranks);
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..g.atom_count())
            .map(|v| {
                let mut nb: Vec<(usize, u8)> = g
                    .neighbors(v)
                    .iter()
                    .map(|&(u, bi)| (ranks[u], g.bonds()[bi].order.code()))
                    .collect();
                nb.sort_unstable();
                (ranks[v], nb)
            })
            .collect();
        let next = dense_ranks(&keys);
        let next_classes = class_count(&next);
        ranks = next;
        if next_classes == classes {
            return ranks;
        }
        classes = next_classes;
    }
}

/// Symmetry classes from invariant refinement alone (no tie breaking).
/// Atoms related by a graph automorphism always share a class.
pub fn symmetry_classes(g: &MolGraph) -> Vec<usize> {
    let keys: Vec<_> = (0..g.atom_count()).map(|v| initial_key(g, v)).collect();
    refine(g, dense_ranks(&keys))
}

/// Per-atom canonical rank (a permutation of 0..n). Isomorphic inputs receive
/// ranks that map onto each other through the isomorphism.
pub fn canonical_rank(g: &MolGraph) -> Vec<usize> {
    canonicalize(g).1
}

/// Canonical SMILES. Stereo annotations are not written.
pub fn write_smiles(g: &MolGraph) -> String {
    canonicalize(g).0
}

fn canonicalize(g: &MolGraph) -> (String, Vec<usize>) {
    if g.atom_count() == 0 {
        return (String::new(), Vec::new());
    }
    let mut search = Search {
        g,
        best: None,
        leaves: 0,
    };
    search.explore(symmetry_classes(g));
    search.best.expect("at least one labeling")
}

struct Search<'a> {
    g: &'a MolGraph,
    best: Option<(String, Vec<usize>)>,
    leaves: usize,
}

impl Search<'_> {
    fn explore(&mut self, ranks: Vec<usize>) {
        let n = self.g.atom_count();
        if class_count(&ranks) == n {
            self.leaves += 1;
            let s = emit(self.g, &ranks);
            if self.best.as_ref().is_none_or(|(b, _)| s < *b) {
                self.best = Some((s, ranks));
            }
            return;
        }
        // first tied class with the lowest rank value
        let mut sizes = vec![0usize; class_count(&ranks)];
        for &r in &ranks {
            sizes[r] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).expect("a tied class");
        let members: Vec<usize> = (0..n).filter(|&v| ranks[v] == target).collect();

        let mut reps: Vec<usize> = Vec::new();
        for &v in &members {
            if !reps.iter().any(|&r| self.twins(r, v)) {
                reps.push(v);
            }
        }
        for (i, &chosen) in reps.iter().enumerate() {
            if i > 0 && self.leaves >= SEARCH_BUDGET {
                break;
            }
            let keys: Vec<(usize, bool)> = (0..n)
                .map(|v| (ranks[v], !(ranks[v] == target && v == chosen)))
                .collect();
            let split = refine(self.g, dense_ranks(&keys));
            self.explore(split);
        }
    }

    /// Two atoms whose neighbourhoods coincide (apart from each other) can be
    /// swapped by an automorphism that fixes everything else.
    fn twins(&self, u: usize, v: usize) -> bool {
        let g = self.g;
        let hood = |x: usize, other: usize| {
            let mut nb: Vec<(usize, BondOrder)> = g
                .neighbors(x)
                .iter()
                .filter(|&&(w, _)| w != other)
                .map(|&(w, bi)| (w, g.bonds()[bi].order))
                .collect();
            nb.sort_unstable();
            nb
        };
        hood(u, v) == hood(v, u)
    }
}

fn bond_symbol(g: &MolGraph, a: usize, b: usize, order: BondOrder) -> &'static str {
    match order {
        BondOrder::Single => {
            if g.atoms()[a].aromatic && g.atoms()[b].aromatic {
                "-"
            } else {
                ""
            }
        }
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Aromatic => "",
    }
}

fn atom_symbol(g: &MolGraph, v: usize, out: &mut String) {
    let a = &g.atoms()[v];
    let sym = a.element.symbol();
    let organic_ok = a.element.is_organic_subset()
        && a.formal_charge == 0
        && a.isotope.is_none()
        && a.atom_class.is_none()
        && implicit_hydrogens(a.element, a.aromatic, g.bond_order_sum(v)) == Some(a.h_count);
    if organic_ok {
        if a.aromatic {
            out.push_str(&sym.to_ascii_lowercase());
        } else {
            out.push_str(sym);
        }
        return;
    }
    out.push('[');
    if let Some(iso) = a.isotope {
        out.push_str(&iso.to_string());
    }
    if a.aromatic {
        out.push_str(&sym.to_ascii_lowercase());
    } else {
        out.push_str(sym);
    }
    match a.h_count {
        0 => {}
        1 => out.push('H'),
        h => {
            out.push('H');
            out.push_str(&h.to_string());
        }
    }
    match a.formal_charge {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        c if c > 0 => out.push_str(&format!("+{c}")),
        c => out.push_str(&format!("-{}", -c)),
    }
    if let Some(class) = a.atom_class {
        out.push_str(&format!(":{class}"));
    }
    out.push(']');
}

fn ring_label(d: usize, out: &mut String) {
    if d < 10 {
        out.push(char::from(b'0' + d as u8));
    } else {
        out.push_str(&format!("%{d:02}"));
    }
}

/// Writes a SMILES string whose traversal is fully determined by `ranks`
/// (a permutation): roots, branch order and ring-closure digits all follow rank.
pub fn emit(g: &MolGraph, ranks: &[usize]) -> String {
    let n = g.atom_count();
    let sorted_nb: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|v| {
            let mut nb = g.neighbors(v).to_vec();
            nb.sort_by_key(|&(u, _)| ranks[u]);
            nb
        })
        .collect();

    // Pass 1: DFS to classify tree edges and ring-closure edges.
    let mut visited = vec![false; n];
    let mut parent_bond = vec![usize::MAX; n];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    // ring closures per atom: (partner, bond index)
    let mut closures: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut visit_order = vec![usize::MAX; n];
    let mut counter = 0;
    let mut is_tree_or_ring = vec![false; g.bonds().len()];

    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| ranks[v]);
    let mut component_roots = Vec::new();
    for &root in &roots {
        if visited[root] {
            continue;
        }
        component_roots.push(root);
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        visited[root] = true;
        visit_order[root] = counter;
        counter += 1;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 >= sorted_nb[v].len() {
                stack.pop();
                continue;
            }
            let (u, bi) = sorted_nb[v][top.1];
            top.1 += 1;
            if bi == parent_bond[v] || is_tree_or_ring[bi] {
                continue;
            }
            is_tree_or_ring[bi] = true;
            if visited[u] {
                closures[v].push((u, bi));
                closures[u].push((v, bi));
            } else {
                visited[u] = true;
                visit_order[u] = counter;
                counter += 1;
                parent_bond[u] = bi;
                children[v].push((u, bi));
                stack.push((u, 0));
            }
        }
    }

    // Pass 2: write.
    let mut out = String::with_capacity(n * 2);
    let mut digit_of_bond: Vec<Option<usize>> = vec![None; g.bonds().len()];
    let mut in_use: Vec<bool> = Vec::new();
    for (ci, &root) in component_roots.iter().enumerate() {
        if ci > 0 {
            out.push('.');
        }
        enum Item {
            Atom(usize, usize),
            Open,
            Close,
        }
        let mut work = vec![Item::Atom(root, usize::MAX)];
        while let Some(item) = work.pop() {
            match item {
                Item::Close => out.push(')'),
                Item::Atom(v, via) => {
                    if via != usize::MAX {
                        let b = &g.bonds()[via];
                        out.push_str(bond_symbol(g, b.a, b.b, b.order));
                    }
                    atom_symbol(g, v, &mut out);
                    // closings first (by partner visit order), then openings (by partner rank)
                    let mut ring_here = closures[v].clone();
                    ring_here.sort_by_key(|&(u, _)| {
                        let opening = visit_order[u] > visit_order[v];
                        (opening, if opening { ranks[u] } else { visit_order[u] })
                    });
                    let mut freed = Vec::new();
                    for (u, bi) in ring_here {
                        if visit_order[u] < visit_order[v] {
                            let d = digit_of_bond[bi].expect("ring opened earlier");
                            ring_label(d, &mut out);
                            freed.push(d);
                        } else {
                            let d = (1..)
                                .find(|&d| in_use.get(d).is_none_or(|used| !used))
                                .expect("free digit");
                            if in_use.len() <= d {
                                in_use.resize(d + 1, false);
                            }
                            in_use[d] = true;
                            digit_of_bond[bi] = Some(d);
                            let b = &g.bonds()[bi];
                            out.push_str(bond_symbol(g, b.a, b.b, b.order));
                            ring_label(d, &mut out);
                        }
                    }
                    for d in freed {
                        in_use[d] = false;
                    }
                    let kids = &children[v];
                    // push in reverse so the lowest-ranked child is written first
                    for (k, &(u, bi)) in kids.iter().enumerate().rev() {
                        if k + 1 == kids.len() {
                            work.push(Item::Atom(u, bi));
                        } else {
                            work.push(Item::Close);
                            work.push(Item::Atom(u, bi));
                            work.push(Item::Open);
                        }
                    }
                }
                Item::Open => out.push('('),
            }
        }
    }
    out
}
