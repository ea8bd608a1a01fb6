use ndarray::{Array1, Array2, Axis};

use super::{element_bucket, gaussian, normalize_rows, weight_rng, Modality, ELEMENT_BUCKETS};
use crate::chem::{BondOrder, MolGraph};

pub const GIN_LAYERS: usize = 5;
const DIM: usize = 300;
const HIDDEN: usize = 600;
/// Self-loop weight `1 + eps`, fixed since nothing is trained.
const EPS: f64 = 0.1;
const ATOM_FEATURES: usize = ELEMENT_BUCKETS + 6 + 3 + 5 + 2;

struct GinLayer {
    bond: Array2<f64>,
    w1: Array2<f64>,
    b1: Array1<f64>,
    w2: Array2<f64>,
    b2: Array1<f64>,
}

/// Edge-aware GIN: each layer sums `relu(h_u + e_uv)` over neighbours, adds
/// `(1 + eps) h_v`, then applies a two-layer MLP and row normalization.
pub struct GraphEncoder {
    embed: Array2<f64>,
    layers: Vec<GinLayer>,
}

fn bond_index(o: BondOrder) -> usize {
    match o {
        BondOrder::Single => 0,
        BondOrder::Double => 1,
        BondOrder::Triple => 2,
        BondOrder::Aromatic => 3,
    }
}

fn atom_features(m: &MolGraph) -> Array2<f64> {
    let ring = m.ring_bonds();
    let mut x = Array2::zeros((m.atom_count(), ATOM_FEATURES));
    for (i, a) in m.atoms().iter().enumerate() {
        let mut off = 0;
        x[[i, element_bucket(a.element)]] = 1.0;
        off += ELEMENT_BUCKETS;
        x[[i, off + m.degree(i).min(5)]] = 1.0;
        off += 6;
        x[[i, off + (a.formal_charge.clamp(-1, 1) + 1) as usize]] = 1.0;
        off += 3;
        x[[i, off + (a.h_count as usize).min(4)]] = 1.0;
        off += 5;
        if a.aromatic {
            x[[i, off]] = 1.0;
        }
        if m.neighbors(i).iter().any(|&(_, b)| ring[b]) {
            x[[i, off + 1]] = 1.0;
        }
    }
    x
}

impl GraphEncoder {
    pub fn new(seed: u64) -> Self {
        let mut rng = weight_rng(seed, Modality::Graph);
        let embed = gaussian(&mut rng, ATOM_FEATURES, DIM, 1.0);
        let layers = (0..GIN_LAYERS)
            .map(|_| GinLayer {
                bond: gaussian(&mut rng, 4, DIM, 0.5),
                w1: gaussian(&mut rng, DIM, HIDDEN, (2.0 / DIM as f64).sqrt()),
                b1: gaussian(&mut rng, 1, HIDDEN, 0.1).remove_axis(Axis(0)),
                w2: gaussian(&mut rng, HIDDEN, DIM, (2.0 / HIDDEN as f64).sqrt()),
                b2: gaussian(&mut rng, 1, DIM, 0.1).remove_axis(Axis(0)),
            })
            .collect();
        GraphEncoder { embed, layers }
    }

    /// One row per atom, in the graph's atom order.
    pub fn encode(&self, m: &MolGraph) -> Array2<f64> {
        let mut h = atom_features(m).dot(&self.embed);
        for (li, layer) in self.layers.iter().enumerate() {
            let mut agg = h.mapv(|v| (1.0 + EPS) * v);
            for v in 0..m.atom_count() {
                for &(u, b) in m.neighbors(v) {
                    let e = layer.bond.row(bond_index(m.bonds()[b].order));
                    let msg = (&h.row(u) + &e).mapv(|x| x.max(0.0));
                    let mut row = agg.row_mut(v);
                    row += &msg;
                }
            }
            let hidden = (agg.dot(&layer.w1) + &layer.b1).mapv(|x| x.max(0.0));
            h = hidden.dot(&layer.w2) + &layer.b2;
            if li + 1 < self.layers.len() {
                h.mapv_inplace(|x| x.max(0.0));
            }
            normalize_rows(&mut h);
        }
        h
    }

    pub fn weights(&self) -> Vec<(String, Array2<f64>)> {
        let mut out = vec![("embed".to_string(), self.embed.clone())];
        for (i, l) in self.layers.iter().enumerate() {
            out.push((format!("layer{i}.bond"), l.bond.clone()));
            out.push((format!("layer{i}.w1"), l.w1.clone()));
            out.push((format!("layer{i}.b1"), l.b1.clone().insert_axis(Axis(0))));
            out.push((format!("layer{i}.w2"), l.w2.clone()));
            out.push((format!("layer{i}.b2"), l.b2.clone().insert_axis(Axis(0))));
        }
        out
    }
}

pub fn encode_graph(m: &MolGraph, seed: u64) -> Array2<f64> {
    GraphEncoder::new(seed).encode(m)
}
