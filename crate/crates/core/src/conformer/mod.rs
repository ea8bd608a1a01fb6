//! Heavy-atom 3D conformations: distance-geometry embedding followed by
//! relaxation under a harmonic bond/angle potential with soft repulsion.

mod blob;
mod params;

use std::collections::VecDeque;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::chem::{BondOrder, MolGraph};

pub use blob::{read_blob, BlobError};
pub use params::{AngleRest, ForceFieldParams, ParamsError};

pub type Vec3 = [f64; 3];

#[derive(Debug, thiserror::Error)]
pub enum ConformerError {
    #[error("energy became non-finite at iteration {iteration}; check force-field parameters")]
    NumericalBlowup { iteration: usize },
    #[error("molecule has no atoms")]
    Empty,
    #[error(transparent)]
    Params(#[from] ParamsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conformation {
    pub graph: MolGraph,
    pub coords: Vec<Vec3>,
    pub energy: f64,
    pub converged: bool,
    /// Energy after each accepted step, starting with the initial energy.
    #[serde(default)]
    pub energy_trace: Vec<f64>,
}

impl Conformation {
    pub fn atom_count(&self) -> usize {
        self.coords.len()
    }

    /// Smallest interatomic distance, or infinity for fewer than two atoms.
    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.coords.len() {
            for j in i + 1..self.coords.len() {
                best = best.min(dist(&self.coords[i], &self.coords[j]));
            }
        }
        best
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "elements": self.graph.atoms().iter().map(|a| a.element.symbol()).collect::<Vec<_>>(),
            "coords": self.coords,
            "energy": self.energy,
            "converged": self.converged,
        })
    }
}

pub(crate) fn bundled_params() -> &'static ForceFieldParams {
    static P: OnceLock<ForceFieldParams> = OnceLock::new();
    P.get_or_init(ForceFieldParams::default)
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dist(a: &Vec3, b: &Vec3) -> f64 {
    let d = sub(a, b);
    dot(&d, &d).sqrt()
}

fn topological_distances(g: &MolGraph) -> Vec<Vec<usize>> {
    let n = g.atom_count();
    let mut all = vec![vec![usize::MAX; n]; n];
    for (s, row) in all.iter_mut().enumerate() {
        row[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(u, _) in g.neighbors(v) {
                if row[u] == usize::MAX {
                    row[u] = row[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }
    all
}

/// Rest angle of a centre atom from a hybridization proxy.
fn angle_rest_degrees(g: &MolGraph, center: usize, p: &ForceFieldParams) -> f64 {
    if g.atoms()[center].aromatic {
        return p.angle_rest.sp2;
    }
    let mut doubles = 0;
    let mut triples = 0;
    for &(_, bi) in g.neighbors(center) {
        match g.bonds()[bi].order {
            BondOrder::Double => doubles += 1,
            BondOrder::Triple => triples += 1,
            BondOrder::Aromatic => return p.angle_rest.sp2,
            BondOrder::Single => {}
        }
    }
    if triples > 0 || (doubles >= 2 && g.degree(center) == 2) {
        p.angle_rest.sp
    } else if doubles == 1 && g.degree(center) <= 3 {
        p.angle_rest.sp2
    } else {
        p.angle_rest.sp3
    }
}

/// Precomputed interaction lists for one molecule.
#[derive(Debug, Clone)]
struct Terms {
    bonds: Vec<(usize, usize, f64)>,
    angles: Vec<(usize, usize, usize, f64)>,
    pairs: Vec<(usize, usize)>,
    bond_k: f64,
    angle_k: f64,
    sigma: f64,
    rep_k: f64,
}

impl Terms {
    fn new(g: &MolGraph, p: &ForceFieldParams) -> Self {
        let bonds = g
            .bonds()
            .iter()
            .map(|b| {
                let r0 = p.bond_rest_length(g.atoms()[b.a].element, g.atoms()[b.b].element, b.order);
                (b.a, b.b, r0)
            })
            .collect();
        let mut angles = Vec::new();
        for j in 0..g.atom_count() {
            let nb = g.neighbors(j);
            if nb.len() < 2 {
                continue;
            }
            let cos0 = angle_rest_degrees(g, j, p).to_radians().cos();
            for x in 0..nb.len() {
                for y in x + 1..nb.len() {
                    angles.push((nb[x].0, j, nb[y].0, cos0));
                }
            }
        }
        let topo = topological_distances(g);
        let mut pairs = Vec::new();
        for i in 0..g.atom_count() {
            for j in i + 1..g.atom_count() {
                if topo[i][j] >= 3 {
                    pairs.push((i, j));
                }
            }
        }
        Terms {
            bonds,
            angles,
            pairs,
            bond_k: p.bond_k,
            angle_k: p.angle_k,
            sigma: p.repulsion_sigma,
            rep_k: p.repulsion_k,
        }
    }

    fn energy(&self, x: &[Vec3]) -> f64 {
        let mut e = 0.0;
        for &(a, b, r0) in &self.bonds {
            let d = dist(&x[a], &x[b]) - r0;
            e += self.bond_k * d * d;
        }
        for &(i, j, k, cos0) in &self.angles {
            let u = sub(&x[i], &x[j]);
            let v = sub(&x[k], &x[j]);
            let c = dot(&u, &v) / (dot(&u, &u) * dot(&v, &v)).sqrt();
            e += self.angle_k * (c - cos0) * (c - cos0);
        }
        let s2 = self.sigma * self.sigma;
        for &(i, j) in &self.pairs {
            let d = sub(&x[i], &x[j]);
            let r2 = dot(&d, &d);
            if r2 < s2 {
                let t = s2 - r2;
                e += self.rep_k * t * t * t / (s2 * s2);
            }
        }
        e
    }

    fn gradient(&self, x: &[Vec3]) -> Vec<Vec3> {
        let mut g = vec![[0.0; 3]; x.len()];
        for &(a, b, r0) in &self.bonds {
            let d = sub(&x[a], &x[b]);
            let r = dot(&d, &d).sqrt();
            let f = 2.0 * self.bond_k * (r - r0) / r;
            for c in 0..3 {
                g[a][c] += f * d[c];
                g[b][c] -= f * d[c];
            }
        }
        for &(i, j, k, cos0) in &self.angles {
            let u = sub(&x[i], &x[j]);
            let v = sub(&x[k], &x[j]);
            let uu = dot(&u, &u);
            let vv = dot(&v, &v);
            let norm = (uu * vv).sqrt();
            let c = dot(&u, &v) / norm;
            let f = 2.0 * self.angle_k * (c - cos0);
            for m in 0..3 {
                let di = v[m] / norm - c * u[m] / uu;
                let dk = u[m] / norm - c * v[m] / vv;
                g[i][m] += f * di;
                g[k][m] += f * dk;
                g[j][m] -= f * (di + dk);
            }
        }
        let s2 = self.sigma * self.sigma;
        for &(i, j) in &self.pairs {
            let d = sub(&x[i], &x[j]);
            let r2 = dot(&d, &d);
            if r2 < s2 {
                let t = s2 - r2;
                let f = -6.0 * self.rep_k * t * t / (s2 * s2);
                for c in 0..3 {
                    g[i][c] += f * d[c];
                    g[j][c] -= f * d[c];
                }
            }
        }
        g
    }
}

pub fn potential_energy(c: &Conformation, p: &ForceFieldParams) -> f64 {
    Terms::new(&c.graph, p).energy(&c.coords)
}

/// Partial derivatives of [`potential_energy`] with respect to every coordinate.
pub fn gradient(c: &Conformation, p: &ForceFieldParams) -> Vec<Vec3> {
    Terms::new(&c.graph, p).gradient(&c.coords)
}

fn target_distance(topo: usize, bonded_rest: Option<f64>) -> f64 {
    match (topo, bonded_rest) {
        (1, Some(r)) => r,
        (0, _) => 0.0,
        (k, _) => 2.5 * (k as f64 / 2.0).powf(0.85),
    }
}

/// Initial coordinates by classical scaling of topological target distances,
/// perturbed by seeded Gaussian noise and centred on the origin.
pub fn embed_conformation(m: &MolGraph, seed: u64) -> Conformation {
    let p = bundled_params();
    let n = m.atom_count();
    let topo = topological_distances(m);
    let max_topo = topo
        .iter()
        .flatten()
        .filter(|&&d| d != usize::MAX)
        .max()
        .copied()
        .unwrap_or(0);
    let disconnected = max_topo + 2;
    let d2 = DMatrix::from_fn(n, n, |i, j| {
        let t = if topo[i][j] == usize::MAX { disconnected } else { topo[i][j] };
        let rest = m.bond_between(i, j).map(|b| {
            p.bond_rest_length(m.atoms()[i].element, m.atoms()[j].element, b.order)
        });
        let d = target_distance(t, rest);
        d * d
    });
    // double centring: B = -1/2 J D² J
    let row_means: Vec<f64> = (0..n).map(|i| d2.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (d2[(i, j)] - row_means[i] - row_means[j] + grand));
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.15).expect("valid sigma");
    let mut coords: Vec<Vec3> = (0..n)
        .map(|i| {
            let mut x = [0.0; 3];
            for (axis, &k) in order.iter().take(3).enumerate() {
                let lambda = eig.eigenvalues[k].max(0.0);
                x[axis] = eig.eigenvectors[(i, k)] * lambda.sqrt();
            }
            x
        })
        .collect();
    for x in coords.iter_mut() {
        for c in x.iter_mut() {
            *c += noise.sample(&mut rng);
        }
    }
    center(&mut coords);
    let terms = Terms::new(m, p);
    let energy = terms.energy(&coords);
    Conformation {
        graph: m.clone(),
        coords,
        energy,
        converged: false,
        energy_trace: vec![energy],
    }
}

fn center(coords: &mut [Vec3]) {
    if coords.is_empty() {
        return;
    }
    let n = coords.len() as f64;
    let mut mean = [0.0; 3];
    for x in coords.iter() {
        for c in 0..3 {
            mean[c] += x[c] / n;
        }
    }
    for x in coords.iter_mut() {
        for c in 0..3 {
            x[c] -= mean[c];
        }
    }
}

/// Minimizes the potential by gradient descent with Armijo backtracking.
/// Every accepted step lowers the energy, so `energy_trace` never increases.
pub fn relax(c: &Conformation, p: &ForceFieldParams) -> Result<Conformation, ConformerError> {
    p.validate()?;
    let terms = Terms::new(&c.graph, p);
    let mut x = c.coords.clone();
    let mut e = terms.energy(&x);
    if !e.is_finite() {
        return Err(ConformerError::NumericalBlowup { iteration: 0 });
    }
    let mut trace = vec![e];
    let mut step = p.step_size;
    let mut converged = false;
    for iteration in 0..p.max_iters {
        let g = terms.gradient(&x);
        let gn2: f64 = g.iter().map(|v| dot(v, v)).sum();
        if !gn2.is_finite() {
            return Err(ConformerError::NumericalBlowup { iteration });
        }
        if gn2.sqrt() < p.grad_tol {
            converged = true;
            break;
        }
        let mut accepted = false;
        while step > 1e-14 {
            let trial: Vec<Vec3> = x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| [xi[0] - step * gi[0], xi[1] - step * gi[1], xi[2] - step * gi[2]])
                .collect();
            let et = terms.energy(&trial);
            if et.is_nan() {
                return Err(ConformerError::NumericalBlowup { iteration });
            }
            if et <= e - 1e-4 * step * gn2 {
                x = trial;
                e = et;
                trace.push(e);
                accepted = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // no descent possible at machine precision
            break;
        }
    }
    Ok(Conformation {
        graph: c.graph.clone(),
        coords: x,
        energy: e,
        converged,
        energy_trace: trace,
    })
}

/// Embedding plus relaxation with the bundled parameters.
pub fn generate_conformation(m: &MolGraph, seed: u64) -> Result<Conformation, ConformerError> {
    if m.atom_count() == 0 {
        return Err(ConformerError::Empty);
    }
    relax(&embed_conformation(m, seed), bundled_params())
}
