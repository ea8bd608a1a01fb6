use ndarray::{Array1, Array2, Axis};

use super::{element_bucket, gaussian, normalize_rows, weight_rng, Modality, ELEMENT_BUCKETS};
use crate::chem::Element;
use crate::conformer::{Conformation, Vec3};

/// Gaussian radial basis centres in Å, spaced 0.25 apart.
pub const RADIAL_CENTERS: usize = 32;
const RADIAL_START: f64 = 0.75;
const RADIAL_STEP: f64 = 0.25;
const RADIAL_WIDTH: f64 = 0.25;
const FEATURES: usize = ELEMENT_BUCKETS + ELEMENT_BUCKETS * RADIAL_CENTERS;
const DIM: usize = 512;

/// Per-atom features are the element one-hot and, for each neighbour element,
/// a smoothed histogram of distances to atoms of that element. Only distances
/// enter, so the output ignores rigid motions.
pub struct ConformationEncoder {
    w: Array2<f64>,
    b: Array1<f64>,
}

fn features(elements: &[Element], coords: &[Vec3]) -> Array2<f64> {
    let n = elements.len();
    let mut x = Array2::zeros((n, FEATURES));
    for i in 0..n {
        x[[i, element_bucket(elements[i])]] = 1.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = (0..3).map(|k| (coords[i][k] - coords[j][k]).powi(2)).sum::<f64>().sqrt();
            let base = ELEMENT_BUCKETS + element_bucket(elements[j]) * RADIAL_CENTERS;
            for k in 0..RADIAL_CENTERS {
                let mu = RADIAL_START + RADIAL_STEP * k as f64;
                x[[i, base + k]] += (-((d - mu) / RADIAL_WIDTH).powi(2)).exp();
            }
        }
    }
    x
}

impl ConformationEncoder {
    pub fn new(seed: u64) -> Self {
        let mut rng = weight_rng(seed, Modality::Conformation);
        ConformationEncoder {
            w: gaussian(&mut rng, FEATURES, DIM, 1.0 / (ELEMENT_BUCKETS as f64).sqrt()),
            b: gaussian(&mut rng, 1, DIM, 0.1).remove_axis(Axis(0)),
        }
    }

    pub fn encode(&self, c: &Conformation) -> Array2<f64> {
        let elements: Vec<Element> = c.graph.atoms().iter().map(|a| a.element).collect();
        self.encode_points(&elements, &c.coords)
    }

    /// Encodes bare element/coordinate lists, as stored in conformation blobs.
    pub fn encode_points(&self, elements: &[Element], coords: &[Vec3]) -> Array2<f64> {
        assert_eq!(elements.len(), coords.len(), "one coordinate per element");
        let mut h = (features(elements, coords).dot(&self.w) + &self.b).mapv(f64::tanh);
        normalize_rows(&mut h);
        h
    }

    pub fn weights(&self) -> Vec<(String, Array2<f64>)> {
        vec![
            ("w".into(), self.w.clone()),
            ("b".into(), self.b.clone().insert_axis(Axis(0))),
        ]
    }
}

pub fn encode_conformation(c: &Conformation, seed: u64) -> Array2<f64> {
    ConformationEncoder::new(seed).encode(c)
}
