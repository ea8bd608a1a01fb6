//! Binary layout: `CNF1`, u32 atom count, one atomic-number byte per atom,
//! then x, y, z per atom as f64. All integers and floats little-endian.

use super::{Conformation, Vec3};
use crate::chem::Element;

const MAGIC: &[u8; 4] = b"CNF1";

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BlobError {
    #[error("not a conformation blob")]
    Magic,
    #[error("blob truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("invalid atomic number {0}")]
    Element(u8),
}

impl Conformation {
    pub fn to_blob(&self) -> Vec<u8> {
        let n = self.coords.len();
        let mut out = Vec::with_capacity(8 + n + n * 24);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(n as u32).to_le_bytes());
        out.extend(self.graph.atoms().iter().map(|a| a.element.atomic_number()));
        for x in &self.coords {
            for c in x {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
        out
    }
}

/// Decodes a blob into its element list and coordinates.
pub fn read_blob(bytes: &[u8]) -> Result<(Vec<Element>, Vec<Vec3>), BlobError> {
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(BlobError::Magic);
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let expected = 8 + n + 24 * n;
    if bytes.len() != expected {
        return Err(BlobError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    let elements = bytes[8..8 + n]
        .iter()
        .map(|&z| Element::from_atomic_number(z).ok_or(BlobError::Element(z)))
        .collect::<Result<Vec<_>, _>>()?;
    let coords = bytes[8 + n..]
        .chunks_exact(24)
        .map(|c| {
            let f = |k: usize| f64::from_le_bytes(c[k * 8..k * 8 + 8].try_into().unwrap());
            [f(0), f(1), f(2)]
        })
        .collect();
    Ok((elements, coords))
}
