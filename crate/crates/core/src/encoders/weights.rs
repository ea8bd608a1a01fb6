//! `CFW1` weight dumps: magic, u32 tensor count, then per tensor a u32 name
//! length, UTF-8 name, u32 rows, u32 cols and row-major f32 values. All
//! integers and floats little-endian.

use ndarray::Array2;

const MAGIC: &[u8; 4] = b"CFW1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightsError {
    #[error("not a weight dump (bad magic)")]
    Magic,
    #[error("weight dump truncated")]
    Truncated,
    #[error("tensor name is not UTF-8")]
    Name,
}

pub fn write_weights(tensors: &[(String, Array2<f64>)]) -> Vec<u8> {
    let mut out = MAGIC.to_vec();
    out.extend((tensors.len() as u32).to_le_bytes());
    for (name, t) in tensors {
        out.extend((name.len() as u32).to_le_bytes());
        out.extend(name.as_bytes());
        out.extend((t.nrows() as u32).to_le_bytes());
        out.extend((t.ncols() as u32).to_le_bytes());
        for v in t.iter() {
            out.extend((*v as f32).to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], WeightsError> {
        let end = self.at.checked_add(n).ok_or(WeightsError::Truncated)?;
        let s = self.bytes.get(self.at..end).ok_or(WeightsError::Truncated)?;
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<usize, WeightsError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }
}

/// Values come back widened from f32.
pub fn read_weights(bytes: &[u8]) -> Result<Vec<(String, Array2<f64>)>, WeightsError> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(4)? != MAGIC {
        return Err(WeightsError::Magic);
    }
    let n = r.u32()?;
    let mut out = Vec::with_capacity(n.min(1024));
    for _ in 0..n {
        let len = r.u32()?;
        let name = std::str::from_utf8(r.take(len)?).map_err(|_| WeightsError::Name)?.to_string();
        let (rows, cols) = (r.u32()?, r.u32()?);
        let raw = r.take(rows.checked_mul(cols).and_then(|c| c.checked_mul(4)).ok_or(WeightsError::Truncated)?)?;
        let vals = raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect();
        out.push((name, Array2::from_shape_vec((rows, cols), vals).unwrap()));
    }
    Ok(out)
}
