use ndarray::{Array1, Array2, ArrayView1, Axis};

use super::{gaussian, weight_rng, EncoderError, Modality};

/// Decoder width used when none is configured.
pub const DEFAULT_DIM_OUT: usize = 256;

/// `gelu(x) = x Φ(x)` with the exact error function.
pub fn gelu(x: f64) -> f64 {
    0.5 * x * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

pub fn gelu_grad(x: f64) -> f64 {
    let cdf = 0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2));
    let pdf = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    cdf + x * pdf
}

/// The common tanh approximation, kept only as a reference.
pub fn gelu_tanh(x: f64) -> f64 {
    let k = (2.0 / std::f64::consts::PI).sqrt();
    0.5 * x * (1.0 + (k * (x + 0.044715 * x.powi(3))).tanh())
}

/// Two linear layers with gelu between, mapping encoder rows to decoder width.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorParams {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
}

impl ProjectorParams {
    pub fn seeded(dim_in: usize, dim_hidden: usize, dim_out: usize, seed: u64, m: Modality) -> Self {
        let mut rng = weight_rng(seed ^ 0x9e37_79b9_7f4a_7c15, m);
        ProjectorParams {
            w1: gaussian(&mut rng, dim_in, dim_hidden, 1.0 / (dim_in as f64).sqrt()),
            b1: gaussian(&mut rng, 1, dim_hidden, 0.1).remove_axis(Axis(0)),
            w2: gaussian(&mut rng, dim_hidden, dim_out, 1.0 / (dim_hidden as f64).sqrt()),
            b2: gaussian(&mut rng, 1, dim_out, 0.1).remove_axis(Axis(0)),
        }
    }

    /// Projector sized for a modality's encoder, hidden width = `dim_out`.
    pub fn for_modality(m: Modality, dim_out: usize, seed: u64) -> Self {
        Self::seeded(m.dim(), dim_out, dim_out, seed, m)
    }

    pub fn dim_in(&self) -> usize {
        self.w1.nrows()
    }

    pub fn dim_out(&self) -> usize {
        self.w2.ncols()
    }

    pub fn validate(&self) -> Result<(), EncoderError> {
        let h = self.w1.ncols();
        let bad = |er, ec, r, c| EncoderError::ShapeMismatch {
            expected_rows: er,
            expected_cols: ec,
            rows: r,
            cols: c,
        };
        if self.b1.len() != h {
            return Err(bad(1, h, 1, self.b1.len()));
        }
        if self.w2.nrows() != h {
            return Err(bad(h, self.w2.ncols(), self.w2.nrows(), self.w2.ncols()));
        }
        if self.b2.len() != self.w2.ncols() {
            return Err(bad(1, self.w2.ncols(), 1, self.b2.len()));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        [&self.w1, &self.w2].iter().all(|w| w.iter().all(|v| v.is_finite()))
            && [&self.b1, &self.b2].iter().all(|b| b.iter().all(|v| v.is_finite()))
    }

    pub fn weights(&self) -> Vec<(String, Array2<f64>)> {
        vec![
            ("w1".into(), self.w1.clone()),
            ("b1".into(), self.b1.clone().insert_axis(Axis(0))),
            ("w2".into(), self.w2.clone()),
            ("b2".into(), self.b2.clone().insert_axis(Axis(0))),
        ]
    }
}

/// Row-wise `gelu(e W1 + b1) W2 + b2`.
pub fn project(e: &Array2<f64>, p: &ProjectorParams) -> Result<Array2<f64>, EncoderError> {
    p.validate()?;
    if e.ncols() != p.dim_in() {
        return Err(EncoderError::ShapeMismatch {
            expected_rows: e.nrows(),
            expected_cols: p.dim_in(),
            rows: e.nrows(),
            cols: e.ncols(),
        });
    }
    let hidden = (e.dot(&p.w1) + &p.b1).mapv(gelu);
    Ok(hidden.dot(&p.w2) + &p.b2)
}

/// `d out_o / d x_i` for one input row, as a `dim_out × dim_in` matrix.
pub fn project_jacobian(x: ArrayView1<f64>, p: &ProjectorParams) -> Result<Array2<f64>, EncoderError> {
    p.validate()?;
    if x.len() != p.dim_in() {
        return Err(EncoderError::ShapeMismatch {
            expected_rows: 1,
            expected_cols: p.dim_in(),
            rows: 1,
            cols: x.len(),
        });
    }
    let z = x.dot(&p.w1) + &p.b1;
    let g = z.mapv(gelu_grad);
    // W2ᵀ diag(g) W1ᵀ
    let scaled = &p.w2 * &g.insert_axis(Axis(1));
    Ok(scaled.t().dot(&p.w1.t()))
}
