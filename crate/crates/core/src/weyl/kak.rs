use super::{WeylError, WeylPoint};
use nalgebra::Matrix3;

/// `g = left · diag(σ) · right` with `left`, `right` in `SO(3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KakDecomposition {
    pub point: WeylPoint,
    /// `σ₁ ≥ σ₂ ≥ σ₃`
    pub singular_values: [f64; 3],
    pub left: Matrix3<f64>,
    pub right: Matrix3<f64>,
}

impl KakDecomposition {
    pub fn reconstruct(&self) -> Matrix3<f64> {
        self.left * self.point.diag() * self.right
    }
}

/// Polar (KAK) decomposition of a unimodular `3 × 3` matrix via its SVD.
pub fn kak(g: &Matrix3<f64>) -> Result<KakDecomposition, WeylError> {
    if g.iter().any(|v| !v.is_finite()) {
        return Err(WeylError::NotFinite);
    }
    let det = g.determinant();
    if det == 0.0 {
        return Err(WeylError::Singular);
    }
    if (det - 1.0).abs() > 1e-8 {
        return Err(WeylError::NonUnimodular(det));
    }
    let svd = g.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma = order.map(|i| svd.singular_values[i]);
    if sigma[2] <= 0.0 {
        return Err(WeylError::Singular);
    }
    let mut left = Matrix3::from_fn(|row, col| u[(row, order[col])]);
    let mut right = Matrix3::from_fn(|row, col| v_t[(order[row], col)]);
    // det g > 0 forces det U = det V; flip the paired last column/row if both are -1.
    if left.determinant() < 0.0 {
        left.column_mut(2).neg_mut();
        right.row_mut(2).neg_mut();
    }
    let logs = sigma.map(f64::ln);
    let mean = logs.iter().sum::<f64>() / 3.0;
    let point = WeylPoint { r: logs[0] - mean, s: logs[1] - mean, t: logs[2] - mean };
    Ok(KakDecomposition { point, singular_values: sigma, left, right })
}
