//! Fixed-size 2×2 helpers and tensor aliases.
//!
//! Index layout used throughout the crate:
//! - frame `e[i][mu]` is e^i_μ (row: frame index, column: coordinate index);
//! - inverse frame `E[mu][i]` is E^μ_i, so that `E · e = I`;
//! - connection `gamma[rho][mu][nu]` is Γ^ρ_{μν} with μ the differentiation index;
//! - curvature `riem[rho][sigma][mu][nu]` is R^ρ_{σμν}.

use crate::error::{Error, Result};

pub type Vec2 = [f64; 2];
pub type Mat2 = [[f64; 2]; 2];
pub type Tensor3 = [[[f64; 2]; 2]; 2];
pub type Tensor4 = [[[[f64; 2]; 2]; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
pub const ZERO3: Tensor3 = [[[0.0; 2]; 2]; 2];
pub const ZERO4: Tensor4 = [[[[0.0; 2]; 2]; 2]; 2];

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inverse(m: &Mat2, what: &'static str) -> Result<Mat2> {
    let d = det(m);
    let scale = m.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if !d.is_finite() || d.abs() <= f64::EPSILON * scale * scale {
        return Err(Error::Singular { what, det: d });
    }
    Ok([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_vec(a: &Mat2, v: &Vec2) -> Vec2 {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Cholesky-free positive-definiteness test for a symmetric 2×2 matrix.
pub fn is_positive_definite(m: &Mat2) -> bool {
    m[0][0] > 0.0 && det(m) > 0.0 && m.iter().flatten().all(|v| v.is_finite())
}

pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

pub fn max_abs3(t: &Tensor3) -> f64 {
    t.iter()
        .flatten()
        .flatten()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_abs4(t: &Tensor4) -> f64 {
    t.iter()
        .flatten()
        .flatten()
        .flatten()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}
