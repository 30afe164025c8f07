//! Closed-form Levi-Civita connections used as curvature references.
//!
//! These are hand-derived Christoffel symbols of specific metrics, not a
//! general metric-to-connection routine.

use crate::error::{require_positive, Result};
use crate::geometry::{ChartId, ConnectionField};
use crate::linalg;

/// Levi-Civita connection of ds² = R² e^{−2u/R} dφ² + du² in (φ, u):
/// Γ^φ_{φu} = Γ^φ_{uφ} = −1/R, Γ^u_{φφ} = R e^{−2u/R}. Gaussian curvature −1/R².
pub fn levi_civita_pseudosphere(radius: f64) -> Result<ConnectionField> {
    require_positive("R", radius)?;
    Ok(ConnectionField::new(ChartId::Pseudosphere, move |q| {
        let mut g = linalg::ZERO3;
        g[0][0][1] = -1.0 / radius;
        g[0][1][0] = -1.0 / radius;
        g[1][0][0] = radius * (-2.0 * q[1] / radius).exp();
        g
    }))
}

/// Levi-Civita connection of the round sphere in (φ, θ):
/// Γ^φ_{φθ} = Γ^φ_{θφ} = −tan θ, Γ^θ_{φφ} = sin θ cos θ. Gaussian curvature 1/R².
pub fn levi_civita_sphere() -> ConnectionField {
    ConnectionField::new(ChartId::SphereGeographic, |q| {
        let mut g = linalg::ZERO3;
        g[0][0][1] = -q[1].tan();
        g[0][1][0] = -q[1].tan();
        g[1][0][0] = q[1].sin() * q[1].cos();
        g
    })
}
