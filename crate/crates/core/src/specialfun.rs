//! Gudermannian family and κ-deformed exponentials and logarithms.
//!
//! Every κ-dependent function branches to its undeformed limit at κ = 0
//! (`exp`, `ln`, the unit function, the identity map) instead of evaluating
//! a 0/0 expression.

use std::f64::consts::FRAC_PI_2;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::quadrature::{integrate, QuadConfig};

/// Closest approach to ±π/2 accepted by [`gd_inv`].
pub const POLE_GUARD: f64 = 1e-12;

/// Gudermannian function, `arctan(sinh x)`. Odd, with range (−π/2, π/2).
pub fn gd(x: f64) -> Result<f64> {
    require_finite("x", x)?;
    Ok(x.sinh().atan())
}

/// Inverse Gudermannian, `arsinh(tan θ)`.
///
/// Rejects latitudes within [`POLE_GUARD`] of ±π/2, where the Mercator
/// ordinate diverges.
pub fn gd_inv(theta: f64) -> Result<f64> {
    check_latitude(theta)?;
    Ok(theta.tan().asinh())
}

/// `d/dx gd(x) = sech x`.
pub fn gd_derivative(x: f64) -> Result<f64> {
    require_finite("x", x)?;
    Ok(1.0 / x.cosh())
}

/// `d/dθ gd⁻¹(θ) = 1 / cos θ`.
pub fn gd_inv_derivative(theta: f64) -> Result<f64> {
    check_latitude(theta)?;
    Ok(1.0 / theta.cos())
}

fn check_latitude(theta: f64) -> Result<()> {
    if theta.is_finite() && theta.abs() < FRAC_PI_2 - POLE_GUARD {
        Ok(())
    } else {
        Err(Error::domain("theta", theta, "|theta| < pi/2"))
    }
}

/// Deformation parameter κ ≥ 0 of the κ-exponential family.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DeformationParam(f64);

impl DeformationParam {
    /// The undeformed case κ = 0.
    pub const UNDEFORMED: DeformationParam = DeformationParam(0.0);

    pub fn new(kappa: f64) -> Result<Self> {
        if kappa.is_finite() && kappa >= 0.0 {
            Ok(Self(kappa))
        } else {
            Err(Error::domain("kappa", kappa, "kappa >= 0"))
        }
    }

    /// κ = 1/R, the deformation carried by a sphere of radius `R`.
    pub fn from_radius(radius: f64) -> Result<Self> {
        require_positive("R", radius)?;
        Self::new(1.0 / radius)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_undeformed(self) -> bool {
        self.0 == 0.0
    }
}

/// κ-exponential `[κx + √(1+κ²x²)]^{1/κ}`, evaluated as `exp(arsinh(κx)/κ)`
/// so that negative arguments do not cancel.
pub fn exp_kappa(x: f64, kappa: DeformationParam) -> Result<f64> {
    require_finite("x", x)?;
    let k = kappa.value();
    if kappa.is_undeformed() {
        return Ok(x.exp());
    }
    Ok(((k * x).asinh() / k).exp())
}

/// κ-logarithm `(x^κ − x^{−κ}) / (2κ) = sinh(κ ln x) / κ`.
pub fn ln_kappa(x: f64, kappa: DeformationParam) -> Result<f64> {
    let ln_x = positive_log(x)?;
    if kappa.is_undeformed() {
        return Ok(ln_x);
    }
    let k = kappa.value();
    Ok((k * ln_x).sinh() / k)
}

/// `u_κ(x) = (x^κ + x^{−κ}) / 2 = cosh(κ ln x)`; identically 1 at κ = 0.
pub fn u_kappa(x: f64, kappa: DeformationParam) -> Result<f64> {
    let ln_x = positive_log(x)?;
    Ok((kappa.value() * ln_x).cosh())
}

/// φ-logarithm with φ(s) = s·u_κ(s), closed form `gd(κ ln x) / κ`.
pub fn ln_phi_closed(x: f64, kappa: DeformationParam) -> Result<f64> {
    let ln_x = positive_log(x)?;
    if kappa.is_undeformed() {
        return Ok(ln_x);
    }
    let k = kappa.value();
    Ok(gd(k * ln_x)? / k)
}

/// φ-logarithm `∫₁ˣ ds / (s u_κ(s))` by adaptive quadrature.
pub fn ln_phi_quadrature(x: f64, kappa: DeformationParam) -> Result<f64> {
    ln_phi_quadrature_with(x, kappa, &QuadConfig::default())
}

pub fn ln_phi_quadrature_with(x: f64, kappa: DeformationParam, cfg: &QuadConfig) -> Result<f64> {
    positive_log(x)?;
    let k = kappa.value();
    let integrand = |s: f64| 1.0 / (s * (k * s.ln()).cosh());
    Ok(integrate(integrand, 1.0, x, cfg)?.value)
}

/// Deformed Mercator ordinate `y(χ) = R arsinh(χ/R)`, i.e. `ln exp_κ(χ)` with κ = 1/R.
pub fn deformed_mercator_y(chi: f64, radius: f64) -> Result<f64> {
    require_finite("chi", chi)?;
    require_positive("R", radius)?;
    Ok(radius * (chi / radius).asinh())
}

fn positive_log(x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x.ln())
    } else {
        Err(Error::domain("x", x, "x > 0"))
    }
}
