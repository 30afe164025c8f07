//! The Gaussian family N(μ, σ²) as a surface: Fisher–Rao metric, its
//! half-plane curvature, the normalized chart, the pseudosphere
//! correspondence and the conformally flattened plane.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::autoparallel::{loxodrome_pseudosphere_curve, CourseAngle};
use crate::error::{require_finite, require_positive, Error, Result};
use crate::geometry::{
    gaussian_curvature, pseudosphere_metric, ChartId, ConnectionField, MetricField, Point2,
};
use crate::linalg::{self, Mat2, Vec2};
use crate::quadrature::{integrate, QuadConfig};

/// Pseudoradius of the pseudosphere carrying the normalized Gaussian family.
pub const PSEUDORADIUS: f64 = SQRT_2;

/// Location and scale of a normal distribution; σ > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussParams {
    mu: f64,
    sigma: f64,
}

impl GaussParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        require_finite("mu", mu)?;
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain("sigma", sigma, "sigma > 0"));
        }
        Ok(Self { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn as_point(&self) -> Point2 {
        Point2::new(ChartId::GaussParameters, self.mu, self.sigma)
            .expect("GaussParams are always inside the parameter chart")
    }
}

pub fn gauss_pdf(x: f64, p: &GaussParams) -> f64 {
    let z = (x - p.mu) / p.sigma;
    (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * p.sigma)
}

/// Fisher–Rao metric diag(1/σ², 2/σ²) in (μ, σ).
pub fn fisher_rao_metric(p: &GaussParams) -> Mat2 {
    let w = 1.0 / (p.sigma * p.sigma);
    [[w, 0.0], [0.0, 2.0 * w]]
}

pub fn fisher_rao_metric_field() -> MetricField {
    MetricField::new(ChartId::GaussParameters, |q| {
        let w = 1.0 / (q[1] * q[1]);
        [[w, 0.0], [0.0, 2.0 * w]]
    })
}

/// Levi-Civita connection of (dμ² + 2dσ²)/σ² (hand-derived):
/// Γ^μ_{μσ} = Γ^μ_{σμ} = −1/σ, Γ^σ_{μμ} = 1/(2σ), Γ^σ_{σσ} = −1/σ.
pub fn fisher_rao_levi_civita() -> ConnectionField {
    ConnectionField::new(ChartId::GaussParameters, |q| {
        let s = q[1];
        let mut g = linalg::ZERO3;
        g[0][0][1] = -1.0 / s;
        g[0][1][0] = -1.0 / s;
        g[1][0][0] = 0.5 / s;
        g[1][1][1] = -1.0 / s;
        g
    })
}

/// Expected outer product of the score ∇_{(μ,σ)} ln p, by quadrature over
/// [μ − 12σ, μ + 12σ].
pub fn fisher_information_quadrature(p: &GaussParams) -> Result<Mat2> {
    let (mu, sigma) = (p.mu, p.sigma);
    let score = |x: f64| -> Vec2 {
        let d = x - mu;
        [
            d / (sigma * sigma),
            -1.0 / sigma + d * d / (sigma * sigma * sigma),
        ]
    };
    let cfg = QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        ..QuadConfig::default()
    };
    let (a, b) = (mu - 12.0 * sigma, mu + 12.0 * sigma);
    let mut info = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in i..2 {
            let f = |x: f64| {
                let s = score(x);
                gauss_pdf(x, p) * s[i] * s[j]
            };
            let v = integrate(f, a, b, &cfg)?.value;
            info[i][j] = v;
            info[j][i] = v;
        }
    }
    Ok(info)
}

/// Gaussian curvature of `scale · g_FR` at `p`, from central differences of
/// the analytic Levi-Civita connection. The connection does not depend on a
/// constant scale, so the curvature is −1/(2·scale).
pub fn fisher_rao_curvature(p: &GaussParams, scale: f64, h: f64) -> Result<f64> {
    let metric = fisher_rao_metric_field().scaled(scale)?;
    if p.sigma - h <= 0.0 {
        return Err(Error::domain(
            "sigma",
            p.sigma - h,
            "stencil must stay in sigma > 0",
        ));
    }
    gaussian_curvature(&metric, &fisher_rao_levi_civita(), &p.as_point(), h)
}

/// Curvature of the Fisher–Rao half-plane at `p` (−1/2 everywhere).
pub fn poincare_curvature_check(p: &GaussParams, h: f64) -> Result<f64> {
    fisher_rao_curvature(p, 1.0, h)
}

/// Normalization σ̃ = σ/σ_min, μ̃ = π μ / |μ_max|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationBox {
    sigma_min: f64,
    mu_max_abs: f64,
}

impl Default for NormalizationBox {
    fn default() -> Self {
        Self {
            sigma_min: 1.0,
            mu_max_abs: PI,
        }
    }
}

impl NormalizationBox {
    pub fn new(sigma_min: f64, mu_max_abs: f64) -> Result<Self> {
        require_positive("sigma_min", sigma_min)?;
        require_positive("mu_max", mu_max_abs)?;
        Ok(Self {
            sigma_min,
            mu_max_abs,
        })
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn mu_max_abs(&self) -> f64 {
        self.mu_max_abs
    }

    pub fn contains(&self, p: &GaussParams) -> bool {
        p.sigma >= self.sigma_min && p.mu.abs() <= self.mu_max_abs
    }
}

pub fn normalize(p: &GaussParams, bx: &NormalizationBox) -> Result<Point2> {
    if p.sigma < bx.sigma_min {
        return Err(Error::domain("sigma", p.sigma, "sigma >= sigma_min"));
    }
    if p.mu.abs() > bx.mu_max_abs {
        return Err(Error::domain("mu", p.mu, "|mu| <= mu_max"));
    }
    let mu_n = (PI * p.mu / bx.mu_max_abs).clamp(-PI, PI);
    let sigma_n = (p.sigma / bx.sigma_min).max(1.0);
    Point2::new(ChartId::GaussNormalized, mu_n, sigma_n)
}

pub fn denormalize(pn: &Point2, bx: &NormalizationBox) -> Result<GaussParams> {
    pn.expect_chart(ChartId::GaussNormalized)?;
    GaussParams::new(pn.a() * bx.mu_max_abs / PI, pn.b() * bx.sigma_min)
}

/// (μ̃, σ̃) ↦ (φ, u) = (μ̃/R, R ln σ̃) with R = √2.
pub fn to_pseudosphere(pn: &Point2) -> Result<Point2> {
    pn.expect_chart(ChartId::GaussNormalized)?;
    Point2::new(
        ChartId::Pseudosphere,
        pn.a() / PSEUDORADIUS,
        PSEUDORADIUS * pn.b().ln(),
    )
}

pub fn from_pseudosphere(p: &Point2) -> Result<Point2> {
    p.expect_chart(ChartId::Pseudosphere)?;
    Point2::new(
        ChartId::GaussNormalized,
        p.a() * PSEUDORADIUS,
        (p.b() / PSEUDORADIUS).exp(),
    )
}

/// (μ̃, σ̃) ↦ (x̃, ỹ) = (μ̃, √2 σ̃).
pub fn to_flattened(pn: &Point2) -> Result<Point2> {
    pn.expect_chart(ChartId::GaussNormalized)?;
    Point2::new(ChartId::FlattenedPlane, pn.a(), PSEUDORADIUS * pn.b())
}

pub fn from_flattened(p: &Point2) -> Result<Point2> {
    p.expect_chart(ChartId::FlattenedPlane)?;
    Point2::new(ChartId::GaussNormalized, p.a(), p.b() / PSEUDORADIUS)
}

/// Normalized Poincaré metric (dμ̃² + 2dσ̃²)/σ̃².
pub fn normalized_poincare_metric(pn: &Point2) -> Result<Mat2> {
    pn.expect_chart(ChartId::GaussNormalized)?;
    let w = 1.0 / (pn.b() * pn.b());
    Ok([[w, 0.0], [0.0, 2.0 * w]])
}

/// Pullback of the pseudosphere metric through [`to_pseudosphere`], with the
/// Jacobian taken by central differences of step `h`.
pub fn pseudosphere_pullback_metric(pn: &Point2, h: f64) -> Result<Mat2> {
    pn.expect_chart(ChartId::GaussNormalized)?;
    require_positive("h", h)?;
    let map = |q: Vec2| -> Result<Vec2> {
        // raw map: the stencil may cross the σ̃ = 1 and |μ̃| = π edges
        Ok([
            q[0] / PSEUDORADIUS,
            PSEUDORADIUS * require_positive("sigma_norm", q[1])?.ln(),
        ])
    };
    let q = pn.coords();
    let mut jac = [[0.0; 2]; 2];
    for nu in 0..2 {
        let mut plus = q;
        let mut minus = q;
        plus[nu] += h;
        minus[nu] -= h;
        let (fp, fm) = (map(plus)?, map(minus)?);
        for mu in 0..2 {
            jac[mu][nu] = (fp[mu] - fm[mu]) / (2.0 * h);
        }
    }
    let image = to_pseudosphere(pn)?;
    let g = pseudosphere_metric(PSEUDORADIUS)?.at(&image)?;
    Ok(linalg::mul(
        &linalg::transpose(&jac),
        &linalg::mul(&g, &jac),
    ))
}

/// Gaussian family traced by a pseudosphere loxodrome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussFamily {
    pub t: Vec<f64>,
    pub params: Vec<GaussParams>,
    /// Normalized coordinates (μ̃, σ̃) of each member.
    pub normalized: Vec<Point2>,
    /// Pseudosphere coordinates (φ, u) of each member.
    pub pseudosphere: Vec<Point2>,
    /// Flattened-plane coordinates (x̃, ỹ) of each member.
    pub flattened: Vec<Point2>,
    /// Set when the path left the admitted region and the list was truncated.
    pub exited: bool,
}

/// Pulls the pseudosphere loxodrome u = t, φ = φ₀ + tan(ϕ) e^{t/√2} back to
/// Gaussian parameters. Stops at the first sample outside the admitted region.
pub fn gauss_family_along_loxodrome(
    angle: CourseAngle,
    bx: &NormalizationBox,
    phi0: f64,
    t_grid: &[f64],
) -> Result<GaussFamily> {
    let curve = loxodrome_pseudosphere_curve(angle, phi0, PSEUDORADIUS, t_grid)?;
    let mut family = GaussFamily {
        t: Vec::new(),
        params: Vec::new(),
        normalized: Vec::new(),
        pseudosphere: Vec::new(),
        flattened: Vec::new(),
        exited: false,
    };
    for s in curve.samples() {
        let normalized = match from_pseudosphere(&s.point) {
            Ok(pn) => pn,
            Err(Error::Domain { .. }) => {
                family.exited = true;
                break;
            }
            Err(e) => return Err(e),
        };
        family.t.push(s.t);
        family.params.push(denormalize(&normalized, bx)?);
        family.flattened.push(to_flattened(&normalized)?);
        family.normalized.push(normalized);
        family.pseudosphere.push(s.point);
    }
    Ok(family)
}
