//! Affine connections, the Weizenböck connection of a frame, and the torsion
//! and curvature tensors derived from a connection.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, Tensor3, Tensor4, Vec2};

use super::chart::{ChartId, Point2};
use super::frame::{fd_step, Vielbein2};
use super::metric::MetricField;

/// Step used for the derivatives of the connection inside the curvature tensor.
pub const CURVATURE_STEP: f64 = 1e-4;

type GammaFn = dyn Fn(Vec2) -> Result<Tensor3> + Send + Sync;

/// Connection coefficients Γ^ρ_{μν}, stored `[rho][mu][nu]`; μ is the
/// differentiation index, so ∇_μ V^ρ = ∂_μ V^ρ + Γ^ρ_{μν} V^ν.
#[derive(Clone)]
pub struct ConnectionField {
    chart: ChartId,
    gamma: Arc<GammaFn>,
}

impl fmt::Debug for ConnectionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectionField")
            .field("chart", &self.chart)
            .finish()
    }
}

impl ConnectionField {
    pub fn new<F>(chart: ChartId, gamma: F) -> Self
    where
        F: Fn(Vec2) -> Tensor3 + Send + Sync + 'static,
    {
        Self::try_new(chart, move |q| Ok(gamma(q)))
    }

    pub fn try_new<F>(chart: ChartId, gamma: F) -> Self
    where
        F: Fn(Vec2) -> Result<Tensor3> + Send + Sync + 'static,
    {
        Self {
            chart,
            gamma: Arc::new(gamma),
        }
    }

    /// The flat connection Γ ≡ 0.
    pub fn zero(chart: ChartId) -> Self {
        Self::new(chart, |_| linalg::ZERO3)
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn eval(&self, q: Vec2) -> Result<Tensor3> {
        self.chart.check(q)?;
        (self.gamma)(q)
    }

    pub fn at(&self, p: &Point2) -> Result<Tensor3> {
        p.expect_chart(self.chart)?;
        self.eval(p.coords())
    }

    /// Γ^ρ_{μν} v^μ v^ν summed over every ordered pair (μ, ν).
    pub fn contract(&self, q: Vec2, v: Vec2) -> Result<Vec2> {
        let g = self.eval(q)?;
        Ok(contract(&g, v))
    }

    fn expect_chart(&self, chart: ChartId) -> Result<()> {
        if self.chart == chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                expected: chart,
                found: self.chart,
            })
        }
    }
}

pub(crate) fn contract(g: &Tensor3, v: Vec2) -> Vec2 {
    let mut out = [0.0; 2];
    for (rho, slot) in out.iter_mut().enumerate() {
        for mu in 0..2 {
            for nu in 0..2 {
                *slot += g[rho][mu][nu] * v[mu] * v[nu];
            }
        }
    }
    out
}

/// How frame derivatives are obtained when building a Weizenböck connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMethod {
    /// Closed form for the built-in frames, central differences otherwise.
    #[default]
    Auto,
    /// Central differences regardless of the frame.
    FiniteDifference,
}

/// Weizenböck connection Γ^ρ_{μν} = E^ρ_i ∂_μ e^i_ν of a frame.
///
/// For the sphere frame the only nonzero coefficient is Γ^φ_{θφ} = −tan θ,
/// stored at `[0][1][0]`; for the pseudosphere it is Γ^φ_{uφ} = −1/R at the
/// same slot.
pub fn weizenbock_connection(v: &Vielbein2) -> ConnectionField {
    weizenbock_connection_with(v, DerivativeMethod::Auto)
}

pub fn weizenbock_connection_with(v: &Vielbein2, method: DerivativeMethod) -> ConnectionField {
    let frame = v.clone();
    ConnectionField::try_new(v.chart(), move |q| {
        let inv = frame.inverse(q)?;
        let d = match method {
            DerivativeMethod::Auto => frame.frame_derivative(q)?,
            DerivativeMethod::FiniteDifference => frame.frame_derivative_fd(q)?,
        };
        let mut gamma = linalg::ZERO3;
        for (rho, block) in gamma.iter_mut().enumerate() {
            for (mu, row) in block.iter_mut().enumerate() {
                for (nu, value) in row.iter_mut().enumerate() {
                    *value = inv[rho][0] * d[mu][0][nu] + inv[rho][1] * d[mu][1][nu];
                }
            }
        }
        Ok(gamma)
    })
}

/// Torsion T^ρ_{μν} = Γ^ρ_{μν} − Γ^ρ_{νμ}.
///
/// With the index convention of [`ConnectionField`], the sphere frame gives
/// T^φ_{θφ} = −tan θ; its magnitude is tan θ.
#[derive(Clone, Debug)]
pub struct TorsionField {
    connection: ConnectionField,
}

pub fn torsion(c: &ConnectionField) -> TorsionField {
    TorsionField {
        connection: c.clone(),
    }
}

impl TorsionField {
    pub fn chart(&self) -> ChartId {
        self.connection.chart()
    }

    pub fn eval(&self, q: Vec2) -> Result<Tensor3> {
        Ok(antisymmetrize(&self.connection.eval(q)?))
    }

    pub fn at(&self, p: &Point2) -> Result<Tensor3> {
        Ok(antisymmetrize(&self.connection.at(p)?))
    }
}

fn antisymmetrize(g: &Tensor3) -> Tensor3 {
    let mut t = linalg::ZERO3;
    for rho in 0..2 {
        for mu in 0..2 {
            for nu in 0..2 {
                t[rho][mu][nu] = g[rho][mu][nu] - g[rho][nu][mu];
            }
        }
    }
    t
}

/// Riemann tensor of a connection, sampled by central differences.
#[derive(Clone, Debug)]
pub struct CurvatureField {
    connection: ConnectionField,
    step: f64,
}

impl CurvatureField {
    pub fn new(c: &ConnectionField, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::domain("h", step, "step must be positive"));
        }
        Ok(Self {
            connection: c.clone(),
            step,
        })
    }

    pub fn chart(&self) -> ChartId {
        self.connection.chart()
    }

    pub fn at(&self, p: &Point2) -> Result<Tensor4> {
        riemann_curvature(&self.connection, p, self.step)
    }
}

/// R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μγ} Γ^γ_{νσ} − Γ^ρ_{νγ} Γ^γ_{μσ},
/// stored `[rho][sigma][mu][nu]`, with ∂Γ from a central stencil of half-width `h`.
pub fn riemann_curvature(c: &ConnectionField, p: &Point2, h: f64) -> Result<Tensor4> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain("h", h, "step must be positive"));
    }
    p.expect_chart(c.chart())?;
    let q = p.coords();
    let gamma = c.eval(q)?;

    // dgamma[mu] = ∂_μ Γ
    let mut dgamma = [linalg::ZERO3; 2];
    for (mu, slot) in dgamma.iter_mut().enumerate() {
        let mut plus = q;
        let mut minus = q;
        plus[mu] += h;
        minus[mu] -= h;
        let gp = c.eval(plus)?;
        let gm = c.eval(minus)?;
        for rho in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    slot[rho][a][b] = (gp[rho][a][b] - gm[rho][a][b]) / (2.0 * h);
                }
            }
        }
    }

    let mut riem = linalg::ZERO4;
    for rho in 0..2 {
        for sigma in 0..2 {
            for mu in 0..2 {
                for nu in 0..2 {
                    let mut value = dgamma[mu][rho][nu][sigma] - dgamma[nu][rho][mu][sigma];
                    for g in 0..2 {
                        value += gamma[rho][mu][g] * gamma[g][nu][sigma]
                            - gamma[rho][nu][g] * gamma[g][mu][sigma];
                    }
                    riem[rho][sigma][mu][nu] = value;
                }
            }
        }
    }
    Ok(riem)
}

/// Gaussian curvature K = R_{0101} / det g of a surface, where the connection
/// is expected to be the Levi-Civita connection of `g`.
pub fn gaussian_curvature(g: &MetricField, c: &ConnectionField, p: &Point2, h: f64) -> Result<f64> {
    c.expect_chart(g.chart())?;
    let riem = riemann_curvature(c, p, h)?;
    let m = g.at(p)?;
    let lowered = m[0][0] * riem[0][1][0][1] + m[0][1] * riem[1][1][0][1];
    Ok(lowered / linalg::det(&m))
}

/// Largest violation of the covariant constancy of a frame under a connection:
/// ∂_μ e^i_ν − Γ^ρ_{μν} e^i_ρ and ∂_μ E^ν_i + Γ^ν_{μρ} E^ρ_i, with the
/// frame derivatives taken by central differences.
pub fn covariant_constancy_residual(v: &Vielbein2, c: &ConnectionField, p: &Point2) -> Result<f64> {
    c.expect_chart(v.chart())?;
    let q = p.coords();
    let gamma = c.at(p)?;
    let e = v.frame_at(p)?;
    let inv = v.inverse_at(p)?;
    let de = v.frame_derivative_fd(q)?;
    let dinv = v.inverse_derivative_fd(q)?;

    let mut worst = 0.0_f64;
    for mu in 0..2 {
        for i in 0..2 {
            for nu in 0..2 {
                let frame_term: f64 = de[mu][i][nu]
                    - (0..2)
                        .map(|rho| gamma[rho][mu][nu] * e[i][rho])
                        .sum::<f64>();
                let inverse_term: f64 = dinv[mu][nu][i]
                    + (0..2)
                        .map(|rho| gamma[nu][mu][rho] * inv[rho][i])
                        .sum::<f64>();
                worst = worst.max(frame_term.abs()).max(inverse_term.abs());
            }
        }
    }
    Ok(worst)
}

/// Relative central-difference step used on coordinate `x`.
pub fn finite_difference_step(x: f64) -> f64 {
    fd_step(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pseudosphere_vielbein, sphere_vielbein};
    use crate::linalg::{max_abs3, max_abs4};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, SQRT_2};

    fn sphere(phi: f64, theta: f64) -> Point2 {
        Point2::new(ChartId::SphereGeographic, phi, theta).unwrap()
    }

    fn pseudo(phi: f64, u: f64) -> Point2 {
        Point2::new(ChartId::Pseudosphere, phi, u).unwrap()
    }

    #[test]
    fn sphere_coefficient_lands_in_phi_theta_phi() {
        let c = weizenbock_connection(&sphere_vielbein(2.0).unwrap());
        let g = c.at(&sphere(0.0, FRAC_PI_4)).unwrap();
        assert!((g[0][1][0] + 1.0).abs() < 1e-15);
        let mut rest = g;
        rest[0][1][0] = 0.0;
        assert_eq!(max_abs3(&rest), 0.0);
        assert_eq!(max_abs3(&c.at(&sphere(0.0, 0.0)).unwrap()), 0.0);
    }

    #[test]
    fn pseudosphere_coefficient() {
        let c = weizenbock_connection(&pseudosphere_vielbein(SQRT_2).unwrap());
        for u in [0.0, 0.4, 7.0] {
            let g = c.at(&pseudo(1.0, u)).unwrap();
            assert!((g[0][1][0] + 1.0 / SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn finite_difference_connection_matches_closed_form() {
        let frames = [
            sphere_vielbein(1.2).unwrap(),
            pseudosphere_vielbein(0.9).unwrap(),
        ];
        for v in frames {
            let exact = weizenbock_connection(&v);
            let fd = weizenbock_connection_with(&v, DerivativeMethod::FiniteDifference);
            for q in [[0.1, 0.05], [2.0, 0.7], [-1.0, 1.2]] {
                let (a, b) = (exact.eval(q).unwrap(), fd.eval(q).unwrap());
                for r in 0..2 {
                    for m in 0..2 {
                        for n in 0..2 {
                            assert!((a[r][m][n] - b[r][m][n]).abs() < 1e-8);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn finite_difference_stencil_out_of_domain() {
        let v = pseudosphere_vielbein(1.0).unwrap();
        let fd = weizenbock_connection_with(&v, DerivativeMethod::FiniteDifference);
        let err = fd.eval([0.0, 0.0]).unwrap_err();
        assert_eq!(err.field(), Some("u"));
    }

    #[test]
    fn torsion_is_antisymmetric_with_documented_sign() {
        let c = weizenbock_connection(&sphere_vielbein(1.0).unwrap());
        let t = torsion(&c).at(&sphere(0.0, FRAC_PI_6)).unwrap();
        assert!((t[0][1][0] + FRAC_PI_6.tan()).abs() < 1e-15);
        for r in 0..2 {
            for m in 0..2 {
                for n in 0..2 {
                    assert_eq!(t[r][m][n], -t[r][n][m]);
                }
            }
        }
        assert_eq!(max_abs3(&torsion(&c).at(&sphere(0.0, 0.0)).unwrap()), 0.0);
    }

    #[test]
    fn weizenbock_connections_are_flat() {
        let sphere_c = weizenbock_connection(&sphere_vielbein(1.0).unwrap());
        let r = riemann_curvature(&sphere_c, &sphere(0.3, 0.5), CURVATURE_STEP).unwrap();
        assert!(max_abs4(&r) <= 1e-6);
        let pseudo_c = weizenbock_connection(&pseudosphere_vielbein(SQRT_2).unwrap());
        let r = riemann_curvature(&pseudo_c, &pseudo(0.5, 1.0), CURVATURE_STEP).unwrap();
        assert!(max_abs4(&r) <= 1e-6);
    }

    #[test]
    fn curvature_of_custom_frame_is_flat() {
        let v = Vielbein2::from_fn(ChartId::MercatorPlane, |q| {
            [[1.0 + q[1] * q[1], 0.3 * q[0]], [0.2, 2.0 + q[0].sin()]]
        });
        let c = weizenbock_connection(&v);
        let p = Point2::new(ChartId::MercatorPlane, 0.4, -0.3).unwrap();
        let r = CurvatureField::new(&c, CURVATURE_STEP)
            .unwrap()
            .at(&p)
            .unwrap();
        assert!(max_abs4(&r) <= 1e-6);
    }

    #[test]
    fn curvature_stencil_out_of_domain() {
        let c = weizenbock_connection(&pseudosphere_vielbein(1.0).unwrap());
        assert!(riemann_curvature(&c, &pseudo(0.0, 0.0), 1e-4).is_err());
        assert!(riemann_curvature(&c, &pseudo(0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn levi_civita_sphere_has_positive_curvature() {
        // Γ^φ_{φθ} = Γ^φ_{θφ} = −tan θ, Γ^θ_{φφ} = sin θ cos θ
        let radius = 2.0;
        let lc = ConnectionField::new(ChartId::SphereGeographic, |q| {
            let mut g = linalg::ZERO3;
            g[0][0][1] = -q[1].tan();
            g[0][1][0] = -q[1].tan();
            g[1][0][0] = q[1].sin() * q[1].cos();
            g
        });
        let metric = crate::geometry::sphere_metric(radius).unwrap();
        let k = gaussian_curvature(&metric, &lc, &sphere(0.2, 0.6), CURVATURE_STEP).unwrap();
        assert!((k - 0.25).abs() < 1e-6);
    }

    #[test]
    fn covariant_constancy_of_builtin_frames() {
        let v = sphere_vielbein(1.4).unwrap();
        let c = weizenbock_connection(&v);
        assert!(covariant_constancy_residual(&v, &c, &sphere(0.3, -0.8)).unwrap() < 1e-6);
        let v = pseudosphere_vielbein(SQRT_2).unwrap();
        let c = weizenbock_connection(&v);
        assert!(covariant_constancy_residual(&v, &c, &pseudo(0.3, 2.0)).unwrap() < 1e-6);
        // the zero connection does not keep the sphere frame constant
        let v = sphere_vielbein(1.0).unwrap();
        let zero = ConnectionField::zero(ChartId::SphereGeographic);
        assert!(covariant_constancy_residual(&v, &zero, &sphere(0.0, 0.5)).unwrap() > 0.1);
    }
}
