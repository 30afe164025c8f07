//! Vielbeins (zweibeins) e^i_μ relating coordinate differentials to the
//! anholonomic frame differentials d̄r^i = e^i_μ dq^μ.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{require_positive, Error, Result};
use crate::linalg::{self, Mat2, Tensor3, Vec2};

use super::chart::{ChartId, Point2};
use super::metric::MetricField;

/// Closest approach to the poles at which sphere frames are evaluated.
pub const SPHERE_POLE_GUARD: f64 = 1e-6;

/// Relative step of central differences on frames and connections.
pub const FD_STEP: f64 = 1e-5;

pub(crate) fn fd_step(x: f64) -> f64 {
    FD_STEP * x.abs().max(1.0)
}

type FrameFn = dyn Fn(Vec2) -> Mat2 + Send + Sync;

#[derive(Clone)]
enum FrameKind {
    Sphere { radius: f64 },
    Pseudosphere { radius: f64 },
    Custom(Arc<FrameFn>),
}

/// A point-dependent, nonsingular 2×2 frame on one chart.
#[derive(Clone)]
pub struct Vielbein2 {
    chart: ChartId,
    kind: FrameKind,
}

impl fmt::Debug for Vielbein2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            FrameKind::Sphere { radius } => format!("Sphere(R={radius})"),
            FrameKind::Pseudosphere { radius } => format!("Pseudosphere(R={radius})"),
            FrameKind::Custom(_) => "Custom".to_string(),
        };
        f.debug_struct("Vielbein2")
            .field("chart", &self.chart)
            .field("kind", &kind)
            .finish()
    }
}

/// Frame of the sphere of radius `R` in geographic coordinates (φ, θ):
/// e = diag(R cos θ, R).
pub fn sphere_vielbein(radius: f64) -> Result<Vielbein2> {
    require_positive("R", radius)?;
    Ok(Vielbein2 {
        chart: ChartId::SphereGeographic,
        kind: FrameKind::Sphere { radius },
    })
}

/// Frame of the pseudosphere of pseudoradius `R` in coordinates (φ, u):
/// e = diag(R exp(−u/R), 1).
pub fn pseudosphere_vielbein(radius: f64) -> Result<Vielbein2> {
    require_positive("R", radius)?;
    Ok(Vielbein2 {
        chart: ChartId::Pseudosphere,
        kind: FrameKind::Pseudosphere { radius },
    })
}

impl Vielbein2 {
    /// Wraps a user-supplied frame. Its derivatives are taken by central differences.
    pub fn from_fn<F>(chart: ChartId, frame: F) -> Self
    where
        F: Fn(Vec2) -> Mat2 + Send + Sync + 'static,
    {
        Self {
            chart,
            kind: FrameKind::Custom(Arc::new(frame)),
        }
    }

    /// The holonomic identity frame on a flat chart.
    pub fn identity(chart: ChartId) -> Self {
        Self::from_fn(chart, |_| linalg::IDENTITY)
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    /// Radius or pseudoradius of a built-in frame.
    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            FrameKind::Sphere { radius } | FrameKind::Pseudosphere { radius } => Some(radius),
            FrameKind::Custom(_) => None,
        }
    }

    /// Whether closed-form derivatives are available.
    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, FrameKind::Custom(_))
    }

    pub(crate) fn check(&self, q: Vec2) -> Result<()> {
        self.chart.check(q)?;
        if let FrameKind::Sphere { .. } = self.kind {
            if q[1].abs() > FRAC_PI_2 - SPHERE_POLE_GUARD {
                return Err(Error::domain(
                    "theta",
                    q[1],
                    "frame evaluation requires |theta| <= pi/2 - 1e-6",
                ));
            }
        }
        Ok(())
    }

    /// e^i_μ at `q`, indexed `[i][mu]`.
    pub fn frame(&self, q: Vec2) -> Result<Mat2> {
        self.check(q)?;
        Ok(match &self.kind {
            FrameKind::Sphere { radius } => [[radius * q[1].cos(), 0.0], [0.0, *radius]],
            FrameKind::Pseudosphere { radius } => {
                [[radius * (-q[1] / radius).exp(), 0.0], [0.0, 1.0]]
            }
            FrameKind::Custom(f) => f(q),
        })
    }

    /// E^μ_i at `q`, indexed `[mu][i]`, with `E · e = I`.
    pub fn inverse(&self, q: Vec2) -> Result<Mat2> {
        self.check(q)?;
        Ok(match &self.kind {
            FrameKind::Sphere { radius } => {
                [[1.0 / (radius * q[1].cos()), 0.0], [0.0, 1.0 / radius]]
            }
            FrameKind::Pseudosphere { radius } => {
                [[(q[1] / radius).exp() / radius, 0.0], [0.0, 1.0]]
            }
            FrameKind::Custom(f) => linalg::inverse(&f(q), "vielbein")?,
        })
    }

    pub fn frame_at(&self, p: &Point2) -> Result<Mat2> {
        p.expect_chart(self.chart)?;
        self.frame(p.coords())
    }

    pub fn inverse_at(&self, p: &Point2) -> Result<Mat2> {
        p.expect_chart(self.chart)?;
        self.inverse(p.coords())
    }

    /// ∂_μ e^i_ν indexed `[mu][i][nu]`, in closed form for the built-in frames.
    pub fn frame_derivative(&self, q: Vec2) -> Result<Tensor3> {
        self.check(q)?;
        let mut d = linalg::ZERO3;
        match &self.kind {
            FrameKind::Sphere { radius } => d[1][0][0] = -radius * q[1].sin(),
            FrameKind::Pseudosphere { radius } => d[1][0][0] = -(-q[1] / radius).exp(),
            FrameKind::Custom(_) => return self.frame_derivative_fd(q),
        }
        Ok(d)
    }

    /// ∂_μ e^i_ν by central differences, step `1e-5 · max(1, |q^μ|)`.
    pub fn frame_derivative_fd(&self, q: Vec2) -> Result<Tensor3> {
        self.check(q)?;
        let mut d = linalg::ZERO3;
        for (mu, slot) in d.iter_mut().enumerate() {
            let h = fd_step(q[mu]);
            let mut plus = q;
            let mut minus = q;
            plus[mu] += h;
            minus[mu] -= h;
            let ep = self.frame(plus)?;
            let em = self.frame(minus)?;
            for i in 0..2 {
                for nu in 0..2 {
                    slot[i][nu] = (ep[i][nu] - em[i][nu]) / (2.0 * h);
                }
            }
        }
        Ok(d)
    }

    /// ∂_μ E^ν_i by central differences, indexed `[mu][nu][i]`.
    pub fn inverse_derivative_fd(&self, q: Vec2) -> Result<Tensor3> {
        self.check(q)?;
        let mut d = linalg::ZERO3;
        for (mu, slot) in d.iter_mut().enumerate() {
            let h = fd_step(q[mu]);
            let mut plus = q;
            let mut minus = q;
            plus[mu] += h;
            minus[mu] -= h;
            let ep = self.inverse(plus)?;
            let em = self.inverse(minus)?;
            for nu in 0..2 {
                for i in 0..2 {
                    slot[nu][i] = (ep[nu][i] - em[nu][i]) / (2.0 * h);
                }
            }
        }
        Ok(d)
    }

    /// The metric eᵀe induced by the frame.
    pub fn metric(&self) -> MetricField {
        let frame = self.clone();
        MetricField::try_new(self.chart, move |q| {
            let e = frame.frame(q)?;
            Ok(linalg::mul(&linalg::transpose(&e), &e))
        })
    }
}

/// Exterior-derivative coefficients of the frame one-forms d̄r^i = e^i_ν dq^ν.
///
/// Returns `out[i][mu][nu] = ∂_μ e^i_ν − ∂_ν e^i_μ`, the coefficient of
/// dq^μ ∧ dq^ν in d(d̄r^i) (each unordered pair appears twice with opposite
/// signs). A frame is holonomic exactly when every entry vanishes.
pub fn anholonomy_check(v: &Vielbein2, p: &Point2) -> Result<Tensor3> {
    p.expect_chart(v.chart())?;
    let d = v.frame_derivative(p.coords())?;
    let mut out = linalg::ZERO3;
    for (i, block) in out.iter_mut().enumerate() {
        for (mu, row) in block.iter_mut().enumerate() {
            for (nu, value) in row.iter_mut().enumerate() {
                *value = d[mu][i][nu] - d[nu][i][mu];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs3, max_abs_diff, mul, IDENTITY};
    use std::f64::consts::{E, FRAC_PI_3, SQRT_2};

    fn sphere(phi: f64, theta: f64) -> Point2 {
        Point2::new(ChartId::SphereGeographic, phi, theta).unwrap()
    }

    fn pseudo(phi: f64, u: f64) -> Point2 {
        Point2::new(ChartId::Pseudosphere, phi, u).unwrap()
    }

    #[test]
    fn sphere_frame_values() {
        let v = sphere_vielbein(2.0).unwrap();
        assert_eq!(v.frame([0.3, 0.0]).unwrap(), [[2.0, 0.0], [0.0, 2.0]]);
        let e = v.frame([0.0, FRAC_PI_3]).unwrap();
        assert!((e[0][0] - 1.0).abs() < 1e-15);
        assert_eq!(v.radius(), Some(2.0));
    }

    #[test]
    fn pseudosphere_frame_values() {
        let v = pseudosphere_vielbein(SQRT_2).unwrap();
        assert_eq!(v.frame([1.0, 0.0]).unwrap(), [[SQRT_2, 0.0], [0.0, 1.0]]);
        let e = v.frame([1.0, SQRT_2]).unwrap();
        assert!((e[0][0] - SQRT_2 / E).abs() < 1e-15);
    }

    #[test]
    fn frame_domain_errors() {
        assert!(sphere_vielbein(0.0).is_err());
        assert!(pseudosphere_vielbein(-1.0).is_err());
        let v = sphere_vielbein(1.0).unwrap();
        assert!(v.frame([0.0, FRAC_PI_2]).is_err());
        assert!(v.frame([0.0, FRAC_PI_2 - 1e-7]).is_err());
        assert!(v.frame([0.0, FRAC_PI_2 - 1e-5]).is_ok());
        let w = pseudosphere_vielbein(1.0).unwrap();
        assert_eq!(w.frame([0.0, -0.5]).unwrap_err().field(), Some("u"));
    }

    #[test]
    fn inverse_matches_matrix_inverse() {
        let v = sphere_vielbein(1.7).unwrap();
        let q = [0.2, -1.1];
        assert!(
            max_abs_diff(
                &mul(&v.inverse(q).unwrap(), &v.frame(q).unwrap()),
                &IDENTITY
            ) < 1e-15
        );
    }

    #[test]
    fn custom_frame_inverse_and_singularity() {
        let v = Vielbein2::from_fn(ChartId::MercatorPlane, |q| [[1.0, q[0]], [0.0, 2.0]]);
        let q = [0.5, 0.1];
        assert!(
            max_abs_diff(
                &mul(&v.inverse(q).unwrap(), &v.frame(q).unwrap()),
                &IDENTITY
            ) < 1e-15
        );
        let singular = Vielbein2::from_fn(ChartId::MercatorPlane, |_| [[1.0, 1.0], [1.0, 1.0]]);
        assert!(matches!(singular.inverse(q), Err(Error::Singular { .. })));
    }

    #[test]
    fn analytic_and_numeric_frame_derivatives_agree() {
        for v in [
            sphere_vielbein(1.3).unwrap(),
            pseudosphere_vielbein(0.8).unwrap(),
        ] {
            let q = [0.4, 0.9];
            let exact = v.frame_derivative(q).unwrap();
            let fd = v.frame_derivative_fd(q).unwrap();
            let mut diff = exact;
            for m in 0..2 {
                for i in 0..2 {
                    for n in 0..2 {
                        diff[m][i][n] -= fd[m][i][n];
                    }
                }
            }
            assert!(max_abs3(&diff) < 1e-9);
        }
    }

    #[test]
    fn anholonomy_of_sphere_frame() {
        let r = 1.5;
        let v = sphere_vielbein(r).unwrap();
        let d = anholonomy_check(&v, &sphere(0.1, 0.5)).unwrap();
        // coefficient of dθ ∧ dφ in d(d̄x)
        assert!((d[0][1][0] + r * 0.5f64.sin()).abs() < 1e-15);
        assert_eq!(d[0][0][1], -d[0][1][0]);
        assert_eq!(d[1], [[0.0; 2]; 2]);
    }

    #[test]
    fn anholonomy_of_pseudosphere_frame() {
        for r in [1.0, SQRT_2, 3.0] {
            let v = pseudosphere_vielbein(r).unwrap();
            let d = anholonomy_check(&v, &pseudo(0.0, 1.0)).unwrap();
            assert!((d[0][1][0] + (-1.0 / r).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_frame_is_holonomic() {
        let v = Vielbein2::identity(ChartId::MercatorPlane);
        let p = Point2::new(ChartId::MercatorPlane, 3.0, -2.0).unwrap();
        assert_eq!(max_abs3(&anholonomy_check(&v, &p).unwrap()), 0.0);
    }

    #[test]
    fn coordinate_induced_frame_is_holonomic() {
        // Jacobian of polar → Cartesian: e = ∂(x, y)/∂(r, ϑ)
        let v = Vielbein2::from_fn(ChartId::MercatorPlane, |q| {
            let (r, t) = (q[0], q[1]);
            [[t.cos(), -r * t.sin()], [t.sin(), r * t.cos()]]
        });
        let p = Point2::new(ChartId::MercatorPlane, 1.4, 0.6).unwrap();
        assert!(max_abs3(&anholonomy_check(&v, &p).unwrap()) < 1e-9);
    }

    #[test]
    fn chart_mismatch_rejected() {
        let v = sphere_vielbein(1.0).unwrap();
        assert!(matches!(
            anholonomy_check(&v, &pseudo(0.0, 1.0)),
            Err(Error::ChartMismatch { .. })
        ));
    }
}
