//! Auto-parallel curves q̈^ρ + Γ^ρ_{μν} q̇^μ q̇^ν = 0 of torsionful
//! connections, closed-form loxodromes, and residual checks tying the two.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::geometry::{
    flatten_pseudosphere, mercator_forward, mercator_inverse, unflatten_pseudosphere, ChartId,
    ConnectionField, Point2,
};
use crate::linalg::Vec2;
use crate::specialfun::{gd, gd_inv};

/// Angle ϕ at which a loxodrome cuts the meridians; ϕ ∈ (0, π), ϕ ≠ π/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CourseAngle(f64);

impl CourseAngle {
    /// Half-width of the excluded band around π/2.
    pub const MERIDIAN_GUARD: f64 = 1e-12;

    pub fn new(phi: f64) -> Result<Self> {
        if !(phi.is_finite() && phi > 0.0 && phi < PI) {
            return Err(Error::domain("course", phi, "0 < course < pi"));
        }
        if (phi - FRAC_PI_2).abs() < Self::MERIDIAN_GUARD {
            return Err(Error::domain(
                "course",
                phi,
                "course = pi/2 is a parallel of latitude, not a loxodrome",
            ));
        }
        Ok(Self(phi))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn tan(self) -> f64 {
        self.0.tan()
    }

    pub fn cot(self) -> f64 {
        1.0 / self.0.tan()
    }
}

/// How a curve was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveGenerator {
    AnalyticLoxodrome,
    Integrated,
    Projected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub point: Point2,
}

/// A sampled path in one chart with strictly increasing parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve2 {
    chart: ChartId,
    samples: Vec<CurveSample>,
    generator: CurveGenerator,
}

impl Curve2 {
    pub fn new(
        chart: ChartId,
        generator: CurveGenerator,
        samples: Vec<CurveSample>,
    ) -> Result<Self> {
        for s in &samples {
            require_finite("t", s.t)?;
            s.point.expect_chart(chart)?;
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].t <= w[0].t) {
            return Err(Error::Precondition(format!(
                "curve parameter must be strictly increasing ({} followed by {})",
                w[0].t, w[1].t
            )));
        }
        Ok(Self {
            chart,
            samples,
            generator,
        })
    }

    /// Builds a curve from raw parameter values and coordinates.
    pub fn from_coords(
        chart: ChartId,
        generator: CurveGenerator,
        t: &[f64],
        coords: impl IntoIterator<Item = Vec2>,
    ) -> Result<Self> {
        let samples = t
            .iter()
            .zip(coords)
            .map(|(&t, q)| {
                Ok(CurveSample {
                    t,
                    point: Point2::from_coords(chart, q)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(chart, generator, samples)
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn generator(&self) -> CurveGenerator {
        self.generator
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn coords(&self) -> Vec<Vec2> {
        self.samples.iter().map(|s| s.point.coords()).collect()
    }
}

/// Output of [`integrate_autoparallel`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub curve: Curve2,
    /// q̇ at each sample of `curve`.
    pub velocities: Vec<Vec2>,
    /// Set when integration stopped early because the path left the chart.
    pub left_domain: bool,
}

/// Integrates q̈^ρ = −Γ^ρ_{μν}(q) q̇^μ q̇^ν with classical fixed-step RK4 from
/// t = 0 to `t_end`, sampling every step. The last step is shortened if
/// `t_end` is not a multiple of `dt`.
pub fn integrate_autoparallel(
    c: &ConnectionField,
    q0: &Point2,
    v0: Vec2,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    q0.expect_chart(c.chart())?;
    require_positive("dt", dt)?;
    require_finite("t_end", t_end)?;
    if t_end < 0.0 {
        return Err(Error::domain("t_end", t_end, "t_end >= 0"));
    }
    require_finite("v0", v0[0])?;
    require_finite("v0", v0[1])?;

    let chart = c.chart();
    let rhs = |q: Vec2, v: Vec2| -> Result<(Vec2, Vec2)> {
        let a = c.contract(q, v)?;
        Ok((v, [-a[0], -a[1]]))
    };

    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut samples = vec![CurveSample { t: 0.0, point: *q0 }];
    let mut velocities = vec![v0];
    let (mut q, mut v) = (q0.coords(), v0);
    let mut left_domain = false;

    for k in 0..steps {
        let t = k as f64 * dt;
        let t_next = if k + 1 == steps {
            t_end
        } else {
            (k + 1) as f64 * dt
        };
        let h = t_next - t;
        let step = (|| -> Result<(Vec2, Vec2)> {
            let (k1q, k1v) = rhs(q, v)?;
            let (k2q, k2v) = rhs(axpy(q, 0.5 * h, k1q), axpy(v, 0.5 * h, k1v))?;
            let (k3q, k3v) = rhs(axpy(q, 0.5 * h, k2q), axpy(v, 0.5 * h, k2v))?;
            let (k4q, k4v) = rhs(axpy(q, h, k3q), axpy(v, h, k3v))?;
            let combine = |y: Vec2, a: Vec2, b: Vec2, c: Vec2, d: Vec2| -> Vec2 {
                [
                    y[0] + h / 6.0 * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0]),
                    y[1] + h / 6.0 * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1]),
                ]
            };
            Ok((
                combine(q, k1q, k2q, k3q, k4q),
                combine(v, k1v, k2v, k3v, k4v),
            ))
        })();
        let next = step.and_then(|(qn, vn)| Ok((Point2::from_coords(chart, qn)?, vn)));
        match next {
            Ok((point, vn)) => {
                samples.push(CurveSample { t: t_next, point });
                velocities.push(vn);
                q = point.coords();
                v = vn;
            }
            Err(Error::Domain { .. }) => {
                left_domain = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(Trajectory {
        curve: Curve2::new(chart, CurveGenerator::Integrated, samples)?,
        velocities,
        left_domain,
    })
}

fn axpy(y: Vec2, a: f64, x: Vec2) -> Vec2 {
    [y[0] + a * x[0], y[1] + a * x[1]]
}

/// Sphere loxodrome in the parametrization whose Mercator image is the
/// uniform straight line x = R tan(ϕ) t/R, y = t:
/// θ(t) = gd(t/R), φ(t) = φ₀ + tan(ϕ) t/R.
pub fn loxodrome_sphere_curve(
    angle: CourseAngle,
    phi0: f64,
    radius: f64,
    t_grid: &[f64],
) -> Result<Curve2> {
    require_finite("phi0", phi0)?;
    require_positive("R", radius)?;
    let coords = t_grid
        .iter()
        .map(|&t| Ok([phi0 + angle.tan() * t / radius, gd(t / radius)?]))
        .collect::<Result<Vec<_>>>()?;
    Curve2::from_coords(
        ChartId::SphereGeographic,
        CurveGenerator::AnalyticLoxodrome,
        t_grid,
        coords,
    )
}

/// The same sphere loxodrome with constant frame velocity, i.e. the
/// auto-parallel parametrization of the Weizenböck connection:
/// θ(t) = t/R, φ(t) = φ₀ + tan(ϕ) gd⁻¹(t/R). Requires |t/R| < π/2.
pub fn loxodrome_sphere_frame_curve(
    angle: CourseAngle,
    phi0: f64,
    radius: f64,
    t_grid: &[f64],
) -> Result<Curve2> {
    require_finite("phi0", phi0)?;
    require_positive("R", radius)?;
    let coords = t_grid
        .iter()
        .map(|&t| {
            let theta = t / radius;
            Ok([phi0 + angle.tan() * gd_inv(theta)?, theta])
        })
        .collect::<Result<Vec<_>>>()?;
    Curve2::from_coords(
        ChartId::SphereGeographic,
        CurveGenerator::AnalyticLoxodrome,
        t_grid,
        coords,
    )
}

/// Pseudosphere loxodrome u(t) = t, φ(t) = φ₀ + tan(ϕ) exp(t/R), t ≥ 0.
pub fn loxodrome_pseudosphere_curve(
    angle: CourseAngle,
    phi0: f64,
    radius: f64,
    t_grid: &[f64],
) -> Result<Curve2> {
    require_finite("phi0", phi0)?;
    require_positive("R", radius)?;
    if let Some(&t) = t_grid.iter().find(|&&t| t.is_nan() || t < 0.0) {
        return Err(Error::domain("t", t, "t >= 0 (u = t must be nonnegative)"));
    }
    let coords = t_grid
        .iter()
        .map(|&t| [phi0 + angle.tan() * (t / radius).exp(), t]);
    Curve2::from_coords(
        ChartId::Pseudosphere,
        CurveGenerator::AnalyticLoxodrome,
        t_grid,
        coords,
    )
}

/// Max over interior samples and both components of
/// |q̈^ρ + Γ^ρ_{μν} q̇^μ q̇^ν|, with q̇ and q̈ from fourth-order central
/// differences. Needs at least 5 samples on a uniform grid; the two samples
/// at each end are excluded.
pub fn autoparallel_residual(curve: &Curve2, c: &ConnectionField) -> Result<f64> {
    if curve.chart() != c.chart() {
        return Err(Error::ChartMismatch {
            expected: c.chart(),
            found: curve.chart(),
        });
    }
    let n = curve.len();
    if n < 5 {
        return Err(Error::Precondition(format!(
            "residual needs at least 5 samples, got {n}"
        )));
    }
    let t = curve.times();
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    for (k, w) in t.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-8 * h {
            return Err(Error::Precondition(format!(
                "residual needs a uniform grid; step {k} is {} instead of {h}",
                w[1] - w[0]
            )));
        }
    }

    let q = curve.coords();
    let mut worst = 0.0_f64;
    for k in 2..n - 2 {
        let mut vel = [0.0; 2];
        let mut acc = [0.0; 2];
        for r in 0..2 {
            let (m2, m1, z, p1, p2) = (q[k - 2][r], q[k - 1][r], q[k][r], q[k + 1][r], q[k + 2][r]);
            vel[r] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
            acc[r] = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
        }
        let gamma_term = c.contract(q[k], vel)?;
        for r in 0..2 {
            worst = worst.max((acc[r] + gamma_term[r]).abs());
        }
    }
    Ok(worst)
}

/// Applies a chart map pointwise, keeping the parametrization.
///
/// Supported pairs: sphere ↔ Mercator plane (radius `R`, central meridian
/// `phi0`) and pseudosphere ↔ flattened plane (pseudoradius `R`; `phi0` is
/// not used). Projecting onto the curve's own chart returns a copy.
pub fn project_curve(curve: &Curve2, target: ChartId, radius: f64, phi0: f64) -> Result<Curve2> {
    require_positive("R", radius)?;
    let source = curve.chart();
    if source == target {
        return Ok(curve.clone());
    }
    let map: fn(&Point2, f64, f64) -> Result<Point2> = match (source, target) {
        (ChartId::SphereGeographic, ChartId::MercatorPlane) => mercator_forward,
        (ChartId::MercatorPlane, ChartId::SphereGeographic) => mercator_inverse,
        (ChartId::Pseudosphere, ChartId::FlattenedPlane) => |p, r, _| flatten_pseudosphere(p, r),
        (ChartId::FlattenedPlane, ChartId::Pseudosphere) => |p, r, _| unflatten_pseudosphere(p, r),
        (from, to) => return Err(Error::UnsupportedProjection { from, to }),
    };
    let samples = curve
        .samples()
        .iter()
        .map(|s| {
            Ok(CurveSample {
                t: s.t,
                point: map(&s.point, radius, phi0)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Curve2::new(target, CurveGenerator::Projected, samples)
}

/// Largest perpendicular distance of `points` from their total-least-squares
/// line. Zero for fewer than three points.
pub fn collinearity_residual(points: &[Vec2]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p[0] - cx, p[1] - cy);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // principal direction of the scatter matrix
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal = [-angle.sin(), angle.cos()];
    points
        .iter()
        .map(|p| ((p[0] - cx) * normal[0] + (p[1] - cy) * normal[1]).abs())
        .fold(0.0, f64::max)
}

/// Uniform grid of `n` parameter values on [0, `t_end`].
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect(),
    }
}
