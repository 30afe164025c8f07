use std::fmt;
use std::sync::Arc;

use crate::error::{require_positive, Error, Result};
use crate::linalg::{self, Mat2, Tensor3, Vec2};

use super::chart::{ChartId, Point2};
use super::connection::ConnectionField;

type MetricFn = dyn Fn(Vec2) -> Result<Mat2> + Send + Sync;

/// A symmetric positive-definite metric g_{μν} on one chart.
#[derive(Clone)]
pub struct MetricField {
    chart: ChartId,
    g: Arc<MetricFn>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("chart", &self.chart)
            .finish()
    }
}

impl MetricField {
    pub fn new<F>(chart: ChartId, g: F) -> Self
    where
        F: Fn(Vec2) -> Mat2 + Send + Sync + 'static,
    {
        Self::try_new(chart, move |q| Ok(g(q)))
    }

    pub fn try_new<F>(chart: ChartId, g: F) -> Self
    where
        F: Fn(Vec2) -> Result<Mat2> + Send + Sync + 'static,
    {
        Self {
            chart,
            g: Arc::new(g),
        }
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    /// g at `q`; fails if `q` is off-chart or g is not positive definite there.
    pub fn eval(&self, q: Vec2) -> Result<Mat2> {
        self.chart.check(q)?;
        let g = (self.g)(q)?;
        if !linalg::is_positive_definite(&g) {
            return Err(Error::Singular {
                what: "metric",
                det: linalg::det(&g),
            });
        }
        Ok(g)
    }

    pub fn at(&self, p: &Point2) -> Result<Mat2> {
        p.expect_chart(self.chart)?;
        self.eval(p.coords())
    }

    /// The metric multiplied by a positive constant.
    pub fn scaled(&self, factor: f64) -> Result<MetricField> {
        require_positive("factor", factor)?;
        let g = self.g.clone();
        Ok(MetricField::try_new(self.chart, move |q| {
            let m = g(q)?;
            Ok([
                [factor * m[0][0], factor * m[0][1]],
                [factor * m[1][0], factor * m[1][1]],
            ])
        }))
    }
}

/// Round-sphere metric diag(R² cos²θ, R²) in (φ, θ).
pub fn sphere_metric(radius: f64) -> Result<MetricField> {
    require_positive("R", radius)?;
    Ok(MetricField::new(ChartId::SphereGeographic, move |q| {
        let c = radius * q[1].cos();
        [[c * c, 0.0], [0.0, radius * radius]]
    }))
}

/// Pseudosphere metric ds² = R² exp(−2u/R) dφ² + du² in (φ, u).
pub fn pseudosphere_metric(radius: f64) -> Result<MetricField> {
    require_positive("R", radius)?;
    Ok(MetricField::new(ChartId::Pseudosphere, move |q| {
        [
            [radius * radius * (-2.0 * q[1] / radius).exp(), 0.0],
            [0.0, 1.0],
        ]
    }))
}

/// Conformal rescaling g̃ = e^{2λ} g with the induced connection shift
///
/// Γ̃^ρ_{μν} = Γ^ρ_{μν} + δ^ρ_μ ∂_ν λ + δ^ρ_ν ∂_μ λ − g_{μν} g^{ρσ} ∂_σ λ.
///
/// Both returned fields are evaluated lazily; a singular `g` surfaces as an
/// error when the connection is evaluated.
pub fn conformal_transform<L, G>(
    g: &MetricField,
    c: &ConnectionField,
    lambda: L,
    grad_lambda: G,
) -> Result<(MetricField, ConnectionField)>
where
    L: Fn(Vec2) -> f64 + Send + Sync + 'static,
    G: Fn(Vec2) -> Vec2 + Send + Sync + 'static,
{
    if g.chart() != c.chart() {
        return Err(Error::ChartMismatch {
            expected: g.chart(),
            found: c.chart(),
        });
    }
    let chart = g.chart();

    let base = g.clone();
    let metric = MetricField::try_new(chart, move |q| {
        let m = base.eval(q)?;
        let s = (2.0 * lambda(q)).exp();
        Ok([[s * m[0][0], s * m[0][1]], [s * m[1][0], s * m[1][1]]])
    });

    let base = g.clone();
    let conn = c.clone();
    let connection = ConnectionField::try_new(chart, move |q| {
        let m = base.eval(q)?;
        let inv = linalg::inverse(&m, "metric")?;
        let dl = grad_lambda(q);
        let raised = linalg::mat_vec(&inv, &dl);
        let mut out: Tensor3 = conn.eval(q)?;
        for (rho, block) in out.iter_mut().enumerate() {
            for (mu, row) in block.iter_mut().enumerate() {
                for (nu, value) in row.iter_mut().enumerate() {
                    let delta_rho_mu = if rho == mu { dl[nu] } else { 0.0 };
                    let delta_rho_nu = if rho == nu { dl[mu] } else { 0.0 };
                    *value += delta_rho_mu + delta_rho_nu - m[mu][nu] * raised[rho];
                }
            }
        }
        Ok(out)
    });

    Ok((metric, connection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pseudosphere_vielbein, weizenbock_connection};
    use crate::linalg::{max_abs3, max_abs_diff};
    use std::f64::consts::SQRT_2;

    #[test]
    fn pseudosphere_metric_matches_frame_metric() {
        let r = SQRT_2;
        let g = pseudosphere_metric(r).unwrap();
        let from_frame = pseudosphere_vielbein(r).unwrap().metric();
        for u in [0.0, 0.5, 3.0] {
            let q = [0.7, u];
            assert!(max_abs_diff(&g.eval(q).unwrap(), &from_frame.eval(q).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn non_positive_definite_metric_rejected() {
        let g = MetricField::new(ChartId::MercatorPlane, |_| [[1.0, 0.0], [0.0, -1.0]]);
        assert!(matches!(g.eval([0.0, 0.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn zero_conformal_factor_is_identity() {
        let r = 1.3;
        let g = pseudosphere_metric(r).unwrap();
        let c = weizenbock_connection(&pseudosphere_vielbein(r).unwrap());
        let (gt, ct) = conformal_transform(&g, &c, |_| 0.0, |_| [0.0, 0.0]).unwrap();
        let q = [0.2, 0.9];
        assert_eq!(gt.eval(q).unwrap(), g.eval(q).unwrap());
        assert_eq!(ct.eval(q).unwrap(), c.eval(q).unwrap());
    }

    #[test]
    fn flattening_kills_the_pseudosphere_coefficient() {
        for r in [1.0, SQRT_2, 2.5] {
            let g = pseudosphere_metric(r).unwrap();
            let c = weizenbock_connection(&pseudosphere_vielbein(r).unwrap());
            let (gt, ct) =
                conformal_transform(&g, &c, move |q| q[1] / r, move |_| [0.0, 1.0 / r]).unwrap();
            for u in [0.0, 1.0, 4.0] {
                let gamma = ct.eval([0.3, u]).unwrap();
                assert!(gamma[0][1][0].abs() < 1e-12);
                assert!((gamma[0][0][1] - 1.0 / r).abs() < 1e-12);
                // g̃ = e^{2u/R} diag(R² e^{-2u/R}, 1) = diag(R², e^{2u/R})
                let m = gt.eval([0.3, u]).unwrap();
                assert!((m[0][0] - r * r).abs() < 1e-12 * r * r);
                assert!((m[1][1] - (2.0 * u / r).exp()).abs() < 1e-12 * m[1][1]);
            }
        }
    }

    #[test]
    fn conformal_involution_restores_inputs() {
        let r = 1.7;
        let g = pseudosphere_metric(r).unwrap();
        let c = weizenbock_connection(&pseudosphere_vielbein(r).unwrap());
        let lambda = |q: Vec2| 0.3 * q[0] + q[1] * q[1] / 4.0;
        let grad = |q: Vec2| [0.3, q[1] / 2.0];
        let (g1, c1) = conformal_transform(&g, &c, lambda, grad).unwrap();
        let (g2, c2) = conformal_transform(
            &g1,
            &c1,
            move |q| -lambda(q),
            move |q| {
                let d = grad(q);
                [-d[0], -d[1]]
            },
        )
        .unwrap();
        for q in [[0.1, 0.2], [1.0, 2.0], [-0.5, 4.0]] {
            assert!(max_abs_diff(&g2.eval(q).unwrap(), &g.eval(q).unwrap()) < 1e-10);
            let (a, b) = (c2.eval(q).unwrap(), c.eval(q).unwrap());
            let mut diff = a;
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        diff[i][j][k] -= b[i][j][k];
                    }
                }
            }
            assert!(max_abs3(&diff) < 1e-10);
        }
    }

    #[test]
    fn chart_mismatch_is_rejected() {
        let g = pseudosphere_metric(1.0).unwrap();
        let c = ConnectionField::zero(ChartId::SphereGeographic);
        assert!(conformal_transform(&g, &c, |_| 0.0, |_| [0.0, 0.0]).is_err());
    }

    #[test]
    fn singular_metric_surfaces_on_evaluation() {
        let g = MetricField::new(ChartId::MercatorPlane, |_| [[0.0, 0.0], [0.0, 0.0]]);
        let c = ConnectionField::zero(ChartId::MercatorPlane);
        let (_, ct) = conformal_transform(&g, &c, |_| 0.0, |_| [1.0, 0.0]).unwrap();
        assert!(matches!(ct.eval([0.0, 0.0]), Err(Error::Singular { .. })));
    }
}
