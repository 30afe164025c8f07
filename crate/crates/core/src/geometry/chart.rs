use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Vec2;

/// The coordinate charts the toolkit works in.
///
/// Longitudes are treated as periodic and are not range-checked; the
/// remaining coordinate of each chart carries the domain restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartId {
    /// Geographic coordinates (φ, θ) on a sphere; |θ| < π/2.
    SphereGeographic,
    /// Mercator map coordinates (x, y).
    MercatorPlane,
    /// Pseudosphere coordinates (φ, u); u ≥ 0.
    Pseudosphere,
    /// Conformally flattened pseudosphere (x̃, ỹ).
    FlattenedPlane,
    /// Normalized Gaussian parameters (μ̃, σ̃); σ̃ ≥ 1, |μ̃| ≤ π.
    GaussNormalized,
    /// Raw Gaussian parameters (μ, σ); σ > 0.
    GaussParameters,
}

impl ChartId {
    pub const ALL: [ChartId; 6] = [
        ChartId::SphereGeographic,
        ChartId::MercatorPlane,
        ChartId::Pseudosphere,
        ChartId::FlattenedPlane,
        ChartId::GaussNormalized,
        ChartId::GaussParameters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChartId::SphereGeographic => "sphere",
            ChartId::MercatorPlane => "mercator",
            ChartId::Pseudosphere => "pseudosphere",
            ChartId::FlattenedPlane => "flattened",
            ChartId::GaussNormalized => "gauss-normalized",
            ChartId::GaussParameters => "gauss",
        }
    }

    /// Short names of the two coordinates, in storage order.
    pub fn coordinate_names(self) -> [&'static str; 2] {
        match self {
            ChartId::SphereGeographic => ["phi", "theta"],
            ChartId::MercatorPlane => ["x", "y"],
            ChartId::Pseudosphere => ["phi", "u"],
            ChartId::FlattenedPlane => ["x_flat", "y_flat"],
            ChartId::GaussNormalized => ["mu_norm", "sigma_norm"],
            ChartId::GaussParameters => ["mu", "sigma"],
        }
    }

    pub fn from_name(name: &str) -> Option<ChartId> {
        ChartId::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Checks that `q` lies in this chart's domain.
    pub fn check(self, q: Vec2) -> Result<()> {
        let [first, second] = self.coordinate_names();
        if !q[0].is_finite() {
            return Err(Error::domain(first, q[0], "must be finite"));
        }
        if !q[1].is_finite() {
            return Err(Error::domain(second, q[1], "must be finite"));
        }
        match self {
            ChartId::SphereGeographic if q[1].abs() >= FRAC_PI_2 => {
                Err(Error::domain("theta", q[1], "|theta| < pi/2"))
            }
            ChartId::Pseudosphere if q[1] < 0.0 => Err(Error::domain("u", q[1], "u >= 0")),
            ChartId::GaussNormalized if q[1] < 1.0 => {
                Err(Error::domain("sigma_norm", q[1], "sigma_norm >= 1"))
            }
            ChartId::GaussNormalized if q[0].abs() > PI => {
                Err(Error::domain("mu_norm", q[0], "|mu_norm| <= pi"))
            }
            ChartId::GaussParameters if q[1] <= 0.0 => {
                Err(Error::domain("sigma", q[1], "sigma > 0"))
            }
            _ => Ok(()),
        }
    }

    pub fn contains(self, q: Vec2) -> bool {
        self.check(q).is_ok()
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A coordinate pair tagged with its chart. Always inside the chart domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point2 {
    chart: ChartId,
    a: f64,
    b: f64,
}

impl Point2 {
    pub fn new(chart: ChartId, a: f64, b: f64) -> Result<Self> {
        chart.check([a, b])?;
        Ok(Self { chart, a, b })
    }

    pub fn from_coords(chart: ChartId, q: Vec2) -> Result<Self> {
        Self::new(chart, q[0], q[1])
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn coords(&self) -> Vec2 {
        [self.a, self.b]
    }

    pub(crate) fn expect_chart(&self, expected: ChartId) -> Result<()> {
        if self.chart == expected {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                expected,
                found: self.chart,
            })
        }
    }
}
