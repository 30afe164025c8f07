//! Chart maps: the Mercator projection and its inverse, the loxodrome
//! relation on the sphere, the conformal flattening of the pseudosphere, and
//! the pseudosphere's embedding in R³.

use std::f64::consts::FRAC_PI_2;

use crate::autoparallel::CourseAngle;
use crate::error::{require_finite, require_positive, Error, Result};
use crate::linalg::{Mat2, Vec2};
use crate::specialfun::{gd, gd_inv};

use super::chart::{ChartId, Point2};

/// Mercator projection x = R(φ − φ₀), y = R gd⁻¹(θ).
pub fn mercator_forward(p: &Point2, radius: f64, phi0: f64) -> Result<Point2> {
    p.expect_chart(ChartId::SphereGeographic)?;
    require_positive("R", radius)?;
    require_finite("phi0", phi0)?;
    let y = radius * gd_inv(p.b())?;
    Point2::new(ChartId::MercatorPlane, radius * (p.a() - phi0), y)
}

/// Inverse Mercator projection φ = φ₀ + x/R, θ = gd(y/R).
pub fn mercator_inverse(p: &Point2, radius: f64, phi0: f64) -> Result<Point2> {
    p.expect_chart(ChartId::MercatorPlane)?;
    require_positive("R", radius)?;
    require_finite("phi0", phi0)?;
    let theta = gd(p.b() / radius)?;
    if theta.abs() >= FRAC_PI_2 {
        // gd(y/R) rounds to ±π/2 for |y/R| ≳ 37
        return Err(Error::domain("y", p.b(), "latitude rounds onto the pole"));
    }
    Point2::new(ChartId::SphereGeographic, phi0 + p.a() / radius, theta)
}

/// Residual θ − gd(cot ϕ (φ − φ₀)) of the loxodrome with course angle ϕ
/// through (φ₀, 0); zero exactly on the curve.
pub fn loxodrome_relation_sphere(
    phi: f64,
    theta: f64,
    phi0: f64,
    course_angle: f64,
) -> Result<f64> {
    let course = CourseAngle::new(course_angle)?;
    require_finite("phi", phi)?;
    require_finite("theta", theta)?;
    require_finite("phi0", phi0)?;
    Ok(theta - gd(course.cot() * (phi - phi0))?)
}

/// Conformal flattening of the pseudosphere: x̃ = Rφ, ỹ = R exp(u/R).
pub fn flatten_pseudosphere(p: &Point2, radius: f64) -> Result<Point2> {
    p.expect_chart(ChartId::Pseudosphere)?;
    require_positive("R", radius)?;
    Point2::new(
        ChartId::FlattenedPlane,
        radius * p.a(),
        radius * (p.b() / radius).exp(),
    )
}

/// Inverse of [`flatten_pseudosphere`]; requires ỹ ≥ R.
pub fn unflatten_pseudosphere(p: &Point2, radius: f64) -> Result<Point2> {
    p.expect_chart(ChartId::FlattenedPlane)?;
    require_positive("R", radius)?;
    if p.b() < radius {
        return Err(Error::domain("y_flat", p.b(), "y_flat >= R"));
    }
    Point2::new(
        ChartId::Pseudosphere,
        p.a() / radius,
        radius * (p.b() / radius).ln(),
    )
}

/// Cartesian point (r cos φ, r sin φ, h) on the pseudosphere, with
/// r = R e^{−u/R} and h = R artanh(s) − R s, s = √(1 − e^{−2u/R}).
pub fn pseudosphere_embed(p: &Point2, radius: f64) -> Result<[f64; 3]> {
    p.expect_chart(ChartId::Pseudosphere)?;
    require_positive("R", radius)?;
    let (phi, u) = (p.a(), p.b());
    let r = radius * (-u / radius).exp();
    let s = (-(-2.0 * u / radius).exp_m1()).sqrt();
    // artanh(s) = ln(1 + s) + u/R because (1 + s)(1 − s) = e^{−2u/R}
    let h = radius * (s.ln_1p() + u / radius) - radius * s;
    Ok([r * phi.cos(), r * phi.sin(), h])
}

/// Metric induced on a chart by an embedding into Euclidean R³, from a
/// central-difference Jacobian with step `h`.
pub fn induced_metric<F>(embed: F, q: Vec2, h: f64) -> Result<Mat2>
where
    F: Fn(Vec2) -> Result<[f64; 3]>,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain("h", h, "step must be positive"));
    }
    let mut jac = [[0.0; 3]; 2];
    for (mu, col) in jac.iter_mut().enumerate() {
        let mut plus = q;
        let mut minus = q;
        plus[mu] += h;
        minus[mu] -= h;
        let (xp, xm) = (embed(plus)?, embed(minus)?);
        for k in 0..3 {
            col[k] = (xp[k] - xm[k]) / (2.0 * h);
        }
    }
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    Ok([
        [dot(&jac[0], &jac[0]), dot(&jac[0], &jac[1])],
        [dot(&jac[1], &jac[0]), dot(&jac[1], &jac[1])],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, SQRT_2};

    fn sphere(phi: f64, theta: f64) -> Point2 {
        Point2::new(ChartId::SphereGeographic, phi, theta).unwrap()
    }

    fn mercator(x: f64, y: f64) -> Point2 {
        Point2::new(ChartId::MercatorPlane, x, y).unwrap()
    }

    #[test]
    fn forward_values() {
        let phi0 = 0.4;
        let m = mercator_forward(&sphere(phi0, 0.0), 3.0, phi0).unwrap();
        assert_eq!(m.coords(), [0.0, 0.0]);
        let m = mercator_forward(&sphere(phi0 + 1.0, FRAC_PI_4), 1.0, phi0).unwrap();
        assert!((m.a() - 1.0).abs() < 1e-15);
        assert!((m.b() - 0.881_373_587_019_543).abs() < 1e-15);
    }

    #[test]
    fn forward_rejects_pole_and_bad_radius() {
        let near_pole = sphere(0.0, FRAC_PI_2 - 1e-14);
        assert_eq!(
            mercator_forward(&near_pole, 1.0, 0.0).unwrap_err().field(),
            Some("theta")
        );
        assert!(mercator_forward(&sphere(0.0, 0.1), 0.0, 0.0).is_err());
        assert!(mercator_forward(&mercator(0.0, 0.1), 1.0, 0.0).is_err());
    }

    #[test]
    fn inverse_values() {
        let phi0 = -0.7;
        assert_eq!(
            mercator_inverse(&mercator(0.0, 0.0), 2.0, phi0)
                .unwrap()
                .coords(),
            [phi0, 0.0]
        );
        let r = 2.0;
        let lo = mercator_inverse(&mercator(0.0, 5.0 * r), r, 0.0).unwrap();
        let hi = mercator_inverse(&mercator(0.0, 10.0 * r), r, 0.0).unwrap();
        assert!(hi.b() > lo.b() && hi.b() < FRAC_PI_2);
        let p = mercator_inverse(&mercator(r, r * gd_inv(0.3).unwrap()), r, phi0).unwrap();
        assert!((p.a() - (phi0 + 1.0)).abs() < 1e-12);
        assert!((p.b() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn loxodrome_relation() {
        assert_eq!(
            loxodrome_relation_sphere(0.5, 0.0, 0.5, FRAC_PI_3).unwrap(),
            0.0
        );
        let course: f64 = 2.0;
        for theta in [-1.2, -0.3, 0.4, 1.3] {
            let phi = 0.1 + course.tan() * gd_inv(theta).unwrap();
            let res = loxodrome_relation_sphere(phi, theta, 0.1, course).unwrap();
            assert!(res.abs() < 1e-12);
        }
        assert!(loxodrome_relation_sphere(0.0, 0.0, 0.0, FRAC_PI_2).is_err());
        assert!(loxodrome_relation_sphere(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn flattening_round_trip() {
        let p = Point2::new(ChartId::Pseudosphere, 0.8, 1.7).unwrap();
        let f = flatten_pseudosphere(&p, SQRT_2).unwrap();
        let back = unflatten_pseudosphere(&f, SQRT_2).unwrap();
        assert!((back.a() - 0.8).abs() < 1e-15 && (back.b() - 1.7).abs() < 1e-14);
        let below = Point2::new(ChartId::FlattenedPlane, 0.0, 1.0).unwrap();
        assert!(unflatten_pseudosphere(&below, SQRT_2).is_err());
    }

    #[test]
    fn embedding_base_circle() {
        let r = 1.5;
        let x =
            pseudosphere_embed(&Point2::new(ChartId::Pseudosphere, 0.9, 0.0).unwrap(), r).unwrap();
        assert!((x[0] - r * 0.9f64.cos()).abs() < 1e-15);
        assert!((x[1] - r * 0.9f64.sin()).abs() < 1e-15);
        assert_eq!(x[2], 0.0);
    }

    #[test]
    fn embedding_height_is_increasing() {
        let r = 2.0;
        let heights: Vec<f64> = (1..300)
            .map(|k| {
                let p = Point2::new(ChartId::Pseudosphere, 0.0, k as f64 * 0.01 * r).unwrap();
                pseudosphere_embed(&p, r).unwrap()[2]
            })
            .collect();
        assert!(heights.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn embedding_induces_pseudosphere_metric() {
        let r = SQRT_2;
        let embed =
            |q: Vec2| pseudosphere_embed(&Point2::from_coords(ChartId::Pseudosphere, q)?, r);
        let g = induced_metric(embed, [1.0, 0.8], 1e-5).unwrap();
        let expected = [[r * r * (-1.6 / r).exp(), 0.0], [0.0, 1.0]];
        assert!(crate::linalg::max_abs_diff(&g, &expected) < 1e-6);
    }
}
