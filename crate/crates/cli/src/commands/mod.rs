pub mod fields;
pub mod gauss;
pub mod loxodrome;
pub mod project;
pub mod verify;

use std::f64::consts::{PI, SQRT_2};

use loxo_core::gaussfam::NormalizationBox;
use loxo_core::geometry::ChartId;
use loxo_core::linalg::Vec2;

use crate::config::{parse_real, pick_real, FileConfig};
use crate::error::CliError;
use crate::{BoxArgs, SamplingArgs};

const DEFAULT_T_END: f64 = 1.0;
const DEFAULT_DT: f64 = 0.01;

pub fn chart_named(name: &str, field: &str) -> Result<ChartId, CliError> {
    ChartId::from_name(name).ok_or_else(|| {
        let known: Vec<_> = ChartId::ALL.iter().map(|c| c.name()).collect();
        CliError::usage(
            field,
            format!(
                "unknown chart {name:?}; expected one of {}",
                known.join(", ")
            ),
        )
    })
}

/// 1 for sphere-side charts, √2 for everything else.
pub fn default_radius(chart: ChartId) -> f64 {
    match chart {
        ChartId::SphereGeographic | ChartId::MercatorPlane => 1.0,
        _ => SQRT_2,
    }
}

/// Parses `a,b` pairs; one argument may hold several separated by `;`.
pub fn parse_points(args: &[String]) -> Result<Vec<Vec2>, CliError> {
    let mut points = Vec::new();
    for arg in args {
        for item in arg.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let parts: Vec<&str> = item.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::usage(
                    "point",
                    format!("expected `a,b`, got {item:?}"),
                ));
            }
            let a = parse_real(parts[0]).map_err(|m| CliError::usage("point", m))?;
            let b = parse_real(parts[1]).map_err(|m| CliError::usage("point", m))?;
            points.push([a, b]);
        }
    }
    if points.is_empty() {
        return Err(CliError::usage("point", "no points given"));
    }
    Ok(points)
}

pub fn resolve_box(args: &BoxArgs, file: &FileConfig) -> Result<NormalizationBox, CliError> {
    let sigma_min = pick_real(args.sigma_min, &file.sigma_min, "sigma_min")?.unwrap_or(1.0);
    let mu_max = pick_real(args.mu_max, &file.mu_max, "mu_max")?.unwrap_or(PI);
    Ok(NormalizationBox::new(sigma_min, mu_max)?)
}

pub fn resolve_course(args: &SamplingArgs, file: &FileConfig) -> Result<f64, CliError> {
    pick_real(args.course, &file.course, "course")?.ok_or_else(|| {
        CliError::usage(
            "course",
            "a course angle is required (--course or `course` in the config)",
        )
    })
}

/// Parameter samples on [0, t_end]. A sample count wins over a step at the
/// same precedence level; flags beat the config file.
pub fn resolve_grid(args: &SamplingArgs, file: &FileConfig) -> Result<Vec<f64>, CliError> {
    let t_end = pick_real(args.t_end, &file.t_end, "t_end")?.unwrap_or(DEFAULT_T_END);
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(CliError::usage(
            "t_end",
            format!("t_end must be positive and finite, got {t_end}"),
        ));
    }
    let count = match (args.grid, args.dt) {
        (Some(n), _) => Some(n),
        (None, Some(_)) => None,
        (None, None) => file.grid,
    };
    if let Some(n) = count {
        return Ok(loxo_core::autoparallel::uniform_grid(t_end, n));
    }
    let dt = pick_real(args.dt, &file.dt, "dt")?.unwrap_or(DEFAULT_DT);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::usage(
            "dt",
            format!("dt must be positive and finite, got {dt}"),
        ));
    }
    let steps = (t_end / dt * (1.0 - 1e-12)).ceil() as usize;
    let mut grid: Vec<f64> = (0..steps).map(|k| k as f64 * dt).collect();
    grid.push(t_end);
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampling(t_end: Option<f64>, dt: Option<f64>, grid: Option<usize>) -> SamplingArgs {
        SamplingArgs {
            course: None,
            t_end,
            dt,
            grid,
        }
    }

    #[test]
    fn step_grid_lands_on_end() {
        let g = resolve_grid(
            &sampling(Some(1.0), Some(0.3), None),
            &FileConfig::default(),
        )
        .unwrap();
        assert_eq!(g, vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        let g = resolve_grid(
            &sampling(Some(1.0), Some(0.25), None),
            &FileConfig::default(),
        )
        .unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn grid_precedence() {
        let file = FileConfig {
            grid: Some(3),
            ..Default::default()
        };
        assert_eq!(
            resolve_grid(&sampling(None, None, None), &file)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            resolve_grid(&sampling(None, Some(0.5), None), &file)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            resolve_grid(&sampling(None, Some(0.1), None), &file)
                .unwrap()
                .len(),
            11
        );
        assert_eq!(
            resolve_grid(&sampling(None, None, Some(0)), &file)
                .unwrap()
                .len(),
            0
        );
        assert!(resolve_grid(&sampling(Some(-1.0), None, None), &file).is_err());
    }

    #[test]
    fn points() {
        let p = parse_points(&["0.5,0.3; pi/4,-1".to_string(), "1,2".to_string()]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1], [PI / 4.0, -1.0]);
        assert!(parse_points(&["0.5".to_string()]).is_err());
        assert!(parse_points(&["a,b".to_string()]).is_err());
    }
}
