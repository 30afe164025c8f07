use std::io::Write;

use loxo_core::geometry::{
    pseudosphere_vielbein, riemann_curvature, sphere_vielbein, torsion, weizenbock_connection_with,
    ChartId, DerivativeMethod, Point2, CURVATURE_STEP,
};
use loxo_core::linalg::Vec2;

use super::{chart_named, default_radius, parse_points};
use crate::config::pick_real;
use crate::error::{CliError, EXIT_ALL_FAILED, EXIT_OK};
use crate::output::{Format, Table};
use crate::{Context, FieldsArgs};

const DEFAULT_ZERO_TOL: f64 = 1e-6;

fn default_points(chart: ChartId) -> Vec<Vec2> {
    let (a, b) = match chart {
        ChartId::SphereGeographic => ((-2.5, 2.5), (-1.2, 1.2)),
        _ => ((0.5, 5.5), (0.5, 5.0)),
    };
    let lerp = |(lo, hi): (f64, f64), k: usize| lo + (hi - lo) * k as f64 / 4.0;
    (0..5)
        .flat_map(|i| (0..5).map(move |j| [lerp(a, i), lerp(b, j)]))
        .collect()
}

pub fn run(ctx: &Context, args: FieldsArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let file = &ctx.file;
    let chart = chart_named(
        args.chart
            .as_deref()
            .or(file.chart.as_deref())
            .unwrap_or("sphere"),
        "chart",
    )?;
    let radius = pick_real(args.radius, &file.radius, "R")?.unwrap_or(default_radius(chart));
    let zero_tol =
        pick_real(args.zero_tol, &file.zero_tol, "zero_tol")?.unwrap_or(DEFAULT_ZERO_TOL);
    let vielbein = match chart {
        ChartId::SphereGeographic => sphere_vielbein(radius)?,
        ChartId::Pseudosphere => pseudosphere_vielbein(radius)?,
        other => {
            return Err(CliError::usage(
                "chart",
                format!(
                    "fields are available on sphere or pseudosphere, not {}",
                    other.name()
                ),
            ))
        }
    };
    let (want_gamma, want_torsion, want_riemann) = match args.field.as_str() {
        "connection" => (true, false, false),
        "torsion" => (false, true, false),
        "riemann" => (false, false, true),
        "all" => (true, true, true),
        other => {
            return Err(CliError::usage(
                "field",
                format!("unknown field {other:?}; expected connection, torsion, riemann or all"),
            ))
        }
    };
    let method = if args.fd {
        DerivativeMethod::FiniteDifference
    } else {
        DerivativeMethod::Auto
    };
    let connection = weizenbock_connection_with(&vielbein, method);
    let tors = torsion(&connection);
    let points = if args.point.is_empty() {
        default_points(chart)
    } else {
        parse_points(&args.point)?
    };
    let names = chart.coordinate_names();

    let mut table = Table::new(&["a", "b", "field", "component", "value", "flag"]);
    let (mut ok, mut failed) = (0usize, 0usize);
    let report = |q: Vec2, e: loxo_core::Error| {
        let mut rec = CliError::from(e).record();
        rec.message = format!("point ({}, {}): {}", q[0], q[1], rec.message);
        rec.emit();
    };
    for q in points {
        let p = match Point2::from_coords(chart, q) {
            Ok(p) => p,
            Err(e) => {
                failed += 1;
                report(q, e);
                continue;
            }
        };
        let mut rank3 =
            |field: &str, value: loxo_core::Result<loxo_core::linalg::Tensor3>| match value {
                Ok(t) => {
                    ok += 1;
                    for r in 0..2 {
                        for m in 0..2 {
                            for n in 0..2 {
                                let label = format!("{}_{}_{}", names[r], names[m], names[n]);
                                table.push(vec![
                                    q[0].into(),
                                    q[1].into(),
                                    field.into(),
                                    label.into(),
                                    t[r][m][n].into(),
                                    "".into(),
                                ]);
                            }
                        }
                    }
                }
                Err(e) => {
                    failed += 1;
                    report(q, e);
                }
            };
        if want_gamma {
            rank3("connection", connection.at(&p));
        }
        if want_torsion {
            rank3("torsion", tors.at(&p));
        }
        if want_riemann {
            match riemann_curvature(&connection, &p, CURVATURE_STEP) {
                Ok(t) => {
                    ok += 1;
                    for r in 0..2 {
                        for s in 0..2 {
                            for m in 0..2 {
                                for n in 0..2 {
                                    let v = t[r][s][m][n];
                                    let label = format!(
                                        "{}_{}_{}_{}",
                                        names[r], names[s], names[m], names[n]
                                    );
                                    let flag = if v.abs() < zero_tol {
                                        "ZERO"
                                    } else {
                                        "NONZERO"
                                    };
                                    table.push(vec![
                                        q[0].into(),
                                        q[1].into(),
                                        "riemann".into(),
                                        label.into(),
                                        v.into(),
                                        flag.into(),
                                    ]);
                                }
                            }
                        }
                    }
                }
                Err(e) => {
                    failed += 1;
                    report(q, e);
                }
            }
        }
    }
    table.write(ctx.format(Format::Csv)?, out)?;
    Ok(if ok == 0 && failed > 0 {
        EXIT_ALL_FAILED
    } else {
        EXIT_OK
    })
}
