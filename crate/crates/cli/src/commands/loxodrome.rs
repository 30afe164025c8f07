use std::io::Write;

use loxo_core::autoparallel::{
    loxodrome_pseudosphere_curve, loxodrome_sphere_curve, project_curve, CourseAngle,
};
use loxo_core::geometry::ChartId;

use super::{chart_named, default_radius, resolve_course, resolve_grid};
use crate::config::pick_real;
use crate::error::{CliError, EXIT_OK};
use crate::output::{Cell, Format, Table};
use crate::{Context, LoxodromeArgs};

pub fn run(ctx: &Context, args: LoxodromeArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let file = &ctx.file;
    let chart = chart_named(
        args.chart
            .as_deref()
            .or(file.chart.as_deref())
            .unwrap_or("sphere"),
        "chart",
    )?;
    let target = args
        .to
        .as_deref()
        .or(file.to.as_deref())
        .map(|n| chart_named(n, "to"))
        .transpose()?;
    let radius = pick_real(args.radius.radius, &file.radius, "R")?.unwrap_or(default_radius(chart));
    let phi0 = pick_real(args.radius.phi0, &file.phi0, "phi0")?.unwrap_or(0.0);
    let angle = CourseAngle::new(resolve_course(&args.sampling, file)?)?;
    let grid = resolve_grid(&args.sampling, file)?;

    let curve = match chart {
        ChartId::SphereGeographic => loxodrome_sphere_curve(angle, phi0, radius, &grid)?,
        ChartId::Pseudosphere => loxodrome_pseudosphere_curve(angle, phi0, radius, &grid)?,
        other => {
            return Err(CliError::usage(
                "chart",
                format!(
                    "loxodromes are traced on sphere or pseudosphere, not {}",
                    other.name()
                ),
            ))
        }
    };
    let image = target
        .map(|t| project_curve(&curve, t, radius, phi0))
        .transpose()?;

    let mut columns = vec!["t", "a", "b"];
    if let Some(img) = &image {
        columns.extend(img.chart().coordinate_names());
    }
    let mut table = Table::new(&columns);
    for (k, s) in curve.samples().iter().enumerate() {
        let mut row: Vec<Cell> = vec![s.t.into(), s.point.a().into(), s.point.b().into()];
        if let Some(img) = &image {
            let p = img.samples()[k].point;
            row.extend([Cell::Num(p.a()), Cell::Num(p.b())]);
        }
        table.push(row);
    }
    table.write(ctx.format(Format::Csv)?, out)?;
    Ok(EXIT_OK)
}
