use std::io::Write;

use loxo_core::autoparallel::CourseAngle;
use loxo_core::gaussfam::gauss_family_along_loxodrome;

use super::{resolve_box, resolve_course, resolve_grid};
use crate::config::pick_real;
use crate::error::{CliError, Record, EXIT_OK};
use crate::output::{Format, Table};
use crate::{Context, GaussArgs};

pub fn run(ctx: &Context, args: GaussArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let file = &ctx.file;
    let angle = CourseAngle::new(resolve_course(&args.sampling, file)?)?;
    let phi0 = pick_real(args.phi0, &file.phi0, "phi0")?.unwrap_or(0.0);
    let bx = resolve_box(&args.bx, file)?;
    let grid = resolve_grid(&args.sampling, file)?;
    let family = gauss_family_along_loxodrome(angle, &bx, phi0, &grid)?;

    let mut table = Table::new(&[
        "t",
        "mu",
        "sigma",
        "mu_norm",
        "sigma_norm",
        "phi",
        "u",
        "x_flat",
        "y_flat",
    ]);
    for k in 0..family.t.len() {
        let (p, n, s, f) = (
            &family.params[k],
            &family.normalized[k],
            &family.pseudosphere[k],
            &family.flattened[k],
        );
        table.push(
            [
                family.t[k],
                p.mu(),
                p.sigma(),
                n.a(),
                n.b(),
                s.a(),
                s.b(),
                f.a(),
                f.b(),
            ]
            .into_iter()
            .map(Into::into)
            .collect(),
        );
    }
    table.write(ctx.format(Format::Csv)?, out)?;
    if family.exited {
        let next_t = grid.get(family.t.len()).copied().unwrap_or(f64::NAN);
        Record {
            code: "region-exit".into(),
            field: Some("t".into()),
            message: format!(
                "path leaves the admitted region at t = {next_t}; output truncated after {} samples",
                family.t.len()
            ),
        }
        .emit();
    }
    Ok(EXIT_OK)
}
