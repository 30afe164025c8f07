use std::io::Write;

use loxo_core::verify::{self, Bound};

use crate::error::{CliError, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::output::{Cell, Format, Table};
use crate::{Context, VerifyArgs};

pub fn run(ctx: &Context, args: VerifyArgs, out: &mut impl Write) -> Result<u8, CliError> {
    if let Some(only) = &args.only {
        let known = verify::criteria()
            .iter()
            .any(|c| c.group == only || c.number.to_string() == *only);
        if !known {
            return Err(CliError::usage(
                "only",
                format!(
                    "unknown group {only:?}; expected a criterion number or one of {}",
                    verify::group_names().join(", ")
                ),
            ));
        }
    }
    let reports = verify::run(args.only.as_deref());
    match ctx.format(Format::Text)? {
        Format::Text => out.write_all(verify::render_table(&reports).as_bytes())?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &reports)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut table = Table::new(&[
                "id",
                "group",
                "description",
                "measured",
                "bound",
                "tolerance",
                "passed",
            ]);
            for r in reports.iter().flat_map(|r| &r.checks) {
                let bound = match r.bound {
                    Bound::AtMost => "at-most",
                    Bound::AtLeast => "at-least",
                };
                table.push(vec![
                    r.id.clone().into(),
                    r.group.into(),
                    r.description.clone().into(),
                    Cell::Num(r.measured),
                    bound.into(),
                    Cell::Num(r.tolerance),
                    if r.passed { "true" } else { "false" }.into(),
                ]);
            }
            table.write(Format::Csv, out)?;
        }
    }
    Ok(if reports.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
