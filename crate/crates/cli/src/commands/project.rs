use std::collections::VecDeque;
use std::io::Write;

use loxo_core::gaussfam::{self, GaussParams, NormalizationBox, PSEUDORADIUS};
use loxo_core::geometry::{
    flatten_pseudosphere, mercator_forward, mercator_inverse, unflatten_pseudosphere, ChartId,
    Point2,
};
use loxo_core::Error;

use super::{chart_named, default_radius, parse_points, resolve_box};
use crate::config::pick_real;
use crate::error::{CliError, EXIT_OK};
use crate::output::{Cell, Format, Table};
use crate::{Context, ProjectArgs};

use ChartId::*;

const EDGES: [(ChartId, ChartId); 8] = [
    (SphereGeographic, MercatorPlane),
    (MercatorPlane, SphereGeographic),
    (Pseudosphere, FlattenedPlane),
    (FlattenedPlane, Pseudosphere),
    (GaussParameters, GaussNormalized),
    (GaussNormalized, GaussParameters),
    (GaussNormalized, Pseudosphere),
    (Pseudosphere, GaussNormalized),
];

fn default_target(from: ChartId) -> ChartId {
    match from {
        SphereGeographic => MercatorPlane,
        MercatorPlane => SphereGeographic,
        Pseudosphere => FlattenedPlane,
        FlattenedPlane => Pseudosphere,
        GaussParameters => GaussNormalized,
        GaussNormalized => Pseudosphere,
    }
}

/// Shortest chain of direct maps from `from` to `to`.
fn route(from: ChartId, to: ChartId) -> Result<Vec<ChartId>, Error> {
    let unsupported = || Error::UnsupportedProjection { from, to };
    if from == to {
        return Err(unsupported());
    }
    let mut prev: [Option<ChartId>; 6] = [None; 6];
    let index = |c: ChartId| {
        ChartId::ALL
            .iter()
            .position(|&x| x == c)
            .expect("chart listed in ALL")
    };
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        if c == to {
            let mut path = vec![to];
            let mut cur = to;
            while let Some(p) = prev[index(cur)] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Ok(path);
        }
        for &(a, b) in &EDGES {
            if a == c && b != from && prev[index(b)].is_none() {
                prev[index(b)] = Some(a);
                queue.push_back(b);
            }
        }
    }
    Err(unsupported())
}

struct Maps {
    radius: f64,
    phi0: f64,
    bx: NormalizationBox,
}

impl Maps {
    fn step(&self, p: &Point2, to: ChartId) -> Result<Point2, Error> {
        match (p.chart(), to) {
            (SphereGeographic, MercatorPlane) => mercator_forward(p, self.radius, self.phi0),
            (MercatorPlane, SphereGeographic) => mercator_inverse(p, self.radius, self.phi0),
            (Pseudosphere, FlattenedPlane) => flatten_pseudosphere(p, self.radius),
            (FlattenedPlane, Pseudosphere) => unflatten_pseudosphere(p, self.radius),
            (GaussParameters, GaussNormalized) => {
                gaussfam::normalize(&GaussParams::new(p.a(), p.b())?, &self.bx)
            }
            (GaussNormalized, GaussParameters) => {
                Ok(gaussfam::denormalize(p, &self.bx)?.as_point())
            }
            (GaussNormalized, Pseudosphere) => {
                self.require_gauss_radius()?;
                gaussfam::to_pseudosphere(p)
            }
            (Pseudosphere, GaussNormalized) => {
                self.require_gauss_radius()?;
                gaussfam::from_pseudosphere(p)
            }
            (from, to) => Err(Error::UnsupportedProjection { from, to }),
        }
    }

    fn require_gauss_radius(&self) -> Result<(), Error> {
        if self.radius == PSEUDORADIUS {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "the Gaussian charts sit on the pseudosphere of radius sqrt(2), got R = {}",
                self.radius
            )))
        }
    }
}

pub fn run(ctx: &Context, args: ProjectArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let file = &ctx.file;
    let mut from = chart_named(
        args.chart
            .as_deref()
            .or(file.chart.as_deref())
            .unwrap_or("sphere"),
        "chart",
    )?;
    let mut to = match args.to.as_deref().or(file.to.as_deref()) {
        Some(name) => chart_named(name, "to")?,
        None => default_target(from),
    };
    if args.invert {
        std::mem::swap(&mut from, &mut to);
    }
    let path = route(from, to)?;
    let sphere_side = path.contains(&SphereGeographic) || path.contains(&MercatorPlane);
    let maps = Maps {
        radius: pick_real(args.radius.radius, &file.radius, "R")?.unwrap_or(if sphere_side {
            1.0
        } else {
            default_radius(to)
        }),
        phi0: pick_real(args.radius.phi0, &file.phi0, "phi0")?.unwrap_or(0.0),
        bx: resolve_box(&args.bx, file)?,
    };

    let mut columns: Vec<&str> = from.coordinate_names().to_vec();
    columns.extend(to.coordinate_names());
    let mut table = Table::new(&columns);
    for q in parse_points(&args.point)? {
        let start = Point2::from_coords(from, q)?;
        let mut p = start;
        for &next in &path[1..] {
            p = maps.step(&p, next)?;
        }
        table.push(vec![
            Cell::Num(start.a()),
            Cell::Num(start.b()),
            Cell::Num(p.a()),
            Cell::Num(p.b()),
        ]);
    }
    table.write(ctx.format(Format::Csv)?, out)?;
    Ok(EXIT_OK)
}
