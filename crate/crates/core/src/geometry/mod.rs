//! Charts, frames, connections and the tensors built from them on
//! two-dimensional manifolds.

mod chart;
mod connection;
mod frame;
mod maps;
mod metric;

pub use chart::{ChartId, Point2};
pub use connection::{
    covariant_constancy_residual, finite_difference_step, gaussian_curvature, riemann_curvature,
    torsion, weizenbock_connection, weizenbock_connection_with, ConnectionField, CurvatureField,
    DerivativeMethod, TorsionField, CURVATURE_STEP,
};
pub use frame::{
    anholonomy_check, pseudosphere_vielbein, sphere_vielbein, Vielbein2, FD_STEP, SPHERE_POLE_GUARD,
};
pub use maps::{
    flatten_pseudosphere, induced_metric, loxodrome_relation_sphere, mercator_forward,
    mercator_inverse, pseudosphere_embed, unflatten_pseudosphere,
};
pub use metric::{conformal_transform, pseudosphere_metric, sphere_metric, MetricField};
