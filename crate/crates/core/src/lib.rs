//! Elliptic billiard N-periodics, the polygons obtained by inverting them
//! about a focus or the center, their invariants, and the loci swept by
//! triangle centers as the family evolves.
//!
//! Sweeps run on the rayon pool with the default `parallel` feature and
//! sequentially without it; results are identical and in grid order.

pub mod caustics;
pub mod centers;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod invariants;
pub mod inversive;
pub mod loci;
pub mod orbit;
pub mod par;
pub mod tables;

pub use caustics::{envelope_sample, side_family, tangency_residual, Line, LineFamily};
pub use centers::{center_point, trilinear_to_cartesian, CenterId, Triangle};
pub use error::{Error, Result};
pub use fit::{fit_circle, fit_conic, CircleFit, ConicFit, ConicKind, EllipseParams};
pub use geometry::{
    booth_point, ellipse_gradient, ellipse_point, interior_cosines, inverse_curve_point, invert_point,
    limacon_point, limacon_point_about, make_ellipse, perimeter, signed_area, CircleSpec, EllipseSpec, Focus,
    Point2, Polygon,
};
pub use invariants::{
    circumbilliard, closed_form_refs, sweep_family, verify_rotating_billiard, ClosedFormRefs,
    InvarianceThresholds, InvariantTrace,
};
pub use inversive::{
    center_inversive, focus_inversive, pedal_polygon, spoke_stats, InversiveConfig, InversivePolygon,
};
pub use loci::{
    center_inversive_x3_check, circle_locus_reference, classify_locus, swan_check, sweep_locus, Family,
    LocusClass, LocusSample, LocusTolerances, Verdict,
};
pub use orbit::{
    confocal_caustic_n3, joachimsthal, n3_closed_form_jl, orbit, reflection_residual, solve_nperiodic,
    stachel_j, three_periodic, CausticSpec, Orbit, SolverOptions,
};
pub use tables::{reproduce_tables, ReferenceTable, TableCell, REFERENCE_TABLES, TABLE_TOLERANCE};
