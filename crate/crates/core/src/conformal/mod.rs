//! Numerical conformal mapping of the unit disk onto slit/tent domains,
//! boundary extension sampling, oscillation covers, and the numeric
//! crosscut checks built on top of the map.

pub mod boundary;
pub mod checks;
pub mod circle_alg;
pub mod cover;
pub mod map;
pub mod polygon;
pub mod quad;
pub mod solver;

pub use boundary::{image_arc, rho_lower_bound, BoundaryError, BoundaryEstimate};
pub use checks::{
    certified_crosscut, check_recognizably_bounds, witness_bound_check, CheckReport, ClauseReport,
    MappedCrosscut, Verdict, WitnessParams,
};
pub use cover::{oscillation_cover, strong_eval, CoverError, CoverFamily};
pub use map::ConformalMap;
pub use polygon::Polygon;
pub use quad::JacobiRule;
pub use solver::{ScSolution, SolveError};
