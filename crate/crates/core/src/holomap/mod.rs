//! Expression trees for holomorphic maps of the disk: parsing, evaluation,
//! differentiation, boundary jets and Möbius algebra.

mod diff;
mod expr;
mod jet;
mod lft;
mod mobius;
mod parse;
mod series;
mod validate;

pub use diff::{differentiate, nth_derivative};
pub use expr::{EvalError, Holomorphic, MapExpr, MAX_POW};
pub use jet::{boundary_jet, exact_jet, laurent_jet, BoundaryJet, JetError};
pub use lft::{detect_lft, probe_lft, random_mobius, reduce_to_mobius, LftDetection, CROSS_RATIO_TOL, FIT_TOL};
pub use mobius::{FixedPoint, FixedPoints, Mobius, SINGULAR_DET};
pub use parse::{parse_map, ParseError};
pub use validate::{
    check_pole_free, check_selfmap, denominators, ensure_selfmap, inline, winding_number, SelfMapCheck,
    ValidationError, BOUNDARY_SAMPLES, SELFMAP_TOL,
};

pub(crate) use jet::check_unimodular;

/// Fixed points of a Möbius map; the identity is reported as such.
pub fn mobius_fixed_points(m: &Mobius) -> FixedPoints {
    m.fixed_points()
}
