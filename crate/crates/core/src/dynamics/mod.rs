//! Discrete iteration, semigroup flows and Berkson–Porta data.

mod classify;
mod flow;
mod generator;
pub mod ode;

use thiserror::Error;

use crate::boundary::BoundaryError;
use crate::holomap::{EvalError, JetError, ValidationError};
use crate::Complex;

pub use classify::{classify_generator, denjoy_wolff, Classification, Kind, MAX_ITERATIONS};
pub use flow::{
    flow, generator_from_flow, log_slope, pr2_rate_check, semigroup_check, RateReport, RateRow, Trajectory,
};
pub use generator::{
    berkson_porta, certify_generator, find_interior_null_point, null_point_profile, schwarzian_of_jet,
    selfmap_to_generator, BerksonPorta, Certificate, CertifiedGenerator, GeneratorProfile, MinLocation,
    SelfMapGenerator, GENERATOR_TOL, RE_P_TOL,
};
pub use ode::OdeOptions;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error("not a generator: {0}")]
    NotGenerator(String),
    #[error("angular derivative {beta} at the null point is not real")]
    NonRealBeta { beta: Complex },
    #[error("f does not vanish at 1 (radial limit {value})")]
    NoBoundaryNullPoint { value: Complex },
    #[error("null point {0} lies outside the closed disk")]
    NullPointOutsideDisk(Complex),
    #[error("f({tau}) = {value} is not zero, so f is not divisible at {tau}")]
    NotDivisible { tau: Complex, value: Complex },
    #[error("start point {0} is not inside the disk")]
    StartOutsideDisk(Complex),
    #[error("integration step underflow at t = {t} (u = {u})")]
    StepUnderflow { t: f64, u: Complex },
    #[error("F(1) = {value}, not 1")]
    NotFixingOne { value: Complex },
    #[error("angular derivative {alpha} is not a positive real")]
    BadAngularDerivative { alpha: Complex },
    #[error("classification undetermined: {0}")]
    Undetermined(String),
    #[error("extrapolation did not converge (best agreement {gap:e})")]
    NonConvergent { gap: f64 },
}

impl From<JetError> for DynamicsError {
    fn from(e: JetError) -> Self {
        DynamicsError::Boundary(e.into())
    }
}

impl From<ode::OdeFailure> for DynamicsError {
    fn from(e: ode::OdeFailure) -> Self {
        match e {
            ode::OdeFailure::Eval(e) => DynamicsError::Eval(e),
            ode::OdeFailure::StepUnderflow { t, u } => DynamicsError::StepUnderflow { t, u },
        }
    }
}
