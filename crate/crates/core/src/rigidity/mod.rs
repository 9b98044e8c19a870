//! Rigidity theorems as executable analyzers.
//!
//! Every analyzer returns a [`RigidityReport`]: scalar boundary data, the
//! verdicts it could establish, one [`Check`] per theorem condition and an
//! audit of printed versus re-derived inequalities.

mod burns;
mod generator;
mod lft;
mod repelling;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::boundary::{BoundCheck, BoundaryError};
use crate::dynamics::DynamicsError;
use crate::geometry::GeometryError;
use crate::holomap::{BoundaryJet, EvalError, ValidationError};
use crate::Complex;

pub use burns::{burns_krantz, falsification_search, quantitative_bounds, FalsificationReport};
pub use generator::generator_rigidity;
pub use lft::{is_quadratic_generator, lft_analysis};
pub use repelling::repelling_analysis;

/// Tolerance for conditions of the form `x = 0`.
pub const ZERO_TOL: f64 = 1e-8;
/// Tolerance for conditions of the form `x ≥ 0`.
pub const SIGN_TOL: f64 = 1e-9;
/// Samples used by the pointwise bound checks.
pub const BOUND_SAMPLES: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigidityError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("F(1) = {0}, not 1")]
    NotFixingOne(Complex),
    #[error("angular derivative {0} is not a positive real")]
    BadAngularDerivative(Complex),
    #[error("F'(1) vanishes, the Schwarzian is undefined")]
    ZeroDerivative,
    #[error("jet of order {0} is too short")]
    JetTooShort(usize),
    #[error("Re a = {0:e} is negative")]
    NegativeReA(f64),
    #[error("outside the scope of this analyzer: {0}")]
    NotInScope(String),
}

impl From<crate::holomap::JetError> for RigidityError {
    fn from(e: crate::holomap::JetError) -> Self {
        RigidityError::Boundary(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    /// Holds because the condition is empty.
    Vacuous,
    NotApplicable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Vacuous => "vacuous",
            Status::NotApplicable => "n/a",
        }
    }

    pub fn holds(self) -> bool {
        matches!(self, Status::Pass | Status::Vacuous)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    IsLFT,
    IsAutomorphism,
    IsAffine,
    IsIdentity,
    HyperbolicAuto,
    ParabolicAuto,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::IsLFT => "IsLFT",
            Verdict::IsAutomorphism => "IsAutomorphism",
            Verdict::IsAffine => "IsAffine",
            Verdict::IsIdentity => "IsIdentity",
            Verdict::HyperbolicAuto => "HyperbolicAuto",
            Verdict::ParabolicAuto => "ParabolicAuto",
        }
    }
}

/// One theorem condition evaluated on a subject.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub status: Status,
    /// Failures always carry a point; for jet conditions it is the base point.
    pub witness: Option<Complex>,
    /// The quantity the decision was based on.
    pub value: Option<f64>,
    /// Gating checks decide the exit status; the others only select verdicts.
    pub gating: bool,
    pub detail: String,
}

impl Check {
    pub fn new(id: &str, status: Status, detail: impl Into<String>) -> Self {
        Self { id: id.into(), status, witness: None, value: None, gating: true, detail: detail.into() }
    }

    pub fn pass_if(id: &str, ok: bool, witness: Complex, detail: impl Into<String>) -> Self {
        let mut c = Self::new(id, if ok { Status::Pass } else { Status::Fail }, detail);
        if !ok {
            c.witness = Some(witness);
        }
        c
    }

    pub fn with_value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn with_witness(mut self, w: Complex) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn selector(mut self) -> Self {
        self.gating = false;
        self
    }
}

/// A printed inequality next to its re-derived counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub id: String,
    /// Verdict of the re-derived form, when one is evaluated in the same row.
    pub certified_ok: Option<bool>,
    pub printed_ok: bool,
    pub witness: Option<Complex>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub detail: String,
}

impl AuditRow {
    pub fn from_bound(id: &str, certified_ok: Option<bool>, printed: &BoundCheck, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            certified_ok,
            printed_ok: printed.ok,
            witness: printed.witness,
            lhs: printed.lhs_at_witness,
            rhs: printed.rhs_at_witness,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityReport {
    pub subject: String,
    pub jet: Option<BoundaryJet>,
    pub alpha: Option<f64>,
    pub a: Option<Complex>,
    /// `(k, a_λ)` with `λ = k/(k+1)`.
    pub a_lambda: Vec<(f64, Complex)>,
    pub schwarzian: Option<Complex>,
    pub m: Option<f64>,
    pub verdicts: BTreeSet<Verdict>,
    pub checks: Vec<Check>,
    pub audit: Vec<AuditRow>,
    /// Further named scalars (μ, k₀, deviations).
    pub values: Vec<(String, f64)>,
}

impl RigidityReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            jet: None,
            alpha: None,
            a: None,
            a_lambda: Vec::new(),
            schwarzian: None,
            m: None,
            verdicts: BTreeSet::new(),
            checks: Vec::new(),
            audit: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn audit_row(&self, id: &str) -> Option<&AuditRow> {
        self.audit.iter().find(|r| r.id == id)
    }

    pub fn has(&self, v: Verdict) -> bool {
        self.verdicts.contains(&v)
    }

    /// Worst status over gating checks: any fail, else any inconclusive,
    /// else pass.
    pub fn overall(&self) -> Status {
        let gating = self.checks.iter().filter(|c| c.gating).map(|c| c.status);
        let mut out = Status::Pass;
        for s in gating {
            match s {
                Status::Fail => return Status::Fail,
                Status::Inconclusive => out = Status::Inconclusive,
                _ => {}
            }
        }
        out
    }

    /// Ids of gating checks that failed.
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.gating && c.status == Status::Fail).map(|c| c.id.as_str()).collect()
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn set(&mut self, name: &str, v: f64) {
        self.values.push((name.into(), v));
    }
}

/// `S_F(1) = F'''(1)/F'(1) − (3/2)(F''(1)/F'(1))²` from a jet at 1.
pub fn schwarzian_boundary(jet: &BoundaryJet) -> Result<Complex, RigidityError> {
    if jet.order < 3 {
        return Err(RigidityError::JetTooShort(jet.order));
    }
    if jet.derivative(1).norm() == 0.0 {
        return Err(RigidityError::ZeroDerivative);
    }
    Ok(crate::dynamics::schwarzian_of_jet(jet).expect("order and derivative checked"))
}

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

/// Boundary data `(α, F''(1))` of a jet at 1 fixing 1 with `α > 0`.
fn fixed_point_data(jet: &BoundaryJet) -> Result<(f64, Complex), RigidityError> {
    if (jet.coeff(0) - one()).norm() > ZERO_TOL {
        return Err(RigidityError::NotFixingOne(jet.coeff(0)));
    }
    let a1 = jet.coeff(1);
    if a1.im.abs() > ZERO_TOL || !(a1.re > 0.0) {
        return Err(RigidityError::BadAngularDerivative(a1));
    }
    Ok((a1.re, jet.derivative(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary;
    use crate::holomap::{parse_map, MapExpr, Mobius};

    fn jet_of(text: &str) -> BoundaryJet {
        boundary::jet(&parse_map(text).unwrap(), one(), 3).unwrap()
    }

    #[test]
    fn schwarzian_examples() {
        let m = MapExpr::Mobius(Mobius::from_real(1.0, 0.3, 0.3, 1.0));
        assert!(schwarzian_boundary(&boundary::jet(&m, one(), 3).unwrap()).unwrap().norm() < 1e-12);
        assert!(schwarzian_boundary(&jet_of("0.5*(z+1)+0.05*(z-1)^4")).unwrap().norm() < 1e-12);
        let s = schwarzian_boundary(&jet_of("z-0.05*(z-1)^3")).unwrap();
        assert!((s + 0.3).norm() < 1e-12);
    }

    #[test]
    fn schwarzian_needs_nonzero_derivative() {
        assert_eq!(schwarzian_boundary(&jet_of("1")), Err(RigidityError::ZeroDerivative));
    }

    #[test]
    fn overall_status() {
        let mut r = RigidityReport::new("x");
        r.push(Check::new("a", Status::Pass, ""));
        r.push(Check::new("b", Status::Fail, "").selector());
        assert_eq!(r.overall(), Status::Pass);
        r.push(Check::new("c", Status::Inconclusive, ""));
        assert_eq!(r.overall(), Status::Inconclusive);
        r.push(Check::pass_if("d", false, one(), ""));
        assert_eq!(r.overall(), Status::Fail);
        assert_eq!(r.failures(), vec!["d"]);
    }
}
