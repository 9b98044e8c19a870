//! Angular limits, numeric boundary jets, charges of half-plane functions
//! and the boundary lemmas as executable checks.

mod fit;
mod lemmas;
pub mod richardson;

use thiserror::Error;

use crate::holomap::{EvalError, Holomorphic, JetError, MapExpr};
use crate::sampling::validation_grid;
use crate::Complex;

pub use fit::{jet, numeric_jet};
pub use lemmas::{
    halfplane_decompose, julia_bound_check, reciprocal_bound_check, BoundCheck, HalfPlaneDecomposition,
    JuliaReport, ReciprocalReport, RECIPROCAL_ANCHORS,
};
use richardson::extrapolate;

/// Agreement required between consecutive extrapolants.
pub const LIMIT_TOL: f64 = 1e-8;
/// Largest allowed disagreement between approach rays.
pub const RAY_TOL: f64 = 1e-6;
/// Slack for quantities that are provably nonnegative.
pub const CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("angular limit diverges (last extrapolant change {tail:e})")]
    Divergent { tail: f64 },
    #[error("limit is not nontangential: rays disagree by {gap:e}")]
    NotNontangential { gap: f64 },
    #[error("jet fit is ill-conditioned (condition number {cond:e})")]
    IllConditioned { cond: f64 },
    #[error("ladder too short for a fit of order {order}")]
    LadderTooShort { order: usize },
    #[error("real part is negative ({value:e}) at {at}")]
    NegativeRealPart { at: Complex, value: f64 },
    #[error("charge {delta:e} is negative")]
    NegativeCharge { delta: f64 },
    #[error("angular limit at 1 is {value}, not 0")]
    NonzeroBoundaryValue { value: Complex },
    #[error("angular derivative {k} is not real")]
    NonRealDerivative { k: Complex },
    #[error("angular derivative {k} is positive")]
    PositiveDerivative { k: f64 },
    #[error("remainder does not vanish faster than (z-1)")]
    RemainderTooLarge,
}

/// Approach geometry at a boundary point: radial ladder `1 − 2^{-j}` and two
/// rays at half the Stolz aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzProbe {
    pub tau: Complex,
    pub k: f64,
    pub j_min: u32,
    pub j_max: u32,
}

impl StolzProbe {
    pub fn new(tau: Complex) -> Self {
        Self { tau, k: 2.0, j_min: 4, j_max: 40 }
    }

    pub fn at_one() -> Self {
        Self::new(Complex::new(1.0, 0.0))
    }

    /// Angle between the off-radial rays and the radius.
    pub fn ray_angle(&self) -> f64 {
        0.5 * (1.0 / self.k).acos()
    }

    /// The three approach directions: radial first.
    pub fn directions(&self) -> [Complex; 3] {
        let t = self.ray_angle();
        [Complex::new(1.0, 0.0), Complex::from_polar(1.0, t), Complex::from_polar(1.0, -t)]
    }

    /// `τ(1 − h·dir)`.
    pub fn point(&self, h: f64, dir: Complex) -> Complex {
        self.tau * (1.0 - h * dir)
    }

    pub fn rung(&self, j: u32, dir: Complex) -> Complex {
        self.point(f64::powi(0.5, j as i32), dir)
    }

    /// `|z − τ| < k(1 − |z|)`.
    pub fn in_region(&self, z: Complex) -> bool {
        (z - self.tau).norm() < self.k * (1.0 - z.norm())
    }
}

/// An angular limit together with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularLimit {
    pub value: Complex,
    pub tail_estimate: f64,
    /// Largest disagreement between the radial and off-radial limits.
    pub ray_gap: f64,
}

fn ray_limit<F: Holomorphic + ?Sized>(
    f: &F,
    probe: &StolzProbe,
    dir: Complex,
) -> Result<richardson::Extrapolation, BoundaryError> {
    extrapolate(
        |j| {
            let z = probe.rung(j, dir);
            debug_assert!(probe.in_region(z), "probe point {z} left the Stolz region");
            f.value(z).map_err(BoundaryError::from)
        },
        probe.j_min,
        probe.j_max,
        LIMIT_TOL,
    )
}

/// Nontangential limit of `f` at `probe.tau` with full diagnostics.
pub fn angular_limit_report<F: Holomorphic + ?Sized>(
    f: &F,
    probe: &StolzProbe,
) -> Result<AngularLimit, BoundaryError> {
    let dirs = probe.directions();
    let radial = ray_limit(f, probe, dirs[0])?;
    if !radial.converged {
        return Err(BoundaryError::Divergent { tail: radial.tail });
    }
    let mut gap = 0.0f64;
    for dir in &dirs[1..] {
        let r = ray_limit(f, probe, *dir)?;
        if !r.converged {
            return Err(BoundaryError::NotNontangential { gap: f64::INFINITY });
        }
        gap = gap.max((r.value - radial.value).norm());
    }
    if gap > RAY_TOL {
        return Err(BoundaryError::NotNontangential { gap });
    }
    Ok(AngularLimit { value: radial.value, tail_estimate: radial.tail, ray_gap: gap })
}

pub fn angular_limit<F: Holomorphic + ?Sized>(f: &F, probe: &StolzProbe) -> Result<Complex, BoundaryError> {
    angular_limit_report(f, probe).map(|r| r.value)
}

/// Radial limit only, for real-valued quantities that are not boundary
/// values of a holomorphic function.
pub fn radial_limit<F: Holomorphic + ?Sized>(f: &F, probe: &StolzProbe) -> Result<AngularLimit, BoundaryError> {
    let r = ray_limit(f, probe, Complex::new(1.0, 0.0))?;
    if !r.converged {
        return Err(BoundaryError::Divergent { tail: r.tail });
    }
    Ok(AngularLimit { value: r.value, tail_estimate: r.tail, ray_gap: 0.0 })
}

/// Fails with the first grid point where `Re p < −1e-9`.
pub fn check_right_halfplane(p: &MapExpr) -> Result<(), BoundaryError> {
    for z in validation_grid() {
        let v = p.eval(z)?;
        if v.re < -CLAMP_TOL {
            return Err(BoundaryError::NegativeRealPart { at: z, value: v.re });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeResult {
    pub delta: f64,
    pub converged: bool,
    pub tail_estimate: f64,
}

/// `δ_p(τ) = ∠lim (1 − z·conj τ) p(z)`.
pub fn charge(p: &MapExpr, tau: Complex) -> Result<ChargeResult, BoundaryError> {
    check_right_halfplane(p)?;
    let g = |z: Complex| -> Result<Complex, EvalError> { Ok((1.0 - z * tau.conj()) * p.eval(z)?) };
    let lim = angular_limit_report(&g, &StolzProbe::new(tau))?;
    let mut delta = lim.value.re;
    if delta < 0.0 {
        if delta >= -CLAMP_TOL {
            delta = 0.0;
        } else {
            return Err(BoundaryError::NegativeCharge { delta });
        }
    }
    Ok(ChargeResult { delta, converged: true, tail_estimate: lim.tail_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::parse_map;

    fn one() -> Complex {
        Complex::new(1.0, 0.0)
    }

    #[test]
    fn probe_points_stay_in_stolz_region() {
        let p = StolzProbe::at_one();
        for j in p.j_min..=p.j_max {
            for d in p.directions() {
                assert!(p.in_region(p.rung(j, d)));
            }
        }
    }

    #[test]
    fn limit_of_identity() {
        let v = angular_limit(&MapExpr::Var, &StolzProbe::at_one()).unwrap();
        assert!((v - one()).norm() < 1e-12);
    }

    #[test]
    fn limit_after_cancellation() {
        let f = parse_map("(1-z)*cayley(z)").unwrap();
        let v = angular_limit(&f, &StolzProbe::at_one()).unwrap();
        assert!((v - 2.0).norm() < 1e-9);
    }

    #[test]
    fn cayley_limit_diverges() {
        let f = parse_map("cayley(z)").unwrap();
        assert!(matches!(angular_limit(&f, &StolzProbe::at_one()), Err(BoundaryError::Divergent { .. })));
    }

    #[test]
    fn tangential_dependence_is_flagged() {
        // (1 − z)/|1 − z| has modulus one and its phase depends on the direction.
        let f = |z: Complex| -> Result<Complex, EvalError> { Ok((1.0 - z) / (1.0 - z).norm()) };
        assert!(matches!(
            angular_limit(&f, &StolzProbe::at_one()),
            Err(BoundaryError::NotNontangential { .. })
        ));
    }

    #[test]
    fn charges() {
        let c = charge(&parse_map("cayley(z)").unwrap(), one()).unwrap();
        assert!((c.delta - 2.0).abs() < 1e-9);
        assert_eq!(charge(&parse_map("1").unwrap(), one()).unwrap().delta, 0.0);
        let c = charge(&parse_map("1/(1-z)").unwrap(), one()).unwrap();
        assert!((c.delta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn charge_rejects_left_halfplane() {
        assert!(matches!(
            charge(&parse_map("-cayley(z)").unwrap(), one()),
            Err(BoundaryError::NegativeRealPart { .. })
        ));
    }
}
