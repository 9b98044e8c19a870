//! Pointwise bounds for functions with nonnegative real part.

use super::richardson::decays_below;
use super::{
    angular_limit, charge, check_right_halfplane, jet, BoundaryError, StolzProbe, CLAMP_TOL, LIMIT_TOL,
};
use crate::holomap::{EvalError, MapExpr};
use crate::sampling::{seeded_rng, uniform_disk, vogel_disk};
use crate::Complex;

const SAMPLE_RADIUS: f64 = 0.99;

/// Verdict of a sampled inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub ok: bool,
    /// Smallest `rhs − lhs` over the samples.
    pub min_slack: f64,
    pub worst: Complex,
    /// First sample (in evaluation order) violating the bound.
    pub witness: Option<Complex>,
    pub lhs_at_witness: Option<f64>,
    pub rhs_at_witness: Option<f64>,
    pub samples: usize,
}

impl BoundCheck {
    /// Runs `bound(z) -> (lhs, rhs)` over `points` with slack `−tol`.
    pub fn run(
        points: &[Complex],
        tol: f64,
        mut bound: impl FnMut(Complex) -> Result<(f64, f64), EvalError>,
    ) -> Result<Self, EvalError> {
        let mut out = BoundCheck {
            ok: true,
            min_slack: f64::INFINITY,
            worst: points.first().copied().unwrap_or_default(),
            witness: None,
            lhs_at_witness: None,
            rhs_at_witness: None,
            samples: points.len(),
        };
        for &z in points {
            let (lhs, rhs) = bound(z)?;
            let slack = rhs - lhs;
            if slack < out.min_slack {
                out.min_slack = slack;
                out.worst = z;
            }
            if slack < -tol && out.witness.is_none() {
                out.ok = false;
                out.witness = Some(z);
                out.lhs_at_witness = Some(lhs);
                out.rhs_at_witness = Some(rhs);
            }
        }
        Ok(out)
    }
}

fn horocycle_ratio(z: Complex) -> f64 {
    (1.0 - z.norm_sqr()) / (1.0 - z).norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JuliaReport {
    pub delta: f64,
    pub check: BoundCheck,
}

/// `Re p(z) ≥ ½ δ_p(1) (1 − |z|²)/|1 − z|²` at seeded disk samples.
pub fn julia_bound_check(p: &MapExpr, n_samples: usize, seed: u64) -> Result<JuliaReport, BoundaryError> {
    let delta = charge(p, Complex::new(1.0, 0.0))?.delta;
    let pts = uniform_disk(&mut seeded_rng(seed), n_samples, SAMPLE_RADIUS);
    let check = BoundCheck::run(&pts, CLAMP_TOL, |z| {
        let lhs = 0.5 * delta * horocycle_ratio(z);
        Ok((lhs, p.eval(z)?.re))
    })?;
    Ok(JuliaReport { delta, check })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocalReport {
    /// `q'(1)`, real and nonpositive.
    pub k: f64,
    /// `|q|² ≤ −2k |1−z|²/(1−|z|²) Re q`.
    pub certified: BoundCheck,
    /// The same bound without the factor 2.
    pub printed: BoundCheck,
    pub certified_ok: bool,
    pub printed_ok: bool,
}

/// Points at which the reciprocal bound is always probed first.
pub const RECIPROCAL_ANCHORS: [Complex; 4] = [
    Complex::new(0.5, 0.0),
    Complex::new(0.0, 0.0),
    Complex::new(-0.5, 0.0),
    Complex::new(0.0, 0.5),
];

/// Pointwise bound for `q` with `Re q ≥ 0` and `∠lim q = 0` at 1.
pub fn reciprocal_bound_check(
    q: &MapExpr,
    n_samples: usize,
    seed: u64,
) -> Result<ReciprocalReport, BoundaryError> {
    check_right_halfplane(q)?;
    let probe = StolzProbe::at_one();
    let q0 = angular_limit(q, &probe)?;
    if q0.norm() > 1e-8 {
        return Err(BoundaryError::NonzeroBoundaryValue { value: q0 });
    }
    let kc = jet(q, Complex::new(1.0, 0.0), 1)?.coeff(1);
    if kc.im.abs() > 1e-8 {
        return Err(BoundaryError::NonRealDerivative { k: kc });
    }
    if kc.re > 1e-8 {
        return Err(BoundaryError::PositiveDerivative { k: kc.re });
    }
    let k = kc.re.min(0.0);
    let mut pts = RECIPROCAL_ANCHORS.to_vec();
    pts.extend(uniform_disk(&mut seeded_rng(seed), n_samples, SAMPLE_RADIUS));
    let bound = |factor: f64| {
        BoundCheck::run(&pts, CLAMP_TOL, |z| {
            let v = q.eval(z)?;
            let rhs = -factor * k * v.re / horocycle_ratio(z);
            Ok((v.norm_sqr(), rhs))
        })
    };
    let certified = bound(2.0)?;
    let printed = bound(1.0)?;
    Ok(ReciprocalReport { k, certified_ok: certified.ok, printed_ok: printed.ok, certified, printed })
}

/// Whether `p = a·C + b + γ` with `γ = o(z − 1)` along the radius.
///
/// With `φ(h) = h·p(1 − h) = 2a + (b − a)h + o(h²)` the combination
/// `φ(h) − 3φ(h/2) + 2φ(h/4)` cancels `a` and `b` exactly, so estimation
/// error in them cannot leak in. A linear part of `γ` leaves the ratio
/// `D/h²` constant; a vanishing one makes it decay. Rungs stop once the
/// roundoff level, which grows like `1/h³` for maps built on `C`, reaches
/// `1e-6·h²`.
fn remainder_vanishes(p: &MapExpr) -> Result<bool, EvalError> {
    let cayley = |z: Complex| (1.0 + z) / (1.0 - z);
    let mut phi = Vec::new();
    for j in 4..=24 {
        let h = f64::powi(0.5, j);
        let z = Complex::new(1.0 - h, 0.0);
        let pv = p.eval(z)?;
        let noise = h * f64::EPSILON * pv.norm() * (64.0 + 8.0 * cayley(z).norm());
        phi.push((h, h * pv, noise));
    }
    let mut ratios = Vec::new();
    for w in phi.windows(3) {
        let (h, n) = (w[0].0, w[0].2 + 3.0 * w[1].2 + 2.0 * w[2].2);
        if n > 1e-6 * h * h {
            break;
        }
        let d = (w[0].1 - 3.0 * w[1].1 + 2.0 * w[2].1).norm();
        ratios.push((d - n).max(0.0) / (h * h));
    }
    if ratios.len() < 4 {
        return Ok(false);
    }
    let ratios = &ratios[ratios.len().saturating_sub(8)..];
    let (first, last) = (ratios[0], ratios[ratios.len() - 1]);
    let geometric = last <= first * f64::powf(0.5, 0.5 * (ratios.len() - 1) as f64);
    Ok(decays_below(ratios, 1e-4) || (geometric && ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneDecomposition {
    /// Coefficient of the Cayley term, `½ δ_p(1)`.
    pub a: f64,
    /// Angular limit of `p − a·C` at 1.
    pub b: Complex,
    pub gamma_zero: bool,
    /// Grid point with the smallest `Re p − Re b`, reported when it is negative.
    pub witness: Option<Complex>,
    pub min_gap: f64,
}

/// Splits `p = a·C + b + γ` and decides whether `γ ≡ 0` by the half-plane
/// criterion `Re p ≥ Re b ≥ 0`.
pub fn halfplane_decompose(p: &MapExpr) -> Result<HalfPlaneDecomposition, BoundaryError> {
    let a = 0.5 * charge(p, Complex::new(1.0, 0.0))?.delta;
    let cayley = |z: Complex| (1.0 + z) / (1.0 - z);
    let shifted = |z: Complex| -> Result<Complex, EvalError> { Ok(p.eval(z)? - a * cayley(z)) };
    let probe = StolzProbe::at_one();
    let b = angular_limit(&shifted, &probe)?;

    if !remainder_vanishes(p)? {
        return Err(BoundaryError::RemainderTooLarge);
    }

    let mut min_gap = f64::INFINITY;
    let mut worst = Complex::default();
    for z in vogel_disk(2000, SAMPLE_RADIUS) {
        let gap = p.eval(z)?.re - b.re;
        if gap < min_gap {
            min_gap = gap;
            worst = z;
        }
    }
    // b is an extrapolated limit, so its sign carries the limit tolerance.
    let gamma_zero = min_gap >= -CLAMP_TOL && b.re >= -LIMIT_TOL * b.norm().max(1.0);
    Ok(HalfPlaneDecomposition { a, b, gamma_zero, witness: (!gamma_zero).then_some(worst), min_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::parse_map;

    #[test]
    fn julia_equality_for_cayley() {
        let r = julia_bound_check(&parse_map("cayley(z)").unwrap(), 200, 42).unwrap();
        assert!(r.check.ok);
        assert!(r.check.min_slack.abs() < 1e-12, "{}", r.check.min_slack);
    }

    #[test]
    fn julia_slack_for_simple_pole() {
        let p = parse_map("1/(1-z)").unwrap();
        let r = julia_bound_check(&p, 100, 1).unwrap();
        assert!(r.check.ok && r.check.min_slack > 0.0);
        // Slack at 0 is 1 − ½.
        let z = Complex::default();
        let slack = p.eval(z).unwrap().re - 0.5 * r.delta * horocycle_ratio(z);
        assert!((slack - 0.5).abs() < 1e-9);
    }

    #[test]
    fn julia_constant() {
        let r = julia_bound_check(&parse_map("1").unwrap(), 50, 1).unwrap();
        assert_eq!(r.delta, 0.0);
        assert!(r.check.ok);
    }

    #[test]
    fn reciprocal_bound_for_linear_q() {
        let r = reciprocal_bound_check(&parse_map("1-z").unwrap(), 200, 42).unwrap();
        assert!((r.k + 1.0).abs() < 1e-8);
        assert!(r.certified_ok);
        assert!(!r.printed_ok);
        assert_eq!(r.printed.witness, Some(Complex::new(0.5, 0.0)));
        assert!((r.printed.lhs_at_witness.unwrap() - 0.25).abs() < 1e-12);
        assert!((r.printed.rhs_at_witness.unwrap() - 1.0 / 6.0).abs() < 1e-8);
    }

    #[test]
    fn reciprocal_bound_for_zero() {
        let r = reciprocal_bound_check(&parse_map("0").unwrap(), 20, 42).unwrap();
        assert_eq!(r.k, 0.0);
        assert!(r.certified_ok && r.printed_ok);
    }

    #[test]
    fn reciprocal_rejects_nonzero_limit() {
        assert!(matches!(
            reciprocal_bound_check(&parse_map("2-z").unwrap(), 10, 1),
            Err(BoundaryError::NonzeroBoundaryValue { .. })
        ));
    }

    #[test]
    fn decompositions() {
        let d = halfplane_decompose(&parse_map("2*cayley(z)+1").unwrap()).unwrap();
        assert!((d.a - 2.0).abs() < 1e-8 && (d.b - 1.0).norm() < 1e-8 && d.gamma_zero);
        let d = halfplane_decompose(&parse_map("cayley(z)").unwrap()).unwrap();
        assert!((d.a - 1.0).abs() < 1e-8 && d.b.norm() < 1e-8 && d.gamma_zero);
        let d = halfplane_decompose(&parse_map("cayley(z)+2+(1-z)^2").unwrap()).unwrap();
        let linear = halfplane_decompose(&parse_map("cayley(z)+2+0.5*(1-z)").unwrap());
        assert_eq!(linear, Err(BoundaryError::RemainderTooLarge));
        // Cancellation-heavy form of 2C: the Cayley transform of an automorphism.
        let d2 = halfplane_decompose(&parse_map("cayley((z+0.6)/(1+0.6*z))").unwrap()).unwrap();
        assert!((d2.a - 4.0).abs() < 1e-6 && d2.gamma_zero, "{d2:?}");
        assert!((d.a - 1.0).abs() < 1e-8 && (d.b - 2.0).norm() < 1e-8);
        assert!(!d.gamma_zero);
        let w = d.witness.unwrap();
        assert!((w - Complex::new(0.49, 0.85)).norm() < 0.05, "{w}");
        assert!(d.min_gap < -0.3);
    }
}
