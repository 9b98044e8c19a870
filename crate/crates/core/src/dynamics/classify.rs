//! Denjoy–Wolff points and the dilation / hyperbolic / parabolic split.

use std::f64::consts::PI;

use super::{certify_generator, Certificate, DynamicsError};
use crate::boundary;
use crate::holomap::{differentiate, ensure_selfmap, MapExpr};
use crate::sampling::vogel_disk;
use crate::Complex;

pub const MAX_ITERATIONS: usize = 100_000;
const ELLIPTIC_TOL: f64 = 1e-9;
const PARABOLIC_TOL: f64 = 1e-8;
/// Orbits ending this close to the circle are treated as boundary-bound.
const BOUNDARY_SHELL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Dilation,
    Hyperbolic,
    Parabolic,
    EllipticAutomorphism,
    Identity,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Dilation => "Dilation",
            Kind::Hyperbolic => "Hyperbolic",
            Kind::Parabolic => "Parabolic",
            Kind::EllipticAutomorphism => "EllipticAutomorphism",
            Kind::Identity => "Identity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: Kind,
    pub tau_dw: Complex,
    /// `F'(τ)` for maps, `f'(τ)` for generators.
    pub multiplier: Complex,
    pub iterations: usize,
}

fn newton(
    g: impl Fn(Complex) -> Option<Complex>,
    dg: impl Fn(Complex) -> Option<Complex>,
    mut z: Complex,
) -> Option<Complex> {
    for _ in 0..80 {
        let d = dg(z)?;
        if d.norm() == 0.0 {
            return None;
        }
        let step = g(z)? / d;
        z -= step;
        if !(z.norm() < 2.0) {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    Some(z)
}

fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - r * (b - a), a + r * (b - a));
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..100 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = g(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

fn is_identity(map: &MapExpr) -> bool {
    vogel_disk(64, 0.95).into_iter().all(|z| map.eval(z).is_ok_and(|w| (w - z).norm() <= 1e-12))
}

fn interior_fixed_point(map: &MapExpr, dmap: &MapExpr, seeds: &[Complex]) -> Option<Complex> {
    let g = |z: Complex| map.eval(z).ok().map(|w| w - z);
    let dg = |z: Complex| dmap.eval(z).ok().map(|w| w - 1.0);
    seeds
        .iter()
        .filter_map(|&s| newton(g, dg, s))
        .find(|z| z.norm() < 1.0 - 1e-9 && g(*z).is_some_and(|v| v.norm() <= 1e-12))
}

/// Locates the boundary fixed point near `z` and polishes it.
fn boundary_fixed_point(map: &MapExpr, dmap: &MapExpr, z: Complex) -> Option<Complex> {
    let on_circle = |t: f64| {
        let u = Complex::from_polar(1.0, t);
        map.eval(u).map(|w| (w - u).norm()).unwrap_or(f64::INFINITY)
    };
    let width = (10.0 * (1.0 - z.norm())).clamp(0.01, PI);
    let t = golden_min(on_circle, z.arg() - width, z.arg() + width);
    let start = Complex::from_polar(1.0, t);

    let g = |u: Complex| map.eval(u).ok().map(|w| w - u);
    let dg = |u: Complex| dmap.eval(u).ok().map(|w| w - 1.0);
    let near_circle = |u: &Complex| (u.norm() - 1.0).abs() <= 1e-8;
    // A double fixed point is a simple zero of F' − 1.
    let ddmap = differentiate(dmap);
    let double = newton(dg, |u| ddmap.eval(u).ok(), start)
        .filter(near_circle)
        .filter(|u| g(*u).is_some_and(|v| v.norm() <= 1e-12));
    let tau = double.or_else(|| newton(g, dg, start).filter(near_circle))?;
    let tau = tau / tau.norm();
    g(tau).filter(|v| v.norm() <= 1e-8).map(|_| tau)
}

/// Iterates `F` from `z0` and classifies the limit.
pub fn denjoy_wolff(map: &MapExpr, z0: Complex, tol: f64) -> Result<Classification, DynamicsError> {
    ensure_selfmap(map)?;
    if is_identity(map) {
        return Ok(Classification {
            kind: Kind::Identity,
            tau_dw: z0,
            multiplier: Complex::new(1.0, 0.0),
            iterations: 0,
        });
    }
    let dmap = differentiate(map);
    let mut z = z0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let w = map.eval(z)?;
        iterations += 1;
        let step = (w - z).norm();
        z = w;
        if step <= tol {
            converged = true;
            break;
        }
    }

    if converged && z.norm() < 1.0 - BOUNDARY_SHELL {
        let tau = interior_fixed_point(map, &dmap, &[z]).unwrap_or(z);
        let multiplier = dmap.eval(tau)?;
        let kind = if (multiplier.norm() - 1.0).abs() < ELLIPTIC_TOL {
            Kind::EllipticAutomorphism
        } else {
            Kind::Dilation
        };
        return Ok(Classification { kind, tau_dw: tau, multiplier, iterations });
    }

    if z.norm() >= 1.0 - BOUNDARY_SHELL {
        let tau = boundary_fixed_point(map, &dmap, z).ok_or_else(|| {
            DynamicsError::Undetermined(format!("orbit reached {z} but no boundary fixed point was found nearby"))
        })?;
        let multiplier = boundary::jet(map, tau, 1)?.coeff(1);
        let kind = if (multiplier - 1.0).norm() < PARABOLIC_TOL {
            Kind::Parabolic
        } else if multiplier.im.abs() < PARABOLIC_TOL && multiplier.re > 0.0 && multiplier.re < 1.0 {
            Kind::Hyperbolic
        } else {
            return Err(DynamicsError::Undetermined(format!(
                "boundary fixed point {tau} has multiplier {multiplier}"
            )));
        };
        return Ok(Classification { kind, tau_dw: tau, multiplier, iterations });
    }

    let mut seeds = vec![z, Complex::default()];
    seeds.extend(vogel_disk(32, 0.9));
    if let Some(tau) = interior_fixed_point(map, &dmap, &seeds) {
        let multiplier = dmap.eval(tau)?;
        if (multiplier.norm() - 1.0).abs() < ELLIPTIC_TOL {
            return Ok(Classification { kind: Kind::EllipticAutomorphism, tau_dw: tau, multiplier, iterations });
        }
        return Err(DynamicsError::Undetermined(format!(
            "orbit did not settle; interior fixed point {tau} has |F'| = {}",
            multiplier.norm()
        )));
    }
    Err(DynamicsError::Undetermined(format!("orbit did not settle after {iterations} steps (last {z})")))
}

/// Type of the semigroup generated by `f`.
pub fn classify_generator(f: &MapExpr) -> Result<Classification, DynamicsError> {
    let g = certify_generator(f)?;
    let c = match *g.certificate() {
        Certificate::Trivial => Classification {
            kind: Kind::Identity,
            tau_dw: Complex::default(),
            multiplier: Complex::default(),
            iterations: 0,
        },
        Certificate::Interior { tau, .. } => {
            let multiplier = differentiate(f).eval(tau)?;
            let kind = if multiplier.re.abs() < ELLIPTIC_TOL {
                Kind::EllipticAutomorphism
            } else {
                Kind::Dilation
            };
            Classification { kind, tau_dw: tau, multiplier, iterations: 0 }
        }
        Certificate::Boundary { beta, .. } => Classification {
            kind: if beta.abs() < PARABOLIC_TOL { Kind::Parabolic } else { Kind::Hyperbolic },
            tau_dw: Complex::new(1.0, 0.0),
            multiplier: Complex::new(beta, 0.0),
            iterations: 0,
        },
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::{parse_map, Mobius};

    fn classify(e: MapExpr) -> Classification {
        denjoy_wolff(&e, Complex::default(), 1e-12).unwrap()
    }

    #[test]
    fn dilation() {
        let c = classify(parse_map("z/2").unwrap());
        assert_eq!(c.kind, Kind::Dilation);
        assert!(c.tau_dw.norm() < 1e-12 && (c.multiplier - 0.5).norm() < 1e-12);
    }

    #[test]
    fn hyperbolic_automorphism() {
        let c = classify(MapExpr::Mobius(Mobius::from_real(1.0, 0.3, 0.3, 1.0)));
        assert_eq!(c.kind, Kind::Hyperbolic);
        assert!((c.tau_dw - 1.0).norm() < 1e-12);
        assert!((c.multiplier.re - 7.0 / 13.0).abs() < 1e-9, "{}", c.multiplier);
    }

    #[test]
    fn parabolic_automorphism() {
        let i = Complex::i();
        let m = Mobius::new(2.0 - i, i, -i, 2.0 + i);
        let c = classify(MapExpr::Mobius(m));
        assert_eq!(c.kind, Kind::Parabolic);
        assert!((c.tau_dw - 1.0).norm() < 1e-9, "{}", c.tau_dw);
    }

    #[test]
    fn rotation_is_elliptic() {
        let e = parse_map("i*z").unwrap();
        assert_eq!(classify(e.clone()).kind, Kind::EllipticAutomorphism);
        let c = denjoy_wolff(&e, Complex::new(0.3, 0.1), 1e-12).unwrap();
        assert_eq!(c.kind, Kind::EllipticAutomorphism);
    }

    #[test]
    fn identity() {
        assert_eq!(classify(MapExpr::Var).kind, Kind::Identity);
    }

    #[test]
    fn boundary_point_other_than_one() {
        // Conjugate of the hyperbolic example by the rotation z ↦ −z.
        let c = classify(MapExpr::Mobius(Mobius::from_real(1.0, -0.3, -0.3, 1.0)));
        assert_eq!(c.kind, Kind::Hyperbolic);
        assert!((c.tau_dw + 1.0).norm() < 1e-12);
    }

    #[test]
    fn generators() {
        let c = classify_generator(&parse_map("z^2-1").unwrap()).unwrap();
        assert_eq!(c.kind, Kind::Hyperbolic);
        assert!((c.multiplier - 2.0).norm() < 1e-12);
        let c = classify_generator(&parse_map("-i*(1-z)^2").unwrap()).unwrap();
        assert_eq!(c.kind, Kind::Parabolic);
        assert_eq!(classify_generator(&parse_map("z").unwrap()).unwrap().kind, Kind::Dilation);
        assert_eq!(classify_generator(&parse_map("i*z").unwrap()).unwrap().kind, Kind::EllipticAutomorphism);
    }
}
