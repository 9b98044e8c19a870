//! Admissibility checks: no poles inside the disk, and the self-map test
//! by boundary maximum modulus.

use std::f64::consts::TAU;

use thiserror::Error;

use super::expr::MapExpr;
use crate::sampling::vogel_disk;
use crate::Complex;

/// Slack allowed on `|F| ≤ 1` at boundary samples.
pub const SELFMAP_TOL: f64 = 1e-12;
pub const BOUNDARY_SAMPLES: usize = 4096;
const WINDING_RADIUS: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("denominator {denominator} vanishes {zeros} time(s) inside the disk")]
    PoleInside { denominator: String, zeros: i64 },
    #[error("denominator {denominator} vanishes at or near {at}")]
    PoleNear { denominator: String, at: Complex },
    #[error("not a self-map: |F({at})| = {modulus}")]
    NotSelfMap { at: Complex, modulus: f64 },
}

/// Rewrites `Compose` and `Mobius` nodes into elementary arithmetic so every
/// denominator is an explicit function of `z`.
pub fn inline(e: &MapExpr) -> MapExpr {
    use MapExpr as E;
    match e {
        E::Var | E::Const(_) => e.clone(),
        E::Add(a, b) => E::Add(Box::new(inline(a)), Box::new(inline(b))),
        E::Sub(a, b) => E::Sub(Box::new(inline(a)), Box::new(inline(b))),
        E::Mul(a, b) => E::Mul(Box::new(inline(a)), Box::new(inline(b))),
        E::Div(a, b) => E::Div(Box::new(inline(a)), Box::new(inline(b))),
        E::Pow(a, n) => E::Pow(Box::new(inline(a)), *n),
        E::Cayley(a) => E::Cayley(Box::new(inline(a))),
        E::CayleyInv(a) => E::CayleyInv(Box::new(inline(a))),
        E::Compose(o, i) => inline(&inline(o).substitute(&inline(i))),
        E::Mobius(m) => {
            let lin = |p: Complex, q: Complex| {
                E::Add(Box::new(E::Mul(Box::new(E::Const(p)), Box::new(E::Var))), Box::new(E::Const(q)))
            };
            E::Div(Box::new(lin(m.a, m.b)), Box::new(lin(m.c, m.d)))
        }
    }
}

fn collect_denominators(e: &MapExpr, out: &mut Vec<MapExpr>) {
    use MapExpr as E;
    match e {
        E::Var | E::Const(_) | E::Mobius(_) | E::Compose(..) => {}
        E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) => {
            collect_denominators(a, out);
            collect_denominators(b, out);
        }
        E::Div(a, b) => {
            collect_denominators(a, out);
            collect_denominators(b, out);
            out.push((**b).clone());
        }
        E::Pow(a, _) => collect_denominators(a, out),
        E::Cayley(a) => {
            collect_denominators(a, out);
            out.push(E::sub(E::real(1.0), (**a).clone()));
        }
        E::CayleyInv(a) => {
            collect_denominators(a, out);
            out.push(E::add(E::real(1.0), (**a).clone()));
        }
    }
}

/// Every denominator of the inlined tree, innermost first.
pub fn denominators(e: &MapExpr) -> Vec<MapExpr> {
    let mut out = Vec::new();
    collect_denominators(&inline(e), &mut out);
    out
}

fn phase_step(a: Complex, b: Complex) -> f64 {
    (b / a).arg()
}

/// Winding number of `d(r·e^{iθ})` around 0, refining adaptively where the
/// phase turns quickly. `None` if `d` vanishes or fails on the contour.
pub fn winding_number(d: &MapExpr, r: f64) -> Option<i64> {
    let at = |t: f64| -> Option<Complex> {
        let v = d.eval(Complex::from_polar(r, t)).ok()?;
        (v.norm() > 0.0).then_some(v)
    };
    let n0 = 256;
    let mut total = 0.0;
    let mut stack: Vec<(f64, f64, Complex, Complex)> = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_v = at(0.0)?;
    for j in 1..=n0 {
        let t = TAU * j as f64 / n0 as f64;
        let v = at(t)?;
        stack.push((prev_t, t, prev_v, v));
        while let Some((t0, t1, v0, v1)) = stack.pop() {
            let step = phase_step(v0, v1);
            if step.abs() <= 0.5 || t1 - t0 < 1e-13 {
                total += step;
            } else {
                let tm = 0.5 * (t0 + t1);
                let vm = at(tm)?;
                // Process the left half first to keep the traversal ordered.
                stack.push((tm, t1, vm, v1));
                stack.push((t0, tm, v0, vm));
            }
        }
        prev_t = t;
        prev_v = v;
    }
    Some((total / TAU).round() as i64)
}

/// Rejects trees with a denominator vanishing strictly inside the disk.
pub fn check_pole_free(e: &MapExpr) -> Result<(), ValidationError> {
    for d in denominators(e) {
        match winding_number(&d, WINDING_RADIUS) {
            Some(0) => {}
            Some(zeros) => return Err(ValidationError::PoleInside { denominator: d.to_string(), zeros }),
            None => {
                return Err(ValidationError::PoleNear {
                    denominator: d.to_string(),
                    at: Complex::new(WINDING_RADIUS, 0.0),
                })
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfMapCheck {
    pub is_selfmap: bool,
    pub max_boundary_modulus: f64,
    pub argmax: Complex,
    pub max_interior_modulus: f64,
    pub samples: usize,
}

fn boundary_value(e: &MapExpr, z: Complex) -> Option<Complex> {
    e.eval(z).ok().or_else(|| e.eval(z * (1.0 - 1e-10)).ok())
}

/// Boundary maximum-modulus test at 4096 angles plus a 2000-point interior
/// sanity grid. Poles inside the disk are rejected first.
pub fn check_selfmap(e: &MapExpr) -> Result<SelfMapCheck, ValidationError> {
    check_pole_free(e)?;
    let mut max_b = 0.0f64;
    let mut argmax = Complex::new(1.0, 0.0);
    for j in 0..BOUNDARY_SAMPLES {
        let z = Complex::from_polar(1.0, TAU * j as f64 / BOUNDARY_SAMPLES as f64);
        let m = boundary_value(e, z).map_or(f64::INFINITY, |w| w.norm());
        if !(m <= max_b) {
            max_b = m;
            argmax = z;
        }
    }
    let mut max_i = 0.0f64;
    for z in vogel_disk(2000, 0.999) {
        let m = e.eval(z).map_or(f64::INFINITY, |w| w.norm());
        max_i = max_i.max(m);
    }
    Ok(SelfMapCheck {
        is_selfmap: max_b <= 1.0 + SELFMAP_TOL && max_i < 1.0,
        max_boundary_modulus: max_b,
        argmax,
        max_interior_modulus: max_i,
        samples: BOUNDARY_SAMPLES,
    })
}

/// [`check_selfmap`] turned into a hard requirement.
pub fn ensure_selfmap(e: &MapExpr) -> Result<SelfMapCheck, ValidationError> {
    let c = check_selfmap(e)?;
    if c.is_selfmap {
        Ok(c)
    } else {
        Err(ValidationError::NotSelfMap { at: c.argmax, modulus: c.max_boundary_modulus.max(c.max_interior_modulus) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::parse_map;

    #[test]
    fn example_map_is_selfmap() {
        let c = check_selfmap(&parse_map("0.5*(z+1)+0.05*(z-1)^4").unwrap()).unwrap();
        assert!(c.is_selfmap, "{c:?}");
        assert!((c.max_boundary_modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn large_perturbation_is_not_selfmap() {
        let c = check_selfmap(&parse_map("0.5*(z+1)+0.2*(z-1)^4").unwrap()).unwrap();
        assert!(!c.is_selfmap);
    }

    #[test]
    fn interior_pole_is_rejected() {
        let err = check_pole_free(&parse_map("1/(z-0.5)").unwrap()).unwrap_err();
        assert!(matches!(err, ValidationError::PoleInside { zeros: 1, .. }));
        // Removable singularities count as poles.
        assert!(check_pole_free(&parse_map("(z^2-0.25)/(z-0.5)").unwrap()).is_err());
    }

    #[test]
    fn boundary_pole_is_allowed() {
        assert!(check_pole_free(&parse_map("cayley(z)").unwrap()).is_ok());
        assert!(check_pole_free(&parse_map("(1-z)*cayley(z)").unwrap()).is_ok());
    }

    #[test]
    fn pole_through_composition_is_found() {
        let e = parse_map("compose(1/(z-0.25), z^2)").unwrap();
        assert!(matches!(check_pole_free(&e), Err(ValidationError::PoleInside { zeros: 2, .. })));
    }

    #[test]
    fn mobius_automorphism_is_selfmap() {
        let c = check_selfmap(&parse_map("(z+0.3)/(1+0.3*z)").unwrap()).unwrap();
        assert!(c.is_selfmap);
    }
}
