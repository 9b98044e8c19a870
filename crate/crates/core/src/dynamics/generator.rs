//! Berkson–Porta data of infinitesimal generators and the passage from a
//! self-map fixing 1 to a generator.

use std::f64::consts::TAU;

use super::DynamicsError;
use crate::boundary::{self, radial_limit, StolzProbe};
use crate::holomap::{differentiate, BoundaryJet, EvalError, MapExpr};
use crate::sampling::{unit_circle_excluding_one, validation_grid, vogel_disk};
use crate::Complex;

/// Slack on generator certificates.
pub const GENERATOR_TOL: f64 = 1e-8;
/// Slack on `Re p ≥ 0` over the validation grid.
pub const RE_P_TOL: f64 = 1e-9;

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

/// `(z − τ)(1 − z·conj τ)`.
fn bp_factor(tau: Complex) -> MapExpr {
    let a = MapExpr::sub(MapExpr::Var, MapExpr::Const(tau));
    let b = MapExpr::sub(MapExpr::real(1.0), MapExpr::mul(MapExpr::Const(tau.conj()), MapExpr::Var));
    MapExpr::mul(a, b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerksonPorta {
    pub tau: Complex,
    pub p: MapExpr,
    /// Smallest `Re p` on the validation grid.
    pub min_re_p: f64,
    pub witness: Complex,
    pub is_generator: bool,
}

/// `p = f / ((z − τ)(1 − z·conj τ))` and the sign test `Re p ≥ −1e-9`.
pub fn berkson_porta(f: &MapExpr, tau: Complex) -> Result<BerksonPorta, DynamicsError> {
    if tau.norm() > 1.0 + 1e-12 {
        return Err(DynamicsError::NullPointOutsideDisk(tau));
    }
    if tau.norm() < 1.0 - 1e-12 {
        let v = f.eval(tau)?;
        if v.norm() > 1e-9 {
            return Err(DynamicsError::NotDivisible { tau, value: v });
        }
    }
    let p = MapExpr::div(f.clone(), bp_factor(tau));
    let mut min_re_p = f64::INFINITY;
    let mut witness = Complex::default();
    for z in validation_grid() {
        if (z - tau).norm() < 1e-6 {
            continue;
        }
        let v = p.eval(z)?.re;
        if v < min_re_p {
            min_re_p = v;
            witness = z;
        }
    }
    Ok(BerksonPorta { tau, p, min_re_p, witness, is_generator: min_re_p >= -RE_P_TOL })
}

/// Where the infimum of the null-point profile was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinLocation {
    Boundary(Complex),
    Radial,
    Interior(Complex),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorProfile {
    pub f: MapExpr,
    pub tau: Complex,
    /// Angular derivative `f'(1)`.
    pub beta: f64,
    pub jet: BoundaryJet,
    /// `p = −f/(1 − z)²`.
    pub p: MapExpr,
    /// `inf Re p − ½β·Re C` over the disk.
    pub m: f64,
    pub m_uncertainty: f64,
    pub m_location: MinLocation,
    pub is_generator: bool,
}

fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..80 {
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
        (x1, f1)
    } else {
        (x2, f2)
    }
}

const BOUNDARY_ANGLES: usize = 4096;
const ARC_GAP: f64 = 1e-3;

/// Boundary null-point profile at `τ = 1`.
pub fn null_point_profile(f: &MapExpr) -> Result<GeneratorProfile, DynamicsError> {
    let probe = StolzProbe::at_one();
    let f1 = radial_limit(f, &probe)?.value;
    if f1.norm() > GENERATOR_TOL {
        return Err(DynamicsError::NoBoundaryNullPoint { value: f1 });
    }
    let jet = boundary::jet(f, one(), 3)?;
    let b = jet.coeff(1);
    if b.im.abs() > GENERATOR_TOL {
        return Err(DynamicsError::NonRealBeta { beta: b });
    }
    let beta = b.re;
    let p = MapExpr::div(MapExpr::neg(f.clone()), MapExpr::sub(MapExpr::real(1.0), MapExpr::Var).pow(2));

    let h = |z: Complex| -> Result<f64, EvalError> {
        let c = (1.0 + z) / (1.0 - z);
        Ok(p.eval(z)?.re - 0.5 * beta * c.re)
    };
    let on_circle = |t: f64| -> f64 {
        let z = Complex::from_polar(1.0, t);
        h(z).or_else(|_| h(z * (1.0 - 1e-10))).unwrap_or(f64::INFINITY)
    };

    // Boundary sweep away from the puncture.
    let pts = unit_circle_excluding_one(BOUNDARY_ANGLES, ARC_GAP);
    let mut coarse = f64::INFINITY;
    let mut idx = 0;
    for (j, z) in pts.iter().enumerate() {
        let v = on_circle(z.arg().rem_euclid(TAU));
        if v < coarse {
            coarse = v;
            idx = j;
        }
    }
    let step = (TAU - ARC_GAP) / BOUNDARY_ANGLES as f64;
    let t0 = pts[idx].arg().rem_euclid(TAU);
    let lo = (t0 - step).max(ARC_GAP / 2.0);
    let hi = (t0 + step).min(TAU - ARC_GAP / 2.0);
    let (t_ref, refined) = golden_min(on_circle, lo, hi);
    let (mut m, mut loc) = if refined < coarse {
        (refined, MinLocation::Boundary(Complex::from_polar(1.0, t_ref)))
    } else {
        (coarse, MinLocation::Boundary(pts[idx]))
    };
    let mut uncertainty = (coarse - refined).abs();

    // Radial approach to the puncture.
    let hc = |z: Complex| -> Result<Complex, EvalError> { Ok(Complex::new(h(z)?, 0.0)) };
    match radial_limit(&hc, &probe) {
        Ok(lim) => {
            if lim.value.re < m {
                m = lim.value.re;
                loc = MinLocation::Radial;
            }
            uncertainty = uncertainty.max(lim.tail_estimate);
        }
        Err(_) => {
            for j in probe.j_min..=30 {
                let v = h(Complex::new(1.0 - f64::powi(0.5, j as i32), 0.0))?;
                if v < m {
                    m = v;
                    loc = MinLocation::Radial;
                }
            }
        }
    }

    // Interior sanity grid.
    for z in vogel_disk(2000, 0.999) {
        let v = h(z)?;
        if v < m - 1e-12 {
            m = v;
            loc = MinLocation::Interior(z);
        }
    }

    Ok(GeneratorProfile {
        f: f.clone(),
        tau: one(),
        beta,
        jet,
        p,
        m,
        m_uncertainty: uncertainty,
        m_location: loc,
        is_generator: m >= -GENERATOR_TOL && beta >= -GENERATOR_TOL,
    })
}

/// Null point of `f` strictly inside the disk, by Newton from a seed grid.
pub fn find_interior_null_point(f: &MapExpr) -> Option<Complex> {
    let df = differentiate(f);
    let mut seeds = vec![Complex::default()];
    seeds.extend(vogel_disk(64, 0.95));
    for mut z in seeds {
        for _ in 0..60 {
            let (Ok(v), Ok(d)) = (f.eval(z), df.eval(z)) else { break };
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            z -= step;
            if !(z.norm() < 1.5) {
                break;
            }
            if step.norm() <= 1e-15 * z.norm().max(1.0) {
                break;
            }
        }
        if z.norm() < 1.0 - 1e-9 && f.eval(z).is_ok_and(|v| v.norm() <= 1e-12) {
            return Some(z);
        }
    }
    None
}

/// How a generator was certified.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// `f ≡ 0`.
    Trivial,
    /// Interior null point with `Re p ≥ 0` on the grid.
    Interior { tau: Complex, min_re_p: f64 },
    /// Boundary null point at 1 with `m ≥ −1e-8`.
    Boundary { beta: f64, m: f64 },
}

/// A map certified to generate a semigroup of holomorphic self-maps.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedGenerator {
    f: MapExpr,
    certificate: Certificate,
}

impl CertifiedGenerator {
    pub fn expr(&self) -> &MapExpr {
        &self.f
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// From a profile that already passed.
    pub fn from_profile(prof: &GeneratorProfile) -> Result<Self, DynamicsError> {
        if !prof.is_generator {
            return Err(DynamicsError::NotGenerator(format!("m = {:e}, beta = {:e}", prof.m, prof.beta)));
        }
        Ok(Self { f: prof.f.clone(), certificate: Certificate::Boundary { beta: prof.beta, m: prof.m } })
    }
}

fn identically_zero(f: &MapExpr) -> bool {
    vogel_disk(32, 0.9).into_iter().all(|z| f.eval(z).is_ok_and(|v| v.norm() <= 1e-14))
}

/// Certifies `f` through an interior null point or the boundary profile at 1.
pub fn certify_generator(f: &MapExpr) -> Result<CertifiedGenerator, DynamicsError> {
    crate::holomap::check_pole_free(f)?;
    if identically_zero(f) {
        return Ok(CertifiedGenerator { f: f.clone(), certificate: Certificate::Trivial });
    }
    if let Some(tau) = find_interior_null_point(f) {
        let bp = berkson_porta(f, tau)?;
        if !bp.is_generator {
            return Err(DynamicsError::NotGenerator(format!(
                "Re p = {:e} at {} for null point {}",
                bp.min_re_p, bp.witness, tau
            )));
        }
        return Ok(CertifiedGenerator {
            f: f.clone(),
            certificate: Certificate::Interior { tau, min_re_p: bp.min_re_p },
        });
    }
    let prof = null_point_profile(f)?;
    CertifiedGenerator::from_profile(&prof)
}

/// Generator attached to a self-map `F` with `F(1) = 1`, together with the
/// boundary identities linking their jets.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMapGenerator {
    /// `f = −(1 − z)²·C(F(z))`.
    pub f: MapExpr,
    pub alpha: f64,
    pub map_jet: BoundaryJet,
    pub generator_jet: BoundaryJet,
    /// Schwarzian of `F` at 1.
    pub schwarzian: Complex,
    /// Residuals of `α·f'(1) = 2`, `α²·f''(1) = 2(α² − F''(1))`,
    /// `α·f'''(1) = −2·S_F(1)`, each relative.
    pub identity_residuals: [f64; 3],
    pub identities_hold: bool,
    pub profile: GeneratorProfile,
}

/// Schwarzian `F'''/F' − (3/2)(F''/F')²` from a jet at the base point.
pub fn schwarzian_of_jet(jet: &BoundaryJet) -> Option<Complex> {
    let d1 = jet.derivative(1);
    if d1.norm() == 0.0 || jet.order < 3 {
        return None;
    }
    let r = jet.derivative(2) / d1;
    Some(jet.derivative(3) / d1 - 1.5 * r * r)
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn selfmap_to_generator(map: &MapExpr) -> Result<SelfMapGenerator, DynamicsError> {
    let map_jet = boundary::jet(map, one(), 3)?;
    if (map_jet.coeff(0) - one()).norm() > 1e-10 {
        return Err(DynamicsError::NotFixingOne { value: map_jet.coeff(0) });
    }
    let a1 = map_jet.coeff(1);
    if a1.im.abs() > 1e-10 || !(a1.re > 0.0) {
        return Err(DynamicsError::BadAngularDerivative { alpha: a1 });
    }
    let alpha = a1.re;
    let f = MapExpr::mul(
        MapExpr::neg(MapExpr::sub(MapExpr::real(1.0), MapExpr::Var).pow(2)),
        map.clone().cayley(),
    );
    let generator_jet = boundary::jet(&f, one(), 3)?;
    let s = schwarzian_of_jet(&map_jet).expect("order-3 jet with α > 0");
    let f2 = map_jet.derivative(2);
    let residuals = [
        rel(alpha * generator_jet.derivative(1), Complex::new(2.0, 0.0)),
        rel(alpha * alpha * generator_jet.derivative(2), 2.0 * (alpha * alpha - f2)),
        rel(alpha * generator_jet.derivative(3), -2.0 * s),
    ];
    let profile = null_point_profile(&f)?;
    Ok(SelfMapGenerator {
        f,
        alpha,
        map_jet,
        generator_jet,
        schwarzian: s,
        identities_hold: residuals.iter().all(|r| *r <= 1e-8),
        identity_residuals: residuals,
        profile,
    })
}
