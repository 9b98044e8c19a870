//! The regions `D(τ, k) = {z ∈ Δ : |1 − z·conj τ|² / (1 − |z|²) < k}`:
//! horocycles for unimodular `τ`, pseudo-hyperbolic disks for interior `τ`.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::holomap::{EvalError, Holomorphic, Mobius};
use crate::sampling::vogel_disk;
use crate::Complex;

/// Width of the arc around the tangency point left out of boundary sweeps.
pub const TANGENCY_GAP: f64 = 1e-3;
/// Base slack on membership margins.
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("|tau| = {0} exceeds 1")]
    TauOutsideDisk(f64),
    #[error("k = {k} is not admissible for tau (need k > {bound})")]
    Inadmissible { k: f64, bound: f64 },
    #[error("point {0} is not in the open disk")]
    OutsideDisk(Complex),
    #[error("map does not fix 1 (M(1) = {0})")]
    NotFixingOne(Complex),
    #[error("angular derivative {0} is not a positive real")]
    BadAngularDerivative(Complex),
    #[error("image is not a horocycle of this family (1 + αk·Re a = {0:e})")]
    NotAHorocycle(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskRegion {
    pub tau: Complex,
    /// `f64::INFINITY` denotes the whole disk.
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// `k − ratio`.
    pub margin: f64,
    pub ratio: f64,
    /// Roundoff scale of `ratio`.
    pub roundoff: f64,
}

impl Membership {
    /// Inside up to `−(tol + roundoff)`.
    pub fn within(&self, tol: f64) -> bool {
        self.margin >= -(tol + self.roundoff)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanDisk {
    pub center: Complex,
    pub radius: f64,
    /// Pseudo-hyperbolic radius, for interior `τ`.
    pub pseudo_radius: Option<f64>,
}

impl EuclideanDisk {
    /// `radius − (|c − c'| + radius')`: nonnegative iff `other ⊆ self`.
    pub fn containment_gap(&self, other: &EuclideanDisk) -> f64 {
        self.radius - ((self.center - other.center).norm() + other.radius)
    }

    /// Distance from `w` to the bounding circle.
    pub fn boundary_distance(&self, w: Complex) -> f64 {
        ((w - self.center).norm() - self.radius).abs()
    }
}

/// `|1 − z·conj τ|² / (1 − |z|²)`.
pub fn horocycle_ratio(tau: Complex, z: Complex) -> f64 {
    (1.0 - z * tau.conj()).norm_sqr() / (1.0 - z.norm_sqr())
}

impl DiskRegion {
    pub fn new(tau: Complex, k: f64) -> Result<Self, GeometryError> {
        let t = tau.norm();
        if t > 1.0 + 1e-12 {
            return Err(GeometryError::TauOutsideDisk(t));
        }
        let bound = (1.0 - t * t).max(0.0);
        if !(k > bound) {
            return Err(GeometryError::Inadmissible { k, bound });
        }
        Ok(Self { tau, k })
    }

    pub fn horocycle(k: f64) -> Result<Self, GeometryError> {
        Self::new(Complex::new(1.0, 0.0), k)
    }

    /// The whole disk, viewed as `D(1, ∞)`.
    pub fn whole() -> Self {
        Self { tau: Complex::new(1.0, 0.0), k: f64::INFINITY }
    }

    pub fn is_whole(&self) -> bool {
        self.k.is_infinite()
    }

    pub fn is_horocycle(&self) -> bool {
        (self.tau.norm() - 1.0).abs() <= 1e-12
    }

    pub fn contains(&self, z: Complex) -> Result<Membership, GeometryError> {
        let r2 = z.norm_sqr();
        if !(r2 < 1.0) {
            return Err(GeometryError::OutsideDisk(z));
        }
        let ratio = horocycle_ratio(self.tau, z);
        let roundoff = 8.0 * f64::EPSILON * ratio / (1.0 - r2);
        let margin = self.k - ratio;
        Ok(Membership { inside: margin > 0.0, margin, ratio, roundoff })
    }

    pub fn euclidean_form(&self) -> EuclideanDisk {
        if self.is_whole() {
            return EuclideanDisk { center: Complex::default(), radius: 1.0, pseudo_radius: None };
        }
        let k = self.k;
        if self.is_horocycle() {
            return EuclideanDisk { center: self.tau / (1.0 + k), radius: k / (1.0 + k), pseudo_radius: None };
        }
        let t2 = self.tau.norm_sqr();
        let r = (1.0 - (1.0 - t2) / k).sqrt();
        let den = 1.0 - r * r * t2;
        EuclideanDisk {
            center: self.tau * (1.0 - r * r) / den,
            radius: r * (1.0 - t2) / den,
            pseudo_radius: Some(r),
        }
    }

    /// Boundary sweep: for horocycles the three anchors at ±90° and 180° from
    /// the tangency direction come first, then `n` equally spaced points that
    /// avoid the tangency arc.
    pub fn boundary_samples(&self, n: usize) -> Vec<Complex> {
        let e = self.euclidean_form();
        let tangent = self.is_horocycle() || self.is_whole();
        if !tangent {
            return (0..n).map(|j| e.center + Complex::from_polar(e.radius, TAU * j as f64 / n as f64)).collect();
        }
        let base = self.tau.arg();
        let u = self.tau / self.tau.norm();
        let mut out: Vec<Complex> = [Complex::new(0.0, 1.0), Complex::new(-1.0, 0.0), Complex::new(0.0, -1.0)]
            .iter()
            .map(|r| e.center + e.radius * u * r)
            .collect();
        let half = TANGENCY_GAP / 2.0;
        out.extend((0..n).map(|j| {
            let phi = half + (TAU - TANGENCY_GAP) * j as f64 / (n.max(2) - 1) as f64;
            e.center + Complex::from_polar(e.radius, base + phi)
        }));
        out
    }

    /// `m` points spread over the interior.
    pub fn interior_samples(&self, m: usize) -> Vec<Complex> {
        let e = self.euclidean_form();
        vogel_disk(m, 1.0 - 1e-9).into_iter().map(|w| e.center + e.radius * w).collect()
    }
}

/// Result of a sampled inclusion test `F(src) ⊆ dst`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclusionVerdict {
    pub holds: bool,
    /// First failing sample, in sweep order.
    pub witness: Option<Complex>,
    pub witness_ratio: Option<f64>,
    /// Sample with the smallest margin.
    pub worst: Complex,
    pub worst_ratio: f64,
    pub min_margin: f64,
    pub samples: usize,
}

fn image_membership(dst: &DiskRegion, w: Complex) -> Membership {
    if dst.is_whole() {
        let inside = w.norm() <= 1.0 + 1e-12;
        return Membership {
            inside,
            margin: if inside { f64::INFINITY } else { -f64::INFINITY },
            ratio: 0.0,
            roundoff: 0.0,
        };
    }
    dst.contains(w).unwrap_or(Membership {
        inside: false,
        margin: -f64::INFINITY,
        ratio: f64::INFINITY,
        roundoff: 0.0,
    })
}

/// Samples `n` boundary points of `src` and `n/4` interior points and tests
/// their images for membership in `dst` with margin `≥ −1e-9`.
pub fn image_in_region<F: Holomorphic + ?Sized>(
    f: &F,
    src: &DiskRegion,
    dst: &DiskRegion,
    n: usize,
) -> Result<InclusionVerdict, GeometryError> {
    let mut pts = src.boundary_samples(n);
    pts.extend(src.interior_samples(n / 4));
    let mut out = InclusionVerdict {
        holds: true,
        witness: None,
        witness_ratio: None,
        worst: pts[0],
        worst_ratio: 0.0,
        min_margin: f64::INFINITY,
        samples: pts.len(),
    };
    for z in pts {
        let w = f.value(z)?;
        let m = image_membership(dst, w);
        if m.margin < out.min_margin {
            out.min_margin = m.margin;
            out.worst = z;
            out.worst_ratio = m.ratio;
        }
        if !m.within(MARGIN_TOL) && out.witness.is_none() {
            out.holds = false;
            out.witness = Some(z);
            out.witness_ratio = Some(m.ratio);
        }
    }
    Ok(out)
}

/// `(α, a)` for a Möbius map fixing 1: `α = M'(1)`,
/// `a = (M''(1) + α(1 − α))/α²`.
pub fn mobius_boundary_data(m: &Mobius) -> Result<(f64, Complex), GeometryError> {
    let one = Complex::new(1.0, 0.0);
    let v = m.apply(one);
    if !((v - one).norm() <= 1e-10) {
        return Err(GeometryError::NotFixingOne(v));
    }
    let d1 = m.derivative(one, 1);
    if d1.im.abs() > 1e-10 || !(d1.re > 0.0) {
        return Err(GeometryError::BadAngularDerivative(d1));
    }
    let alpha = d1.re;
    let d2 = m.derivative(one, 2);
    Ok((alpha, (d2 + alpha * (1.0 - alpha)) / (alpha * alpha)))
}

/// `D(1, αk/(1 + αk·Re a))`, the exact image of `D(1, k)` under `m`; the
/// whole disk maps to `D(1, 1/Re a)`.
pub fn lft_region_image(m: &Mobius, k: f64) -> Result<DiskRegion, GeometryError> {
    let (alpha, a) = mobius_boundary_data(m)?;
    region_image_from_data(alpha, a, k)
}

pub fn region_image_from_data(alpha: f64, a: Complex, k: f64) -> Result<DiskRegion, GeometryError> {
    if k.is_infinite() {
        if a.re <= 1e-12 {
            return Ok(DiskRegion::whole());
        }
        return DiskRegion::horocycle(1.0 / a.re);
    }
    let den = 1.0 + alpha * k * a.re;
    if den <= 1e-9 {
        return Err(GeometryError::NotAHorocycle(den));
    }
    DiskRegion::horocycle(alpha * k / den)
}

/// Two-sided boundary deviation of `m(∂src)` from `∂dst`: forward images
/// against `∂dst` and pullbacks of `∂dst` against `∂src`.
pub fn mobius_boundary_deviation(m: &Mobius, src: &DiskRegion, dst: &DiskRegion, n: usize) -> f64 {
    let (es, ed) = (src.euclidean_form(), dst.euclidean_form());
    let inv = m.inverse();
    let forward = src.boundary_samples(n).into_iter().map(|z| ed.boundary_distance(m.apply(z)));
    let backward = dst.boundary_samples(n).into_iter().map(|w| es.boundary_distance(inv.apply(w)));
    forward.chain(backward).fold(0.0, f64::max)
}

/// Comparison of the two horocycles in the Schwarz–Pick type inclusion for a
/// boundary fixed point with data `(α, F''(1))` at scale `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorocycleInclusion {
    pub inner: DiskRegion,
    pub outer: DiskRegion,
    pub gap: f64,
    pub contained: bool,
    pub equal: bool,
}

/// Compares `D(1, αk/(1 + αk·Re a))` with `D(1, k/(1 + (k+1)·Re a_λ))`,
/// `λ = k/(k+1)`, through their Euclidean forms.
pub fn horocycle_inclusion(alpha: f64, f2: Complex, k: f64) -> Result<HorocycleInclusion, GeometryError> {
    let lambda = k / (k + 1.0);
    let a = (f2 + alpha * (1.0 - alpha)) / (alpha * alpha);
    let a_lambda = (lambda * f2 + alpha * (1.0 - alpha)) / (alpha * alpha);
    let inner = region_image_from_data(alpha, a, k)?;
    let den = 1.0 + (k + 1.0) * a_lambda.re;
    if den <= 1e-9 {
        return Err(GeometryError::NotAHorocycle(den));
    }
    let outer = DiskRegion::horocycle(k / den)?;
    let (ei, eo) = (inner.euclidean_form(), outer.euclidean_form());
    let gap = eo.containment_gap(&ei);
    let equal = (ei.center - eo.center).norm() <= 1e-12 && (ei.radius - eo.radius).abs() <= 1e-12;
    Ok(HorocycleInclusion { inner, outer, gap, contained: gap >= -1e-12, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::{parse_map, MapExpr};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn membership_examples() {
        let m = DiskRegion::horocycle(1.5).unwrap().contains(c(0.0, 0.0)).unwrap();
        assert_eq!(m.ratio, 1.0);
        assert!(m.inside);
        assert!(!DiskRegion::horocycle(1.0).unwrap().contains(c(0.0, 0.0)).unwrap().inside);
        let m = DiskRegion::horocycle(1.0).unwrap().contains(c(0.5, 0.0)).unwrap();
        assert!((m.ratio - 1.0 / 3.0).abs() < 1e-15 && m.inside);
        let d = DiskRegion::new(c(0.0, 0.0), 2.0).unwrap();
        assert!(d.contains(c(0.7, 0.0)).unwrap().inside);
        assert!(!d.contains(c(0.71, 0.0)).unwrap().inside);
        assert!(d.contains(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn euclidean_forms() {
        let e = DiskRegion::horocycle(1.0).unwrap().euclidean_form();
        assert_eq!((e.center, e.radius), (c(0.5, 0.0), 0.5));
        let e = DiskRegion::horocycle(3.0).unwrap().euclidean_form();
        assert_eq!((e.center, e.radius), (c(0.25, 0.0), 0.75));
        let e = DiskRegion::new(c(0.0, 0.0), 2.0).unwrap().euclidean_form();
        assert!((e.radius - 0.5f64.sqrt()).abs() < 1e-15 && e.center.norm() < 1e-15);
        assert!((e.pseudo_radius.unwrap() - 0.70711).abs() < 1e-5);
    }

    #[test]
    fn admissibility() {
        assert!(DiskRegion::new(c(0.0, 0.0), 1.0).is_err());
        assert!(DiskRegion::new(c(0.5, 0.0), 0.8).is_ok());
        assert!(DiskRegion::new(c(1.5, 0.0), 2.0).is_err());
    }

    #[test]
    fn automorphism_preserves_horocycle() {
        let m = Mobius::from_real(1.0, 0.3, 0.3, 1.0);
        let d = DiskRegion::horocycle(1.0).unwrap();
        let v = image_in_region(&MapExpr::Mobius(m), &d, &d, 512).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn affine_equality_case() {
        let f = parse_map("0.5*z+0.5").unwrap();
        let v = image_in_region(&f, &DiskRegion::whole(), &DiskRegion::horocycle(1.0).unwrap(), 512).unwrap();
        assert!(v.holds);
        assert!(v.min_margin.abs() < 1e-6, "{}", v.min_margin);
    }

    #[test]
    fn example_map_escapes_with_witness_at_i() {
        let f = parse_map("0.5*(z+1)+0.05*(z-1)^4").unwrap();
        let v = image_in_region(&f, &DiskRegion::whole(), &DiskRegion::horocycle(1.0).unwrap(), 512).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(c(0.0, 1.0)));
        assert!((v.witness_ratio.unwrap() - 0.74 / 0.66).abs() < 1e-12);
    }

    #[test]
    fn lft_images() {
        let half = Mobius::affine(c(0.5, 0.0), c(0.5, 0.0));
        let d = lft_region_image(&half, 1.0).unwrap();
        assert!((d.k - 1.0 / 3.0).abs() < 1e-15);
        assert!((lft_region_image(&half, f64::INFINITY).unwrap().k - 1.0).abs() < 1e-15);
        let m = Mobius::from_real(1.0, 0.3, 0.3, 1.0);
        let d = lft_region_image(&m, 2.0).unwrap();
        assert!((d.k - 2.0 * 7.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn exact_images_have_matching_boundaries() {
        let m = Mobius::from_real(1.0, 0.3, 0.3, 1.0);
        for k in [0.5, 1.0, 2.0, 4.0] {
            let src = DiskRegion::horocycle(k).unwrap();
            let dst = lft_region_image(&m, k).unwrap();
            assert!(mobius_boundary_deviation(&m, &src, &dst, 512) < 1e-8);
        }
    }

    #[test]
    fn horocycle_inclusion_for_parabolic_data() {
        let h = horocycle_inclusion(1.0, c(0.3, 0.1), 2.0).unwrap();
        assert!(h.contained && h.equal);
    }
}
