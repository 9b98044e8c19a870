use std::fmt;
use std::ops::Mul;

use crate::Complex;

/// Linear fractional transformation `z ↦ (az + b) / (cz + d)`.
///
/// The record is projective: any nonzero multiple of `(a, b, c, d)` denotes the
/// same map. [`Mobius::canonical`] picks a deterministic representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

/// Determinant magnitude below which a normalized matrix counts as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// A fixed point together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub z: Complex,
    pub multiplicity: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixedPoints {
    /// The identity fixes everything.
    Identity,
    /// Finite fixed points; a fixed point at infinity is dropped.
    Points(Vec<FixedPoint>),
}

impl Mobius {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    /// Affine map `z ↦ slope·z + shift`.
    pub fn affine(slope: Complex, shift: Complex) -> Self {
        Self::new(slope, shift, Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))
    }

    /// Cayley transform `(1 + z) / (1 − z)`, disk onto the right half-plane.
    pub fn cayley() -> Self {
        Self::from_real(1.0, 1.0, -1.0, 1.0)
    }

    /// Inverse Cayley transform `(w − 1) / (w + 1)`.
    pub fn cayley_inverse() -> Self {
        Self::from_real(1.0, -1.0, 1.0, 1.0)
    }

    /// The unique map sending `z1, z2, z3` to `0, 1, ∞`.
    pub fn to_zero_one_infinity(z1: Complex, z2: Complex, z3: Complex) -> Self {
        Self::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
    }

    /// The unique map with `zk ↦ wk` for three distinct points each.
    pub fn through_points(z: [Complex; 3], w: [Complex; 3]) -> Self {
        let s = Self::to_zero_one_infinity(z[0], z[1], z[2]);
        let t = Self::to_zero_one_infinity(w[0], w[1], w[2]);
        (t.inverse() * s).canonical()
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Scale so the entry of largest magnitude equals `1`. Ties within a relative
    /// `1e-9` resolve to the first entry in `a, b, c, d` order.
    pub fn canonical(&self) -> Self {
        let e = self.entries();
        let max = e.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return *self;
        }
        let pivot = e
            .iter()
            .copied()
            .find(|x| x.norm() >= max * (1.0 - 1e-9))
            .expect("a maximal entry exists");
        let s = pivot.inv();
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// True when the canonical determinant is below [`SINGULAR_DET`].
    pub fn is_degenerate(&self) -> bool {
        self.canonical().det().norm() <= SINGULAR_DET
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn apply(&self, z: Complex) -> Complex {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Pole of the map, if it is finite.
    pub fn pole(&self) -> Option<Complex> {
        if self.c.norm() <= 1e-15 * self.d.norm().max(1e-300) {
            None
        } else {
            Some(-self.d / self.c)
        }
    }

    /// `k`-th complex derivative at `z`, for `k ≥ 1`:
    /// `(−c)^(k−1) k! (ad − bc) / (cz + d)^(k+1)`.
    pub fn derivative(&self, z: Complex, k: u32) -> Complex {
        assert!(k >= 1);
        let den = self.c * z + self.d;
        let fact: f64 = (1..=k).map(f64::from).product();
        (-self.c).powu(k - 1) * fact * self.det() / den.powu(k + 1)
    }

    /// Entrywise distance between canonical forms.
    pub fn distance(&self, other: &Self) -> f64 {
        let p = self.canonical().entries();
        let q = other.canonical().entries();
        p.iter().zip(q.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&Self::identity()) <= tol
    }

    /// Roots of `cz² + (d − a)z − b = 0`; a double root is reported once with
    /// multiplicity 2. A fixed point at infinity (when `c = 0`) is excluded.
    pub fn fixed_points(&self) -> FixedPoints {
        let m = self.canonical();
        if m.is_identity(1e-13) {
            return FixedPoints::Identity;
        }
        let (qa, qb, qc) = (m.c, m.d - m.a, -m.b);
        if qa.norm() <= 1e-14 {
            if qb.norm() <= 1e-14 {
                // z ↦ z + const: only ∞ is fixed.
                return FixedPoints::Points(Vec::new());
            }
            return FixedPoints::Points(vec![FixedPoint { z: -qc / qb, multiplicity: 1 }]);
        }
        let disc = qb * qb - 4.0 * qa * qc;
        let scale = (qb * qb).norm() + (4.0 * qa * qc).norm();
        if disc.norm() <= 1e-12 * scale.max(1e-300) {
            let z = -qb / (2.0 * qa);
            return FixedPoints::Points(vec![FixedPoint { z, multiplicity: 2 }]);
        }
        let s = disc.sqrt();
        // Choose the sign that avoids cancellation, then use Vieta for the other root.
        let q = if (qb.conj() * s).re >= 0.0 { -0.5 * (qb + s) } else { -0.5 * (qb - s) };
        let r1 = q / qa;
        let r2 = if q.norm() > 0.0 { qc / q } else { -qb / qa - r1 };
        FixedPoints::Points(vec![
            FixedPoint { z: r1, multiplicity: 1 },
            FixedPoint { z: r2, multiplicity: 1 },
        ])
    }

    /// Maps the unit disk onto itself: `|a|² − |c|²`, `|d|² − |b|²` agree and
    /// `a·conj(b) = c·conj(d)`, up to scale.
    pub fn is_disk_automorphism(&self, tol: f64) -> bool {
        let m = self.canonical();
        let det = m.det().norm();
        if det <= SINGULAR_DET {
            return false;
        }
        let p = m.a.norm_sqr() - m.c.norm_sqr();
        let q = m.d.norm_sqr() - m.b.norm_sqr();
        let r = m.a * m.b.conj() - m.c * m.d.conj();
        (p - q).abs() <= tol && r.norm() <= tol && p > 0.0
    }
}

impl Mul for Mobius {
    type Output = Mobius;

    /// Composition `self ∘ rhs`.
    fn mul(self, rhs: Self) -> Self::Output {
        let (u, v) = (self, rhs);
        Self {
            a: u.a * v.a + u.b * v.c,
            b: u.a * v.b + u.b * v.d,
            c: u.c * v.a + u.d * v.c,
            d: u.c * v.b + u.d * v.d,
        }
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn fixed_points_of_hyperbolic_automorphism() {
        let m = Mobius::from_real(1.0, 0.3, 0.3, 1.0);
        let FixedPoints::Points(mut pts) = m.fixed_points() else { panic!() };
        pts.sort_by(|x, y| x.z.re.partial_cmp(&y.z.re).unwrap());
        assert_eq!(pts.len(), 2);
        assert!((pts[0].z - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((pts[1].z - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn fixed_points_of_parabolic_map_are_double() {
        let m = Mobius::new(c(2.0, -1.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 1.0));
        let FixedPoints::Points(pts) = m.fixed_points() else { panic!() };
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].multiplicity, 2);
        assert!((pts[0].z - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fixed_point_at_infinity_is_dropped() {
        let m = Mobius::from_real(1.0, 0.0, 0.0, 2.0);
        let FixedPoints::Points(pts) = m.fixed_points() else { panic!() };
        assert_eq!(pts.len(), 1);
        assert!(pts[0].z.norm() < 1e-15);
    }

    #[test]
    fn identity_is_flagged() {
        assert_eq!(Mobius::from_real(3.0, 0.0, 0.0, 3.0).fixed_points(), FixedPoints::Identity);
    }

    #[test]
    fn canonical_form_pivots_on_largest_entry() {
        let m = Mobius::from_real(2.0, 0.6, 0.6, 2.0).canonical();
        assert_eq!(m.a, c(1.0, 0.0));
        assert!((m.b - c(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_matches_closed_form() {
        let m = Mobius::from_real(1.0, 0.3, 0.3, 1.0);
        // (1 − c²)/(1 + c)² with c = 0.3
        let d1 = m.derivative(c(1.0, 0.0), 1);
        assert!((d1.re - 0.91 / 1.69).abs() < 1e-15);
        // −2c(1 − c)/(1 + c)² ... second derivative is −2c(1−c²)/(1+c)³
        let d2 = m.derivative(c(1.0, 0.0), 2);
        assert!((d2.re + 2.0 * 0.3 * 0.91 / 1.3f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn through_points_recovers_map() {
        let m = Mobius::new(c(0.7, 0.1), c(0.2, -0.3), c(-0.1, 0.4), c(1.0, 0.2));
        let z = [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.5)];
        let w = z.map(|p| m.apply(p));
        assert!(Mobius::through_points(z, w).distance(&m) < 1e-12);
    }

    #[test]
    fn automorphism_test() {
        assert!(Mobius::from_real(1.0, 0.3, 0.3, 1.0).is_disk_automorphism(1e-12));
        assert!(!Mobius::from_real(0.5, 0.5, 0.0, 1.0).is_disk_automorphism(1e-12));
        assert!(!Mobius::cayley().is_disk_automorphism(1e-12));
    }
}
