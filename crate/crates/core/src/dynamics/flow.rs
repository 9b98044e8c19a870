//! Semigroup flows `u' = −f(u)` and quantities read off from them.

use std::fmt::Write as _;

use super::ode::{integrate, OdeOptions};
use super::{CertifiedGenerator, DynamicsError, GeneratorProfile};
use crate::boundary::richardson::Richardson;
use crate::Complex;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub z0: Complex,
    /// Accepted steps `(t, u(t))`, starting with `(0, z0)`.
    pub samples: Vec<(f64, Complex)>,
    pub options: OdeOptions,
}

impl Trajectory {
    pub fn end(&self) -> Complex {
        self.samples.last().expect("trajectory has its initial point").1
    }

    /// CSV with header `t,re,im` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,re,im\n");
        for (t, u) in &self.samples {
            writeln!(s, "{t:.16e},{:.16e},{:.16e}", u.re, u.im).expect("writing to a String");
        }
        s
    }
}

/// Solves the Cauchy problem for a certified generator.
pub fn flow(
    g: &CertifiedGenerator,
    z0: Complex,
    t_end: f64,
    opts: &OdeOptions,
) -> Result<Trajectory, DynamicsError> {
    if !(z0.norm() < 1.0) {
        return Err(DynamicsError::StartOutsideDisk(z0));
    }
    let f = g.expr();
    let samples = integrate(|u| Ok(-f.eval(u)?), z0, t_end.max(0.0), opts)?;
    assert!(samples.iter().all(|(_, u)| u.norm() < 1.0), "trajectory left the disk");
    Ok(Trajectory { z0, samples, options: *opts })
}

fn endpoint(g: &CertifiedGenerator, z0: Complex, t: f64, opts: &OdeOptions) -> Result<Complex, DynamicsError> {
    Ok(flow(g, z0, t, opts)?.end())
}

/// `|F_{s+t}(z0) − F_t(F_s(z0))|`.
pub fn semigroup_check(
    g: &CertifiedGenerator,
    z0: Complex,
    s: f64,
    t: f64,
    opts: &OdeOptions,
) -> Result<f64, DynamicsError> {
    let direct = endpoint(g, z0, s + t, opts)?;
    let mid = endpoint(g, z0, s, opts)?;
    Ok((direct - endpoint(g, mid, t, opts)?).norm())
}

/// Recovers `f(z)` from `(z − F_t(z))/t` on `t_j = 2^{-j}`, `j = j_min..=j_max`,
/// returning the full-order extrapolant with the best agreement between
/// neighbours.
pub fn generator_from_flow(
    g: &CertifiedGenerator,
    z: Complex,
    j_min: u32,
    j_max: u32,
) -> Result<Complex, DynamicsError> {
    let opts = OdeOptions::default();
    let mut table = Richardson::new(3);
    let mut prev: Option<Complex> = None;
    let (mut best, mut gap) = (Complex::default(), f64::INFINITY);
    for j in j_min..=j_max {
        let t = f64::powi(0.5, j as i32);
        let q = (z - endpoint(g, z, t, &opts)?) / t;
        let e = table.push(q);
        if !table.saturated() {
            continue;
        }
        if let Some(p) = prev {
            let d = (e - p).norm();
            if d < gap {
                gap = d;
                best = e;
            }
        }
        prev = Some(e);
    }
    if gap > 1e-6 * best.norm().max(1.0) {
        return Err(DynamicsError::NonConvergent { gap });
    }
    Ok(best)
}

fn horocycle_ratio(z: Complex) -> f64 {
    (1.0 - z).norm_sqr() / (1.0 - z.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub z: Complex,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub beta: f64,
    pub holds: bool,
    /// Smallest `rhs + 1e-8 − lhs`.
    pub min_slack: f64,
    pub worst: Option<RateRow>,
    pub rows: Vec<RateRow>,
}

/// Horocycle contraction `ρ(F_t z) ≤ e^{−tβ}·ρ(z) + 1e-8` with
/// `ρ(z) = |1 − z|²/(1 − |z|²)`.
pub fn pr2_rate_check(
    prof: &GeneratorProfile,
    pairs: &[(Complex, f64)],
    opts: &OdeOptions,
) -> Result<RateReport, DynamicsError> {
    let g = CertifiedGenerator::from_profile(prof)?;
    let mut rows = Vec::with_capacity(pairs.len());
    let mut min_slack = f64::INFINITY;
    let mut worst = None;
    for &(z, t) in pairs {
        let w = endpoint(&g, z, t, opts)?;
        let row = RateRow { z, t, lhs: horocycle_ratio(w), rhs: (-t * prof.beta).exp() * horocycle_ratio(z) };
        let slack = row.rhs + 1e-8 - row.lhs;
        if slack < min_slack {
            min_slack = slack;
            worst = Some(row);
        }
        rows.push(row);
    }
    Ok(RateReport { beta: prof.beta, holds: min_slack >= 0.0, min_slack, worst, rows })
}

/// Least-squares slope of `ln|1 − F_t(z)|` over `t ∈ [t0, t1]` at `n` equally
/// spaced times.
pub fn log_slope(
    g: &CertifiedGenerator,
    z: Complex,
    t0: f64,
    t1: f64,
    n: usize,
    opts: &OdeOptions,
) -> Result<f64, DynamicsError> {
    let n = n.max(2);
    let dt = (t1 - t0) / (n - 1) as f64;
    let mut u = endpoint(g, z, t0, opts)?;
    let mut pts = vec![(t0, (1.0 - u).norm().ln())];
    for k in 1..n {
        u = endpoint(g, u, dt, opts)?;
        pts.push((t0 + k as f64 * dt, (1.0 - u).norm().ln()));
    }
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{certify_generator, null_point_profile};
    use crate::holomap::parse_map;

    fn gen(text: &str) -> CertifiedGenerator {
        certify_generator(&parse_map(text).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_flows() {
        let o = OdeOptions::default();
        let u = flow(&gen("z-1"), Complex::default(), 2f64.ln(), &o).unwrap().end();
        assert!((u - 0.5).norm() < 1e-9);
        let u = flow(&gen("z^2-1"), Complex::default(), 1.0, &o).unwrap().end();
        assert!((u - 1f64.tanh()).norm() < 1e-9);
        let z0 = Complex::new(0.2, -0.1);
        let tr = flow(&gen("z^2-1"), z0, 0.0, &o).unwrap();
        assert_eq!(tr.samples, vec![(0.0, z0)]);
    }

    #[test]
    fn semigroup_property() {
        let o = OdeOptions::default();
        let l2 = 2f64.ln();
        let g = gen("z-1");
        assert!(semigroup_check(&g, Complex::default(), l2, l2, &o).unwrap() <= 1e-9);
        assert!((endpoint(&g, Complex::default(), 2.0 * l2, &o).unwrap() - 0.75).norm() <= 1e-9);
        let g = gen("z^2-1");
        assert!(semigroup_check(&g, Complex::new(0.0, 0.3), 0.5, 0.7, &o).unwrap() <= 1e-9);
        assert!(semigroup_check(&g, Complex::new(0.0, 0.3), 0.0, 0.7, &o).unwrap() <= 1e-15);
    }

    #[test]
    fn recover_generator() {
        let g = gen("z-1");
        let v = generator_from_flow(&g, Complex::default(), 6, 20).unwrap();
        assert!((v + 1.0).norm() < 1e-6, "{v}");
        let g = gen("z^2-1");
        let z = Complex::new(0.3, 0.4);
        let v = generator_from_flow(&g, z, 6, 20).unwrap();
        assert!((v - (z * z - 1.0)).norm() < 1e-6);
    }

    #[test]
    fn rate_equality_for_automorphism_group() {
        let prof = null_point_profile(&parse_map("z^2-1").unwrap()).unwrap();
        let r = pr2_rate_check(&prof, &[(Complex::default(), 1.0), (Complex::new(0.1, 0.2), 0.0)], &OdeOptions::default())
            .unwrap();
        assert!(r.holds);
        assert!((r.rows[0].lhs - (-2f64).exp()).abs() < 1e-5);
        assert!((r.rows[1].lhs - r.rows[1].rhs).abs() < 1e-15);
    }

    #[test]
    fn csv_export() {
        let tr = flow(&gen("z-1"), Complex::default(), 0.05, &OdeOptions::default()).unwrap();
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,re,im"));
        assert_eq!(lines.next(), Some("0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0"));
        assert_eq!(csv.lines().count(), tr.samples.len() + 1);
    }

    #[test]
    fn hyperbolic_log_slope() {
        let s = log_slope(&gen("z-1"), Complex::new(0.2, 0.1), 1.0, 5.0, 9, &OdeOptions::default()).unwrap();
        assert!((s + 1.0).abs() < 0.1, "{s}");
    }
}
