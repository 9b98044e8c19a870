use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::{
    fixed_point_data, one, schwarzian_boundary, AuditRow, Check, RigidityError, RigidityReport, Status, Verdict,
    BOUND_SAMPLES, SIGN_TOL, ZERO_TOL,
};
use crate::boundary::{self, reciprocal_bound_check, BoundCheck, CLAMP_TOL, RECIPROCAL_ANCHORS};
use crate::geometry::{image_in_region, DiskRegion};
use crate::holomap::{check_selfmap, ensure_selfmap, EvalError, MapExpr};
use crate::sampling::{seeded_rng, uniform_disk, vogel_disk};
use crate::Complex;

const IDENTITY_PROBES: usize = 256;
const LADDER: std::ops::RangeInclusive<i32> = 4..=30;
const MU_RUNGS: std::ops::RangeInclusive<i32> = 2..=14;

fn sample_points(seed: u64) -> Vec<Complex> {
    let mut pts = RECIPROCAL_ANCHORS.to_vec();
    pts.extend(uniform_disk(&mut seeded_rng(seed), BOUND_SAMPLES, 0.99));
    pts
}

/// `q = (F − z)/(1 − z)²`.
fn defect_quotient(map: &MapExpr) -> MapExpr {
    MapExpr::div(MapExpr::sub(map.clone(), MapExpr::Var), MapExpr::sub(MapExpr::real(1.0), MapExpr::Var).pow(2))
}

/// `μ(F) = lim (r − F(r))/(r − 1)³` along the radius.
///
/// The numerator cancels catastrophically, so instead of a Richardson table
/// the ladder values are fitted by a quadratic in `h` weighted by their
/// roundoff level, and the constant term is returned.
fn radial_mu(map: &MapExpr) -> Result<f64, RigidityError> {
    let mut rows = Vec::new();
    for j in MU_RUNGS {
        let h = f64::powi(0.5, j);
        let z = Complex::new(1.0 - h, 0.0);
        let w = map.eval(z)?;
        let v = -(z - w).re / h.powi(3);
        let noise = 8.0 * f64::EPSILON * (z.norm() + w.norm()) / h.powi(3);
        rows.push((h, v, 1.0 / noise));
    }
    let a = DMatrix::from_fn(rows.len(), 3, |r, c| rows[r].2 * rows[r].0.powi(c as i32));
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.2 * r.1));
    let c = a.svd(true, true).solve(&b, 0.0).map_err(|e| RigidityError::NotInScope(e.into()))?;
    Ok(c[0])
}

fn max_identity_deviation(map: &MapExpr) -> Result<(f64, Complex), RigidityError> {
    let mut worst = (0.0, Complex::default());
    for z in vogel_disk(IDENTITY_PROBES, 0.99) {
        let d = (map.eval(z)? - z).norm();
        if d > worst.0 {
            worst = (d, z);
        }
    }
    Ok(worst)
}

/// Rigidity at a boundary point where `F` agrees with the identity to
/// second order.
pub fn burns_krantz(map: &MapExpr, seed: u64) -> Result<RigidityReport, RigidityError> {
    ensure_selfmap(map)?;
    let jet = boundary::jet(map, one(), 3)?;
    let (alpha, f2) = fixed_point_data(&jet)?;
    if (alpha - 1.0).abs() > ZERO_TOL || f2.norm() > ZERO_TOL {
        return Err(RigidityError::NotInScope(format!("jet is not (1, 1, 0, .): F'(1) = {alpha}, F''(1) = {f2}")));
    }
    let f3 = jet.derivative(3);
    let mut r = RigidityReport::new(map.to_string());
    r.alpha = Some(alpha);
    r.a = Some(Complex::default());
    r.schwarzian = Some(schwarzian_boundary(&jet)?);
    r.jet = Some(jet);

    if f3.norm() <= ZERO_TOL {
        let (dev, at) = max_identity_deviation(map)?;
        r.push(Check::pass_if("th1", dev < ZERO_TOL, at, format!("max |F(z) - z| = {dev:.1e}")).with_value(dev));
        r.set("mu", 0.0);
        if dev < ZERO_TOL {
            r.verdicts.extend([Verdict::IsLFT, Verdict::IsAutomorphism, Verdict::IsAffine, Verdict::IsIdentity]);
        }
        return Ok(r);
    }

    let mu = radial_mu(map)?;
    r.set("mu", mu);
    let expected = -f3.re / 6.0;
    r.push(
        Check::pass_if("bk.mu", (mu - expected).abs() <= 1e-6 && mu >= -SIGN_TOL, one(), format!("mu = {mu}, -F'''(1)/6 = {expected}"))
            .with_value(mu),
    );
    let sign_ok = f3.im.abs() <= ZERO_TOL && f3.re <= ZERO_TOL;
    r.push(Check::pass_if("col6.sign", sign_ok, one(), format!("F'''(1) = {f3}")).with_value(f3.re));

    let q = defect_quotient(map);
    let lemma = reciprocal_bound_check(&q, BOUND_SAMPLES, seed)?;
    r.set("k", lemma.k);
    r.push(
        Check::pass_if("lem2.certified", lemma.certified_ok, lemma.certified.witness.unwrap_or(one()), "q = (F - z)/(1 - z)^2")
            .with_value(lemma.certified.min_slack),
    );

    let pts = sample_points(seed);
    let parts = |z: Complex| -> Result<(f64, f64, Complex, f64), EvalError> {
        let d = map.eval(z)? - z;
        Ok((d.norm_sqr(), 1.0 - z.norm_sqr(), d * (1.0 - z.conj()).powu(2), (1.0 - z).norm_sqr()))
    };
    let c3 = f3.re;
    let certified = BoundCheck::run(&pts, CLAMP_TOL, |z| {
        let (lhs, den, w, s2) = parts(z)?;
        Ok((lhs, -c3 / 3.0 * s2 * w.re / den))
    })?;
    r.push(
        Check::pass_if("col6.certified", certified.ok, certified.witness.unwrap_or(one()), format!("{} samples", certified.samples))
            .with_value(certified.min_slack),
    );
    let printed = BoundCheck::run(&pts, CLAMP_TOL, |z| {
        let (lhs, den, w, _) = parts(z)?;
        Ok((lhs, c3 / 6.0 * w.re / den))
    })?;
    r.audit.push(AuditRow::from_bound(
        "col6.printed",
        Some(certified.ok),
        &printed,
        "Re[(z-F)(1-conj z)^2] orientation, factor 1/6",
    ));
    let oriented = BoundCheck::run(&pts, CLAMP_TOL, |z| {
        let (lhs, den, w, _) = parts(z)?;
        Ok((lhs, -c3 / 6.0 * w.re / den))
    })?;
    r.audit.push(AuditRow::from_bound(
        "col6.oriented",
        Some(certified.ok),
        &oriented,
        "Re[(F-z)(1-conj z)^2] orientation, factor 1/6",
    ));
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FalsificationReport {
    pub candidates: usize,
    pub selfmaps: usize,
    /// Self-maps whose jet at 1 is `(1, 1, 0, 0)`.
    pub jet_matches: usize,
    pub counterexamples: Vec<String>,
}

/// Seeded search over `z + c(z − 1)^j` for self-maps with the identity's
/// third-order jet at 1.
pub fn falsification_search(n: usize, seed: u64) -> Result<FalsificationReport, RigidityError> {
    let mut rng = seeded_rng(seed);
    let mut out = FalsificationReport { candidates: n, selfmaps: 0, jet_matches: 0, counterexamples: Vec::new() };
    for _ in 0..n {
        let j: u32 = rng.gen_range(1..=5);
        let modulus = 10f64.powf(rng.gen_range(-3.0..=-0.3));
        let c = Complex::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU));
        let map = MapExpr::add(MapExpr::Var, MapExpr::scale(c, MapExpr::shifted_power(one(), j)));
        if !check_selfmap(&map)?.is_selfmap {
            continue;
        }
        out.selfmaps += 1;
        let jet = boundary::jet(&map, one(), 3)?;
        let identity_jet = [one(), one(), Complex::default(), Complex::default()];
        if (0..=3).all(|k| (jet.coeff(k) - identity_jet[k]).norm() <= ZERO_TOL) {
            out.jet_matches += 1;
            if max_identity_deviation(&map)?.0 >= ZERO_TOL {
                out.counterexamples.push(map.to_string());
            }
        }
    }
    Ok(out)
}

/// Distance to the canonical LFT `G = C⁻¹(C(z)/α + a)` built from the jet.
pub fn quantitative_bounds(map: &MapExpr, seed: u64) -> Result<RigidityReport, RigidityError> {
    ensure_selfmap(map)?;
    let jet = boundary::jet(map, one(), 3)?;
    let (alpha, f2) = fixed_point_data(&jet)?;
    let s = schwarzian_boundary(&jet)?;
    let a = (f2 + alpha * (1.0 - alpha)) / (alpha * alpha);
    if a.re < -SIGN_TOL {
        return Err(RigidityError::NegativeReA(a.re));
    }
    let mut r = RigidityReport::new(map.to_string());
    r.jet = Some(jet);
    r.alpha = Some(alpha);
    r.a = Some(a);
    r.schwarzian = Some(s);
    r.push(Check::new("th3.i", Status::Pass, format!("Re a = {:e}", a.re)).with_value(a.re));

    let g = MapExpr::add(MapExpr::scale(1.0 / alpha, MapExpr::Var.cayley()), MapExpr::Const(a)).cayley_inv();
    let region_holds = if a.re <= 1e-12 {
        true
    } else {
        image_in_region(map, &DiskRegion::whole(), &DiskRegion::horocycle(1.0 / a.re)?, 4096)?.holds
    };
    if !region_holds {
        r.push(Check::new("th3.ii", Status::NotApplicable, "F(D) is not inside D(1, 1/Re a)"));
    } else {
        let sign_ok = s.im.abs() <= ZERO_TOL && s.re <= ZERO_TOL;
        r.push(Check::pass_if("th3.ii.sign", sign_ok, one(), format!("S_F(1) = {s}")).with_value(s.re));
        if s.norm() <= ZERO_TOL {
            let mut dev = 0.0f64;
            for z in vogel_disk(100, 0.95) {
                dev = dev.max((map.eval(z)? - g.eval(z)?).norm());
            }
            r.set("lft_deviation", dev);
            r.push(Check::pass_if("th3.ii", dev <= ZERO_TOL, one(), format!("max |F - G| = {dev:.1e}")).with_value(dev));
        } else {
            // K(r) with the roundoff level of |F − G|² alongside.
            let (mut k, mut floor) = (Vec::new(), 0.0f64);
            for j in LADDER {
                let z = Complex::new(1.0 - f64::powi(0.5, j), 0.0);
                let (fv, gv) = (map.eval(z)?, g.eval(z)?);
                k.push((fv - gv).norm_sqr() / (-s.re));
                floor = floor.max((8.0 * f64::EPSILON * (fv.norm() + gv.norm())).powi(2) / (-s.re));
            }
            let kmax = k.iter().copied().fold(0.0, f64::max);
            let tail = &k[k.len() - 8..];
            let decays = k.iter().all(|v| v.is_finite())
                && tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + floor)
                && tail[tail.len() - 1] <= k[0] + floor;
            r.set("K_max", kmax);
            r.set("K_last", tail[tail.len() - 1]);
            r.push(Check::pass_if("th3.ii", decays, one(), format!("K(r) bounded by {kmax:.3e} and decaying")));
        }
    }

    // Continuous version: μ(F) and the bound |F − z|² ≤ μ·K̃.
    if (alpha - 1.0).abs() <= ZERO_TOL && f2.norm() <= ZERO_TOL {
        let mu = radial_mu(map)?;
        r.set("mu", mu);
        r.push(Check::pass_if("mu.sign", mu >= -SIGN_TOL, one(), format!("mu = {mu}")).with_value(mu));
        let q = defect_quotient(map);
        let ktilde = |z: Complex| -> Result<f64, EvalError> {
            Ok(2.0 * (1.0 - z).norm_sqr().powi(3) * q.eval(z)?.re / (1.0 - z.norm_sqr()))
        };
        let bound = BoundCheck::run(&sample_points(seed), CLAMP_TOL, |z| {
            Ok(((map.eval(z)? - z).norm_sqr(), mu * ktilde(z)?))
        })?;
        r.push(
            Check::pass_if("mu.bound", bound.ok, bound.witness.unwrap_or(one()), format!("{} samples", bound.samples))
                .with_value(bound.min_slack),
        );
        let ladder: Vec<f64> =
            LADDER.map(|j| ktilde(Complex::new(1.0 - f64::powi(0.5, j), 0.0))).collect::<Result<_, _>>()?;
        let tail = &ladder[ladder.len() - 8..];
        let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
        r.set("Ktilde_last", tail[tail.len() - 1]);
        r.push(Check::pass_if("mu.Ktilde", monotone, one(), "K~(r) decreases to 0 along the radius"));
    }
    Ok(r)
}
