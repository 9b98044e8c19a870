use super::{one, AuditRow, Check, RigidityError, RigidityReport, Status, Verdict, BOUND_SAMPLES, SIGN_TOL, ZERO_TOL};
use crate::boundary::{BoundCheck, CLAMP_TOL, RECIPROCAL_ANCHORS};
use crate::dynamics::{null_point_profile, GeneratorProfile};
use crate::holomap::MapExpr;
use crate::sampling::{seeded_rng, uniform_disk, validation_grid};
use crate::Complex;

fn taylor2(beta: f64, f2: Complex) -> MapExpr {
    let u = MapExpr::sub(MapExpr::Var, MapExpr::real(1.0));
    MapExpr::add(MapExpr::scale(beta, u.clone()), MapExpr::scale(0.5 * f2, u.pow(2)))
}

/// LFT-semigroup, automorphism-group and affine criteria for a generator
/// with boundary null point 1.
pub fn generator_rigidity(prof: &GeneratorProfile, seed: u64) -> Result<RigidityReport, RigidityError> {
    if !prof.is_generator {
        return Err(RigidityError::NotInScope(format!("profile is not a certified generator (m = {:e})", prof.m)));
    }
    let beta = prof.beta;
    let f2 = prof.jet.derivative(2);
    let f3 = prof.jet.derivative(3);
    let m = prof.m;
    let unc = prof.m_uncertainty;
    let mut r = RigidityReport::new(prof.f.to_string());
    r.jet = Some(prof.jet.clone());
    r.m = Some(m);
    r.set("beta", beta);
    r.set("m_uncertainty", unc);

    let d = beta - f2.re;
    r.set("f1_minus_re_f2", d);
    r.push(Check::pass_if("th5.i", d >= -ZERO_TOL, one(), format!("f'(1) - Re f''(1) = {d:e}")).with_value(d));

    let slack = 2.0 * unc + ZERO_TOL;
    let gap = d - 2.0 * m;
    r.push(
        Check::pass_if("rem6", gap.abs() <= slack.max(1e-6), one(), format!("f'(1) - Re f''(1) - 2m = {gap:e}"))
            .with_value(gap),
    );

    // (i) f'(1) − Re f''(1) ≤ 2m, three-valued through the m uncertainty.
    let th4i = if gap <= ZERO_TOL {
        Status::Pass
    } else if gap <= slack {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    let mut c = Check::new("th4.i", th4i, format!("{d:e} <= 2m = {:e}", 2.0 * m)).with_value(gap);
    if th4i == Status::Fail {
        c = c.with_witness(one());
    }
    r.push(c);
    let iii_zero = f3.norm() <= ZERO_TOL;
    r.push(Check::pass_if("th4.ii", iii_zero, one(), format!("f'''(1) = {f3}")).with_value(f3.norm()));

    let is_lft = th4i == Status::Pass && iii_zero;
    let dfg = d.abs() <= ZERO_TOL && iii_zero;
    r.push(Check::pass_if("col3.dfg", dfg, one(), "f'(1) - Re f''(1) = f'''(1) = 0").selector());
    if is_lft {
        r.verdicts.insert(Verdict::IsLFT);
        let m_zero = m.abs() <= ZERO_TOL + unc;
        let agree = m_zero == dfg;
        r.push(Check::new(
            "th4.aut",
            if agree { Status::Pass } else { Status::Inconclusive },
            format!("m = 0: {m_zero}, dfg: {dfg}"),
        ));
        if m_zero && dfg {
            r.verdicts.insert(Verdict::IsAutomorphism);
            if beta.abs() > ZERO_TOL {
                r.verdicts.insert(Verdict::HyperbolicAuto);
            } else if f2.im.abs() > ZERO_TOL {
                r.verdicts.insert(Verdict::ParabolicAuto);
            } else {
                r.verdicts.insert(Verdict::IsIdentity);
                r.verdicts.insert(Verdict::IsAffine);
            }
        }
    }

    // Affine semigroups: f''(1) = f'''(1) = 0 and Re p ≥ ½ f'(1).
    let mut min_gap = f64::INFINITY;
    let mut worst = one();
    for z in validation_grid() {
        let g = prof.p.eval(z)?.re - 0.5 * beta;
        if g < min_gap {
            min_gap = g;
            worst = z;
        }
    }
    let col5 = f2.norm() <= ZERO_TOL && iii_zero && min_gap >= -SIGN_TOL;
    let mut c = Check::pass_if("col5", col5, worst, format!("min Re p - f'(1)/2 = {min_gap:e}")).selector();
    if col5 {
        let dev = validation_grid()
            .into_iter()
            .map(|z| prof.f.eval(z).map(|v| (v - beta * (z - 1.0)).norm()))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))?;
        c.detail = format!("f(z) = {beta}(z - 1) to {dev:.1e}");
        r.verdicts.insert(Verdict::IsAffine);
    }
    r.push(c);

    // Quadratic Taylor polynomial is itself a generator.
    let g = taylor2(beta, f2);
    let gp = null_point_profile(&g)?;
    r.push(Check::pass_if("th5.ii", gp.is_generator, one(), format!("m(g) = {:e}", gp.m)).with_value(gp.m));

    // Pointwise distance to the Taylor polynomial.
    if th4i != Status::Pass {
        r.push(Check::new("th5.iii.certified", Status::NotApplicable, "condition (i) does not hold"));
    } else if iii_zero {
        r.push(Check::new("th5.iii.certified", Status::NotApplicable, "f'''(1) = 0, so f = g"));
    } else {
        let real = f3.im.abs() <= ZERO_TOL && f3.re >= -ZERO_TOL;
        r.push(Check::pass_if("th5.iii.sign", real, one(), format!("f'''(1) = {f3}")).with_value(f3.re));
        let c3 = f3.re;
        let q = MapExpr::div(MapExpr::sub(g.clone(), prof.f.clone()), MapExpr::sub(MapExpr::real(1.0), MapExpr::Var).pow(2));
        let mut pts = RECIPROCAL_ANCHORS.to_vec();
        pts.extend(uniform_disk(&mut seeded_rng(seed), BOUND_SAMPLES, 0.99));
        let parts = |z: Complex| -> Result<(f64, f64, Complex, f64), crate::holomap::EvalError> {
            let diff = prof.f.eval(z)? - g.eval(z)?;
            let w = (1.0 - z.conj()).powu(2);
            Ok((diff.norm_sqr(), 1.0 - z.norm_sqr(), diff * w, (1.0 - z).norm_sqr()))
        };
        let certified = BoundCheck::run(&pts, CLAMP_TOL, |z| {
            let (lhs, den, _, s2) = parts(z)?;
            Ok((lhs, c3 / 3.0 * s2.powi(3) * q.eval(z)?.re / den))
        })?;
        let mut c = Check::pass_if(
            "th5.iii.certified",
            certified.ok,
            certified.witness.unwrap_or(one()),
            format!("smallest slack {:.3e}", certified.min_slack),
        )
        .with_value(certified.min_slack);
        if !certified.ok {
            c.witness = certified.witness;
        }
        r.push(c);

        let printed = BoundCheck::run(&pts, CLAMP_TOL, |z| {
            let (lhs, den, fw, _) = parts(z)?;
            Ok((lhs, c3 / 6.0 * fw.re / den))
        })?;
        r.audit.push(AuditRow::from_bound(
            "th5.iii.printed",
            Some(certified.ok),
            &printed,
            "Re[(f-g)(1-conj z)^2] orientation, factor 1/6",
        ));
        let oriented = BoundCheck::run(&pts, CLAMP_TOL, |z| {
            let (lhs, den, fw, _) = parts(z)?;
            Ok((lhs, -c3 / 6.0 * fw.re / den))
        })?;
        let mut row =
            AuditRow::from_bound("th5.iii.oriented", Some(certified.ok), &oriented, "Re[(g-f)(1-conj z)^2], factor 1/6");
        let (lhs0, den0, fw0, _) = parts(Complex::default())?;
        r.set("th5.iii.oriented.lhs_at_0", lhs0);
        r.set("th5.iii.oriented.rhs_at_0", -c3 / 6.0 * fw0.re / den0);
        if row.witness.is_none() {
            row.lhs = Some(lhs0);
            row.rhs = Some(-c3 / 6.0 * fw0.re / den0);
        }
        r.audit.push(row);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::parse_map;

    fn analyze(text: &str) -> RigidityReport {
        generator_rigidity(&null_point_profile(&parse_map(text).unwrap()).unwrap(), 42).unwrap()
    }

    #[test]
    fn riccati_generates_automorphisms() {
        let r = analyze("z^2-1");
        assert!(r.m.unwrap().abs() < 1e-6);
        for v in [Verdict::IsLFT, Verdict::IsAutomorphism, Verdict::HyperbolicAuto] {
            assert!(r.has(v), "{v:?}");
        }
        assert_eq!(r.check("col3.dfg").unwrap().status, Status::Pass);
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.checks);
    }

    #[test]
    fn affine_generator() {
        let r = analyze("z-1");
        assert!((r.m.unwrap() - 0.5).abs() < 1e-6);
        assert!(r.has(Verdict::IsAffine) && r.has(Verdict::IsLFT) && !r.has(Verdict::IsAutomorphism));
        assert!(r.check("th4.i").unwrap().value.unwrap().abs() < 1e-6);
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.checks);
    }

    #[test]
    fn cubic_generator() {
        let r = analyze("(z^2-1)-(1-z)^2-(1-z)^3");
        assert!((r.m.unwrap() - 1.0).abs() < 1e-3);
        assert!(!r.has(Verdict::IsLFT));
        assert_eq!(r.check("th4.ii").unwrap().status, Status::Fail);
        assert_eq!(r.check("th5.iii.certified").unwrap().status, Status::Pass);
        assert!((r.value("th5.iii.oriented.lhs_at_0").unwrap() - 1.0).abs() < 1e-9);
        assert!((r.value("th5.iii.oriented.rhs_at_0").unwrap() - 1.0).abs() < 1e-9);
        assert!(!r.audit_row("th5.iii.printed").unwrap().printed_ok);
    }

    #[test]
    fn parabolic_group() {
        let r = analyze("-i*(1-z)^2");
        assert!(r.has(Verdict::ParabolicAuto) && r.has(Verdict::IsAutomorphism));
        assert_eq!(r.check("col3.dfg").unwrap().status, Status::Pass);
    }
}
