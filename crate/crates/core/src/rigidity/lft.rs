use super::{
    fixed_point_data, one, schwarzian_boundary, Check, RigidityError, RigidityReport, Status, Verdict, ZERO_TOL,
};
use crate::boundary;
use crate::dynamics::selfmap_to_generator;
use crate::geometry::{image_in_region, lft_region_image, mobius_boundary_deviation, DiskRegion};
use crate::holomap::{detect_lft, ensure_selfmap, MapExpr};
use crate::sampling::vogel_disk;
use crate::Complex;

const REGION_SAMPLES: usize = 4096;
const HAUSDORFF_TOL: f64 = 1e-8;
const LFT_SEED: u64 = 42;

/// Whether a generator is a polynomial of degree at most 2: its quadratic
/// jet at 1 reproduces it on 100 probes to `1e-8`.
pub fn is_quadratic_generator(f: &MapExpr) -> Result<bool, RigidityError> {
    let jet = boundary::jet(f, one(), 2)?;
    for z in vogel_disk(100, 0.9) {
        let u = z - 1.0;
        let g = jet.coeff(0) + jet.coeff(1) * u + jet.coeff(2) * u * u;
        let v = f.eval(z)?;
        if (v - g).norm() > 1e-8 * v.norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn region_check(
    id: &str,
    map: &MapExpr,
    src: &DiskRegion,
    dst: &DiskRegion,
) -> Result<(Check, bool), RigidityError> {
    let v = image_in_region(map, src, dst, REGION_SAMPLES)?;
    let ratio = v.witness_ratio.unwrap_or(v.worst_ratio);
    let c = match v.witness {
        Some(w) => Check::new(id, Status::Fail, format!("ratio {ratio:.6} exceeds {:.6} at {w}", dst.k)).with_witness(w),
        None => Check::new(id, Status::Pass, format!("smallest margin {:.3e}", v.min_margin)),
    };
    Ok((c.with_value(ratio), v.holds))
}

/// LFT, automorphism and affine criteria for a self-map fixing 1.
pub fn lft_analysis(map: &MapExpr, k_list: &[f64]) -> Result<RigidityReport, RigidityError> {
    ensure_selfmap(map)?;
    let jet = boundary::jet(map, one(), 3)?;
    let (alpha, f2) = fixed_point_data(&jet)?;
    let f3 = jet.derivative(3);
    let s = schwarzian_boundary(&jet)?;
    let a = (f2 + alpha * (1.0 - alpha)) / (alpha * alpha);
    let mut r = RigidityReport::new(map.to_string());
    r.jet = Some(jet);
    r.alpha = Some(alpha);
    r.a = Some(a);
    r.schwarzian = Some(s);

    // Condition (i): F(Δ) ⊆ D(1, 1/Re a).
    let th2i = if a.re <= 1e-12 {
        Check::new("th2.i", Status::Vacuous, "Re a = 0, the target region is the whole disk").with_value(a.re)
    } else {
        region_check("th2.i", map, &DiskRegion::whole(), &DiskRegion::horocycle(1.0 / a.re)?)?.0
    };
    let i_holds = th2i.status.holds();
    r.push(th2i);

    // Condition (ii): Re S_F(1) = 0.
    let ii_holds = s.re.abs() <= ZERO_TOL;
    r.push(Check::pass_if("th2.ii", ii_holds, one(), format!("S_F(1) = {s}")).with_value(s.re));

    // Horocycle inclusion (3) for some k, with λ = k/(k+1).
    let dw_at_one = alpha <= 1.0 + ZERO_TOL;
    if !dw_at_one {
        r.push(Check::new("th2a.3", Status::NotApplicable, "alpha > 1: 1 is not the Denjoy-Wolff point"));
    } else if k_list.is_empty() {
        r.push(Check::new("th2a.3", Status::NotApplicable, "no k supplied"));
    } else {
        let mut passing = None;
        let mut first_fail: Option<Check> = None;
        for &k in k_list {
            let lambda = k / (k + 1.0);
            let a_l = (lambda * f2 + alpha * (1.0 - alpha)) / (alpha * alpha);
            r.a_lambda.push((k, a_l));
            let den = 1.0 + (k + 1.0) * a_l.re;
            if den <= 1e-9 {
                continue;
            }
            let (c, holds) = region_check("th2a.3", map, &DiskRegion::horocycle(k)?, &DiskRegion::horocycle(k / den)?)?;
            if holds {
                passing.get_or_insert(k);
            } else if first_fail.is_none() {
                first_fail = Some(c);
            }
        }
        let c = match (passing, first_fail) {
            (Some(k), _) => Check::new("th2a.3", Status::Pass, format!("inclusion holds for k = {k}")).with_value(k),
            (None, Some(c)) => c,
            (None, None) => Check::new("th2a.3", Status::Fail, "no admissible k").with_witness(one()),
        };
        r.push(c);
    }

    let is_lft = i_holds && ii_holds;
    let is_aut = is_lft && a.re.abs() <= ZERO_TOL;
    let unit = (alpha - 1.0).abs() <= ZERO_TOL;

    // Automorphism test in the form λ·Re F''(1) = α(α − 1) for some λ ∈ (0, 1].
    if dw_at_one {
        let target = alpha * (alpha - 1.0);
        let lambda_ok = if f2.re.abs() <= ZERO_TOL {
            target.abs() <= ZERO_TOL
        } else {
            let l = target / f2.re;
            l > 0.0 && l <= 1.0 + ZERO_TOL
        };
        let holds = ii_holds && lambda_ok;
        r.push(Check::pass_if("col*", holds, one(), "Re S = 0 and lambda Re F''(1) = alpha(alpha-1)").selector());
    }

    // Affine criterion.
    let col1 = if dw_at_one {
        let region_ok = if unit {
            true
        } else {
            let dst = DiskRegion::horocycle(alpha / (1.0 - alpha))?;
            region_check("col1", map, &DiskRegion::whole(), &dst)?.1
        };
        let jets_ok = f2.norm() <= ZERO_TOL && f3.norm() <= ZERO_TOL;
        let holds = region_ok && jets_ok;
        let mut c = Check::pass_if("col1", holds, one(), format!("F''(1) = {f2}, F'''(1) = {f3}")).selector();
        if holds {
            let affine = |z: Complex| alpha * z + 1.0 - alpha;
            let dev = vogel_disk(100, 0.95)
                .into_iter()
                .map(|z| map.eval(z).map(|w| (w - affine(z)).norm()))
                .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))?;
            c.detail = format!("F(z) = {alpha}z + {} to {dev:.1e}", 1.0 - alpha);
            c = c.with_value(dev);
        }
        c
    } else {
        Check::new("col1", Status::NotApplicable, "alpha > 1").selector()
    };
    let is_affine = col1.status == Status::Pass;
    r.push(col1);

    if is_lft {
        r.verdicts.insert(Verdict::IsLFT);
    }
    if is_aut {
        r.verdicts.insert(Verdict::IsAutomorphism);
        if !unit {
            r.verdicts.insert(Verdict::HyperbolicAuto);
        } else if f2.im.abs() > ZERO_TOL {
            r.verdicts.insert(Verdict::ParabolicAuto);
        }
    }
    if is_affine && is_lft {
        r.verdicts.insert(Verdict::IsAffine);
    }
    if is_lft && unit && f2.norm() <= ZERO_TOL {
        r.verdicts.insert(Verdict::IsIdentity);
    }

    // Boundary identities of the associated generator.
    let sg = selfmap_to_generator(map)?;
    let worst = sg.identity_residuals.iter().copied().fold(0.0, f64::max);
    r.push(Check::pass_if("lem5", sg.identities_hold, one(), format!("largest relative residual {worst:.1e}")).with_value(worst));

    // Cross-validation against the structural detector and the generator degree.
    let det = detect_lft(map, LFT_SEED);
    let quadratic = is_quadratic_generator(&sg.f)?;
    let agree = det.is_lft == is_lft && quadratic == is_lft;
    let status = if agree { Status::Pass } else { Status::Inconclusive };
    r.push(Check::new(
        "lft.consistency",
        status,
        format!("theorem {is_lft}, detector {}, quadratic generator {quadratic}", det.is_lft),
    ));

    // Equality of horocycle images for LFTs.
    if let (true, Some(m)) = (is_lft, det.mobius) {
        let mut worst = 0.0f64;
        for &k in k_list {
            let Ok(dst) = lft_region_image(&m, k) else { continue };
            worst = worst.max(mobius_boundary_deviation(&m, &DiskRegion::horocycle(k)?, &dst, REGION_SAMPLES));
        }
        r.push(
            Check::pass_if("th2.d1", worst <= HAUSDORFF_TOL, one(), format!("Hausdorff deviation {worst:.1e}"))
                .with_value(worst),
        );
        r.set("hausdorff_d1", worst);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::{parse_map, Mobius};

    const KS: [f64; 3] = [0.5, 1.0, 2.0];

    #[test]
    fn hyperbolic_automorphism() {
        let m = MapExpr::Mobius(Mobius::from_real(1.0, 0.3, 0.3, 1.0));
        let r = lft_analysis(&m, &KS).unwrap();
        assert!(r.a.unwrap().norm() < 1e-9);
        assert!(r.schwarzian.unwrap().norm() < 1e-9);
        for v in [Verdict::IsLFT, Verdict::IsAutomorphism, Verdict::HyperbolicAuto] {
            assert!(r.has(v), "{v:?}");
        }
        assert!(!r.has(Verdict::IsAffine));
        assert_eq!(r.check("th2.i").unwrap().status, Status::Vacuous);
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.checks);
        assert!(r.value("hausdorff_d1").unwrap() <= 1e-8);
    }

    #[test]
    fn affine_map() {
        let r = lft_analysis(&parse_map("0.5*z+0.5").unwrap(), &KS).unwrap();
        assert!((r.a.unwrap() - 1.0).norm() < 1e-12);
        assert!(r.has(Verdict::IsLFT) && r.has(Verdict::IsAffine) && !r.has(Verdict::IsAutomorphism));
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.checks);
    }

    #[test]
    fn example_map_fails_only_the_region_condition() {
        let r = lft_analysis(&parse_map("0.5*(z+1)+0.05*(z-1)^4").unwrap(), &KS).unwrap();
        let c = r.check("th2.i").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness, Some(Complex::i()));
        assert!((c.value.unwrap() - 1.1212).abs() < 1e-3, "{:?}", c.value);
        assert_eq!(r.check("th2.ii").unwrap().status, Status::Pass);
        assert!(!r.has(Verdict::IsLFT));
        assert_eq!(r.check("lft.consistency").unwrap().status, Status::Pass);
    }

    #[test]
    fn identity() {
        let r = lft_analysis(&MapExpr::Var, &KS).unwrap();
        for v in [Verdict::IsLFT, Verdict::IsAffine, Verdict::IsIdentity, Verdict::IsAutomorphism] {
            assert!(r.has(v), "{v:?}");
        }
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.checks);
    }

    #[test]
    fn parabolic_automorphism() {
        let i = Complex::i();
        let m = MapExpr::Mobius(Mobius::new(2.0 - i, i, -i, 2.0 + i));
        let r = lft_analysis(&m, &KS).unwrap();
        assert!(r.has(Verdict::ParabolicAuto), "{:?}", r.verdicts);
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.checks);
    }

    #[test]
    fn quadratic_generators() {
        assert!(is_quadratic_generator(&parse_map("z^2-1").unwrap()).unwrap());
        assert!(!is_quadratic_generator(&parse_map("(z-1)^3").unwrap()).unwrap());
    }
}
