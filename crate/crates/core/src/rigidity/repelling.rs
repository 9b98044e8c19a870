use super::{one, Check, RigidityError, RigidityReport, Status, Verdict};
use crate::geometry::{horocycle_ratio, mobius_boundary_data, mobius_boundary_deviation, DiskRegion};
use crate::holomap::{FixedPoints, MapExpr, Mobius};

const K0_TOL: f64 = 1e-9;
const HAUSDORFF_TOL: f64 = 1e-8;

/// Horocycle invariance for an LFT with repelling fixed point 1.
pub fn repelling_analysis(m: &Mobius) -> Result<RigidityReport, RigidityError> {
    let (alpha, a) = mobius_boundary_data(m)?;
    if alpha <= 1.0 {
        return Err(RigidityError::NotInScope(format!("alpha = {alpha} is not > 1")));
    }
    let mut r = RigidityReport::new(MapExpr::Mobius(*m).to_string());
    r.alpha = Some(alpha);
    r.a = Some(a);
    r.verdicts.insert(Verdict::IsLFT);
    if a.re <= 1e-12 {
        r.verdicts.extend([Verdict::IsAutomorphism, Verdict::HyperbolicAuto]);
        r.push(Check::new("rem3.k0", Status::NotApplicable, "Re a = 0: automorphism of the disk, no interior fixed point"));
        return Ok(r);
    }
    let zeta = match m.fixed_points() {
        FixedPoints::Points(ps) => ps.into_iter().map(|p| p.z).find(|z| z.norm() < 1.0 - 1e-12),
        FixedPoints::Identity => None,
    }
    .ok_or_else(|| RigidityError::NotInScope("no interior fixed point".into()))?;
    let k0 = (alpha - 1.0) / (alpha * a.re);
    let ratio = horocycle_ratio(one(), zeta);
    r.set("zeta_re", zeta.re);
    r.set("zeta_im", zeta.im);
    r.set("k0", k0);
    r.push(
        Check::pass_if("rem3.k0", (ratio - k0).abs() <= K0_TOL, zeta, format!("|1-z|^2/(1-|z|^2) = {ratio} at {zeta}"))
            .with_value(ratio - k0),
    );
    let region = DiskRegion::horocycle(k0)?;
    let dev = mobius_boundary_deviation(m, &region, &region, 4096);
    r.set("hausdorff", dev);
    r.push(Check::pass_if("rem3.invariant", dev <= HAUSDORFF_TOL, one(), format!("Hausdorff deviation {dev:.1e}")).with_value(dev));
    Ok(r)
}
