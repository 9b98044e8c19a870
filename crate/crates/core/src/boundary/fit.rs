use nalgebra::{DMatrix, DVector};

use super::richardson::{decays_below, remainder_ratios};
use super::{BoundaryError, StolzProbe};
use crate::holomap::{exact_jet, BoundaryJet, Holomorphic, JetError, MapExpr};
use crate::Complex;

const MAX_FIT_RUNG: u32 = 24;
const EXTRA_DEGREE: usize = 5;
const MAX_CONDITION: f64 = 1e14;
const RESIDUAL_BOUND: f64 = 1e-4;
const RESIDUAL_RUNGS: usize = 8;
/// Residual rungs stop once `h^m` would fall below about `2^{-34}`.
const RESIDUAL_BUDGET: u32 = 34;

/// Least-squares jet of a black-box map along three approach rays, with a
/// numerical check that the remainder is `o((z − τ)^m)`.
pub fn numeric_jet<F: Holomorphic + ?Sized>(
    f: &F,
    tau: Complex,
    m: usize,
    probe: &StolzProbe,
) -> Result<BoundaryJet, BoundaryError> {
    crate::holomap::check_unimodular(tau)?;
    let probe = StolzProbe { tau, ..*probe };
    let degree = m + EXTRA_DEGREE;
    let h0 = f64::powi(0.5, probe.j_min as i32);
    let last = probe.j_max.min(MAX_FIT_RUNG);
    let mut rows: Vec<(Complex, Complex)> = Vec::new();
    for dir in probe.directions() {
        for j in probe.j_min..=last {
            let z = probe.rung(j, dir);
            rows.push(((z - tau) / h0, f.value(z)?));
        }
    }
    if rows.len() < 2 * (degree + 1) {
        return Err(BoundaryError::LadderTooShort { order: m });
    }
    let a = DMatrix::from_fn(rows.len(), degree + 1, |r, c| rows[r].0.powu(c as u32));
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min().max(f64::MIN_POSITIVE);
    if !(cond <= MAX_CONDITION) {
        return Err(BoundaryError::IllConditioned { cond });
    }
    let c = svd.solve(&b, 0.0).map_err(|_| BoundaryError::IllConditioned { cond })?;
    let coeffs: Vec<Complex> = (0..=m).map(|k| c[k] / h0.powi(k as i32)).collect();
    // Roundoff in the fitted coefficients is relative to the largest sample.
    let floor = 64.0 * f64::EPSILON * rows.iter().map(|r| r.1.norm()).fold(0.0, f64::max);
    let residual_ok = remainder_test(f, &probe, &coeffs, floor)?;
    Ok(BoundaryJet::new(tau, coeffs, residual_ok))
}

fn remainder_test<F: Holomorphic + ?Sized>(
    f: &F,
    probe: &StolzProbe,
    coeffs: &[Complex],
    floor: f64,
) -> Result<bool, BoundaryError> {
    let m = coeffs.len() - 1;
    let top = if m == 0 { probe.j_max } else { (RESIDUAL_BUDGET / m as u32).min(probe.j_max) };
    let first = top.saturating_sub(RESIDUAL_RUNGS as u32 - 1).max(probe.j_min);
    let (mut gamma, mut noise, mut hs) = (Vec::new(), Vec::new(), Vec::new());
    for j in first..=top {
        let h = f64::powi(0.5, j as i32);
        let z = probe.rung(j, Complex::new(1.0, 0.0));
        let u = z - probe.tau;
        let v = f.value(z)?;
        let mut poly = Complex::default();
        let mut scale = v.norm();
        for (k, a) in coeffs.iter().enumerate() {
            poly += a * u.powu(k as u32);
            scale += a.norm() * h.powi(k as i32);
        }
        gamma.push((v - poly).norm());
        noise.push(64.0 * f64::EPSILON * scale + floor);
        hs.push(h);
    }
    let ratios = remainder_ratios(&gamma, &noise, &hs, m as i32);
    Ok(decays_below(&ratios, RESIDUAL_BOUND))
}

/// Exact jet when the tree allows it, numeric fit otherwise.
pub fn jet(expr: &MapExpr, tau: Complex, m: usize) -> Result<BoundaryJet, BoundaryError> {
    match exact_jet(expr, tau, m) {
        Ok(j) => Ok(j),
        Err(JetError::NotUnimodular(t)) => Err(JetError::NotUnimodular(t).into()),
        Err(_) => numeric_jet(expr, tau, m, &StolzProbe::new(tau)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::{boundary_jet, parse_map, EvalError, Mobius};

    fn one() -> Complex {
        Complex::new(1.0, 0.0)
    }

    #[test]
    fn example_map_numeric_jet() {
        let e = parse_map("0.5*(z+1)+0.05*(z-1)^4").unwrap();
        let j = numeric_jet(&e, one(), 3, &StolzProbe::at_one()).unwrap();
        let expected = [1.0, 0.5, 0.0, 0.0];
        for (k, x) in expected.iter().enumerate() {
            assert!((j.coeff(k) - x).norm() < 1e-6, "a_{k} = {}", j.coeff(k));
        }
        assert!(j.residual_ok);
    }

    #[test]
    fn pure_cubic() {
        let e = parse_map("0.05*(z-1)^3").unwrap();
        let j = numeric_jet(&e, one(), 3, &StolzProbe::at_one()).unwrap();
        assert!((j.derivative(3) - 0.3).norm() < 1e-6);
        assert!(j.coeff(0).norm() < 1e-9 && j.coeff(1).norm() < 1e-8);
        assert!(j.residual_ok);
    }

    #[test]
    fn identity() {
        let j = numeric_jet(&MapExpr::Var, one(), 3, &StolzProbe::at_one()).unwrap();
        assert!((j.coeff(1) - 1.0).norm() < 1e-9);
        assert!(j.residual_ok);
    }

    #[test]
    fn black_box_input() {
        let m = Mobius::from_real(1.0, 0.3, 0.3, 1.0);
        let f = |z: Complex| -> Result<Complex, EvalError> { Ok(m.apply(z)) };
        let j = numeric_jet(&f, one(), 3, &StolzProbe::at_one()).unwrap();
        let exact = boundary_jet(&MapExpr::Mobius(m), one(), 3).unwrap();
        assert!(j.distance(&exact) < 1e-7, "{j:?}");
        assert!(j.residual_ok);
    }

    #[test]
    fn non_smooth_remainder_fails_residual_test() {
        // (1 − z)^{5/2} has no cubic jet with an o(h³) remainder.
        let f = |z: Complex| -> Result<Complex, EvalError> { Ok((1.0 - z).powf(2.5)) };
        let j = numeric_jet(&f, one(), 3, &StolzProbe::at_one()).unwrap();
        assert!(!j.residual_ok);
    }

    #[test]
    fn fallback_chain_uses_laurent_expansion() {
        let e = parse_map("(1-z)*cayley(z)").unwrap();
        let j = jet(&e, one(), 3).unwrap();
        assert!((j.coeff(0) - 2.0).norm() < 1e-12 && (j.coeff(1) - 1.0).norm() < 1e-12);
    }
}
