use thiserror::Error;

use super::diff::differentiate;
use super::expr::{EvalError, MapExpr};
use super::series::{taylor_at, Expansion};
use crate::Complex;

/// Boundary Taylor data `a_0..a_m` at a unimodular point, with
/// `a_k = g^(k)(τ)/k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryJet {
    pub tau: Complex,
    pub order: usize,
    pub coeffs: Vec<Complex>,
    /// Whether the remainder was verified to vanish faster than `(z − τ)^m`.
    pub residual_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("base point {0} is not on the unit circle")]
    NotUnimodular(Complex),
    #[error("expression has a pole at {0}")]
    PoleAtTau(Complex),
    #[error("expansion at {0} lost all precision to cancellation")]
    Unresolved(Complex),
}

impl BoundaryJet {
    pub fn new(tau: Complex, coeffs: Vec<Complex>, residual_ok: bool) -> Self {
        Self { tau, order: coeffs.len().saturating_sub(1), coeffs, residual_ok }
    }

    /// `a_k`, zero beyond the order.
    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `g^(k)(τ) = k!·a_k`.
    pub fn derivative(&self, k: usize) -> Complex {
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        self.coeff(k) * fact
    }

    /// Largest coefficientwise distance to `other`.
    pub fn distance(&self, other: &BoundaryJet) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn check_unimodular(tau: Complex) -> Result<(), JetError> {
    if (tau.norm() - 1.0).abs() > 1e-12 {
        Err(JetError::NotUnimodular(tau))
    } else {
        Ok(())
    }
}

/// Exact jet of order `m` by repeated symbolic differentiation.
pub fn boundary_jet(expr: &MapExpr, tau: Complex, m: usize) -> Result<BoundaryJet, JetError> {
    check_unimodular(tau)?;
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut d = expr.clone();
    let mut fact = 1.0;
    for k in 0..=m {
        if k > 0 {
            d = differentiate(&d);
            fact *= k as f64;
        }
        let v = d.eval(tau).map_err(|e| match e {
            EvalError::Pole { .. } | EvalError::NonFinite { .. } => JetError::PoleAtTau(tau),
        })?;
        coeffs.push(v / fact);
    }
    Ok(BoundaryJet::new(tau, coeffs, true))
}

/// Jet via truncated Laurent expansion; resolves removable poles at `τ`
/// such as `(1 − z)·C(z)`.
pub fn laurent_jet(expr: &MapExpr, tau: Complex, m: usize) -> Result<BoundaryJet, JetError> {
    check_unimodular(tau)?;
    match taylor_at(expr, tau, m) {
        Expansion::Regular(c) => Ok(BoundaryJet::new(tau, c, true)),
        Expansion::Pole(_) => Err(JetError::PoleAtTau(tau)),
        Expansion::Unresolved => Err(JetError::Unresolved(tau)),
    }
}

/// Symbolic jet, falling back to the Laurent expansion on a pole at `τ`.
pub fn exact_jet(expr: &MapExpr, tau: Complex, m: usize) -> Result<BoundaryJet, JetError> {
    match boundary_jet(expr, tau, m) {
        Err(JetError::PoleAtTau(_)) => laurent_jet(expr, tau, m),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::{parse_map, Mobius};

    fn one() -> Complex {
        Complex::new(1.0, 0.0)
    }

    #[test]
    fn identity_jet() {
        let j = boundary_jet(&MapExpr::Var, one(), 3).unwrap();
        assert_eq!(j.coeffs, vec![one(), one(), Complex::default(), Complex::default()]);
    }

    #[test]
    fn example_map_jet() {
        let e = parse_map("0.5*(z+1)+0.05*(z-1)^4").unwrap();
        let j = boundary_jet(&e, one(), 3).unwrap();
        let expected = [1.0, 0.5, 0.0, 0.0];
        for (k, x) in expected.iter().enumerate() {
            assert!((j.coeff(k) - x).norm() < 1e-15);
        }
    }

    #[test]
    fn mobius_second_derivative() {
        let e = MapExpr::Mobius(Mobius::from_real(1.0, 0.3, 0.3, 1.0));
        let j = boundary_jet(&e, one(), 2).unwrap();
        assert!((j.derivative(2).re + 0.248520710).abs() < 1e-9);
        assert!((j.coeff(2).re + 0.248520710 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn pole_at_tau_is_an_error_but_laurent_recovers() {
        let e = parse_map("(1-z)*cayley(z)").unwrap();
        assert_eq!(boundary_jet(&e, one(), 2), Err(JetError::PoleAtTau(one())));
        let j = exact_jet(&e, one(), 2).unwrap();
        assert!((j.coeff(0) - 2.0).norm() < 1e-14);
    }

    #[test]
    fn rejects_interior_base_point() {
        assert!(matches!(
            boundary_jet(&MapExpr::Var, Complex::new(0.5, 0.0), 1),
            Err(JetError::NotUnimodular(_))
        ));
    }
}
