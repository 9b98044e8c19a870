use super::expr::MapExpr;

fn two() -> MapExpr {
    MapExpr::real(2.0)
}

/// Symbolic derivative with respect to `z`.
pub fn differentiate(e: &MapExpr) -> MapExpr {
    use MapExpr as E;
    match e {
        E::Var => E::real(1.0),
        E::Const(_) => E::real(0.0),
        E::Add(a, b) => E::add(differentiate(a), differentiate(b)),
        E::Sub(a, b) => E::sub(differentiate(a), differentiate(b)),
        E::Mul(a, b) => E::add(
            E::mul(differentiate(a), (**b).clone()),
            E::mul((**a).clone(), differentiate(b)),
        ),
        E::Div(a, b) => {
            let num = E::sub(
                E::mul(differentiate(a), (**b).clone()),
                E::mul((**a).clone(), differentiate(b)),
            );
            E::div(num, (**b).clone().pow(2))
        }
        E::Pow(a, n) => match n {
            0 => E::real(0.0),
            1 => differentiate(a),
            _ => {
                let lower = if *n == 2 { (**a).clone() } else { (**a).clone().pow(n - 1) };
                E::mul(E::mul(E::real(f64::from(*n)), lower), differentiate(a))
            }
        },
        E::Compose(outer, inner) => {
            let d_outer = differentiate(outer);
            let d_inner = differentiate(inner);
            let outer_at_inner = match d_outer {
                E::Const(_) => d_outer,
                other => E::Compose(Box::new(other), inner.clone()),
            };
            E::mul(outer_at_inner, d_inner)
        }
        E::Cayley(u) => {
            let den = E::sub(E::real(1.0), (**u).clone()).pow(2);
            E::div(E::mul(two(), differentiate(u)), den)
        }
        E::CayleyInv(u) => {
            let den = E::add(E::real(1.0), (**u).clone()).pow(2);
            E::div(E::mul(two(), differentiate(u)), den)
        }
        E::Mobius(m) => {
            let den = E::add(E::mul(E::Const(m.c), E::Var), E::Const(m.d));
            E::div(E::Const(m.det()), den.pow(2))
        }
    }
}

/// `k`-th derivative.
pub fn nth_derivative(e: &MapExpr, k: usize) -> MapExpr {
    let mut d = e.clone();
    for _ in 0..k {
        d = differentiate(&d);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::{parse_map, Mobius};
    use crate::sampling::vogel_disk;
    use crate::Complex;

    fn central(e: &MapExpr, z: Complex) -> Complex {
        let h = 1e-6;
        (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn derivative_of_identity_is_one() {
        assert_eq!(differentiate(&MapExpr::Var), MapExpr::real(1.0));
    }

    #[test]
    fn power_rule() {
        let e = parse_map("(z-1)^4").unwrap();
        let d = differentiate(&e);
        let z = Complex::new(0.2, -0.3);
        let expected = 4.0 * (z - 1.0).powu(3);
        assert!((d.eval(z).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn mobius_derivative_at_one() {
        let e = MapExpr::Mobius(Mobius::from_real(1.0, 0.3, 0.3, 1.0));
        let v = differentiate(&e).eval(Complex::new(1.0, 0.0)).unwrap();
        assert!((v.re - 0.538461538).abs() < 1e-9);
    }

    #[test]
    fn matches_central_difference_on_grid() {
        let corpus = [
            "0.5*(z+1)+0.05*(z-1)^4",
            "(z+0.3)/(1+0.3*z)",
            "compose((z+0.3)/(1+0.3*z),z^2)",
            "cayley(z/2)",
            "cayinv(cayley(0.5*z)+1)",
            "(z^3-2i*z)/(3+z)",
        ];
        for text in corpus {
            let e = parse_map(text).unwrap();
            let d = differentiate(&e);
            for z in vogel_disk(100, 0.9) {
                let exact = d.eval(z).unwrap();
                let approx = central(&e, z);
                assert!(
                    (exact - approx).norm() <= 1e-6 * exact.norm().max(1.0),
                    "{text} at {z}: {exact} vs {approx}"
                );
            }
        }
    }
}
