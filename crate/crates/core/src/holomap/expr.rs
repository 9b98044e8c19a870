use std::fmt;

use thiserror::Error;

use super::mobius::Mobius;
use crate::Complex;

/// Expression tree for a holomorphic function of the disk variable `z`.
///
/// Every node kind is rational, so each tree denotes a rational function.
/// `Compose(outer, inner)` is `outer(inner(z))`; `Mobius(m)` is `m(z)`.
#[derive(Debug, Clone, PartialEq)]
pub enum MapExpr {
    Var,
    Const(Complex),
    Add(Box<MapExpr>, Box<MapExpr>),
    Sub(Box<MapExpr>, Box<MapExpr>),
    Mul(Box<MapExpr>, Box<MapExpr>),
    Div(Box<MapExpr>, Box<MapExpr>),
    Pow(Box<MapExpr>, u32),
    Compose(Box<MapExpr>, Box<MapExpr>),
    Cayley(Box<MapExpr>),
    CayleyInv(Box<MapExpr>),
    Mobius(Mobius),
}

/// Largest exponent accepted by `Pow` nodes.
pub const MAX_POW: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("pole at {at}")]
    Pole { at: Complex },
    #[error("non-finite intermediate value at {at}")]
    NonFinite { at: Complex },
}

/// Anything that can be evaluated as a function on the disk.
pub trait Holomorphic {
    fn value(&self, z: Complex) -> Result<Complex, EvalError>;
}

impl Holomorphic for MapExpr {
    fn value(&self, z: Complex) -> Result<Complex, EvalError> {
        self.eval(z)
    }
}

impl<F> Holomorphic for F
where
    F: Fn(Complex) -> Result<Complex, EvalError>,
{
    fn value(&self, z: Complex) -> Result<Complex, EvalError> {
        self(z)
    }
}

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

fn finite(v: Complex, at: Complex) -> Result<Complex, EvalError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { at })
    }
}

fn divide(num: Complex, den: Complex, at: Complex) -> Result<Complex, EvalError> {
    if den == zero() {
        return Err(EvalError::Pole { at });
    }
    finite(num / den, at)
}

impl MapExpr {
    pub fn z() -> Self {
        MapExpr::Var
    }

    pub fn constant(c: impl Into<Complex>) -> Self {
        MapExpr::Const(c.into())
    }

    pub fn real(x: f64) -> Self {
        MapExpr::Const(Complex::new(x, 0.0))
    }

    pub fn mobius(m: Mobius) -> Self {
        MapExpr::Mobius(m)
    }

    pub fn pow(self, n: u32) -> Self {
        MapExpr::Pow(Box::new(self), n)
    }

    /// `self ∘ inner`
    pub fn compose(self, inner: MapExpr) -> Self {
        MapExpr::Compose(Box::new(self), Box::new(inner))
    }

    pub fn cayley(self) -> Self {
        MapExpr::Cayley(Box::new(self))
    }

    pub fn cayley_inv(self) -> Self {
        MapExpr::CayleyInv(Box::new(self))
    }

    pub fn as_const(&self) -> Option<Complex> {
        match self {
            MapExpr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(one())
    }

    /// Sum with trivial folding (`0 + e = e`, constant + constant).
    pub fn add(a: MapExpr, b: MapExpr) -> MapExpr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => MapExpr::Const(x + y),
            (Some(x), _) if x == zero() => b,
            (_, Some(y)) if y == zero() => a,
            _ => MapExpr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: MapExpr, b: MapExpr) -> MapExpr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => MapExpr::Const(x - y),
            (_, Some(y)) if y == zero() => a,
            _ => MapExpr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: MapExpr, b: MapExpr) -> MapExpr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => MapExpr::Const(x * y),
            (Some(x), _) if x == zero() => MapExpr::Const(zero()),
            (_, Some(y)) if y == zero() => MapExpr::Const(zero()),
            (Some(x), _) if x == one() => b,
            (_, Some(y)) if y == one() => a,
            _ => MapExpr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: MapExpr, b: MapExpr) -> MapExpr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != zero() => MapExpr::Const(x / y),
            (Some(x), _) if x == zero() => MapExpr::Const(zero()),
            (_, Some(y)) if y == one() => a,
            _ => MapExpr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: MapExpr) -> MapExpr {
        MapExpr::mul(MapExpr::real(-1.0), a)
    }

    pub fn scale(c: impl Into<Complex>, a: MapExpr) -> MapExpr {
        MapExpr::mul(MapExpr::Const(c.into()), a)
    }

    /// `(z − τ)^n` as a tree.
    pub fn shifted_power(tau: Complex, n: u32) -> MapExpr {
        let base = MapExpr::sub(MapExpr::Var, MapExpr::Const(tau));
        match n {
            0 => MapExpr::real(1.0),
            1 => base,
            _ => base.pow(n),
        }
    }

    /// Exact evaluation; fails on a pole or a non-finite intermediate.
    pub fn eval(&self, z: Complex) -> Result<Complex, EvalError> {
        let v = match self {
            MapExpr::Var => z,
            MapExpr::Const(c) => *c,
            MapExpr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            MapExpr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            MapExpr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            MapExpr::Div(a, b) => return divide(a.eval(z)?, b.eval(z)?, z),
            MapExpr::Pow(a, n) => a.eval(z)?.powu(*n),
            MapExpr::Compose(outer, inner) => return outer.eval(inner.eval(z)?),
            MapExpr::Cayley(a) => {
                let w = a.eval(z)?;
                return divide(one() + w, one() - w, z);
            }
            MapExpr::CayleyInv(a) => {
                let w = a.eval(z)?;
                return divide(w - one(), w + one(), z);
            }
            MapExpr::Mobius(m) => return divide(m.a * z + m.b, m.c * z + m.d, z),
        };
        finite(v, z)
    }

    /// Number of nodes, counting through compositions.
    pub fn size(&self) -> usize {
        match self {
            MapExpr::Var | MapExpr::Const(_) | MapExpr::Mobius(_) => 1,
            MapExpr::Add(a, b)
            | MapExpr::Sub(a, b)
            | MapExpr::Mul(a, b)
            | MapExpr::Div(a, b)
            | MapExpr::Compose(a, b) => 1 + a.size() + b.size(),
            MapExpr::Pow(a, _) | MapExpr::Cayley(a) | MapExpr::CayleyInv(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            MapExpr::Var | MapExpr::Const(_) | MapExpr::Mobius(_) => 1,
            MapExpr::Add(a, b)
            | MapExpr::Sub(a, b)
            | MapExpr::Mul(a, b)
            | MapExpr::Div(a, b)
            | MapExpr::Compose(a, b) => 1 + a.depth().max(b.depth()),
            MapExpr::Pow(a, _) | MapExpr::Cayley(a) | MapExpr::CayleyInv(a) => 1 + a.depth(),
        }
    }

    /// Replaces every `Var` by `inner`, i.e. builds `self ∘ inner` without a
    /// `Compose` node at the top.
    pub fn substitute(&self, inner: &MapExpr) -> MapExpr {
        match self {
            MapExpr::Var => inner.clone(),
            MapExpr::Const(c) => MapExpr::Const(*c),
            MapExpr::Add(a, b) => MapExpr::Add(Box::new(a.substitute(inner)), Box::new(b.substitute(inner))),
            MapExpr::Sub(a, b) => MapExpr::Sub(Box::new(a.substitute(inner)), Box::new(b.substitute(inner))),
            MapExpr::Mul(a, b) => MapExpr::Mul(Box::new(a.substitute(inner)), Box::new(b.substitute(inner))),
            MapExpr::Div(a, b) => MapExpr::Div(Box::new(a.substitute(inner)), Box::new(b.substitute(inner))),
            MapExpr::Pow(a, n) => MapExpr::Pow(Box::new(a.substitute(inner)), *n),
            MapExpr::Compose(outer, i) => MapExpr::Compose(outer.clone(), Box::new(i.substitute(inner))),
            MapExpr::Cayley(a) => MapExpr::Cayley(Box::new(a.substitute(inner))),
            MapExpr::CayleyInv(a) => MapExpr::CayleyInv(Box::new(a.substitute(inner))),
            MapExpr::Mobius(m) => {
                if *inner == MapExpr::Var {
                    MapExpr::Mobius(*m)
                } else {
                    MapExpr::Compose(Box::new(MapExpr::Mobius(*m)), Box::new(inner.clone()))
                }
            }
        }
    }
}

impl From<Mobius> for MapExpr {
    fn from(m: Mobius) -> Self {
        MapExpr::Mobius(m)
    }
}

// Printing. Precedence levels: 1 additive, 2 multiplicative, 3 power, 4 atom.

fn fmt_real(x: f64) -> String {
    let s = format!("{x}");
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

pub(crate) fn fmt_complex(c: Complex) -> String {
    if c.im == 0.0 {
        fmt_real(c.re)
    } else if c.re == 0.0 {
        format!("{}i", fmt_real(c.im))
    } else if c.im < 0.0 {
        format!("({}-{}i)", fmt_real(c.re), fmt_real(-c.im))
    } else {
        format!("({}+{}i)", fmt_real(c.re), fmt_real(c.im))
    }
}

fn const_prec(c: Complex) -> u8 {
    // A bare negative literal is only safe where a factor may start.
    let s = fmt_complex(c);
    if s.starts_with('-') {
        2
    } else {
        4
    }
}

fn prec(e: &MapExpr) -> u8 {
    match e {
        MapExpr::Add(..) | MapExpr::Sub(..) => 1,
        MapExpr::Mul(..) | MapExpr::Div(..) | MapExpr::Mobius(_) => 2,
        MapExpr::Pow(..) => 3,
        MapExpr::Const(c) => const_prec(*c),
        _ => 4,
    }
}

/// `re ± im·i` written as a sum of two constants would reparse as a single
/// complex literal once parenthesized; such sums need an inner guard.
fn looks_like_literal(a: &MapExpr, b: &MapExpr) -> bool {
    matches!((a, b), (MapExpr::Const(x), MapExpr::Const(y)) if x.im == 0.0 && y.re == 0.0 && y.im != 0.0)
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &MapExpr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "(")?;
        write_guarded(f, e)?;
        write!(f, ")")
    } else {
        write!(f, "{e}")
    }
}

fn write_guarded(f: &mut fmt::Formatter<'_>, e: &MapExpr) -> fmt::Result {
    match e {
        MapExpr::Add(a, b) if looks_like_literal(a, b) => write!(f, "({a})+{b}"),
        MapExpr::Sub(a, b) if looks_like_literal(a, b) => write!(f, "({a})-{b}"),
        _ => write!(f, "{e}"),
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Var => write!(f, "z"),
            MapExpr::Const(c) => write!(f, "{}", fmt_complex(*c)),
            MapExpr::Add(a, b) => {
                write_child(f, a, 1)?;
                write!(f, "+")?;
                write_child(f, b, 2)
            }
            MapExpr::Sub(a, b) => {
                write_child(f, a, 1)?;
                write!(f, "-")?;
                write_child(f, b, 2)
            }
            MapExpr::Mul(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "*")?;
                write_child(f, b, 3)
            }
            MapExpr::Div(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "/")?;
                write_child(f, b, 3)
            }
            MapExpr::Pow(a, n) => {
                write_child(f, a, 4)?;
                write!(f, "^{n}")
            }
            MapExpr::Compose(a, b) => write!(f, "compose({a},{b})"),
            MapExpr::Cayley(a) => write!(f, "cayley({a})"),
            MapExpr::CayleyInv(a) => write!(f, "cayinv({a})"),
            MapExpr::Mobius(m) => write!(
                f,
                "({}*z+{})/({}*z+{})",
                fmt_complex(m.a),
                fmt_complex(m.b),
                fmt_complex(m.c),
                fmt_complex(m.d)
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_evaluates_to_argument() {
        let z = Complex::new(0.0, 0.7);
        assert_eq!(MapExpr::Var.eval(z).unwrap(), z);
    }

    #[test]
    fn mobius_node_at_zero() {
        let e = MapExpr::Mobius(Mobius::from_real(1.0, 0.3, 0.3, 1.0));
        assert!((e.eval(Complex::new(0.0, 0.0)).unwrap() - Complex::new(0.3, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn cayley_pole_is_reported() {
        let e = MapExpr::Var.cayley();
        assert!(matches!(e.eval(Complex::new(1.0, 0.0)), Err(EvalError::Pole { .. })));
    }

    #[test]
    fn substitute_matches_compose() {
        let outer = MapExpr::add(MapExpr::Var.pow(2), MapExpr::real(0.5));
        let inner = MapExpr::scale(0.5, MapExpr::Var);
        let z = Complex::new(0.2, -0.3);
        let a = outer.clone().compose(inner.clone()).eval(z).unwrap();
        let b = outer.substitute(&inner).eval(z).unwrap();
        assert!((a - b).norm() < 1e-16);
    }
}
