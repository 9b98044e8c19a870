//! Truncated Laurent series in `u = z − τ`, used to expand maps whose tree
//! passes through a removable pole at `τ`.

use super::expr::MapExpr;
use crate::Complex;

/// `Σ c[k] u^(val + k)` with every exponent below `prec` known.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Laurent {
    val: i32,
    prec: i32,
    c: Vec<Complex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SeriesError {
    /// Every known coefficient cancelled, so a quotient is undetermined.
    Indeterminate,
}

const CANCEL: f64 = 1e-12;

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

impl Laurent {
    fn constant(v: Complex, n: usize) -> Self {
        let mut c = vec![zero(); n];
        c[0] = v;
        Self { val: 0, prec: n as i32, c }.normalized(&[])
    }

    fn coeff(&self, e: i32) -> Complex {
        if e < self.val || e >= self.prec {
            zero()
        } else {
            self.c[(e - self.val) as usize]
        }
    }

    /// Drops leading coefficients that are zero or pure cancellation noise
    /// relative to `scale` (per-exponent magnitude of the operands).
    fn normalized(mut self, scale: &[f64]) -> Self {
        let mut drop = 0;
        while drop < self.c.len() {
            let s = scale.get(drop).copied().unwrap_or(0.0);
            let x = self.c[drop].norm();
            if x == 0.0 || x <= CANCEL * s {
                drop += 1;
            } else {
                break;
            }
        }
        self.c.drain(..drop);
        self.val += drop as i32;
        self
    }

    fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    fn add_scaled(&self, o: &Self, sign: f64) -> Self {
        let val = self.val.min(o.val);
        let prec = self.prec.min(o.prec);
        let n = (prec - val).max(0) as usize;
        let mut c = Vec::with_capacity(n);
        let mut scale = Vec::with_capacity(n);
        for k in 0..n as i32 {
            let (x, y) = (self.coeff(val + k), o.coeff(val + k));
            c.push(x + sign * y);
            scale.push(x.norm() + y.norm());
        }
        Self { val, prec, c }.normalized(&scale)
    }

    fn mul(&self, o: &Self) -> Self {
        let val = self.val + o.val;
        let prec = (self.prec + o.val).min(o.prec + self.val);
        let n = (prec - val).max(0) as usize;
        let mut c = vec![zero(); n];
        for (i, ci) in c.iter_mut().enumerate() {
            for j in 0..=i {
                if j < self.c.len() && i - j < o.c.len() {
                    *ci += self.c[j] * o.c[i - j];
                }
            }
        }
        Self { val, prec, c }
    }

    fn recip(&self) -> Result<Self, SeriesError> {
        if self.is_empty() {
            return Err(SeriesError::Indeterminate);
        }
        let n = self.c.len();
        let b0 = self.c[0];
        let mut r = vec![zero(); n];
        r[0] = b0.inv();
        for i in 1..n {
            let mut s = zero();
            for j in 1..=i {
                s += self.c[j] * r[i - j];
            }
            r[i] = -s / b0;
        }
        Ok(Self { val: -self.val, prec: -self.val + n as i32, c: r })
    }

    fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&o.recip()?))
    }

    fn powu(&self, n: u32, len: usize) -> Self {
        let mut acc = Laurent::constant(Complex::new(1.0, 0.0), len);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

fn expand(e: &MapExpr, var: &Laurent, len: usize) -> Result<Laurent, SeriesError> {
    use MapExpr as E;
    let one = || Laurent::constant(Complex::new(1.0, 0.0), len);
    Ok(match e {
        E::Var => var.clone(),
        E::Const(c) => Laurent::constant(*c, len),
        E::Add(a, b) => expand(a, var, len)?.add_scaled(&expand(b, var, len)?, 1.0),
        E::Sub(a, b) => expand(a, var, len)?.add_scaled(&expand(b, var, len)?, -1.0),
        E::Mul(a, b) => expand(a, var, len)?.mul(&expand(b, var, len)?),
        E::Div(a, b) => expand(a, var, len)?.div(&expand(b, var, len)?)?,
        E::Pow(a, n) => expand(a, var, len)?.powu(*n, len),
        E::Compose(outer, inner) => {
            let s = expand(inner, var, len)?;
            expand(outer, &s, len)?
        }
        E::Cayley(u) => {
            let s = expand(u, var, len)?;
            one().add_scaled(&s, 1.0).div(&one().add_scaled(&s, -1.0))?
        }
        E::CayleyInv(u) => {
            let s = expand(u, var, len)?;
            s.add_scaled(&one(), -1.0).div(&s.add_scaled(&one(), 1.0))?
        }
        E::Mobius(m) => {
            let num = Laurent::constant(m.a, len).mul(var).add_scaled(&Laurent::constant(m.b, len), 1.0);
            let den = Laurent::constant(m.c, len).mul(var).add_scaled(&Laurent::constant(m.d, len), 1.0);
            num.div(&den)?
        }
    })
}

/// Outcome of a Laurent expansion at `τ`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Expansion {
    /// Taylor coefficients `a_0..a_m`.
    Regular(Vec<Complex>),
    /// Genuine pole of the given order.
    Pole(u32),
    /// Too much cancellation to resolve the requested order.
    Unresolved,
}

/// Expands `e` around `τ` and returns the first `m + 1` Taylor coefficients.
pub(crate) fn taylor_at(e: &MapExpr, tau: Complex, m: usize) -> Expansion {
    let len = m + 10;
    let mut c = vec![zero(); len];
    c[0] = tau;
    if len > 1 {
        c[1] = Complex::new(1.0, 0.0);
    }
    let var = Laurent { val: 0, prec: len as i32, c }.normalized(&[]);
    match expand(e, &var, len) {
        Err(SeriesError::Indeterminate) => Expansion::Unresolved,
        Ok(s) => {
            if s.prec <= m as i32 {
                Expansion::Unresolved
            } else if s.val < 0 {
                Expansion::Pole((-s.val) as u32)
            } else {
                Expansion::Regular((0..=m as i32).map(|k| s.coeff(k)).collect())
            }
        }
    }
}
