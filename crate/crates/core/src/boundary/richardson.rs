//! Richardson extrapolation on geometric ladders `h_j = 2^{-j}`.

use crate::Complex;

/// Order of the extrapolation table.
pub const ORDER: usize = 3;

/// Incremental Richardson table for samples at `h, h/2, h/4, …` of a
/// quantity with an expansion in integer powers of `h`.
#[derive(Debug, Clone, Default)]
pub struct Richardson {
    rows: Vec<Vec<Complex>>,
    order: usize,
}

impl Richardson {
    pub fn new(order: usize) -> Self {
        Self { rows: Vec::new(), order }
    }

    /// Appends the next sample and returns the highest-order extrapolant
    /// available for this row.
    pub fn push(&mut self, v: Complex) -> Complex {
        let mut row = vec![v];
        if let Some(prev) = self.rows.last() {
            let depth = self.order.min(prev.len());
            for k in 1..=depth {
                let factor = f64::powi(2.0, k as i32) - 1.0;
                let r = row[k - 1] + (row[k - 1] - prev[k - 1]) / factor;
                row.push(r);
            }
        }
        let out = *row.last().expect("row is nonempty");
        self.rows.push(row);
        out
    }

    /// True once the latest row reaches full order.
    pub fn saturated(&self) -> bool {
        self.rows.last().is_some_and(|r| r.len() == self.order + 1)
    }
}

/// Result of extrapolating a ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: Complex,
    /// Last difference between consecutive full-order extrapolants.
    pub tail: f64,
    pub converged: bool,
    /// Ladder index at which the estimate was taken.
    pub rung: u32,
}

/// Walks the ladder `j = j_min..=j_max` and stops once two consecutive
/// differences of full-order extrapolants fall below `tol·max(1, |E|)`.
pub fn extrapolate<E>(
    mut sample: impl FnMut(u32) -> Result<Complex, E>,
    j_min: u32,
    j_max: u32,
    tol: f64,
) -> Result<Extrapolation, E> {
    let mut table = Richardson::new(ORDER);
    let mut last: Option<Complex> = None;
    let mut small_diffs = 0;
    let mut best = Extrapolation { value: Complex::default(), tail: f64::INFINITY, converged: false, rung: j_min };
    for j in j_min..=j_max {
        let e = table.push(sample(j)?);
        if !table.saturated() {
            continue;
        }
        if !(e.re.is_finite() && e.im.is_finite()) {
            best.converged = false;
            return Ok(best);
        }
        if let Some(prev) = last {
            let diff = (e - prev).norm();
            best = Extrapolation { value: e, tail: diff, converged: false, rung: j };
            if diff <= tol * e.norm().max(1.0) {
                small_diffs += 1;
                if small_diffs >= 2 {
                    best.converged = true;
                    return Ok(best);
                }
            } else {
                small_diffs = 0;
            }
        }
        last = Some(e);
    }
    Ok(best)
}

/// Noise-aware remainder ratios `ρ_j = max(|γ_j| − noise_j, 0) / h_j^power`.
pub fn remainder_ratios(gamma: &[f64], noise: &[f64], h: &[f64], power: i32) -> Vec<f64> {
    gamma
        .iter()
        .zip(noise)
        .zip(h)
        .map(|((g, n), h)| (g - n).max(0.0) / h.powi(power))
        .collect()
}

/// Whether the ratios are non-increasing and the last one is below `bound`.
pub fn decays_below(ratios: &[f64], bound: f64) -> bool {
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
    monotone && ratios.last().is_some_and(|&r| r < bound)
}
