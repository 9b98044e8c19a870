//! Deterministic point sets in the disk and on circles.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Complex;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sunflower grid of `n` points filling the disk of radius `rmax`.
pub fn vogel_disk(n: usize, rmax: f64) -> Vec<Complex> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let r = rmax * ((k as f64 + 0.5) / n as f64).sqrt();
            Complex::from_polar(r, k as f64 * golden)
        })
        .collect()
}

pub fn uniform_disk_point(rng: &mut ChaCha8Rng, rmax: f64) -> Complex {
    let r = rmax * rng.gen::<f64>().sqrt();
    Complex::from_polar(r, rng.gen_range(0.0..TAU))
}

pub fn uniform_disk(rng: &mut ChaCha8Rng, n: usize, rmax: f64) -> Vec<Complex> {
    (0..n).map(|_| uniform_disk_point(rng, rmax)).collect()
}

/// `n` equally spaced points on the circle `|z − c| = r`, starting at angle `phase`.
pub fn circle(c: Complex, r: f64, n: usize, phase: f64) -> Vec<Complex> {
    (0..n)
        .map(|j| c + Complex::from_polar(r, phase + TAU * j as f64 / n as f64))
        .collect()
}

/// Points on the unit circle at `e^{iθ}` excluding the arc of total width
/// `gap` centred on `1`.
pub fn unit_circle_excluding_one(n: usize, gap: f64) -> Vec<Complex> {
    let half = gap / 2.0;
    (0..n)
        .map(|j| {
            let t = half + (TAU - gap) * (j as f64 + 0.5) / n as f64;
            Complex::from_polar(1.0, t)
        })
        .collect()
}

/// The standard validation grid: 200 interior points plus 512 points at
/// radius `1 − 1e-3`.
pub fn validation_grid() -> Vec<Complex> {
    let mut pts = vogel_disk(200, 0.99);
    pts.extend(circle(Complex::default(), 1.0 - 1e-3, 512, PI / 512.0));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_stay_inside() {
        assert!(vogel_disk(2000, 0.999).iter().all(|z| z.norm() < 0.999 + 1e-15));
        let mut rng = seeded_rng(3);
        assert!(uniform_disk(&mut rng, 500, 0.95).iter().all(|z| z.norm() <= 0.95));
        assert!(validation_grid().iter().all(|z| z.norm() < 1.0));
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        let a = uniform_disk(&mut seeded_rng(9), 5, 1.0);
        let b = uniform_disk(&mut seeded_rng(9), 5, 1.0);
        assert_eq!(a, b);
    }

    #[test]
    fn excluded_arc_is_respected() {
        for z in unit_circle_excluding_one(4096, 1e-3) {
            assert!(z.arg().abs() >= 5e-4 - 1e-15);
        }
    }
}
