//! Boundary rigidity toolkit for holomorphic self-maps and semigroups of the
//! unit disk.

pub mod boundary;
pub mod dynamics;
pub mod geometry;
pub mod holomap;
pub mod rigidity;
pub mod sampling;

pub use num_complex;

pub type Complex = num_complex::Complex64;
