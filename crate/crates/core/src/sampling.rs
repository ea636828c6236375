//! Seeded sample points that keep clear of the weight poles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::context::RootContext;
use crate::fz::SpectralPoint;
use crate::linalg::Complex64;

/// Angular half-width of the excluded arcs around the 2n-th roots of unity.
pub const POLE_ARC: f64 = 5e-4;

/// Radii used for transfer-matrix sampling.
pub const RADII: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: ChaCha8Rng,
    n: usize,
}

impl PointSampler {
    pub fn new(ctx: &RootContext, seed: u64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n: ctx.n(),
        }
    }

    /// An angle at least [`POLE_ARC`] away from every multiple of `π/n`.
    pub fn angle(&mut self) -> f64 {
        let step = PI / self.n as f64;
        loop {
            let theta: f64 = self.rng.random_range(0.0..2.0 * PI);
            let off = theta.rem_euclid(step);
            if off > POLE_ARC && step - off > POLE_ARC {
                return theta;
            }
        }
    }

    pub fn unit(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle())
    }

    pub fn unit_point(&mut self) -> SpectralPoint {
        let (z1, z2) = (self.unit(), self.unit());
        SpectralPoint { z1, z2 }
    }

    pub fn point_on_radius(&mut self, radius: f64) -> SpectralPoint {
        let z1 = Complex64::from_polar(radius, self.angle());
        let z2 = Complex64::from_polar(radius, self.angle());
        SpectralPoint { z1, z2 }
    }

    /// Each component on a circle drawn from [`RADII`].
    pub fn point(&mut self) -> SpectralPoint {
        let r1 = RADII[self.rng.random_range(0..RADII.len())];
        let r2 = RADII[self.rng.random_range(0..RADII.len())];
        SpectralPoint {
            z1: Complex64::from_polar(r1, self.angle()),
            z2: Complex64::from_polar(r2, self.angle()),
        }
    }

    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }
}
