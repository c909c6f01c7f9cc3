//! Reflection and transmission amplitudes for a unit wave incident from the left.
//!
//! Two independent routes are provided: [`solve_numeric`] assembles the
//! matching conditions of an arbitrary finite-support Hamiltonian and solves
//! them by banded elimination, while the `closed_form_*` functions evaluate the
//! exact expressions available for the two-centre model.

mod closed_form;
mod continuum;
mod interior;
mod matching;

use num_complex::Complex64;

use crate::lattice::EnergyAngle;

pub use closed_form::{
    closed_form, closed_form_general, closed_form_n0, closed_form_nminus1, mobius,
    ClosedFormBreakdown, POLE_TOLERANCE, RESONANCE_GUARD,
};
pub use continuum::{continuum_probe, decay_exponent, halving_sequence, ContinuumProbe, ProbeRow};
pub use interior::{interior_plane_wave_fit, PlaneWaveFit};
pub use matching::{
    matching_residual, solve_hamiltonian, solve_numeric, MatchingSystem, NumericSolution,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub reflection: Complex64,
    pub transmission: Complex64,
    /// `| |R|^2 + |T|^2 - 1 |`
    pub unitarity_defect: f64,
    pub phi: EnergyAngle,
}

impl Amplitudes {
    pub fn new(reflection: Complex64, transmission: Complex64, phi: EnergyAngle) -> Self {
        Self {
            reflection,
            transmission,
            unitarity_defect: defect(reflection, transmission),
            phi,
        }
    }

    pub fn reflectance(&self) -> f64 {
        self.reflection.norm_sqr()
    }

    pub fn transmittance(&self) -> f64 {
        self.transmission.norm_sqr()
    }

    /// Largest componentwise distance to `other`.
    pub fn discrepancy(&self, other: &Amplitudes) -> f64 {
        (self.reflection - other.reflection)
            .norm()
            .max((self.transmission - other.transmission).norm())
    }
}

fn defect(r: Complex64, t: Complex64) -> f64 {
    (r.norm_sqr() + t.norm_sqr() - 1.0).abs()
}

/// `| |R|^2 + |T|^2 - 1 |`, recomputed from the amplitudes.
pub fn unitarity_defect(amp: &Amplitudes) -> f64 {
    defect(amp.reflection, amp.transmission)
}

/// Flux balance in the metric-weighted inner product:
/// `| |R|^2 + (theta_right / theta_left) |T|^2 - 1 |`.
///
/// Reduces to [`unitarity_defect`] when the metric is one on both sides.
pub fn weighted_flux_defect(amp: &Amplitudes, right_left_ratio: f64) -> f64 {
    (amp.reflectance() + right_left_ratio * amp.transmittance() - 1.0).abs()
}
