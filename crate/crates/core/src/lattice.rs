//! Sites, spacing and the Bloch-angle parametrisation of lattice energies.
//!
//! All matching algebra runs in the dimensionless convention where the
//! Hamiltonian has been multiplied by `h^2`; the spacing `h` only enters when
//! converting between physical energies and angles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bloch angle `phi` in the open interval `(0, pi)`.
///
/// Plane waves on the lattice are `exp(+-i k phi)`; the band edges `0` and `pi`
/// are rejected because the two waves coincide there.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EnergyAngle(f64);

impl EnergyAngle {
    pub fn new(phi: f64) -> Result<Self> {
        if phi.is_finite() && phi > 0.0 && phi < PI {
            Ok(Self(phi))
        } else {
            Err(Error::BandEdge(phi))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `2 cos phi`, the diagonal of `H - E` in lattice units.
    #[inline]
    pub fn two_cos(self) -> f64 {
        2.0 * self.0.cos()
    }

    /// `exp(i m phi)`.
    #[inline]
    pub fn wave(self, m: i64) -> Complex64 {
        Complex64::from_polar(1.0, m as f64 * self.0)
    }
}

impl TryFrom<f64> for EnergyAngle {
    type Error = Error;

    fn try_from(phi: f64) -> Result<Self> {
        Self::new(phi)
    }
}

/// Symmetric window of integer sites `[-half_width, half_width]` at spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteWindow {
    half_width: usize,
    spacing: f64,
}

impl SiteWindow {
    pub fn new(half_width: usize, spacing: f64) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::Window("half width must be at least 1".into()));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::Spacing(spacing));
        }
        Ok(Self {
            half_width,
            spacing,
        })
    }

    /// Unit-spacing window; most of the algebra never looks at `h`.
    pub fn unit(half_width: usize) -> Result<Self> {
        Self::new(half_width, 1.0)
    }

    #[inline]
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of sites, `2 M + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        2 * self.half_width + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn min_site(&self) -> i64 {
        -(self.half_width as i64)
    }

    #[inline]
    pub fn max_site(&self) -> i64 {
        self.half_width as i64
    }

    #[inline]
    pub fn contains(&self, site: i64) -> bool {
        site.unsigned_abs() as usize <= self.half_width
    }

    /// Storage index of `site`, if it lies in the window.
    #[inline]
    pub fn index(&self, site: i64) -> Option<usize> {
        self.contains(site)
            .then(|| (site + self.half_width as i64) as usize)
    }

    #[inline]
    pub fn site(&self, index: usize) -> i64 {
        index as i64 - self.half_width as i64
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.min_site()..=self.max_site()
    }

    /// Coordinate `x_k = k h`.
    #[inline]
    pub fn coordinate(&self, site: i64) -> f64 {
        site as f64 * self.spacing
    }

    /// A site is interior when both of its neighbours are inside the window.
    #[inline]
    pub fn is_interior(&self, site: i64) -> bool {
        (site.unsigned_abs() as usize) < self.half_width
    }
}

/// Sampled wave function `psi_k` over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSample {
    window: SiteWindow,
    values: Vec<Complex64>,
}

impl WaveSample {
    pub fn new(window: SiteWindow, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::Window(format!(
                "wave sample has {} values, window holds {}",
                values.len(),
                window.len()
            )));
        }
        Ok(Self { window, values })
    }

    pub fn window(&self) -> &SiteWindow {
        &self.window
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, site: i64) -> Option<Complex64> {
        self.window.index(site).map(|i| self.values[i])
    }
}

/// Lattice energy `E = (2 - 2 cos phi) / h^2`, evaluated as `4 sin^2(phi/2) / h^2`.
pub fn energy_from_phi(phi: EnergyAngle, h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Spacing(h));
    }
    let s = (0.5 * phi.value()).sin();
    Ok(4.0 * s * s / (h * h))
}

/// Inverse of [`energy_from_phi`] for energies inside the band `0 < E h^2 < 4`.
pub fn phi_from_energy(energy: f64, h: f64) -> Result<EnergyAngle> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Spacing(h));
    }
    let x = energy * h * h;
    if !(x > 0.0 && x < 4.0) {
        return Err(Error::Band { energy, spacing: h });
    }
    // half-angle form keeps full precision at both band edges
    EnergyAngle::new(2.0 * x.sqrt().atan2((4.0 - x).sqrt()))
}

/// Left asymptote `U_{-m} = exp(-i m phi) + R exp(i m phi)`.
pub fn asymptotic_left(m: i64, phi: EnergyAngle, reflection: Complex64) -> Complex64 {
    phi.wave(-m) + reflection * phi.wave(m)
}

/// Right asymptote `L_m = T exp(i m phi)`.
pub fn asymptotic_right(m: i64, phi: EnergyAngle, transmission: Complex64) -> Complex64 {
    transmission * phi.wave(m)
}
