use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{EnergyAngle, WaveSample};

/// Least-squares fit `psi_k ~ C e^{ik phi} + D e^{-ik phi}` over `|k| <= N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveFit {
    pub c: Complex64,
    pub d: Complex64,
    /// Largest pointwise deviation of the fitted wave from the samples.
    pub residual: f64,
}

pub fn interior_plane_wave_fit(
    wave: &WaveSample,
    gap: i64,
    phi: EnergyAngle,
) -> Result<PlaneWaveFit> {
    if gap < 1 {
        return Err(Error::Domain(format!(
            "interior fit needs N >= 1, got {gap}"
        )));
    }
    if !wave.window().contains(gap) {
        return Err(Error::Window(format!(
            "sample of half width {} does not cover |k| <= {gap}",
            wave.window().half_width()
        )));
    }
    let sites: Vec<i64> = (-gap..=gap).collect();
    let design = DMatrix::from_fn(sites.len(), 2, |r, col| {
        phi.wave(if col == 0 { sites[r] } else { -sites[r] })
    });
    let samples = DVector::from_iterator(sites.len(), sites.iter().map(|&k| wave.at(k).unwrap()));
    let coeffs = design
        .clone()
        .svd(true, true)
        .solve(&samples, 1e-14)
        .map_err(|e| Error::Domain(e.to_string()))?;
    let residual = (&design * &coeffs - &samples)
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    Ok(PlaneWaveFit {
        c: coeffs[0],
        d: coeffs[1],
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SiteWindow;

    #[test]
    fn recovers_exact_plane_waves() {
        let phi = EnergyAngle::new(0.9).unwrap();
        let w = SiteWindow::unit(6).unwrap();
        let (c, d) = (Complex64::new(0.3, -1.2), Complex64::new(-0.7, 0.4));
        let values = w
            .sites()
            .map(|k| c * phi.wave(k) + d * phi.wave(-k))
            .collect();
        let fit = interior_plane_wave_fit(&WaveSample::new(w, values).unwrap(), 4, phi).unwrap();
        assert!((fit.c - c).norm() < 1e-13);
        assert!((fit.d - d).norm() < 1e-13);
        assert!(fit.residual < 1e-13);
    }

    #[test]
    fn detects_distortion() {
        let phi = EnergyAngle::new(0.9).unwrap();
        let w = SiteWindow::unit(4).unwrap();
        let mut values: Vec<Complex64> = w.sites().map(|k| phi.wave(k)).collect();
        values[4] += 0.1;
        let fit = interior_plane_wave_fit(&WaveSample::new(w, values).unwrap(), 3, phi).unwrap();
        assert!(fit.residual > 1e-2);
    }

    #[test]
    fn rejects_small_gap() {
        let phi = EnergyAngle::new(0.9).unwrap();
        let w = SiteWindow::unit(2).unwrap();
        let wave = WaveSample::new(w, vec![Complex64::new(1.0, 0.0); 5]).unwrap();
        assert!(matches!(
            interior_plane_wave_fit(&wave, 0, phi),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            interior_plane_wave_fit(&wave, 3, phi),
            Err(Error::Window(_))
        ));
    }
}
