//! Small-spacing behaviour of the merged (`N = -1`) scatterer at fixed momentum.
//!
//! At `phi = kappa h` the transmission and the wave at the origin both vanish
//! linearly in `h`: the scatterer turns into a Dirichlet wall.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::EnergyAngle;
use crate::potential::TwoCenterSpec;

use super::{closed_form_nminus1, solve_numeric};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub h: f64,
    pub phi: f64,
    /// `|T|` from the closed form.
    pub transmission_abs: f64,
    pub reflection_abs: f64,
    /// `|psi_0|` from the numerical solve.
    pub psi0_abs: f64,
    /// Closed form versus numerical solve, componentwise.
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumProbe {
    pub g: f64,
    pub kappa: f64,
    pub rows: Vec<ProbeRow>,
    /// Fitted `p` in `|T| ~ h^p`.
    pub transmission_exponent: f64,
    /// Fitted `p` in `|psi_0| ~ h^p`.
    pub psi0_exponent: f64,
}

/// `h0, h0/2, ..., h0/2^halvings`.
pub fn halving_sequence(h0: f64, halvings: u32) -> Vec<f64> {
    (0..=halvings).map(|j| h0 / 2f64.powi(j as i32)).collect()
}

/// Least-squares slope of `ln(values)` against `ln(h)`.
pub fn decay_exponent(hs: &[f64], values: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = hs
        .iter()
        .zip(values)
        .map(|(h, v)| (h.ln(), v.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn continuum_probe(g: f64, kappa: f64, hs: &[f64]) -> Result<ContinuumProbe> {
    let spec = TwoCenterSpec::new(g, -1)?;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::Domain(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    if hs.len() < 2 {
        return Err(Error::Domain("need at least two spacings".into()));
    }
    let decreasing = hs.windows(2).all(|w| w[1] < w[0]);
    if !decreasing || hs.iter().any(|&h| h.is_nan() || h <= 0.0) {
        return Err(Error::Domain(
            "spacings must be positive and strictly decreasing".into(),
        ));
    }
    if hs[0] * kappa >= PI {
        return Err(Error::Domain(format!(
            "kappa h = {} leaves the band",
            hs[0] * kappa
        )));
    }

    let rows = hs
        .iter()
        .map(|&h| {
            let phi = EnergyAngle::new(kappa * h)?;
            let (closed, _) = closed_form_nminus1(g, phi)?;
            let numeric = solve_numeric(&spec, phi)?;
            Ok(ProbeRow {
                h,
                phi: phi.value(),
                transmission_abs: closed.transmission.norm(),
                reflection_abs: closed.reflection.norm(),
                psi0_abs: numeric
                    .wave
                    .at(0)
                    .expect("origin is in every window")
                    .norm(),
                discrepancy: closed.discrepancy(&numeric.amplitudes),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let t: Vec<f64> = rows.iter().map(|r| r.transmission_abs).collect();
    let psi0: Vec<f64> = rows.iter().map(|r| r.psi0_abs).collect();
    Ok(ContinuumProbe {
        g,
        kappa,
        transmission_exponent: decay_exponent(hs, &t),
        psi0_exponent: decay_exponent(hs, &psi0),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halving_ratio_is_one_half() {
        let probe = continuum_probe(0.5, 1.0, &[0.1, 0.05, 0.025]).unwrap();
        for pair in probe.rows.windows(2) {
            let rt = pair[1].transmission_abs / pair[0].transmission_abs;
            let rp = pair[1].psi0_abs / pair[0].psi0_abs;
            assert!((0.4..=0.6).contains(&rt), "{rt}");
            assert!((0.4..=0.6).contains(&rp), "{rp}");
            assert!(pair[0].discrepancy < 1e-10);
        }
    }

    #[test]
    fn free_model_stays_transparent() {
        let probe = continuum_probe(0.0, 1.3, &halving_sequence(0.2, 4)).unwrap();
        for row in &probe.rows {
            assert!((row.transmission_abs - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn exact_power_law_slope() {
        let hs = halving_sequence(1.0, 5);
        let v: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        assert!((decay_exponent(&hs, &v) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(continuum_probe(0.5, 1.0, &[0.1]).is_err());
        assert!(continuum_probe(0.5, 1.0, &[0.1, 0.2]).is_err());
        assert!(continuum_probe(0.5, -1.0, &[0.2, 0.1]).is_err());
        assert!(continuum_probe(0.5, 40.0, &[0.2, 0.1]).is_err());
        assert!(continuum_probe(1.5, 1.0, &[0.2, 0.1]).is_err());
    }
}
