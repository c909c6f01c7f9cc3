use std::f64::consts::PI;

use nhscatter::{
    asymptotic_left, asymptotic_right, energy_from_phi, phi_from_energy, solve_numeric,
    EnergyAngle, Scatterer, TwoCenterSpec,
};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn angle_energy_round_trip(p in 0.01f64..3.0, h in 0.01f64..5.0) {
        let e = energy_from_phi(EnergyAngle::new(p).unwrap(), h).unwrap();
        let back = phi_from_energy(e, h).unwrap().value();
        prop_assert!((back - p).abs() <= 1e-14, "{p} -> {back}");
    }

    #[test]
    fn round_trip_within_conditioning(p in 0.01f64..(PI - 0.01)) {
        // near the band top phi(E) is ill-conditioned by tan(phi/2)
        let e = energy_from_phi(EnergyAngle::new(p).unwrap(), 1.0).unwrap();
        let back = phi_from_energy(e, 1.0).unwrap().value();
        let bound = 4.0 * f64::EPSILON * (p / 2.0).tan().max(1.0);
        prop_assert!((back - p).abs() <= bound);
    }

    #[test]
    fn outgoing_wave_has_amplitude_t(m in 1i64..10_000, p in 0.01f64..3.13, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let t = Complex64::new(re, im);
        let psi = asymptotic_right(m, EnergyAngle::new(p).unwrap(), t);
        prop_assert!((psi.norm() - t.norm()).abs() <= 1e-14 * t.norm().max(1.0));
    }

    #[test]
    fn incoming_wave_alone_has_unit_modulus(m in 1i64..10_000, p in 0.01f64..3.13) {
        let psi = asymptotic_left(m, EnergyAngle::new(p).unwrap(), Complex64::new(0.0, 0.0));
        prop_assert!((psi.norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn numeric_wave_matches_asymptotics(g in -0.9f64..0.9, n in -1i64..8, p in 0.05f64..3.09) {
        let spec = TwoCenterSpec::new(g, n).unwrap();
        let phi = EnergyAngle::new(p).unwrap();
        let sol = solve_numeric(&spec, phi).unwrap();
        let w = sol.wave.window();
        let (lo, hi) = (w.min_site(), w.max_site());
        let (r, t) = (sol.amplitudes.reflection, sol.amplitudes.transmission);
        prop_assert!((sol.wave.at(lo).unwrap() - asymptotic_left(-lo, phi, r)).norm() < 1e-12);
        prop_assert!((sol.wave.at(hi).unwrap() - asymptotic_right(hi, phi, t)).norm() < 1e-12);
    }
}

#[test]
fn merged_blocks_rows() {
    // N = -1: the two blocks overlap on the origin
    let g = 0.35;
    let spec = TwoCenterSpec::new(g, -1).unwrap();
    let h = spec.hamiltonian(spec.natural_window()).unwrap();
    let row = |k: i64| (h.get(k, k - 1).re, h.get(k, k).re, h.get(k, k + 1).re);
    assert_eq!(row(-2), (-1.0, 2.0, -1.0 - g));
    assert_eq!(row(-1), (-1.0 + g, 2.0, -1.0 + g));
    assert_eq!(row(0), (-1.0 - g, 2.0, -1.0 - g));
    assert_eq!(row(1), (-1.0 + g, 2.0, -1.0 + g));
    assert_eq!(row(2), (-1.0 - g, 2.0, -1.0));
    assert_eq!(row(3), (-1.0, 2.0, -1.0));
    assert_eq!(row(-3), (-1.0, 2.0, -1.0));
}

#[test]
fn energy_scale_examples() {
    let e = energy_from_phi(EnergyAngle::new(PI / 2.0).unwrap(), 0.5).unwrap();
    assert!((e - 8.0).abs() < 1e-13);
    assert!(phi_from_energy(-1.0, 1.0).is_err());
    assert!(phi_from_energy(4.0, 1.0).is_err());
}
