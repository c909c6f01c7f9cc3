//! Between the two centres the wave is an exact superposition of free plane
//! waves. Fit `C e^{ik phi} + D e^{-ik phi}` to the numerical solution and
//! compare with the exact interior coefficients.

use nhscatter::{closed_form, interior_plane_wave_fit, solve_numeric, EnergyAngle, TwoCenterSpec};

fn main() -> nhscatter::Result<()> {
    let phi = EnergyAngle::new(1.2)?;
    for gap in [1, 4, 12] {
        let spec = TwoCenterSpec::new(0.5, gap)?;
        let wave = solve_numeric(&spec, phi)?.wave;
        let fit = interior_plane_wave_fit(&wave, gap, phi)?;
        let (_, parts) = closed_form(&spec, phi)?;
        let (c, d) = (parts.interior_c.unwrap(), parts.interior_d.unwrap());
        println!(
            "N = {gap:2}: C = {:.12}, D = {:.12}, fit residual {:.1e}, |dC| {:.1e}, |dD| {:.1e}",
            fit.c,
            fit.d,
            fit.residual,
            (fit.c - c).norm(),
            (fit.d - d).norm()
        );
    }
    Ok(())
}
