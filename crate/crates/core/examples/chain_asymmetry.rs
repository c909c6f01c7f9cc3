//! A chain of antisymmetric couplings. Its metric saturates to different
//! constants on the two sides, so flux balance only holds once the
//! transmitted flux is weighted by their ratio.

use nhscatter::{
    asymmetry_ratio, chain_metric, solve_numeric, weighted_flux_defect, ChainSpec, EnergyAngle,
    Scatterer, SiteWindow,
};

fn main() -> nhscatter::Result<()> {
    let spec = ChainSpec::new(vec![0.5, 0.3, -0.2])?;
    let theta = chain_metric(&spec, SiteWindow::unit(6)?)?;

    println!("site  label  theta");
    for (k, t) in theta.window().sites().zip(theta.entries()) {
        println!("{k:+4}  {:+5}  {t:.6}", ChainSpec::label(k));
    }
    println!("theta_left / theta_right = {:.6}", asymmetry_ratio(&spec));

    let ratio = spec.metric(spec.natural_window())?.right_left_ratio();
    for phi in [0.4, 1.2, 2.5] {
        let a = solve_numeric(&spec, EnergyAngle::new(phi)?)?.amplitudes;
        println!(
            "phi = {phi}: |R|^2 + |T|^2 = {:.6}, weighted defect = {:.1e}",
            a.reflectance() + a.transmittance(),
            weighted_flux_defect(&a, ratio)
        );
    }
    Ok(())
}
