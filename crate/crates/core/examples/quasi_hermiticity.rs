//! The two-centre Hamiltonian is not symmetric, but a diagonal metric that
//! differs from one only at the two centres makes it self-adjoint.

use nhscatter::{quasi_hermiticity_residual, Scatterer, TwoCenterSpec};

fn main() -> nhscatter::Result<()> {
    for g in [0.3, -0.3, 0.9] {
        let spec = TwoCenterSpec::new(g, 1)?;
        let window = spec.natural_window();
        let h = spec.hamiltonian(window)?;
        let theta = spec.metric(window)?;

        let asym = h.max_abs_diff(&h.transpose())?;
        let residual = quasi_hermiticity_residual(&h, &theta)?;
        println!("g = {g:+}: |H - H^T| = {asym:.3}, residual = {residual:.1e}");
        for site in theta.anomalous_sites() {
            println!("    theta[{site:+}] = {:.6}", theta.at(site).unwrap());
        }
    }
    Ok(())
}
