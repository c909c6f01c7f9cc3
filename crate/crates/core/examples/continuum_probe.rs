//! Refine the lattice at fixed momentum: the merged scatterer becomes
//! opaque, with `|T|` and `|psi_0|` vanishing linearly in the spacing.

use nhscatter::continuum_probe;
use nhscatter::scattering::halving_sequence;

fn main() -> nhscatter::Result<()> {
    let hs = halving_sequence(0.2, 6);
    for g in [0.3, 0.5, 0.9] {
        let probe = continuum_probe(g, 1.0, &hs)?;
        println!("g = {g}");
        for row in &probe.rows {
            println!(
                "    h = {:.6}  |T| = {:.6e}  |psi_0| = {:.6e}",
                row.h, row.transmission_abs, row.psi0_abs
            );
        }
        println!(
            "    exponents: |T| ~ h^{:.4}, |psi_0| ~ h^{:.4}",
            probe.transmission_exponent, probe.psi0_exponent
        );
    }
    Ok(())
}
