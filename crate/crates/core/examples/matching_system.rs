//! Any finite-support Hamiltonian can be scattered off: build one by hand,
//! assemble its tridiagonal matching system and solve it.

use nhscatter::{
    assemble_hamiltonian, solve_hamiltonian, BandedOperator, EnergyAngle, MatchingSystem,
    SiteWindow,
};

fn main() -> nhscatter::Result<()> {
    let window = SiteWindow::unit(6)?;
    let mut v = BandedOperator::zeros(window);
    // a real on-site well and one lopsided bond
    v.set(0, 0, (-0.8).into())?;
    v.set(1, 2, 0.25.into())?;
    v.set(2, 1, (-0.25).into())?;
    let h = assemble_hamiltonian(&v, window)?;

    let phi = EnergyAngle::new(0.7)?;
    let system = MatchingSystem::assemble(&h, phi)?;
    println!("rows {:?}, {} unknowns", system.rows(), system.size());

    let sol = solve_hamiltonian(&h, phi)?;
    println!("R = {:.12}", sol.amplitudes.reflection);
    println!("T = {:.12}", sol.amplitudes.transmission);
    println!("relative residual {:.1e}", sol.residual);
    for k in window.sites() {
        println!("psi[{k:+}] = {:.9}", sol.wave.at(k).unwrap());
    }
    Ok(())
}
