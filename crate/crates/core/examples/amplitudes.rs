//! Reflection and transmission of the two-centre scatterer, computed twice:
//! by solving the matching conditions and from the exact expressions.
//!
//!     cargo run --example amplitudes -- 0.5 2 1.0

use nhscatter::{closed_form, solve_numeric, EnergyAngle, TwoCenterSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: f64 = args.first().map_or(Ok(0.5), |s| s.parse())?;
    let gap: i64 = args.get(1).map_or(Ok(2), |s| s.parse())?;
    let phi = EnergyAngle::new(args.get(2).map_or(Ok(1.0), |s| s.parse())?)?;

    let spec = TwoCenterSpec::new(g, gap)?;
    let numeric = solve_numeric(&spec, phi)?;
    let (exact, parts) = closed_form(&spec, phi)?;

    println!("g = {g}, N = {gap}, phi = {}", phi.value());
    println!(
        "matching system: {} unknowns, residual {:.2e}",
        2 * gap + 7,
        numeric.residual
    );
    for (label, a) in [("numeric", &numeric.amplitudes), ("closed", &exact)] {
        println!(
            "{label:>8}: R = {:+.15} {:+.15}i  T = {:+.15} {:+.15}i  |R|^2+|T|^2-1 = {:.1e}",
            a.reflection.re,
            a.reflection.im,
            a.transmission.re,
            a.transmission.im,
            a.unitarity_defect
        );
    }
    println!("discrepancy {:.2e}", exact.discrepancy(&numeric.amplitudes));
    println!(
        "phases: arg(T-R) = {:.6}, arg(T+R) = {:.6}",
        parts.alpha, parts.beta
    );
    Ok(())
}
