//! Arbitrary arrangements of three-site blocks, including merged neighbours.

use nhscatter::metric::metric_residual;
use nhscatter::{solve_numeric, EnergyAngle, MultiCenterSpec};

fn main() -> nhscatter::Result<()> {
    let layouts = [
        vec![(0, 0.4)],
        vec![(-3, 0.4), (3, -0.4)],
        vec![(-6, 0.2), (-1, 0.5), (1, 0.5), (7, -0.8)],
    ];
    let phi = EnergyAngle::new(0.9)?;
    for centers in layouts {
        let spec = MultiCenterSpec::new(centers.clone())?;
        let sol = solve_numeric(&spec, phi)?;
        let a = sol.amplitudes;
        println!(
            "{centers:?}\n    |R|^2 = {:.12}  |T|^2 = {:.12}  defect = {:.1e}  metric residual = {:.1e}",
            a.reflectance(),
            a.transmittance(),
            a.unitarity_defect,
            metric_residual(&spec)?
        );
    }
    Ok(())
}
