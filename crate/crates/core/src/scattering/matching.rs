use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{asymptotic_left, asymptotic_right, EnergyAngle, SiteWindow, WaveSample};
use crate::linalg::BandMatrix;
use crate::operator::BandedOperator;
use crate::potential::Scatterer;

use super::Amplitudes;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficient of `psi_col` in row `row` of `(H - E) psi = 0`, in lattice units.
fn coefficient(h: &BandedOperator, row: i64, col: i64, phi: EnergyAngle) -> Complex64 {
    if row == col {
        h.get(row, row) - 2.0 + phi.two_cos()
    } else {
        h.get(row, col)
    }
}

/// Matching conditions between the two asymptotic plane-wave regions.
///
/// Rows are the Schroedinger equation at sites `first_row ..= last_row`, the
/// span of rows carrying any interaction. Left of `first_row` (inclusive) the
/// wave is `exp(ik phi) + R exp(-ik phi)`; right of `last_row` (inclusive) it is
/// `T exp(ik phi)`. Unknowns are ordered `[R, psi_{first+1}, ..., psi_{last-1}, T]`
/// which keeps the system tridiagonal. The incoming wave sits on the right-hand side.
#[derive(Debug, Clone)]
pub struct MatchingSystem {
    phi: EnergyAngle,
    first_row: i64,
    last_row: i64,
    matrix: BandMatrix,
    rhs: Vec<Complex64>,
}

impl MatchingSystem {
    pub fn assemble(h: &BandedOperator, phi: EnergyAngle) -> Result<Self> {
        let window = *h.window();
        let (first_row, last_row) = interaction_rows(h);
        if !(window.is_interior(first_row) && window.is_interior(last_row)) {
            return Err(Error::Window(format!(
                "interaction rows {first_row}..={last_row} reach the edge of half width {}",
                window.half_width()
            )));
        }

        let n = (last_row - first_row + 1) as usize;
        let mut matrix = BandMatrix::zeros(n, 1, 1);
        let mut rhs = vec![ZERO; n];
        for (r, row) in (first_row..=last_row).enumerate() {
            for col in row - 1..=row + 1 {
                let a = coefficient(h, row, col, phi);
                if col <= first_row {
                    matrix.add(r, 0, a * phi.wave(-col));
                    rhs[r] -= a * phi.wave(col);
                } else if col >= last_row {
                    matrix.add(r, n - 1, a * phi.wave(col));
                } else {
                    matrix.add(r, (col - first_row) as usize, a);
                }
            }
        }
        Ok(Self {
            phi,
            first_row,
            last_row,
            matrix,
            rhs,
        })
    }

    pub fn size(&self) -> usize {
        self.rhs.len()
    }

    pub fn rows(&self) -> std::ops::RangeInclusive<i64> {
        self.first_row..=self.last_row
    }

    pub fn matrix(&self) -> &BandMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }

    pub fn phi(&self) -> EnergyAngle {
        self.phi
    }

    /// Largest row residual of `x`, relative to `max|A| max|x| + max|b|`.
    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        let ax = self.matrix.mul_vec(x);
        let xmax = x.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let bmax = self.rhs.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let scale = self.matrix.max_abs() * xmax + bmax;
        let worst = ax
            .iter()
            .zip(&self.rhs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

/// Span of rows that differ from the free lattice; a single row pair when
/// nothing does.
fn interaction_rows(h: &BandedOperator) -> (i64, i64) {
    let window = h.window();
    let mut rows = window.sites().filter(|&k| {
        (k - 1..=k + 1).any(|j| {
            let free = match (j == k, window.contains(j)) {
                (true, _) => 2.0,
                (false, true) => -1.0,
                (false, false) => 0.0,
            };
            h.get(k, j) != Complex64::new(free, 0.0)
        })
    });
    match rows.next() {
        Some(lo) => {
            let hi = rows.last().unwrap_or(lo);
            (lo, hi.max(lo + 1))
        }
        None => (0, 1),
    }
}

/// Output of the numerical matching solve.
#[derive(Debug, Clone)]
pub struct NumericSolution {
    pub amplitudes: Amplitudes,
    /// Wave function on the operator's window, asymptotic forms outside the interaction rows.
    pub wave: WaveSample,
    /// Largest relative residual over all matching rows.
    pub residual: f64,
}

/// Numerical amplitudes for an explicit Hamiltonian.
pub fn solve_hamiltonian(h: &BandedOperator, phi: EnergyAngle) -> Result<NumericSolution> {
    let system = MatchingSystem::assemble(h, phi)?;
    let x = system.matrix.solve(&system.rhs)?;
    let residual = system.relative_residual(&x);
    let n = x.len();
    let (r, t) = (x[0], x[n - 1]);

    let window: SiteWindow = *h.window();
    let values = window
        .sites()
        .map(|k| {
            if k <= system.first_row {
                asymptotic_left(-k, phi, r)
            } else if k >= system.last_row {
                asymptotic_right(k, phi, t)
            } else {
                x[(k - system.first_row) as usize]
            }
        })
        .collect();
    Ok(NumericSolution {
        amplitudes: Amplitudes::new(r, t, phi),
        wave: WaveSample::new(window, values)?,
        residual,
    })
}

/// Numerical amplitudes for any scatterer on its natural window.
pub fn solve_numeric<S: Scatterer + ?Sized>(spec: &S, phi: EnergyAngle) -> Result<NumericSolution> {
    let window = spec.natural_window();
    solve_hamiltonian(&spec.hamiltonian(window)?, phi)
}

/// Substitutes given `(R, T)` back into every matching row.
///
/// With `R` and `T` fixed the rows over-determine the interior values by two
/// equations; the interior is taken as their least-squares solution, so the
/// result measures the consistency of `(R, T)` alone. Returns the largest row
/// residual relative to the size of the terms in that row.
pub fn matching_residual(
    h: &BandedOperator,
    phi: EnergyAngle,
    reflection: Complex64,
    transmission: Complex64,
) -> Result<f64> {
    let (first, last) = interaction_rows(h);
    let window = h.window();
    if !(window.is_interior(first) && window.is_interior(last)) {
        return Err(Error::Window(
            "interaction rows reach the window edge".into(),
        ));
    }
    let rows = (last - first + 1) as usize;
    let interior = rows - 2;
    let at = |k: i64| (k - first + 1) as usize;
    // psi over sites first-1 ..= last+1, asymptotic values at both ends
    let mut psi = vec![ZERO; rows + 2];
    psi[at(first - 1)] = asymptotic_left(-(first - 1), phi, reflection);
    psi[at(first)] = asymptotic_left(-first, phi, reflection);
    psi[at(last)] = asymptotic_right(last, phi, transmission);
    psi[at(last + 1)] = asymptotic_right(last + 1, phi, transmission);

    if interior > 0 {
        let mut a = DMatrix::<Complex64>::zeros(rows, interior);
        let mut b = DVector::<Complex64>::zeros(rows);
        for (r, row) in (first..=last).enumerate() {
            for col in row - 1..=row + 1 {
                let c = coefficient(h, row, col, phi);
                if col > first && col < last {
                    a[(r, (col - first - 1) as usize)] = c;
                } else {
                    b[r] -= c * psi[at(col)];
                }
            }
        }
        let x = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::Domain(e.to_string()))?;
        for (j, v) in x.iter().enumerate() {
            psi[at(first + 1 + j as i64)] = *v;
        }
    }

    let mut worst = 0.0f64;
    for row in first..=last {
        let terms: Vec<Complex64> = (row - 1..=row + 1)
            .map(|col| coefficient(h, row, col, phi) * psi[at(col)])
            .collect();
        let scale = terms
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
            .max(f64::MIN_POSITIVE);
        let sum: Complex64 = terms.iter().sum();
        worst = worst.max(sum.norm() / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{build_laplacian, ChainSpec, MultiCenterSpec, TwoCenterSpec};

    fn angle(x: f64) -> EnergyAngle {
        EnergyAngle::new(x).unwrap()
    }

    #[test]
    fn free_lattice_is_transparent() {
        let w = SiteWindow::unit(4).unwrap();
        let sol = solve_hamiltonian(&build_laplacian(w), angle(0.8)).unwrap();
        assert!(sol.amplitudes.reflection.norm() < 1e-15);
        assert!((sol.amplitudes.transmission - 1.0).norm() < 1e-15);
        for k in w.sites() {
            assert!((sol.wave.at(k).unwrap() - angle(0.8).wave(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn system_size_is_2n_plus_7() {
        for n in [-1i64, 0, 1, 4] {
            let spec = TwoCenterSpec::new(0.4, n).unwrap();
            let h = spec.hamiltonian(spec.natural_window()).unwrap();
            let sys = MatchingSystem::assemble(&h, angle(1.1)).unwrap();
            assert_eq!(sys.size() as i64, 2 * n + 7);
            assert_eq!(sys.rows(), -(n + 3)..=(n + 3));
        }
    }

    #[test]
    fn zero_coupling_models_are_free() {
        for n in [-1, 0, 3] {
            let sol = solve_numeric(&TwoCenterSpec::new(0.0, n).unwrap(), angle(2.2)).unwrap();
            assert!(sol.amplitudes.reflection.norm() < 1e-14);
            assert!((sol.amplitudes.transmission - 1.0).norm() < 1e-14);
        }
        let sol = solve_numeric(&ChainSpec::new(vec![0.0, 0.0]).unwrap(), angle(0.4)).unwrap();
        assert!(sol.amplitudes.reflection.norm() < 1e-14);
    }

    #[test]
    fn two_center_is_unitary() {
        let sol = solve_numeric(
            &TwoCenterSpec::new(0.5, 0).unwrap(),
            angle(std::f64::consts::PI / 3.0),
        )
        .unwrap();
        assert!(sol.amplitudes.unitarity_defect < 1e-12);
        assert!(sol.residual < 1e-12);
        let sol = solve_numeric(&TwoCenterSpec::new(0.7, 5).unwrap(), angle(2.0)).unwrap();
        assert!(sol.amplitudes.unitarity_defect <= 1e-12);
    }

    #[test]
    fn multi_center_is_unitary() {
        let spec = MultiCenterSpec::new(vec![(-7, 0.3), (-1, -0.6), (1, 0.2), (9, 0.8)]).unwrap();
        for phi in [0.2, 1.0, 2.9] {
            let sol = solve_numeric(&spec, angle(phi)).unwrap();
            assert!(sol.amplitudes.unitarity_defect < 1e-12, "{phi}");
            assert!(sol.residual < 1e-12);
        }
    }

    #[test]
    fn resubstitution_of_numeric_solution() {
        let spec = TwoCenterSpec::new(0.6, 3).unwrap();
        let h = spec.hamiltonian(spec.natural_window()).unwrap();
        let sol = solve_hamiltonian(&h, angle(1.7)).unwrap();
        let a = sol.amplitudes;
        assert!(matching_residual(&h, angle(1.7), a.reflection, a.transmission).unwrap() < 1e-12);
        let off = matching_residual(&h, angle(1.7), a.reflection + 0.01, a.transmission).unwrap();
        assert!(off > 1e-4);
    }

    #[test]
    fn edge_rows_rejected() {
        let spec = TwoCenterSpec::new(0.4, 1).unwrap();
        assert!(solve_hamiltonian(
            &spec.hamiltonian(SiteWindow::unit(5).unwrap()).unwrap(),
            angle(1.0)
        )
        .is_ok());

        let w = SiteWindow::unit(3).unwrap();
        let mut h = build_laplacian(w);
        h.set(3, 2, Complex64::new(-0.5, 0.0)).unwrap();
        assert!(matches!(
            solve_hamiltonian(&h, angle(1.0)),
            Err(Error::Window(_))
        ));
    }
}
