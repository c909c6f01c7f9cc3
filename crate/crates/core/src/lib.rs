//! Scattering on a discretised line with smeared non-Hermitian point interactions.
//!
//! The Hamiltonian `H = -Laplacian + V` lives on the integer lattice; `V` is a
//! real, antisymmetric nearest-neighbour coupling, either a chain of couplings
//! around the origin or a set of localized three-site blocks. Such `H` are not
//! symmetric, yet each admits a positive diagonal metric `Theta` with
//! `H^dagger Theta = Theta H`. For the block model `Theta` differs from the
//! identity only at the block centres, so the asymptotic plane waves keep their
//! usual meaning and `|R|^2 + |T|^2 = 1`.
//!
//! ```
//! use nhscatter::{closed_form, solve_numeric, EnergyAngle, TwoCenterSpec};
//!
//! let spec = TwoCenterSpec::new(0.5, 2).unwrap();
//! let phi = EnergyAngle::new(1.0).unwrap();
//! let numeric = solve_numeric(&spec, phi).unwrap();
//! let (exact, _) = closed_form(&spec, phi).unwrap();
//! assert!(numeric.amplitudes.discrepancy(&exact) < 1e-10);
//! assert!(exact.unitarity_defect < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod metric;
pub mod model;
pub mod operator;
pub mod potential;
pub mod scattering;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{
    asymptotic_left, asymptotic_right, energy_from_phi, phi_from_energy, EnergyAngle, SiteWindow,
    WaveSample,
};
pub use metric::{
    asymmetry_ratio, chain_metric, multi_center_metric, positivity_check,
    quasi_hermiticity_residual, two_center_metric, DiagonalMetric,
};
pub use model::Model;
pub use operator::BandedOperator;
pub use potential::{
    assemble_hamiltonian, build_chain_potential, build_laplacian, build_multi_center_potential,
    build_two_center_potential, ChainSpec, MultiCenterSpec, Scatterer, TwoCenterSpec,
};
pub use scattering::{
    closed_form, closed_form_general, closed_form_n0, closed_form_nminus1, continuum_probe,
    interior_plane_wave_fit, matching_residual, solve_hamiltonian, solve_numeric, unitarity_defect,
    weighted_flux_defect, Amplitudes, ClosedFormBreakdown, ContinuumProbe, MatchingSystem,
    NumericSolution, PlaneWaveFit,
};
