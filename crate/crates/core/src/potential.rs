//! Discrete Laplacian and the two families of antisymmetric nearest-neighbour
//! potentials: the chain `(a, b, c, ...)` and localized three-site blocks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::SiteWindow;
use crate::metric::{self, DiagonalMetric};
use crate::operator::BandedOperator;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_coupling(value: f64) -> Result<f64> {
    if value.is_finite() && value.abs() < 1.0 {
        Ok(value)
    } else {
        Err(Error::Positivity(value))
    }
}

/// Couplings `(a, b, c, ...)` of the chain potential, innermost first.
///
/// The chain lives on bonds between consecutive sites. Coupling `j = 0` sits on
/// the central bond `(0, 1)`; coupling `j >= 1` sits on the two bonds
/// `(j, j + 1)` and `(-j, -j + 1)`. Site `k >= 1` carries the odd label
/// `2k - 1` and site `k <= 0` the label `2k - 1`, so the central bond joins the
/// labels `-1` and `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    couplings: Vec<f64>,
}

impl ChainSpec {
    pub fn new(couplings: Vec<f64>) -> Result<Self> {
        if couplings.is_empty() {
            return Err(Error::Layout("chain needs at least one coupling".into()));
        }
        for &c in &couplings {
            check_coupling(c)?;
        }
        Ok(Self { couplings })
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Bonds `(left, right)` carrying coupling `j`.
    pub fn bonds(&self, j: usize) -> Vec<(i64, i64)> {
        let j = j as i64;
        if j == 0 {
            vec![(0, 1)]
        } else {
            vec![(-j, -j + 1), (j, j + 1)]
        }
    }

    /// Odd label of a lattice site.
    pub fn label(site: i64) -> i64 {
        2 * site - 1
    }
}

/// Two three-site blocks of strength `g` centred at `+-(gap + 2)`.
///
/// `gap = -1` merges the blocks so that they share the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCenterSpec {
    g: f64,
    gap: i64,
}

impl TwoCenterSpec {
    pub fn new(g: f64, gap: i64) -> Result<Self> {
        check_coupling(g)?;
        if gap < -1 {
            return Err(Error::Layout(format!("gap N = {gap} must be at least -1")));
        }
        Ok(Self { g, gap })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn gap(&self) -> i64 {
        self.gap
    }

    /// Centre of the right block, `N + 2`.
    pub fn center(&self) -> i64 {
        self.gap + 2
    }

    pub fn with_coupling(&self, g: f64) -> Result<Self> {
        Self::new(g, self.gap)
    }

    pub fn as_layout(&self) -> MultiCenterSpec {
        let c = self.center();
        MultiCenterSpec {
            centers: vec![(-c, self.g), (c, self.g)],
        }
    }
}

/// Any number of three-site blocks at arbitrary centres, each with its own coupling.
///
/// Neighbouring centres must be at least three sites apart (disjoint blocks)
/// or exactly two apart (blocks sharing one edge site).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiCenterSpec {
    centers: Vec<(i64, f64)>,
}

impl MultiCenterSpec {
    pub fn new(mut centers: Vec<(i64, f64)>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Layout("layout needs at least one centre".into()));
        }
        for &(_, g) in &centers {
            check_coupling(g)?;
        }
        centers.sort_by_key(|&(c, _)| c);
        for pair in centers.windows(2) {
            let d = pair[1].0 - pair[0].0;
            if d < 2 {
                return Err(Error::Layout(format!(
                    "centres {} and {} overlap; blocks must be disjoint (distance >= 3) or merged (distance 2)",
                    pair[0].0, pair[1].0
                )));
            }
        }
        Ok(Self { centers })
    }

    pub fn centers(&self) -> &[(i64, f64)] {
        &self.centers
    }
}

/// Common behaviour of every scatterer: where it lives, its potential and its metric.
pub trait Scatterer {
    /// Lowest and highest site touched by a nonzero potential entry.
    fn support(&self) -> (i64, i64);

    fn potential(&self, window: SiteWindow) -> Result<BandedOperator>;

    fn metric(&self, window: SiteWindow) -> Result<DiagonalMetric>;

    /// Smallest half width keeping every interaction row away from the window edge.
    fn required_half_width(&self) -> usize {
        let (lo, hi) = self.support();
        lo.unsigned_abs().max(hi.unsigned_abs()) as usize + 1
    }

    fn hamiltonian(&self, window: SiteWindow) -> Result<BandedOperator> {
        assemble_hamiltonian(&self.potential(window)?, window)
    }

    /// Window with one spare free site beyond the minimum.
    fn natural_window(&self) -> SiteWindow {
        SiteWindow::unit(self.required_half_width() + 1).expect("half width is positive")
    }
}

fn check_window(window: &SiteWindow, needed: usize, what: &str) -> Result<()> {
    if window.half_width() < needed {
        return Err(Error::Window(format!(
            "{what} needs half width >= {needed}, got {}",
            window.half_width()
        )));
    }
    Ok(())
}

/// `-Laplacian` in lattice units: 2 on the diagonal, -1 beside it.
pub fn build_laplacian(window: SiteWindow) -> BandedOperator {
    let mut op = BandedOperator::zeros(window);
    for k in window.sites() {
        op.set(k, k, real(2.0)).unwrap();
        if k < window.max_site() {
            op.set(k, k + 1, real(-1.0)).unwrap();
            op.set(k + 1, k, real(-1.0)).unwrap();
        }
    }
    op
}

/// Chain potential: `+gamma` below and `-gamma` above the diagonal on every bond.
pub fn build_chain_potential(spec: &ChainSpec, window: SiteWindow) -> Result<BandedOperator> {
    check_window(&window, spec.couplings.len() + 1, "chain potential")?;
    let mut op = BandedOperator::zeros(window);
    for (j, &gamma) in spec.couplings.iter().enumerate() {
        for (left, right) in spec.bonds(j) {
            op.set(right, left, real(gamma))?;
            op.set(left, right, real(-gamma))?;
        }
    }
    Ok(op)
}

/// Adds one three-site block of strength `g` centred at `c`.
fn add_block(op: &mut BandedOperator, c: i64, g: f64) -> Result<()> {
    op.add_to(c - 1, c, real(-g))?;
    op.add_to(c, c - 1, real(g))?;
    op.add_to(c, c + 1, real(g))?;
    op.add_to(c + 1, c, real(-g))?;
    Ok(())
}

pub fn build_two_center_potential(
    spec: &TwoCenterSpec,
    window: SiteWindow,
) -> Result<BandedOperator> {
    check_window(&window, (spec.gap + 4) as usize, "two-centre potential")?;
    build_multi_center_potential(&spec.as_layout(), window)
}

pub fn build_multi_center_potential(
    spec: &MultiCenterSpec,
    window: SiteWindow,
) -> Result<BandedOperator> {
    check_window(
        &window,
        spec.required_half_width(),
        "multi-centre potential",
    )?;
    let mut op = BandedOperator::zeros(window);
    for &(c, g) in &spec.centers {
        add_block(&mut op, c, g)?;
    }
    Ok(op)
}

/// `H = -Laplacian + V` on `window`.
pub fn assemble_hamiltonian(
    potential: &BandedOperator,
    window: SiteWindow,
) -> Result<BandedOperator> {
    if potential.window().half_width() != window.half_width() {
        return Err(Error::Window(format!(
            "potential has half width {}, window {}",
            potential.window().half_width(),
            window.half_width()
        )));
    }
    build_laplacian(window).try_add(potential)
}

impl Scatterer for ChainSpec {
    fn support(&self) -> (i64, i64) {
        let n = self.couplings.len() as i64;
        (-(n - 1), n)
    }

    fn potential(&self, window: SiteWindow) -> Result<BandedOperator> {
        build_chain_potential(self, window)
    }

    fn metric(&self, window: SiteWindow) -> Result<DiagonalMetric> {
        metric::chain_metric(self, window)
    }

    fn required_half_width(&self) -> usize {
        self.couplings.len() + 1
    }
}

impl Scatterer for TwoCenterSpec {
    fn support(&self) -> (i64, i64) {
        let c = self.center();
        (-c - 1, c + 1)
    }

    fn potential(&self, window: SiteWindow) -> Result<BandedOperator> {
        build_two_center_potential(self, window)
    }

    fn metric(&self, window: SiteWindow) -> Result<DiagonalMetric> {
        metric::two_center_metric(self, window)
    }
}

impl Scatterer for MultiCenterSpec {
    fn support(&self) -> (i64, i64) {
        let lo = self.centers.first().unwrap().0;
        let hi = self.centers.last().unwrap().0;
        (lo - 1, hi + 1)
    }

    fn potential(&self, window: SiteWindow) -> Result<BandedOperator> {
        build_multi_center_potential(self, window)
    }

    fn metric(&self, window: SiteWindow) -> Result<DiagonalMetric> {
        metric::multi_center_metric(self, window)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(op: &BandedOperator, r: i64, c: i64) -> f64 {
        let z = op.get(r, c);
        assert_eq!(z.im, 0.0);
        z.re
    }

    #[test]
    fn laplacian_three_sites() {
        let op = build_laplacian(SiteWindow::unit(1).unwrap());
        let dense: Vec<Vec<f64>> = op
            .to_dense()
            .iter()
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect();
        assert_eq!(
            dense,
            vec![
                vec![2.0, -1.0, 0.0],
                vec![-1.0, 2.0, -1.0],
                vec![0.0, -1.0, 2.0]
            ]
        );
        assert!(op.is_hermitian());
    }

    #[test]
    fn chain_single_coupling_straddles_center() {
        let spec = ChainSpec::new(vec![0.4]).unwrap();
        let v = build_chain_potential(&spec, SiteWindow::unit(2).unwrap()).unwrap();
        assert_eq!(re(&v, 1, 0), 0.4);
        assert_eq!(re(&v, 0, 1), -0.4);
        assert_eq!(v.nonzero_rows(), vec![0, 1]);
    }

    #[test]
    fn chain_is_antisymmetric() {
        let spec = ChainSpec::new(vec![0.5, -0.3, 0.2]).unwrap();
        let w = SiteWindow::unit(5).unwrap();
        let v = build_chain_potential(&spec, w).unwrap();
        let neg_t = BandedOperator::zeros(w).try_add(&v.transpose()).unwrap();
        for r in w.sites() {
            for c in w.sites() {
                assert_eq!(v.get(r, c), -neg_t.get(r, c));
            }
        }
        // b sits on both bonds adjacent to the central one
        assert_eq!(re(&v, 2, 1), -0.3);
        assert_eq!(re(&v, 0, -1), -0.3);
        assert_eq!(re(&v, -1, 0), 0.3);
    }

    #[test]
    fn chain_zero_couplings_vanish() {
        let spec = ChainSpec::new(vec![0.0, 0.0]).unwrap();
        let v = build_chain_potential(&spec, SiteWindow::unit(3).unwrap()).unwrap();
        assert!(v.nonzero_rows().is_empty());
    }

    #[test]
    fn chain_window_too_small() {
        let spec = ChainSpec::new(vec![0.1, 0.2]).unwrap();
        assert!(matches!(
            build_chain_potential(&spec, SiteWindow::unit(2).unwrap()),
            Err(Error::Window(_))
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(ChainSpec::new(vec![]), Err(Error::Layout(_))));
        assert!(matches!(
            ChainSpec::new(vec![0.2, 1.0]),
            Err(Error::Positivity(_))
        ));
        assert!(matches!(
            TwoCenterSpec::new(1.2, 0),
            Err(Error::Positivity(_))
        ));
        assert!(matches!(TwoCenterSpec::new(0.2, -2), Err(Error::Layout(_))));
        assert!(matches!(
            MultiCenterSpec::new(vec![(0, 0.1), (1, 0.1)]),
            Err(Error::Layout(_))
        ));
        assert!(MultiCenterSpec::new(vec![(0, 0.1), (2, 0.1), (6, -0.4)]).is_ok());
    }

    #[test]
    fn two_center_gap_zero_rows() {
        let g = 0.3;
        let spec = TwoCenterSpec::new(g, 0).unwrap();
        let h = spec.hamiltonian(SiteWindow::unit(4).unwrap()).unwrap();
        assert_eq!(re(&h, -3, -2), -1.0 - g);
        assert_eq!(re(&h, -2, -3), -1.0 + g);
        assert_eq!(re(&h, -2, -1), -1.0 + g);
        assert_eq!(re(&h, -1, -2), -1.0 - g);
        assert_eq!(re(&h, -1, 0), -1.0);
        assert_eq!(re(&h, 0, 1), -1.0);
        assert_eq!(re(&h, 3, 2), -1.0 - g);
        assert_eq!(h.nonzero_rows().len(), 9);
    }

    #[test]
    fn two_center_asymmetry_is_two_g() {
        let g = 0.35;
        let spec = TwoCenterSpec::new(g, 0).unwrap();
        let h = spec.hamiltonian(SiteWindow::unit(5).unwrap()).unwrap();
        let d = h.max_abs_diff(&h.transpose()).unwrap();
        assert!((d - 2.0 * g).abs() < 1e-15);
        assert!(h.is_real());
    }

    #[test]
    fn chain_hamiltonian_bond_sum() {
        let spec = ChainSpec::new(vec![0.7]).unwrap();
        let h = spec.hamiltonian(SiteWindow::unit(3).unwrap()).unwrap();
        assert_eq!(re(&h, 0, 1) + re(&h, 1, 0), -2.0);
    }

    #[test]
    fn zero_coupling_gives_laplacian() {
        let w = SiteWindow::unit(6).unwrap();
        for n in [-1, 0, 2] {
            let h = TwoCenterSpec::new(0.0, n).unwrap().hamiltonian(w).unwrap();
            assert_eq!(h, build_laplacian(w));
        }
    }

    #[test]
    fn sign_flip_transposes() {
        let w = SiteWindow::unit(7).unwrap();
        for n in [-1, 0, 3] {
            let plus = TwoCenterSpec::new(0.6, n).unwrap().potential(w).unwrap();
            let minus = TwoCenterSpec::new(-0.6, n).unwrap().potential(w).unwrap();
            assert_eq!(plus.transpose(), minus);
        }
    }

    #[test]
    fn window_requirement() {
        let spec = TwoCenterSpec::new(0.5, 2).unwrap();
        assert!(build_two_center_potential(&spec, SiteWindow::unit(5).unwrap()).is_err());
        assert!(build_two_center_potential(&spec, SiteWindow::unit(6).unwrap()).is_ok());
        assert_eq!(spec.required_half_width(), 6);
    }
}
