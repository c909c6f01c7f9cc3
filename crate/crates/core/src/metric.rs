//! Diagonal metric operators `Theta` satisfying `H^dagger Theta = Theta H`.
//!
//! On a tridiagonal lattice a diagonal metric is fixed bond by bond: across a
//! bond with `H(k, k+1) = -1 - gamma` and `H(k+1, k) = -1 + gamma` the ratio
//! `theta(k+1) / theta(k)` must equal `(1 + gamma) / (1 - gamma)`.

use crate::error::{Error, Result};
use crate::lattice::SiteWindow;
use crate::operator::BandedOperator;
use crate::potential::{ChainSpec, MultiCenterSpec, Scatterer, TwoCenterSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMetric {
    window: SiteWindow,
    theta: Vec<f64>,
}

impl DiagonalMetric {
    pub fn new(window: SiteWindow, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != window.len() {
            return Err(Error::Window(format!(
                "metric has {} entries, window holds {}",
                theta.len(),
                window.len()
            )));
        }
        Ok(Self { window, theta })
    }

    /// Dirac metric.
    pub fn identity(window: SiteWindow) -> Self {
        Self {
            window,
            theta: vec![1.0; window.len()],
        }
    }

    pub fn window(&self) -> &SiteWindow {
        &self.window
    }

    pub fn entries(&self) -> &[f64] {
        &self.theta
    }

    /// `theta_k`, or `None` outside the window.
    pub fn at(&self, site: i64) -> Option<f64> {
        self.window.index(site).map(|i| self.theta[i])
    }

    /// Ratio of the rightmost to the leftmost entry.
    pub fn right_left_ratio(&self) -> f64 {
        self.theta[self.theta.len() - 1] / self.theta[0]
    }

    /// Sites where the metric differs from one.
    pub fn anomalous_sites(&self) -> Vec<i64> {
        self.window
            .sites()
            .zip(&self.theta)
            .filter(|(_, &t)| t != 1.0)
            .map(|(k, _)| k)
            .collect()
    }
}

fn plus_minus(x: f64, positive: bool) -> f64 {
    if positive {
        1.0 + x
    } else {
        1.0 - x
    }
}

/// Closed-form chain metric.
///
/// The site with odd label `+-(2m + 1)` gets
/// `(1 +- a) (1 +- b)^2 ... (1 +- gamma_m)^2 (1 - gamma_{m+1}^2) (1 - gamma_{m+2}^2) ...`,
/// which saturates once `m` passes the last coupling.
pub fn chain_metric(spec: &ChainSpec, window: SiteWindow) -> Result<DiagonalMetric> {
    let couplings = spec.couplings();
    if window.half_width() < couplings.len() {
        return Err(Error::Window(format!(
            "chain metric needs half width >= {}, got {}",
            couplings.len(),
            window.half_width()
        )));
    }
    let theta = window
        .sites()
        .map(|k| {
            let positive = k >= 1;
            let m = if positive {
                (k - 1) as usize
            } else {
                (-k) as usize
            };
            couplings
                .iter()
                .enumerate()
                .map(|(j, &gamma)| match j {
                    0 => plus_minus(gamma, positive),
                    j if j <= m => plus_minus(gamma, positive).powi(2),
                    _ => 1.0 - gamma * gamma,
                })
                .product()
        })
        .collect();
    DiagonalMetric::new(window, theta)
}

/// Identity except `(1 + g) / (1 - g)` at the two block centres.
pub fn two_center_metric(spec: &TwoCenterSpec, window: SiteWindow) -> Result<DiagonalMetric> {
    multi_center_metric(&spec.as_layout(), window)
}

pub fn multi_center_metric(spec: &MultiCenterSpec, window: SiteWindow) -> Result<DiagonalMetric> {
    let mut metric = DiagonalMetric::identity(window);
    for &(c, g) in spec.centers() {
        let idx = window.index(c).ok_or_else(|| {
            Error::Window(format!(
                "centre {c} outside window of half width {}",
                window.half_width()
            ))
        })?;
        metric.theta[idx] = (1.0 + g) / (1.0 - g);
    }
    Ok(metric)
}

/// Largest entrywise violation of `H^dagger Theta = Theta H` over interior sites.
///
/// Pairs touching the window edge are skipped: truncation leaves those rows
/// structurally incomplete.
pub fn quasi_hermiticity_residual(h: &BandedOperator, theta: &DiagonalMetric) -> Result<f64> {
    let window = h.window();
    if window.half_width() != theta.window.half_width() {
        return Err(Error::Window("operator and metric windows differ".into()));
    }
    let mut worst = 0.0f64;
    for i in window.sites().filter(|&k| window.is_interior(k)) {
        for j in (i - 1..=i + 1).filter(|&k| window.is_interior(k)) {
            let ti = theta.at(i).unwrap();
            let tj = theta.at(j).unwrap();
            let lhs = h.get(j, i).conj() * tj;
            let rhs = h.get(i, j) * ti;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Saturated ratio `theta_{-k} / theta_{+k}` far from the chain,
/// `prod (1 - gamma)^w / (1 + gamma)^w` with weight 1 for the central
/// coupling and 2 for the others.
pub fn asymmetry_ratio(spec: &ChainSpec) -> f64 {
    spec.couplings()
        .iter()
        .enumerate()
        .map(|(j, &gamma)| {
            let r = (1.0 - gamma) / (1.0 + gamma);
            if j == 0 {
                r
            } else {
                r * r
            }
        })
        .product()
}

/// True iff every entry is strictly positive.
pub fn positivity_check(theta: &DiagonalMetric) -> bool {
    theta.theta.iter().all(|&t| t > 0.0)
}

/// Metric of `spec` on its natural window together with the Hamiltonian's residual.
pub fn metric_residual<S: Scatterer + ?Sized>(spec: &S) -> Result<f64> {
    let w = spec.natural_window();
    quasi_hermiticity_residual(&spec.hamiltonian(w)?, &spec.metric(w)?)
}
