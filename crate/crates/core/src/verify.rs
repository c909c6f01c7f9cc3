//! Verification suites: quasi-Hermiticity residuals, flux conservation and
//! closed-form versus numerical agreement over parameter grids.
//!
//! Each check reports the largest deviation seen and the parameter tuple that
//! produced it. Reports are deterministic: grid points are evaluated in
//! parallel but reduced in grid order.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::EnergyAngle;
use crate::metric::metric_residual;
use crate::potential::Scatterer;
use crate::potential::{ChainSpec, MultiCenterSpec, TwoCenterSpec};
use crate::scattering::{closed_form, solve_numeric, weighted_flux_defect};
use crate::sweep::{sci, PhiGrid};

pub const METRIC_TOLERANCE: f64 = 1e-14;
pub const CHAIN_METRIC_TOLERANCE: f64 = 1e-13;
pub const UNITARITY_TOLERANCE: f64 = 1e-11;
pub const AGREEMENT_TOLERANCE: f64 = 1e-10;

/// Built-in coupling grid.
pub const COUPLINGS: [f64; 10] = [-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9];
/// Built-in gap grid.
pub const GAPS: [i64; 8] = [-1, 0, 1, 2, 5, 10, 25, 50];

/// Reference point whose amplitudes fix the sign conventions of every
/// closed-form branch.
pub const REFERENCE: (f64, f64) = (0.3, 1.0);

/// Built-in angle grid: 40 points on `[0.05, pi - 0.05]`.
pub fn default_phi_grid() -> PhiGrid {
    PhiGrid {
        count: 40,
        min: 0.05,
        max: PI - 0.05,
    }
}

/// Built-in chains, up to four couplings.
pub fn default_chains() -> Vec<ChainSpec> {
    [
        vec![0.5],
        vec![0.5, 0.3],
        vec![-0.7, 0.2, 0.6],
        vec![0.85, -0.4, 0.1, -0.8],
        vec![-0.3, -0.3, 0.3, 0.3],
    ]
    .into_iter()
    .map(|c| ChainSpec::new(c).expect("built-in chain is valid"))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Metric,
    Unitarity,
    ClosedVsNumeric,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(Suite::Metric),
            "unitarity" => Ok(Suite::Unitarity),
            "closed-vs-numeric" => Ok(Suite::ClosedVsNumeric),
            "all" => Ok(Suite::All),
            _ => Err(Error::Domain(format!(
                "unknown suite '{s}' (metric, unitarity, closed-vs-numeric, all)"
            ))),
        }
    }
}

/// What the suites run over.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// Built-in two-centre grid plus the built-in chains.
    Default,
    TwoCenter {
        couplings: Vec<f64>,
        gaps: Vec<i64>,
    },
    Chain(ChainSpec),
    MultiCenter(MultiCenterSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub target: Target,
    pub phi: PhiGrid,
    /// Replaces every per-check tolerance when set.
    pub tolerance: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            target: Target::Default,
            phi: default_phi_grid(),
            tolerance: None,
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub max: f64,
    pub tolerance: f64,
    /// Parameter tuple at which `max` was attained.
    pub worst: String,
    pub cases: usize,
    /// Closed-form evaluations skipped by the resonance guard.
    pub skipped: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.max <= self.tolerance
    }
}

/// Grid-ordered reduction keeping the first maximum.
#[derive(Default)]
struct Acc {
    max: f64,
    worst: String,
    cases: usize,
    skipped: usize,
}

impl Acc {
    fn push(&mut self, value: f64, at: impl FnOnce() -> String) {
        self.cases += 1;
        // NaN counts as a failure
        if value > self.max || (value.is_nan() && !self.max.is_nan()) || self.worst.is_empty() {
            self.max = value;
            self.worst = at();
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        let skipped = self.skipped + other.skipped;
        let cases = self.cases + other.cases;
        if other.cases > 0
            && (self.cases == 0
                || other.max > self.max
                || (other.max.is_nan() && !self.max.is_nan()))
        {
            self.max = other.max;
            self.worst = other.worst;
        }
        self.cases = cases;
        self.skipped = skipped;
        self
    }

    fn report(self, name: &'static str, tolerance: f64) -> CheckReport {
        CheckReport {
            name,
            max: self.max,
            tolerance,
            worst: self.worst,
            cases: self.cases,
            skipped: self.skipped,
        }
    }
}

fn two_center_tuple(g: f64, n: i64, phi: Option<f64>) -> String {
    match phi {
        Some(p) => format!("g={g}, N={n}, phi={}", sci(p)),
        None => format!("g={g}, N={n}"),
    }
}

fn chain_tuple(spec: &ChainSpec, phi: Option<f64>) -> String {
    let c: Vec<String> = spec.couplings().iter().map(f64::to_string).collect();
    match phi {
        Some(p) => format!("chain=[{}], phi={}", c.join(","), sci(p)),
        None => format!("chain=[{}]", c.join(",")),
    }
}

fn multi_tuple(spec: &MultiCenterSpec, phi: Option<f64>) -> String {
    let c: Vec<String> = spec
        .centers()
        .iter()
        .map(|(c, g)| format!("{c}:{g}"))
        .collect();
    match phi {
        Some(p) => format!("centers=[{}], phi={}", c.join(","), sci(p)),
        None => format!("centers=[{}]", c.join(",")),
    }
}

fn two_center_specs(couplings: &[f64], gaps: &[i64]) -> Result<Vec<TwoCenterSpec>> {
    let mut out = Vec::with_capacity(couplings.len() * gaps.len());
    for &g in couplings {
        for &n in gaps {
            out.push(TwoCenterSpec::new(g, n)?);
        }
    }
    Ok(out)
}

fn fold<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Acc> + Sync + Send) -> Result<Acc> {
    let parts = items.par_iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().fold(Acc::default(), Acc::merge))
}

fn metric_two_center(specs: &[TwoCenterSpec]) -> Result<Acc> {
    fold(specs, |s| {
        let mut acc = Acc::default();
        acc.push(metric_residual(s)?, || {
            two_center_tuple(s.g(), s.gap(), None)
        });
        Ok(acc)
    })
}

fn metric_chains(chains: &[ChainSpec]) -> Result<Acc> {
    fold(chains, |c| {
        let mut acc = Acc::default();
        acc.push(metric_residual(c)?, || chain_tuple(c, None));
        Ok(acc)
    })
}

fn unitarity_two_center(specs: &[TwoCenterSpec], phis: &[EnergyAngle]) -> Result<Acc> {
    fold(specs, |s| {
        let mut acc = Acc::default();
        for &phi in phis {
            let at = || two_center_tuple(s.g(), s.gap(), Some(phi.value()));
            acc.push(solve_numeric(s, phi)?.amplitudes.unitarity_defect, at);
            match closed_form(s, phi) {
                Ok((a, _)) => acc.push(a.unitarity_defect, at),
                Err(Error::ResonantAngle { .. }) => acc.skipped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(acc)
    })
}

fn unitarity_chains(chains: &[ChainSpec], phis: &[EnergyAngle]) -> Result<Acc> {
    fold(chains, |c| {
        let ratio = c.metric(c.natural_window())?.right_left_ratio();
        let mut acc = Acc::default();
        for &phi in phis {
            let a = solve_numeric(c, phi)?.amplitudes;
            acc.push(weighted_flux_defect(&a, ratio), || {
                chain_tuple(c, Some(phi.value()))
            });
        }
        Ok(acc)
    })
}

fn agreement_two_center(specs: &[TwoCenterSpec], phis: &[EnergyAngle]) -> Result<Acc> {
    fold(specs, |s| {
        let mut acc = Acc::default();
        for &phi in phis {
            match closed_form(s, phi) {
                Ok((a, _)) => {
                    let n = solve_numeric(s, phi)?.amplitudes;
                    acc.push(a.discrepancy(&n), || {
                        two_center_tuple(s.g(), s.gap(), Some(phi.value()))
                    });
                }
                Err(Error::ResonantAngle { .. }) => acc.skipped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(acc)
    })
}

/// Closed form against the numerical solve at [`REFERENCE`], one branch per gap.
fn reference_point() -> Result<Acc> {
    let (g, phi) = REFERENCE;
    let specs = two_center_specs(&[g], &[-1, 0, 2])?;
    agreement_two_center(&specs, &[EnergyAngle::new(phi)?])
}

/// Runs the selected suites. Errors only on invalid input; failed checks are
/// reported, not raised.
pub fn run_verify(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    config.phi.validate()?;
    if let Some(t) = config.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {t}"
            )));
        }
    }
    let tol = |default: f64| config.tolerance.unwrap_or(default);
    let phis = config
        .phi
        .points()
        .into_iter()
        .map(EnergyAngle::new)
        .collect::<Result<Vec<_>>>()?;

    let (specs, chains, multi) = match &config.target {
        Target::Default => (two_center_specs(&COUPLINGS, &GAPS)?, default_chains(), None),
        Target::TwoCenter { couplings, gaps } => {
            if couplings.is_empty() || gaps.is_empty() {
                return Err(Error::Domain(
                    "coupling and gap grids must be non-empty".into(),
                ));
            }
            (two_center_specs(couplings, gaps)?, Vec::new(), None)
        }
        Target::Chain(c) => (Vec::new(), vec![c.clone()], None),
        Target::MultiCenter(m) => (Vec::new(), Vec::new(), Some(m)),
    };
    if config.suite == Suite::ClosedVsNumeric && specs.is_empty() {
        return Err(Error::Domain(
            "closed forms exist only for the two-center model".into(),
        ));
    }

    let mut out = Vec::new();
    if config.suite.includes(Suite::Metric) {
        if !specs.is_empty() {
            out.push(metric_two_center(&specs)?.report("metric", tol(METRIC_TOLERANCE)));
        }
        if !chains.is_empty() {
            out.push(metric_chains(&chains)?.report("metric-chain", tol(CHAIN_METRIC_TOLERANCE)));
        }
        if let Some(m) = multi {
            let mut acc = Acc::default();
            acc.push(metric_residual(m)?, || multi_tuple(m, None));
            out.push(acc.report("metric-multi-center", tol(METRIC_TOLERANCE)));
        }
    }
    if config.suite.includes(Suite::Unitarity) {
        if !specs.is_empty() {
            out.push(
                unitarity_two_center(&specs, &phis)?.report("unitarity", tol(UNITARITY_TOLERANCE)),
            );
        }
        if !chains.is_empty() {
            out.push(
                unitarity_chains(&chains, &phis)?
                    .report("unitarity-chain", tol(UNITARITY_TOLERANCE)),
            );
        }
        if let Some(m) = multi {
            let mut acc = Acc::default();
            for &phi in &phis {
                let d = solve_numeric(m, phi)?.amplitudes.unitarity_defect;
                acc.push(d, || multi_tuple(m, Some(phi.value())));
            }
            out.push(acc.report("unitarity-multi-center", tol(UNITARITY_TOLERANCE)));
        }
    }
    if config.suite.includes(Suite::ClosedVsNumeric) && !specs.is_empty() {
        out.push(reference_point()?.report("reference-point", tol(AGREEMENT_TOLERANCE)));
        out.push(
            agreement_two_center(&specs, &phis)?
                .report("closed-vs-numeric", tol(AGREEMENT_TOLERANCE)),
        );
    }
    Ok(out)
}

/// Plain-text report, one line per check, then a summary line.
pub fn render_report(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(
            s,
            "{:<4} {:<24} max={} tol={:e} cases={} skipped={} worst=({})",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            sci(r.max),
            r.tolerance,
            r.cases,
            r.skipped,
            r.worst
        );
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(s, "{} checks, {} failed", reports.len(), failed);
    s
}
