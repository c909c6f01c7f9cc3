//! Exact amplitudes of the two-centre model.
//!
//! Every branch reduces to unit-modulus Moebius factors `(1 - i x) / (1 + i x)`
//! for `T - R` and `T + R`; unitarity then follows from
//! `|R|^2 + |T|^2 = (|T - R|^2 + |T + R|^2) / 2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::EnergyAngle;
use crate::potential::TwoCenterSpec;

use super::Amplitudes;

/// Denominators smaller than this are treated as poles of the Moebius parameter.
pub const POLE_TOLERANCE: f64 = 1e-13;

/// Smallest admissible `|sin|`, `|cos|` of `N phi` and `(N + 1) phi` in the general formula.
pub const RESONANCE_GUARD: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Intermediate quantities of a closed-form evaluation.
///
/// `lambda` and `mu` parametrise `T - R` and `T + R`; they are infinite at a
/// pole. The remaining fields are only filled for the general-gap formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormBreakdown {
    pub lambda: f64,
    pub mu: f64,
    /// Phase of `T - R`.
    pub alpha: f64,
    /// Phase of `T + R`.
    pub beta: f64,
    pub a_phi: Option<Complex64>,
    pub b_phi: Option<Complex64>,
    pub u_phi: Option<Complex64>,
    pub v_phi: Option<Complex64>,
    /// Interior plane-wave coefficients `psi_k = C e^{ik phi} + D e^{-ik phi}`.
    pub interior_c: Option<Complex64>,
    pub interior_d: Option<Complex64>,
}

impl ClosedFormBreakdown {
    fn phases(lambda: f64, mu: f64, t_minus_r: Complex64, t_plus_r: Complex64) -> Self {
        Self {
            lambda,
            mu,
            alpha: t_minus_r.arg(),
            beta: t_plus_r.arg(),
            a_phi: None,
            b_phi: None,
            u_phi: None,
            v_phi: None,
            interior_c: None,
            interior_d: None,
        }
    }
}

/// `(1 - i x) / (1 + i x)` for `x = num / den`, written as `(den - i num) / (den + i num)`.
///
/// At a pole (`|den| < POLE_TOLERANCE`) the limit `-1` is returned.
pub fn mobius(num: f64, den: f64) -> Complex64 {
    if den.abs() < POLE_TOLERANCE {
        return Complex64::new(-1.0, 0.0);
    }
    Complex64::new(den, -num) / Complex64::new(den, num)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY.copysign(num)
    } else {
        num / den
    }
}

fn check_g(g: f64) -> Result<f64> {
    if g.is_finite() && g.abs() < 1.0 {
        Ok(g)
    } else {
        Err(Error::Positivity(g))
    }
}

fn assemble(
    t_minus_r: Complex64,
    t_plus_r: Complex64,
    phi: EnergyAngle,
    breakdown: ClosedFormBreakdown,
) -> (Amplitudes, ClosedFormBreakdown) {
    let t = 0.5 * (t_plus_r + t_minus_r);
    let r = 0.5 * (t_plus_r - t_minus_r);
    (Amplitudes::new(r, t, phi), breakdown)
}

/// Merged blocks (`N = -1`), five matching rows around the origin.
pub fn closed_form_nminus1(g: f64, phi: EnergyAngle) -> Result<(Amplitudes, ClosedFormBreakdown)> {
    let g2 = check_g(g)?.powi(2);
    let p = phi.value();
    let (s2, c2) = (2.0 * p).sin_cos();

    let lambda_num = g2 * s2;
    let lambda_den = 1.0 + g2 * c2;
    let t_minus_r = mobius(lambda_num, lambda_den);

    let mu_num = (1.0 - g2) * s2;
    let mu_den = 1.0 - 3.0 * g2 - c2 - g2 * c2;
    let t_plus_r = -phi.wave(-2) * mobius(mu_num, mu_den);

    let bd = ClosedFormBreakdown::phases(
        ratio(lambda_num, lambda_den),
        ratio(mu_num, mu_den),
        t_minus_r,
        t_plus_r,
    );
    Ok(assemble(t_minus_r, t_plus_r, phi, bd))
}

/// Adjacent blocks (`N = 0`), seven matching rows.
///
/// `T + R` comes from the central free row `psi_{-1} + psi_1 = 2 cos(phi) psi_0`
/// after eliminating the anomalous-site corrections, giving
/// `mu' = [-2 sin p + g^2 (2 sin p + sin 3p + sin 5p)] / [g^2 (2 cos p + cos 3p + cos 5p)]`.
pub fn closed_form_n0(g: f64, phi: EnergyAngle) -> Result<(Amplitudes, ClosedFormBreakdown)> {
    let g2 = check_g(g)?.powi(2);
    let p = phi.value();
    let (s1, c1) = p.sin_cos();
    let (s2, c2) = (2.0 * p).sin_cos();
    let (s3, c3) = (3.0 * p).sin_cos();
    let (s4, c4) = (4.0 * p).sin_cos();
    let (s5, c5) = (5.0 * p).sin_cos();

    let lambda_num = g2 * (2.0 * s2 + s4);
    let lambda_den = 1.0 + g2 * (2.0 * c2 + c4);
    let t_minus_r = mobius(lambda_num, lambda_den);

    let mu_num = -2.0 * s1 + g2 * (2.0 * s1 + s3 + s5);
    let mu_den = g2 * (2.0 * c1 + c3 + c5);
    let t_plus_r = -mobius(mu_num, mu_den);

    let bd = ClosedFormBreakdown::phases(
        ratio(lambda_num, lambda_den),
        ratio(mu_num, mu_den),
        t_minus_r,
        t_plus_r,
    );
    Ok(assemble(t_minus_r, t_plus_r, phi, bd))
}

/// Blocks separated by `2N + 1 >= 3` free sites.
///
/// With `A = e^{iN p} + g^2 (2 e^{i(N+2) p} + e^{i(N+4) p})` and
/// `B = e^{i(N+1) p} + g^2 e^{i(N+3) p}`:
/// `R - T = -conj(u)/u`, `u = B / sin((N+1) p) - A / sin(N p)` and
/// `R + T = -conj(v)/v`, `v = B / cos((N+1) p) - A / cos(N p)`.
pub fn closed_form_general(
    g: f64,
    gap: i64,
    phi: EnergyAngle,
) -> Result<(Amplitudes, ClosedFormBreakdown)> {
    let g2 = check_g(g)?.powi(2);
    if gap < 1 {
        return Err(Error::Domain(format!(
            "general closed form needs N >= 1, got {gap}"
        )));
    }
    let p = phi.value();
    let n = gap as f64;
    let (sin_n, cos_n) = (n * p).sin_cos();
    let (sin_n1, cos_n1) = ((n + 1.0) * p).sin_cos();
    if [sin_n, cos_n, sin_n1, cos_n1]
        .iter()
        .any(|x| x.abs() <= RESONANCE_GUARD)
    {
        return Err(Error::ResonantAngle {
            phi: p,
            reason: "sin or cos of N phi or (N+1) phi vanishes",
        });
    }

    let a = phi.wave(gap) + g2 * (2.0 * phi.wave(gap + 2) + phi.wave(gap + 4));
    let b = phi.wave(gap + 1) + g2 * phi.wave(gap + 3);
    let u = b / sin_n1 - a / sin_n;
    let v = b / cos_n1 - a / cos_n;
    if u.norm() < POLE_TOLERANCE || v.norm() < POLE_TOLERANCE {
        return Err(Error::ResonantAngle {
            phi: p,
            reason: "u or v vanishes",
        });
    }
    let r_minus_t = -u.conj() / u;
    let r_plus_t = -v.conj() / v;
    let t_minus_r = -r_minus_t;

    // C + D and C - D from the sum and difference relations at site -N
    let c_plus_d = (a.conj() + a * r_plus_t) / (2.0 * (1.0 - g2) * cos_n);
    let c_minus_d = (a.conj() + a * r_minus_t) / (-2.0 * I * (1.0 - g2) * sin_n);

    // conj(u)/u = (1 - i lambda)/(1 + i lambda) with lambda = Im u / Re u, likewise for v
    let bd = ClosedFormBreakdown {
        lambda: ratio(u.im, u.re),
        mu: ratio(v.im, v.re),
        alpha: t_minus_r.arg(),
        beta: r_plus_t.arg(),
        a_phi: Some(a),
        b_phi: Some(b),
        u_phi: Some(u),
        v_phi: Some(v),
        interior_c: Some(0.5 * (c_plus_d + c_minus_d)),
        interior_d: Some(0.5 * (c_plus_d - c_minus_d)),
    };
    Ok(assemble(t_minus_r, r_plus_t, phi, bd))
}

/// Dispatches on the gap of `spec`.
pub fn closed_form(
    spec: &TwoCenterSpec,
    phi: EnergyAngle,
) -> Result<(Amplitudes, ClosedFormBreakdown)> {
    match spec.gap() {
        -1 => closed_form_nminus1(spec.g(), phi),
        0 => closed_form_n0(spec.g(), phi),
        n => closed_form_general(spec.g(), n, phi),
    }
}
