//! Limiting variances, covariance kernels, and local Bahadur efficiencies.
//!
//! Every expectation under the standard law goes through `X = 1/Z^2`, which
//! turns the heavy right tail into a Gaussian one.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::dist::{std_cdf, AlternativeSpec};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_breaks};
use crate::special::erfcx;
use crate::stats::{reference::r_kernel, Family, JWeight, StatisticSpec};

pub use crate::quad::QuadratureConfig;

const Z_BREAKS: [f64; 10] = [0.0, 0.25, 0.5, 1.0, 1.5, 2.5, 4.0, 6.0, 9.0, 40.0];
const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
const SCAN_POINTS: usize = 2000;

/// `E h(X)` for `X` standard Levy.
pub fn levy_expectation<F: FnMut(f64) -> f64>(mut h: F, cfg: &QuadratureConfig) -> Result<f64> {
    let f = |z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        let w = (-0.5 * z * z).exp();
        if w == 0.0 {
            return 0.0;
        }
        SQRT_2_OVER_PI * h(1.0 / (z * z)) * w
    };
    integrate_breaks(f, &Z_BREAKS, cfg).map(|e| e.value)
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("t must lie in (0,1), got {t}")))
    }
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

pub(crate) fn psi_unchecked(x: f64, t: f64, a: f64, weight: JWeight) -> f64 {
    let l = -t.ln();
    let inner = -2.0 * t.powf(x / 4.0) * (-l.sqrt() * FRAC_1_SQRT_2).exp() + t.powf(x) + (-(2.0 * l).sqrt()).exp();
    0.5 * weight.eval(t, a) * inner
}

/// First projection of the `J` kernel at grid point `t`.
pub fn proj_psi(x: f64, t: f64, a: f64) -> Result<f64> {
    proj_psi_weighted(x, t, a, JWeight::Formula)
}

pub fn proj_psi_weighted(x: f64, t: f64, a: f64, weight: JWeight) -> Result<f64> {
    check_pos("x", x)?;
    check_pos("a", a)?;
    check_t(t)?;
    Ok(psi_unchecked(x, t, a, weight))
}

fn kernel_bracket(s: f64, t: f64) -> f64 {
    let ls = -s.ln();
    let lt = -t.ln();
    let (rs, rt) = (ls.sqrt(), lt.sqrt());
    -(-SQRT_2 * (rs + rt)).exp() - 2.0 * (-(2.0 * (ls + lt / 4.0)).sqrt() - (lt / 2.0).sqrt()).exp()
        - 2.0 * (-(2.0 * (lt + ls / 4.0)).sqrt() - (ls / 2.0).sqrt()).exp()
        + 4.0 * (-((ls + lt).sqrt() + rs + rt) * FRAC_1_SQRT_2).exp()
        + (-(2.0 * (ls + lt)).sqrt()).exp()
}

pub(crate) fn cov_unchecked(s: f64, t: f64, a: f64, weight: JWeight) -> f64 {
    weight.eval(s, a) * weight.eval(t, a) * kernel_bracket(s, t)
}

/// Covariance of the limiting Gaussian process of `sqrt(n) J`-type gaps.
pub fn cov_kernel(s: f64, t: f64, a: f64) -> Result<f64> {
    cov_kernel_weighted(s, t, a, JWeight::Formula)
}

pub fn cov_kernel_weighted(s: f64, t: f64, a: f64, weight: JWeight) -> Result<f64> {
    check_t(s)?;
    check_t(t)?;
    check_pos("a", a)?;
    Ok(cov_unchecked(s, t, a, weight))
}

/// The same covariance as a literal triple integral over three Levy variables.
pub fn cov_kernel_triple(s: f64, t: f64, a: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_t(s)?;
    check_t(t)?;
    check_pos("a", a)?;
    let pair = |u: f64, x: f64, y: f64| -2.0 * u.powf((x + y) / 4.0) + u.powf(y) + u.powf(x);
    let inner = QuadratureConfig { abs_tol: cfg.abs_tol * 1e-2, ..*cfg };
    let mut failure = None;
    let v = levy_expectation(
        |x| {
            let r = levy_expectation(
                |y| {
                    let py = pair(t, x, y);
                    levy_expectation(|z| pair(s, x, z) * py, &inner).unwrap_or_else(|e| {
                        failure.get_or_insert(e);
                        f64::NAN
                    })
                },
                &inner,
            );
            r.unwrap_or(f64::NAN)
        },
        cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let w = JWeight::Formula;
    Ok(w.eval(s, a) * w.eval(t, a) * v?)
}

/// `int_0^inf u^4 exp(-c u^2 - b u) du` in closed form.
pub fn quartic_gauss_moment(c: f64, b: f64) -> f64 {
    let p = b.powi(4) + 12.0 * b * b * c + 12.0 * c * c;
    PI.sqrt() * p * erfcx(b / (2.0 * c.sqrt())) / (32.0 * c.powf(4.5)) - (2.0 * b.powi(3) + 20.0 * b * c) / (32.0 * c.powi(4))
}

/// First projection of the `R` kernel.
pub fn proj_zeta(x: f64, a: f64) -> Result<f64> {
    check_pos("x", x)?;
    check_pos("a", a)?;
    Ok(zeta_unchecked(x, a))
}

pub(crate) fn zeta_unchecked(x: f64, a: f64) -> f64 {
    2.0 * quartic_gauss_moment(a + x / 4.0, FRAC_1_SQRT_2)
        - 3.0 * PI.sqrt() / 8.0 * (a + x).powf(-2.5)
        - quartic_gauss_moment(a, SQRT_2)
}

/// `E Z(x, Y; a)` by quadrature over the kernel.
pub fn proj_zeta_quadrature(x: f64, a: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_pos("x", x)?;
    check_pos("a", a)?;
    levy_expectation(|y| r_kernel(x, y, a), cfg)
}

pub fn sigma_r2(a: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_pos("a", a)?;
    let m = levy_expectation(
        |x| {
            let z = zeta_unchecked(x, a);
            z * z
        },
        cfg,
    )?;
    Ok(4.0 * m)
}

fn ab_scale(a: f64, b: f64) -> f64 {
    (a.sqrt() + b.sqrt()).powi(2)
}

/// First projection of the generalized integral statistic's kernel.
pub fn phi_ab(x: f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_pos("x", x)?;
    check_pos("a", a)?;
    check_pos("b", b)?;
    let c = ab_scale(a, b);
    let first = levy_expectation(|y| std_cdf((a * x + b * y) / c), cfg)?;
    let second = if a == b { first } else { levy_expectation(|y| std_cdf((a * y + b * x) / c), cfg)? };
    Ok(2.0 - first - second + std_cdf(x))
}

fn expect_phi<F: FnMut(f64) -> f64>(a: f64, b: f64, mut g: F, cfg: &QuadratureConfig) -> Result<f64> {
    let mut failure = None;
    let v = levy_expectation(
        |x| match phi_ab(x, a, b, cfg) {
            Ok(p) => g(p),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        cfg,
    );
    match failure {
        Some(e) => Err(e),
        None => v,
    }
}

pub fn phi_mean(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    expect_phi(a, b, |p| p, cfg)
}

pub fn sigma_0ab(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_pos("a", a)?;
    check_pos("b", b)?;
    let mean = phi_mean(a, b, cfg)?;
    expect_phi(a, b, |p| (p - mean) * (p - mean), cfg)
}

pub fn sigma_t2(cfg: &QuadratureConfig) -> Result<f64> {
    sigma_0ab(1.0, 1.0, cfg)
}

fn require_local(alt: &AlternativeSpec) -> Result<()> {
    if alt.is_local() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{} has no theta-score", alt.label())))
    }
}

fn score(alt: &AlternativeSpec, x: f64) -> f64 {
    alt.score_ratio(x).unwrap_or(f64::NAN)
}

/// The two integrals of the curvature: `int g'^2/f0` and `int g'/x`.
pub fn kl_parts(alt: &AlternativeSpec, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    require_local(alt)?;
    let first = levy_expectation(|x| score(alt, x).powi(2), cfg)?;
    let second = levy_expectation(|x| score(alt, x) / x, cfg)?;
    Ok((first, second))
}

/// Coefficient of `theta^2` in twice the minimal KL divergence to the null class.
pub fn kl_curvature(alt: &AlternativeSpec, cfg: &QuadratureConfig) -> Result<f64> {
    let (first, second) = kl_parts(alt, cfg)?;
    Ok(first - 0.5 * second * second)
}

/// Dense scan on (0,1) followed by golden-section refinement.
pub fn maximize_unit<F: FnMut(f64) -> Result<f64>>(mut f: F) -> Result<(f64, f64)> {
    let h = 1.0 / SCAN_POINTS as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 1..SCAN_POINTS {
        let v = f(k as f64 * h)?;
        if v > best.1 {
            best = (k, v);
        }
    }
    let (mut lo, mut hi) = ((best.0 as f64 - 1.0) * h, (best.0 as f64 + 1.0) * h);
    lo = lo.max(1e-12);
    hi = hi.min(1.0 - 1e-12);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let (t, v) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    Ok(if v >= best.1 { (t, v) } else { (best.0 as f64 * h, best.1) })
}

/// `sup_t K(t,t)` and its location.
pub fn sup_variance(a: f64, weight: JWeight) -> Result<(f64, f64)> {
    check_pos("a", a)?;
    maximize_unit(|t| Ok(cov_unchecked(t, t, a, weight)))
}

/// `A(t) = (int psi(x;t,a) g'(x) dx)^2`.
pub fn drift_squared(t: f64, a: f64, weight: JWeight, alt: &AlternativeSpec, cfg: &QuadratureConfig) -> Result<f64> {
    check_t(t)?;
    require_local(alt)?;
    let m = levy_expectation(|x| psi_unchecked(x, t, a, weight) * score(alt, x), cfg)?;
    Ok(m * m)
}

pub fn sup_drift(a: f64, weight: JWeight, alt: &AlternativeSpec, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    maximize_unit(|t| drift_squared(t, a, weight, alt, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyResult {
    pub statistic: StatisticSpec,
    pub alternative: AlternativeSpec,
    pub kl_curvature: f64,
    pub slope_coefficient: f64,
    pub efficiency: f64,
}

/// Coefficient of `theta^2` in the local approximate Bahadur slope.
pub fn bahadur_slope_coefficient(spec: &StatisticSpec, alt: &AlternativeSpec, cfg: &QuadratureConfig) -> Result<f64> {
    require_local(alt)?;
    spec.validate()?;
    match spec.family {
        Family::J { a, weight } => {
            let (_, num) = sup_drift(a, weight, alt, cfg)?;
            let (_, den) = sup_variance(a, weight)?;
            Ok(4.0 * num / den)
        }
        Family::R { a } | Family::Rstd { a, .. } => {
            let m = levy_expectation(|x| zeta_unchecked(x, a) * score(alt, x), cfg)?;
            Ok((2.0 * m).powi(2) / sigma_r2(a, cfg)?)
        }
        Family::Ibar { a, b } => {
            let m = expect_phi_score(a, b, alt, cfg)?;
            Ok(m * m / sigma_0ab(a, b, cfg)?)
        }
        _ => Err(Error::Unsupported(format!("slope of {}", spec.label()))),
    }
}

fn expect_phi_score(a: f64, b: f64, alt: &AlternativeSpec, cfg: &QuadratureConfig) -> Result<f64> {
    let mut failure = None;
    let v = levy_expectation(
        |x| match phi_ab(x, a, b, cfg) {
            Ok(p) => p * score(alt, x),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        cfg,
    );
    match failure {
        Some(e) => Err(e),
        None => v,
    }
}

pub fn efficiency(spec: &StatisticSpec, alt: &AlternativeSpec, cfg: &QuadratureConfig) -> Result<EfficiencyResult> {
    let kl = kl_curvature(alt, cfg)?;
    let slope = bahadur_slope_coefficient(spec, alt, cfg)?;
    Ok(EfficiencyResult {
        statistic: *spec,
        alternative: *alt,
        kl_curvature: kl,
        slope_coefficient: slope,
        efficiency: slope / kl,
    })
}

/// Row-major matrix of efficiencies; failed cells carry their error text.
pub fn efficiency_table(
    specs: &[StatisticSpec],
    alts: &[AlternativeSpec],
    cfg: &QuadratureConfig,
) -> Vec<Vec<std::result::Result<EfficiencyResult, String>>> {
    use rayon::prelude::*;
    specs
        .par_iter()
        .map(|s| alts.iter().map(|a| efficiency(s, a, cfg).map_err(|e| e.to_string())).collect())
        .collect()
}

/// The five alternatives of the efficiency tables, in column order.
pub fn local_alternatives() -> [AlternativeSpec; 5] {
    [
        AlternativeSpec::LevyMixture { lambda: 10.0, theta: 0.0 },
        AlternativeSpec::Lehmann { theta: 0.0 },
        AlternativeSpec::Contamination { beta: 3.0, theta: 0.0 },
        AlternativeSpec::LeyPaindaveine1 { theta: 0.0 },
        AlternativeSpec::LeyPaindaveine2 { theta: 0.0 },
    ]
}

/// Upper `alpha` quantile of `|N(0, sigma_R^2(a))|`, the limit of `|sqrt(n) R|`.
pub fn r_limit_quantile(a: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let z = std::f64::consts::SQRT_2 * crate::special::erfc_inv(alpha);
    Ok(z * sigma_r2(a, cfg)?.sqrt())
}

/// One-dimensional integral helper on a finite range.
pub fn integral(f: impl FnMut(f64) -> f64, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate(f, lo, hi, cfg).map(|e| e.value)
}
