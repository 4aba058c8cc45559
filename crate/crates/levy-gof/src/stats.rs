//! Test statistics and their rejection directions.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::dist::std_cdf;
use crate::error::{check_sample, Error, Result};
use crate::estimate::{estimate_lambda, EstimatorKind};

pub const GRID_SIZE: usize = 1000;

/// 3 sqrt(pi) / 4
pub const R_SCALE: f64 = 1.329_340_388_179_137;

/// Weight applied to the Laplace-transform gap in `J`.
///
/// `Formula` is `t^a (-ln t)^{3/2}`. `Tabulated` is `t^a (-ln t)^3 / 2`, the
/// weight under which the published critical values and powers were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JWeight {
    Formula,
    Tabulated,
}

impl JWeight {
    pub fn eval(self, t: f64, a: f64) -> f64 {
        let l = -t.ln();
        match self {
            JWeight::Formula => t.powf(a) * l * l.sqrt(),
            JWeight::Tabulated => t.powf(a) * l * l * l / 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    J { a: f64, weight: JWeight },
    R { a: f64 },
    Rstd { a: f64, sigma: f64 },
    Ibar { a: f64, b: f64 },
    Ks,
    Cvm,
    Ad,
    N1a,
    N1b,
}

impl Family {
    pub fn default_tail(&self) -> Tail {
        match self {
            Family::J { .. } | Family::Ks | Family::Cvm | Family::Ad => Tail::Upper,
            Family::R { .. } | Family::Rstd { .. } | Family::Ibar { .. } => Tail::Absolute,
            Family::N1a | Family::N1b => Tail::EqualTail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// large values reject
    Upper,
    /// large |T| rejects
    Absolute,
    /// both tails at alpha/2 each
    EqualTail,
    /// large |T| rejects, used as the alternative two-sided rule for N1
    Symmetric,
}

impl Tail {
    pub fn label(&self) -> &'static str {
        match self {
            Tail::Upper => "upper",
            Tail::Absolute => "absolute",
            Tail::EqualTail => "equal-tail",
            Tail::Symmetric => "symmetric",
        }
    }
}

impl std::str::FromStr for Tail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upper" => Ok(Tail::Upper),
            "absolute" | "abs" => Ok(Tail::Absolute),
            "equal-tail" | "equal" => Ok(Tail::EqualTail),
            "symmetric" | "sym" => Ok(Tail::Symmetric),
            other => Err(Error::Domain(format!("unknown tail '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticSpec {
    pub family: Family,
    pub estimator: EstimatorKind,
    pub tail: Tail,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

impl StatisticSpec {
    pub fn new(family: Family, estimator: EstimatorKind) -> Self {
        StatisticSpec { family, estimator, tail: family.default_tail() }
    }

    /// Overrides the rejection direction.
    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn j(a: f64, estimator: EstimatorKind) -> Self {
        Self::new(Family::J { a, weight: JWeight::Formula }, estimator)
    }

    pub fn j_tabulated(a: f64, estimator: EstimatorKind) -> Self {
        Self::new(Family::J { a, weight: JWeight::Tabulated }, estimator)
    }

    pub fn r(a: f64, estimator: EstimatorKind) -> Self {
        Self::new(Family::R { a }, estimator)
    }

    pub fn ibar(a: f64, b: f64) -> Self {
        Self::new(Family::Ibar { a, b }, EstimatorKind::Mle)
    }

    /// Switches an `N1` statistic to the symmetric |T| rejection rule.
    pub fn symmetric(mut self) -> Self {
        if matches!(self.family, Family::N1a | Family::N1b) {
            self.tail = Tail::Symmetric;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.family {
            Family::J { a, .. } | Family::R { a } => positive("a", a),
            Family::Rstd { a, sigma } => positive("a", a).and(positive("sigma", sigma)),
            Family::Ibar { a, b } => positive("a", a).and(positive("b", b)),
            _ => Ok(()),
        }
    }

    pub fn uses_estimator(&self) -> bool {
        !matches!(self.family, Family::Ibar { .. } | Family::N1a | Family::N1b)
    }

    pub fn label(&self) -> String {
        let base = match self.family {
            Family::J { a, weight: JWeight::Formula } => format!("J{a}*"),
            Family::J { a, .. } => format!("J{a}"),
            Family::R { a } => format!("R{a}"),
            Family::Rstd { a, .. } => format!("Rstd{a}"),
            Family::Ibar { a, b } => format!("I[{a},{b}]"),
            Family::Ks => "KS".into(),
            Family::Cvm => "CVM".into(),
            Family::Ad => "AD".into(),
            Family::N1a => "N1a".into(),
            Family::N1b => "N1b".into(),
        };
        let base = if self.uses_estimator() { format!("{base}/{}", self.estimator.label()) } else { base };
        if self.tail == self.family.default_tail() {
            base
        } else {
            format!("{base} {}", self.tail.label())
        }
    }

    pub fn evaluate(&self, sample: &[f64]) -> Result<f64> {
        evaluate_many(std::slice::from_ref(self), sample).map(|v| v[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticValue {
    pub value: f64,
    pub n: usize,
    pub spec: StatisticSpec,
}

fn ln_grid() -> &'static [f64] {
    static GRID: OnceLock<Vec<f64>> = OnceLock::new();
    GRID.get_or_init(|| (1..GRID_SIZE).map(|k| (k as f64 / GRID_SIZE as f64).ln()).collect())
}

/// Grid points `k/1000` for `k = 1..999`; the `t = 1` term is identically zero.
pub fn j_grid() -> Vec<f64> {
    (1..GRID_SIZE).map(|k| k as f64 / GRID_SIZE as f64).collect()
}

/// `M(t/4)^2 - M(t)` on the grid, with `M(t) = mean t^{Y_i}`.
pub fn j_profile(y: &[f64]) -> Vec<f64> {
    let lg = ln_grid();
    let n = y.len() as f64;
    let mut quarter = vec![0.0; lg.len()];
    let mut full = vec![0.0; lg.len()];
    for &yi in y {
        let s = 0.25 * yi;
        for (k, &l) in lg.iter().enumerate() {
            let e = (s * l).exp();
            let e2 = e * e;
            quarter[k] += e;
            full[k] += e2 * e2;
        }
    }
    quarter
        .iter()
        .zip(&full)
        .map(|(q, f)| {
            let q = q / n;
            q * q - f / n
        })
        .collect()
}

pub fn j_from_profile(profile: &[f64], a: f64, weight: JWeight) -> f64 {
    profile
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let t = (k + 1) as f64 / GRID_SIZE as f64;
            (d * weight.eval(t, a)).abs()
        })
        .fold(0.0, f64::max)
}

fn scaled(sample: &[f64], estimator: EstimatorKind) -> Result<Vec<f64>> {
    let lambda = estimate_lambda(sample, estimator)?;
    Ok(sample.iter().map(|x| x / lambda).collect())
}

pub fn stat_j(sample: &[f64], a: f64, estimator: EstimatorKind) -> Result<StatisticValue> {
    stat_j_weighted(sample, a, estimator, JWeight::Formula)
}

pub fn stat_j_weighted(sample: &[f64], a: f64, estimator: EstimatorKind, weight: JWeight) -> Result<StatisticValue> {
    let spec = StatisticSpec::new(Family::J { a, weight }, estimator);
    spec.validate()?;
    let y = scaled(sample, estimator)?;
    Ok(StatisticValue { value: j_from_profile(&j_profile(&y), a, weight), n: y.len(), spec })
}

#[inline]
fn pow_m52(v: f64) -> f64 {
    1.0 / (v * v * v.sqrt())
}

/// V-statistic form of `R` on already scaled data.
pub fn r_value(y: &[f64], a: f64) -> f64 {
    let n = y.len();
    let mut diag = 0.0;
    let mut off = 0.0;
    let mut single = 0.0;
    for (i, &yi) in y.iter().enumerate() {
        diag += pow_m52(a + 0.5 * yi);
        single += pow_m52(a + yi);
        let base = a + 0.25 * yi;
        let mut row = 0.0;
        for &yj in &y[i + 1..] {
            row += pow_m52(base + 0.25 * yj);
        }
        off += row;
    }
    let nf = n as f64;
    R_SCALE * ((diag + 2.0 * off) / (nf * nf) - single / nf)
}

pub fn stat_r(sample: &[f64], a: f64, estimator: EstimatorKind) -> Result<StatisticValue> {
    let spec = StatisticSpec::r(a, estimator);
    spec.validate()?;
    let y = scaled(sample, estimator)?;
    Ok(StatisticValue { value: r_value(&y, a), n: y.len(), spec })
}

pub fn stat_r_standardized(sample: &[f64], a: f64, estimator: EstimatorKind, sigma: f64) -> Result<StatisticValue> {
    let spec = StatisticSpec::new(Family::Rstd { a, sigma }, estimator);
    spec.validate()?;
    let r = stat_r(sample, a, estimator)?;
    Ok(StatisticValue { value: (r.n as f64).sqrt() / sigma * r.value, n: r.n, spec })
}

/// Integer tallies behind `Ibar`: pair-indicator total and empirical-df total.
pub(crate) fn ibar_counts(sorted: &[f64], a: f64, b: f64) -> (u64, u64) {
    let n = sorted.len();
    let c = (a.sqrt() + b.sqrt()).powi(2);
    let mut pairs = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((a * sorted[i] + b * sorted[j]) / c);
            }
        }
    }
    pairs.sort_unstable_by(f64::total_cmp);
    let mut g = 0u64;
    let mut f = 0u64;
    let mut p = 0usize;
    let mut q = 0usize;
    for &x in sorted {
        while p < pairs.len() && pairs[p] <= x {
            p += 1;
        }
        while q < n && sorted[q] <= x {
            q += 1;
        }
        g += p as u64;
        f += q as u64;
    }
    (g, f)
}

pub(crate) fn ibar_from_counts(n: usize, g: u64, f: u64) -> f64 {
    let nf = n as f64;
    (g as f64 / (nf * (nf - 1.0)) - f as f64 / nf) / nf
}

pub fn stat_ibar(sample: &[f64], a: f64, b: f64) -> Result<StatisticValue> {
    let spec = StatisticSpec::ibar(a, b);
    spec.validate()?;
    check_sample(sample)?;
    if sample.len() < 2 {
        return Err(Error::Domain("Ibar needs at least two observations".into()));
    }
    let mut x = sample.to_vec();
    x.sort_unstable_by(f64::total_cmp);
    let (g, f) = ibar_counts(&x, a, b);
    Ok(StatisticValue { value: ibar_from_counts(x.len(), g, f), n: x.len(), spec })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdfKind {
    Ks,
    Cvm,
    Ad,
}

const AD_CLAMP: f64 = 1e-15;

fn edf_on_sorted_u(u: &[f64], which: EdfKind) -> f64 {
    let n = u.len();
    let nf = n as f64;
    match which {
        EdfKind::Ks => u
            .iter()
            .enumerate()
            .map(|(i, &ui)| ((i + 1) as f64 / nf - ui).max(ui - i as f64 / nf))
            .fold(0.0, f64::max),
        EdfKind::Cvm => {
            1.0 / (12.0 * nf)
                + u.iter()
                    .enumerate()
                    .map(|(i, &ui)| {
                        let d = ui - (2 * i + 1) as f64 / (2.0 * nf);
                        d * d
                    })
                    .sum::<f64>()
        }
        EdfKind::Ad => {
            let cl = |v: f64| v.clamp(AD_CLAMP, 1.0 - AD_CLAMP);
            let s: f64 = (0..n)
                .map(|i| {
                    let lo = cl(u[i]);
                    let hi = cl(u[n - 1 - i]);
                    (2 * i + 1) as f64 * (lo.ln() + (-hi).ln_1p())
                })
                .sum();
            let v = -nf - s / nf;
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        }
    }
}

pub fn stat_edf(sample: &[f64], which: EdfKind, estimator: EstimatorKind) -> Result<StatisticValue> {
    let family = match which {
        EdfKind::Ks => Family::Ks,
        EdfKind::Cvm => Family::Cvm,
        EdfKind::Ad => Family::Ad,
    };
    let spec = StatisticSpec::new(family, estimator);
    let mut y = scaled(sample, estimator)?;
    y.sort_unstable_by(f64::total_cmp);
    let u: Vec<f64> = y.iter().map(|&v| std_cdf(v)).collect();
    Ok(StatisticValue { value: edf_on_sorted_u(&u, which), n: y.len(), spec })
}

fn window(n: usize, aq: f64, bq: f64) -> (usize, usize) {
    let lo = (n as f64 * aq + 1e-9).floor() as usize;
    let hi = ((n as f64 * bq + 1e-9).floor() as usize).min(n);
    (lo, hi)
}

fn window_variance(sorted: &[f64], aq: f64, bq: f64) -> Result<f64> {
    let (lo, hi) = window(sorted.len(), aq, bq);
    if hi <= lo {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let w = &sorted[lo..hi];
    let m = w.iter().sum::<f64>() / w.len() as f64;
    Ok(w.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / w.len() as f64)
}

/// Variance of the order statistics with ranks `[n aq]+1 ..= [n bq]`.
pub fn quantile_cond_variance(sample: &[f64], aq: f64, bq: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&aq) || !(bq > 0.0 && bq <= 1.0) {
        return Err(Error::Domain(format!("quantile window ({aq}, {bq}) out of range")));
    }
    check_sample(sample)?;
    let mut x = sample.to_vec();
    x.sort_unstable_by(f64::total_cmp);
    window_variance(&x, aq, bq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum N1Variant {
    A,
    B,
}

fn n1_on_sorted(sorted: &[f64], variant: N1Variant) -> Result<f64> {
    let lower = window_variance(sorted, 0.05, 0.25)?;
    let upper = window_variance(sorted, 0.75, 0.95)?;
    let whole = window_variance(sorted, 0.05, 0.95)?;
    if whole == 0.0 {
        return Err(Error::Degenerate("zero central variance".into()));
    }
    let num = match variant {
        N1Variant::A => lower - upper,
        N1Variant::B => 2.00 * lower - 1.01 * upper,
    };
    Ok((sorted.len() as f64).sqrt() * num / whole)
}

pub fn stat_n1(sample: &[f64], variant: N1Variant) -> Result<StatisticValue> {
    check_sample(sample)?;
    let mut x = sample.to_vec();
    x.sort_unstable_by(f64::total_cmp);
    let family = match variant {
        N1Variant::A => Family::N1a,
        N1Variant::B => Family::N1b,
    };
    Ok(StatisticValue {
        value: n1_on_sorted(&x, variant)?,
        n: x.len(),
        spec: StatisticSpec::new(family, EstimatorKind::Mle),
    })
}

#[derive(Default)]
struct Scaled {
    y: Option<Vec<f64>>,
    profile: Option<Vec<f64>>,
    u: Option<Vec<f64>>,
}

/// Evaluates several statistics on one sample, sharing estimator, sorting
/// and `J` profile work.
pub fn evaluate_many(specs: &[StatisticSpec], sample: &[f64]) -> Result<Vec<f64>> {
    check_sample(sample)?;
    let mut cache: [Scaled; 2] = Default::default();
    let mut sorted: Option<Vec<f64>> = None;
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        spec.validate()?;
        let slot = match spec.estimator {
            EstimatorKind::Mle => 0,
            EstimatorKind::Mbe => 1,
        };
        if spec.uses_estimator() && cache[slot].y.is_none() {
            cache[slot].y = Some(scaled(sample, spec.estimator)?);
        }
        let entry = &mut cache[slot];
        let value = match spec.family {
            Family::J { a, weight } => {
                let y = entry.y.as_ref().expect("scaled above");
                let prof = entry.profile.get_or_insert_with(|| j_profile(y));
                j_from_profile(prof, a, weight)
            }
            Family::R { a } => r_value(entry.y.as_ref().expect("scaled above"), a),
            Family::Rstd { a, sigma } => {
                (sample.len() as f64).sqrt() / sigma * r_value(entry.y.as_ref().expect("scaled above"), a)
            }
            Family::Ks | Family::Cvm | Family::Ad => {
                let y = entry.y.as_ref().expect("scaled above");
                let u = entry.u.get_or_insert_with(|| {
                    let mut u: Vec<f64> = y.iter().map(|&v| std_cdf(v)).collect();
                    u.sort_unstable_by(f64::total_cmp);
                    u
                });
                let kind = match spec.family {
                    Family::Ks => EdfKind::Ks,
                    Family::Cvm => EdfKind::Cvm,
                    _ => EdfKind::Ad,
                };
                edf_on_sorted_u(u, kind)
            }
            Family::Ibar { a, b } => {
                if sample.len() < 2 {
                    return Err(Error::Domain("Ibar needs at least two observations".into()));
                }
                let x = sorted.get_or_insert_with(|| sorted_copy(sample));
                let (g, f) = ibar_counts(x, a, b);
                ibar_from_counts(x.len(), g, f)
            }
            Family::N1a | Family::N1b => {
                let x = sorted.get_or_insert_with(|| sorted_copy(sample));
                let v = if spec.family == Family::N1a { N1Variant::A } else { N1Variant::B };
                n1_on_sorted(x, v)?
            }
        };
        out.push(value);
    }
    Ok(out)
}

fn sorted_copy(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Brute-force versions used as oracles for the fast paths.
pub mod reference {
    use super::*;

    /// Symmetric kernel of the `R` V-statistic.
    pub fn r_kernel(x: f64, y: f64, a: f64) -> f64 {
        R_SCALE * (pow_m52(a + (x + y) / 4.0) - 0.5 * pow_m52(a + x) - 0.5 * pow_m52(a + y))
    }

    pub fn r_brute(y: &[f64], a: f64) -> f64 {
        let n = y.len() as f64;
        let mut s = 0.0;
        for &yi in y {
            for &yj in y {
                s += r_kernel(yi, yj, a);
            }
        }
        s / (n * n)
    }

    /// `J` profile from the unfactorized double sum.
    pub fn j_profile_naive(y: &[f64]) -> Vec<f64> {
        let n = y.len() as f64;
        j_grid()
            .iter()
            .map(|&t| {
                let mut double = 0.0;
                for &yi in y {
                    for &yj in y {
                        double += t.powf((yi + yj) / 4.0);
                    }
                }
                let single: f64 = y.iter().map(|&yi| t.powf(yi)).sum();
                double / (n * n) - single / n
            })
            .collect()
    }

    pub fn ibar_brute(x: &[f64], a: f64, b: f64) -> f64 {
        let n = x.len();
        let c = (a.sqrt() + b.sqrt()).powi(2);
        let mut g = 0u64;
        let mut f = 0u64;
        for &xk in x {
            for i in 0..n {
                for j in 0..n {
                    if i != j && (a * x[i] + b * x[j]) / c <= xk {
                        g += 1;
                    }
                }
                if x[i] <= xk {
                    f += 1;
                }
            }
        }
        ibar_from_counts(n, g, f)
    }
}

#[cfg(test)]
mod tests {
    use super::reference::*;
    use super::*;
    use std::f64::consts::PI;
    use crate::dist::{levy_sample, LevyScale, RngStream};
    use proptest::prelude::*;

    #[test]
    fn r_scale_constant() {
        assert!((3.0 * PI.sqrt() / 4.0 - R_SCALE).abs() < 1e-15);
    }

    #[test]
    fn j_single_point() {
        let v = stat_j(&[3.7], 1.0, EstimatorKind::Mle).unwrap().value;
        let expect = j_grid()
            .iter()
            .map(|&t| ((t.sqrt() - t) * t * (-t.ln()).powf(1.5)).abs())
            .fold(0.0, f64::max);
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn r_single_point() {
        let v = stat_r(&[0.3], 1.0, EstimatorKind::Mle).unwrap().value;
        let expect = R_SCALE * (1.5f64.powf(-2.5) - 2f64.powf(-2.5));
        assert!((v - expect).abs() < 1e-15);
        assert!((v - 0.247_405).abs() < 1e-6, "{v}");
    }

    #[test]
    fn r_standardized_is_linear() {
        let x = levy_sample(40, LevyScale::STANDARD, RngStream::new(1, 1)).unwrap();
        let r = stat_r(&x, 1.0, EstimatorKind::Mle).unwrap().value;
        let s = stat_r_standardized(&x, 1.0, EstimatorKind::Mle, 0.143_835_6).unwrap().value;
        assert_eq!(s, 40f64.sqrt() / 0.143_835_6 * r);
    }

    #[test]
    fn ibar_hand_example() {
        let v = stat_ibar(&[1.0, 2.0, 3.0], 1.0, 1.0).unwrap().value;
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(ibar_brute(&[1.0, 2.0, 3.0], 1.0, 1.0), v);
    }

    #[test]
    fn ks_single_point() {
        let v = stat_edf(&[5.0], EdfKind::Ks, EstimatorKind::Mle).unwrap().value;
        assert!((v - 0.682_689_492_137_085_9).abs() < 1e-12);
    }

    #[test]
    fn cvm_minimum() {
        let n = 7;
        let u: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64 / (2.0 * n as f64)).collect();
        assert!((edf_on_sorted_u(&u, EdfKind::Cvm) - 1.0 / (12.0 * n as f64)).abs() < 1e-15);
    }

    #[test]
    fn ad_is_finite_for_extreme_u() {
        let v = edf_on_sorted_u(&[0.0, 0.5, 1.0], EdfKind::Ad);
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn quantile_variance_examples() {
        let x: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(quantile_cond_variance(&x, 0.0, 0.5).unwrap(), 2.0);
        assert_eq!(quantile_cond_variance(&[4.0; 6], 0.2, 0.9).unwrap(), 0.0);
        let full = quantile_cond_variance(&x, 0.0, 1.0).unwrap();
        assert!((full - 8.25).abs() < 1e-12);
        assert!(matches!(quantile_cond_variance(&x, 0.3, 0.35), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn n1_needs_spread() {
        assert!(matches!(stat_n1(&[2.0; 40], N1Variant::A), Err(Error::Degenerate(_))));
    }

    #[test]
    fn evaluate_many_matches_single_calls() {
        let x = levy_sample(30, LevyScale::new(2.5).unwrap(), RngStream::new(9, 9)).unwrap();
        let specs = [
            StatisticSpec::j(2.0, EstimatorKind::Mbe),
            StatisticSpec::j_tabulated(1.0, EstimatorKind::Mle),
            StatisticSpec::r(0.5, EstimatorKind::Mbe),
            StatisticSpec::ibar(2.0, 3.0),
            StatisticSpec::new(Family::Ad, EstimatorKind::Mle),
            StatisticSpec::new(Family::N1b, EstimatorKind::Mle),
        ];
        let many = evaluate_many(&specs, &x).unwrap();
        assert_eq!(many[0], stat_j(&x, 2.0, EstimatorKind::Mbe).unwrap().value);
        assert_eq!(many[1], stat_j_weighted(&x, 1.0, EstimatorKind::Mle, JWeight::Tabulated).unwrap().value);
        assert_eq!(many[2], stat_r(&x, 0.5, EstimatorKind::Mbe).unwrap().value);
        assert_eq!(many[3], stat_ibar(&x, 2.0, 3.0).unwrap().value);
        assert_eq!(many[4], stat_edf(&x, EdfKind::Ad, EstimatorKind::Mle).unwrap().value);
        assert_eq!(many[5], stat_n1(&x, N1Variant::B).unwrap().value);
    }

    #[test]
    fn tails_follow_family() {
        assert_eq!(StatisticSpec::j(1.0, EstimatorKind::Mle).tail, Tail::Upper);
        assert_eq!(StatisticSpec::r(1.0, EstimatorKind::Mle).tail, Tail::Absolute);
        assert_eq!(StatisticSpec::ibar(1.0, 1.0).tail, Tail::Absolute);
        let n1 = StatisticSpec::new(Family::N1a, EstimatorKind::Mle);
        assert_eq!(n1.tail, Tail::EqualTail);
        assert_eq!(n1.symmetric().tail, Tail::Symmetric);
        assert_eq!(StatisticSpec::r(1.0, EstimatorKind::Mle).symmetric().tail, Tail::Absolute);
        let upper = StatisticSpec::ibar(1.0, 1.0).with_tail(Tail::Upper);
        assert_eq!(upper.label(), "I[1,1] upper");
        assert_eq!(StatisticSpec::ibar(1.0, 1.0).label(), "I[1,1]");
        assert_eq!("abs".parse::<Tail>().unwrap(), Tail::Absolute);
    }

    #[test]
    fn j_consistent_under_weibull() {
        use crate::dist::{alt_sample, AlternativeSpec};
        let alt = AlternativeSpec::Weibull { a: 2.0, b: 1.0 };
        let med = |n: usize| {
            let v: Vec<f64> = (0..100)
                .map(|r| {
                    let x = alt_sample(n, &alt, RngStream::new(31, r)).unwrap();
                    (n as f64).sqrt() * stat_j(&x, 1.0, EstimatorKind::Mle).unwrap().value
                })
                .collect();
            crate::estimate::median(&v)
        };
        assert!(med(400) > med(50));
    }

    fn all_specs() -> Vec<StatisticSpec> {
        let mut v = Vec::new();
        for est in [EstimatorKind::Mle, EstimatorKind::Mbe] {
            v.push(StatisticSpec::j(1.0, est));
            v.push(StatisticSpec::j_tabulated(5.0, est));
            v.push(StatisticSpec::r(0.5, est));
            v.push(StatisticSpec::new(Family::Rstd { a: 2.0, sigma: 0.1 }, est));
            v.push(StatisticSpec::new(Family::Ks, est));
            v.push(StatisticSpec::new(Family::Cvm, est));
            v.push(StatisticSpec::new(Family::Ad, est));
        }
        v.push(StatisticSpec::ibar(1.0, 1.0));
        v.push(StatisticSpec::ibar(2.0, 7.0));
        v.push(StatisticSpec::new(Family::N1a, EstimatorKind::Mle));
        v.push(StatisticSpec::new(Family::N1b, EstimatorKind::Mle));
        v
    }

    fn positive_sample(max: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1e-3f64..1e3, 2..max)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn j_factorized_equals_naive(y in positive_sample(30)) {
            let fast = j_profile(&y);
            let slow = j_profile_naive(&y);
            for (f, s) in fast.iter().zip(&slow) {
                prop_assert!((f - s).abs() < 1e-12);
            }
        }

        #[test]
        fn r_equals_kernel_sum(y in positive_sample(20), a in 0.1f64..10.0) {
            let fast = r_value(&y, a);
            let slow = r_brute(&y, a);
            prop_assert!((fast - slow).abs() < 1e-12 * (1.0 + slow.abs()));
        }

        #[test]
        fn ibar_equals_brute(x in positive_sample(15), a in 0.5f64..10.0, b in 0.5f64..10.0) {
            let fast = stat_ibar(&x, a, b).unwrap().value;
            prop_assert_eq!(fast, ibar_brute(&x, a, b));
        }

        #[test]
        fn exact_scale_invariance(x in positive_sample(40), e in -6i32..7) {
            let specs = all_specs();
            let c = 2f64.powi(e);
            let y: Vec<f64> = x.iter().map(|v| v * c).collect();
            prop_assert_eq!(evaluate_many(&specs, &x), evaluate_many(&specs, &y));
        }

        #[test]
        fn scale_invariance(x in positive_sample(40), c in 1e-3f64..1e3) {
            let specs: Vec<StatisticSpec> =
                all_specs().into_iter().filter(|s| !matches!(s.family, Family::Ibar { .. })).collect();
            let y: Vec<f64> = x.iter().map(|v| v * c).collect();
            if let (Ok(p), Ok(q)) = (evaluate_many(&specs, &x), evaluate_many(&specs, &y)) {
                for (u, v) in p.iter().zip(&q) {
                    prop_assert!((u - v).abs() <= 1e-9 * (1.0 + u.abs()), "{} vs {}", u, v);
                }
            }
        }

        #[test]
        fn ibar_with_ties_equals_brute(k in prop::collection::vec(1u8..6, 2..15)) {
            let x: Vec<f64> = k.iter().map(|&v| f64::from(v)).collect();
            prop_assert_eq!(stat_ibar(&x, 1.0, 1.0).unwrap().value, ibar_brute(&x, 1.0, 1.0));
        }
    }
}
