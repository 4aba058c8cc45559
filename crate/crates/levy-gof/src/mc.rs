//! Monte Carlo null distributions, p-values, critical values and power.
//!
//! Replication `r` of a null run draws from `RngStream(seed, r)`; replication
//! `r` of an alternative run draws from `RngStream(seed, ALT_STREAM | r)`.
//! Results are collected in replication order, so the thread count never
//! changes an answer.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{alt_sample, levy_sample, AlternativeSpec, LevyScale, RngStream};
use crate::error::{Error, Result};
use crate::stats::{evaluate_many, StatisticSpec, Tail};

pub const ALT_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub replications: usize,
    pub sample_size: usize,
    pub alpha: f64,
    pub seed: u64,
    pub null_lambda: f64,
    /// Worker count; `None` uses the global rayon pool.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig { replications: 10_000, sample_size: 50, alpha: 0.05, seed: 0, null_lambda: 1.0, threads: None }
    }
}

impl MCConfig {
    pub fn new(replications: usize, sample_size: usize) -> Self {
        MCConfig { replications, sample_size, ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.null_lambda = lambda;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        if self.sample_size == 0 {
            return Err(Error::EmptySample);
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0,1), got {}", self.alpha)));
        }
        if self.threads == Some(0) {
            return Err(Error::Domain("threads must be at least 1".into()));
        }
        LevyScale::new(self.null_lambda).map(|_| ())
    }
}

/// Runs `f(r)` for `r in 0..count` and returns the results in index order.
fn run_indexed<T, F>(count: usize, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let job = || (0..count as u64).into_par_iter().map(&f).collect::<Vec<Result<T>>>();
    let results = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(job),
        None => job(),
    };
    let failed = results.iter().filter(|r| r.is_err()).count();
    if failed > 0 {
        let first = results.iter().find_map(|r| r.as_ref().err()).map(|e| e.to_string()).unwrap_or_default();
        return Err(Error::Replications { failed, total: count, first });
    }
    Ok(results.into_iter().map(|r| r.expect("checked above")).collect())
}

fn transpose(rows: Vec<Vec<f64>>, width: usize) -> Vec<Vec<f64>> {
    let mut cols = vec![Vec::with_capacity(rows.len()); width];
    for row in rows {
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    cols
}

/// Null values of every spec, one column per spec, in replication order.
/// All specs see the same samples.
pub fn mc_null_statistics(specs: &[StatisticSpec], cfg: &MCConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    for s in specs {
        s.validate()?;
    }
    let scale = LevyScale::new(cfg.null_lambda)?;
    let rows = run_indexed(cfg.replications, cfg.threads, |r| {
        let x = levy_sample(cfg.sample_size, scale, RngStream::new(cfg.seed, r))?;
        evaluate_many(specs, &x)
    })?;
    Ok(transpose(rows, specs.len()))
}

/// Sorted null values of `spec`.
pub fn mc_null_distribution(spec: &StatisticSpec, cfg: &MCConfig) -> Result<Vec<f64>> {
    let mut v = mc_null_statistics(std::slice::from_ref(spec), cfg)?.pop().expect("one column");
    v.sort_unstable_by(f64::total_cmp);
    Ok(v)
}

/// Values of every spec on samples from `alt`, one column per spec.
pub fn mc_alt_statistics(alt: &AlternativeSpec, specs: &[StatisticSpec], cfg: &MCConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    alt.validate()?;
    let rows = run_indexed(cfg.replications, cfg.threads, |r| {
        let x = alt_sample(cfg.sample_size, alt, RngStream::new(cfg.seed, ALT_STREAM | r))?;
        evaluate_many(specs, &x)
    })?;
    Ok(transpose(rows, specs.len()))
}

fn oriented(v: f64, tail: Tail) -> f64 {
    match tail {
        Tail::Absolute | Tail::Symmetric => v.abs(),
        Tail::Upper | Tail::EqualTail => v,
    }
}

fn order_index(p: f64, n: usize) -> usize {
    ((p * n as f64 - 1e-9).ceil() as usize).clamp(1, n) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectionRegion {
    pub tail: Tail,
    /// Lower cut for equal-tail tests.
    pub lower: Option<f64>,
    /// Upper cut, on `|T|` for absolute and symmetric tails.
    pub upper: f64,
}

impl RejectionRegion {
    pub fn from_null(null: &[f64], tail: Tail, alpha: f64) -> Result<Self> {
        if null.is_empty() {
            return Err(Error::EmptySample);
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        let mut o: Vec<f64> = null.iter().map(|&v| oriented(v, tail)).collect();
        o.sort_unstable_by(f64::total_cmp);
        let n = o.len();
        Ok(match tail {
            Tail::EqualTail => {
                let hi = order_index(1.0 - alpha / 2.0, n);
                RejectionRegion { tail, lower: Some(o[n - 1 - hi]), upper: o[hi] }
            }
            _ => RejectionRegion { tail, lower: None, upper: o[order_index(1.0 - alpha, n)] },
        })
    }

    pub fn rejects(&self, v: f64) -> bool {
        let o = oriented(v, self.tail);
        o > self.upper || self.lower.is_some_and(|lo| o < lo)
    }

    pub fn rejection_rate(&self, values: &[f64]) -> f64 {
        values.iter().filter(|&&v| self.rejects(v)).count() as f64 / values.len() as f64
    }
}

/// Smoothed Monte Carlo p-value of `observed` against null draws.
pub fn p_value(observed: f64, null: &[f64], tail: Tail) -> f64 {
    let n = null.len() as f64;
    let count = |pred: &dyn Fn(f64) -> bool| null.iter().filter(|&&v| pred(v)).count() as f64;
    match tail {
        Tail::Upper => (1.0 + count(&|v| v >= observed)) / (n + 1.0),
        Tail::Absolute | Tail::Symmetric => {
            let o = observed.abs();
            (1.0 + count(&|v| v.abs() >= o)) / (n + 1.0)
        }
        Tail::EqualTail => {
            let upper = (1.0 + count(&|v| v >= observed)) / (n + 1.0);
            let lower = (1.0 + count(&|v| v <= observed)) / (n + 1.0);
            (2.0 * upper.min(lower)).min(1.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: String,
    pub spec: StatisticSpec,
    pub n: usize,
    pub observed: f64,
    pub p_value: f64,
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub reject: bool,
}

/// p-values of several statistics on one sample, sharing the null samples.
/// The sample size of `cfg` is replaced by the sample's length.
pub fn mc_pvalues(sample: &[f64], specs: &[StatisticSpec], cfg: &MCConfig) -> Result<Vec<TestReport>> {
    let observed = evaluate_many(specs, sample)?;
    let cfg = MCConfig { sample_size: sample.len(), ..*cfg };
    let null = mc_null_statistics(specs, &cfg)?;
    Ok(specs
        .iter()
        .zip(observed)
        .zip(null)
        .map(|((spec, obs), col)| {
            let p = p_value(obs, &col, spec.tail);
            TestReport {
                statistic: spec.label(),
                spec: *spec,
                n: sample.len(),
                observed: obs,
                p_value: p,
                replications: cfg.replications,
                seed: cfg.seed,
                alpha: cfg.alpha,
                reject: p <= cfg.alpha,
            }
        })
        .collect())
}

pub fn mc_pvalue(sample: &[f64], spec: &StatisticSpec, cfg: &MCConfig) -> Result<TestReport> {
    mc_pvalues(sample, std::slice::from_ref(spec), cfg).map(|mut v| v.remove(0))
}

/// Critical values of `sqrt(n) T` (of `sqrt(n) |T|` for two-sided tails) at `alpha`.
pub fn mc_critical_values(specs: &[StatisticSpec], cfg: &MCConfig) -> Result<Vec<RejectionRegion>> {
    let null = mc_null_statistics(specs, cfg)?;
    let root = (cfg.sample_size as f64).sqrt();
    specs
        .iter()
        .zip(null)
        .map(|(s, col)| {
            let scaled: Vec<f64> = col.iter().map(|v| v * root).collect();
            RejectionRegion::from_null(&scaled, s.tail, cfg.alpha)
        })
        .collect()
}

/// Rejection rates of several statistics against one alternative, with
/// regions taken from a null run under the same configuration.
pub fn mc_power_many(alt: &AlternativeSpec, specs: &[StatisticSpec], cfg: &MCConfig) -> Result<Vec<f64>> {
    let null = mc_null_statistics(specs, cfg)?;
    let regions = regions_for(specs, &null, cfg.alpha)?;
    let values = mc_alt_statistics(alt, specs, cfg)?;
    Ok(regions.iter().zip(&values).map(|(r, v)| r.rejection_rate(v)).collect())
}

pub fn mc_power(alt: &AlternativeSpec, spec: &StatisticSpec, cfg: &MCConfig) -> Result<f64> {
    mc_power_many(alt, std::slice::from_ref(spec), cfg).map(|v| v[0])
}

fn regions_for(specs: &[StatisticSpec], null: &[Vec<f64>], alpha: f64) -> Result<Vec<RejectionRegion>> {
    specs.iter().zip(null).map(|(s, col)| RejectionRegion::from_null(col, s.tail, alpha)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCell {
    pub rate: f64,
    pub se: f64,
}

impl PowerCell {
    fn new(rate: f64, reps: usize) -> Self {
        PowerCell { rate, se: (rate * (1.0 - rate) / reps as f64).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub alternative: String,
    pub spec: AlternativeSpec,
    pub n: usize,
    pub cells: Vec<std::result::Result<PowerCell, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub statistics: Vec<String>,
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub rows: Vec<PowerRow>,
}

/// Power matrix: rows are (alternative, n), columns are statistics. Errors
/// stay local to their cell.
pub fn mc_table(specs: &[StatisticSpec], alts: &[AlternativeSpec], sizes: &[usize], cfg: &MCConfig) -> Result<PowerTable> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(alts.len() * sizes.len());
    for &n in sizes {
        let cfg_n = MCConfig { sample_size: n, ..*cfg };
        let regions: Vec<std::result::Result<RejectionRegion, String>> = specs
            .iter()
            .map(|s| {
                mc_null_distribution(s, &cfg_n)
                    .and_then(|null| RejectionRegion::from_null(&null, s.tail, cfg.alpha))
                    .map_err(|e| e.to_string())
            })
            .collect();
        for alt in alts {
            let cells = specs
                .iter()
                .zip(&regions)
                .map(|(s, region)| {
                    let region = region.clone()?;
                    let values = mc_alt_statistics(alt, std::slice::from_ref(s), &cfg_n).map_err(|e| e.to_string())?;
                    Ok(PowerCell::new(region.rejection_rate(&values[0]), cfg.replications))
                })
                .collect();
            rows.push(PowerRow { alternative: alt.label(), spec: *alt, n, cells });
        }
    }
    Ok(PowerTable {
        statistics: specs.iter().map(|s| s.label()).collect(),
        replications: cfg.replications,
        seed: cfg.seed,
        alpha: cfg.alpha,
        rows,
    })
}

impl PowerTable {
    /// Long-format CSV: one line per (alternative, n, statistic).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alternative,n,statistic,rate,se,error\n");
        for row in &self.rows {
            for (name, cell) in self.statistics.iter().zip(&row.cells) {
                let alt = csv_field(&row.alternative);
                match cell {
                    Ok(c) => out.push_str(&format!("{alt},{},{},{},{},\n", row.n, csv_field(name), c.rate, c.se)),
                    Err(e) => out.push_str(&format!("{alt},{},{},,,{}\n", row.n, csv_field(name), csv_field(e))),
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::EstimatorKind;
    use crate::stats::Family;

    fn small() -> MCConfig {
        MCConfig::new(400, 20).with_seed(11)
    }

    #[test]
    fn config_validation() {
        assert!(MCConfig::new(0, 10).validate().is_err());
        assert!(MCConfig::new(10, 0).validate().is_err());
        assert!(MCConfig::new(10, 10).with_alpha(1.0).validate().is_err());
        assert!(MCConfig::new(10, 10).with_lambda(-1.0).validate().is_err());
        assert!(MCConfig::new(10, 10).validate().is_ok());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let spec = StatisticSpec::r(1.0, EstimatorKind::Mle);
        let one = mc_null_distribution(&spec, &small().with_threads(1)).unwrap();
        let four = mc_null_distribution(&spec, &small().with_threads(4)).unwrap();
        let global = mc_null_distribution(&spec, &small()).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, global);
        assert!(one.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn seeds_matter() {
        let spec = StatisticSpec::r(1.0, EstimatorKind::Mle);
        let a = mc_null_distribution(&spec, &small()).unwrap();
        let b = mc_null_distribution(&spec, &small().with_seed(12)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn p_value_conventions() {
        let null = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(p_value(3.0, &null, Tail::Upper), 3.0 / 5.0);
        assert_eq!(p_value(10.0, &null, Tail::Upper), 1.0 / 5.0);
        assert_eq!(p_value(-3.5, &[-4.0, 1.0, 3.0, 0.5], Tail::Absolute), 2.0 / 5.0);
        assert_eq!(p_value(0.0, &null, Tail::EqualTail), 2.0 / 5.0);
        assert_eq!(p_value(2.5, &null, Tail::EqualTail), 1.0);
    }

    #[test]
    fn region_conventions() {
        let null: Vec<f64> = (1..=100).map(f64::from).collect();
        let r = RejectionRegion::from_null(&null, Tail::Upper, 0.05).unwrap();
        assert_eq!(r.upper, 95.0);
        assert!(!r.rejects(95.0) && r.rejects(95.5));
        let e = RejectionRegion::from_null(&null, Tail::EqualTail, 0.05).unwrap();
        assert_eq!((e.lower, e.upper), (Some(3.0), 98.0));
        assert!(e.rejects(2.0) && e.rejects(99.0) && !e.rejects(50.0));
        let signed: Vec<f64> = null.iter().map(|v| if (*v as u32).is_multiple_of(2) { -v } else { *v }).collect();
        let a = RejectionRegion::from_null(&signed, Tail::Absolute, 0.05).unwrap();
        assert_eq!(a.upper, 95.0);
        assert!(a.rejects(-96.0));
    }

    #[test]
    fn power_monotone_in_critical_value() {
        let values: Vec<f64> = (0..500).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut last = 1.0;
        for k in 0..30 {
            let r = RejectionRegion { tail: Tail::Upper, lower: None, upper: k as f64 * 0.5 };
            let rate = r.rejection_rate(&values);
            assert!(rate <= last);
            last = rate;
        }
    }

    #[test]
    fn null_p_values_are_super_uniform() {
        let spec = StatisticSpec::r(1.0, EstimatorKind::Mle);
        let cfg = MCConfig::new(2000, 15).with_seed(3);
        let null = mc_null_distribution(&spec, &cfg).unwrap();
        let fresh = mc_alt_statistics(&AlternativeSpec::Levy { lambda: 1.0 }, &[spec], &cfg.with_seed(4)).unwrap();
        let p: Vec<f64> = fresh[0].iter().take(500).map(|&v| p_value(v, &null, spec.tail)).collect();
        for alpha in [0.01, 0.05, 0.1] {
            let rate = p.iter().filter(|&&x| x <= alpha).count() as f64 / p.len() as f64;
            assert!(rate <= alpha + 2.0 / (p.len() as f64).sqrt(), "{alpha}: {rate}");
        }
    }

    #[test]
    fn single_cell_table_matches_power() {
        let spec = StatisticSpec::new(Family::Ks, EstimatorKind::Mle);
        let alt = AlternativeSpec::Weibull { a: 2.0, b: 1.0 };
        let cfg = MCConfig::new(300, 25).with_seed(5);
        let direct = mc_power(&alt, &spec, &cfg).unwrap();
        let table = mc_table(&[spec], &[alt], &[25], &cfg).unwrap();
        assert_eq!(table.rows[0].cells[0].as_ref().unwrap().rate, direct);
        assert!(table.to_csv().lines().count() == 2);
        let back: PowerTable = serde_json::from_str(&table.to_json()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn errors_are_counted() {
        let cfg = MCConfig::new(20, 1);
        match mc_null_statistics(&[StatisticSpec::ibar(1.0, 1.0)], &cfg) {
            Err(Error::Replications { failed, total, .. }) => assert_eq!((failed, total), (20, 20)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn report_fields() {
        let x = levy_sample(30, LevyScale::STANDARD, RngStream::new(9, 0)).unwrap();
        let spec = StatisticSpec::j_tabulated(1.0, EstimatorKind::Mle);
        let rep = mc_pvalue(&x, &spec, &MCConfig::new(199, 999).with_seed(2)).unwrap();
        assert_eq!(rep.n, 30);
        assert!(rep.p_value > 0.0 && rep.p_value <= 1.0);
        assert_eq!(rep.reject, rep.p_value <= 0.05);
        assert!(((rep.p_value * 200.0).round() - rep.p_value * 200.0).abs() < 1e-9);
    }
}
