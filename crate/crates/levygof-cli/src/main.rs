//! `levygof`: goodness-of-fit tests for the Levy distribution.
//!
//! Exit codes: 0 retain (or success), 1 reject at alpha, 2 error.

mod alt;
mod ingest;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use levy_gof::asym::{self, QuadratureConfig};
use levy_gof::data::{Dataset, Orientation};
use levy_gof::mc::{self, MCConfig, PowerTable, TestReport};
use levy_gof::{AlternativeSpec, EstimatorKind, Family, JWeight, StatisticSpec, Tail};

const J_GRID: [f64; 4] = [1.0, 2.0, 5.0, 10.0];
const R_GRID: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];
const SIGMA0_PAIRS: &str = "1:2,1:3,1:4,1:5,1:10,2:3,3:10,4:5,2:5,6:7,10:10";

#[derive(Parser)]
#[command(name = "levygof", version, about = "Goodness-of-fit tests for the Levy distribution")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Test a sample for the Levy law with a Monte Carlo p-value
    Test(TestArgs),
    /// Monte Carlo critical values of sqrt(n)T
    Critvals(CritArgs),
    /// Empirical power against alternatives
    Power(PowerArgs),
    /// Local approximate Bahadur efficiencies
    Efficiency(EffArgs),
    /// Limiting variance constants
    Constants(ConstArgs),
    /// List or print the embedded datasets
    Datasets(DataArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum StatKind {
    J,
    R,
    Rstd,
    #[value(alias = "ibar")]
    I,
    Ks,
    Cvm,
    Ad,
    N1a,
    N1b,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum WeightArg {
    Formula,
    Tabulated,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OrientationArg {
    Raw,
    Inverted,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Raw => Orientation::Raw,
            OrientationArg::Inverted => Orientation::Inverted,
        }
    }
}

#[derive(Args, Clone)]
struct StatArgs {
    /// Statistic families (comma separated)
    #[arg(long, value_enum, value_delimiter = ',', ignore_case = true)]
    stat: Vec<StatKind>,
    /// Tuning parameter(s) a
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    a: Vec<f64>,
    /// Second parameter(s) b of I[a,b], paired with --a; defaults to a
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    b: Vec<f64>,
    /// Scale estimator(s): mle, mbe
    #[arg(long, value_delimiter = ',', default_value = "mle")]
    estimator: Vec<EstimatorKind>,
    /// J weight: tabulated is t^a(-ln t)^3/2, formula is t^a(-ln t)^{3/2}
    #[arg(long, value_enum)]
    weight: Option<WeightArg>,
    /// Rejection direction for I[a,b]: absolute or upper
    #[arg(long, default_value = "absolute")]
    ibar_tail: Tail,
    /// Reject N1 on large |T| instead of equal tails
    #[arg(long)]
    symmetric_n1: bool,
}

#[derive(Args, Clone)]
struct McArgs {
    /// Monte Carlo replications
    #[arg(long)]
    reps: Option<usize>,
    /// Base seed
    #[arg(long, env = "LEVYGOF_SEED", default_value_t = 20_240_607)]
    seed: u64,
    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Scale of the simulated null samples
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct TestArgs {
    /// Embedded dataset name (rainfall, hillside)
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    data: Option<String>,
    /// File with one value per line or a single-column CSV
    #[arg(long)]
    input: Option<PathBuf>,
    /// Analyse the values as given or their reciprocals
    #[arg(long, value_enum)]
    orientation: Option<OrientationArg>,
    #[command(flatten)]
    stat: StatArgs,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Args)]
struct CritArgs {
    /// Sample sizes
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[command(flatten)]
    stat: StatArgs,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Args)]
struct PowerArgs {
    /// Alternatives, e.g. "W(2,1)"; separate several with ';'
    #[arg(long, value_delimiter = ';')]
    alt: Vec<String>,
    /// Sample sizes
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[command(flatten)]
    stat: StatArgs,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Args)]
struct EffArgs {
    /// Local alternatives g1..g5; separate several with ';'
    #[arg(long, value_delimiter = ';')]
    alt: Vec<String>,
    #[command(flatten)]
    stat: StatArgs,
}

#[derive(Args)]
struct ConstArgs {
    /// Values of a for sigma_R^2
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
    /// (a:b) pairs for sigma_0^2
    #[arg(long, default_value = SIGMA0_PAIRS)]
    pairs: String,
    /// Emit (t, value) pairs of a J curve instead of the constants
    #[arg(long, value_enum)]
    dump_curve: Option<Curve>,
    /// Local alternative for the drift curve
    #[arg(long, default_value = "g2")]
    alt: String,
    /// J weight for the curves
    #[arg(long, value_enum, default_value_t = WeightArg::Formula)]
    weight: WeightArg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Curve {
    /// sigma^2(t) = K(t,t)
    Variance,
    /// A(t), the squared drift against --alt
    Drift,
}

#[derive(Args)]
struct DataArgs {
    /// Print the values of one dataset
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_enum)]
    orientation: Option<OrientationArg>,
}

fn weight_of(w: WeightArg) -> JWeight {
    match w {
        WeightArg::Formula => JWeight::Formula,
        WeightArg::Tabulated => JWeight::Tabulated,
    }
}

impl StatArgs {
    /// Expands the flags into specs. With `grid`, families without `--a`
    /// use the published grids.
    fn specs(&self, grid: bool, default_weight: JWeight, fallback: &[StatKind]) -> Result<Vec<StatisticSpec>> {
        let weight = self.weight.map_or(default_weight, weight_of);
        let kinds = if self.stat.is_empty() { fallback.to_vec() } else { self.stat.clone() };
        if kinds.is_empty() {
            bail!("--stat is required");
        }
        if !matches!(self.ibar_tail, Tail::Absolute | Tail::Upper) {
            bail!("--ibar-tail must be absolute or upper");
        }
        let pick = |defaults: &[f64]| -> Vec<f64> {
            if !self.a.is_empty() {
                self.a.clone()
            } else if grid {
                defaults.to_vec()
            } else {
                vec![1.0]
            }
        };
        let quad = QuadratureConfig::default();
        let mut out = Vec::new();
        for kind in kinds {
            match kind {
                StatKind::J => {
                    for &est in &self.estimator {
                        out.extend(pick(&J_GRID).iter().map(|&a| StatisticSpec::new(Family::J { a, weight }, est)));
                    }
                }
                StatKind::R => {
                    for &est in &self.estimator {
                        out.extend(pick(&R_GRID).iter().map(|&a| StatisticSpec::r(a, est)));
                    }
                }
                StatKind::Rstd => {
                    for &est in &self.estimator {
                        for a in pick(&R_GRID) {
                            let sigma = asym::sigma_r2(a, &quad)?.sqrt();
                            out.push(StatisticSpec::new(Family::Rstd { a, sigma }, est));
                        }
                    }
                }
                StatKind::I => {
                    let a = if self.a.is_empty() { vec![1.0] } else { self.a.clone() };
                    let b = if self.b.is_empty() { a.clone() } else { self.b.clone() };
                    if a.len() != b.len() {
                        bail!("--a and --b must have the same length for I");
                    }
                    out.extend(a.iter().zip(&b).map(|(&a, &b)| StatisticSpec::ibar(a, b).with_tail(self.ibar_tail)));
                }
                StatKind::Ks | StatKind::Cvm | StatKind::Ad => {
                    let family = match kind {
                        StatKind::Ks => Family::Ks,
                        StatKind::Cvm => Family::Cvm,
                        _ => Family::Ad,
                    };
                    out.extend(self.estimator.iter().map(|&e| StatisticSpec::new(family, e)));
                }
                StatKind::N1a | StatKind::N1b => {
                    let family = if kind == StatKind::N1a { Family::N1a } else { Family::N1b };
                    let s = StatisticSpec::new(family, EstimatorKind::Mle);
                    out.push(if self.symmetric_n1 { s.symmetric() } else { s });
                }
            }
        }
        for s in &out {
            s.validate()?;
        }
        Ok(out)
    }
}

impl McArgs {
    fn config(&self, default_reps: usize, n: usize) -> Result<MCConfig> {
        let cfg = MCConfig {
            replications: self.reps.unwrap_or(default_reps),
            sample_size: n,
            alpha: self.alpha,
            seed: self.seed,
            null_lambda: self.lambda,
            threads: self.threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn text_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header, &mut out);
    for r in rows {
        line(r, &mut out);
    }
    out
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct TestRow {
    source: String,
    statistic: String,
    n: usize,
    observed: f64,
    p_value: f64,
    replications: usize,
    seed: u64,
    alpha: f64,
    reject: bool,
}

#[derive(Serialize)]
struct TestOutput<'a> {
    source: String,
    #[serde(flatten)]
    report: &'a TestReport,
}

fn cmd_test(args: &TestArgs, format: Format) -> Result<(String, bool)> {
    let (source, values) = match (&args.data, &args.input) {
        (Some(name), _) => {
            let ds = Dataset::from_name(name).with_context(|| format!("unknown dataset '{name}'"))?;
            let orient = args.orientation.map_or(ds.default_orientation(), Orientation::from);
            (format!("{} ({})", ds.name(), orientation_label(orient)), ds.values(orient))
        }
        (None, Some(path)) => {
            let raw = ingest::read_sample(path)?;
            match args.orientation {
                Some(OrientationArg::Inverted) => (format!("{} (inverted)", path.display()), raw.iter().map(|x| 1.0 / x).collect()),
                _ => (path.display().to_string(), raw),
            }
        }
        (None, None) => bail!("either --data or --input is required"),
    };
    let specs = args.stat.specs(false, JWeight::Tabulated, &[])?;
    let cfg = args.mc.config(10_000, values.len())?;
    let reports = mc::mc_pvalues(&values, &specs, &cfg)?;
    let reject = reports.iter().any(|r| r.reject);
    let out = match format {
        Format::Json => {
            let v: Vec<TestOutput> = reports.iter().map(|r| TestOutput { source: source.clone(), report: r }).collect();
            if v.len() == 1 {
                to_json(&v[0])?
            } else {
                to_json(&v)?
            }
        }
        Format::Csv => to_csv(
            &reports
                .iter()
                .map(|r| TestRow {
                    source: source.clone(),
                    statistic: r.statistic.clone(),
                    n: r.n,
                    observed: r.observed,
                    p_value: r.p_value,
                    replications: r.replications,
                    seed: r.seed,
                    alpha: r.alpha,
                    reject: r.reject,
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            let mut s = format!("data: {source}, n = {}\n", values.len());
            let _ = writeln!(s, "Monte Carlo: N = {}, seed = {}, alpha = {}", cfg.replications, cfg.seed, cfg.alpha);
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.statistic.clone(),
                        format!("{:.6e}", r.observed),
                        format!("{:.4}", r.p_value),
                        if r.reject { "reject" } else { "retain" }.to_string(),
                    ]
                })
                .collect();
            s + &text_table(&["statistic", "observed", "p-value", "decision"].map(String::from), &rows)
        }
    };
    Ok((out, reject))
}

fn orientation_label(o: Orientation) -> &'static str {
    match o {
        Orientation::Raw => "raw",
        Orientation::Inverted => "inverted",
    }
}

#[derive(Serialize)]
struct CritRow {
    n: usize,
    lambda: f64,
    statistic: String,
    lower: Option<f64>,
    upper: f64,
}

#[derive(Serialize)]
struct CritTable {
    replications: usize,
    seed: u64,
    alpha: f64,
    rows: Vec<CritRow>,
}

fn cmd_critvals(args: &CritArgs, format: Format) -> Result<String> {
    let specs = args.stat.specs(true, JWeight::Tabulated, &[StatKind::J, StatKind::R])?;
    let sizes = if args.n.is_empty() { (1..=25).map(|k| 20 * k).collect() } else { args.n.clone() };
    let mut rows = Vec::new();
    let mut cfg = args.mc.config(100_000, 1)?;
    for &n in &sizes {
        cfg.sample_size = n;
        cfg.validate()?;
        for (spec, region) in specs.iter().zip(mc::mc_critical_values(&specs, &cfg)?) {
            rows.push(CritRow { n, lambda: cfg.null_lambda, statistic: spec.label(), lower: region.lower, upper: region.upper });
        }
    }
    let table = CritTable { replications: cfg.replications, seed: cfg.seed, alpha: cfg.alpha, rows };
    Ok(match format {
        Format::Json => to_json(&table)?,
        Format::Csv => to_csv(&table.rows)?,
        Format::Text => {
            let mut header = vec!["n".to_string()];
            header.extend(specs.iter().map(|s| s.label()));
            let body: Vec<Vec<String>> = table
                .rows
                .chunks(specs.len())
                .map(|chunk| {
                    let mut r = vec![chunk[0].n.to_string()];
                    r.extend(chunk.iter().map(|c| match c.lower {
                        Some(lo) => format!("{lo:.5}/{:.5}", c.upper),
                        None => format!("{:.5}", c.upper),
                    }));
                    r
                })
                .collect();
            format!(
                "{}% critical values of sqrt(n)T, lambda = {}, N = {}, seed = {}\n{}",
                100.0 * (1.0 - cfg.alpha),
                cfg.null_lambda,
                cfg.replications,
                cfg.seed,
                text_table(&header, &body)
            )
        }
    })
}

fn parse_alts(list: &[String], fallback: Vec<AlternativeSpec>) -> Result<Vec<AlternativeSpec>> {
    if list.is_empty() {
        Ok(fallback)
    } else {
        list.iter().map(|s| alt::parse_alternative(s)).collect()
    }
}

const POWER_STATS: [StatKind; 8] =
    [StatKind::I, StatKind::J, StatKind::R, StatKind::Ks, StatKind::Cvm, StatKind::Ad, StatKind::N1a, StatKind::N1b];

fn cmd_power(args: &PowerArgs, format: Format) -> Result<String> {
    let specs = args.stat.specs(true, JWeight::Tabulated, &POWER_STATS)?;
    let alts = parse_alts(&args.alt, alt::default_power_alternatives())?;
    let sizes = if args.n.is_empty() { vec![25, 50] } else { args.n.clone() };
    let cfg = args.mc.config(10_000, sizes[0])?;
    let table = mc::mc_table(&specs, &alts, &sizes, &cfg)?;
    Ok(match format {
        Format::Json => table.to_json() + "\n",
        Format::Csv => table.to_csv(),
        Format::Text => power_text(&table),
    })
}

fn power_text(t: &PowerTable) -> String {
    let mut header = vec!["alternative".to_string(), "n".to_string()];
    header.extend(t.statistics.iter().cloned());
    let rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![r.alternative.clone(), r.n.to_string()];
            v.extend(r.cells.iter().map(|c| c.as_ref().map_or("error".into(), |c| format!("{:.3}", c.rate))));
            v
        })
        .collect();
    format!("power at alpha = {}, N = {}, seed = {}\n{}", t.alpha, t.replications, t.seed, text_table(&header, &rows))
}

#[derive(Serialize)]
struct EffRow {
    statistic: String,
    alternative: String,
    kl_curvature: Option<f64>,
    slope_coefficient: Option<f64>,
    efficiency: Option<f64>,
    error: Option<String>,
}

fn cmd_efficiency(args: &EffArgs, format: Format) -> Result<String> {
    let specs = args.stat.specs(true, JWeight::Formula, &[StatKind::I, StatKind::J, StatKind::R])?;
    let alts = parse_alts(&args.alt, asym::local_alternatives().to_vec())?;
    if let Some(bad) = alts.iter().find(|a| !a.is_local()) {
        bail!("{} is not a local alternative (use g1..g5)", bad.label());
    }
    let table = asym::efficiency_table(&specs, &alts, &QuadratureConfig::default());
    let mut rows = Vec::new();
    for (spec, cells) in specs.iter().zip(&table) {
        for (alt, cell) in alts.iter().zip(cells) {
            rows.push(match cell {
                Ok(e) => EffRow {
                    statistic: spec.label(),
                    alternative: alt.label(),
                    kl_curvature: Some(e.kl_curvature),
                    slope_coefficient: Some(e.slope_coefficient),
                    efficiency: Some(e.efficiency),
                    error: None,
                },
                Err(msg) => EffRow {
                    statistic: spec.label(),
                    alternative: alt.label(),
                    kl_curvature: None,
                    slope_coefficient: None,
                    efficiency: None,
                    error: Some(msg.clone()),
                },
            });
        }
    }
    Ok(match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows)?,
        Format::Text => {
            let mut header = vec!["statistic".to_string()];
            header.extend(alts.iter().map(|a| a.label()));
            let body: Vec<Vec<String>> = rows
                .chunks(alts.len())
                .map(|chunk| {
                    let mut r = vec![chunk[0].statistic.clone()];
                    r.extend(chunk.iter().map(|c| c.efficiency.map_or("error".into(), |e| format!("{e:.3}"))));
                    r
                })
                .collect();
            format!("local approximate Bahadur efficiency\n{}", text_table(&header, &body))
        }
    })
}

#[derive(Serialize)]
struct ConstRow {
    name: String,
    a: Option<f64>,
    b: Option<f64>,
    value: f64,
}

#[derive(Serialize)]
struct CurvePoint {
    t: f64,
    value: f64,
}

fn parse_pairs(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(':').with_context(|| format!("pair '{p}' is not a:b"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect()
}

fn cmd_constants(args: &ConstArgs, format: Format) -> Result<String> {
    let cfg = QuadratureConfig::default();
    if let Some(curve) = args.dump_curve {
        let a = args.a.first().copied().unwrap_or(1.0);
        let weight = weight_of(args.weight);
        let alt = alt::parse_alternative(&args.alt)?;
        let mut pts = Vec::new();
        for k in 1..1000 {
            let t = k as f64 / 1000.0;
            let value = match curve {
                Curve::Variance => asym::cov_kernel_weighted(t, t, a, weight)?,
                Curve::Drift => asym::drift_squared(t, a, weight, &alt, &cfg)?,
            };
            pts.push(CurvePoint { t, value });
        }
        return Ok(match format {
            Format::Json => to_json(&pts)?,
            Format::Csv => to_csv(&pts)?,
            Format::Text => pts.iter().fold(String::new(), |mut s, p| {
                let _ = writeln!(s, "{:.3} {:.10e}", p.t, p.value);
                s
            }),
        });
    }
    let r_as = if args.a.is_empty() { R_GRID.to_vec() } else { args.a.clone() };
    let mut rows = Vec::new();
    for a in r_as {
        rows.push(ConstRow { name: "sigma_R2".into(), a: Some(a), b: None, value: asym::sigma_r2(a, &cfg)? });
    }
    rows.push(ConstRow { name: "sigma_T2".into(), a: None, b: None, value: asym::sigma_t2(&cfg)? });
    for (a, b) in parse_pairs(&args.pairs)? {
        rows.push(ConstRow { name: "sigma_0".into(), a: Some(a), b: Some(b), value: asym::sigma_0ab(a, b, &cfg)? });
    }
    Ok(match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows)?,
        Format::Text => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.a.map_or(String::new(), |v| v.to_string()),
                        r.b.map_or(String::new(), |v| v.to_string()),
                        format!("{:.7e}", r.value),
                    ]
                })
                .collect();
            text_table(&["constant", "a", "b", "value"].map(String::from), &body)
        }
    })
}

#[derive(Serialize)]
struct DatasetInfo {
    name: &'static str,
    n: usize,
    default_orientation: &'static str,
    min: f64,
    max: f64,
}

#[derive(Serialize)]
struct ValueRow {
    value: f64,
}

fn cmd_datasets(args: &DataArgs, format: Format) -> Result<String> {
    if let Some(name) = &args.name {
        let ds = Dataset::from_name(name).with_context(|| format!("unknown dataset '{name}'"))?;
        let values = ds.values(args.orientation.map_or(Orientation::Raw, Orientation::from));
        return Ok(match format {
            Format::Json => to_json(&values)?,
            Format::Csv => to_csv(&values.iter().map(|&value| ValueRow { value }).collect::<Vec<_>>())?,
            Format::Text => values.iter().map(|v| format!("{v}\n")).collect(),
        });
    }
    let infos: Vec<DatasetInfo> = Dataset::ALL
        .iter()
        .map(|d| {
            let v = d.raw();
            DatasetInfo {
                name: d.name(),
                n: v.len(),
                default_orientation: orientation_label(d.default_orientation()),
                min: v.iter().copied().fold(f64::INFINITY, f64::min),
                max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    Ok(match format {
        Format::Json => to_json(&infos)?,
        Format::Csv => to_csv(&infos)?,
        Format::Text => {
            let body: Vec<Vec<String>> = infos
                .iter()
                .map(|i| vec![i.name.into(), i.n.to_string(), i.default_orientation.into(), i.min.to_string(), i.max.to_string()])
                .collect();
            text_table(&["name", "n", "analysed as", "min", "max"].map(String::from), &body)
        }
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = match &cli.command {
        Command::Test(a) => {
            let (text, reject) = cmd_test(a, cli.format)?;
            print!("{text}");
            return Ok(if reject { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
        Command::Critvals(a) => cmd_critvals(a, cli.format)?,
        Command::Power(a) => cmd_power(a, cli.format)?,
        Command::Efficiency(a) => cmd_efficiency(a, cli.format)?,
        Command::Constants(a) => cmd_constants(a, cli.format)?,
        Command::Datasets(a) => cmd_datasets(a, cli.format)?,
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
