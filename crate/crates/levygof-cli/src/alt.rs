use anyhow::{anyhow, bail, Result};
use levy_gof::AlternativeSpec;

/// Parses `name(p1, p2, ...)`, e.g. `W(2,1)`, `Burr(1.5,0.5,0.5)`, `g3(3, 0.1)`.
/// The local families `g1`..`g5` may omit their arguments.
pub fn parse_alternative(s: &str) -> Result<AlternativeSpec> {
    use AlternativeSpec::*;
    let s = s.trim();
    let (name, args) = match s.find('(') {
        Some(i) => {
            let inner = s[i + 1..].strip_suffix(')').ok_or_else(|| anyhow!("missing ')' in '{s}'"))?;
            let args = inner
                .split(',')
                .filter(|a| !a.trim().is_empty())
                .map(|a| a.trim().parse::<f64>().map_err(|_| anyhow!("bad parameter '{a}' in '{s}'")))
                .collect::<Result<Vec<f64>>>()?;
            (&s[..i], args)
        }
        None => (s, Vec::new()),
    };
    let want = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            bail!("'{name}' takes {k} parameter(s), got {}", args.len())
        }
    };
    let theta = |pos: usize| args.get(pos).copied().unwrap_or(0.0);
    let alt = match name.trim().to_ascii_lowercase().as_str() {
        "levy" => {
            want(2)?;
            if args[0] != 0.0 {
                bail!("Levy location must be 0");
            }
            Levy { lambda: args[1] }
        }
        "burr" => {
            want(3)?;
            Burr { a: args[0], b: args[1], c: args[2] }
        }
        "chen" => {
            want(2)?;
            Chen { nu: args[0], lambda: args[1] }
        }
        "fr" | "frechet" => {
            want(2)?;
            Frechet { a: args[0], b: args[1] }
        }
        "gamma" => {
            want(2)?;
            Gamma { shape: args[0], rate: args[1] }
        }
        "ll" => {
            want(2)?;
            LogLogistic { a: args[0], b: args[1] }
        }
        "ln" => {
            want(2)?;
            LogNormal { mu: args[0], sigma: args[1] }
        }
        "chi2" => {
            want(1)?;
            ChiSquared { k: args[0] }
        }
        "hn" => {
            want(2)?;
            HalfNormal { a: args[0], b: args[1] }
        }
        "lg" => {
            want(2)?;
            ShiftedLogGamma { a: args[0], b: args[1] }
        }
        "w" | "weibull" => {
            want(2)?;
            Weibull { a: args[0], b: args[1] }
        }
        "g1" => LevyMixture { lambda: args.first().copied().unwrap_or(10.0), theta: theta(1) },
        "g2" => Lehmann { theta: theta(0) },
        "g3" => Contamination { beta: args.first().copied().unwrap_or(3.0), theta: theta(1) },
        "g4" => LeyPaindaveine1 { theta: theta(0) },
        "g5" => LeyPaindaveine2 { theta: theta(0) },
        other => bail!("unknown alternative '{other}'"),
    };
    alt.validate()?;
    Ok(alt)
}

/// The power-study alternatives, in table order.
pub fn default_power_alternatives() -> Vec<AlternativeSpec> {
    [
        "Levy(0,0.5)",
        "Levy(0,1)",
        "Levy(0,2)",
        "Burr(1.5,0.5,0.5)",
        "LN(0,1)",
        "chi2(3)",
        "HN(0,1)",
        "Gamma(3,2)",
        "W(2,1)",
        "Gamma(0.4,2)",
        "W(0.4,2)",
        "LN(0,2)",
        "Chen(2,0.4)",
        "LG(7,2)",
        "LL(1,2)",
        "FR(1,1)",
    ]
    .iter()
    .map(|s| parse_alternative(s).expect("valid default"))
    .collect()
}
