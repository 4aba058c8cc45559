use serde::{Deserialize, Serialize};

use crate::error::{check_sample, Error, Result};

/// 2 * erfcinv(1/2)^2: the standard Levy median is 1 / this.
pub const MBE_CONSTANT: f64 = 0.454_936_423_119_572_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Mle,
    Mbe,
}

impl EstimatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorKind::Mle => "MLE",
            EstimatorKind::Mbe => "MBE",
        }
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mle" | "ml" => Ok(EstimatorKind::Mle),
            "mbe" | "med" | "median" => Ok(EstimatorKind::Mbe),
            other => Err(Error::Domain(format!("unknown estimator '{other}'"))),
        }
    }
}

pub fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    let n = v.len();
    let mid = n / 2;
    let (_, &mut hi, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    if n % 2 == 1 {
        hi
    } else {
        let lo = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

pub fn estimate_lambda(sample: &[f64], kind: EstimatorKind) -> Result<f64> {
    check_sample(sample)?;
    match kind {
        EstimatorKind::Mle => {
            let s: f64 = sample.iter().map(|x| 1.0 / x).sum();
            if !s.is_finite() {
                return Err(Error::Overflow("sum of reciprocals".into()));
            }
            Ok(sample.len() as f64 / s)
        }
        EstimatorKind::Mbe => Ok(MBE_CONSTANT * median(sample)),
    }
}
