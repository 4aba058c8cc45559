//! Levy law, alternative families, and reproducible random streams.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Open01, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::{Error, Result};
use crate::special::{erfc, erfc_inv, ln_erfc};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyScale {
    lambda: f64,
}

impl LevyScale {
    pub const STANDARD: LevyScale = LevyScale { lambda: 1.0 };

    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(LevyScale { lambda })
        } else {
            Err(Error::Domain(format!("scale must be positive and finite, got {lambda}")))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Density of the standard law; exact zero once the log-density underflows.
pub fn std_pdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lg = -0.5 * LN_2PI - 0.5 / x - 1.5 * x.ln();
    if lg < f64::MIN_POSITIVE.ln() {
        0.0
    } else {
        lg.exp()
    }
}

pub fn std_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    erfc((0.5 / x).sqrt())
}

pub fn std_ln_cdf(x: f64) -> f64 {
    ln_erfc((0.5 / x).sqrt())
}

pub fn std_quantile(p: f64) -> f64 {
    let z = erfc_inv(p);
    0.5 / (z * z)
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must be positive, got {x}")))
    }
}

pub fn levy_pdf(x: f64, scale: LevyScale) -> Result<f64> {
    check_x(x)?;
    let l = scale.lambda;
    Ok(std_pdf(x / l) / l)
}

pub fn levy_cdf(x: f64, scale: LevyScale) -> Result<f64> {
    check_x(x)?;
    Ok(std_cdf(x / scale.lambda))
}

pub fn levy_quantile(p: f64, scale: LevyScale) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("probability must lie in (0,1), got {p}")));
    }
    Ok(scale.lambda * std_quantile(p))
}

/// Counter-based substream: the pair (seed, stream_id) fixes every draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }
}

fn std_normal_nonzero<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let z: f64 = rng.sample(StandardNormal);
        if z != 0.0 {
            return z;
        }
    }
}

pub fn levy_draw<R: Rng + ?Sized>(rng: &mut R, lambda: f64) -> f64 {
    let z = std_normal_nonzero(rng);
    lambda / (z * z)
}

pub fn levy_sample_with<R: Rng + ?Sized>(n: usize, scale: LevyScale, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| levy_draw(rng, scale.lambda)).collect()
}

pub fn levy_sample(n: usize, scale: LevyScale, stream: RngStream) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    Ok(levy_sample_with(n, scale, &mut stream.rng()))
}

/// Alternatives of the power study and the local families used for efficiencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AlternativeSpec {
    Levy { lambda: f64 },
    Burr { a: f64, b: f64, c: f64 },
    Chen { nu: f64, lambda: f64 },
    Frechet { a: f64, b: f64 },
    Gamma { shape: f64, rate: f64 },
    LogLogistic { a: f64, b: f64 },
    LogNormal { mu: f64, sigma: f64 },
    ChiSquared { k: f64 },
    HalfNormal { a: f64, b: f64 },
    ShiftedLogGamma { a: f64, b: f64 },
    Weibull { a: f64, b: f64 },
    LevyMixture { lambda: f64, theta: f64 },
    Lehmann { theta: f64 },
    Contamination { beta: f64, theta: f64 },
    LeyPaindaveine1 { theta: f64 },
    LeyPaindaveine2 { theta: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

fn unit_theta(theta: f64) -> Result<()> {
    if (0.0..1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta must lie in [0, 1), got {theta}")))
    }
}

fn gamma_sampler(shape: f64, rate: f64) -> Result<Gamma<f64>> {
    Gamma::new(shape, 1.0 / rate).map_err(|e| Error::Domain(e.to_string()))
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

impl AlternativeSpec {
    pub fn validate(&self) -> Result<()> {
        use AlternativeSpec::*;
        match *self {
            Levy { lambda } => positive("lambda", lambda),
            Burr { a, b, c } => positive("a", a).and(positive("b", b)).and(positive("c", c)),
            Chen { nu, lambda } => positive("nu", nu).and(positive("lambda", lambda)),
            Frechet { a, b } | LogLogistic { a, b } | Weibull { a, b } | ShiftedLogGamma { a, b } => {
                positive("a", a).and(positive("b", b))
            }
            Gamma { shape, rate } => positive("shape", shape).and(positive("rate", rate)),
            LogNormal { mu, sigma } => {
                if mu.is_finite() {
                    positive("sigma", sigma)
                } else {
                    Err(Error::Domain("mu must be finite".into()))
                }
            }
            ChiSquared { k } => positive("k", k),
            HalfNormal { a, b } => {
                if a.is_finite() {
                    positive("b", b)
                } else {
                    Err(Error::Domain("a must be finite".into()))
                }
            }
            LevyMixture { lambda, theta } => {
                positive("lambda", lambda)?;
                unit_theta(theta)
            }
            Lehmann { theta } | LeyPaindaveine1 { theta } => {
                if theta >= 0.0 && theta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("theta must be nonnegative, got {theta}")))
                }
            }
            Contamination { beta, theta } => {
                positive("beta", beta)?;
                unit_theta(theta)
            }
            LeyPaindaveine2 { theta } => {
                if (0.0..=1.0 / PI).contains(&theta) {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("theta must lie in [0, 1/pi], got {theta}")))
                }
            }
        }
    }

    pub fn is_local(&self) -> bool {
        use AlternativeSpec::*;
        matches!(
            self,
            LevyMixture { .. } | Lehmann { .. } | Contamination { .. } | LeyPaindaveine1 { .. } | LeyPaindaveine2 { .. }
        )
    }

    pub fn label(&self) -> String {
        use AlternativeSpec::*;
        match *self {
            Levy { lambda } => format!("Levy(0, {lambda})"),
            Burr { a, b, c } => format!("Burr({a}, {b}, {c})"),
            Chen { nu, lambda } => format!("Chen({nu}, {lambda})"),
            Frechet { a, b } => format!("FR({a}, {b})"),
            Gamma { shape, rate } => format!("Gamma({shape}, {rate})"),
            LogLogistic { a, b } => format!("LL({a}, {b})"),
            LogNormal { mu, sigma } => format!("LN({mu}, {sigma})"),
            ChiSquared { k } => format!("Chi2({k})"),
            HalfNormal { a, b } => format!("HN({a}, {b})"),
            ShiftedLogGamma { a, b } => format!("LG({a}, {b})"),
            Weibull { a, b } => format!("W({a}, {b})"),
            LevyMixture { lambda, .. } => format!("g1[{lambda}]"),
            Lehmann { .. } => "g2".into(),
            Contamination { beta, .. } => format!("g3[{beta}]"),
            LeyPaindaveine1 { .. } => "g4".into(),
            LeyPaindaveine2 { .. } => "g5".into(),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        use AlternativeSpec::*;
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            Levy { lambda } => std_pdf(x / lambda) / lambda,
            Burr { a, b, c } => {
                let r = x / a;
                c * b * r.powf(b - 1.0) / (a * (1.0 + r.powf(b)).powf(c + 1.0))
            }
            Chen { nu, lambda } => {
                let p = x.powf(lambda);
                nu * lambda * x.powf(lambda - 1.0) * (nu * (1.0 - p.exp()) + p).exp()
            }
            Frechet { a, b } => {
                let r = x / b;
                a / b * r.powf(-(a + 1.0)) * (-r.powf(-a)).exp()
            }
            Gamma { shape, rate } => gamma_pdf(x, shape, rate),
            ChiSquared { k } => gamma_pdf(x, 0.5 * k, 0.5),
            LogLogistic { a, b } => {
                let r = (x / b).powf(a);
                a * r / (x * (1.0 + r).powi(2))
            }
            LogNormal { mu, sigma } => {
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sigma * x)
            }
            HalfNormal { a, b } => {
                if x < a {
                    0.0
                } else {
                    let z = (x - a) / b;
                    2.0 * (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * b)
                }
            }
            ShiftedLogGamma { a, b } => {
                let l = x.ln_1p();
                (a * b.ln() - ln_gamma(a) + (a - 1.0) * l.ln() - (b + 1.0) * l).exp()
            }
            Weibull { a, b } => {
                let r = x / b;
                a / b * r.powf(a - 1.0) * (-r.powf(a)).exp()
            }
            LevyMixture { lambda, theta } => (1.0 - theta) * std_pdf(x) + theta * std_pdf(x / lambda) / lambda,
            Lehmann { theta } => (1.0 + theta) * std_cdf(x).powf(theta) * std_pdf(x),
            Contamination { beta, theta } => {
                std_pdf(x) * (1.0 - theta + theta * beta * std_cdf(x).powf(beta - 1.0))
            }
            LeyPaindaveine1 { theta } => {
                let f = std_cdf(x);
                (1.0 + theta * f) * std_pdf(x) * (-theta * (1.0 - f)).exp()
            }
            LeyPaindaveine2 { theta } => std_pdf(x) * (1.0 - theta * PI * (PI * std_cdf(x)).cos()),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        use AlternativeSpec::*;
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            Levy { lambda } => std_cdf(x / lambda),
            Burr { a, b, c } => 1.0 - (1.0 + (x / a).powf(b)).powf(-c),
            Chen { nu, lambda } => -(nu * (1.0 - x.powf(lambda).exp())).exp_m1(),
            Frechet { a, b } => (-(x / b).powf(-a)).exp(),
            Gamma { shape, rate } => gamma_lr(shape, rate * x),
            ChiSquared { k } => gamma_lr(0.5 * k, 0.5 * x),
            LogLogistic { a, b } => 1.0 / (1.0 + (x / b).powf(-a)),
            LogNormal { mu, sigma } => 0.5 * erfc(-(x.ln() - mu) / (sigma * std::f64::consts::SQRT_2)),
            HalfNormal { a, b } => {
                if x <= a {
                    0.0
                } else {
                    1.0 - erfc((x - a) / (b * std::f64::consts::SQRT_2))
                }
            }
            ShiftedLogGamma { a, b } => gamma_lr(a, b * x.ln_1p()),
            Weibull { a, b } => -(-(x / b).powf(a)).exp_m1(),
            LevyMixture { lambda, theta } => (1.0 - theta) * std_cdf(x) + theta * std_cdf(x / lambda),
            Lehmann { theta } => std_cdf(x).powf(1.0 + theta),
            Contamination { beta, theta } => {
                let f = std_cdf(x);
                (1.0 - theta) * f + theta * f.powf(beta)
            }
            LeyPaindaveine1 { theta } => {
                let f = std_cdf(x);
                f * (-theta * (1.0 - f)).exp()
            }
            LeyPaindaveine2 { theta } => {
                let f = std_cdf(x);
                f - theta * (PI * f).sin()
            }
        }
    }

    /// One draw; `Err` for families without a sampler.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        use AlternativeSpec::*;
        Ok(match *self {
            Levy { lambda } => levy_draw(rng, lambda),
            Burr { a, b, c } => {
                let u = open01(rng);
                a * ((-c.recip() * (-u).ln_1p()).exp_m1()).powf(1.0 / b)
            }
            Chen { nu, lambda } => {
                let u = open01(rng);
                (1.0 - (-u).ln_1p() / nu).ln().powf(1.0 / lambda)
            }
            Frechet { a, b } => b * (-open01(rng).ln()).powf(-1.0 / a),
            Gamma { shape, rate } => gamma_sampler(shape, rate)?.sample(rng),
            ChiSquared { k } => gamma_sampler(0.5 * k, 0.5)?.sample(rng),
            LogLogistic { a, b } => {
                let u = open01(rng);
                b * (u / (1.0 - u)).powf(1.0 / a)
            }
            LogNormal { mu, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                (mu + sigma * z).exp()
            }
            HalfNormal { a, b } => {
                let z: f64 = rng.sample(StandardNormal);
                a + b * z.abs()
            }
            ShiftedLogGamma { a, b } => gamma_sampler(a, b)?.sample(rng).exp_m1(),
            Weibull { a, b } => b * (-(-open01(rng)).ln_1p()).powf(1.0 / a),
            LevyMixture { lambda, theta } => {
                let u = open01(rng);
                let z = std_normal_nonzero(rng);
                let s = if u < theta { lambda } else { 1.0 };
                s / (z * z)
            }
            Lehmann { theta } => std_quantile(open01(rng).powf(1.0 / (1.0 + theta))),
            Contamination { beta, theta } => {
                let u = open01(rng);
                let v = open01(rng);
                if u < theta {
                    std_quantile(v.powf(1.0 / beta))
                } else {
                    std_quantile(v)
                }
            }
            LeyPaindaveine1 { .. } | LeyPaindaveine2 { .. } => {
                return Err(Error::Unsupported(format!("{} sampling", self.label())))
            }
        })
    }

    /// Ratio g'(x;0)/f0(x) of the theta-derivative to the null density.
    pub fn score_ratio(&self, x: f64) -> Result<f64> {
        use AlternativeSpec::*;
        check_x(x)?;
        match *self {
            LevyMixture { lambda, .. } => Ok(lambda.sqrt() * (-(lambda - 1.0) / (2.0 * x)).exp() - 1.0),
            Lehmann { .. } => Ok(1.0 + std_ln_cdf(x)),
            Contamination { beta, .. } => Ok(beta * ((beta - 1.0) * std_ln_cdf(x)).exp() - 1.0),
            LeyPaindaveine1 { .. } => Ok(2.0 * std_cdf(x) - 1.0),
            LeyPaindaveine2 { .. } => Ok(-PI * (PI * std_cdf(x)).cos()),
            _ => Err(Error::Unsupported(format!("{} theta score", self.label()))),
        }
    }
}

fn gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)).exp()
}

pub fn alt_sample(n: usize, alt: &AlternativeSpec, stream: RngStream) -> Result<Vec<f64>> {
    alt.validate()?;
    let mut rng = stream.rng();
    (0..n).map(|_| alt.draw(&mut rng)).collect()
}

/// Derivative in theta of the alternative density at theta = 0.
pub fn alt_theta_score(x: f64, alt: &AlternativeSpec) -> Result<f64> {
    Ok(alt.score_ratio(x)? * std_pdf(x))
}
