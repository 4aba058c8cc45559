//! Embedded real datasets.

use serde::{Deserialize, Serialize};

/// January weighted rainfall, 1981 to 2011.
pub const RAINFALL: [f64; 31] = [
    29.3, 23.8, 18.5, 19.0, 23.2, 15.5, 13.2, 10.4, 15.4, 16.0, 14.3, 16.0, 18.2, 25.0, 31.3, 22.9, 14.3, 16.4, 13.7,
    18.4, 7.3, 15.7, 7.6, 25.7, 28.1, 17.7, 1.7, 18.4, 12.0, 7.5, 6.8,
];

/// Hillside well yields in gal/min/ft, as printed.
pub const HILLSIDE: [f64; 41] = [
    0.220, 1.330, 0.750, 0.180, 0.010, 0.160, 0.280, 0.870, 0.020, 0.100, 0.030, 0.050, 0.860, 5.000, 0.040, 4.000,
    0.370, 0.380, 0.110, 0.100, 0.020, 0.010, 0.050, 0.170, 0.460, 0.160, 1.330, 0.140, 2.860, 0.130, 7.500, 4.500,
    0.030, 0.003, 0.050, 0.020, 0.040, 0.750, 0.520, 5.000, 0.350,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Raw,
    Inverted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dataset {
    Rainfall,
    Hillside,
}

impl Dataset {
    pub const ALL: [Dataset; 2] = [Dataset::Rainfall, Dataset::Hillside];

    pub fn name(&self) -> &'static str {
        match self {
            Dataset::Rainfall => "rainfall",
            Dataset::Hillside => "hillside",
        }
    }

    pub fn from_name(name: &str) -> Option<Dataset> {
        Dataset::ALL.into_iter().find(|d| d.name().eq_ignore_ascii_case(name))
    }

    pub fn raw(&self) -> &'static [f64] {
        match self {
            Dataset::Rainfall => &RAINFALL,
            Dataset::Hillside => &HILLSIDE,
        }
    }

    /// Orientation under which the published p-values are reproduced.
    pub fn default_orientation(&self) -> Orientation {
        match self {
            Dataset::Rainfall => Orientation::Raw,
            Dataset::Hillside => Orientation::Inverted,
        }
    }

    pub fn values(&self, orientation: Orientation) -> Vec<f64> {
        match orientation {
            Orientation::Raw => self.raw().to_vec(),
            Orientation::Inverted => self.raw().iter().map(|x| 1.0 / x).collect(),
        }
    }

    pub fn analysis_values(&self) -> Vec<f64> {
        self.values(self.default_orientation())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{estimate_lambda, EstimatorKind};

    #[test]
    fn shapes() {
        assert_eq!(RAINFALL.len(), 31);
        assert_eq!((RAINFALL[0], RAINFALL[30]), (29.3, 6.8));
        assert_eq!(HILLSIDE.len(), 41);
        assert!(HILLSIDE.contains(&0.003) && HILLSIDE.contains(&7.5));
    }

    #[test]
    fn inverted_hillside_mle_matches_caption() {
        let v = Dataset::Hillside.analysis_values();
        let l = estimate_lambda(&v, EstimatorKind::Mle).unwrap();
        assert!((l - 1.052_551).abs() < 5e-7, "{l}");
    }

    #[test]
    fn lookup() {
        assert_eq!(Dataset::from_name("Hillside"), Some(Dataset::Hillside));
        assert_eq!(Dataset::from_name("wells"), None);
    }
}
