use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::HarnessError;

/// Range of `q` the default thresholds are calibrated for.
pub const CALIBRATED_Q: (f64, f64) = (0.1, 0.95);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Spherical,
    Coamenability,
    Smoothing,
    Approxid,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Spherical,
        Suite::Coamenability,
        Suite::Smoothing,
        Suite::Approxid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Spherical => "spherical",
            Suite::Coamenability => "coamenability",
            Suite::Smoothing => "smoothing",
            Suite::Approxid => "approxid",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub q: f64,
    /// Threshold for the exact-identity residuals.
    pub tol: f64,
    /// Threshold for the quadrature certificate and the Gaussian mass.
    pub tol_quad: f64,
    pub max_exponent: u32,
    pub max_terms: usize,
    pub suites: Vec<Suite>,
    pub out_dir: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 0.5,
            tol: 1e-10,
            tol_quad: 1e-8,
            max_exponent: 24,
            max_terms: 200,
            suites: Suite::ALL.to_vec(),
            out_dir: PathBuf::from("reports"),
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    /// Checks the configuration and returns the warnings to attach to the
    /// report header.
    pub fn validate(&self) -> Result<Vec<String>, HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if !(self.q > 0.0 && self.q < 1.0) {
            return bad(format!("q = {} must lie in (0, 1)", self.q));
        }
        if !(self.tol > 0.0) || !(self.tol_quad > 0.0) {
            return bad(format!(
                "tolerances must be positive (tol = {}, tol_quad = {})",
                self.tol, self.tol_quad
            ));
        }
        if self.max_exponent == 0 || self.max_terms == 0 {
            return bad("max_exponent and max_terms must be positive".into());
        }
        if self.suites.is_empty() {
            return bad("no suite selected".into());
        }
        let mut warnings = Vec::new();
        if self.q < CALIBRATED_Q.0 || self.q > CALIBRATED_Q.1 {
            warnings.push(format!(
                "q = {} is outside [{}, {}]; the default thresholds are not calibrated there",
                self.q, CALIBRATED_Q.0, CALIBRATED_Q.1
            ));
        }
        Ok(warnings)
    }

    /// Truncation tolerance for series and products: well below the
    /// identity threshold so truncation never decides a verdict.
    pub fn series_tol(&self) -> f64 {
        self.tol * 1e-6
    }

    /// Suites in declared order without repeats.
    pub fn ordered_suites(&self) -> Vec<Suite> {
        let mut s = self.suites.clone();
        s.sort();
        s.dedup();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert_eq!(RunConfig::default().validate().unwrap(), Vec::<String>::new());
    }

    #[test]
    fn empty_selection_is_invalid() {
        let c = RunConfig {
            suites: vec![],
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn uncalibrated_q_warns() {
        let c = RunConfig {
            q: 0.05,
            ..RunConfig::default()
        };
        assert_eq!(c.validate().unwrap().len(), 1);
        let c = RunConfig {
            q: 1.0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn suite_order_is_declared_order() {
        let c = RunConfig {
            suites: vec![Suite::Smoothing, Suite::Identities, Suite::Smoothing],
            ..RunConfig::default()
        };
        assert_eq!(c.ordered_suites(), vec![Suite::Identities, Suite::Smoothing]);
        assert_eq!("approxid".parse::<Suite>().unwrap(), Suite::Approxid);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
