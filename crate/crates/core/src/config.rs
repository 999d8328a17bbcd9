//! TOML experiment definitions. Every field is optional; CLI flags take
//! precedence over anything set here.
//!
//! ```toml
//! [scenario]
//! id = "E8"
//! params = { vc = 10.0 }
//!
//! [sampling]
//! t0 = 0.0
//! t1 = 1.0
//! dt = 1e-4
//!
//! [analysis]
//! mode = "numeric"
//! filter_tau = 1e-3
//! remove_zero_seq = true
//!
//! [park]
//! w_dq = 314.159
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::analysis::Mode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub park: ParkSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub id: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub mode: Option<Mode>,
    pub filter_tau: Option<f64>,
    pub remove_zero_seq: Option<bool>,
    pub eps_v: Option<f64>,
    pub eps_w: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParkSection {
    pub w_dq: Option<f64>,
    pub theta0: Option<f64>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_example() {
        let c = Config::parse(
            r#"
            [scenario]
            id = "E8"
            params = { vc = 10.0 }

            [sampling]
            t1 = 1.0
            dt = 1e-4

            [analysis]
            mode = "numeric"
            filter_tau = 1e-3

            [park]
            w_dq = 314.0
            "#,
        )
        .unwrap();
        assert_eq!(c.scenario.id.as_deref(), Some("E8"));
        assert_eq!(c.scenario.params["vc"], 10.0);
        assert_eq!(c.sampling.t0, None);
        assert_eq!(c.sampling.dt, Some(1e-4));
        assert_eq!(c.analysis.mode, Some(Mode::Numeric));
        assert_eq!(c.park.w_dq, Some(314.0));
    }

    #[test]
    fn empty_is_default() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(Config::parse("[sampling]\nstep = 1\n"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("[analysis]\nmode = \"fast\"\n"), Err(Error::Config(_))));
    }
}
