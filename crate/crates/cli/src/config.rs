//! TOML experiment configuration. Command-line flags override every value
//! read here.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub field: FieldSection,
    #[serde(default)]
    pub precision: PrecisionSection,
    #[serde(default)]
    pub approx: ApproxSection,
    #[serde(default)]
    pub thue: ThueSection,
    #[serde(default)]
    pub effective: EffectiveSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    /// Field definition JSON, relative to the config file.
    pub path: Option<PathBuf>,
    /// `"cubic"` or `"biquadratic"`.
    pub family: Option<String>,
    #[serde(rename = "D")]
    pub d: Option<i64>,
    /// Integer coefficients, highest degree first.
    pub poly: Option<Vec<i64>>,
    pub alpha: Option<Vec<String>>,
    pub units: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionSection {
    pub max_bits: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxSection {
    /// `"a..b"`, inclusive.
    pub n: Option<String>,
    pub qmax: Option<u64>,
    pub kappa: Option<String>,
    pub exhaustive: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThueSection {
    #[serde(rename = "box")]
    pub bound: Option<u64>,
    pub k: Option<Vec<i64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveSection {
    pub kappa4: Option<f64>,
    pub kappa5: Option<f64>,
    pub kappa6: Option<f64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
        if let (Some(rel), Some(dir)) = (&cfg.field.path, path.parent()) {
            if rel.is_relative() {
                cfg.field.path = Some(dir.join(rel));
            }
        }
        if let Some(p) = &cfg.field.path {
            if !p.exists() {
                return Err(CliError::usage(format!("config [field] path {} does not exist", p.display())));
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_reported_with_position() {
        let err = toml::from_str::<ExperimentConfig>("[effective]\nkappa9 = 1.0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("kappa9"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn sections_parse() {
        let cfg: ExperimentConfig = toml::from_str(
            "[field]\nfamily = \"cubic\"\nD = 3\n[precision]\nmax_bits = 2048\n[effective]\nkappa4 = 1e12\n",
        )
        .unwrap();
        assert_eq!(cfg.field.d, Some(3));
        assert_eq!(cfg.precision.max_bits, Some(2048));
        assert_eq!(cfg.effective.kappa4, Some(1e12));
    }
}
