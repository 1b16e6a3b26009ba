use std::path::Path;

use serde::Deserialize;

/// Optional TOML run file. Command-line flags override every field.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub scenario: Option<String>,
    pub mass: Option<f64>,
    pub hubble: Option<f64>,
    pub amplitude: Option<f64>,
    pub scenario_seed: Option<u64>,
    pub form: Option<String>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub provider: Option<String>,
    pub h: Option<f64>,
    pub h2: Option<f64>,
    pub kappa: Option<f64>,
    pub tolerance: Option<f64>,
}

impl RunFile {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid run file {}: {e}", path.display()))
    }
}
