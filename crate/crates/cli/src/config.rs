use std::path::Path;

use hypoexp::ParamRecord;
use serde::Deserialize;

use crate::args::{Format, Sweep};
use crate::CliError;

/// Contents of the `--config` TOML file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub dist: Option<ParamRecord>,
    #[serde(default)]
    pub sample: SampleSection,
    #[serde(default)]
    pub gof: GofSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub simulate: SimulateSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    pub count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GofSection {
    pub n: Option<u32>,
    pub w: Option<f64>,
    #[serde(rename = "B")]
    pub bootstrap: Option<usize>,
    pub alpha: Option<f64>,
    pub grid_points: Option<usize>,
    pub grid_decay: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub max_n: Option<u32>,
    pub max_m: Option<u32>,
    pub random_v: Option<usize>,
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub stages: Option<Vec<f64>>,
    pub count: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let cfg: FileConfig = toml::from_str(
            r#"
            seed = 5
            format = "structured"
            [dist]
            family = "eme"
            n = 2
            lambda = 1.0
            w = 3.0
            [gof]
            B = 199
            w = 0.5
            [simulate]
            stages = [1.0, 1.0, 0.2]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(5));
        assert_eq!(cfg.format, Some(Format::Structured));
        assert_eq!(cfg.dist.unwrap().n, Some(2));
        assert_eq!(cfg.gof.bootstrap, Some(199));
        assert_eq!(cfg.simulate.stages.unwrap().len(), 3);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("sed = 1").is_err());
    }
}
