use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Dot,
}

/// Budgets and output settings; flags override values from a TOML file.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Largest number of elements any enumeration may produce.
    pub max_elements: usize,
    /// Largest number of search nodes or products examined.
    pub max_nodes: usize,
    /// Default bound on word lengths for bounded searches.
    pub max_len: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            max_elements: 1 << 20,
            max_nodes: 1 << 24,
            max_len: 6,
            format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::format(line, e.message())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        RunConfig::from_toml(&super::files::read(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_elements == 0 || self.max_nodes == 0 || self.max_len == 0 {
            return Err(Error::invalid("budgets must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_overrides() {
        let c = RunConfig::from_toml("max_len = 4\nformat = \"dot\"\n").unwrap();
        assert_eq!(c.max_len, 4);
        assert_eq!(c.format, OutputFormat::Dot);
        assert_eq!(c.max_elements, RunConfig::default().max_elements);
        assert!(RunConfig::from_toml("max_len = 0").is_err());
        assert!(matches!(
            RunConfig::from_toml("bogus = 1"),
            Err(Error::Format { line: 1, .. })
        ));
    }
}
