//! Run configuration: defaults, an optional TOML/JSON file, then flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use ordlam_core::Budget;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Nesting depth of λπ proofs the oracle may use.
    pub fuel: u32,
    pub max_steps: usize,
    pub max_nodes: usize,
    pub max_term_size: usize,
    /// Carrier guard for order enumeration.
    pub max_size: usize,
    /// Depth bound for algebra term search.
    pub depth: usize,
    pub seed: u64,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let b = Budget::default();
        RunConfig {
            fuel: 2,
            max_steps: b.max_steps,
            max_nodes: b.max_nodes,
            max_term_size: b.max_term_size,
            max_size: ordlam_algebra::order::DEFAULT_MAX_SIZE,
            depth: 3,
            seed: 42,
            format: None,
        }
    }
}

/// Flag overrides; `None` keeps the file or default value.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// TOML or JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, global = true)]
    pub fuel: Option<u32>,
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,
    #[arg(long, global = true)]
    pub max_term_size: Option<usize>,
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        } else {
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        };
        Ok(cfg)
    }

    pub fn resolve(o: &Overrides) -> Result<RunConfig> {
        let mut c = match &o.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { c.$f = v; } )* };
        }
        set!(fuel, max_steps, max_nodes, max_term_size, max_size, depth, seed);
        if o.format.is_some() {
            c.format = o.format;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("max_steps", self.max_steps),
            ("max_nodes", self.max_nodes),
            ("max_term_size", self.max_term_size),
            ("max_size", self.max_size),
            ("depth", self.depth),
        ] {
            if v == 0 {
                bail!("{name} must be positive");
            }
        }
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.max_steps, self.max_nodes, self.max_term_size)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Report header line, without a comment marker.
    pub fn header(&self, command: &str) -> String {
        format!(
            "ordlam {command} seed={} fuel={} budget={}/{}/{}",
            self.seed, self.fuel, self.max_steps, self.max_nodes, self.max_term_size
        )
    }

    pub fn header_json(&self, command: &str) -> serde_json::Value {
        serde_json::json!({
            "command": command,
            "seed": self.seed,
            "fuel": self.fuel,
            "budget": { "max_steps": self.max_steps, "max_nodes": self.max_nodes, "max_term_size": self.max_term_size },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_files() {
        let dir = std::env::temp_dir().join(format!("ordlam-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let t = dir.join("run.toml");
        std::fs::write(&t, "fuel = 3\nseed = 7\nformat = \"json\"\n").unwrap();
        let c = RunConfig::load(&t).unwrap();
        assert_eq!((c.fuel, c.seed, c.format), (3, 7, Some(Format::Json)));
        assert_eq!(c.max_steps, RunConfig::default().max_steps);
        let j = dir.join("run.json");
        std::fs::write(&j, r#"{"depth": 2}"#).unwrap();
        assert_eq!(RunConfig::load(&j).unwrap().depth, 2);
        std::fs::write(&t, "bogus = 1\n").unwrap();
        assert!(RunConfig::load(&t).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn flags_override_and_validate() {
        let o = Overrides { seed: Some(9), max_steps: Some(0), ..Default::default() };
        assert!(RunConfig::resolve(&o).is_err());
        let o = Overrides { seed: Some(9), ..Default::default() };
        assert_eq!(RunConfig::resolve(&o).unwrap().seed, 9);
    }
}
