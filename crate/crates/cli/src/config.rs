use std::path::Path;

use iwt_core::grid::log_nodes;
use iwt_core::inteq::SolverConfig;
use iwt_core::quadrature::QuadratureConfig;
use serde::{Deserialize, Serialize};

use crate::fail::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Log-spaced node set `[lo, hi]` with `nodes` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { lo: 1e-4, hi: 60.0, nodes: 120 }
    }
}

impl GridSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::usage(format!("grid '{s}' must be lo:hi:nodes"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let g = Self {
            lo: parts[0].trim().parse().map_err(|_| bad())?,
            hi: parts[1].trim().parse().map_err(|_| bad())?,
            nodes: parts[2].trim().parse().map_err(|_| bad())?,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.hi.is_finite() && self.nodes >= 2) {
            return Err(CliError::usage(format!("grid needs 0 < lo < hi and at least 2 nodes, got {self:?}")));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Vec<f64> {
        log_nodes(self.lo, self.hi, self.nodes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    pub grid: GridSpec,
    /// Number of `tau` nodes when no `--tau` range is given.
    pub tau_points: usize,
    pub output: OutputFormat,
    pub verbosity: u8,
    pub solver: SolverConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            grid: GridSpec::default(),
            tau_points: 240,
            output: OutputFormat::Csv,
            verbosity: 0,
            solver: SolverConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| CliError::json(path, &e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.quadrature.validate().map_err(|e| CliError::usage(e.to_string()))?;
        self.grid.validate()?;
        if self.tau_points < 2 {
            return Err(CliError::usage("tau_points must be at least 2"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_json() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_config_keeps_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"quadrature": {"rel_tol": 1e-8}, "output": "json"}"#).unwrap();
        assert_eq!(cfg.quadrature.rel_tol, 1e-8);
        assert_eq!(cfg.quadrature.abs_tol, QuadratureConfig::default().abs_tol);
        assert_eq!(cfg.output, OutputFormat::Json);
        assert_eq!(cfg.grid, GridSpec::default());
    }

    #[test]
    fn grid_spec_parsing() {
        assert_eq!(GridSpec::parse("0.001:40:60").unwrap(), GridSpec { lo: 1e-3, hi: 40.0, nodes: 60 });
        assert!(GridSpec::parse("1:0.5:10").is_err());
        assert!(GridSpec::parse("1:2").is_err());
    }
}
