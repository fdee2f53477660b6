//! Strict experiment configuration: flat `key = value` TOML with section
//! headers. Unknown keys are rejected so that configs stay reproducible and
//! diffable.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use grauert_core::geometry::ModelManifold;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    GeometryCheck,
    Weyl,
    Siciak,
    KernelCompare,
    Hadamard,
    Zeros,
    Decay,
}

impl Experiment {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "geometry-check" => Experiment::GeometryCheck,
            "weyl" => Experiment::Weyl,
            "siciak" => Experiment::Siciak,
            "kernel-compare" => Experiment::KernelCompare,
            "hadamard" => Experiment::Hadamard,
            "zeros" => Experiment::Zeros,
            "decay" => Experiment::Decay,
            other => {
                return Err(ConfigError(format!(
                    "unknown experiment '{other}' (expected geometry-check, weyl, siciak, kernel-compare, hadamard, zeros or decay)"
                )))
            }
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::GeometryCheck => "geometry-check",
            Experiment::Weyl => "weyl",
            Experiment::Siciak => "siciak",
            Experiment::KernelCompare => "kernel-compare",
            Experiment::Hadamard => "hadamard",
            Experiment::Zeros => "zeros",
            Experiment::Decay => "decay",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<String>,
    seed: Option<u64>,
    model: Option<RawModel>,
    params: Option<RawParams>,
    tolerances: Option<BTreeMap<String, f64>>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    kind: String,
    dim: Option<usize>,
    scale: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub tau_rule: Option<String>,
    pub lambda: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_grid: Option<Vec<f64>>,
    pub reference_slope: Option<f64>,
    pub rho_lo: Option<f64>,
    pub rho_hi: Option<f64>,
    pub rho_count: Option<usize>,
    pub tau_lo: Option<f64>,
    pub tau_hi: Option<f64>,
    pub tau_count: Option<usize>,
    pub r_lo: Option<f64>,
    pub r_hi: Option<f64>,
    pub r_count: Option<usize>,
    pub n_samples: Option<usize>,
    pub n_seeds: Option<usize>,
    pub k_max: Option<usize>,
    pub degree: Option<usize>,
    pub degrees: Option<Vec<usize>>,
    pub grid_x: Option<usize>,
    pub grid_xi: Option<usize>,
    pub resolution: Option<usize>,
    pub j_max: Option<usize>,
    pub strip: Option<f64>,
    pub zonal_degrees: Option<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(ConfigError(format!(
                "unknown output format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Fully validated experiment configuration.
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub model: ModelManifold,
    pub params: RawParams,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<String>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn load(path: &Path, experiment: Experiment) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let raw: RawConfig =
            toml::from_str(&text).map_err(|e| ConfigError(format!("parse failure: {e}")))?;
        if let Some(name) = &raw.experiment {
            let declared = Experiment::parse(name)?;
            if declared != experiment {
                return Err(ConfigError(format!(
                    "config declares experiment '{}' but subcommand is '{}'",
                    name,
                    experiment.as_str()
                )));
            }
        }
        let model = match &raw.model {
            None => ModelManifold::circle(),
            Some(m) => {
                let dim = m.dim.unwrap_or(match m.kind.as_str() {
                    "circle" => 1,
                    _ => 2,
                });
                match m.kind.as_str() {
                    "circle" => {
                        if dim != 1 {
                            return Err(ConfigError("circle requires dim = 1".into()));
                        }
                        ModelManifold::circle()
                    }
                    "flat-torus" => {
                        ModelManifold::flat_torus_with_period(dim, m.scale.unwrap_or(1.0))
                            .map_err(|e| ConfigError(e.to_string()))?
                    }
                    "sphere" => {
                        ModelManifold::sphere(dim).map_err(|e| ConfigError(e.to_string()))?
                    }
                    "hyperbolic" => {
                        ModelManifold::hyperbolic(dim).map_err(|e| ConfigError(e.to_string()))?
                    }
                    other => return Err(ConfigError(format!("unknown model kind '{other}'"))),
                }
            }
        };
        let params = raw.params.unwrap_or_default();
        for (name, v) in [
            ("tau", params.tau),
            ("rho", params.rho),
            ("lambda", params.lambda),
            ("lambda_max", params.lambda_max),
            ("strip", params.strip),
        ] {
            if let Some(v) = v {
                if v.is_nan() || v <= 0.0 {
                    return Err(ConfigError(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if let Some(grid) = &params.lambda_grid {
            if grid.iter().any(|&l| l.is_nan() || l <= 0.0) {
                return Err(ConfigError("lambda_grid entries must be positive".into()));
            }
        }
        let tolerances = raw.tolerances.unwrap_or_default();
        for (k, v) in &tolerances {
            if v.is_nan() || *v < 0.0 {
                return Err(ConfigError(format!("tolerance '{k}' must be >= 0")));
            }
        }
        let (output_path, format) = match &raw.output {
            None => (None, OutputFormat::Csv),
            Some(o) => (
                o.path.clone(),
                match &o.format {
                    None => OutputFormat::Csv,
                    Some(f) => OutputFormat::parse(f)?,
                },
            ),
        };
        Ok(ExperimentConfig {
            experiment,
            seed: raw.seed.unwrap_or(0),
            model,
            params,
            tolerances,
            output_path,
            format,
        })
    }

    /// Tolerance override lookup with a default.
    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}
