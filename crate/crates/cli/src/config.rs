use std::path::PathBuf;

use quasifree::vacuum_energy::{ExternalDensity, TrialParams};
use quasifree::{constants, Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ZGrid {
    List(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        steps: usize,
        #[serde(default)]
        spacing: Spacing,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

fn one() -> f64 {
    1.0
}

/// Input of the `energy` and `pairprob` commands.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha_c: f64,
    #[serde(rename = "Lambda", alias = "lambda")]
    pub lambda: f64,
    #[serde(rename = "C_Lambda", alias = "c_lambda", default = "one")]
    pub c_lambda: f64,
    pub nu: ExternalDensity,
    /// Trial parameters; the optimal (a*, b*) when absent.
    pub a: Option<f64>,
    pub b: Option<f64>,
    #[serde(rename = "Z_grid", alias = "z_grid")]
    pub z_grid: ZGrid,
    /// Echoed in JSON output. The energy pipeline itself draws no random numbers.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.model()?.check_model()?;
        cfg.grid()?;
        Ok(cfg)
    }

    pub fn model(&self) -> Result<TrialParams> {
        let k = constants::constants();
        Ok(TrialParams {
            a: self.a.unwrap_or(k.a_star),
            b: self.b.unwrap_or(k.b_star),
            lambda: self.lambda,
            alpha_c: self.alpha_c,
            z: 1.0,
            nu: self.nu.clone(),
            c_lambda: self.c_lambda,
        })
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        let zs = match &self.z_grid {
            ZGrid::List(v) => v.clone(),
            &ZGrid::Range { min, max, steps, spacing } => {
                if !(min > 0.0 && max >= min && max.is_finite()) {
                    return Err(Error::Config(format!("Z_grid range needs 0 < min <= max, got [{min}, {max}]")));
                }
                match steps {
                    0 => return Err(Error::Config("Z_grid steps must be >= 1".into())),
                    1 => vec![min],
                    _ => (0..steps)
                        .map(|i| {
                            let t = i as f64 / (steps - 1) as f64;
                            match spacing {
                                Spacing::Log => (min.ln() + t * (max.ln() - min.ln())).exp(),
                                Spacing::Linear => min + t * (max - min),
                            }
                        })
                        .collect(),
                }
            }
        };
        if zs.is_empty() {
            return Err(Error::Config("Z_grid is empty".into()));
        }
        if let Some(z) = zs.iter().find(|z| !(**z > 0.0 && z.is_finite())) {
            return Err(Error::Config(format!("Z_grid values must be finite and > 0, got {z}")));
        }
        if zs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("Z_grid must be strictly ascending".into()));
        }
        Ok(zs)
    }
}
