use std::path::PathBuf;

use anyhow::{Context, Result};
use casimir_core::material::{MaterialConfig, ModelKind};
use casimir_core::physics::{MIN_SEPARATION, MIN_TEMPERATURE};
use casimir_core::{DielectricModel, NumericsSettings, ZeroModePolicy};

use crate::UsageError;

pub const DATA_DIR_ENV: &str = "CASIMIR_DATA_DIR";

/// Separations of the default grid, nm.
pub const DEFAULT_SEPARATIONS_NM: [f64; 7] = [160.0, 200.0, 250.0, 400.0, 500.0, 700.0, 1000.0];
pub const DEFAULT_TEMPERATURE_K: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// Magnitudes at 4 significant digits.
    Table,
    /// Signed values at 10 significant digits.
    Csv,
}

/// Everything one invocation needs, validated.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub material: Option<PathBuf>,
    pub model_override: Option<ModelKind>,
    pub separations_nm: Vec<f64>,
    pub temperatures_k: Vec<f64>,
    pub policy: ZeroModePolicy,
    pub settings: NumericsSettings,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub per_term_log: Option<PathBuf>,
}

impl RunManifest {
    pub fn validate(&self) -> Result<()> {
        if self.separations_nm.is_empty() {
            return Err(UsageError("at least one separation is required (--separations-nm)".into()).into());
        }
        if self.temperatures_k.is_empty() {
            return Err(UsageError("at least one temperature is required (--temperatures-K)".into()).into());
        }
        if let Some(&a) = self.separations_nm.iter().find(|&&a| !(a * 1e-9 >= MIN_SEPARATION && a.is_finite())) {
            return Err(UsageError(format!("separation {a} nm is outside the supported range (>= 1 nm)")).into());
        }
        if let Some(&t) = self.temperatures_k.iter().find(|&&t| !(t >= MIN_TEMPERATURE && t.is_finite())) {
            return Err(UsageError(format!("temperature {t} K is outside the supported range (>= 0.01 K)")).into());
        }
        self.settings.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(())
    }

    fn search_dirs() -> Vec<PathBuf> {
        std::env::var_os(DATA_DIR_ENV).map(PathBuf::from).into_iter().collect()
    }

    /// The material config, with `--model` applied on top.
    pub fn material_config(&self) -> Result<MaterialConfig> {
        let mut cfg = match &self.material {
            Some(path) => MaterialConfig::from_file(path).with_context(|| format!("reading material file {}", path.display()))?,
            None => MaterialConfig::default(),
        };
        if let Some(kind) = self.model_override {
            cfg.model = kind;
        }
        Ok(cfg)
    }

    pub fn model(&self) -> Result<DielectricModel> {
        self.model_for(self.material_config()?.model)
    }

    pub fn model_for(&self, kind: ModelKind) -> Result<DielectricModel> {
        let mut cfg = self.material_config()?;
        cfg.model = kind;
        cfg.build(&Self::search_dirs()).context("building dielectric model")
    }
}
