//! Material configuration files.
//!
//! A flat `key = value` text format; `#` starts a comment. Recognised keys:
//!
//! ```text
//! model          = drude | plasma | ideal | mim | tabulated | vacuum
//! omega_p_rad_s  = 1.37e16
//! nu_rad_s       = 5.32e13
//! data_file      = gold_eps2.txt
//! data_axis      = imaginary | real_loss
//! extrapolation  = error | drude
//! ```
//!
//! Drude and plasma fall back to the gold defaults for any missing parameter.

use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dielectric::{DielectricModel, GOLD_NU, GOLD_OMEGA_P};
use crate::error::{Error, Result};
use crate::optical::{load_table_file, Extrapolation, TableAxis};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Drude,
    Plasma,
    Ideal,
    Mim,
    Tabulated,
    Vacuum,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "drude" => ModelKind::Drude,
            "plasma" => ModelKind::Plasma,
            "ideal" => ModelKind::Ideal,
            "mim" => ModelKind::Mim,
            "tabulated" => ModelKind::Tabulated,
            "vacuum" => ModelKind::Vacuum,
            other => return Err(Error::InvalidModel(format!("unknown model '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialConfig {
    pub model: ModelKind,
    pub omega_p: Option<f64>,
    pub nu: Option<f64>,
    pub data_file: Option<PathBuf>,
    pub data_axis: TableAxis,
    pub extrapolation: Extrapolation,
    /// Directory the config was read from; relative data paths resolve here first.
    pub base_dir: Option<PathBuf>,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Drude,
            omega_p: None,
            nu: None,
            data_file: None,
            data_axis: TableAxis::Imaginary,
            extrapolation: Extrapolation::Error,
            base_dir: None,
        }
    }
}

impl MaterialConfig {
    pub fn parse<R: BufRead>(source: R) -> Result<Self> {
        let mut cfg = MaterialConfig::default();
        for (idx, line) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected 'key = value', found '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| v.parse::<f64>().map_err(|_| parse_err(format!("'{v}' is not a number")));
            match key {
                "model" => cfg.model = value.parse().map_err(|e: Error| parse_err(e.to_string()))?,
                "omega_p_rad_s" => cfg.omega_p = Some(number(value)?),
                "nu_rad_s" => cfg.nu = Some(number(value)?),
                "data_file" => cfg.data_file = Some(PathBuf::from(value)),
                "data_axis" => cfg.data_axis = value.parse().map_err(|e: Error| parse_err(e.to_string()))?,
                "extrapolation" => cfg.extrapolation = value.parse().map_err(|e: Error| parse_err(e.to_string()))?,
                other => return Err(parse_err(format!("unknown key '{other}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        let mut cfg = Self::parse(std::io::BufReader::new(file))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Locates `data_file`: absolute paths as given, otherwise next to the
    /// config file, then in each of `search_dirs` in order.
    pub fn resolve_data_file(&self, search_dirs: &[PathBuf]) -> Result<PathBuf> {
        let file = self
            .data_file
            .as_ref()
            .ok_or_else(|| Error::InvalidModel("tabulated model needs data_file".into()))?;
        if file.is_absolute() {
            return Ok(file.clone());
        }
        let candidates = self.base_dir.iter().chain(search_dirs.iter()).map(|d| d.join(file));
        for candidate in candidates {
            if candidate.is_file() {
                return Ok(candidate);
            }
        }
        if file.is_file() {
            return Ok(file.clone());
        }
        Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("data file '{}' not found", file.display()),
        )))
    }

    pub fn build(&self, search_dirs: &[PathBuf]) -> Result<DielectricModel> {
        let model = match self.model {
            ModelKind::Drude => DielectricModel::drude(self.omega_p.unwrap_or(GOLD_OMEGA_P), self.nu.unwrap_or(GOLD_NU))?,
            ModelKind::Plasma => DielectricModel::plasma(self.omega_p.unwrap_or(GOLD_OMEGA_P))?,
            ModelKind::Ideal => DielectricModel::IdealMetal,
            ModelKind::Mim => DielectricModel::ModifiedIdealMetal,
            ModelKind::Vacuum => DielectricModel::Vacuum,
            ModelKind::Tabulated => {
                let path = self.resolve_data_file(search_dirs)?;
                let table = load_table_file(&path, self.data_axis)?;
                DielectricModel::tabulated(table, self.extrapolation)
            }
        };
        Ok(model)
    }
}
