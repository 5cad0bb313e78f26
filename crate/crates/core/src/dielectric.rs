//! Permittivity models on the imaginary frequency axis and their zero-frequency
//! reflection behaviour.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::optical::{Extrapolation, PermittivityTable};
use crate::physics::{GapConfig, SPEED_OF_LIGHT};

/// Gold plasma frequency, rad/s (9.0 eV).
pub const GOLD_OMEGA_P: f64 = 1.37e16;
/// Gold relaxation frequency, rad/s (0.035 eV).
pub const GOLD_NU: f64 = 5.32e13;

/// ε(iζ) as seen by the reflection code. Perfect conductors carry a tag rather
/// than an IEEE infinity so that the unit-reflection limit is taken explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Permittivity {
    Finite(f64),
    Infinite,
}

impl Permittivity {
    pub fn finite(self) -> Option<f64> {
        match self {
            Permittivity::Finite(e) => Some(e),
            Permittivity::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    Drude { omega_p: f64, nu: f64 },
    Plasma { omega_p: f64 },
    /// ε = ∞ at every Matsubara index, both zero modes with unit reflection.
    IdealMetal,
    /// ε = ∞ at every index, but the TE zero mode is dropped.
    ModifiedIdealMetal,
    Tabulated {
        table: Arc<PermittivityTable>,
        extrapolation: Extrapolation,
    },
    /// ε ≡ 1: no plates at all. Reference case whose pressure is exactly zero.
    Vacuum,
}

impl DielectricModel {
    pub fn gold_drude() -> Self {
        DielectricModel::Drude {
            omega_p: GOLD_OMEGA_P,
            nu: GOLD_NU,
        }
    }

    pub fn gold_plasma() -> Self {
        DielectricModel::Plasma { omega_p: GOLD_OMEGA_P }
    }

    pub fn drude(omega_p: f64, nu: f64) -> Result<Self> {
        let m = DielectricModel::Drude { omega_p, nu };
        m.validate()?;
        Ok(m)
    }

    pub fn plasma(omega_p: f64) -> Result<Self> {
        let m = DielectricModel::Plasma { omega_p };
        m.validate()?;
        Ok(m)
    }

    pub fn tabulated(table: PermittivityTable, extrapolation: Extrapolation) -> Self {
        DielectricModel::Tabulated {
            table: Arc::new(table),
            extrapolation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_wp = |wp: f64| {
            if wp.is_finite() && wp > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidModel(format!("omega_p must be positive, got {wp}")))
            }
        };
        match *self {
            DielectricModel::Drude { omega_p, nu } => {
                check_wp(omega_p)?;
                if !(nu.is_finite() && nu >= 0.0) {
                    return Err(Error::InvalidModel(format!("nu must be nonnegative, got {nu}")));
                }
                Ok(())
            }
            DielectricModel::Plasma { omega_p } => check_wp(omega_p),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DielectricModel::Drude { .. } => "drude",
            DielectricModel::Plasma { .. } => "plasma",
            DielectricModel::IdealMetal => "ideal",
            DielectricModel::ModifiedIdealMetal => "mim",
            DielectricModel::Tabulated { .. } => "tabulated",
            DielectricModel::Vacuum => "vacuum",
        }
    }

    /// Plasma frequency, when the model has one.
    pub fn omega_p(&self) -> Option<f64> {
        match *self {
            DielectricModel::Drude { omega_p, .. } | DielectricModel::Plasma { omega_p } => Some(omega_p),
            _ => None,
        }
    }

    /// Rough frequency window in which the model is a credible description of
    /// a real metal. `None` means no statement (ideal and tabulated models).
    /// The plasma form loses validity below the relaxation scale, the Drude
    /// form above the onset of interband absorption.
    pub fn validity_range(&self) -> Option<(f64, f64)> {
        match self {
            DielectricModel::Drude { .. } => Some((0.0, DRUDE_UPPER_VALIDITY)),
            DielectricModel::Plasma { .. } => Some((PLASMA_LOWER_VALIDITY, f64::INFINITY)),
            _ => None,
        }
    }
}

/// Above this imaginary frequency (rad/s) the Drude form stops describing gold.
pub const DRUDE_UPPER_VALIDITY: f64 = 2.0e15;
/// Below this frequency (rad/s) neglecting relaxation is no longer defensible.
pub const PLASMA_LOWER_VALIDITY: f64 = 5.0e13;

/// Outcome of checking a frequency window against a model's validity range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    /// Fraction of the (log) window below the valid range.
    pub below: f64,
    /// Fraction of the (log) window above the valid range.
    pub above: f64,
}

impl ValidityReport {
    pub fn is_clean(&self) -> bool {
        self.below == 0.0 && self.above == 0.0
    }
}

/// Which part of `[zeta_lo, zeta_hi]` (log-measured) falls outside the model's
/// validity range.
pub fn validity_check(model: &DielectricModel, zeta_lo: f64, zeta_hi: f64) -> Option<ValidityReport> {
    let (lo, hi) = model.validity_range()?;
    if !(zeta_lo > 0.0 && zeta_hi > zeta_lo) {
        return Some(ValidityReport { below: 0.0, above: 0.0 });
    }
    let span = (zeta_hi / zeta_lo).ln();
    let below = if zeta_lo < lo { (lo.min(zeta_hi) / zeta_lo).ln() / span } else { 0.0 };
    let above = if zeta_hi > hi { (zeta_hi / hi.max(zeta_lo)).ln() / span } else { 0.0 };
    Some(ValidityReport { below, above })
}

/// ε(iζ) for ζ > 0. Zero frequency is never evaluated here; see
/// [`zero_mode_reflections`].
pub fn eps_imaginary_axis(model: &DielectricModel, zeta: f64) -> Result<Permittivity> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::InvalidFrequency(zeta));
    }
    Ok(match model {
        // nu = 0 gives the same floating-point expression as Plasma.
        DielectricModel::Drude { omega_p, nu } => Permittivity::Finite(1.0 + omega_p * omega_p / (zeta * (zeta + nu))),
        DielectricModel::Plasma { omega_p } => Permittivity::Finite(1.0 + omega_p * omega_p / (zeta * (zeta + 0.0))),
        DielectricModel::IdealMetal | DielectricModel::ModifiedIdealMetal => Permittivity::Infinite,
        DielectricModel::Tabulated { table, extrapolation } => Permittivity::Finite(table.eps_imaginary(zeta, *extrapolation)?),
        DielectricModel::Vacuum => Permittivity::Finite(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroModePolicy {
    #[default]
    ModelDefault,
    ForceTmOnly,
    ForceTmAndTe,
}

impl std::str::FromStr for ZeroModePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(ZeroModePolicy::ModelDefault),
            "tm-only" => Ok(ZeroModePolicy::ForceTmOnly),
            "tm-te" => Ok(ZeroModePolicy::ForceTmAndTe),
            other => Err(Error::InvalidModel(format!("unknown zero-mode policy '{other}'"))),
        }
    }
}

/// The TE reflection at zero frequency, as a function of y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TeZeroMode {
    /// Δ_TE ≡ 0.
    Absent,
    /// Δ_TE ≡ 1.
    Unit,
    /// Δ_TE = (y − √(y² + κ²)) / (y + √(y² + κ²)) with κ = ω_p a / c.
    Plasma { omega_p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroModeSpec {
    /// Squared TM reflection at ζ = 0 (independent of y).
    pub tm_sq: f64,
    pub te: TeZeroMode,
}

impl ZeroModeSpec {
    /// Squared TE reflection at ζ = 0 for dimensionless momentum `y`.
    pub fn te_sq(&self, y: f64, gap: &GapConfig) -> f64 {
        match self.te {
            TeZeroMode::Absent => 0.0,
            TeZeroMode::Unit => 1.0,
            TeZeroMode::Plasma { omega_p } => plasma_te_zero_sq(y, omega_p * gap.separation() / SPEED_OF_LIGHT),
        }
    }
}

/// [(y − √(y²+κ²)) / (y + √(y²+κ²))]², written without the cancellation in
/// the numerator.
pub fn plasma_te_zero_sq(y: f64, kappa: f64) -> f64 {
    let root = (y * y + kappa * kappa).sqrt();
    let sum = y + root;
    let r = kappa * kappa / (sum * sum);
    r * r
}

pub fn zero_mode_reflections(model: &DielectricModel, policy: ZeroModePolicy) -> ZeroModeSpec {
    if let DielectricModel::Vacuum = model {
        return ZeroModeSpec {
            tm_sq: 0.0,
            te: TeZeroMode::Absent,
        };
    }
    let te = match policy {
        ZeroModePolicy::ForceTmOnly => TeZeroMode::Absent,
        ZeroModePolicy::ModelDefault => match model {
            DielectricModel::Plasma { omega_p } => TeZeroMode::Plasma { omega_p: *omega_p },
            DielectricModel::IdealMetal => TeZeroMode::Unit,
            _ => TeZeroMode::Absent,
        },
        // With a plasma frequency available the plasma prescription is used,
        // otherwise the ideal-metal one.
        ZeroModePolicy::ForceTmAndTe => match model.omega_p() {
            Some(omega_p) => TeZeroMode::Plasma { omega_p },
            None => TeZeroMode::Unit,
        },
    };
    ZeroModeSpec { tm_sq: 1.0, te }
}
