//! Parallel-plate Lifshitz pressure and free energy as Matsubara sums.
//!
//! With y = √(k⊥² + ζ_m²/c²)·a, q_m = ζ_m a/c and s = √(y² + (ε−1) q_m²):
//!
//! ```text
//! Δ_TE = (s − y)/(s + y),   Δ_TM = (εy − s)/(εy + s)
//!
//! P = −(k_B T / π a³)  Σ′_m ∫_{q_m}^{y_max} y² Σ_pol [e^{2y}/Δ² − 1]⁻¹ dy
//! F =  (k_B T / 2π a²) Σ′_m ∫_{q_m}^{y_max} y   Σ_pol ln(1 − Δ² e^{−2y}) dy
//! ```
//!
//! The primed sum gives m = 0 half weight. That term is handled separately
//! (see [`zero_mode_term`]) because its reflection coefficients are fixed by the
//! model's zero-frequency policy rather than by ε(iζ).
//!
//! Terms for distinct m are independent and may be evaluated concurrently, but
//! they are always accumulated in ascending m with compensated summation and
//! the truncation test is applied in that order. The result is therefore
//! bitwise identical for any degree of parallelism.

use std::f64::consts::PI;

use crate::dielectric::{eps_imaginary_axis, zero_mode_reflections, DielectricModel, Permittivity, TeZeroMode, ZeroModePolicy};
use crate::error::{Error, Result};
use crate::physics::{dimensionless_frequency, matsubara_frequency, GapConfig, ZETA_3};
use crate::quadrature::{integrate_with_breaks, Tolerance};
use crate::summation::CompensatedSum;

/// How independent Matsubara terms are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when built with the `parallel` feature; otherwise
    /// the same as `Sequential`.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsSettings {
    /// Upper limit of every y integral.
    pub y_max: f64,
    /// Relative quadrature tolerance.
    pub integral_tol: f64,
    /// Absolute quadrature floor, for terms deep in the truncation tail.
    pub integral_abs_floor: f64,
    /// A term counts as negligible when |term| ≤ sum_tol · (largest |term| so far).
    pub sum_tol: f64,
    /// Number of successive negligible terms that ends the sum.
    pub consecutive_below: u32,
    pub execution: Execution,
    /// Keep (m, ζ_m, term) for every summed term in the result.
    pub record_terms: bool,
}

impl Default for NumericsSettings {
    fn default() -> Self {
        Self {
            y_max: 30.0,
            integral_tol: 1e-12,
            integral_abs_floor: 1e-30,
            sum_tol: 1e-8,
            consecutive_below: 2,
            execution: Execution::default(),
            record_terms: false,
        }
    }
}

impl NumericsSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSettings(format!("{name} must be positive, got {v}")))
            }
        };
        positive("y_max", self.y_max)?;
        positive("integral_tol", self.integral_tol)?;
        positive("sum_tol", self.sum_tol)?;
        if self.integral_abs_floor.is_nan() || self.integral_abs_floor < 0.0 {
            return Err(Error::InvalidSettings("integral_abs_floor must be nonnegative".into()));
        }
        if self.consecutive_below < 1 {
            return Err(Error::InvalidSettings("consecutive_below must be at least 1".into()));
        }
        Ok(())
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.integral_tol, self.integral_abs_floor)
    }
}

/// Squared reflection coefficients for one (ε, y, q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub delta_tm_sq: f64,
    pub delta_te_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermRecord {
    pub m: u64,
    pub zeta: f64,
    /// Dimensionless term value, zero mode including its ½ weight.
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureResult {
    /// Pa; negative means attraction.
    pub pressure: f64,
    /// Number of m ≥ 1 terms summed.
    pub n_terms: u64,
    /// ζ at m = n_terms, rad/s.
    pub highest_frequency: f64,
    pub per_term_log: Option<Vec<TermRecord>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyResult {
    /// J/m².
    pub free_energy: f64,
    pub n_terms: u64,
    pub highest_frequency: f64,
    pub per_term_log: Option<Vec<TermRecord>>,
}

pub fn reflection_coefficients(eps: Permittivity, y: f64, q: f64) -> Result<ReflectionPair> {
    if !(y >= q && q >= 0.0) {
        return Err(Error::MomentumBelowFrequency { y, q });
    }
    Ok(reflection_unchecked(eps, y, q))
}

#[inline]
fn reflection_unchecked(eps: Permittivity, y: f64, q: f64) -> ReflectionPair {
    match eps {
        Permittivity::Infinite => ReflectionPair {
            delta_tm_sq: 1.0,
            delta_te_sq: 1.0,
        },
        Permittivity::Finite(e) => {
            let s = (y * y + (e - 1.0) * q * q).sqrt();
            let te = (s - y) / (s + y);
            let tm = (e * y - s) / (e * y + s);
            ReflectionPair {
                delta_tm_sq: tm * tm,
                delta_te_sq: te * te,
            }
        }
    }
}

/// δ e^{−2y}/(1 − δ e^{−2y}), i.e. (e^{2y}/δ − 1)⁻¹, exactly 0 for δ = 0.
#[inline]
fn bose_factor(delta_sq: f64, decay: f64) -> f64 {
    if delta_sq == 0.0 {
        return 0.0;
    }
    let x = delta_sq * decay;
    x / (1.0 - x)
}

#[inline]
fn log_factor(delta_sq: f64, decay: f64) -> f64 {
    if delta_sq == 0.0 {
        return 0.0;
    }
    (-delta_sq * decay).ln_1p()
}

/// y² [ (e^{2y}/Δ_TM² − 1)⁻¹ + (e^{2y}/Δ_TE² − 1)⁻¹ ].
pub fn pressure_integrand(pair: ReflectionPair, y: f64) -> f64 {
    let decay = (-2.0 * y).exp();
    y * y * (bose_factor(pair.delta_tm_sq, decay) + bose_factor(pair.delta_te_sq, decay))
}

/// y [ ln(1 − Δ_TM² e^{−2y}) + ln(1 − Δ_TE² e^{−2y}) ].
pub fn free_energy_integrand(pair: ReflectionPair, y: f64) -> f64 {
    let decay = (-2.0 * y).exp();
    y * (log_factor(pair.delta_tm_sq, decay) + log_factor(pair.delta_te_sq, decay))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Pressure,
    FreeEnergy,
}

impl Quantity {
    fn integrand(self, pair: ReflectionPair, y: f64) -> f64 {
        match self {
            Quantity::Pressure => pressure_integrand(pair, y),
            Quantity::FreeEnergy => free_energy_integrand(pair, y),
        }
    }

    /// ½ ∫₀^∞ of the integrand for a polarization with unit reflection.
    fn unit_zero_mode(self) -> f64 {
        match self {
            // ½ ∫ y²/(e^{2y}−1) dy = ζ(3)/8
            Quantity::Pressure => ZETA_3 / 8.0,
            // ½ ∫ y ln(1 − e^{−2y}) dy = −ζ(3)/8
            Quantity::FreeEnergy => -ZETA_3 / 8.0,
        }
    }
}

fn integrate_term(quantity: Quantity, eps: Permittivity, q: f64, settings: &NumericsSettings) -> f64 {
    if q >= settings.y_max {
        return 0.0;
    }
    if let Permittivity::Finite(e) = eps {
        if e == 1.0 {
            return 0.0;
        }
    }
    let f = |y: f64| quantity.integrand(reflection_unchecked(eps, y, q), y);
    integrate_with_breaks(f, q, settings.y_max, &[q + 1.0], settings.tolerance()).value
}

fn matsubara_term_for(quantity: Quantity, m: u64, gap: &GapConfig, model: &DielectricModel, settings: &NumericsSettings) -> Result<f64> {
    let q = dimensionless_frequency(m, gap);
    if q >= settings.y_max {
        return Ok(0.0);
    }
    let zeta = matsubara_frequency(m, gap.temperature())?;
    let eps = eps_imaginary_axis(model, zeta)?;
    Ok(integrate_term(quantity, eps, q, settings))
}

/// Dimensionless pressure term for m ≥ 1: ∫_{q_m}^{y_max} of the pressure
/// integrand. Zero once q_m reaches y_max.
pub fn matsubara_term(m: u64, gap: &GapConfig, model: &DielectricModel, settings: &NumericsSettings) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidSettings("matsubara_term needs m >= 1; use zero_mode_term".into()));
    }
    matsubara_term_for(Quantity::Pressure, m, gap, model, settings)
}

/// Same for the free-energy integrand.
pub fn matsubara_free_energy_term(m: u64, gap: &GapConfig, model: &DielectricModel, settings: &NumericsSettings) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidSettings("matsubara_free_energy_term needs m >= 1".into()));
    }
    matsubara_term_for(Quantity::FreeEnergy, m, gap, model, settings)
}

fn zero_mode_for(quantity: Quantity, gap: &GapConfig, model: &DielectricModel, policy: ZeroModePolicy, settings: &NumericsSettings) -> f64 {
    let spec = zero_mode_reflections(model, policy);

    let polarization = |weight: f64, sq: &dyn Fn(f64) -> f64| {
        let f = |y: f64| {
            let decay = (-2.0 * y).exp();
            let r = sq(y);
            match quantity {
                Quantity::Pressure => y * y * bose_factor(r, decay),
                Quantity::FreeEnergy => y * log_factor(r, decay),
            }
        };
        weight * integrate_with_breaks(f, 0.0, settings.y_max, &[1.0], settings.tolerance()).value
    };

    let tm = if spec.tm_sq == 0.0 {
        0.0
    } else if spec.tm_sq == 1.0 {
        quantity.unit_zero_mode()
    } else {
        polarization(0.5, &|_| spec.tm_sq)
    };
    let te = match spec.te {
        TeZeroMode::Absent => 0.0,
        TeZeroMode::Unit => quantity.unit_zero_mode(),
        TeZeroMode::Plasma { .. } => polarization(0.5, &|y| spec.te_sq(y, gap)),
    };
    tm + te
}

/// The m = 0 pressure term with its ½ weight. Unit reflections are taken in
/// closed form (ζ(3)/8 per polarization); only the plasma TE reflection needs
/// quadrature.
pub fn zero_mode_term(gap: &GapConfig, model: &DielectricModel, policy: ZeroModePolicy, settings: &NumericsSettings) -> f64 {
    zero_mode_for(Quantity::Pressure, gap, model, policy, settings)
}

pub fn zero_mode_free_energy_term(gap: &GapConfig, model: &DielectricModel, policy: ZeroModePolicy, settings: &NumericsSettings) -> f64 {
    zero_mode_for(Quantity::FreeEnergy, gap, model, policy, settings)
}

struct SeriesOutcome {
    sum: f64,
    n_terms: u64,
    log: Option<Vec<TermRecord>>,
}

const FIRST_CHUNK: u64 = 8;
const MAX_CHUNK: u64 = 512;
/// Extra distance past y_max, in units of y, before declaring the series stuck.
const TRUNCATION_MARGIN: f64 = 1.0;

fn evaluate_chunk<F>(execution: Execution, start: u64, len: u64, term: &F) -> Vec<Result<f64>>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (start..start + len).into_par_iter().map(term).collect()
        }
        _ => (start..start + len).map(term).collect(),
    }
}

fn sum_series(
    quantity: Quantity,
    gap: &GapConfig,
    model: &DielectricModel,
    policy: ZeroModePolicy,
    settings: &NumericsSettings,
) -> Result<SeriesOutcome> {
    settings.validate()?;
    model.validate()?;
    gap.check_regime()?;

    let zero = zero_mode_for(quantity, gap, model, policy, settings);
    let mut acc = CompensatedSum::new();
    acc.add(zero);
    let mut log = settings.record_terms.then(|| vec![TermRecord { m: 0, zeta: 0.0, term: zero }]);

    let term = |m: u64| matsubara_term_for(quantity, m, gap, model, settings);
    let q1 = dimensionless_frequency(1, gap);

    // Terms are O(1) integrals whatever the temperature, while the partial sum
    // grows like 1/q_1. Measuring terms against the largest one keeps the
    // relative truncation error near sum_tol at every T.
    let mut peak = zero.abs();
    let mut below = 0u32;
    let mut next = 1u64;
    let mut chunk = FIRST_CHUNK;
    loop {
        let values = evaluate_chunk(settings.execution, next, chunk, &term);
        for (offset, value) in values.into_iter().enumerate() {
            let m = next + offset as u64;
            let value = value?;
            acc.add(value);
            if let Some(log) = log.as_mut() {
                log.push(TermRecord {
                    m,
                    zeta: matsubara_frequency(m, gap.temperature())?,
                    term: value,
                });
            }
            peak = peak.max(value.abs());
            if value.abs() <= settings.sum_tol * peak {
                below += 1;
                if below >= settings.consecutive_below {
                    return Ok(SeriesOutcome {
                        sum: acc.value(),
                        n_terms: m,
                        log,
                    });
                }
            } else {
                below = 0;
            }
            let q = m as f64 * q1;
            if q > settings.y_max + TRUNCATION_MARGIN {
                return Err(Error::TruncationNotReached { q, y_max: settings.y_max });
            }
        }
        next += chunk;
        chunk = (chunk * 2).min(MAX_CHUNK);
    }
}

/// Casimir pressure between two identical half-spaces, in Pa.
pub fn casimir_pressure(gap: &GapConfig, model: &DielectricModel, policy: ZeroModePolicy, settings: &NumericsSettings) -> Result<PressureResult> {
    let series = sum_series(Quantity::Pressure, gap, model, policy, settings)?;
    let a = gap.separation();
    Ok(PressureResult {
        pressure: -gap.thermal_energy() / (PI * a * a * a) * series.sum,
        n_terms: series.n_terms,
        highest_frequency: matsubara_frequency(series.n_terms, gap.temperature())?,
        per_term_log: series.log,
    })
}

pub fn free_energy(gap: &GapConfig, model: &DielectricModel, policy: ZeroModePolicy, settings: &NumericsSettings) -> Result<FreeEnergyResult> {
    let series = sum_series(Quantity::FreeEnergy, gap, model, policy, settings)?;
    let a = gap.separation();
    Ok(FreeEnergyResult {
        free_energy: gap.thermal_energy() / (2.0 * PI * a * a) * series.sum,
        n_terms: series.n_terms,
        highest_frequency: matsubara_frequency(series.n_terms, gap.temperature())?,
        per_term_log: series.log,
    })
}

/// Free energy per unit area, J/m².
pub fn free_energy_per_area(gap: &GapConfig, model: &DielectricModel, policy: ZeroModePolicy, settings: &NumericsSettings) -> Result<f64> {
    free_energy(gap, model, policy, settings).map(|r| r.free_energy)
}
