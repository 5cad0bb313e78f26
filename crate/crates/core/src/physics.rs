//! Physical constants, the plate/temperature scenario, and Matsubara frequencies.
//!
//! Everything in here works in SI units. Conversions to nanometres and
//! millipascals happen only at the CLI boundary.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// CODATA 2018 exact/recommended values. Compiled in so that table fixtures
/// are reproducible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_boltzmann: f64,
    /// Speed of light in vacuum, m/s.
    pub c: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    k_boltzmann: 1.380_649e-23,
    c: 2.997_924_58e8,
};

pub const HBAR: f64 = CONSTANTS.hbar;
pub const K_BOLTZMANN: f64 = CONSTANTS.k_boltzmann;
pub const SPEED_OF_LIGHT: f64 = CONSTANTS.c;

/// Riemann zeta(3) (Apéry's constant).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// Smallest separation the engine will accept, m.
pub const MIN_SEPARATION: f64 = 1.0e-9;
/// Smallest temperature the engine will accept, K.
pub const MIN_TEMPERATURE: f64 = 1.0e-2;

/// One physical scenario: plate separation and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapConfig {
    separation: f64,
    temperature: f64,
}

impl GapConfig {
    /// `separation` in metres, `temperature` in kelvin. Both must be
    /// strictly positive and finite.
    pub fn new(separation: f64, temperature: f64) -> Result<Self> {
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::InvalidSeparation(separation));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidTemperature(temperature));
        }
        Ok(Self {
            separation,
            temperature,
        })
    }

    pub fn from_nm(separation_nm: f64, temperature: f64) -> Result<Self> {
        Self::new(separation_nm * 1.0e-9, temperature)
    }

    /// Plate separation, m.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Temperature, K.
    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        Self::new(separation, self.temperature)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.separation, temperature)
    }

    /// Rejects scenarios outside the regime the engine has been validated for
    /// (a < 1 nm or T < 0.01 K).
    pub fn check_regime(&self) -> Result<()> {
        if self.separation < MIN_SEPARATION {
            return Err(Error::OutsideRegime(format!(
                "separation {:.3e} m is below the minimum {:.0e} m",
                self.separation, MIN_SEPARATION
            )));
        }
        if self.temperature < MIN_TEMPERATURE {
            return Err(Error::OutsideRegime(format!(
                "temperature {:.3e} K is below the minimum {:.0e} K",
                self.temperature, MIN_TEMPERATURE
            )));
        }
        Ok(())
    }

    /// First nonvanishing Matsubara frequency, rad/s.
    pub fn zeta_1(&self) -> f64 {
        first_matsubara(self.temperature)
    }

    /// Converts an angular frequency to the dimensionless ζa/c.
    pub fn to_dimensionless(&self, zeta: f64) -> f64 {
        zeta * self.separation / SPEED_OF_LIGHT
    }

    /// k_B T, J.
    pub fn thermal_energy(&self) -> f64 {
        K_BOLTZMANN * self.temperature
    }
}

#[inline]
fn first_matsubara(temperature: f64) -> f64 {
    (2.0 * PI * K_BOLTZMANN / HBAR) * temperature
}

/// ζ_m = 2π m k_B T / ħ in rad/s.
///
/// Computed as `m · ζ_1`, so `matsubara_frequency(m, T)` is bitwise equal to
/// `m as f64 * matsubara_frequency(1, T)`.
pub fn matsubara_frequency(m: u64, temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidTemperature(temperature));
    }
    Ok(m as f64 * first_matsubara(temperature))
}

/// q_m = ζ_m a / c.
pub fn dimensionless_frequency(m: u64, gap: &GapConfig) -> f64 {
    m as f64 * gap.to_dimensionless(gap.zeta_1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sig4(x: f64) -> f64 {
        let e = x.abs().log10().floor();
        let scale = 10f64.powf(e - 3.0);
        (x / scale).round() * scale
    }

    #[test]
    fn first_frequencies_match_table_captions() {
        assert_relative_eq!(sig4(matsubara_frequency(1, 1.0).unwrap()), 8.226e11, max_relative = 1e-12);
        assert_relative_eq!(sig4(matsubara_frequency(1, 300.0).unwrap()), 2.468e14, max_relative = 1e-12);
        assert_relative_eq!(sig4(matsubara_frequency(1, 350.0).unwrap()), 2.879e14, max_relative = 1e-12);
    }

    #[test]
    fn zero_mode_is_exactly_zero() {
        assert_eq!(matsubara_frequency(0, 300.0).unwrap(), 0.0);
        let gap = GapConfig::from_nm(160.0, 300.0).unwrap();
        assert_eq!(dimensionless_frequency(0, &gap), 0.0);
    }

    #[test]
    fn rejects_nonpositive_temperature() {
        assert!(matsubara_frequency(1, 0.0).is_err());
        assert!(matsubara_frequency(1, -3.0).is_err());
        assert!(matsubara_frequency(1, f64::NAN).is_err());
    }

    #[test]
    fn dimensionless_examples() {
        let gap = GapConfig::from_nm(160.0, 1.0).unwrap();
        let q1 = dimensionless_frequency(1, &gap);
        assert_relative_eq!(q1, 8.226e11 * 1.6e-7 / 2.998e8, max_relative = 1e-3);

        let gap = GapConfig::from_nm(160.0, 300.0).unwrap();
        let q86 = dimensionless_frequency(86, &gap);
        assert_relative_eq!(q86, 11.3, max_relative = 5e-3);
        // Room-temperature reference at 160 nm: highest frequency 2.122e16 rad/s at m = 86.
        assert_relative_eq!(matsubara_frequency(86, 300.0).unwrap(), 2.122e16, max_relative = 5e-4);
    }

    #[test]
    fn regime_limits() {
        assert!(GapConfig::new(0.5e-9, 300.0).unwrap().check_regime().is_err());
        assert!(GapConfig::new(1e-6, 1e-3).unwrap().check_regime().is_err());
        assert!(GapConfig::new(1e-6, 1.0).unwrap().check_regime().is_ok());
        assert!(GapConfig::new(0.0, 1.0).is_err());
        assert!(GapConfig::new(1e-6, 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn scaling_in_m_is_exact(m in 0u64..1_000_000, t in 0.01f64..5000.0) {
            let z1 = matsubara_frequency(1, t).unwrap();
            proptest::prop_assert_eq!(matsubara_frequency(m, t).unwrap(), m as f64 * z1);
        }

        #[test]
        fn linear_in_temperature(m in 0u64..1_000_000, t in 0.01f64..5000.0) {
            let a = matsubara_frequency(m, 2.0 * t).unwrap();
            let b = 2.0 * matsubara_frequency(m, t).unwrap();
            proptest::prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.abs());
        }

        #[test]
        fn strictly_increasing(m in 0u64..1_000_000, t in 0.01f64..5000.0) {
            proptest::prop_assert!(matsubara_frequency(m + 1, t).unwrap() > matsubara_frequency(m, t).unwrap());
        }
    }
}
