//! Tabulated permittivity data.
//!
//! Two kinds of table are supported: ε(iζ) sampled on the imaginary axis, and
//! the loss part ε″(ω) on the real axis. The latter is mapped to the imaginary
//! axis through the Kramers–Kronig relation
//!
//! ```text
//! ε(iζ) = 1 + (2/π) ∫₀^∞ ω ε″(ω) / (ω² + ζ²) dω
//! ```
//!
//! Below the first sample ε″ is continued as 1/ω and above the last sample as
//! 1/ω³ (the Drude asymptotes); both tails are integrated in closed form.

use std::f64::consts::FRAC_2_PI;
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

pub const MIN_TABLE_POINTS: usize = 8;

/// Relative and absolute tolerance of the Kramers–Kronig quadrature.
pub const KK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableAxis {
    /// ε(iζ) on the imaginary frequency axis.
    Imaginary,
    /// ε″(ω) on the real frequency axis.
    RealLoss,
}

impl TableAxis {
    pub fn name(self) -> &'static str {
        match self {
            TableAxis::Imaginary => "imaginary",
            TableAxis::RealLoss => "real_loss",
        }
    }
}

impl fmt::Display for TableAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TableAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "imaginary" => Ok(TableAxis::Imaginary),
            "real_loss" => Ok(TableAxis::RealLoss),
            other => Err(Error::InvalidTable(format!("unknown data axis '{other}'"))),
        }
    }
}

/// What to do when an imaginary-axis table is queried outside its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extrapolation {
    #[default]
    Error,
    /// Continue (ε−1) as 1/ζ below the grid and 1/ζ² above it, matched to the
    /// end samples. These are the low- and high-frequency Drude asymptotes.
    Drude,
}

impl std::str::FromStr for Extrapolation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error" => Ok(Extrapolation::Error),
            "drude" => Ok(Extrapolation::Drude),
            other => Err(Error::InvalidTable(format!("unknown extrapolation policy '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermittivityTable {
    axis: TableAxis,
    omega: Vec<f64>,
    value: Vec<f64>,
    provenance: String,
}

impl PermittivityTable {
    /// Builds a validated table from samples already in memory. Rows are
    /// sorted by frequency; duplicates are rejected.
    pub fn from_points(
        axis: TableAxis,
        points: impl IntoIterator<Item = (f64, f64)>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut points: Vec<(f64, f64)> = points.into_iter().collect();
        for (i, &(w, v)) in points.iter().enumerate() {
            check_sample(axis, w, v).map_err(|message| Error::InvalidTable(format!("sample {}: {message}", i + 1)))?;
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self::from_sorted(axis, points, provenance.into())
    }

    fn from_sorted(axis: TableAxis, points: Vec<(f64, f64)>, provenance: String) -> Result<Self> {
        if points.len() < MIN_TABLE_POINTS {
            return Err(Error::InvalidTable(format!(
                "need at least {MIN_TABLE_POINTS} points, got {}",
                points.len()
            )));
        }
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidTable(format!(
                "duplicate frequency {:e} rad/s",
                w[1].0
            )));
        }
        let (omega, value) = points.into_iter().unzip();
        Ok(Self {
            axis,
            omega,
            value,
            provenance,
        })
    }

    pub fn axis(&self) -> TableAxis {
        self.axis
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn omega_min(&self) -> f64 {
        self.omega[0]
    }

    pub fn omega_max(&self) -> f64 {
        self.omega[self.omega.len() - 1]
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega.iter().copied().zip(self.value.iter().copied())
    }

    /// Indices of samples where ε(iζ) increases with ζ. Physical imaginary-axis
    /// data is nonincreasing, so a nonempty result indicates suspect data.
    pub fn monotonicity_warnings(&self) -> Vec<usize> {
        if self.axis != TableAxis::Imaginary {
            return Vec::new();
        }
        self.value
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0])
            .map(|(i, _)| i + 1)
            .collect()
    }

    fn expect_axis(&self, axis: TableAxis) -> Result<()> {
        if self.axis != axis {
            return Err(Error::AxisMismatch {
                expected: axis.name(),
                found: self.axis.name(),
            });
        }
        Ok(())
    }

    /// Evaluates ε(iζ) for either kind of table: interpolation for
    /// imaginary-axis data, Kramers–Kronig for loss data (which needs no
    /// extrapolation policy since its tails are analytic).
    pub fn eps_imaginary(&self, zeta: f64, extrapolation: Extrapolation) -> Result<f64> {
        match self.axis {
            TableAxis::Imaginary => interpolate_imaginary_axis(self, zeta, extrapolation),
            TableAxis::RealLoss => kramers_kronig_to_imaginary_axis(self, zeta),
        }
    }

    /// Tabulates ε(iζ) from loss data on the given ζ grid.
    pub fn to_imaginary_axis(&self, zetas: &[f64]) -> Result<PermittivityTable> {
        self.expect_axis(TableAxis::RealLoss)?;
        let points = zetas
            .iter()
            .map(|&z| kramers_kronig_to_imaginary_axis(self, z).map(|e| (z, e)))
            .collect::<Result<Vec<_>>>()?;
        PermittivityTable::from_points(
            TableAxis::Imaginary,
            points,
            format!("Kramers-Kronig transform of {}", self.provenance),
        )
    }
}

fn check_sample(axis: TableAxis, omega: f64, value: f64) -> std::result::Result<(), String> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(format!("frequency must be positive, got {omega}"));
    }
    if !value.is_finite() {
        return Err(format!("value must be finite, got {value}"));
    }
    match axis {
        TableAxis::Imaginary if value < 1.0 => Err(format!("eps(i zeta) must be >= 1, got {value}")),
        TableAxis::RealLoss if value < 0.0 => Err(format!("eps'' must be >= 0, got {value}")),
        _ => Ok(()),
    }
}

/// Reads the two-column text format: `omega value` per row, separated by
/// whitespace or a comma; `#` starts a comment; blank lines are skipped.
/// Rows must already be in strictly increasing frequency order.
pub fn load_table<R: BufRead>(source: R, axis: TableAxis, provenance: impl Into<String>) -> Result<PermittivityTable> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 columns, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("'{s}' is not a number"),
            })
        };
        let omega = parse(fields[0])?;
        let value = parse(fields[1])?;
        check_sample(axis, omega, value).map_err(|message| Error::Parse { line: line_no, message })?;
        if let Some(&(prev, _)) = points.last() {
            if omega <= prev {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("frequency {omega:e} does not increase (previous {prev:e})"),
                });
            }
        }
        points.push((omega, value));
    }
    PermittivityTable::from_sorted(axis, points, provenance.into())
}

pub fn load_table_file(path: &std::path::Path, axis: TableAxis) -> Result<PermittivityTable> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    load_table(std::io::BufReader::new(file), axis, path.display().to_string())
}

/// ε″ between samples: linear in log-log where both neighbours are positive,
/// otherwise linear in ln ω.
fn loss_between(table: &PermittivityTable, i: usize, ln_w: f64) -> f64 {
    let (w0, w1) = (table.omega[i], table.omega[i + 1]);
    let (v0, v1) = (table.value[i], table.value[i + 1]);
    let t = (ln_w - w0.ln()) / (w1.ln() - w0.ln());
    if v0 > 0.0 && v1 > 0.0 {
        (v0.ln() + t * (v1.ln() - v0.ln())).exp()
    } else {
        v0 + t * (v1 - v0)
    }
}

/// ε(iζ) from real-axis loss data.
pub fn kramers_kronig_to_imaginary_axis(table: &PermittivityTable, zeta: f64) -> Result<f64> {
    table.expect_axis(TableAxis::RealLoss)?;
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::InvalidFrequency(zeta));
    }

    // Work with ∫ ω ε″/(ω²+ζ²) dω; scale by ζ so that integrands are O(ε″).
    let w_lo = table.omega_min();
    let w_hi = table.omega_max();
    let lo_amp = table.value[0] * w_lo;
    let hi_amp = table.value[table.len() - 1] * w_hi.powi(3);

    // ∫₀^{w_lo} ω (A/ω)/(ω²+ζ²) dω = (A/ζ) atan(w_lo/ζ)
    let low_tail = lo_amp / zeta * (w_lo / zeta).atan();
    // ∫_{w_hi}^∞ ω (B/ω³)/(ω²+ζ²) dω = (B/ζ²)[1/w_hi − atan(ζ/w_hi)/ζ]
    let high_tail = {
        let t = zeta / w_hi;
        let bracket = if t < 1e-2 {
            // series of (t - atan t)/t³ avoids cancellation
            let t2 = t * t;
            (1.0 / 3.0 - t2 / 5.0 + t2 * t2 / 7.0 - t2 * t2 * t2 / 9.0) / w_hi.powi(3)
        } else {
            (1.0 / w_hi - t.atan() / zeta) / (zeta * zeta)
        };
        hi_amp * bracket
    };

    // Tabulated range in u = ln ω: dω = ω du.
    let tol = Tolerance::new(KK_TOLERANCE, 0.0);
    let ln_zeta = zeta.ln();
    let z2 = zeta * zeta;
    let mut body = crate::summation::CompensatedSum::new();
    let mut scale = 0.0_f64;
    let mut pieces = Vec::with_capacity(table.len());
    for i in 0..table.len() - 1 {
        let (u0, u1) = (table.omega[i].ln(), table.omega[i + 1].ln());
        if table.value[i] == 0.0 && table.value[i + 1] == 0.0 {
            continue;
        }
        let integrand = move |u: f64| {
            let w = u.exp();
            let loss = loss_between(table, i, u);
            w * w * loss / (w * w + z2)
        };
        let breaks: &[f64] = if ln_zeta > u0 && ln_zeta < u1 { &[ln_zeta] } else { &[] };
        // coarse pass to set the absolute scale for the tolerance
        let (rough, _) = quadrature::gauss_kronrod_21(&integrand, u0, u1);
        scale = scale.max(rough.abs());
        pieces.push((u0, u1, breaks.to_vec(), i));
    }
    let abs_floor = KK_TOLERANCE * scale / (table.len() as f64);
    for (u0, u1, breaks, i) in pieces {
        let integrand = |u: f64| {
            let w = u.exp();
            let loss = loss_between(table, i, u);
            w * w * loss / (w * w + z2)
        };
        let r = quadrature::integrate_with_breaks(integrand, u0, u1, &breaks, Tolerance { abs: abs_floor, ..tol });
        body.add(r.value);
    }
    body.add(low_tail);
    body.add(high_tail);

    Ok(1.0 + FRAC_2_PI * body.value())
}

/// Log-log interpolation of (ε−1) on an imaginary-axis table.
pub fn interpolate_imaginary_axis(table: &PermittivityTable, zeta: f64, extrapolation: Extrapolation) -> Result<f64> {
    table.expect_axis(TableAxis::Imaginary)?;
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::InvalidFrequency(zeta));
    }
    let (lo, hi) = (table.omega_min(), table.omega_max());
    if zeta < lo || zeta > hi {
        return match extrapolation {
            Extrapolation::Error => Err(Error::OutOfRange { zeta, min: lo, max: hi }),
            Extrapolation::Drude if zeta < lo => Ok(1.0 + (table.value[0] - 1.0) * lo / zeta),
            Extrapolation::Drude => {
                let r = hi / zeta;
                Ok(1.0 + (table.value[table.len() - 1] - 1.0) * r * r)
            }
        };
    }
    // first index with omega >= zeta
    let j = table.omega.partition_point(|&w| w < zeta);
    if table.omega[j] == zeta {
        return Ok(table.value[j]);
    }
    let i = j - 1;
    let (w0, w1) = (table.omega[i], table.omega[i + 1]);
    let (x0, x1) = (table.value[i] - 1.0, table.value[i + 1] - 1.0);
    let t = (zeta.ln() - w0.ln()) / (w1.ln() - w0.ln());
    let excess = if x0 > 0.0 && x1 > 0.0 {
        (x0.ln() + t * (x1.ln() - x0.ln())).exp()
    } else {
        x0 + t * (x1 - x0)
    };
    Ok(1.0 + excess)
}

/// ε″(ω) of the Drude model, ω_p² ν / (ω (ω² + ν²)).
pub fn drude_loss(omega_p: f64, nu: f64, omega: f64) -> f64 {
    omega_p * omega_p * nu / (omega * (omega * omega + nu * nu))
}

/// Samples `f` on `n` log-spaced points spanning `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Convenience: the imaginary-axis Drude value for a frequency in rad/s.
pub fn drude_imaginary(omega_p: f64, nu: f64, zeta: f64) -> f64 {
    1.0 + omega_p * omega_p / (zeta * (zeta + nu))
}
