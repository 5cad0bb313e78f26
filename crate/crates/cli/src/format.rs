use crate::manifest::OutputFormat;

/// `x` with `digits` significant digits: positional for moderate magnitudes,
/// scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-3..6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.*e}", digits - 1)
    }
}

/// Machine-readable scientific notation, 10 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

pub fn value(x: f64, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => sig(x, 4),
        OutputFormat::Csv => sci(x),
    }
}

/// Pressure in mPa. Table mode prints magnitudes, csv mode keeps the sign
/// (negative = attractive).
pub fn pressure_mpa(pascal: f64, format: OutputFormat) -> String {
    let mpa = pascal * 1e3;
    match format {
        OutputFormat::Table => sig(mpa.abs(), 4),
        OutputFormat::Csv => sci(mpa),
    }
}

/// Grid coordinates (separations, temperatures) are echoed as given.
pub fn coord(x: f64) -> String {
    format!("{x}")
}
