use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use casimir_core::material::ModelKind;
use casimir_core::optical::{load_table_file, TableAxis};
use casimir_core::reference::ReferenceTable;
use casimir_core::thermo::{entropy_scan, EntropyStep};
use casimir_core::{casimir_pressure, DielectricModel, GapConfig, PressureResult};

use crate::format;
use crate::manifest::{OutputFormat, RunManifest};
use crate::UsageError;

pub struct Output {
    pub csv: String,
    pub term_log: Option<String>,
}

impl Output {
    fn plain(csv: String) -> Self {
        Self { csv, term_log: None }
    }
}

fn header(out: &mut String, manifest: &RunManifest) {
    if manifest.format == OutputFormat::Csv {
        out.push_str("# pressures are signed, in mPa; negative = attractive\n");
    }
}

fn run_scenario(manifest: &RunManifest, model: &DielectricModel, separation_nm: f64, temperature: f64) -> Result<PressureResult> {
    let gap = GapConfig::from_nm(separation_nm, temperature)?;
    casimir_pressure(&gap, model, manifest.policy, &manifest.settings)
        .with_context(|| format!("scenario a = {separation_nm} nm, T = {temperature} K ({}) failed", model.name()))
}

pub fn pressure_table(manifest: &RunManifest) -> Result<Output> {
    let model = manifest.model()?;
    let mut csv = String::new();
    header(&mut csv, manifest);
    csv.push_str("separation_nm,temperature_K,pressure_mPa,highest_frequency_rad_s,n_terms\n");
    let mut log = manifest.per_term_log.as_ref().map(|_| String::from("separation_nm,temperature_K,m,zeta_rad_s,term\n"));

    for &t in &manifest.temperatures_k {
        for &a in &manifest.separations_nm {
            let r = run_scenario(manifest, &model, a, t)?;
            writeln!(
                csv,
                "{},{},{},{},{}",
                format::coord(a),
                format::coord(t),
                format::pressure_mpa(r.pressure, manifest.format),
                format::value(r.highest_frequency, manifest.format),
                r.n_terms
            )?;
            if let (Some(log), Some(terms)) = (log.as_mut(), r.per_term_log.as_ref()) {
                for term in terms {
                    writeln!(log, "{},{},{},{},{}", format::coord(a), format::coord(t), term.m, format::sci(term.zeta), format::sci(term.term))?;
                }
            }
        }
    }
    Ok(Output { csv, term_log: log })
}

pub fn compare_models(manifest: &RunManifest, fixture: &Path, models: &[ModelKind]) -> Result<Output> {
    let reference = ReferenceTable::from_file(fixture).with_context(|| format!("reading fixture {}", fixture.display()))?;
    let columns = reference.pressure_columns();
    if columns.is_empty() {
        bail!("fixture {} has no pressure columns (names ending in _mPa)", fixture.display());
    }
    let kinds: Vec<ModelKind> = if models.is_empty() {
        vec![manifest.material_config()?.model]
    } else {
        models.to_vec()
    };

    let mut csv = String::new();
    csv.push_str("# rel_diff = (|computed| - |reference|) / |reference|\n");
    csv.push_str("separation_nm,temperature_K,model,computed_mPa,reference_column,reference_mPa,rel_diff\n");
    for kind in kinds {
        let model = manifest.model_for(kind)?;
        for &t in &manifest.temperatures_k {
            for row in &reference.rows {
                let r = run_scenario(manifest, &model, row.separation_nm, t)?;
                let computed = r.pressure * 1e3;
                for col in &columns {
                    let reference_value = row.values[reference.column_index(col).expect("listed column")];
                    let rel = (computed.abs() - reference_value.abs()) / reference_value.abs();
                    writeln!(
                        csv,
                        "{},{},{},{},{},{},{}",
                        format::coord(row.separation_nm),
                        format::coord(t),
                        model.name(),
                        format::pressure_mpa(r.pressure, manifest.format),
                        col,
                        format::coord(reference_value),
                        format::value(rel, manifest.format)
                    )?;
                }
            }
        }
    }
    Ok(Output::plain(csv))
}

pub fn temperature_sweep(manifest: &RunManifest) -> Result<Output> {
    if manifest.temperatures_k.len() < 2 {
        return Err(UsageError("a temperature sweep needs at least two temperatures".into()).into());
    }
    let model = manifest.model()?;
    let t_ref = manifest.temperatures_k[0];
    let mut csv = String::new();
    header(&mut csv, manifest);
    writeln!(csv, "# ratio = P(T) / P(T = {} K)", format::coord(t_ref))?;
    csv.push_str("temperature_K,separation_nm,pressure_mPa,ratio\n");

    for &a in &manifest.separations_nm {
        let p_ref = run_scenario(manifest, &model, a, t_ref)?.pressure;
        for &t in &manifest.temperatures_k {
            let p = if t == t_ref { p_ref } else { run_scenario(manifest, &model, a, t)?.pressure };
            writeln!(
                csv,
                "{},{},{},{}",
                format::coord(t),
                format::coord(a),
                format::pressure_mpa(p, manifest.format),
                format::value(p / p_ref, manifest.format)
            )?;
        }
    }
    Ok(Output::plain(csv))
}

pub fn entropy(manifest: &RunManifest, dt: Option<f64>) -> Result<Output> {
    if manifest.separations_nm.len() != 1 {
        return Err(UsageError("an entropy scan takes exactly one separation".into()).into());
    }
    let a = manifest.separations_nm[0];
    let mut temperatures = manifest.temperatures_k.clone();
    temperatures.sort_by(f64::total_cmp);
    temperatures.dedup();
    let model = manifest.model()?;
    let step = dt.map_or(EntropyStep::Auto, EntropyStep::Fixed);
    let scan = entropy_scan(a * 1e-9, &temperatures, &model, manifest.policy, &manifest.settings, step)
        .with_context(|| format!("entropy scan at a = {a} nm ({}) failed", model.name()))?;

    let mut csv = String::new();
    writeln!(csv, "# separation_nm = {}, model = {}", format::coord(a), model.name())?;
    csv.push_str("T_K,S_J_per_K_m2\n");
    for (t, s) in scan.temperatures.iter().zip(&scan.entropy) {
        writeln!(csv, "{},{}", format::coord(*t), format::value(*s, manifest.format))?;
    }
    Ok(Output::plain(csv))
}

pub fn kk_transform(input: &Path, zetas: &[f64], format: OutputFormat) -> Result<Output> {
    if zetas.is_empty() {
        return Err(UsageError("no zeta values given".into()).into());
    }
    let table = load_table_file(input, TableAxis::RealLoss).with_context(|| format!("reading loss table {}", input.display()))?;
    let mut csv = String::from("zeta_rad_s,eps_imaginary_axis\n");
    for &z in zetas {
        let eps = casimir_core::optical::kramers_kronig_to_imaginary_axis(&table, z)?;
        let eps_text = match format {
            OutputFormat::Table => format::sig(eps, 4),
            OutputFormat::Csv => format::sci(eps),
        };
        writeln!(csv, "{},{}", format::sci(z), eps_text)?;
    }
    Ok(Output::plain(csv))
}
