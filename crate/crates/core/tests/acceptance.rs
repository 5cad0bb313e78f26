//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported as failing but do not fail
//! the run; any other failure exits non-zero.

use std::path::Path;
use std::time::Instant;

use casimir_core::optical::{drude_imaginary, drude_loss, kramers_kronig_to_imaginary_axis, log_grid};
use casimir_core::reference::ReferenceTable;
use casimir_core::thermo::{
    classical_limit_pressure, entropy_per_area, ideal_pressure_zero_t, mim_zero_temperature_entropy, pressure_from_free_energy,
};
use casimir_core::{
    casimir_pressure, matsubara_frequency, DielectricModel, Execution, GapConfig, NumericsSettings, PermittivityTable, TableAxis,
    ZeroModePolicy,
};

/// Criteria expected to fail, with the reason printed next to the result.
const KNOWN_RED: &[(u32, &str)] = &[(
    3,
    "Drude/classical at 5 um, 300 K is 1.035: the m >= 1 terms still add ~3.5% at aT = 1.5e-3 m K",
)];

const POLICY: ZeroModePolicy = ZeroModePolicy::ModelDefault;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn settings() -> NumericsSettings {
    NumericsSettings::default()
}

fn pressure(model: &DielectricModel, a_nm: f64, t: f64, settings: &NumericsSettings) -> casimir_core::PressureResult {
    let gap = GapConfig::from_nm(a_nm, t).expect("valid gap");
    casimir_pressure(&gap, model, POLICY, settings).expect("pressure")
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference) / reference
}

fn fixture(name: &str) -> ReferenceTable {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    ReferenceTable::from_file(&path).expect("fixture")
}

fn criterion_1() -> Outcome {
    let cases = [(1.0, 8.226e11), (300.0, 2.468e14), (350.0, 2.879e14)];
    let mut worst: f64 = 0.0;
    for (t, expected) in cases {
        let z = matsubara_frequency(1, t).unwrap();
        let rounded: f64 = format!("{z:.3e}").parse().unwrap();
        worst = worst.max(rel(rounded, expected).abs());
    }
    check(worst == 0.0, format!("zeta_1 at 1, 300, 350 K agree to 4 digits (worst rel {worst:.1e})"))
}

fn criterion_2() -> Outcome {
    let model = DielectricModel::IdealMetal;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for a in [500.0, 1000.0] {
        let p = pressure(&model, a, 1.0, &settings()).pressure;
        let r = rel(p, ideal_pressure_zero_t(a * 1e-9));
        worst = worst.max(r.abs());
        parts.push(format!("{a} nm: {:.4} mPa", p * 1e3));
    }
    check(worst < 5e-3, format!("{} (worst rel {worst:.2e}, tol 5e-3)", parts.join(", ")))
}

fn criterion_3() -> Outcome {
    let s = settings();
    let drude = pressure(&DielectricModel::gold_drude(), 5000.0, 300.0, &s).pressure;
    let ideal = pressure(&DielectricModel::IdealMetal, 5000.0, 300.0, &s).pressure;
    let drude_ratio = drude / classical_limit_pressure(5e-6, 300.0, ZeroModePolicy::ForceTmOnly);
    let ideal_ratio = ideal / classical_limit_pressure(5e-6, 300.0, ZeroModePolicy::ForceTmAndTe);
    let half = drude / ideal;
    let pass = (drude_ratio - 1.0).abs() < 0.02 && (ideal_ratio - 1.0).abs() < 0.02 && (half / 0.5 - 1.0).abs() < 0.02;
    check(
        pass,
        format!("Drude/classical {drude_ratio:.4}, ideal/classical {ideal_ratio:.4}, Drude/ideal {half:.4} (tol 2%)"),
    )
}

fn criterion_4() -> Outcome {
    let model = DielectricModel::gold_drude();
    let s = settings();
    let mut worst_p: f64 = 0.0;
    let mut worst_n: f64 = 0.0;
    let mut exact = true;
    for (file, t) in [("table2.csv", 1.0), ("table3.csv", 300.0), ("table4.csv", 350.0)] {
        let table = fixture(file);
        let p_col = table.column_index("pressure_mPa").unwrap();
        let n_col = table.column_index("n_terms").unwrap();
        for row in &table.rows {
            let r = pressure(&model, row.separation_nm, t, &s);
            worst_p = worst_p.max(rel(r.pressure.abs() * 1e3, row.values[p_col]).abs());
            worst_n = worst_n.max(rel(r.n_terms as f64, row.values[n_col]).abs());
            exact &= r.highest_frequency == matsubara_frequency(r.n_terms, t).unwrap();
        }
    }
    check(
        worst_p < 0.05 && worst_n <= 0.20 && exact,
        format!("21 pressures worst rel {worst_p:.4} (tol 0.05), term counts worst rel {worst_n:.3} (tol 0.20), highest frequency exact: {exact}"),
    )
}

fn criterion_5() -> Outcome {
    let model = DielectricModel::gold_drude();
    let s = settings();
    let ratio = pressure(&model, 1000.0, 350.0, &s).pressure / pressure(&model, 1000.0, 300.0, &s).pressure;
    check(rel(ratio, 0.9734).abs() < 0.02, format!("P(350 K)/P(300 K) at 1000 nm = {ratio:.5} (target 0.9734, tol 2%)"))
}

fn criterion_6() -> Outcome {
    let model = DielectricModel::gold_drude();
    let s = settings();
    let diff = (pressure(&model, 201.0, 300.0, &s).pressure - pressure(&model, 200.0, 300.0, &s).pressure).abs() * 1e3;
    check((7.0..=13.0).contains(&diff), format!("|P(201 nm) - P(200 nm)| = {diff:.3} mPa (window [7, 13])"))
}

fn criterion_7() -> Outcome {
    let (omega_p, nu) = (1.37e16, 5.32e13);
    let omega = log_grid(1e9, 1e19, 400);
    let points = omega.iter().map(|&w| (w, drude_loss(omega_p, nu, w)));
    let table = PermittivityTable::from_points(TableAxis::RealLoss, points, "analytic Drude").unwrap();
    let mut worst: f64 = 0.0;
    for zeta in log_grid(1e12, 1e16, 41) {
        let eps = kramers_kronig_to_imaginary_axis(&table, zeta).unwrap();
        worst = worst.max(rel(eps, drude_imaginary(omega_p, nu, zeta)).abs());
    }
    check(worst < 1e-3, format!("KK of Drude loss over [1e12, 1e16] rad/s, worst rel {worst:.2e} (tol 1e-3)"))
}

fn criterion_8() -> Outcome {
    let s = settings();
    let drude = DielectricModel::gold_drude();
    let entropy = |model: &DielectricModel, t: f64, dt: f64| {
        entropy_per_area(&GapConfig::from_nm(1000.0, t).unwrap(), model, POLICY, &s, dt).expect("entropy")
    };

    let low: Vec<f64> = [4.0, 2.0, 1.0].iter().map(|&t| entropy(&drude, t, 0.25)).collect();
    let a = low[0].abs() > low[1].abs() && low[1].abs() > low[2].abs();

    let warm: Vec<f64> = [10.0, 50.0, 100.0, 200.0, 300.0].iter().map(|&t| entropy(&drude, t, 1.0)).collect();
    let s_min = warm.iter().copied().fold(f64::INFINITY, f64::min);
    let b = s_min < 0.0;

    let mim = DielectricModel::ModifiedIdealMetal;
    let tail: Vec<f64> = [1.0, 2.0, 4.0].iter().map(|&t| entropy(&mim, t, 0.25)).collect();
    let oracle = mim_zero_temperature_entropy(1e-6);
    let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let spread = (hi - lo) / lo.abs();
    let oracle_err = tail.iter().map(|&x| rel(x, oracle).abs()).fold(0.0, f64::max);
    let c = spread < 0.10 && oracle_err < 0.05;

    let gap = GapConfig::from_nm(1000.0, 300.0).unwrap();
    let from_f = pressure_from_free_energy(&gap, &drude, POLICY, &s, 1e-9).unwrap();
    let direct = casimir_pressure(&gap, &drude, POLICY, &s).unwrap().pressure;
    let d_err = rel(from_f, direct).abs();
    let d = d_err < 5e-3;

    check(
        a && b && c && d,
        format!(
            "(a) S(4,2,1 K) = {:.3e}, {:.3e}, {:.3e}: {a}; (b) min S = {s_min:.3e}: {b}; \
             (c) MIM spread {spread:.1e}, vs -k zeta(3)/(16 pi a^2) {oracle_err:.1e}: {c}; (d) -dF/da vs P {d_err:.1e}: {d}",
            low[0], low[1], low[2]
        ),
    )
}

fn criterion_9() -> Outcome {
    let model = DielectricModel::gold_drude();
    let table = fixture("table3.csv");
    let base = settings();
    let variants = [
        ("sum_tol/2", NumericsSettings { sum_tol: base.sum_tol / 2.0, ..base }),
        ("integral_tol/2", NumericsSettings { integral_tol: base.integral_tol / 2.0, ..base }),
        ("y_max 40", NumericsSettings { y_max: 40.0, ..base }),
    ];
    let mut worst: f64 = 0.0;
    let mut worst_label = "";
    let mut bitwise = true;
    let sequential = NumericsSettings { execution: Execution::Sequential, ..base };
    let pools: Vec<rayon::ThreadPool> = [1, 4].iter().map(|&n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()).collect();
    for row in &table.rows {
        let reference = pressure(&model, row.separation_nm, 300.0, &base).pressure;
        for (label, s) in &variants {
            let r = rel(pressure(&model, row.separation_nm, 300.0, s).pressure, reference).abs();
            if r > worst {
                worst = r;
                worst_label = label;
            }
        }
        bitwise &= pressure(&model, row.separation_nm, 300.0, &sequential).pressure.to_bits() == reference.to_bits();
        for pool in &pools {
            let p = pool.install(|| pressure(&model, row.separation_nm, 300.0, &base).pressure);
            bitwise &= p.to_bits() == reference.to_bits();
        }
    }
    check(
        worst < 1e-6 && bitwise,
        format!("worst rel change {worst:.1e} ({worst_label}, tol 1e-6); bitwise identical across 1/4 threads and sequential: {bitwise}"),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        let known = KNOWN_RED.iter().find(|(k, _)| *k == id);
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status} [{elapsed:.1} s] {}", outcome.detail);
        match (outcome.pass, known) {
            (true, _) => passed += 1,
            (false, Some((_, why))) => println!("    known failure: {why}"),
            (false, None) => unexpected.push(id),
        }
    }
    println!("{passed}/{} criteria pass", criteria.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
