use approx::assert_relative_eq;
use casimir_core::optical::{drude_imaginary, drude_loss, log_grid};
use casimir_core::thermo::{ideal_pressure_zero_t, sensitivity_dp_da};
use casimir_core::{
    casimir_pressure, free_energy_per_area, DielectricModel, Error, Execution, Extrapolation, GapConfig, NumericsSettings,
    PermittivityTable, TableAxis, ZeroModePolicy,
};

const POLICY: ZeroModePolicy = ZeroModePolicy::ModelDefault;

fn p(model: &DielectricModel, a_nm: f64, t: f64) -> f64 {
    p_with(model, a_nm, t, &NumericsSettings::default())
}

fn p_with(model: &DielectricModel, a_nm: f64, t: f64, s: &NumericsSettings) -> f64 {
    casimir_pressure(&GapConfig::from_nm(a_nm, t).unwrap(), model, POLICY, s).unwrap().pressure
}

#[test]
fn pressure_is_attractive_and_decays_with_separation() {
    let model = DielectricModel::gold_drude();
    let values: Vec<f64> = [160.0, 200.0, 300.0, 500.0, 1000.0, 2000.0].iter().map(|&a| p(&model, a, 300.0)).collect();
    assert!(values.iter().all(|&v| v < 0.0));
    for w in values.windows(2) {
        assert!(w[0].abs() > w[1].abs(), "{w:?}");
    }
    let slope = sensitivity_dp_da(&GapConfig::from_nm(500.0, 300.0).unwrap(), &model, POLICY, &NumericsSettings::default()).unwrap();
    assert!(slope > 0.0);
}

#[test]
fn model_ordering() {
    for a in [200.0, 500.0, 1000.0] {
        let ideal = p(&DielectricModel::IdealMetal, a, 300.0).abs();
        let plasma = p(&DielectricModel::gold_plasma(), a, 300.0).abs();
        let drude = p(&DielectricModel::gold_drude(), a, 300.0).abs();
        assert!(ideal > plasma && plasma > drude, "{a} nm: {ideal} {plasma} {drude}");
        assert!(p(&DielectricModel::ModifiedIdealMetal, a, 300.0).abs() < ideal);
    }
}

#[test]
fn vacuum_has_no_force() {
    let r = casimir_pressure(&GapConfig::from_nm(300.0, 300.0).unwrap(), &DielectricModel::Vacuum, POLICY, &NumericsSettings::default())
        .unwrap();
    assert_eq!(r.pressure, 0.0);
}

#[test]
fn ideal_metal_zero_temperature_limit() {
    for a in [300.0, 700.0] {
        let exact = ideal_pressure_zero_t(a * 1e-9);
        assert_relative_eq!(p(&DielectricModel::IdealMetal, a, 1.0), exact, max_relative = 1e-6);
    }
}

#[test]
fn plasma_is_the_zero_relaxation_limit_except_for_te_zero_mode() {
    let omega_p = 1.37e16;
    let gap = GapConfig::from_nm(500.0, 300.0).unwrap();
    let s = NumericsSettings::default();
    let plasma = DielectricModel::plasma(omega_p).unwrap();
    let drude0 = DielectricModel::drude(omega_p, 0.0).unwrap();

    // With ν = 0 the Drude permittivity equals the plasma one at every ζ > 0,
    // so forcing both zero modes makes the two sums identical.
    let forced = |m: &DielectricModel| casimir_pressure(&gap, m, ZeroModePolicy::ForceTmAndTe, &s).unwrap().pressure;
    assert_eq!(forced(&plasma).to_bits(), forced(&drude0).to_bits());

    // The default treatments differ by exactly the plasma TE zero mode, which
    // stays finite as ν → 0.
    let te_zero = forced(&plasma) - casimir_pressure(&gap, &plasma, ZeroModePolicy::ForceTmOnly, &s).unwrap().pressure;
    assert!(te_zero < 0.0);
    let mismatch = |nu: f64| {
        let drude = DielectricModel::drude(omega_p, nu).unwrap();
        let gap_to_plasma = casimir_pressure(&gap, &plasma, POLICY, &s).unwrap().pressure - casimir_pressure(&gap, &drude, POLICY, &s).unwrap().pressure;
        (gap_to_plasma / te_zero - 1.0).abs()
    };
    let (coarse, fine) = (mismatch(1.37e12), mismatch(1.37e10));
    assert!(fine < coarse && fine < 1e-4, "{coarse} {fine}");
}

#[test]
fn converged_against_numerics_settings() {
    let model = DielectricModel::gold_drude();
    let base = NumericsSettings::default();
    for a in [160.0, 500.0, 1000.0] {
        let reference = p_with(&model, a, 300.0, &base);
        for s in [
            NumericsSettings { y_max: 40.0, ..base },
            NumericsSettings { integral_tol: base.integral_tol / 2.0, ..base },
            NumericsSettings { sum_tol: base.sum_tol / 2.0, ..base },
        ] {
            assert_relative_eq!(p_with(&model, a, 300.0, &s), reference, max_relative = 1e-6);
        }
    }
}

#[test]
fn bitwise_deterministic_across_thread_counts() {
    let model = DielectricModel::gold_drude();
    let base = NumericsSettings::default();
    let sequential = NumericsSettings { execution: Execution::Sequential, ..base };
    for (a, t) in [(200.0, 300.0), (500.0, 1.0)] {
        let reference = p_with(&model, a, t, &sequential).to_bits();
        for threads in [1, 2, 4, 7] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let got = pool.install(|| p_with(&model, a, t, &base));
            assert_eq!(got.to_bits(), reference, "{threads} threads at {a} nm, {t} K");
        }
    }
}

#[test]
fn term_log_sums_to_the_result() {
    let s = NumericsSettings { record_terms: true, ..NumericsSettings::default() };
    let gap = GapConfig::from_nm(400.0, 300.0).unwrap();
    let r = casimir_pressure(&gap, &DielectricModel::gold_drude(), POLICY, &s).unwrap();
    let log = r.per_term_log.unwrap();
    assert_eq!(log.len() as u64, r.n_terms + 1);
    assert!(log.iter().enumerate().all(|(i, t)| t.m == i as u64));
    let scale = -gap.thermal_energy() / (std::f64::consts::PI * gap.separation().powi(3));
    assert_relative_eq!(scale * log.iter().map(|t| t.term).sum::<f64>(), r.pressure, max_relative = 1e-12);
}

#[test]
fn free_energy_is_negative_and_consistent_with_pressure_sign() {
    let s = NumericsSettings::default();
    let model = DielectricModel::gold_drude();
    let f = |a: f64| free_energy_per_area(&GapConfig::from_nm(a, 300.0).unwrap(), &model, POLICY, &s).unwrap();
    assert!(f(500.0) < 0.0);
    // P = −∂F/∂a < 0 means F increases with a.
    assert!(f(501.0) > f(500.0));
}

#[test]
fn inconsistent_settings_are_rejected() {
    let gap = GapConfig::from_nm(500.0, 300.0).unwrap();
    let model = DielectricModel::gold_drude();
    for s in [
        NumericsSettings { sum_tol: 0.0, ..NumericsSettings::default() },
        NumericsSettings { y_max: -1.0, ..NumericsSettings::default() },
        NumericsSettings { consecutive_below: 0, ..NumericsSettings::default() },
    ] {
        assert!(matches!(casimir_pressure(&gap, &model, POLICY, &s), Err(Error::InvalidSettings(_))), "{s:?}");
    }
}

fn drude_imaginary_table(omega_p: f64, nu: f64, lo: f64, hi: f64) -> PermittivityTable {
    let points = log_grid(lo, hi, 300).into_iter().map(|z| (z, drude_imaginary(omega_p, nu, z)));
    PermittivityTable::from_points(TableAxis::Imaginary, points, "analytic Drude on the imaginary axis").unwrap()
}

#[test]
fn tabulated_imaginary_axis_matches_analytic_drude() {
    let (omega_p, nu) = (1.37e16, 5.32e13);
    let table = drude_imaginary_table(omega_p, nu, 1e13, 1e18);
    let tabulated = DielectricModel::tabulated(table, Extrapolation::Error);
    let analytic = DielectricModel::drude(omega_p, nu).unwrap();
    for a in [200.0, 700.0] {
        assert_relative_eq!(p(&tabulated, a, 300.0), p(&analytic, a, 300.0), max_relative = 1e-5);
    }
}

#[test]
fn tabulated_out_of_range_errors_unless_extrapolating() {
    let (omega_p, nu) = (1.37e16, 5.32e13);
    // Every Matsubara frequency at 300 K lies above the lower edge; the
    // upper edge cuts the sum where ε − 1 already falls off as 1/ζ².
    let narrow = drude_imaginary_table(omega_p, nu, 1e14, 3e15);
    let strict = DielectricModel::tabulated(narrow.clone(), Extrapolation::Error);
    let gap = GapConfig::from_nm(500.0, 300.0).unwrap();
    let err = casimir_pressure(&gap, &strict, POLICY, &NumericsSettings::default()).unwrap_err();
    assert!(matches!(err, Error::OutOfRange { .. }), "{err:?}");

    let extended = DielectricModel::tabulated(narrow, Extrapolation::Drude);
    let analytic = DielectricModel::drude(omega_p, nu).unwrap();
    assert_relative_eq!(p(&extended, 500.0, 300.0), p(&analytic, 500.0, 300.0), max_relative = 1e-3);
}

#[test]
fn tabulated_loss_data_goes_through_kramers_kronig() {
    let (omega_p, nu) = (1.37e16, 5.32e13);
    let points = log_grid(1e9, 1e19, 400).into_iter().map(|w| (w, drude_loss(omega_p, nu, w)));
    let table = PermittivityTable::from_points(TableAxis::RealLoss, points, "analytic Drude loss").unwrap();
    let tabulated = DielectricModel::tabulated(table, Extrapolation::Error);
    let analytic = DielectricModel::drude(omega_p, nu).unwrap();
    assert_relative_eq!(p(&tabulated, 300.0, 300.0), p(&analytic, 300.0, 300.0), max_relative = 1e-3);
}
