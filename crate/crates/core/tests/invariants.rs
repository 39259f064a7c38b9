use vacuum_charge::capri::{
    capri_charge_detailed, capri_charge_integral, capri_density_detailed, total_charge_point_split, QuadratureConfig,
};
use vacuum_charge::casimir::{casimir_energy_adiabatic, RampSpec};
use vacuum_charge::mode_sum::{total_charge_mode_sum, RegulatorConfig};
use vacuum_charge::quadrature::GaussLegendre;
use vacuum_charge::report::TABLE_1;
use vacuum_charge::spectrum::{bound_state_energies, bound_state_energies_with};
use vacuum_charge::{validate_well, ChargeMethod, WellParameters};

fn table_wells() -> Vec<WellParameters> {
    TABLE_1
        .iter()
        .map(|r| validate_well(1.0, r.a, r.eta).unwrap())
        .collect()
}

#[test]
fn density_integrates_to_contour_charge() {
    let quad = QuadratureConfig::default();
    let rule = GaussLegendre::new(48);
    for well in table_wells() {
        let h = well.half_width();
        let mut integral = 0.0;
        let mut density_error = 0.0;
        for (z, w) in rule.mapped(-h, h) {
            let d = capri_density_detailed(&well, z, &quad).unwrap();
            integral += w * d.value;
            density_error += w * d.error_estimate;
        }
        let q = capri_charge_detailed(&well, &quad).unwrap();
        let diff = (integral - q.value).abs();
        assert!(
            diff <= 2.0 * (density_error + q.error_estimate),
            "a = {}, eta = {}: {diff:e}",
            well.a(),
            well.eta()
        );
    }
}

#[test]
fn mode_sum_matches_contour_on_every_row() {
    let quad = QuadratureConfig::default();
    let reg = RegulatorConfig::default();
    for well in table_wells() {
        let ms = total_charge_mode_sum(&well, &reg).unwrap();
        let c = capri_charge_integral(&well, &quad).unwrap();
        assert!(ms.value < 0.0);
        assert!((ms.value - c.value).abs() <= ms.error_estimate, "{well:?}");
        assert!(ms.error_estimate <= 0.01);
    }
}

#[test]
fn mode_sum_error_estimate_shrinks_under_doubling() {
    let well = validate_well(1.0, 1.0, 0.5).unwrap();
    let reg = RegulatorConfig::default();
    let coarse = total_charge_mode_sum(&well, &reg).unwrap();
    let fine = total_charge_mode_sum(&well, &reg.doubled()).unwrap();
    assert!(fine.error_estimate * 2.0 <= coarse.error_estimate);
}

#[test]
fn mode_sum_published_examples() {
    let reg = RegulatorConfig::default();
    for (a, eta, published, tol) in [
        (1.0, 0.1, -0.021, 0.01),
        (5.0, 0.5, -0.733, 0.02),
        (10.0, 1.0, -3.05, 0.05),
    ] {
        let q = total_charge_mode_sum(&validate_well(1.0, a, eta).unwrap(), &reg).unwrap();
        assert!((q.value - published).abs() < tol);
    }
}

#[test]
fn contour_converges_under_doubling() {
    let quad = QuadratureConfig::default();
    for well in table_wells() {
        let base = capri_charge_integral(&well, &quad).unwrap().value;
        let doubled = capri_charge_integral(&well, &quad.doubled()).unwrap().value;
        assert!((base - doubled).abs() < quad.tol);
    }
}

#[test]
fn point_splitting_flips_the_sign() {
    let quad = QuadratureConfig::default();
    for well in table_wells() {
        assert!(capri_charge_integral(&well, &quad).unwrap().value < 0.0);
        assert!(total_charge_point_split(&well, &quad).unwrap().value > 0.0);
    }
}

#[test]
fn ramp_converges_and_is_monotone() {
    let quad = QuadratureConfig::default();
    let reg = RegulatorConfig::default();
    for well in table_wells() {
        let template = well.with_eta(0.0).unwrap();
        for method in [ChargeMethod::PointSplitContour, ChargeMethod::PointSplitComposite] {
            let ramp = RampSpec::new(well.eta(), method);
            let base = casimir_energy_adiabatic(&template, &ramp, &quad, &reg).unwrap();
            let fine = casimir_energy_adiabatic(&template, &ramp.with_steps(2 * ramp.n_steps), &quad, &reg).unwrap();
            assert!((base.casimir_energy - fine.casimir_energy).abs() < 1e-3);
            assert!(base.is_monotone());
            assert!(base.sign_theorem_holds());
        }
    }
}

#[test]
fn bound_states_insensitive_to_scan_resolution() {
    for well in table_wells() {
        let default = bound_state_energies(&well).unwrap().energies();
        let dense = bound_state_energies_with(&well, 1 << 16).unwrap().energies();
        assert_eq!(default.len(), dense.len());
        for (x, y) in default.iter().zip(&dense) {
            assert!((x - y).abs() < 1e-11);
        }
    }
}
