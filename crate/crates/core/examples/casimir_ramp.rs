//! Energy change while the depth is ramped from zero, under both charge
//! definitions.

use vacuum_charge::capri::QuadratureConfig;
use vacuum_charge::casimir::{casimir_energy_adiabatic, RampSpec};
use vacuum_charge::mode_sum::RegulatorConfig;
use vacuum_charge::{validate_well, ChargeMethod};

fn main() -> vacuum_charge::Result<()> {
    let template = validate_well(1.0, 1.0, 0.0)?;
    let quad = QuadratureConfig::default();
    let reg = RegulatorConfig::default();
    for method in [ChargeMethod::PointSplitContour, ChargeMethod::PointSplitComposite] {
        let ramp = RampSpec::new(1.0, method).with_steps(16);
        let trace = casimir_energy_adiabatic(&template, &ramp, &quad, &reg)?;
        println!(
            "{method}: casimir energy {:+.6} ({})",
            trace.casimir_energy,
            trace.casimir_sign.label()
        );
        for i in (0..trace.eta_grid.len()).step_by(4) {
            println!(
                "    eta {:.3}  Q {:+.6}  xi - xi0 {:+.6}",
                trace.eta_grid[i], trace.charges[i], trace.energy_delta[i]
            );
        }
    }

    // the mode sum is slower; a short ramp is enough to see the sign
    let ramp = RampSpec::new(1.0, ChargeMethod::ModeSum).with_steps(4);
    let trace = casimir_energy_adiabatic(&template, &ramp, &quad, &reg)?;
    println!("mode-sum: casimir energy {:+.6}", trace.casimir_energy);
    Ok(())
}
