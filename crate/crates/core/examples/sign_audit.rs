//! Checks each charge definition against the requirement that a minimum-energy
//! vacuum carries positive charge in an attractive well.

use vacuum_charge::capri::QuadratureConfig;
use vacuum_charge::casimir::sign_consistency_audit;
use vacuum_charge::mode_sum::RegulatorConfig;
use vacuum_charge::report::{charge_reports, MethodSelection};
use vacuum_charge::validate_well;

fn main() -> vacuum_charge::Result<()> {
    let quad = QuadratureConfig::default();
    let reg = RegulatorConfig::default();
    for eta in [0.0, 1.0] {
        let well = validate_well(1.0, 1.0, eta)?;
        let reports = charge_reports(&well, MethodSelection::All, &quad, &reg)?;
        let audit = sign_consistency_audit(&well, &reports, &[]);
        println!(
            "eta = {eta}: free field null = {}, contradiction = {}",
            audit.free_field_null, audit.contradiction
        );
        for v in &audit.methods {
            println!(
                "    {:<12} Q = {:+.6}  {:?}, casimir {}",
                v.method.label(),
                v.charge,
                v.verdict,
                v.casimir_sign.label()
            );
        }
    }
    Ok(())
}
