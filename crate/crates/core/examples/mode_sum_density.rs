//! Mode-sum vacuum density across a well, its sea/sky/bound pieces and the
//! well charge with its cutoff error estimate.

use vacuum_charge::mode_sum::{total_charge_mode_sum, vacuum_density_profile, RegulatorConfig};
use vacuum_charge::validate_well;

fn main() -> vacuum_charge::Result<()> {
    let well = validate_well(1.0, 1.0, 1.0)?;
    let reg = RegulatorConfig::for_mass(well.m());
    let zs: Vec<f64> = (0..9).map(|i| -0.4 + 0.1 * i as f64).collect();
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "z", "rho", "sea", "sky", "bound", "sea+sky+b"
    );
    for (z, d) in zs.iter().zip(vacuum_density_profile(&well, &zs, &reg)?) {
        println!(
            "{z:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>10.1e}",
            d.value,
            d.sea,
            d.sky,
            d.bound,
            d.symmetry_residual()
        );
    }
    let q = total_charge_mode_sum(&well, &reg)?;
    println!("Q = {:.6} +/- {:.1e}", q.value, q.error_estimate);
    Ok(())
}
