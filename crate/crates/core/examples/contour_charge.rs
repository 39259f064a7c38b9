//! Well charge from the principal-value contour integral, with its
//! extrapolation diagnostics.

use vacuum_charge::capri::{capri_charge_detailed, QuadratureConfig};
use vacuum_charge::validate_well;

fn main() -> vacuum_charge::Result<()> {
    let quad = QuadratureConfig::default();
    println!(
        "{:>4} {:>5} {:>12} {:>10} {:>10} {:>10}",
        "a", "eta", "Q", "spread", "tail", "imag"
    );
    for a in [1.0, 5.0, 10.0] {
        for eta in [0.1, 0.5, 1.0] {
            let well = validate_well(1.0, a, eta)?;
            let r = capri_charge_detailed(&well, &quad)?;
            println!(
                "{a:>4} {eta:>5} {:>12.7} {:>10.1e} {:>10.1e} {:>10.1e}",
                r.value, r.spread, r.tail, r.imag_residue
            );
        }
    }
    Ok(())
}
