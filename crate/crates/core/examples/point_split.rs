//! Point-split density and charge: the contour part plus `eta/pi` inside the well.

use vacuum_charge::capri::{
    capri_charge_integral, capri_density, delta_rho, total_charge_point_split, QuadratureConfig,
};
use vacuum_charge::validate_well;

fn main() -> vacuum_charge::Result<()> {
    let well = validate_well(1.0, 1.0, 0.5)?;
    let quad = QuadratureConfig::default();
    for z in [0.0, 0.2, 0.4] {
        let regular = capri_density(&well, z, &quad)?;
        let extra = delta_rho(&well, z)?;
        println!(
            "z = {z}: regular {regular:+.6}, extra {extra:+.6}, total {:+.6}",
            regular + extra
        );
    }
    let q = capri_charge_integral(&well, &quad)?;
    let q_split = total_charge_point_split(&well, &quad)?;
    println!("Q  = {:+.6}", q.value);
    println!("Q' = {:+.6}  (shift {:.6})", q_split.value, well.point_split_shift());
    Ok(())
}
