//! Principal-value quadrature on its own: `P∫ dy/(y − 1)` over `[-2, 2]` is `-ln 3`.

use vacuum_charge::quadrature::{pv_quadrature, PvConfig};

fn main() -> vacuum_charge::Result<()> {
    let cfg = PvConfig::default();
    let est = pv_quadrature(|y: f64| 1.0 / (y - 1.0), -2.0, 2.0, 1.0, &cfg)?;
    println!("P∫ dy/(y-1) = {:.15}", est.value);
    println!("-ln 3       = {:.15}", -(3.0f64).ln());
    println!("spread {:.1e} at delta {:.1e}", est.spread, est.delta);
    for (i, x) in est.extrapolants.iter().enumerate() {
        println!("    level {i}: {x:.15}");
    }
    Ok(())
}
