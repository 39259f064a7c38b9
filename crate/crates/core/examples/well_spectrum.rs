//! Bound states of a few wells and the eigen-residual of sample modes.

use vacuum_charge::spectrum::{bound_state_energies, mode_residual, scattering_mode, Branch, Parity};
use vacuum_charge::validate_well;

fn main() -> vacuum_charge::Result<()> {
    for (a, eta) in [(1.0, 0.5), (5.0, 1.0), (10.0, 1.0)] {
        let well = validate_well(1.0, a, eta)?;
        let set = bound_state_energies(&well)?;
        println!("a = {a:>4}, eta = {eta}: {} bound state(s)", set.len());
        for state in set.states() {
            println!("    E = {:.12}  parity {:?}", state.energy, state.parity);
        }
    }

    let well = validate_well(1.0, 1.0, 1.0)?;
    let zs: Vec<f64> = (0..201).map(|i| -3.0 + 0.03 * i as f64).collect();
    for branch in [Branch::Sky, Branch::Sea] {
        for parity in Parity::BOTH {
            let mode = scattering_mode(&well, 2.0, parity, branch)?;
            println!(
                "{branch:?}/{parity:?} p = 2: E = {:+.6}, residual = {:.2e}",
                mode.energy(),
                mode_residual(&mode, &well, &zs)
            );
        }
    }
    Ok(())
}
