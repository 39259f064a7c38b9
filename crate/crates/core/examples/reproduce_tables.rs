//! Recomputes the published well-charge tables and prints them as CSV.

use vacuum_charge::capri::QuadratureConfig;
use vacuum_charge::report::{reproduce_tables, Format};

fn main() -> vacuum_charge::Result<()> {
    let artifact = reproduce_tables(&QuadratureConfig::default(), Format::Csv)?;
    print!("{}", artifact.text);
    eprintln!("{} row(s) outside tolerance", artifact.failures);
    Ok(())
}
