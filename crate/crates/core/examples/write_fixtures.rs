//! Writes the lattice chip and the reference circuit to a directory.
//!
//! `cargo run -p qtrans-core --example write_fixtures -- data`

use qtrans_core::fixtures::{lattice_chip_json, REFERENCE_QASM};

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data".into());
    std::fs::create_dir_all(&dir)?;
    std::fs::write(format!("{dir}/lattice.json"), lattice_chip_json(1))?;
    std::fs::write(format!("{dir}/reference.qasm"), REFERENCE_QASM)?;
    Ok(())
}
