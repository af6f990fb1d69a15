//! Chip resource virtualization: chip records, lattice view, substructure
//! mining, virtual devices and their database.

pub mod db;
pub mod qpu;
pub mod stdqpu;
pub mod substructure;
pub mod vqpu;

pub use db::{load_db, load_or_empty, register_chip, save_db, ChipRecord, DbError, ResourceDb, SharedDb, VqpuLibrary};
pub use qpu::{ChipError, Qpu};
pub use stdqpu::{build_stdqpu, StdQpu};
pub use substructure::{find_substructures, MiningConfig, Strategy, SubQpu};
pub use vqpu::{build_vqpus, Vqpu};
