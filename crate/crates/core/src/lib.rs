//! Exact arithmetic for truncated Witt vectors over small finite fields,
//! lattices in W_s^n, truncated Ore modules, p-linear maps and restricted
//! Lie algebra tables.

pub mod error;
pub mod gf;
pub mod linalg;

pub use error::{Error, Result};
pub use gf::{Fe, Gf};
pub mod ring;
pub mod witt;
pub mod ore;
pub mod lattice;
pub mod oracle;
pub mod plin;
pub mod rla;
