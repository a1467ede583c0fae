pub mod cli;
pub mod config;
pub mod drivers;
pub mod dsii;
pub mod error;
pub mod estimates;
pub mod field;
pub mod forward;
pub mod grid;
pub mod inverse;
pub mod io;
pub mod neumann;
pub mod potential;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use field::{lp_norm, MatrixField, OffDiagPotential, ScalarField, Symmetry};
pub use grid::GridSpec;
pub use potential::{make_potential, PotentialKind};
