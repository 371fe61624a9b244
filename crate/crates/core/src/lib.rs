//! Long waves in shallow water: the steady solitary and cnoidal solutions,
//! time integration of the Korteweg–de Vries and Boussinesq equations, and
//! the conserved functionals that certify them.

pub mod analytic;
pub mod diff;
pub mod elliptic;
pub mod error;
pub mod evolution;
pub mod invariants;
pub mod model;
pub mod tracking;
pub mod velocity;

pub use error::{Error, Result};
