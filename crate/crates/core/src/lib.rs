//! Dense finite-dimensional operator toolkit for dressed spin–boson models:
//! the Dirac oscillator, the Jaynes–Cummings model and a 2D angular lattice.

pub mod algebra;
pub mod blocks;
pub mod defect;
pub mod dirac;
pub mod dirac2d;
pub mod dressing;
pub mod error;
pub mod fock;
pub mod guard;
pub mod jc;
pub mod operator;
pub mod pauli;
pub mod space;
pub mod spectral;
pub mod spectrum;
pub mod states;
pub mod suite;

pub use error::{OpError, Result};
pub use operator::{commutator, dress, Operator};
pub use space::{AngularLattice, CompositeSpace, FockSpace, ModeSpace, Space, Spin};
