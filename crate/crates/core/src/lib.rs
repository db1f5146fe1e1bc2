//! Simulation library for a single NV spin weakly coupled to a driven cavity
//! electromechanical system.
//!
//! The pipeline goes from classical driven mean fields, through the normal-mode
//! (polariton) decomposition of the linearized cavity–mechanics Hamiltonian near
//! its critical point, to open-system Lindblad dynamics of the spin–polariton
//! system and the dispersive spin–spin (iSWAP) gate study.
//!
//! All frequencies, couplings, and rates are angular (rad/s) unless a function
//! says otherwise. Composite Hilbert spaces use Kronecker ordering with slot 0
//! as the slowest-varying index; qubits use the basis (|e⟩, |g⟩) with
//! σz|e⟩ = +|e⟩.

pub mod constants;
pub mod dispersive;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod meanfield;
pub mod operator;
pub mod polariton;
pub mod space;
pub mod state;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use operator::Operator;
pub use space::HilbertSpace;
pub use state::{DensityMatrix, Ket};
