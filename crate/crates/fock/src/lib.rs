//! Exact multimode quantum-optics engine over a truncated Fock basis.
//!
//! Per-mode photon cutoffs are heterogeneous: each mode carries its own
//! dimension, sized so every beamsplitter in a circuit is exactly unitary
//! on the populated photon-number blocks. Operations refuse to silently
//! truncate: applying a beamsplitter to a pair of modes whose populated
//! total photon number exceeds either cutoff is an error, never a lossy
//! approximation.
//!
//! States are immutable values; operations return new states, so circuits
//! can be evaluated concurrently without shared mutable state. Entropies
//! are natural-log (nats).

mod entropy;
mod error;
mod measure;
mod ops;
mod space;
mod state;

pub use entropy::{coherent_info, entropy};
pub use error::FockError;
pub use measure::{all_patterns, herald, povm_project, povm_project_density, HeraldBranch};
pub use ops::{
    apply_beamsplitter, apply_beamsplitter_density, apply_mode_phase, apply_parity,
    partial_trace_density, partial_trace_pure, pure_loss, pure_loss_density,
};
pub use space::FockSpace;
pub use state::{
    dv_bell, gain_to_tau, scissor_ancilla, tau_to_gain, tmsv_truncated, DensityOp, PureState,
};

pub type Result<T> = std::result::Result<T, FockError>;

/// Complex amplitude type used throughout the engine.
pub type C64 = num_complex::Complex64;
