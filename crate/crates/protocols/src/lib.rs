//! Protocol evaluators for satellite entanglement distribution.
//!
//! Two network configurations are covered: *relay*, where one arm of the
//! resource crosses both channels (with an optional distributed scissor
//! amplifier whose Bell measurement happens at the middle node), and
//! *distribution*, where a central node sends one arm to each station
//! (with optional local scissors at both receivers). Resources are the
//! single-rail DV state √ξ|0,1⟩ + √(1-ξ)|1,0⟩ or a two-mode squeezed
//! vacuum, handled exactly in a truncated Fock basis for the amplified
//! circuits and in the covariance formalism for the unamplified CV case.
//!
//! Every evaluator returns a [`RateResult`] with the success probability,
//! both coherent informations (nats), and the rate R = p · max(I→, I←, 0).

mod amplified;
mod optimized;
mod types;
mod unamplified;

pub use amplified::{dist_amp, relay_amp, scissor_kraus};
pub use optimized::{
    gain_upper_bound, optimized_amp, optimized_dist_amp, optimized_dist_unamp_dv,
    optimized_relay_amp, optimized_relay_unamp_dv, OptimizerSettings, CHI_GUARD,
};
pub use types::{Configuration, ProtocolError, RateResult, Resource};
pub use unamplified::{dist_unamp_cv, dist_unamp_dv, relay_unamp_cv, relay_unamp_dv};

pub type Result<T> = std::result::Result<T, ProtocolError>;
