//! Closed-form atmospheric turbulence models for free-space optical links.
//!
//! Provides the Hufnagel-Valley 5/7 refractive-index structure profile,
//! equal-Rytov phase-screen placement along a ground-to-space path, Fried
//! coherence parameters for downlink and uplink propagation, and the
//! Coulman-Vernin inner/outer scales that parameterise the modified
//! von Kármán spectrum used for screen synthesis.
//!
//! Everything here is a pure function of immutable inputs and is safe to
//! call concurrently.

mod beam;
mod error;
mod profile;
pub mod quad;
mod screens;

pub use beam::{BeamParams, GaussianBeamDerived, LinkDirection, LinkGeometry};
pub use error::TurbulenceError;
pub use profile::TurbulenceProfile;
pub use screens::{
    fried_downlink, fried_uplink, plan_screens, psd_params, PsdParams, ScreenPlan, Segment,
    DEFAULT_CUTOVER_ALTITUDE, DEFAULT_RYTOV_BUDGET,
};

pub type Result<T> = std::result::Result<T, TurbulenceError>;
