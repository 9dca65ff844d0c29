use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error(transparent)]
    Fock(#[from] entsat_fock::FockError),
    #[error(transparent)]
    Gaussian(#[from] entsat_gaussian::GaussianError),
    #[error("optimisation failed: {0}")]
    Optimize(String),
}

/// Network configuration: where the resource is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Configuration {
    /// Resource generated at Alice; one arm crosses both channels via the
    /// middle node.
    Relay,
    /// Resource generated at the middle node; one arm to each station.
    Distribution,
}

/// Entangled resource shared by the stations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Resource {
    /// Single-rail √ξ|0,1⟩ + √(1-ξ)|1,0⟩.
    Dv { xi: f64 },
    /// Two-mode squeezed vacuum with χ = tanh r, truncated at `cutoff`
    /// photons per mode.
    Cv { chi: f64, cutoff: usize },
}

impl Resource {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        match *self {
            Resource::Dv { xi } => {
                if !(0.0..=1.0).contains(&xi) {
                    return Err(ProtocolError::OutOfRange {
                        name: "xi",
                        value: xi,
                        range: "[0, 1]",
                    });
                }
            }
            Resource::Cv { chi, cutoff } => {
                if !(0.0..1.0).contains(&chi) {
                    return Err(ProtocolError::OutOfRange {
                        name: "chi",
                        value: chi,
                        range: "[0, 1)",
                    });
                }
                if cutoff == 0 {
                    return Err(ProtocolError::OutOfRange {
                        name: "cutoff",
                        value: 0.0,
                        range: "[1, ..)",
                    });
                }
            }
        }
        Ok(())
    }

    /// Maximum photon number per resource arm.
    pub fn arm_photons(&self) -> usize {
        match *self {
            Resource::Dv { .. } => 1,
            Resource::Cv { cutoff, .. } => cutoff,
        }
    }

    /// ξ or χ, whichever parameterises this resource.
    pub fn parameter(&self) -> f64 {
        match *self {
            Resource::Dv { xi } => xi,
            Resource::Cv { chi, .. } => chi,
        }
    }

    pub fn with_parameter(&self, p: f64) -> Resource {
        match *self {
            Resource::Dv { .. } => Resource::Dv { xi: p },
            Resource::Cv { cutoff, .. } => Resource::Cv { chi: p, cutoff },
        }
    }
}

fn check_eta(name: &'static str, eta: f64) -> Result<(), ProtocolError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(ProtocolError::OutOfRange {
            name,
            value: eta,
            range: "[0, 1]",
        });
    }
    Ok(())
}

pub(crate) fn check_etas(eta_a: f64, eta_b: f64) -> Result<(), ProtocolError> {
    check_eta("eta_a", eta_a)?;
    check_eta("eta_b", eta_b)
}

/// Outcome of one protocol evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    /// Success probability of the heralded measurement (1 when unamplified).
    pub success_probability: f64,
    /// Forward coherent information S(B) - S(AB), nats.
    pub i_fwd: f64,
    /// Reverse coherent information S(A) - S(AB), nats.
    pub i_rev: f64,
    /// R = p · max(I→, I←, 0), e-bits per attempt.
    pub rate: f64,
    /// Resource parameter (ξ or χ) used.
    pub resource_param: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain_b: Option<f64>,
    /// Set when an optimiser lands in a region flagged as unreliable
    /// (e.g. χ beyond the truncation guard band).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl RateResult {
    pub(crate) fn new(p: f64, i_fwd: f64, i_rev: f64, resource_param: f64) -> Self {
        Self {
            success_probability: p,
            i_fwd,
            i_rev,
            rate: p * i_fwd.max(i_rev).max(0.0),
            resource_param,
            gain_a: None,
            gain_b: None,
            warning: None,
        }
    }
}
