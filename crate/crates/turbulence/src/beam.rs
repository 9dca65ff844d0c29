use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Result, TurbulenceError};

/// Transmitted Gaussian beam: wavelength and 1/e² waist radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamParams {
    /// Wavelength λ, m.
    pub wavelength: f64,
    /// Initial beam waist ω₀ (1/e² intensity radius), m.
    pub waist: f64,
}

impl BeamParams {
    pub fn new(wavelength: f64, waist: f64) -> Result<Self> {
        if wavelength <= 0.0 {
            return Err(TurbulenceError::InvalidParameter {
                name: "wavelength",
                value: wavelength,
                reason: "must be positive",
            });
        }
        if waist <= 0.0 {
            return Err(TurbulenceError::InvalidParameter {
                name: "waist",
                value: waist,
                reason: "must be positive",
            });
        }
        Ok(Self { wavelength, waist })
    }

    /// Wavenumber k = 2π/λ, 1/m.
    #[inline]
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Rayleigh range z_R = πω₀²/λ, m.
    #[inline]
    pub fn rayleigh_range(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }

    /// Vacuum spot size ω(z) = ω₀ √(1 + (z/z_R)²), m.
    #[inline]
    pub fn spot_size(&self, z: f64) -> f64 {
        let zr = self.rayleigh_range();
        self.waist * (1.0 + (z / zr) * (z / zr)).sqrt()
    }
}

impl Default for BeamParams {
    fn default() -> Self {
        Self {
            wavelength: 1550e-9,
            waist: 0.05,
        }
    }
}

/// Propagation direction through the atmosphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkDirection {
    /// Ground station to satellite: turbulence at the start of the path.
    Uplink,
    /// Satellite to ground station: turbulence at the end of the path.
    Downlink,
}

impl std::fmt::Display for LinkDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinkDirection::Uplink => write!(f, "uplink"),
            LinkDirection::Downlink => write!(f, "downlink"),
        }
    }
}

/// Ground-to-satellite path: zenith height and direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkGeometry {
    /// Zenith height Z of the satellite above the ground station, m.
    pub path_length: f64,
    pub direction: LinkDirection,
}

impl LinkGeometry {
    pub fn new(path_length: f64, direction: LinkDirection) -> Result<Self> {
        if path_length <= 0.0 {
            return Err(TurbulenceError::InvalidParameter {
                name: "path_length",
                value: path_length,
                reason: "must be positive",
            });
        }
        Ok(Self {
            path_length,
            direction,
        })
    }
}

/// Output-plane Gaussian beam parameters at distance Z.
///
/// R(Z) = Z [1 + (πω₀²/λZ)²] is the radius of curvature, ω(Z) the spot
/// size, Θ = 1 + Z/R the curvature parameter and Λ = 2Z/(k ω(Z)²) the
/// receiver Fresnel ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBeamDerived {
    pub radius_of_curvature: f64,
    pub spot_size: f64,
    pub theta: f64,
    pub lambda_fresnel: f64,
}

impl GaussianBeamDerived {
    pub fn at_range(beam: &BeamParams, z: f64) -> Result<Self> {
        if z <= 0.0 {
            return Err(TurbulenceError::InvalidParameter {
                name: "z",
                value: z,
                reason: "beam parameters are defined for z > 0",
            });
        }
        let zr_over_z = beam.rayleigh_range() / z;
        let radius_of_curvature = z * (1.0 + zr_over_z * zr_over_z);
        let spot_size = beam.spot_size(z);
        let theta = 1.0 + z / radius_of_curvature;
        let lambda_fresnel = 2.0 * z / (beam.wavenumber() * spot_size * spot_size);
        Ok(Self {
            radius_of_curvature,
            spot_size,
            theta,
            lambda_fresnel,
        })
    }
}
