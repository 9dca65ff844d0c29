use serde::{Deserialize, Serialize};

use crate::{Result, TurbulenceError};

/// Hufnagel-Valley 5/7 turbulence profile plus link zenith geometry.
///
/// `v` is the high-altitude rms wind pseudospeed (m/s) and `a_surface` the
/// ground-level structure parameter A (m^(-2/3)). The canonical 5/7 values
/// (r0 = 5 cm, θ0 = 7 µrad at 0.5 µm) correspond to v = 27, A = 1.7e-14.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurbulenceProfile {
    /// Wind pseudospeed v, m/s.
    pub v: f64,
    /// Surface structure parameter A, m^(-2/3).
    pub a_surface: f64,
    /// Zenith angle θ of the propagation path, radians. Valid for θ < 1 rad.
    pub zenith_angle: f64,
    /// Ground-station altitude above sea level, m.
    pub ground_altitude: f64,
}

impl Default for TurbulenceProfile {
    fn default() -> Self {
        Self {
            v: 27.0,
            a_surface: 1.7e-14,
            zenith_angle: 0.0,
            ground_altitude: 0.0,
        }
    }
}

impl TurbulenceProfile {
    pub fn new(v: f64, a_surface: f64, zenith_angle: f64) -> Result<Self> {
        if v <= 0.0 {
            return Err(TurbulenceError::InvalidParameter {
                name: "v",
                value: v,
                reason: "wind pseudospeed must be positive",
            });
        }
        if a_surface < 0.0 {
            return Err(TurbulenceError::InvalidParameter {
                name: "a_surface",
                value: a_surface,
                reason: "surface structure parameter must be nonnegative",
            });
        }
        if !(0.0..1.0).contains(&zenith_angle) {
            return Err(TurbulenceError::InvalidParameter {
                name: "zenith_angle",
                value: zenith_angle,
                reason: "airmass scaling is only valid for 0 <= θ < 1 rad",
            });
        }
        Ok(Self {
            v,
            a_surface,
            zenith_angle,
            ground_altitude: 0.0,
        })
    }

    /// Hufnagel-Valley 5/7 structure parameter Cn²(h), m^(-2/3).
    ///
    /// Cn²(h) = 5.94e-53 (v/27)² h¹⁰ e^(-h/1000)
    ///        + 2.7e-16 e^(-h/1500) + A e^(-h/100)
    ///
    /// with h the altitude in meters. The wind term uses the canonical
    /// normalisation against a 27 m/s rms upper-atmosphere wind.
    pub fn cn2(&self, h: f64) -> Result<f64> {
        if h < 0.0 {
            return Err(TurbulenceError::NegativeAltitude(h));
        }
        Ok(self.cn2_unchecked(h))
    }

    /// Cn² without the domain check, for use inside quadrature loops.
    #[inline]
    pub fn cn2_unchecked(&self, h: f64) -> f64 {
        let w = self.v / 27.0;
        5.94e-53 * w * w * h.powi(10) * (-h / 1000.0).exp()
            + 2.7e-16 * (-h / 1500.0).exp()
            + self.a_surface * (-h / 100.0).exp()
    }

    /// Airmass factor sec θ applied to path elements on slant paths.
    #[inline]
    pub fn airmass(&self) -> f64 {
        1.0 / self.zenith_angle.cos()
    }
}
