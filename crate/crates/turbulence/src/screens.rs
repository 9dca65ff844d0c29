use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::beam::{BeamParams, GaussianBeamDerived, LinkDirection, LinkGeometry};
use crate::profile::TurbulenceProfile;
use crate::quad::integrate;
use crate::{Result, TurbulenceError};

/// Maximum per-segment contribution to the cumulative scintillation index.
pub const DEFAULT_RYTOV_BUDGET: f64 = 0.2;

/// Altitude above which the profile carries no significant turbulence;
/// the remaining path is covered by a single final segment.
pub const DEFAULT_CUTOVER_ALTITUDE: f64 = 20_000.0;

/// Absolute quadrature tolerance for Cn² integrals (values ~1e-13..1e-11).
const QUAD_TOL: f64 = 1e-18;

/// Fried parameter above which a segment is treated as turbulence-free.
const R0_IDENTITY: f64 = f64::INFINITY;

/// Coulman-Vernin inner/outer scales and the matching modified von Kármán
/// angular frequencies at a given altitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdParams {
    /// High-frequency (inner-scale) cutoff κ_m = 5.92/ℓ₀, 1/m.
    pub kappa_m: f64,
    /// Low-frequency (outer-scale) cutoff κ₀ = 2π/L₀, 1/m.
    pub kappa_0: f64,
    /// Outer scale L₀, m.
    pub outer_scale: f64,
    /// Inner scale ℓ₀, m.
    pub inner_scale: f64,
}

/// Coulman-Vernin scales at altitude `h` (m):
/// L₀ = 25e6 / (6.25e6 + (h - 8500)²), ℓ₀ = 0.005 L₀.
pub fn psd_params(h: f64) -> Result<PsdParams> {
    if h < 0.0 {
        return Err(TurbulenceError::NegativeAltitude(h));
    }
    let d = h - 8500.0;
    let outer_scale = 25e6 / (6.25e6 + d * d);
    let inner_scale = 0.005 * outer_scale;
    Ok(PsdParams {
        kappa_m: 5.92 / inner_scale,
        kappa_0: 2.0 * PI / outer_scale,
        outer_scale,
        inner_scale,
    })
}

/// One atmospheric slice and the phase screen summarising it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Lower altitude bound, m.
    pub h_lo: f64,
    /// Upper altitude bound, m.
    pub h_hi: f64,
    /// Screen altitude (segment midpoint), m.
    pub screen_altitude: f64,
    /// Fried parameter of the slice for the planned direction, m.
    /// `f64::INFINITY` marks a turbulence-free slice (identity screen).
    pub r0: f64,
    /// Spectral parameters evaluated at the screen altitude.
    pub psd: PsdParams,
}

impl Segment {
    #[inline]
    pub fn width(&self) -> f64 {
        self.h_hi - self.h_lo
    }

    /// True when the slice needs no phase screen.
    #[inline]
    pub fn is_identity(&self) -> bool {
        !self.r0.is_finite()
    }
}

/// Ordered phase-screen placement along the full path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenPlan {
    /// Altitude boundaries h₀ = 0 < h₁ < … < h_n = Z.
    pub boundaries: Vec<f64>,
    pub segments: Vec<Segment>,
    pub direction: LinkDirection,
    /// Rytov budget the interior segments were sized to.
    pub rytov_budget: f64,
    /// Cutover altitude used for the final segment, m.
    pub cutover_altitude: f64,
}

impl ScreenPlan {
    pub fn screen_count(&self) -> usize {
        self.segments.len()
    }
}

/// Per-segment Rytov contribution
/// r_R² = 1.23 k^(7/6) sec^(17/6)θ ∫ Cn²(h) (h - h_lo)^(11/6) dh.
///
/// The lever arm (h - h_lo) is a slant distance, hence picks up sec θ along
/// with the path element, for sec^(17/6) overall.
fn rytov_contribution(profile: &TurbulenceProfile, k: f64, h_lo: f64, h_hi: f64) -> f64 {
    let sec = profile.airmass();
    let integral = integrate(
        |h| profile.cn2_unchecked(h) * (h - h_lo).powf(11.0 / 6.0),
        h_lo,
        h_hi,
        QUAD_TOL,
    );
    1.23 * k.powf(7.0 / 6.0) * sec.powf(17.0 / 6.0) * integral
}

/// Downlink Fried parameter of a slice:
/// r₀ = [0.423 k² sec θ ∫ Cn² dh]^(-3/5).
///
/// Returns `f64::INFINITY` when the integrated turbulence is negligible
/// (the caller applies an identity screen).
pub fn fried_downlink(
    profile: &TurbulenceProfile,
    beam: &BeamParams,
    h_lo: f64,
    h_hi: f64,
) -> Result<f64> {
    if h_lo >= h_hi {
        return Err(TurbulenceError::EmptySegment(h_lo, h_hi));
    }
    let k = beam.wavenumber();
    let mu0 = integrate(|h| profile.cn2_unchecked(h), h_lo, h_hi, QUAD_TOL);
    let arg = 0.423 * k * k * profile.airmass() * mu0;
    if arg <= 0.0 {
        return Ok(R0_IDENTITY);
    }
    Ok(arg.powf(-3.0 / 5.0))
}

/// Uplink Fried parameter of a slice:
/// r₀ = [0.424 k² sec θ (μ₁ + 0.622 μ₂ Λ^(11/6))]^(-3/5)
/// with the altitude moments
/// μ₁ = ∫ Cn²(h) [Θ(Z-h)/Z + h/Z]^(5/3) dh,
/// μ₂ = ∫ Cn²(h) (1 - h/Z)^(5/3) dh,
/// weighted by the full-path beam parameters Θ and Λ.
pub fn fried_uplink(
    profile: &TurbulenceProfile,
    beam: &BeamParams,
    geometry: &LinkGeometry,
    h_lo: f64,
    h_hi: f64,
) -> Result<f64> {
    if h_lo >= h_hi {
        return Err(TurbulenceError::EmptySegment(h_lo, h_hi));
    }
    let z = geometry.path_length;
    let derived = GaussianBeamDerived::at_range(beam, z)?;
    let theta = derived.theta;
    let lam = derived.lambda_fresnel;
    let k = beam.wavenumber();
    let mu1 = integrate(
        |h| {
            let w = theta * (z - h) / z + h / z;
            profile.cn2_unchecked(h) * w.powf(5.0 / 3.0)
        },
        h_lo,
        h_hi.min(z),
        QUAD_TOL,
    );
    let mu2 = integrate(
        |h| profile.cn2_unchecked(h) * (1.0 - h / z).max(0.0).powf(5.0 / 3.0),
        h_lo,
        h_hi.min(z),
        QUAD_TOL,
    );
    let arg =
        0.424 * k * k * profile.airmass() * (mu1 + 0.622 * mu2 * lam.powf(11.0 / 6.0));
    if arg <= 0.0 {
        return Ok(R0_IDENTITY);
    }
    Ok(arg.powf(-3.0 / 5.0))
}

fn segment_fried(
    profile: &TurbulenceProfile,
    beam: &BeamParams,
    geometry: &LinkGeometry,
    cutover: f64,
    h_lo: f64,
    h_hi: f64,
) -> Result<f64> {
    if h_lo >= cutover {
        return Ok(R0_IDENTITY);
    }
    match geometry.direction {
        LinkDirection::Downlink => fried_downlink(profile, beam, h_lo, h_hi),
        LinkDirection::Uplink => fried_uplink(profile, beam, geometry, h_lo, h_hi),
    }
}

/// Place phase screens by the equal-Rytov rule.
///
/// Boundaries are chosen so each interior segment contributes exactly
/// `rytov_budget` to the cumulative scintillation index; the march stops
/// when the remainder up to the cutover altitude falls below the budget,
/// and a single final segment covers everything from there to Z.
pub fn plan_screens(
    profile: &TurbulenceProfile,
    beam: &BeamParams,
    geometry: &LinkGeometry,
    rytov_budget: f64,
) -> Result<ScreenPlan> {
    plan_screens_with_cutover(profile, beam, geometry, rytov_budget, DEFAULT_CUTOVER_ALTITUDE)
}

pub fn plan_screens_with_cutover(
    profile: &TurbulenceProfile,
    beam: &BeamParams,
    geometry: &LinkGeometry,
    rytov_budget: f64,
    cutover: f64,
) -> Result<ScreenPlan> {
    if rytov_budget <= 0.0 {
        return Err(TurbulenceError::InvalidParameter {
            name: "rytov_budget",
            value: rytov_budget,
            reason: "must be positive",
        });
    }
    let z = geometry.path_length;
    let cutover = cutover.min(z);
    let k = beam.wavenumber();
    const MIN_WIDTH: f64 = 1e-2;

    let mut boundaries = vec![0.0];
    loop {
        let h_lo = *boundaries.last().unwrap();
        if rytov_contribution(profile, k, h_lo, cutover) < rytov_budget {
            break;
        }
        // bisect for the upper bound giving exactly the budget; the
        // contribution is monotone in h_hi
        let mut lo = h_lo + MIN_WIDTH;
        let mut hi = cutover;
        if rytov_contribution(profile, k, h_lo, lo) >= rytov_budget {
            return Err(TurbulenceError::BudgetUnderflow {
                budget: rytov_budget,
                width: MIN_WIDTH,
                altitude: h_lo,
            });
        }
        // bisect on the contribution itself and keep the under-budget side,
        // so an independent recomputation never lands above the budget
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let r2 = rytov_contribution(profile, k, h_lo, mid);
            if r2 < rytov_budget {
                lo = mid;
            } else {
                hi = mid;
            }
            if rytov_budget - rytov_contribution(profile, k, h_lo, lo) < 1e-7 {
                break;
            }
        }
        boundaries.push(lo);
    }
    boundaries.push(z);

    let mut segments = Vec::with_capacity(boundaries.len() - 1);
    for w in boundaries.windows(2) {
        let (h_lo, h_hi) = (w[0], w[1]);
        let r0 = segment_fried(profile, beam, geometry, cutover, h_lo, h_hi)?;
        let screen_altitude = 0.5 * (h_lo + h_hi);
        segments.push(Segment {
            h_lo,
            h_hi,
            screen_altitude,
            r0,
            psd: psd_params(screen_altitude)?,
        });
    }
    Ok(ScreenPlan {
        boundaries,
        segments,
        direction: geometry.direction,
        rytov_budget,
        cutover_altitude: cutover,
    })
}
