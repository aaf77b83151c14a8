//! Pump-profile validity layer: the extended phase mismatch carrying pump
//! bandwidth and transverse wavevector terms, and the predicate deciding
//! when a finite-diameter pump may still be treated as a planewave.

use serde::Serialize;

use crate::crystal::{delta_mismatch, DispersionParams};
use crate::error::{Error, Result};
use crate::units::C_MM_FS;

/// Extended mismatch with pump spectral offset `nu_p` (rad/fs) and pump
/// transverse wavevector `q_p` (1/mm):
///
/// Delta = -D nu + D+ nu_p + (c/omega_p0)(2|q|^2 + |q_p|^2)
///         + M e2.q + (M_p - M/2) e2.q_p
///
/// Reduces bit-for-bit to [`delta_mismatch`] at nu_p = 0, q_p = 0 (shared
/// code path).
pub fn delta_with_pump(
    nu: f64,
    nu_p: f64,
    q: [f64; 2],
    q_p: [f64; 2],
    params: &DispersionParams,
) -> f64 {
    let base = delta_mismatch(nu, q, params);
    if nu_p == 0.0 && q_p == [0.0, 0.0] {
        return base;
    }
    let qp2 = q_p[0] * q_p[0] + q_p[1] * q_p[1];
    base + params.d_plus * nu_p
        + C_MM_FS * qp2 / params.omega_p0
        + (params.m_p - params.m / 2.0) * q_p[1]
}

/// Verdict of the planewave-pump approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanewaveVerdict {
    /// |M_p - M/2| L / a.
    pub ratio: f64,
    /// Threshold the ratio is compared against.
    pub threshold: f64,
    pub valid: bool,
    /// Informational diffraction floor on the pump diameter (mm); quoted
    /// from the literature for this class of geometry, not enforced here.
    pub diffraction_limit_mm: f64,
}

/// Default threshold standing in for "much less than one". The 70-um
/// breakdown diameter of a 1.5-mm crystal corresponds to a ratio near 0.9,
/// so 0.1 leaves an order of magnitude.
pub const DEFAULT_PLANEWAVE_THRESHOLD: f64 = 0.1;

/// Diffraction-based lower bound on useful pump diameters (mm), reported
/// alongside the walk-off verdict as metadata.
pub const DIFFRACTION_LIMIT_MM: f64 = 0.010;

/// Planewave-pump validity: ratio = |M_p - M/2| L / a against `threshold`
/// (`a` is the pump diameter at the crystal, mm).
pub fn planewave_valid_with_threshold(
    pump_diameter_mm: f64,
    l_mm: f64,
    params: &DispersionParams,
    threshold: f64,
) -> Result<PlanewaveVerdict> {
    if !(pump_diameter_mm > 0.0) {
        return Err(Error::InvalidSpec {
            what: "planewave_valid",
            why: format!("pump diameter must be > 0, got {pump_diameter_mm}"),
        });
    }
    let ratio = (params.m_p - params.m / 2.0).abs() * l_mm / pump_diameter_mm;
    Ok(PlanewaveVerdict {
        ratio,
        threshold,
        valid: ratio < threshold,
        diffraction_limit_mm: DIFFRACTION_LIMIT_MM,
    })
}

/// [`planewave_valid_with_threshold`] at the default threshold.
pub fn planewave_valid(
    pump_diameter_mm: f64,
    l_mm: f64,
    params: &DispersionParams,
) -> Result<PlanewaveVerdict> {
    planewave_valid_with_threshold(pump_diameter_mm, l_mm, params, DEFAULT_PLANEWAVE_THRESHOLD)
}
