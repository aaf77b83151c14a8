//! Dispersion-prism analysis: the exact Snell wavevector mapping through a
//! prism aligned at minimum deviation, its angular dispersion parameter
//! beta, and the predicate deciding when the prism can be left out of the
//! system transfer function.
//!
//! A prism at minimum deviation maps each transverse mode (q, omega) to
//! (q', omega) with the e1 components related implicitly by
//! S(q, q') + S(q', q) = n^2(omega) sin(alpha) and the e2 component passed
//! through unchanged. Small input deviations exit with the opposite sign
//! and an omega-dependent offset governed by beta.

use serde::{Deserialize, Serialize};

use crate::crystal::sellmeier;
use crate::error::{Error, Result};
use crate::units::{omega_from_nm, C_MM_FS};

/// Prism glasses with shipped dispersion data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrismMaterial {
    FusedSilica,
}

impl PrismMaterial {
    fn key(self) -> &'static str {
        match self {
            PrismMaterial::FusedSilica => "fused_silica",
        }
    }
}

/// Prism aligned at minimum deviation for a chosen center wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrismSpec {
    pub material: PrismMaterial,
    /// Apex angle alpha, rad.
    pub apex_angle_rad: f64,
    /// Incidence (= exit) angle at minimum deviation, rad.
    pub min_deviation_angle_rad: f64,
    /// Center wavelength the alignment refers to, nm.
    pub center_wavelength_nm: f64,
}

impl PrismSpec {
    /// Construct a prism aligned at minimum deviation for `lambda_nm`:
    /// sin(phi0) = n(lambda) sin(alpha/2).
    pub fn at_minimum_deviation(
        material: PrismMaterial,
        apex_angle_rad: f64,
        lambda_nm: f64,
    ) -> Result<Self> {
        if !(apex_angle_rad > 0.0 && apex_angle_rad < std::f64::consts::PI) {
            return Err(Error::InvalidSpec {
                what: "PrismSpec",
                why: format!("apex angle must lie in (0, pi), got {apex_angle_rad}"),
            });
        }
        let n = sellmeier::index_checked(material.key(), omega_from_nm(lambda_nm))?;
        let s = n * (apex_angle_rad / 2.0).sin();
        if s >= 1.0 {
            return Err(Error::InvalidSpec {
                what: "PrismSpec",
                why: format!(
                    "no minimum-deviation alignment: n sin(alpha/2) = {s:.4} >= 1 (total internal reflection)"
                ),
            });
        }
        Ok(PrismSpec {
            material,
            apex_angle_rad,
            min_deviation_angle_rad: s.asin(),
            center_wavelength_nm: lambda_nm,
        })
    }

    pub fn center_omega(&self) -> f64 {
        omega_from_nm(self.center_wavelength_nm)
    }

    fn index(&self, omega: f64) -> Result<f64> {
        sellmeier::index_checked(self.material.key(), omega)
    }

    fn dindex_domega(&self, omega: f64) -> Result<f64> {
        sellmeier::dindex_domega_checked(self.material.key(), omega)
    }
}

/// The S function of the implicit prism mapping.
fn s_fn(prism: &PrismSpec, q: f64, qp: f64, omega: f64, n: f64) -> f64 {
    let phi0 = prism.min_deviation_angle_rad;
    let c_w = C_MM_FS / omega; // mm
    let (sp, cp) = phi0.sin_cos();
    let first = sp + cp * c_w * q - sp * c_w * c_w * q * q / 2.0;
    let second = n * n
        - sp * sp
        - (2.0 * phi0).sin() * c_w * qp
        - (2.0 * phi0).cos() * c_w * c_w * qp * qp;
    first * second.max(0.0).sqrt()
}

/// Exact Snell mapping of the e1 wavevector component through the prism:
/// solves S(q, q') + S(q', q) = n^2 sin(alpha) for q' by bisection.
///
/// The e2 component is unaffected by the prism and passes through
/// unchanged; callers map `q = [q1, q2]` to `[snell_map(q1), q2]`.
pub fn snell_map(q: f64, omega: f64, prism: &PrismSpec) -> Result<f64> {
    let n = prism.index(omega)?;
    let target = n * n * prism.apex_angle_rad.sin();
    let f = |qp: f64| s_fn(prism, q, qp, omega, n) + s_fn(prism, qp, q, omega, n) - target;

    // bracket around the sign-inverted input, widened by the dispersive
    // displacement beta * d_omega * omega / c
    let beta = beta_dispersion(prism, omega)? * 1.0e15; // fs
    let dw = (omega - prism.center_omega()).abs();
    let width = 4.0 * q.abs() + 4.0 * beta.abs() * dw * omega / C_MM_FS + 1.0e-6;
    let (mut lo, mut hi) = (-q - width, -q + width);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo * fhi > 0.0 {
        return Err(Error::NoBracketedRoot { context: "snell_map", lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1.0e-12 {
            break;
        }
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Angular dispersion parameter of the prism, in seconds:
/// beta = [sin(alpha) / (cos(phi0) cos(alpha/2))] dn/domega.
pub fn beta_dispersion(prism: &PrismSpec, omega: f64) -> Result<f64> {
    let dndw_fs = prism.dindex_domega(omega)?; // fs
    let geo = prism.apex_angle_rad.sin()
        / (prism.min_deviation_angle_rad.cos() * (prism.apex_angle_rad / 2.0).cos());
    Ok(geo * dndw_fs * 1.0e-15) // fs -> s
}

/// Negligibility verdict for the prism: the angular dispersion beta*dOmega
/// against the angular resolution 2 lambda / b of the aperture-lens system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrismVerdict {
    pub negligible: bool,
    /// (beta * bandwidth) / (2 lambda / b); below 1 means negligible.
    pub ratio: f64,
}

/// True when beta * bandwidth < 2 lambda / b for aperture extent `b_mm`,
/// optical bandwidth `bandwidth_rad_fs` and center wavelength
/// `lambda_center_nm`.
pub fn prism_negligible(
    b_mm: f64,
    bandwidth_rad_fs: f64,
    prism: &PrismSpec,
    lambda_center_nm: f64,
) -> Result<PrismVerdict> {
    if !(b_mm > 0.0) {
        return Err(Error::InvalidSpec {
            what: "prism_negligible",
            why: format!("aperture extent must be > 0, got {b_mm}"),
        });
    }
    let omega = omega_from_nm(lambda_center_nm);
    let beta_fs = beta_dispersion(prism, omega)? * 1.0e15;
    let spread = beta_fs * bandwidth_rad_fs; // rad
    let resolution = 2.0 * (lambda_center_nm * 1.0e-6) / b_mm; // rad
    let ratio = spread / resolution;
    Ok(PrismVerdict { negligible: ratio < 1.0, ratio })
}

/// Rows of a (q, q') mapping table at several frequencies, for
/// documentation plots of the exact relation.
pub fn mapping_table(
    prism: &PrismSpec,
    q_values: &[f64],
    omegas: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::with_capacity(q_values.len() * omegas.len());
    for &w in omegas {
        for &q in q_values {
            rows.push((q, snell_map(q, w, prism)?, w));
        }
    }
    Ok(rows)
}

/// CSV export of [`mapping_table`]: `q_per_mm,q_prime_per_mm,omega_rad_fs`.
pub fn mapping_table_csv(
    prism: &PrismSpec,
    q_values: &[f64],
    omegas: &[f64],
) -> Result<String> {
    use std::fmt::Write as _;
    let mut out = String::from("q_per_mm,q_prime_per_mm,omega_rad_fs\n");
    for (q, qp, w) in mapping_table(prism, q_values, omegas)? {
        writeln!(out, "{q},{qp},{w}").expect("string write");
    }
    Ok(out)
}
