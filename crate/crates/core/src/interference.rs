//! Closed-form visibility engine.
//!
//! The coincidence rate behind the relative o/e delay tau is
//! R(tau) = R0 [1 - V(tau)] with, for a monochromatic planewave pump,
//!
//! V(tau) = Lam(2 tau/LD - 1)
//!          * sinc[(omega_p0 L^2 M^2 / 4 c d1) (tau/LD) Lam(2 tau/LD - 1)]
//!          * Re[ P_A(-(omega_p0 L M / 4 c d1)(2 tau/LD) e2)
//!              * P_B(+(omega_p0 L M / 4 c d1)(2 tau/LD) e2) ]
//!          * cos-modulation for relative aperture shifts,
//!
//! where Lam is the triangle function, LD = L (1/u_o - 1/u_e), and the P_i
//! are the unshifted normalized transforms of |p_i|^2 centered at tau = 0.
//! Because the P_i are centered at tau = 0 while Lam is symmetric about
//! LD/2, wide apertures produce asymmetric dips; small apertures recover
//! the 1-D triangular dip. Pulsed pumping replaces the sinc factor by a
//! spectral average over the pump bandwidth.

use serde::{Deserialize, Serialize};

use crate::crystal::{dispersion_params, CrystalSpec, DispersionParams};
use crate::error::{Error, Result};
use crate::math::quad::integrate;
use crate::math::{sinc, triangle};
use crate::optics::{ptilde_unshifted, Arm, OpticalSystemSpec};
use crate::pumpgeom::{planewave_valid, PlanewaveVerdict};
use crate::units::C_MM_FS;

/// Pump field model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum PumpSpec {
    /// Monochromatic planewave.
    CwPlane { wavelength_nm: f64 },
    /// Transform-limited Gaussian pulse, planewave transversely.
    /// `fwhm_fs` is the intensity FWHM; the spectral intensity is Gaussian
    /// with FWHM_omega = 4 ln2 / fwhm_fs.
    PulsedPlane { center_wavelength_nm: f64, fwhm_fs: f64 },
    /// Monochromatic beam of finite diameter. Patterns are computed in the
    /// planewave model; the planewave-validity verdict is attached to the
    /// output metadata.
    FiniteBeam { wavelength_nm: f64, diameter_mm: f64 },
}

impl PumpSpec {
    pub fn validated(self) -> Result<Self> {
        match &self {
            PumpSpec::PulsedPlane { fwhm_fs, .. } if !(*fwhm_fs > 0.0) => {
                Err(Error::InvalidSpec {
                    what: "PumpSpec",
                    why: format!("fwhm_fs must be > 0, got {fwhm_fs}"),
                })
            }
            PumpSpec::FiniteBeam { diameter_mm, .. } if !(*diameter_mm > 0.0) => {
                Err(Error::InvalidSpec {
                    what: "PumpSpec",
                    why: format!("diameter_mm must be > 0, got {diameter_mm}"),
                })
            }
            _ => Ok(self),
        }
    }

    pub fn wavelength_nm(&self) -> f64 {
        match self {
            PumpSpec::CwPlane { wavelength_nm } => *wavelength_nm,
            PumpSpec::PulsedPlane { center_wavelength_nm, .. } => *center_wavelength_nm,
            PumpSpec::FiniteBeam { wavelength_nm, .. } => *wavelength_nm,
        }
    }

    /// Spectral standard deviation of |E_p|^2 in rad/fs (zero for cw).
    pub fn spectral_sigma(&self) -> f64 {
        match self {
            PumpSpec::PulsedPlane { fwhm_fs, .. } => (2.0 * std::f64::consts::LN_2).sqrt() / fwhm_fs,
            _ => 0.0,
        }
    }
}

/// Engine switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineOptions {
    /// Drop the transverse phase-matching sinc factor (the 1-D/3-D
    /// discriminator, near unity in practical geometries).
    pub drop_sinc: bool,
    /// Absolute tolerance of the pulsed spectral quadrature.
    pub quad_tol: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { drop_sinc: false, quad_tol: 1.0e-10 }
    }
}

/// Common per-tau factors: (LD, triangle envelope, aperture argument along e2).
fn common_factors(
    tau_fs: f64,
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
) -> (f64, f64, f64) {
    let ld = params.support_fs(l_mm);
    let zeta = 2.0 * tau_fs / ld;
    let lam = triangle(zeta - 1.0);
    let q_scale = params.omega_p0 * l_mm * params.m / (4.0 * C_MM_FS * system.d1_mm);
    (ld, lam, q_scale * zeta)
}

fn aperture_product(system: &OpticalSystemSpec, q2: f64) -> f64 {
    // unshifted transforms at opposite arguments along e2; shifts are
    // carried by the cosine factor
    let pa = ptilde_unshifted(&system.aperture(Arm::A).shape, [0.0, -q2]);
    let pb = ptilde_unshifted(&system.aperture(Arm::B).shape, [0.0, q2]);
    (pa * pb).re
}

fn shift_cos(system: &OpticalSystemSpec, q2: f64) -> f64 {
    let ds = system.aperture_a.shift_mm[1] - system.aperture_b.shift_mm[1];
    (q2 * ds).cos()
}

/// Visibility for a monochromatic planewave pump.
pub fn visibility_cw(
    tau_fs: f64,
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
    opts: &EngineOptions,
) -> f64 {
    let (ld, lam, q_arg) = common_factors(tau_fs, system, params, l_mm);
    if lam == 0.0 {
        return 0.0;
    }
    let sinc_factor = if opts.drop_sinc {
        1.0
    } else {
        let s = params.omega_p0 * l_mm * l_mm * params.m * params.m
            / (4.0 * C_MM_FS * system.d1_mm);
        sinc(s * (tau_fs / ld) * lam)
    };
    lam * sinc_factor * aperture_product(system, q_arg) * shift_cos(system, q_arg)
}

/// Spectral average replacing the sinc factor under pulsed pumping:
/// the normalized integral over the pump spectrum of
/// sinc[(D+ L nu_p + (omega_p0 L^2 M^2 / 4 c d1)(tau/LD)) Lam],
/// evaluated by adaptive quadrature over +-5 spectral standard deviations.
pub fn pulsed_spectral_factor(
    tau_fs: f64,
    params: &DispersionParams,
    l_mm: f64,
    d1_mm: f64,
    sigma: f64,
    quad_tol: f64,
) -> Result<f64> {
    let ld = params.support_fs(l_mm);
    let lam = triangle(2.0 * tau_fs / ld - 1.0);
    if lam == 0.0 {
        return Ok(1.0);
    }
    let s_geo = params.omega_p0 * l_mm * l_mm * params.m * params.m / (4.0 * C_MM_FS * d1_mm)
        * (tau_fs / ld);
    if sigma == 0.0 {
        return Ok(sinc(s_geo * lam));
    }
    let dl = params.d_plus * l_mm;
    let num = integrate(
        |nu: f64| {
            let w = (-nu * nu / (2.0 * sigma * sigma)).exp();
            w * sinc((dl * nu + s_geo) * lam)
        },
        -5.0 * sigma,
        5.0 * sigma,
        quad_tol,
        "pulsed spectral average (numerator)",
    )?;
    let den = integrate(
        |nu: f64| (-nu * nu / (2.0 * sigma * sigma)).exp(),
        -5.0 * sigma,
        5.0 * sigma,
        quad_tol,
        "pulsed spectral average (normalization)",
    )?;
    Ok(num.value / den.value)
}

/// Visibility for a pulsed planewave pump (Gaussian spectrum).
pub fn visibility_pulsed(
    tau_fs: f64,
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
    pump: &PumpSpec,
    opts: &EngineOptions,
) -> Result<f64> {
    let (_ld, lam, q_arg) = common_factors(tau_fs, system, params, l_mm);
    if lam == 0.0 {
        return Ok(0.0);
    }
    let vp = pulsed_spectral_factor(
        tau_fs,
        params,
        l_mm,
        system.d1_mm,
        pump.spectral_sigma(),
        opts.quad_tol,
    )?;
    Ok(lam * vp * aperture_product(system, q_arg) * shift_cos(system, q_arg))
}

/// Dispatching visibility: cw and finite-beam pumps use the cw engine,
/// pulsed pumps the spectral average.
pub fn visibility(
    tau_fs: f64,
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
    pump: &PumpSpec,
    opts: &EngineOptions,
) -> Result<f64> {
    match pump {
        PumpSpec::CwPlane { .. } | PumpSpec::FiniteBeam { .. } => {
            Ok(visibility_cw(tau_fs, system, params, l_mm, opts))
        }
        PumpSpec::PulsedPlane { .. } => {
            visibility_pulsed(tau_fs, system, params, l_mm, pump, opts)
        }
    }
}

/// Resolved-scenario echo attached to every pattern.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub crystal: CrystalSpec,
    pub dispersion: DispersionParams,
    pub system: OpticalSystemSpec,
    pub pump: PumpSpec,
    pub options: EngineOptions,
    /// Dip support width L D, fs.
    pub support_fs: f64,
    /// Full-compensation delay L D / 2, fs.
    pub full_compensation_fs: f64,
    /// Fresnel-approximation diagnostic at the degenerate wavelength.
    pub fresnel_ok: bool,
    pub fresnel_parameter: f64,
    /// Pump spectrum assumption echoed for pulsed runs.
    pub transform_limited_gaussian: bool,
    /// Planewave verdict for finite-beam pumps.
    pub planewave: Option<PlanewaveVerdict>,
    /// Pattern asymmetry about the full-compensation delay, fs.
    pub asymmetry_fs: f64,
    /// Visibility at tau = LD/2.
    pub visibility_at_full_compensation: f64,
    /// Minimum visibility over the evaluated grid (negative when the dip
    /// partially inverts into a peak).
    pub min_visibility: f64,
}

/// Sampled interference pattern.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternGrid {
    pub tau_fs: Vec<f64>,
    pub visibility: Vec<f64>,
    /// R/R0 = 1 - V, elementwise.
    pub r_normalized: Vec<f64>,
    pub visibility_at_full_compensation: f64,
    pub metadata: ScenarioSummary,
}

/// Uniform default tau grid: `n` samples spanning [-0.25 LD, 1.25 LD].
pub fn default_tau_grid(params: &DispersionParams, l_mm: f64, n: usize) -> Vec<f64> {
    let ld = params.support_fs(l_mm);
    (0..n)
        .map(|i| -0.25 * ld + 1.5 * ld * (i as f64) / ((n - 1).max(1) as f64))
        .collect()
}

/// Asymmetry metric A = int |V(LD/2 + u) - V(LD/2 - u)| du over the support,
/// in fs, evaluated on a uniform 2048-point grid.
pub fn asymmetry(
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
    pump: &PumpSpec,
    opts: &EngineOptions,
) -> Result<f64> {
    let ld = params.support_fs(l_mm);
    let half = ld / 2.0;
    let n = 2048usize;
    let du = half / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let u = (i as f64 + 0.5) * du;
        let plus = visibility(half + u, system, params, l_mm, pump, opts)?;
        let minus = visibility(half - u, system, params, l_mm, pump, opts)?;
        acc += (plus - minus).abs() * du;
    }
    Ok(acc)
}

/// Evaluate the pattern over `tau_grid` (fs, sorted ascending).
pub fn pattern(
    system: &OpticalSystemSpec,
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    tau_grid: &[f64],
    opts: &EngineOptions,
) -> Result<PatternGrid> {
    if tau_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidSpec {
            what: "pattern",
            why: "tau grid must be sorted ascending".into(),
        });
    }
    let params = dispersion_params(crystal)?;
    let l_mm = crystal.thickness_mm;
    let ld = params.support_fs(l_mm);

    let mut visibility_vals = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        visibility_vals.push(visibility(tau, system, &params, l_mm, pump, opts)?);
    }
    let r_normalized: Vec<f64> = visibility_vals.iter().map(|v| 1.0 - v).collect();
    let v_half = visibility(ld / 2.0, system, &params, l_mm, pump, opts)?;
    let min_v = visibility_vals.iter().cloned().fold(f64::INFINITY, f64::min);

    let planewave = match pump {
        PumpSpec::FiniteBeam { diameter_mm, .. } => {
            Some(planewave_valid(*diameter_mm, l_mm, &params)?)
        }
        _ => None,
    };

    let lambda_mm = crystal.pump_wavelength_nm * 2.0 * 1.0e-6; // degenerate wavelength
    let metadata = ScenarioSummary {
        crystal: crystal.clone(),
        dispersion: params,
        system: system.clone(),
        pump: pump.clone(),
        options: *opts,
        support_fs: ld,
        full_compensation_fs: ld / 2.0,
        fresnel_ok: system.fresnel_ok(lambda_mm),
        fresnel_parameter: system.fresnel_parameter(lambda_mm),
        transform_limited_gaussian: matches!(pump, PumpSpec::PulsedPlane { .. }),
        planewave,
        asymmetry_fs: asymmetry(system, &params, l_mm, pump, opts)?,
        visibility_at_full_compensation: v_half,
        min_visibility: min_v,
    };

    Ok(PatternGrid {
        tau_fs: tau_grid.to_vec(),
        visibility: visibility_vals,
        r_normalized,
        visibility_at_full_compensation: v_half,
        metadata,
    })
}

/// Visibility at the full-compensation delay tau = LD/2 for each thickness
/// in `l_grid_mm` (ascending), re-deriving the dispersion parameters per
/// thickness from the crystal template.
pub fn visibility_vs_thickness(
    l_grid_mm: &[f64],
    crystal_template: &CrystalSpec,
    system: &OpticalSystemSpec,
    pump: &PumpSpec,
    opts: &EngineOptions,
) -> Result<Vec<(f64, f64)>> {
    if l_grid_mm.iter().any(|&l| !(l > 0.0)) || l_grid_mm.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidSpec {
            what: "visibility_vs_thickness",
            why: "thickness grid must be positive ascending".into(),
        });
    }
    let mut out = Vec::with_capacity(l_grid_mm.len());
    for &l in l_grid_mm {
        let crystal = CrystalSpec { thickness_mm: l, ..crystal_template.clone() };
        let params = dispersion_params(&crystal)?;
        let ld = params.support_fs(l);
        out.push((l, visibility(ld / 2.0, system, &params, l, pump, opts)?));
    }
    Ok(out)
}
