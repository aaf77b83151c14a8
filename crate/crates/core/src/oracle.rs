//! Independent evaluation of the visibility, two ways.
//!
//! `v_oracle` integrates the pre-reduction kernel directly: the spectral
//! integral collapses analytically onto the line z + z' = -2 tau / D inside
//! the [-L, 0]^2 square (no spectral filter), and the kernel J_V is then
//! integrated along that line by adaptive quadrature, normalized by the
//! diagonal J_0 integral. This shares only the aperture transforms with the
//! closed-form engine; the triangle envelope, the sinc factor, the aperture
//! argument scaling and the shift cosine must all emerge from the
//! quadrature on their own.
//!
//! `DirectEvaluator` goes one level deeper for a deliberately tiny 1-D
//! configuration: it builds the biphoton amplitude on discrete (q, nu)
//! grids, integrates |A|^2 over bucket-detector coordinates and the
//! detection-time difference, and reads the dip off the coincidence rate.

use num_complex::Complex64;
use serde::Serialize;

use crate::crystal::DispersionParams;
use crate::error::{Error, Result};
use crate::interference::{visibility_cw, EngineOptions};
use crate::math::quad::integrate_complex;
use crate::math::sinc;
use crate::optics::{ptilde, Arm, OpticalSystemSpec};
use crate::units::C_MM_FS;

/// Kernel J_V(z, z') of the visibility integral: prefactor, quadratic
/// walk-off phase, and the two aperture transforms at opposite arguments
/// proportional to (z + z') along the walk-off axis. Shifted apertures
/// contribute their transform phases.
pub fn v_oracle_kernel(
    z: f64,
    z_prime: f64,
    system: &OpticalSystemSpec,
    params: &DispersionParams,
) -> Complex64 {
    let w0 = params.omega_p0;
    let d1 = system.d1_mm;
    let prefactor = (w0 / (2.0 * C_MM_FS * d1)).powi(2);
    let phase = -w0 / (8.0 * C_MM_FS * d1) * params.m * params.m
        * (z * z - z_prime * z_prime);
    let gamma = w0 / (4.0 * C_MM_FS * d1) * params.m;
    let arg = gamma * (z + z_prime);
    let pa = ptilde(system.aperture(Arm::A), [0.0, arg]);
    let pb = ptilde(system.aperture(Arm::B), [0.0, -arg]);
    prefactor * Complex64::from_polar(1.0, phase) * pa * pb
}

/// Diagonal kernel J_0(z, z) entering the normalization (the aperture
/// transforms sit at zero argument where they equal one; kept explicit so
/// the normalization is evaluated rather than assumed).
fn j0_diagonal(_z: f64, system: &OpticalSystemSpec, params: &DispersionParams) -> Complex64 {
    let w0 = params.omega_p0;
    let d1 = system.d1_mm;
    let prefactor = (w0 / (2.0 * C_MM_FS * d1)).powi(2);
    let pa = ptilde(system.aperture(Arm::A), [0.0, 0.0]);
    let pb = ptilde(system.aperture(Arm::B), [0.0, 0.0]);
    prefactor * pa * pb
}

/// One oracle evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleEval {
    pub value: f64,
    /// Imaginary part of the complex line integral divided by the
    /// normalization; vanishes for symmetric unshifted apertures.
    pub imag_residual: f64,
    pub error_estimate: f64,
}

/// Brute-force visibility at delay `tau_fs` for a cw scenario.
pub fn v_oracle(
    tau_fs: f64,
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
    tol: f64,
) -> Result<OracleEval> {
    let d = params.d;
    let w = -2.0 * tau_fs / d; // constraint line z + z' = w
    let l = l_mm;

    // intersection of the line with the square [-L, 0]^2
    let z_lo = (-l).max(w);
    let z_hi = 0.0_f64.min(w + l);
    if z_lo >= z_hi {
        // line misses the square: no quantum interference at this delay
        return Ok(OracleEval { value: 0.0, imag_residual: 0.0, error_estimate: 0.0 });
    }

    // line integral of J_V along z in [z_lo, z_hi], z' = w - z
    let line = integrate_complex(
        |z| v_oracle_kernel(z, w - z, system, params),
        z_lo,
        z_hi,
        tol * (params.omega_p0 / (2.0 * C_MM_FS * system.d1_mm)).powi(2),
        "oracle line integral",
    )?;

    // normalization: (2 pi / D) int_{-L}^0 J_0(z, z) dz
    let norm = integrate_complex(
        |z| j0_diagonal(z, system, params),
        -l,
        0.0,
        tol * (params.omega_p0 / (2.0 * C_MM_FS * system.d1_mm)).powi(2),
        "oracle normalization",
    )?;

    // the 2 pi / D factors cancel between numerator and denominator
    let ratio = line.value / norm.value;
    Ok(OracleEval {
        value: ratio.re,
        imag_residual: ratio.im,
        error_estimate: (line.error_estimate + norm.error_estimate) / norm.value.norm(),
    })
}

/// Strictly positive normalization of the coincidence baseline,
/// (2 pi / D) int J_0(z, z) dz, in the kernel's own units.
pub fn r0_normalization(
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
) -> Result<f64> {
    let q = integrate_complex(
        |z| j0_diagonal(z, system, params),
        -l_mm,
        0.0,
        1.0e-12 * (params.omega_p0 / (2.0 * C_MM_FS * system.d1_mm)).powi(2),
        "oracle normalization",
    )?;
    Ok(2.0 * std::f64::consts::PI / params.d * q.value.re)
}

/// Row of an oracle comparison table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleRow {
    pub tau_fs: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

/// Closed-form versus oracle comparison over a tau grid.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub max_abs_diff: f64,
    pub max_imag_residual: f64,
    pub quad_tol: f64,
}

impl OracleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Compare the closed-form cw engine against the oracle on `tau_grid`.
pub fn oracle_report(
    system: &OpticalSystemSpec,
    params: &DispersionParams,
    l_mm: f64,
    tau_grid: &[f64],
    tol: f64,
) -> Result<OracleReport> {
    let opts = EngineOptions::default();
    let mut rows = Vec::with_capacity(tau_grid.len());
    let mut max_abs_diff = 0.0_f64;
    let mut max_imag = 0.0_f64;
    for &tau in tau_grid {
        let closed = visibility_cw(tau, system, params, l_mm, &opts);
        let o = v_oracle(tau, system, params, l_mm, tol)?;
        let diff = (closed - o.value).abs();
        max_abs_diff = max_abs_diff.max(diff);
        max_imag = max_imag.max(o.imag_residual.abs());
        rows.push(OracleRow { tau_fs: tau, closed_form: closed, oracle: o.value, abs_diff: diff });
    }
    Ok(OracleReport { rows, max_abs_diff, max_imag_residual: max_imag, quad_tol: tol })
}

// ---------------------------------------------------------------------------
// Direct evaluation of the coincidence integral on a tiny 1-D grid
// ---------------------------------------------------------------------------

/// Deliberately tiny 1-D transverse configuration for the direct biphoton
/// integral: a rectangular pupil (half-width along the walk-off axis) in
/// both arms, discrete q and nu grids, bucket detectors sampled on a finite
/// window in the lens focal plane (d2 = f so the detector-plane quadratic
/// phase drops).
#[derive(Debug, Clone, Serialize)]
pub struct ToySystem {
    pub l_mm: f64,
    pub d1_mm: f64,
    pub f_mm: f64,
    /// Rect pupil half-width along e2, mm.
    pub aperture_half_width_mm: f64,
    pub n_q: usize,
    pub n_nu: usize,
    pub n_x: usize,
    /// Transverse wavevector window [-q_window, q_window], 1/mm.
    pub q_window: f64,
    /// Spectral window [-nu_window, nu_window], rad/fs.
    pub nu_window: f64,
    /// Detector window [-x_window, x_window], mm.
    pub x_window_mm: f64,
}

impl ToySystem {
    /// Small-aperture configuration: the dip recovers the 1-D triangle.
    pub fn pinhole_like(l_mm: f64, params: &DispersionParams) -> ToySystem {
        let ld = params.support_fs(l_mm);
        ToySystem {
            l_mm,
            d1_mm: 1000.0,
            f_mm: 250.0,
            aperture_half_width_mm: 0.2,
            n_q: 64,
            n_nu: 64,
            n_x: 96,
            q_window: 16.0,
            nu_window: 10.0 * std::f64::consts::PI / ld,
            x_window_mm: 0.45,
        }
    }

    /// Scaled configuration matching the dimensionless dip argument of a
    /// 5-mm circular aperture a meter from a 1.5-mm crystal; the smaller
    /// geometry keeps the chirped q integrand resolvable on 64 samples.
    pub fn five_mm_equivalent(params: &DispersionParams) -> ToySystem {
        let l_mm = 3.0;
        let ld = params.support_fs(l_mm);
        ToySystem {
            l_mm,
            d1_mm: 60.0,
            f_mm: 250.0,
            aperture_half_width_mm: 0.075,
            n_q: 64,
            n_nu: 64,
            n_x: 80,
            q_window: 110.0,
            nu_window: 12.0 * std::f64::consts::PI / ld,
            x_window_mm: 5.2,
        }
    }
}

/// Precomputed direct evaluator: the tau dependence of the coincidence
/// rate lives entirely in one spectral phase factor, so the heavy spatial
/// sums are done once at construction.
pub struct DirectEvaluator {
    nu: Vec<f64>,
    nu_weight: Vec<f64>,
    cross: Vec<Complex64>,
    baseline: f64,
}

impl DirectEvaluator {
    pub fn new(toy: &ToySystem, params: &DispersionParams) -> Result<Self> {
        if toy.n_q > 64 || toy.n_nu > 64 {
            return Err(Error::InvalidSpec {
                what: "ToySystem",
                why: format!(
                    "direct grids are capped at 64 x 64 (q x nu), got {} x {}",
                    toy.n_q, toy.n_nu
                ),
            });
        }
        Self::check_sampling(toy, params)?;

        let w0 = params.omega_p0;
        let (nq, nnu, nx) = (toy.n_q, toy.n_nu, toy.n_x);
        let lin = |i: usize, n: usize, w: f64| -w + 2.0 * w * i as f64 / (n as f64 - 1.0);
        let q: Vec<f64> = (0..nq).map(|i| lin(i, nq, toy.q_window)).collect();
        let nu: Vec<f64> = (0..nnu).map(|i| lin(i, nnu, toy.nu_window)).collect();
        let x: Vec<f64> = (0..nx).map(|i| lin(i, nx, toy.x_window_mm)).collect();
        let trap = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };

        let h = toy.aperture_half_width_mm;
        let phat = |u: f64| sinc(h * u);

        // per-nu amplitude matrices T1[x_a, x_b]
        let mut t1: Vec<Vec<Complex64>> = Vec::with_capacity(nnu);
        for (i, &nui) in nu.iter().enumerate() {
            let _ = i;
            let we = w0 / 2.0 + nui;
            let wo = w0 / 2.0 - nui;
            let ue = we / (C_MM_FS * toy.f_mm);
            let uo = wo / (C_MM_FS * toy.f_mm);

            // per-q factors: pump-planewave state function and Fresnel chirps
            let mut fq: Vec<Complex64> = Vec::with_capacity(nq);
            for (k, &qk) in q.iter().enumerate() {
                let delta = -params.d * nui + 2.0 * C_MM_FS * qk * qk / w0 + params.m * qk;
                let arg = toy.l_mm * delta / 2.0;
                let phi = toy.l_mm * sinc(arg) * Complex64::from_polar(1.0, -arg);
                let chirp = Complex64::from_polar(
                    1.0,
                    -C_MM_FS * toy.d1_mm * qk * qk / (2.0 * we)
                        - C_MM_FS * toy.d1_mm * qk * qk / (2.0 * wo),
                );
                fq.push(phi * chirp * trap(k, nq));
            }

            // A-side and B-side pupil samples
            let mut pa = vec![0.0; nx * nq];
            let mut pb = vec![0.0; nx * nq];
            for (a, &xa) in x.iter().enumerate() {
                for (k, &qk) in q.iter().enumerate() {
                    pa[a * nq + k] = phat(ue * xa - qk);
                    pb[a * nq + k] = phat(uo * xa + qk);
                }
            }

            let mut m = vec![Complex64::new(0.0, 0.0); nx * nx];
            for a in 0..nx {
                for b in 0..nx {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..nq {
                        acc += fq[k] * (pa[a * nq + k] * pb[b * nq + k]);
                    }
                    m[a * nx + b] = acc;
                }
            }
            t1.push(m);
        }

        // detector-plane sums: baseline and the tau-bearing cross spectrum
        let mut cross = vec![Complex64::new(0.0, 0.0); nnu];
        let mut baseline = 0.0;
        for i in 0..nnu {
            let j = nnu - 1 - i; // index of -nu on the symmetric grid
            let wnu = trap(i, nnu);
            let mut g = Complex64::new(0.0, 0.0);
            let mut b0 = 0.0;
            for a in 0..nx {
                let wa = trap(a, nx);
                for b in 0..nx {
                    let wx = wa * trap(b, nx);
                    let tab = t1[i][a * nx + b];
                    // the swapped-arm amplitude is the transpose at -nu
                    g += wx * tab * t1[j][b * nx + a].conj();
                    b0 += wx * tab.norm_sqr();
                }
            }
            cross[i] = wnu * g;
            baseline += wnu * 2.0 * b0;
        }

        Ok(DirectEvaluator { nu, nu_weight: vec![1.0; nnu], cross, baseline })
    }

    fn check_sampling(toy: &ToySystem, params: &DispersionParams) -> Result<()> {
        let w0 = params.omega_p0;
        let dq = 2.0 * toy.q_window / (toy.n_q as f64 - 1.0);
        let dnu = 2.0 * toy.nu_window / (toy.n_nu as f64 - 1.0);
        let ld = params.support_fs(toy.l_mm);

        // per-photon Fresnel chirp resolved at the window edge
        let chirp_step = 2.0 * C_MM_FS * toy.d1_mm / w0 * toy.q_window * dq;
        if chirp_step > std::f64::consts::PI {
            return Err(Error::NyquistViolation {
                context: "direct evaluator q grid",
                detail: format!(
                    "Fresnel chirp at |q| = {} 1/mm advances {chirp_step:.2} rad per sample",
                    toy.q_window
                ),
                phase_step: chirp_step,
            });
        }
        // state-function phase along q
        let phi_step = toy.l_mm
            * (params.m * dq + 2.0 * C_MM_FS * 2.0 * toy.q_window * dq / w0)
            / 2.0;
        if phi_step > std::f64::consts::PI {
            return Err(Error::NyquistViolation {
                context: "direct evaluator q grid",
                detail: "phase-matching argument under-sampled".into(),
                phase_step: phi_step,
            });
        }
        // spectral transform phase out to the support edge
        let tau_step = 2.0 * dnu * ld;
        if tau_step > std::f64::consts::PI {
            return Err(Error::NyquistViolation {
                context: "direct evaluator nu grid",
                detail: "delay transform under-sampled at the support edge".into(),
                phase_step: tau_step,
            });
        }
        Ok(())
    }

    /// Coincidence visibility 1 - R(tau)/R0 on the toy grid.
    pub fn visibility(&self, tau_fs: f64) -> f64 {
        let mut dip = 0.0;
        for (i, &nui) in self.nu.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -2.0 * nui * tau_fs);
            dip += self.nu_weight[i] * 2.0 * (self.cross[i] * phase).re;
        }
        dip / self.baseline
    }

    /// Baseline coincidence level (positive for any transmitting pupil).
    pub fn baseline(&self) -> f64 {
        self.baseline
    }
}

/// One-call direct evaluation at a single delay.
pub fn biphoton_direct(tau_fs: f64, toy: &ToySystem, params: &DispersionParams) -> Result<f64> {
    Ok(DirectEvaluator::new(toy, params)?.visibility(tau_fs))
}
