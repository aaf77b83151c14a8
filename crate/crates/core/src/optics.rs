//! Fresnel-propagation layer: the impulse response and transfer function of
//! the crystal-to-detector optical path, and the normalized aperture
//! transforms that shape the quantum-interference pattern.
//!
//! The optical path is free space over d1 from the crystal output face to
//! the aperture plane, free space over d2 to a thin lens of focal length f,
//! and free space over f to the detection plane. In the Fresnel
//! approximation the transfer function factorizes into quadratic phases and
//! the pupil transform evaluated at (omega/(c f)) x_detector - q.
//!
//! Two distinct transforms appear. The transfer function carries the plain
//! Fourier transform of the pupil amplitude p(x). The visibility engine
//! carries the normalized transform of |p(x)|^2, here called `ptilde`; for
//! the analytic aperture families it reduces to the closed forms
//!
//! - circular:  2 J1(b|q|)/(b|q|)
//! - slit:      sinc(b e1.q') sinc(a e2.q'), q' the rotated argument
//! - annular:   (2/(b-a)) [J1(b|q|) - J1(a|q|)]/|q|
//!
//! with ptilde(0) = 1 in every case. A transverse shift s of an aperture
//! multiplies its ptilde by exp(-i q.s); for a pair of identical symmetric
//! apertures this reduces to the cosine factor of `shift_modulation`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::crystal::DispersionParams;
use crate::error::{Error, Result};
use crate::math::bessel::{j1, jinc};
use crate::math::{dot2, norm2, rot2, sinc};
use crate::prism::PrismSpec;
use crate::units::C_MM_FS;

/// Pixelated pupil: amplitude transmissions in [0, 1] on a square grid.
///
/// Row-major storage; column j maps to e1 = (j - (ncols-1)/2) * pitch and
/// row i to e2 = ((nrows-1)/2 - i) * pitch (top row has the largest e2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskGrid {
    pub pitch_mm: f64,
    pub nrows: usize,
    pub ncols: usize,
    pub amplitudes: Vec<f64>,
}

impl MaskGrid {
    pub fn new(pitch_mm: f64, nrows: usize, ncols: usize, amplitudes: Vec<f64>) -> Result<Self> {
        if !(pitch_mm > 0.0) {
            return Err(Error::InvalidSpec {
                what: "MaskGrid",
                why: format!("pitch must be > 0, got {pitch_mm}"),
            });
        }
        if nrows == 0 || ncols == 0 || amplitudes.len() != nrows * ncols {
            return Err(Error::InvalidSpec {
                what: "MaskGrid",
                why: format!(
                    "grid must be nonempty with nrows*ncols amplitudes (got {}x{}, {} values)",
                    nrows,
                    ncols,
                    amplitudes.len()
                ),
            });
        }
        if amplitudes.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::InvalidSpec {
                what: "MaskGrid",
                why: "amplitudes must lie in [0, 1]".into(),
            });
        }
        if amplitudes.iter().all(|&a| a == 0.0) {
            return Err(Error::InvalidSpec {
                what: "MaskGrid",
                why: "mask is fully opaque".into(),
            });
        }
        Ok(MaskGrid { pitch_mm, nrows, ncols, amplitudes })
    }

    /// Parse the plain-text grid format: first line is the pitch in mm,
    /// following lines are rows of amplitudes in [0, 1].
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse {
            what: "mask grid",
            line: 1,
            why: "empty file".into(),
        })?;
        let pitch: f64 = first.trim().parse().map_err(|e| Error::Parse {
            what: "mask grid",
            line: ln + 1,
            why: format!("header must be the pitch in mm: {e}"),
        })?;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (ln, line) in lines {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|e| Error::Parse {
                        what: "mask grid",
                        line: ln + 1,
                        why: format!("bad amplitude {t:?}: {e}"),
                    })
                })
                .collect::<Result<_>>()?;
            if let Some(prev) = rows.last() {
                if prev.len() != row.len() {
                    return Err(Error::Parse {
                        what: "mask grid",
                        line: ln + 1,
                        why: format!("ragged row: {} values, expected {}", row.len(), prev.len()),
                    });
                }
            }
            rows.push(row);
        }
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        MaskGrid::new(pitch, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        MaskGrid::parse(&std::fs::read_to_string(path)?)
    }

    /// Pixel center coordinate (e1, e2) for row i, column j.
    fn coord(&self, i: usize, j: usize) -> [f64; 2] {
        let x1 = (j as f64 - (self.ncols as f64 - 1.0) / 2.0) * self.pitch_mm;
        let x2 = ((self.nrows as f64 - 1.0) / 2.0 - i as f64) * self.pitch_mm;
        [x1, x2]
    }

    fn iter_pixels(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            (0..self.ncols).filter_map(move |j| {
                let a = self.amplitudes[i * self.ncols + j];
                (a != 0.0).then(|| (self.coord(i, j), a))
            })
        })
    }
}

/// Pupil geometry. Scale parameters enter the closed-form transforms as
/// printed above (the circular b multiplies |q| directly, slit a/b multiply
/// the rotated components, annular a < b likewise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "shape")]
pub enum ApertureShape {
    Circular { b_mm: f64 },
    Slit {
        /// e2 extent parameter (the walk-off axis for zero rotation).
        a_mm: f64,
        /// e1 extent parameter.
        b_mm: f64,
        /// Rotation of the slit about the optical axis, rad.
        rotation_rad: f64,
    },
    Annular { a_mm: f64, b_mm: f64 },
    Mask { grid: MaskGrid },
}

/// An aperture: shape plus transverse displacement from the optical axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApertureSpec {
    pub shape: ApertureShape,
    /// Displacement s of the aperture center, mm (e1, e2).
    pub shift_mm: [f64; 2],
}

impl ApertureSpec {
    pub fn new(shape: ApertureShape, shift_mm: [f64; 2]) -> Result<Self> {
        match &shape {
            ApertureShape::Circular { b_mm } => {
                if !(*b_mm > 0.0) {
                    return Err(Error::InvalidSpec {
                        what: "ApertureSpec",
                        why: format!("circular b must be > 0, got {b_mm}"),
                    });
                }
            }
            ApertureShape::Slit { a_mm, b_mm, .. } => {
                if !(*a_mm > 0.0 && *b_mm > 0.0) {
                    return Err(Error::InvalidSpec {
                        what: "ApertureSpec",
                        why: format!("slit extents must be > 0, got a={a_mm}, b={b_mm}"),
                    });
                }
            }
            ApertureShape::Annular { a_mm, b_mm } => {
                if !(*a_mm > 0.0 && *b_mm > *a_mm) {
                    return Err(Error::InvalidSpec {
                        what: "ApertureSpec",
                        why: format!("annular requires 0 < a < b, got a={a_mm}, b={b_mm}"),
                    });
                }
            }
            ApertureShape::Mask { .. } => {}
        }
        Ok(ApertureSpec { shape, shift_mm })
    }

    pub fn centered(shape: ApertureShape) -> Result<Self> {
        ApertureSpec::new(shape, [0.0, 0.0])
    }

    /// Largest transverse extent, used by the Fresnel-validity diagnostic
    /// and as the rasterization bound.
    pub fn extent_mm(&self) -> f64 {
        match &self.shape {
            ApertureShape::Circular { b_mm } => 2.0 * b_mm,
            ApertureShape::Slit { a_mm, b_mm, .. } => 2.0 * a_mm.max(*b_mm),
            ApertureShape::Annular { b_mm, .. } => 2.0 * b_mm,
            ApertureShape::Mask { grid } => {
                grid.pitch_mm * (grid.nrows.max(grid.ncols) as f64)
            }
        }
    }

    /// Rasterize the analytic shape onto a mask of `n` x `n` pixels covering
    /// the bounding box (masks are returned as-is). The physical footprint
    /// uses the closed-form scale parameters: a disc of radius b, a
    /// 2a x 2b rectangle, an annulus of radii a and b.
    ///
    /// Boundary pixels carry sqrt(coverage) amplitudes (4x4 sub-sampling),
    /// so the squared-magnitude transform of the mask tracks the analytic
    /// aperture area rather than a jagged binary outline.
    pub fn rasterize(&self, n: usize) -> MaskGrid {
        match &self.shape {
            ApertureShape::Mask { grid } => grid.clone(),
            ApertureShape::Circular { b_mm } => {
                let pitch = 2.0 * b_mm / n as f64;
                raster(n, pitch, |x| norm2(x) <= *b_mm)
            }
            ApertureShape::Annular { a_mm, b_mm } => {
                let pitch = 2.0 * b_mm / n as f64;
                raster(n, pitch, |x| {
                    let r = norm2(x);
                    r >= *a_mm && r <= *b_mm
                })
            }
            ApertureShape::Slit { a_mm, b_mm, rotation_rad } => {
                let half = a_mm.max(*b_mm);
                let pitch = 2.0 * half / n as f64;
                let rot = *rotation_rad;
                raster(n, pitch, |x| {
                    let xr = rot2(x, -rot);
                    xr[0].abs() <= *b_mm && xr[1].abs() <= *a_mm
                })
            }
        }
    }
}

fn raster(n: usize, pitch: f64, inside: impl Fn([f64; 2]) -> bool) -> MaskGrid {
    const SUB: usize = 8;
    let mut amp = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let x1 = (j as f64 - (n as f64 - 1.0) / 2.0) * pitch;
            let x2 = ((n as f64 - 1.0) / 2.0 - i as f64) * pitch;
            let mut hits = 0usize;
            for si in 0..SUB {
                for sj in 0..SUB {
                    let dx1 = ((sj as f64 + 0.5) / SUB as f64 - 0.5) * pitch;
                    let dx2 = ((si as f64 + 0.5) / SUB as f64 - 0.5) * pitch;
                    if inside([x1 + dx1, x2 + dx2]) {
                        hits += 1;
                    }
                }
            }
            let coverage = hits as f64 / (SUB * SUB) as f64;
            amp[i * n + j] = coverage.sqrt();
        }
    }
    MaskGrid::new(pitch, n, n, amp).expect("rasterization produces a valid grid")
}

/// Optional spectral filter in the detection path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SpectralFilter {
    None,
    Gaussian { center_rad_fs: f64, width_rad_fs: f64 },
}

impl SpectralFilter {
    /// Field transmission F(omega).
    pub fn transmission(&self, omega: f64) -> f64 {
        match self {
            SpectralFilter::None => 1.0,
            SpectralFilter::Gaussian { center_rad_fs, width_rad_fs } => {
                let d = (omega - center_rad_fs) / width_rad_fs;
                (-0.5 * d * d).exp()
            }
        }
    }
}

/// Geometry and pupils of the crystal-to-detector path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalSystemSpec {
    /// Crystal output face to aperture plane, mm.
    pub d1_mm: f64,
    /// Aperture plane to lens, mm.
    pub d2_mm: f64,
    /// Lens focal length, mm (detection plane sits at the back focal plane).
    pub f_mm: f64,
    pub aperture_a: ApertureSpec,
    pub aperture_b: ApertureSpec,
    pub spectral_filter: SpectralFilter,
    /// Dispersion prism present in the path. Verified negligible for the
    /// configured apertures (see `prism`); not part of the transfer function.
    pub prism: Option<PrismSpec>,
}

/// Detection arm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arm {
    A,
    B,
}

impl OpticalSystemSpec {
    pub fn validated(self) -> Result<Self> {
        for (name, v) in [("d1_mm", self.d1_mm), ("d2_mm", self.d2_mm), ("f_mm", self.f_mm)] {
            if !(v > 0.0) {
                return Err(Error::InvalidSpec {
                    what: "OpticalSystemSpec",
                    why: format!("{name} must be > 0, got {v}"),
                });
            }
        }
        Ok(self)
    }

    pub fn aperture(&self, arm: Arm) -> &ApertureSpec {
        match arm {
            Arm::A => &self.aperture_a,
            Arm::B => &self.aperture_b,
        }
    }

    /// Fresnel-approximation figure b^4/(4 lambda d1^3) for the wider
    /// aperture at vacuum wavelength `lambda_mm`.
    pub fn fresnel_parameter(&self, lambda_mm: f64) -> f64 {
        let b = self.aperture_a.extent_mm().max(self.aperture_b.extent_mm());
        b.powi(4) / (4.0 * lambda_mm * self.d1_mm.powi(3))
    }

    /// Diagnostic: Fresnel parameter below 1e-2.
    pub fn fresnel_ok(&self, lambda_mm: f64) -> bool {
        self.fresnel_parameter(lambda_mm) < 1.0e-2
    }
}

/// Normalized transform of the squared pupil magnitude, shift included:
/// ptilde(q) = exp(-i q.s) * ptilde_unshifted(q).
pub fn ptilde(aperture: &ApertureSpec, q: [f64; 2]) -> Complex64 {
    let base = ptilde_unshifted(&aperture.shape, q);
    let phase = -dot2(q, aperture.shift_mm);
    Complex64::from_polar(1.0, phase) * base
}

/// Normalized transform of |p|^2 for the centered shape. Real for every
/// analytic family (symmetric pupils); complex in general for masks.
pub fn ptilde_unshifted(shape: &ApertureShape, q: [f64; 2]) -> Complex64 {
    match shape {
        ApertureShape::Circular { b_mm } => Complex64::new(jinc(b_mm * norm2(q)), 0.0),
        ApertureShape::Slit { a_mm, b_mm, rotation_rad } => {
            let qr = rot2(q, -rotation_rad);
            Complex64::new(sinc(b_mm * qr[0]) * sinc(a_mm * qr[1]), 0.0)
        }
        ApertureShape::Annular { a_mm, b_mm } => {
            let qn = norm2(q);
            if qn < 1.0e-9 {
                // limit of (2/(b-a)) [J1(b q) - J1(a q)]/q as q -> 0
                let v = 1.0 - (b_mm.powi(3) - a_mm.powi(3)) / (b_mm - a_mm) * qn * qn / 8.0;
                Complex64::new(v, 0.0)
            } else {
                Complex64::new(2.0 / (b_mm - a_mm) * (j1(b_mm * qn) - j1(a_mm * qn)) / qn, 0.0)
            }
        }
        ApertureShape::Mask { grid } => {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for (x, a) in grid.iter_pixels() {
                let w = a * a;
                num += w * Complex64::from_polar(1.0, -dot2(q, x));
                den += w;
            }
            num / den
        }
    }
}

/// Plain Fourier transform of the pupil amplitude, evaluated at `u` (1/mm):
/// integral of p(x) exp(-i u.x) dx, shift included. This is the transform
/// entering the system transfer function (units mm^2).
pub fn pupil_transform(aperture: &ApertureSpec, u: [f64; 2]) -> Complex64 {
    let shift_phase = Complex64::from_polar(1.0, -dot2(u, aperture.shift_mm));
    let base = match &aperture.shape {
        // binary pupils: transform of p = transform of |p|^2 times the area
        ApertureShape::Circular { b_mm } => {
            Complex64::new(std::f64::consts::PI * b_mm * b_mm * jinc(b_mm * norm2(u)), 0.0)
        }
        ApertureShape::Slit { a_mm, b_mm, rotation_rad } => {
            let ur = rot2(u, -rotation_rad);
            Complex64::new(4.0 * a_mm * b_mm * sinc(b_mm * ur[0]) * sinc(a_mm * ur[1]), 0.0)
        }
        ApertureShape::Annular { a_mm, b_mm } => {
            let un = norm2(u);
            let area = std::f64::consts::PI * (b_mm * b_mm - a_mm * a_mm);
            if un < 1.0e-9 {
                Complex64::new(area, 0.0)
            } else {
                // exact transform of the hard annulus of radii a < b
                let v = 2.0 * (b_mm * j1(b_mm * un) - a_mm * j1(a_mm * un))
                    / ((b_mm * b_mm - a_mm * a_mm) * un);
                Complex64::new(area * v, 0.0)
            }
        }
        ApertureShape::Mask { grid } => {
            let w = grid.pitch_mm * grid.pitch_mm;
            let mut sum = Complex64::new(0.0, 0.0);
            for (x, a) in grid.iter_pixels() {
                sum += a * Complex64::from_polar(1.0, -dot2(u, x));
            }
            w * sum
        }
    };
    shift_phase * base
}

/// Impulse response h(x_detector, x_crystal; omega) of the full path:
/// quadratic phase factors times the aperture-plane Fresnel integral,
/// evaluated by direct quadrature of the rasterized pupil
/// (`aperture_resolution` pixels per side for analytic shapes).
pub fn impulse_response(
    x_detector: [f64; 2],
    x_crystal: [f64; 2],
    omega: f64,
    system: &OpticalSystemSpec,
    arm: Arm,
    aperture_resolution: usize,
) -> Complex64 {
    let (d1, d2, f) = (system.d1_mm, system.d2_mm, system.f_mm);
    let k = omega / C_MM_FS;
    let aperture = system.aperture(arm);
    let mask = aperture.rasterize(aperture_resolution);
    let s = aperture.shift_mm;

    // aperture-plane integral: sum p(x') e^{i w x'^2/(2 c d1)} e^{-i (w/c) x'.(x/d1 + x_i/f)}
    // with pixel coordinates displaced by the aperture shift
    let w = mask.pitch_mm * mask.pitch_mm;
    let coupling = [
        x_crystal[0] / d1 + x_detector[0] / f,
        x_crystal[1] / d1 + x_detector[1] / f,
    ];
    let mut integral = Complex64::new(0.0, 0.0);
    for (x0, a) in mask.iter_pixels() {
        let x = [x0[0] + s[0], x0[1] + s[1]];
        let phase = k * dot2(x, x) / (2.0 * d1) - k * dot2(x, coupling);
        integral += a * Complex64::from_polar(1.0, phase);
    }
    integral *= w;

    let prefactor_phase = k * (d1 + d2 + f) - k * dot2(x_detector, x_detector) / (2.0 * f)
        * (d2 / f - 1.0)
        + k * dot2(x_crystal, x_crystal) / (2.0 * d1);
    system.spectral_filter.transmission(omega)
        * Complex64::from_polar(1.0, prefactor_phase)
        * integral
}

/// System transfer function H(x_detector, q; omega): the bracketed
/// diffraction factor (propagation phases, lens chirp, pupil transform at
/// (omega/(c f)) x_detector - q) times the spectral filter F(omega).
pub fn transfer_function(
    x_detector: [f64; 2],
    q: [f64; 2],
    omega: f64,
    system: &OpticalSystemSpec,
    arm: Arm,
) -> Complex64 {
    let (d1, d2, f) = (system.d1_mm, system.d2_mm, system.f_mm);
    let k = omega / C_MM_FS;
    let u = [
        omega / (C_MM_FS * f) * x_detector[0] - q[0],
        omega / (C_MM_FS * f) * x_detector[1] - q[1],
    ];
    let phase = k * (d1 + d2 + f)
        - k * dot2(x_detector, x_detector) / (2.0 * f) * (d2 / f - 1.0)
        - C_MM_FS * d1 / (2.0 * omega) * dot2(q, q);
    system.spectral_filter.transmission(omega)
        * Complex64::from_polar(1.0, phase)
        * pupil_transform(system.aperture(arm), u)
}

/// Shifted-aperture modulation factor for the visibility:
/// cos[(omega_p0 L M)/(4 c d1) * (2 tau / L D) * e2.(s_A - s_B)].
pub fn shift_modulation(
    tau_fs: f64,
    s_a: [f64; 2],
    s_b: [f64; 2],
    params: &DispersionParams,
    l_mm: f64,
    d1_mm: f64,
) -> f64 {
    let ld = params.support_fs(l_mm);
    let kappa = params.omega_p0 * l_mm * params.m / (4.0 * C_MM_FS * d1_mm);
    (kappa * (2.0 * tau_fs / ld) * (s_a[1] - s_b[1])).cos()
}
