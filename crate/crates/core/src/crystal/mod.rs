//! Dispersion and phase-matching layer: refractive indices of the nonlinear
//! medium, longitudinal wavenumbers, and the quasi-monochromatic expansion
//! parameters (group slownesses, group-delay mismatch D, walk-off M) that
//! drive the interference engine.
//!
//! Geometry: light propagates along e3; the transverse plane is (e1, e2).
//! The optic axis lies in the (e2, e3) plane, tilted by the cut angle
//! theta_OA from e3 toward +e2, so e2 is the walk-off direction of
//! extraordinary waves and the expansion of kappa_e acquires its linear
//! M e2.q term with M > 0 for this (negative uniaxial) medium.

pub mod sellmeier;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{omega_from_nm, C_MM_FS};

/// Nonlinear media with shipped dispersion data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    Bbo,
}

impl Material {
    fn key_o(self) -> &'static str {
        match self {
            Material::Bbo => "bbo_o",
        }
    }
    fn key_e(self) -> &'static str {
        match self {
            Material::Bbo => "bbo_e",
        }
    }
}

/// Polarization of a propagating mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

/// Crystal description: material, thickness, cut angle, pump wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrystalSpec {
    pub material: Material,
    /// Crystal thickness L, mm.
    pub thickness_mm: f64,
    /// Angle between the optic axis and the longitudinal axis, rad.
    pub cut_angle_rad: f64,
    /// Pump center wavelength, nm.
    pub pump_wavelength_nm: f64,
}

impl CrystalSpec {
    pub fn new(
        material: Material,
        thickness_mm: f64,
        cut_angle_rad: f64,
        pump_wavelength_nm: f64,
    ) -> Result<Self> {
        if !(thickness_mm > 0.0) {
            return Err(Error::InvalidSpec {
                what: "CrystalSpec",
                why: format!("thickness_mm must be > 0, got {thickness_mm}"),
            });
        }
        if !(cut_angle_rad > 0.0 && cut_angle_rad < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidSpec {
                what: "CrystalSpec",
                why: format!("cut_angle_rad must lie in (0, pi/2), got {cut_angle_rad}"),
            });
        }
        if !(pump_wavelength_nm > 0.0) {
            return Err(Error::InvalidSpec {
                what: "CrystalSpec",
                why: format!("pump_wavelength_nm must be > 0, got {pump_wavelength_nm}"),
            });
        }
        Ok(CrystalSpec { material, thickness_mm, cut_angle_rad, pump_wavelength_nm })
    }

    /// Crystal cut for collinear degenerate type-II phase matching: the cut
    /// angle is solved from Delta(0, 0) = 0 with the exact wavenumbers.
    pub fn degenerate_type_ii(
        material: Material,
        thickness_mm: f64,
        pump_wavelength_nm: f64,
    ) -> Result<Self> {
        let theta = phase_matching_angle(material, pump_wavelength_nm)?;
        CrystalSpec::new(material, thickness_mm, theta, pump_wavelength_nm)
    }

    /// True when both the pump and the degenerate down-conversion wavelengths
    /// sit inside the transparency window of the dispersion data.
    pub fn transparency_ok(&self) -> bool {
        let wp = omega_from_nm(self.pump_wavelength_nm);
        index_ordinary(self.material, wp).is_ok() && index_ordinary(self.material, wp / 2.0).is_ok()
    }

    pub fn pump_omega(&self) -> f64 {
        omega_from_nm(self.pump_wavelength_nm)
    }
}

/// Quasi-monochromatic expansion parameters at the degenerate frequency.
///
/// All derivatives are taken at omega_p0/2 (pump quantities at omega_p0),
/// q = 0, for the cut angle stored in the generating [`CrystalSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    /// Ordinary / extraordinary wavenumbers at the degenerate frequency, 1/mm.
    pub k_o: f64,
    pub k_e: f64,
    /// Group velocities, mm/fs.
    pub u_o: f64,
    pub u_e: f64,
    pub u_p: f64,
    /// Group-delay mismatch D = 1/u_o - 1/u_e, fs/mm.
    pub d: f64,
    /// Pump-to-mean-daughter mismatch D+ = 1/u_p - (1/u_o + 1/u_e)/2, fs/mm.
    pub d_plus: f64,
    /// Spatial walk-off |d ln n_e / d theta| at the degenerate frequency.
    pub m: f64,
    /// Same at the pump frequency.
    pub m_p: f64,
    /// Pump center angular frequency, rad/fs.
    pub omega_p0: f64,
}

impl DispersionParams {
    /// Dip support width L*D in fs for a crystal of thickness `l_mm`.
    pub fn support_fs(&self, l_mm: f64) -> f64 {
        l_mm * self.d
    }
}

/// Ordinary refractive index.
pub fn index_ordinary(material: Material, omega: f64) -> Result<f64> {
    sellmeier::index_checked(material.key_o(), omega)
}

/// Principal extraordinary index (propagation perpendicular to the optic axis).
pub fn index_extraordinary_principal(material: Material, omega: f64) -> Result<f64> {
    sellmeier::index_checked(material.key_e(), omega)
}

/// Extraordinary index for propagation at angle `theta` from the optic axis:
/// 1/n^2(theta) = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
pub fn index_extraordinary(material: Material, omega: f64, theta: f64) -> Result<f64> {
    let no = index_ordinary(material, omega)?;
    let ne = index_extraordinary_principal(material, omega)?;
    let (s, c) = theta.sin_cos();
    let inv2 = (c / no).powi(2) + (s / ne).powi(2);
    Ok(1.0 / inv2.sqrt())
}

/// |d ln n_e(omega, theta) / d theta|, the spatial walk-off parameter.
///
/// Analytic form: (n^2(theta)/2) sin(2 theta) |1/n_e^2 - 1/n_o^2|.
pub fn walkoff_log_derivative(material: Material, omega: f64, theta: f64) -> Result<f64> {
    let no = index_ordinary(material, omega)?;
    let ne = index_extraordinary_principal(material, omega)?;
    let nth = index_extraordinary(material, omega, theta)?;
    Ok((nth * nth / 2.0) * (2.0 * theta).sin() * (1.0 / (ne * ne) - 1.0 / (no * no)).abs())
}

/// Longitudinal wavenumber kappa for a transverse wavevector `q` = (q1, q2).
///
/// For ordinary waves kappa^2 + |q|^2 = (n_o w/c)^2 directly. For
/// extraordinary waves the index depends on the propagation angle, which
/// depends on kappa; the fixed point is found by iteration (the angular
/// dependence is weak, a handful of passes reach 1e-15).
pub fn kappa(
    material: Material,
    theta_oa: f64,
    pol: Polarization,
    omega: f64,
    q: [f64; 2],
) -> Result<f64> {
    let q2 = q[0] * q[0] + q[1] * q[1];
    match pol {
        Polarization::Ordinary => {
            let k = index_ordinary(material, omega)? * omega / C_MM_FS;
            let kz2 = k * k - q2;
            if kz2 <= 0.0 {
                return Err(Error::Evanescent { q_mag: q2.sqrt(), k_mag: k });
            }
            Ok(kz2.sqrt())
        }
        Polarization::Extraordinary => {
            // initial guess: index at the cut angle
            let mut n = index_extraordinary(material, omega, theta_oa)?;
            let mut kz = {
                let k = n * omega / C_MM_FS;
                let kz2 = k * k - q2;
                if kz2 <= 0.0 {
                    return Err(Error::Evanescent { q_mag: q2.sqrt(), k_mag: k });
                }
                kz2.sqrt()
            };
            let (s_oa, c_oa) = theta_oa.sin_cos();
            for _ in 0..60 {
                let k_mag = (kz * kz + q2).sqrt();
                // cos(theta) = k_hat . c_hat with c_hat = sin(theta_OA) e2 + cos(theta_OA) e3
                let cos_th = ((q[1] * s_oa + kz * c_oa) / k_mag).clamp(-1.0, 1.0);
                let theta = cos_th.acos();
                n = index_extraordinary(material, omega, theta)?;
                let k = n * omega / C_MM_FS;
                let kz2 = k * k - q2;
                if kz2 <= 0.0 {
                    return Err(Error::Evanescent { q_mag: q2.sqrt(), k_mag: k });
                }
                let next = kz2.sqrt();
                if (next - kz).abs() <= 1.0e-13 * kz.abs() {
                    kz = next;
                    break;
                }
                kz = next;
            }
            Ok(kz)
        }
    }
}

/// Collinear degenerate type-II phase-matching angle: the cut angle solving
/// kappa_p(omega_p) = kappa_o(omega_p/2) + kappa_e(omega_p/2) at q = 0,
/// i.e. 2 n_e(omega_p, theta) = n_o(omega_p/2) + n_e(omega_p/2, theta).
pub fn phase_matching_angle(material: Material, pump_wavelength_nm: f64) -> Result<f64> {
    let wp = omega_from_nm(pump_wavelength_nm);
    let wd = wp / 2.0;
    let no_d = index_ordinary(material, wd)?;
    let f = |theta: f64| -> Result<f64> {
        Ok(2.0 * index_extraordinary(material, wp, theta)? - no_d
            - index_extraordinary(material, wd, theta)?)
    };
    let mut lo = 1.0e-6;
    let mut hi = std::f64::consts::FRAC_PI_2 - 1.0e-6;
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo * fhi > 0.0 {
        return Err(Error::NoBracketedRoot { context: "phase_matching_angle", lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Group slowness d kappa/d omega at q = 0 (fs/mm) from the analytic index
/// derivatives: (n + omega dn/domega)/c.
fn group_slowness(material: Material, pol: Polarization, theta: f64, omega: f64) -> Result<f64> {
    match pol {
        Polarization::Ordinary => {
            let n = index_ordinary(material, omega)?;
            let dn = sellmeier::dindex_domega_checked(material.key_o(), omega)?;
            Ok((n + omega * dn) / C_MM_FS)
        }
        Polarization::Extraordinary => {
            let no = index_ordinary(material, omega)?;
            let ne = index_extraordinary_principal(material, omega)?;
            let nth = index_extraordinary(material, omega, theta)?;
            let dno = sellmeier::dindex_domega_checked(material.key_o(), omega)?;
            let dne = sellmeier::dindex_domega_checked(material.key_e(), omega)?;
            let (s, c) = theta.sin_cos();
            // d n(theta)/dw = n(theta)^3 [cos^2 dno/no^3 + sin^2 dne/ne^3]
            let dnth = nth.powi(3) * ((c * c) * dno / no.powi(3) + (s * s) * dne / ne.powi(3));
            Ok((nth + omega * dnth) / C_MM_FS)
        }
    }
}

/// All expansion parameters for a crystal: wavenumbers, group velocities,
/// D, D+, walk-off M and M_p, and the pump frequency.
pub fn dispersion_params(spec: &CrystalSpec) -> Result<DispersionParams> {
    let wp = spec.pump_omega();
    let wd = wp / 2.0;
    let th = spec.cut_angle_rad;
    let mat = spec.material;

    let k_o = index_ordinary(mat, wd)? * wd / C_MM_FS;
    let k_e = index_extraordinary(mat, wd, th)? * wd / C_MM_FS;

    let s_o = group_slowness(mat, Polarization::Ordinary, th, wd)?;
    let s_e = group_slowness(mat, Polarization::Extraordinary, th, wd)?;
    let s_p = group_slowness(mat, Polarization::Extraordinary, th, wp)?;

    let d = s_o - s_e;
    let d_plus = s_p - 0.5 * (s_o + s_e);
    let m = walkoff_log_derivative(mat, wd, th)?;
    let m_p = walkoff_log_derivative(mat, wp, th)?;

    Ok(DispersionParams {
        k_o,
        k_e,
        u_o: 1.0 / s_o,
        u_e: 1.0 / s_e,
        u_p: 1.0 / s_p,
        d,
        d_plus,
        m,
        m_p,
        omega_p0: wp,
    })
}

/// Quasi-monochromatic paraxial phase mismatch:
/// Delta = -D nu + 2 c |q|^2 / omega_p0 + M e2.q   (1/mm).
///
/// `nu` is the angular-frequency offset from degeneracy (rad/fs), `q` the
/// signal transverse wavevector (1/mm). Validity flags are reported by
/// [`mismatch_flags`]; the value itself is always computed.
pub fn delta_mismatch(nu: f64, q: [f64; 2], params: &DispersionParams) -> f64 {
    let q2 = q[0] * q[0] + q[1] * q[1];
    -params.d * nu + 2.0 * C_MM_FS * q2 / params.omega_p0 + params.m * q[1]
}

/// Validity flags for the quasi-monochromatic, paraxial expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MismatchFlags {
    /// |nu| <= 0.2 * omega_p0/2.
    pub quasi_monochromatic: bool,
    /// |q|^2 <= 0.04 * K_o^2 (|q| within 20% of the total wavenumber).
    pub paraxial: bool,
}

pub fn mismatch_flags(nu: f64, q: [f64; 2], params: &DispersionParams) -> MismatchFlags {
    let q2 = q[0] * q[0] + q[1] * q[1];
    MismatchFlags {
        quasi_monochromatic: nu.abs() <= 0.2 * params.omega_p0 / 2.0,
        paraxial: q2 <= 0.04 * params.k_o * params.k_o,
    }
}

/// Exact mismatch kappa_p - kappa_o - kappa_e for the collinear degenerate
/// pairing, with (nu, q) the ordinary photon's frequency offset and
/// transverse wavevector (the extraordinary photon carries -nu, -q; the
/// pump is extraordinary on axis). Used to validate [`delta_mismatch`],
/// which uses the same labeling.
pub fn delta_exact(spec: &CrystalSpec, nu: f64, q: [f64; 2]) -> Result<f64> {
    let wp = spec.pump_omega();
    let th = spec.cut_angle_rad;
    let kp = kappa(spec.material, th, Polarization::Extraordinary, wp, [0.0, 0.0])?;
    let ko = kappa(spec.material, th, Polarization::Ordinary, wp / 2.0 + nu, q)?;
    let ke = kappa(spec.material, th, Polarization::Extraordinary, wp / 2.0 - nu, [-q[0], -q[1]])?;
    Ok(kp - ko - ke)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bbo351() -> CrystalSpec {
        CrystalSpec::degenerate_type_ii(Material::Bbo, 1.5, 351.0).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CrystalSpec::new(Material::Bbo, -1.0, 0.8, 351.0).is_err());
        assert!(CrystalSpec::new(Material::Bbo, 1.5, 2.0, 351.0).is_err());
        assert!(CrystalSpec::new(Material::Bbo, 1.5, 0.8, 351.0).is_ok());
        assert!(bbo351().transparency_ok());
    }

    #[test]
    fn phase_matching_angle_references() {
        // collinear degenerate type-II BBO cuts
        let th351 = phase_matching_angle(Material::Bbo, 351.0).unwrap();
        assert_relative_eq!(th351.to_degrees(), 49.22, max_relative = 2e-3);
        let th415 = phase_matching_angle(Material::Bbo, 415.0).unwrap();
        assert_relative_eq!(th415.to_degrees(), 40.75, max_relative = 2e-3);
    }

    #[test]
    fn normal_dispersion_ordering() {
        let w_uv = omega_from_nm(351.1);
        let w_red = omega_from_nm(702.2);
        let n_uv = index_ordinary(Material::Bbo, w_uv).unwrap();
        let n_red = index_ordinary(Material::Bbo, w_red).unwrap();
        assert!(n_uv > n_red);
    }

    #[test]
    fn extraordinary_endpoints() {
        let w = omega_from_nm(702.0);
        let n0 = index_extraordinary(Material::Bbo, w, 0.0).unwrap();
        let n90 = index_extraordinary(Material::Bbo, w, std::f64::consts::FRAC_PI_2).unwrap();
        assert_relative_eq!(n0, index_ordinary(Material::Bbo, w).unwrap(), max_relative = 1e-14);
        assert_relative_eq!(
            n90,
            index_extraordinary_principal(Material::Bbo, w).unwrap(),
            max_relative = 1e-14
        );
        // monotone in between for the negative uniaxial medium
        let mut prev = n0;
        for i in 1..=8 {
            let n = index_extraordinary(Material::Bbo, w, i as f64 * 0.19).unwrap();
            assert!(n < prev);
            prev = n;
        }
    }

    #[test]
    fn walkoff_matches_paper_values() {
        let spec = bbo351();
        let m = walkoff_log_derivative(Material::Bbo, spec.pump_omega() / 2.0, spec.cut_angle_rad)
            .unwrap();
        assert!((m - 0.0711).abs() < 5.0e-4);
    }

    #[test]
    fn dispersion_anchor_values() {
        let p = dispersion_params(&bbo351()).unwrap();
        assert!((p.m - 0.0711).abs() < 7.0e-4, "M = {}", p.m);
        assert!((p.d - 248.0).abs() < 3.0, "D = {}", p.d);
        assert!((p.m_p - 0.0770).abs() < 8.0e-4, "M_p = {}", p.m_p);

        let spec415 = CrystalSpec::degenerate_type_ii(Material::Bbo, 1.5, 415.0).unwrap();
        let p415 = dispersion_params(&spec415).unwrap();
        assert!((p415.m - 0.0723).abs() < 7.0e-4, "M = {}", p415.m);
        assert!((p415.d - 182.0).abs() < 3.0, "D = {}", p415.d);
    }

    #[test]
    fn params_invariants_hold_as_stored() {
        let p = dispersion_params(&bbo351()).unwrap();
        assert_eq!(p.d, 1.0 / p.u_o - 1.0 / p.u_e);
        assert_eq!(p.d_plus, 1.0 / p.u_p - 0.5 * (1.0 / p.u_o + 1.0 / p.u_e));
        for u in [p.u_o, p.u_e, p.u_p] {
            assert!(u > 0.0 && u < C_MM_FS);
        }
    }

    #[test]
    fn chain_consistency_with_kappa_differences() {
        // group slownesses from dispersion_params reproduce central
        // differences of kappa at relative step 1e-6 within 1e-6 relative
        let spec = bbo351();
        let p = dispersion_params(&spec).unwrap();
        let wd = spec.pump_omega() / 2.0;
        let h = wd * 1.0e-6;
        let fd = |pol: Polarization, w: f64| {
            let a = kappa(spec.material, spec.cut_angle_rad, pol, w + h, [0.0, 0.0]).unwrap();
            let b = kappa(spec.material, spec.cut_angle_rad, pol, w - h, [0.0, 0.0]).unwrap();
            (a - b) / (2.0 * h)
        };
        assert_relative_eq!(fd(Polarization::Ordinary, wd), 1.0 / p.u_o, max_relative = 1e-6);
        assert_relative_eq!(fd(Polarization::Extraordinary, wd), 1.0 / p.u_e, max_relative = 1e-6);
        assert_relative_eq!(
            fd(Polarization::Extraordinary, spec.pump_omega()),
            1.0 / p.u_p,
            max_relative = 1e-6
        );
    }

    #[test]
    fn kappa_on_axis_and_pythagoras() {
        let spec = bbo351();
        let w = spec.pump_omega() / 2.0;
        let k0 = kappa(spec.material, spec.cut_angle_rad, Polarization::Ordinary, w, [0.0, 0.0])
            .unwrap();
        let n = index_ordinary(spec.material, w).unwrap();
        assert_relative_eq!(k0, n * w / C_MM_FS, max_relative = 1e-14);

        // kappa^2 + |q|^2 = (n w/c)^2 with the angle-consistent index
        let q = [0.3, 0.8];
        let ke = kappa(spec.material, spec.cut_angle_rad, Polarization::Extraordinary, w, q)
            .unwrap();
        let k_mag = (ke * ke + q[0] * q[0] + q[1] * q[1]).sqrt();
        let (s, c) = spec.cut_angle_rad.sin_cos();
        let cos_th = (q[1] * s + ke * c) / k_mag;
        let n_th = index_extraordinary(spec.material, w, cos_th.acos()).unwrap();
        assert_relative_eq!(k_mag, n_th * w / C_MM_FS, max_relative = 1e-12);
    }

    #[test]
    fn kappa_evanescent_rejected() {
        let spec = bbo351();
        let w = spec.pump_omega() / 2.0;
        let k = index_ordinary(spec.material, w).unwrap() * w / C_MM_FS;
        let q = [k * 1.01, 0.0];
        assert!(matches!(
            kappa(spec.material, spec.cut_angle_rad, Polarization::Ordinary, w, q),
            Err(Error::Evanescent { .. })
        ));
    }

    #[test]
    fn kappa_expansion_coefficients() {
        // finite differences of exact kappa reproduce the B-expansion terms:
        // d kappa_o/d omega = 1/u_o, d^2 kappa_o/d q^2 = -1/K_o, and the
        // linear e2 walk-off slope of kappa_e equals +M.
        let spec = bbo351();
        let p = dispersion_params(&spec).unwrap();
        let wd = spec.pump_omega() / 2.0;
        let th = spec.cut_angle_rad;

        // steps sized so the kappa differences clear f64 cancellation noise
        // (kappa ~ 1.5e4 1/mm)
        let hq = 1.0;
        let ko = |q: [f64; 2]| kappa(spec.material, th, Polarization::Ordinary, wd, q).unwrap();
        let curv = (ko([hq, 0.0]) - 2.0 * ko([0.0, 0.0]) + ko([-hq, 0.0])) / (hq * hq);
        assert_relative_eq!(curv, -1.0 / p.k_o, max_relative = 1e-4);

        let hs = 0.1;
        let ke = |q: [f64; 2]| {
            kappa(spec.material, th, Polarization::Extraordinary, wd, q).unwrap()
        };
        let slope = (ke([0.0, hs]) - ke([0.0, -hs])) / (2.0 * hs);
        assert_relative_eq!(slope, p.m, max_relative = 1e-5);
        // no linear term along e1
        let slope1 = (ke([hs, 0.0]) - ke([-hs, 0.0])) / (2.0 * hs);
        assert!(slope1.abs() < 1e-9);
    }

    #[test]
    fn delta_mismatch_structure() {
        let spec = bbo351();
        let p = dispersion_params(&spec).unwrap();
        // degenerate collinear point
        assert_eq!(delta_mismatch(0.0, [0.0, 0.0], &p), 0.0);
        // pure frequency offset
        let nu = 0.02;
        assert_relative_eq!(delta_mismatch(nu, [0.0, 0.0], &p), -p.d * nu, max_relative = 1e-15);
        // linear in nu at fixed q
        let q = [0.1, 0.4];
        let d1 = delta_mismatch(0.01, q, &p) - delta_mismatch(0.0, q, &p);
        let d2 = delta_mismatch(0.02, q, &p) - delta_mismatch(0.01, q, &p);
        assert_relative_eq!(d1, d2, max_relative = 1e-10);
    }

    #[test]
    fn delta_mismatch_against_exact_kappas() {
        // The approximate Delta reproduces the exact kappa difference up to
        // the expansion residual. The nu-linear and e2-linear q terms match
        // to high order; the |q|^2 coefficient of the printed form is
        // 2c/omega_p0, which differs from the exact curvature
        // (c/omega_p0)(1/n_o + 1/n_e) by a known offset that we budget for.
        let spec = bbo351();
        let p = dispersion_params(&spec).unwrap();
        let wd = spec.pump_omega() / 2.0;
        let no = index_ordinary(spec.material, wd).unwrap();
        let neth = index_extraordinary(spec.material, wd, spec.cut_angle_rad).unwrap();
        let q2_coeff_gap =
            (2.0 * C_MM_FS / p.omega_p0 - C_MM_FS / p.omega_p0 * (1.0 / no + 1.0 / neth)).abs();

        let mut worst: f64 = 0.0;
        for i in -3..=3 {
            for j in -3..=3 {
                let nu = i as f64 * 0.004;
                let q = [0.0, j as f64 * 0.15];
                let exact = delta_exact(&spec, nu, q).unwrap();
                let approx = delta_mismatch(nu, q, &p);
                let q2 = q[1] * q[1];
                // residual budget: known q^2 coefficient gap plus higher orders
                let budget = q2_coeff_gap * q2
                    + 2.0e2 * nu * nu
                    + 1.0 * nu.abs() * q2.sqrt()
                    + 0.5 * q2 * q2.sqrt();
                worst = worst.max((exact - approx).abs() - budget);
            }
        }
        assert!(worst <= 1.0e-4, "residual above budget by {worst}");
    }
}
