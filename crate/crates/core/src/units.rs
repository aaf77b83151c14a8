//! Unit conventions and conversions.
//!
//! Internal unit system throughout the crate: lengths in mm, times in fs,
//! angular frequencies in rad/fs. Group-delay mismatch D then comes out in
//! fs/mm and transverse wavevectors in 1/mm.

/// Speed of light in vacuum, mm/fs.
pub const C_MM_FS: f64 = 2.99792458e-4;

/// Speed of light in vacuum, um/fs (for Sellmeier evaluations).
pub const C_UM_FS: f64 = 0.299792458;

/// Angular frequency (rad/fs) of a vacuum wavelength given in nm.
pub fn omega_from_nm(lambda_nm: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_MM_FS / (lambda_nm * 1.0e-6)
}

/// Vacuum wavelength in um of an angular frequency in rad/fs.
pub fn lambda_um_from_omega(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_UM_FS / omega
}

/// Vacuum wavelength in nm of an angular frequency in rad/fs.
pub fn lambda_nm_from_omega(omega: f64) -> f64 {
    1.0e3 * lambda_um_from_omega(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn round_trip() {
        let w = omega_from_nm(702.2);
        assert_relative_eq!(lambda_nm_from_omega(w), 702.2, max_relative = 1e-12);
    }

    #[test]
    fn known_pump_frequency() {
        // 351.1-nm argon-ion line
        assert_relative_eq!(omega_from_nm(351.1), 5.364998, max_relative = 1e-5);
    }
}
