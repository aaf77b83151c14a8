use thiserror::Error;

/// Errors produced by the simulator core.
#[derive(Debug, Error)]
pub enum Error {
    /// A wavelength fell outside the transparency window of a dispersion model.
    #[error("{material}: wavelength {wavelength_um} um outside transparency window [{lo_um}, {hi_um}] um")]
    OutOfWindow {
        material: &'static str,
        wavelength_um: f64,
        lo_um: f64,
        hi_um: f64,
    },

    /// |q| >= n*omega/c: the requested transverse wavevector does not propagate.
    #[error("evanescent mode: |q| = {q_mag} 1/mm exceeds n*omega/c = {k_mag} 1/mm")]
    Evanescent { q_mag: f64, k_mag: f64 },

    /// A domain-type constructor rejected its inputs.
    #[error("invalid {what}: {why}")]
    InvalidSpec { what: &'static str, why: String },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge in {context}: requested {requested:.3e}, achieved {achieved:.3e} after {evals} evaluations")]
    QuadratureNoConvergence {
        context: &'static str,
        requested: f64,
        achieved: f64,
        evals: usize,
    },

    /// A bracketed root solve found no sign change inside its bracket.
    #[error("no bracketed root in {context} over [{lo}, {hi}]")]
    NoBracketedRoot {
        context: &'static str,
        lo: f64,
        hi: f64,
    },

    /// A discrete grid violates a sampling requirement of the direct integrator.
    #[error("grid diagnostic in {context}: {detail} (phase step {phase_step:.3} rad exceeds pi)")]
    NyquistViolation {
        context: &'static str,
        detail: String,
        phase_step: f64,
    },

    /// Malformed coefficient table or mask grid file.
    #[error("parse error in {what} at line {line}: {why}")]
    Parse {
        what: &'static str,
        line: usize,
        why: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
