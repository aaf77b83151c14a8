//! Adaptive Simpson quadrature for real- and complex-valued integrands.
//!
//! The integrands in this crate (spectral averages, two-photon kernel line
//! integrals) are smooth with at most mild oscillation, so recursive
//! Simpson with Richardson error control is enough. Every result carries
//! the accumulated error estimate; exceeding the recursion budget is a
//! hard error rather than a silent degradation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Quadrature outcome: value plus the accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quad<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Ctl {
    tol: f64,
    max_depth: usize,
    evals: usize,
    err: f64,
    span: f64,
}

fn simpson_c(a: f64, fa: Complex64, b: f64, fb: Complex64, fm: Complex64) -> Complex64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt_c(
    f: &mut dyn FnMut(f64) -> Complex64,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    fm: Complex64,
    whole: Complex64,
    depth: usize,
    ctl: &mut Ctl,
) -> Option<Complex64> {
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    ctl.evals += 2;
    let left = simpson_c(a, fa, m, fm, flm);
    let right = simpson_c(m, fm, b, fb, frm);
    let delta = left + right - whole;
    let local_tol = 15.0 * ctl.tol * ((b - a).abs() / ctl.span);
    if delta.norm() <= local_tol {
        ctl.err += delta.norm() / 15.0;
        return Some(left + right + delta / 15.0);
    }
    if depth >= ctl.max_depth {
        return None;
    }
    let l = adapt_c(f, a, fa, m, fm, flm, left, depth + 1, ctl)?;
    let r = adapt_c(f, m, fm, b, fb, frm, right, depth + 1, ctl)?;
    Some(l + r)
}

/// Integrate a complex-valued function over [a, b] to absolute tolerance `tol`.
pub fn integrate_complex<F>(mut f: F, a: f64, b: f64, tol: f64, context: &'static str) -> Result<Quad<Complex64>>
where
    F: FnMut(f64) -> Complex64,
{
    if a == b {
        return Ok(Quad { value: Complex64::new(0.0, 0.0), error_estimate: 0.0, evaluations: 0 });
    }
    let mut ctl = Ctl { tol, max_depth: 48, evals: 3, err: 0.0, span: (b - a).abs() };
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson_c(a, fa, b, fb, fm);
    match adapt_c(&mut f, a, fa, b, fb, fm, whole, 0, &mut ctl) {
        Some(value) => Ok(Quad { value, error_estimate: ctl.err, evaluations: ctl.evals }),
        None => Err(Error::QuadratureNoConvergence {
            context,
            requested: tol,
            achieved: ctl.err.max(tol),
            evals: ctl.evals,
        }),
    }
}

/// Integrate a real-valued function over [a, b] to absolute tolerance `tol`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, context: &'static str) -> Result<Quad<f64>>
where
    F: FnMut(f64) -> f64,
{
    let q = integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, tol, context)?;
    Ok(Quad { value: q.value.re, error_estimate: q.error_estimate, evaluations: q.evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12, "test").unwrap();
        assert_relative_eq!(q.value, 8.0, max_relative = 1e-12);
    }

    #[test]
    fn oscillatory() {
        let q = integrate(|x| (10.0 * x).sin(), 0.0, 1.0, 1e-12, "test").unwrap();
        let exact = (1.0 - (10.0_f64).cos()) / 10.0;
        assert_relative_eq!(q.value, exact, max_relative = 1e-10);
        assert!(q.error_estimate < 1e-10);
    }

    #[test]
    fn complex_phase() {
        let q = integrate_complex(
            |x| Complex64::new(0.0, 2.5 * x).exp(),
            -1.0,
            1.0,
            1e-12,
            "test",
        )
        .unwrap();
        // int e^{i a x} dx over [-1,1] = 2 sin(a)/a
        assert_relative_eq!(q.value.re, 2.0 * (2.5_f64).sin() / 2.5, max_relative = 1e-10);
        assert_relative_eq!(q.value.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn halved_tolerance_within_estimate() {
        let f = |x: f64| (x * x - 0.3 * x).cos() * (1.0 + x).ln();
        let loose = integrate(f, 0.1, 3.0, 1e-6, "test").unwrap();
        let tight = integrate(f, 0.1, 3.0, 5e-7, "test").unwrap();
        assert!((loose.value - tight.value).abs() <= loose.error_estimate.max(1e-12));
    }

    #[test]
    fn empty_interval() {
        let q = integrate(|_| 1.0, 1.5, 1.5, 1e-12, "test").unwrap();
        assert_eq!(q.value, 0.0);
    }
}
