//! Small numerical toolbox: special functions, window functions and
//! 2-vector helpers shared across the crate.

pub mod bessel;
pub mod quad;

/// sinc(x) = sin(x)/x with sinc(0) = 1 (unnormalized convention).
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1.0e-8 {
        // sin(x)/x = 1 - x^2/6 + O(x^4); below 1e-8 the quadratic term is < 1e-17
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Triangle function: 1 - |x| on [-1, 1], zero outside.
pub fn triangle(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        1.0 - a
    } else {
        0.0
    }
}

/// Dot product of transverse 2-vectors (e1, e2 components).
pub fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Euclidean norm of a transverse 2-vector.
pub fn norm2(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Rotate a 2-vector by `angle` (counterclockwise, e1 toward e2).
pub fn rot2(a: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * a[0] - s * a[1], s * a[0] + c * a[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert_relative_eq!(sinc(std::f64::consts::PI), 0.0, epsilon = 1e-15);
        assert_relative_eq!(sinc(1.0), 1.0_f64.sin(), max_relative = 1e-15);
        // small-argument branch consistent with the direct formula
        assert_relative_eq!(sinc(1.0e-8), (1.0e-8_f64).sin() / 1.0e-8, epsilon = 1e-15);
    }

    #[test]
    fn triangle_shape() {
        assert_eq!(triangle(0.0), 1.0);
        assert_eq!(triangle(1.0), 0.0);
        assert_eq!(triangle(-1.0), 0.0);
        assert_eq!(triangle(2.0), 0.0);
        assert_eq!(triangle(0.25), 0.75);
        assert_eq!(triangle(-0.25), 0.75);
    }

    #[test]
    fn rotation_quarter_turn() {
        let r = rot2([1.0, 0.0], std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(r[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(r[1], 1.0, epsilon = 1e-15);
    }
}
