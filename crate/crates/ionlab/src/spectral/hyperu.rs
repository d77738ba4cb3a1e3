//! Confluent hypergeometric function of the second kind, restricted to the
//! two parameter pairs the survival closed forms need.
//!
//! `U(a, b; z)` is evaluated from its integral representation
//!
//! ```text
//! U(a, b; z) = Gamma(a)^-1 int_0^inf e^{-z t} t^{a-1} (1+t)^{b-a-1} dt
//! ```
//!
//! with the integration ray rotated to `t = e^{-i pi/4} s` so that the purely
//! imaginary arguments `z = i y` used here become exponentially damped. The
//! supported domain is `a = 3/2`, `b in {-3/2, 1/2}`, `z = i y` with `y >= 0`;
//! anything else is an explicit unsupported-domain error, not a silent
//! fallback.

use super::SpectralError;
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

/// `Gamma(half * 1/2)` for positive half-integers, as exact sqrt(pi) products.
pub fn gamma_half(two_x: u32) -> f64 {
    assert!(two_x > 0, "need a positive half-integer argument");
    if two_x % 2 == 0 {
        // integer n: (n-1)!
        let n = two_x / 2;
        (1..n).map(|k| k as f64).product()
    } else {
        // Gamma(1/2) = sqrt(pi), Gamma(x+1) = x Gamma(x)
        let mut g = PI.sqrt();
        let mut k = 1;
        while k < two_x {
            g *= k as f64 / 2.0;
            k += 2;
        }
        g
    }
}

fn supported(a: f64, b: f64) -> bool {
    a == 1.5 && (b == -1.5 || b == 0.5)
}

/// Restricted `U(a, b; z)`; see the module docs for the supported domain.
pub fn hyperu(a: f64, b: f64, z: Complex64) -> Result<Complex64, SpectralError> {
    if !supported(a, b) {
        return Err(SpectralError::UnsupportedDomain {
            a,
            b,
            reason: "only U(3/2, -3/2; iy) and U(3/2, 1/2; iy) are implemented",
        });
    }
    if z.re != 0.0 || !(z.im >= 0.0) || !z.im.is_finite() {
        return Err(SpectralError::UnsupportedDomain {
            a,
            b,
            reason: "argument must be i*y with finite y >= 0",
        });
    }
    let y = z.im;
    if y == 0.0 {
        // U(a, b, 0) = Gamma(1-b)/Gamma(a+1-b), valid for Re b < 1
        let value = if b == -1.5 {
            gamma_half(5) / gamma_half(8) // Gamma(5/2)/Gamma(4) = sqrt(pi)/8
        } else {
            gamma_half(1) / gamma_half(4) // Gamma(1/2)/Gamma(2) = sqrt(pi)
        };
        return Ok(Complex64::new(value, 0.0));
    }

    // (1+t)^(b-a-1) has integer exponent -4 or -2 on the supported pairs
    let power: i32 = if b == -1.5 { -4 } else { -2 };
    let ray = Complex64::from_polar(1.0, -FRAC_PI_4);
    let damp = y / std::f64::consts::SQRT_2;

    // substitute s = u^2 to absorb the sqrt(t) endpoint singularity; beyond
    // damp * u^2 = 92 the integrand is below 1e-40 of its peak
    let u_max = (92.0 / damp).sqrt();
    let integrand = |u: f64| -> Complex64 {
        let s = u * u;
        let t = ray * s;
        let phase = Complex64::new(-damp * s, -damp * s).exp();
        let sqrt_t = Complex64::from_polar(s.sqrt(), -FRAC_PI_8);
        let alg = (Complex64::new(1.0, 0.0) + t).powi(power);
        2.0 * u * phase * sqrt_t * alg
    };
    let result = quad::adaptive_complex(&integrand, 0.0, u_max, 1e-12, 1e-16)
        .map_err(SpectralError::from)?;
    if result.error > 1e-10 {
        return Err(SpectralError::Accuracy {
            estimate: result.error,
        });
    }
    Ok(ray * result.value / gamma_half(3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_exact_values() {
        assert_eq!(gamma_half(2), 1.0); // Gamma(1)
        assert_eq!(gamma_half(8), 6.0); // Gamma(4)
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15); // Gamma(5/2)
        assert!((gamma_half(3) - 0.5 * PI.sqrt()).abs() < 1e-15); // Gamma(3/2)
    }

    #[test]
    fn value_at_zero_argument() {
        let u1 = hyperu(1.5, -1.5, Complex64::new(0.0, 0.0)).unwrap();
        assert!((u1.re - PI.sqrt() / 8.0).abs() < 1e-15);
        let u2 = hyperu(1.5, 0.5, Complex64::new(0.0, 0.0)).unwrap();
        assert!((u2.re - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unsupported_parameters() {
        assert!(hyperu(1.0, 0.5, Complex64::new(0.0, 1.0)).is_err());
        assert!(hyperu(1.5, 0.25, Complex64::new(0.0, 1.0)).is_err());
        assert!(hyperu(1.5, 0.5, Complex64::new(1.0, 1.0)).is_err());
        assert!(hyperu(1.5, 0.5, Complex64::new(0.0, -1.0)).is_err());
    }
}
