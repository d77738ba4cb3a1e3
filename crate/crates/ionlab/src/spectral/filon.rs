//! Filon-type quadrature for Fourier integrals of the spectral density.
//!
//! Computes `int_0^L mu'(lambda) e^{-i lambda tau} d lambda` by interpolating
//! the density with a quintic polynomial per panel and integrating the
//! oscillatory factor exactly through moment recurrences, so the panel size
//! follows the smoothness of the density rather than the oscillation. The
//! square-root cusp of the density at `lambda = 0` is absorbed by a
//! `lambda = v^2` substitution on the first panel.

use super::SpectralError;
use crate::quad;
use num_complex::Complex64;

const NODES_PER_PANEL: usize = 6;

/// Moments `m_k(theta) = int_0^1 x^k e^{-i theta x} dx` for `k < NODES_PER_PANEL`.
fn moments(theta: f64) -> [Complex64; NODES_PER_PANEL] {
    let mut m = [Complex64::new(0.0, 0.0); NODES_PER_PANEL];
    if theta.abs() < 0.5 {
        // Taylor series in theta, absolutely convergent and cancellation-free
        for (k, mk) in m.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut sum = term / (k as f64 + 1.0);
            let mut j = 1.0;
            loop {
                term *= Complex64::new(0.0, -theta) / j;
                let add = term / (k as f64 + j + 1.0);
                sum += add;
                if add.norm() < 1e-18 {
                    break;
                }
                j += 1.0;
            }
            *mk = sum;
        }
    } else {
        let itheta = Complex64::new(0.0, theta);
        let e = (-itheta).exp();
        m[0] = (Complex64::new(1.0, 0.0) - e) / itheta;
        for k in 1..NODES_PER_PANEL {
            m[k] = (k as f64 * m[k - 1] - e) / itheta;
        }
    }
    m
}

/// Newton divided differences to power-basis coefficients on `[0, 1]`.
fn interpolate_coeffs(xs: &[f64; NODES_PER_PANEL], ys: &[f64; NODES_PER_PANEL]) -> [f64; NODES_PER_PANEL] {
    let mut dd = *ys;
    for level in 1..NODES_PER_PANEL {
        for i in (level..NODES_PER_PANEL).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // expand the Newton form incrementally
    let mut coeffs = [0.0; NODES_PER_PANEL];
    for i in (0..NODES_PER_PANEL).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = [0.0; NODES_PER_PANEL];
        for k in (1..NODES_PER_PANEL).rev() {
            next[k] = coeffs[k - 1] - xs[i] * coeffs[k];
        }
        next[0] = -xs[i] * coeffs[0] + dd[i];
        coeffs = next;
    }
    coeffs
}

fn chebyshev_nodes() -> [f64; NODES_PER_PANEL] {
    let mut xs = [0.0; NODES_PER_PANEL];
    for (i, x) in xs.iter_mut().enumerate() {
        let angle = std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * NODES_PER_PANEL as f64);
        *x = 0.5 * (1.0 - angle.cos());
    }
    xs
}

/// One Filon panel: `int_a^b f(lambda) e^{-i lambda tau} d lambda`.
fn filon_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tau: f64) -> Complex64 {
    let h = b - a;
    let xs = chebyshev_nodes();
    let mut ys = [0.0; NODES_PER_PANEL];
    for (x, y) in xs.iter().zip(ys.iter_mut()) {
        *y = f(a + h * x);
    }
    let coeffs = interpolate_coeffs(&xs, &ys);
    let m = moments(tau * h);
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, mk) in coeffs.iter().zip(m.iter()) {
        acc += c * mk;
    }
    h * Complex64::from_polar(1.0, -tau * a) * acc
}

/// Adaptive Filon integration of `f(lambda) e^{-i lambda tau}` over `[a, b]`.
/// `scale` anchors the relative tolerance (pass the expected magnitude of the
/// full integral, e.g. 1 for a normalized density).
pub(crate) fn fourier_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tau: f64,
    rel_tol: f64,
    scale: f64,
) -> Result<Complex64, SpectralError> {
    // geometric initial panels track densities that vary on scales
    // proportional to lambda
    let mut edges = vec![a];
    let mut x = a.max(1e-3 * (b - a));
    while x < b {
        edges.push(x);
        x *= 2.0;
    }
    edges.push(b);
    edges.retain(|&e| e >= a && e <= b);
    edges.dedup();

    let mut stack: Vec<(f64, f64, Complex64)> = edges
        .windows(2)
        .map(|w| (w[0], w[1], filon_panel(f, w[0], w[1], tau)))
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut evals = stack.len() * NODES_PER_PANEL;
    while let Some((pa, pb, whole)) = stack.pop() {
        let mid = 0.5 * (pa + pb);
        let left = filon_panel(f, pa, mid, tau);
        let right = filon_panel(f, mid, pb, tau);
        evals += 2 * NODES_PER_PANEL;
        let err = (whole - (left + right)).norm();
        let budget = rel_tol * scale * ((pb - pa) / (b - a)).max(1e-3);
        if err <= budget || pb - pa < 1e-12 * (b - a) {
            value += left + right;
            continue;
        }
        if evals > quad::NODE_CAP {
            return Err(SpectralError::Accuracy { estimate: err });
        }
        stack.push((pa, mid, left));
        stack.push((mid, pb, right));
    }
    Ok(value)
}

/// Fourier transform of a spectral density with a sqrt cusp at zero:
/// `int_0^{lambda_max} mu'(lambda) e^{-i lambda tau} d lambda`.
pub(crate) fn density_fourier<F: Fn(f64) -> f64>(
    density: &F,
    lambda_max: f64,
    tau: f64,
    rel_tol: f64,
) -> Result<Complex64, SpectralError> {
    // cusp panel [0, l1] under lambda = v^2, sized so the chirp phase stays
    // below one radian there
    let l1 = lambda_max.min(1.0 / tau.max(1.0 / lambda_max));
    let v1 = l1.sqrt();
    let cusp_integrand = move |v: f64| {
        let lambda = v * v;
        2.0 * v * density(lambda) * Complex64::from_polar(1.0, -tau * lambda)
    };
    let cusp = quad::adaptive_complex(&cusp_integrand, 0.0, v1, rel_tol, 1e-16)
        .map_err(SpectralError::from)?;
    let rest = if l1 < lambda_max {
        fourier_adaptive(density, l1, lambda_max, tau, rel_tol, 1.0)?
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(cusp.value + rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_series_and_recurrence() {
        // continuity across the method switch at theta = 0.5
        let lo = moments(0.4999);
        let hi = moments(0.5001);
        for k in 0..NODES_PER_PANEL {
            assert!((lo[k] - hi[k]).norm() < 1e-3 * 1e-3);
        }
        // exact check: m_0(theta) at theta = 2
        let m = moments(2.0);
        let want = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -2.0))
            / Complex64::new(0.0, 2.0);
        assert!((m[0] - want).norm() < 1e-15);
    }

    #[test]
    fn filon_matches_closed_form_gaussian_fourier() {
        // int_0^inf e^{-lambda} e^{-i lambda tau} d lambda = 1/(1 + i tau)
        let f = |l: f64| (-l).exp();
        for tau in [0.3, 5.0, 120.0] {
            let got = fourier_adaptive(&f, 0.0, 60.0, tau, 1e-12, 1.0).unwrap();
            let want = Complex64::new(1.0, 0.0) / Complex64::new(1.0, tau);
            assert!(
                (got - want).norm() < 1e-10,
                "tau={tau}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn interpolation_reproduces_quintic() {
        let xs = chebyshev_nodes();
        let poly = |x: f64| 1.0 + x * (2.0 - x * (0.5 - x * (3.0 + x * (1.0 - 0.25 * x))));
        let mut ys = [0.0; NODES_PER_PANEL];
        for (x, y) in xs.iter().zip(ys.iter_mut()) {
            *y = poly(*x);
        }
        let c = interpolate_coeffs(&xs, &ys);
        for &x in &[0.0, 0.31, 0.77, 1.0] {
            let val: f64 = c
                .iter()
                .rev()
                .fold(0.0, |acc, &ck| acc * x + ck);
            assert!((val - poly(x)).abs() < 1e-12);
        }
    }
}
