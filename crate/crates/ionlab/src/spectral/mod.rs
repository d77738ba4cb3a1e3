//! Free-evolution survival probabilities from momentum-space bound states.
//!
//! For a normalized spherically symmetric state `psi_hat(p)` the survival
//! amplitude under free evolution is the Fourier transform of the
//! kinetic-energy spectral measure,
//!
//! ```text
//! A(tau) = 4 pi int_0^inf p^2 |psi_hat(p)|^2 e^{-i tau p^2 / 2} dp,
//! ```
//!
//! and the survival probability is `q(tau) = |A(tau)|^2`. Two built-in states
//! have closed forms through the confluent hypergeometric function `U`; the
//! generic path rotates the integration ray by `-pi/4` (all built-in
//! amplitudes continue analytically into that sector, their poles sitting on
//! the imaginary axis), and tabulated states use Filon quadrature on the
//! real ray instead.

mod filon;
mod hyperu;

pub use hyperu::{gamma_half, hyperu};

use crate::quad::{self, QuadError};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported hypergeometric domain (a = {a}, b = {b}): {reason}")]
    UnsupportedDomain {
        a: f64,
        b: f64,
        reason: &'static str,
    },
    #[error("quadrature accuracy not reached (estimated error {estimate:.3e})")]
    Accuracy { estimate: f64 },
    #[error("bad tabulated state: {0}")]
    BadState(String),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl From<QuadError> for SpectralError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::Accuracy { estimate, .. } => SpectralError::Accuracy { estimate },
            QuadError::BadInterval(a, b) => {
                SpectralError::InvalidInput(format!("bad integration interval [{a}, {b}]"))
            }
        }
    }
}

/// Spherically symmetric momentum-space bound state, L2-normalized:
/// `4 pi int p^2 |psi_hat|^2 dp = 1`.
#[derive(Debug, Clone)]
pub enum MomentumState {
    /// `psi_hat(p) = (sqrt(8)/pi) (1 + p^2)^-2`.
    Hydrogen1s,
    /// Zero-range attractive potential, `psi_hat(p) = (sqrt(alpha)/pi) (alpha^2 + p^2)^-1`.
    PointInteraction { alpha: f64 },
    /// `|psi_hat|^2 = (2 pi sigma^2)^{-3/2} exp(-p^2 / (2 sigma^2))`; `sigma`
    /// is the standard deviation of each momentum component.
    GaussianPacket { sigma: f64 },
    /// Radial samples `(p_i, psi_hat_i)`, interpolated cubically and
    /// renormalized at construction.
    Tabulated { p: Vec<f64>, amp: Vec<f64> },
}

impl MomentumState {
    pub fn hydrogen_1s() -> Self {
        MomentumState::Hydrogen1s
    }

    pub fn point_interaction(alpha: f64) -> Result<Self, SpectralError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(SpectralError::InvalidInput(format!(
                "point-interaction coupling must be positive, got {alpha}"
            )));
        }
        Ok(MomentumState::PointInteraction { alpha })
    }

    pub fn gaussian_packet(sigma: f64) -> Result<Self, SpectralError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(SpectralError::InvalidInput(format!(
                "momentum width must be positive, got {sigma}"
            )));
        }
        Ok(MomentumState::GaussianPacket { sigma })
    }

    /// Build a tabulated state; the amplitudes are renormalized so the state
    /// is exactly L2-normalized under the interpolation rule.
    pub fn tabulated(p: Vec<f64>, mut amp: Vec<f64>) -> Result<Self, SpectralError> {
        if p.len() != amp.len() || p.len() < 8 {
            return Err(SpectralError::BadState(
                "need at least 8 (p, amplitude) samples".into(),
            ));
        }
        if p[0] < 0.0 || p.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SpectralError::BadState(
                "momentum grid must be nonnegative and strictly ascending".into(),
            ));
        }
        if p.iter().chain(amp.iter()).any(|v| !v.is_finite()) {
            return Err(SpectralError::BadState("non-finite table entry".into()));
        }
        let norm_sq = {
            let interp = TabulatedInterp { p: &p, amp: &amp };
            let f = |x: f64| {
                let a = interp.eval(x);
                4.0 * PI * x * x * a * a
            };
            let (val, _) = quad::adaptive_real(&f, p[0], *p.last().expect("non-empty"), 1e-12, 0.0)
                .map_err(SpectralError::from)?;
            val
        };
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(SpectralError::BadState(
                "state has zero or non-finite norm".into(),
            ));
        }
        let scale = norm_sq.sqrt().recip();
        for a in &mut amp {
            *a *= scale;
        }
        Ok(MomentumState::Tabulated { p, amp })
    }

    /// Load a tabulated state from two-column CSV `p,psi_hat` with a header.
    pub fn tabulated_from_csv(path: &Path) -> Result<Self, SpectralError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpectralError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut ps = Vec::new();
        let mut amps = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || lineno == 0 {
                continue;
            }
            let mut fields = line.split(',');
            let p: f64 = fields
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| {
                    SpectralError::BadState(format!("line {}: bad momentum", lineno + 1))
                })?;
            let a: f64 = fields
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| {
                    SpectralError::BadState(format!("line {}: bad amplitude", lineno + 1))
                })?;
            ps.push(p);
            amps.push(a);
        }
        Self::tabulated(ps, amps)
    }

    /// Radial momentum amplitude `psi_hat(p)`; zero outside a table's range.
    pub fn amplitude(&self, p: f64) -> f64 {
        match self {
            MomentumState::Hydrogen1s => 8.0f64.sqrt() / PI / (1.0 + p * p).powi(2),
            MomentumState::PointInteraction { alpha } => {
                alpha.sqrt() / PI / (alpha * alpha + p * p)
            }
            MomentumState::GaussianPacket { sigma } => {
                let s2 = sigma * sigma;
                (2.0 * PI * s2).powf(-0.75) * (-p * p / (4.0 * s2)).exp()
            }
            MomentumState::Tabulated { p: grid, amp } => {
                TabulatedInterp { p: grid, amp }.eval(p)
            }
        }
    }

    /// Density of the kinetic-energy spectral measure,
    /// `mu'(lambda) = 4 pi sqrt(2 lambda) |psi_hat(sqrt(2 lambda))|^2`;
    /// zero for `lambda < 0`.
    pub fn spectral_density(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        let p = (2.0 * lambda).sqrt();
        let a = self.amplitude(p);
        4.0 * PI * p * a * a
    }

    /// Large-momentum decay exponent of the amplitude (`psi_hat ~ p^beta`);
    /// `-inf` marks faster-than-algebraic decay. Tabulated states are fitted
    /// over their outermost decade.
    fn tail_exponent(&self) -> f64 {
        match self {
            MomentumState::Hydrogen1s => -4.0,
            MomentumState::PointInteraction { .. } => -2.0,
            MomentumState::GaussianPacket { .. } => f64::NEG_INFINITY,
            MomentumState::Tabulated { p, amp } => {
                let p_max = *p.last().expect("non-empty");
                let cut = 0.1 * p_max;
                let pts: Vec<(f64, f64)> = p
                    .iter()
                    .zip(amp.iter())
                    .filter(|(&pi, &ai)| pi > cut && ai.abs() > 1e-300)
                    .map(|(&pi, &ai)| (pi.ln(), ai.abs().ln()))
                    .collect();
                if pts.len() < 4 {
                    return f64::NEG_INFINITY;
                }
                // least-squares slope of ln|amp| vs ln p
                let n = pts.len() as f64;
                let sx: f64 = pts.iter().map(|(x, _)| x).sum();
                let sy: f64 = pts.iter().map(|(_, y)| y).sum();
                let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
                let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
                (n * sxy - sx * sy) / (n * sxx - sx * sx)
            }
        }
    }

    /// Survival amplitude `(psi, e^{-i tau H0} psi)`.
    pub fn survival_amplitude(&self, tau: f64) -> Result<Complex64, SpectralError> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(SpectralError::InvalidInput(format!(
                "time must be finite and nonnegative, got {tau}"
            )));
        }
        if tau == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        match self {
            MomentumState::Hydrogen1s | MomentumState::PointInteraction { .. } => {
                self.rotated_ray_amplitude(tau)
            }
            MomentumState::GaussianPacket { sigma } => {
                // closed form: A = (1 + i tau sigma^2)^{-3/2}
                Ok(Complex64::new(1.0, tau * sigma * sigma).powf(-1.5))
            }
            MomentumState::Tabulated { .. } => self.survival_amplitude_filon(tau, None),
        }
    }

    /// Rotated-ray evaluation, `p = e^{-i pi/4} s`; the oscillatory factor
    /// becomes `e^{-tau s^2 / 2}` and the continued amplitudes are
    /// pole-free in the swept sector.
    fn rotated_ray_amplitude(&self, tau: f64) -> Result<Complex64, SpectralError> {
        let density_cont: Box<dyn Fn(Complex64) -> Complex64> = match self {
            MomentumState::Hydrogen1s => Box::new(|p2: Complex64| {
                let d = Complex64::new(1.0, 0.0) + p2;
                8.0 / (PI * PI) * d.powi(-4)
            }),
            MomentumState::PointInteraction { alpha } => {
                let a2 = alpha * alpha;
                Box::new(move |p2: Complex64| {
                    let d = Complex64::new(a2, 0.0) + p2;
                    a2.sqrt() / (PI * PI) * d.powi(-2)
                })
            }
            _ => unreachable!("rotated ray is used for the rational amplitudes only"),
        };
        let s_max = (92.0 / tau).sqrt();
        let phase = Complex64::from_polar(1.0, -3.0 * std::f64::consts::FRAC_PI_4);
        let integrand = move |s: f64| {
            let s2 = s * s;
            let p2 = Complex64::new(0.0, -s2);
            4.0 * PI * s2 * density_cont(p2) * (-0.5 * tau * s2).exp()
        };
        let r = quad::adaptive_complex(&integrand, 0.0, s_max, 1e-12, 1e-16)?;
        if r.error > 1e-10 {
            return Err(SpectralError::Accuracy { estimate: r.error });
        }
        Ok(phase * r.value)
    }

    /// Filon real-ray evaluation of the survival amplitude. The default
    /// energy cutoff covers a table's full range, or enough of the algebraic
    /// tail of the built-in densities to be negligible; pass `lambda_max` to
    /// override.
    pub fn survival_amplitude_filon(
        &self,
        tau: f64,
        lambda_max: Option<f64>,
    ) -> Result<Complex64, SpectralError> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(SpectralError::InvalidInput(format!(
                "time must be finite and nonnegative, got {tau}"
            )));
        }
        if tau == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let (l_max, tail_correction) = match (lambda_max, self) {
            (Some(l), _) => (l, !matches!(self, MomentumState::Tabulated { .. })),
            (None, MomentumState::Tabulated { p, .. }) => {
                let p_max = *p.last().expect("non-empty");
                (0.5 * p_max * p_max, false)
            }
            (None, _) => (700.0, true),
        };
        let density = |l: f64| self.spectral_density(l);
        let mut value = filon::density_fourier(&density, l_max, tau, 1e-11)?;
        if tail_correction {
            // leading integration-by-parts term of the truncated tail
            value += self.spectral_density(l_max) * Complex64::from_polar(1.0, -tau * l_max)
                / Complex64::new(0.0, tau);
        }
        Ok(value)
    }

    /// Survival probability `q(tau) = |A(tau)|^2`.
    pub fn survival_probability(&self, tau: f64) -> Result<f64, SpectralError> {
        let a = self.survival_amplitude(tau)?;
        Ok(a.norm_sqr().clamp(0.0, 1.0))
    }

    /// Limiting ionization probability for a single bound state,
    /// `p(tau) = 1 - q(tau)`.
    pub fn limit_ionization_single(&self, tau: f64) -> Result<f64, SpectralError> {
        Ok(1.0 - self.survival_probability(tau)?)
    }

    /// First two moments of the free Hamiltonian in this state. A moment
    /// whose integrand decays like `p^-1` or slower is divergent; it is
    /// reported as infinite and flagged.
    pub fn h0_moments(&self) -> Result<H0Moments, SpectralError> {
        let beta = self.tail_exponent();
        let m1_div = 4.0 + 2.0 * beta >= -1.0;
        let m2_div = 6.0 + 2.0 * beta >= -1.0;
        let moment = |power: i32| -> Result<f64, SpectralError> {
            match self {
                MomentumState::Tabulated { p, .. } => {
                    let f = |x: f64| {
                        let a = self.amplitude(x);
                        4.0 * PI * x.powi(power) * a * a
                    };
                    let (val, _) = quad::adaptive_real(
                        &f,
                        p[0],
                        *p.last().expect("non-empty"),
                        1e-11,
                        0.0,
                    )?;
                    Ok(val)
                }
                _ => {
                    // p = u/(1-u) maps the half-line onto [0, 1)
                    let f = |u: f64| {
                        let om = 1.0 - u;
                        let x = u / om;
                        let a = self.amplitude(x);
                        4.0 * PI * x.powi(power) * a * a / (om * om)
                    };
                    let (val, _) = quad::adaptive_real(&f, 0.0, 1.0, 1e-12, 0.0)?;
                    Ok(val)
                }
            }
        };
        let m1 = if m1_div {
            f64::INFINITY
        } else {
            0.5 * moment(4)?
        };
        let m2 = if m2_div {
            f64::INFINITY
        } else {
            0.25 * moment(6)?
        };
        Ok(H0Moments {
            m1,
            m2,
            divergent: m1_div || m2_div,
        })
    }

    /// Critical time `tau* = pi [ <H0^2> - <H0>^2 ]^{-1/2}` below which the
    /// limiting ionization provably stays under one, or the unbounded
    /// variance signal when the moments diverge.
    pub fn pfeifer_time(&self) -> Result<PfeiferTime, SpectralError> {
        let m = self.h0_moments()?;
        if m.divergent {
            return Ok(PfeiferTime::UnboundedVariance);
        }
        let var = m.m2 - m.m1 * m.m1;
        if !(var.is_finite() && var > 0.0) {
            return Err(SpectralError::Accuracy { estimate: var });
        }
        Ok(PfeiferTime::Finite(PI / var.sqrt()))
    }
}

/// `<H0>` and `<H0^2>` with a divergence flag.
#[derive(Debug, Clone, Copy)]
pub struct H0Moments {
    pub m1: f64,
    pub m2: f64,
    pub divergent: bool,
}

/// Result of the critical-time computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PfeiferTime {
    Finite(f64),
    UnboundedVariance,
}

/// Survival probability of the hydrogen 1s ground state in closed form:
/// `q(tau) = (64/pi) |U(3/2, -3/2; i tau/2)|^2`.
pub fn q_hydrogen(tau: f64) -> Result<f64, SpectralError> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(SpectralError::InvalidInput(format!(
            "time must be finite and nonnegative, got {tau}"
        )));
    }
    let u = hyperu(1.5, -1.5, Complex64::new(0.0, 0.5 * tau))?;
    Ok((64.0 / PI * u.norm_sqr()).clamp(0.0, 1.0))
}

/// Survival probability of the point-interaction bound state in closed form:
/// `q_alpha(tau) = (1/pi) |U(3/2, 1/2; i tau alpha^2/2)|^2`. Depends on the
/// coupling only through `tau alpha^2`, so `q_alpha(tau) = q_1(alpha^2 tau)`.
pub fn q_delta(alpha: f64, tau: f64) -> Result<f64, SpectralError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(SpectralError::InvalidInput(format!(
            "coupling must be positive, got {alpha}"
        )));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(SpectralError::InvalidInput(format!(
            "time must be finite and nonnegative, got {tau}"
        )));
    }
    let y = 0.5 * (alpha * alpha * tau);
    let u = hyperu(1.5, 0.5, Complex64::new(0.0, y))?;
    Ok((u.norm_sqr() / PI).clamp(0.0, 1.0))
}

/// Emit a `(tau, q, p)` curve as CSV with columns `tau,q,p`.
pub fn write_survival_curve<W: Write>(
    out: &mut W,
    state: &MomentumState,
    taus: &[f64],
) -> Result<(), SpectralError> {
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let q = state.survival_probability(tau)?;
        rows.push(vec![tau, q, 1.0 - q]);
    }
    crate::report::write_csv(out, &["tau", "q", "p"], rows.into_iter()).map_err(|e| {
        SpectralError::Io {
            path: "<writer>".into(),
            source: e,
        }
    })
}

/// Local cubic (4-point Lagrange) interpolation on an ascending grid.
struct TabulatedInterp<'a> {
    p: &'a [f64],
    amp: &'a [f64],
}

impl TabulatedInterp<'_> {
    fn eval(&self, x: f64) -> f64 {
        let n = self.p.len();
        if x < self.p[0] || x > self.p[n - 1] {
            return 0.0;
        }
        let mut i = match self
            .p
            .binary_search_by(|v| v.partial_cmp(&x).expect("finite grid"))
        {
            Ok(i) => return self.amp[i],
            Err(i) => i - 1,
        };
        // center a 4-point stencil on the bracketing interval
        i = i.saturating_sub(1).min(n - 4);
        let xs = &self.p[i..i + 4];
        let ys = &self.amp[i..i + 4];
        let mut acc = 0.0;
        for j in 0..4 {
            let mut l = ys[j];
            for k in 0..4 {
                if k != j {
                    l *= (x - xs[k]) / (xs[j] - xs[k]);
                }
            }
            acc += l;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_of_builtin_states() {
        for state in [
            MomentumState::hydrogen_1s(),
            MomentumState::point_interaction(0.7).unwrap(),
            MomentumState::gaussian_packet(1.3).unwrap(),
        ] {
            let f = |u: f64| {
                let om = 1.0 - u;
                let p = u / om;
                let a = state.amplitude(p);
                4.0 * PI * p * p * a * a / (om * om)
            };
            let (norm, _) = quad::adaptive_real(&f, 0.0, 1.0, 1e-12, 0.0).unwrap();
            assert!((norm - 1.0).abs() < 1e-8, "{state:?}: {norm}");
        }
    }

    #[test]
    fn spectral_density_reference_point() {
        // hydrogen at lambda = 1/2 (p = 1): 4 pi * (8/pi^2) / 16 = 2/pi
        let s = MomentumState::hydrogen_1s();
        let got = s.spectral_density(0.5);
        assert!((got - 2.0 / PI).abs() < 1e-14);
        assert_eq!(s.spectral_density(-1.0), 0.0);
        assert_eq!(s.spectral_density(0.0), 0.0);
    }

    #[test]
    fn spectral_density_normalizes_to_one() {
        let s = MomentumState::hydrogen_1s();
        let f = |u: f64| {
            let om = 1.0 - u;
            let l = u / om;
            s.spectral_density(l) / (om * om)
        };
        let (total, _) = quad::adaptive_real(&f, 0.0, 1.0, 1e-11, 0.0).unwrap();
        assert!((total - 1.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn survival_amplitude_at_zero_is_one() {
        for state in [
            MomentumState::hydrogen_1s(),
            MomentumState::point_interaction(2.0).unwrap(),
            MomentumState::gaussian_packet(0.5).unwrap(),
        ] {
            let a = state.survival_amplitude(0.0).unwrap();
            assert_eq!(a, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(MomentumState::hydrogen_1s().survival_amplitude(-1.0).is_err());
        assert!(q_hydrogen(-0.5).is_err());
        assert!(q_delta(0.0, 1.0).is_err());
    }
}
