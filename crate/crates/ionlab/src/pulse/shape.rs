//! Pulse shapes `f(t)` with support in `[0, tau]` and their running integrals.
//!
//! The shape-normalized momentum transfer and displacement
//!
//! ```text
//! b0(t) = int_0^t f(s) ds          c0(t) = int_0^t b0(s) ds
//! ```
//!
//! are evaluated in closed form for every analytic family (the only exception
//! is a carrier-modulated gaussian envelope, which falls back to high-order
//! panel quadrature). Sampled waveforms are interpolated piecewise-linearly
//! and integrated exactly as such.

use super::engine::{PieceTable, Term};
use super::PulseError;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

/// Envelope families for analytic pulses, all normalized to peak value 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// `f = 1` on the whole support.
    Rectangular,
    /// Linear ramp up over `ramp_fraction * tau`, flat top, linear ramp down.
    Trapezoidal { ramp_fraction: f64 },
    /// `f = sin^2(pi t / tau)`.
    SineSquared,
    /// `f = exp(-(t-center)^2 / (2 width^2))`, truncated to the support.
    Gaussian { center: f64, width: f64 },
}

/// Pulse descriptor: an envelope, optionally multiplied by a cosine carrier,
/// or a sampled waveform, or a train of sub-pulses separated by dead time.
#[derive(Debug, Clone)]
pub enum PulseKind {
    Plain(Envelope),
    /// `envelope(t) * cos(omega t + phase)`.
    Modulated {
        envelope: Envelope,
        omega: f64,
        phase: f64,
    },
    /// Uniform samples over `[0, tau]`, endpoints included.
    Sampled { values: Vec<f64> },
    /// Sub-pulses placed at ascending start offsets; the field is zero in
    /// the gaps between them.
    Train { segments: Vec<(f64, PulseShape)> },
}

enum Engine {
    Pieces(PieceTable),
    GaussPlain {
        center: f64,
        width: f64,
    },
    GaussCarrier {
        center: f64,
        width: f64,
        omega: f64,
        phase: f64,
    },
    Train(Vec<TrainEntry>),
}

struct TrainEntry {
    start: f64,
    end: f64,
    shape: PulseShape,
    b0_in: f64,
    c0_in: f64,
    b0_out: f64,
    c0_out: f64,
}

/// A laser pulse shape `f(t)` supported on `[0, tau]` (atomic units).
pub struct PulseShape {
    kind: PulseKind,
    tau: f64,
    engine: Engine,
    max_abs: f64,
}

impl std::fmt::Debug for PulseShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PulseShape")
            .field("kind", &self.kind)
            .field("tau", &self.tau)
            .finish()
    }
}

impl Clone for PulseShape {
    fn clone(&self) -> Self {
        // engines are deterministic functions of the descriptor
        PulseShape::new(self.kind.clone(), self.tau).expect("descriptor already validated")
    }
}

fn check_duration(tau: f64) -> Result<(), PulseError> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(PulseError::BadDuration(tau));
    }
    Ok(())
}

impl PulseShape {
    pub fn new(kind: PulseKind, tau: f64) -> Result<Self, PulseError> {
        check_duration(tau)?;
        let engine = build_engine(&kind, tau)?;
        let max_abs = scan_max_abs(&kind, tau, &engine);
        if max_abs <= 0.0 {
            return Err(PulseError::IdenticallyZero);
        }
        Ok(PulseShape {
            kind,
            tau,
            engine,
            max_abs,
        })
    }

    pub fn rectangular(tau: f64) -> Result<Self, PulseError> {
        Self::new(PulseKind::Plain(Envelope::Rectangular), tau)
    }

    pub fn trapezoidal(tau: f64, ramp_fraction: f64) -> Result<Self, PulseError> {
        if !(ramp_fraction.is_finite() && ramp_fraction > 0.0 && ramp_fraction <= 0.5) {
            return Err(PulseError::BadRampFraction(ramp_fraction));
        }
        Self::new(PulseKind::Plain(Envelope::Trapezoidal { ramp_fraction }), tau)
    }

    pub fn sine_squared(tau: f64) -> Result<Self, PulseError> {
        Self::new(PulseKind::Plain(Envelope::SineSquared), tau)
    }

    pub fn gaussian(tau: f64, center: f64, width: f64) -> Result<Self, PulseError> {
        if !(width.is_finite() && width > 0.0) || !center.is_finite() {
            return Err(PulseError::BadWidth(width));
        }
        Self::new(PulseKind::Plain(Envelope::Gaussian { center, width }), tau)
    }

    pub fn modulated(
        envelope: Envelope,
        tau: f64,
        omega: f64,
        phase: f64,
    ) -> Result<Self, PulseError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(PulseError::BadFrequency(omega));
        }
        if !phase.is_finite() {
            return Err(PulseError::NonFinite("phase"));
        }
        if let Envelope::Trapezoidal { ramp_fraction } = envelope {
            if !(ramp_fraction.is_finite() && ramp_fraction > 0.0 && ramp_fraction <= 0.5) {
                return Err(PulseError::BadRampFraction(ramp_fraction));
            }
        }
        Self::new(
            PulseKind::Modulated {
                envelope,
                omega,
                phase,
            },
            tau,
        )
    }

    /// `f(t) = cos(omega t)` over `cycles` full periods.
    pub fn cosine_cycles(omega: f64, cycles: u32) -> Result<Self, PulseError> {
        if cycles == 0 {
            return Err(PulseError::BadDuration(0.0));
        }
        let tau = 2.0 * PI * cycles as f64 / omega;
        Self::modulated(Envelope::Rectangular, tau, omega, 0.0)
    }

    /// `f(t) = sin(omega t)` over `cycles` full periods.
    pub fn sine_cycles(omega: f64, cycles: u32) -> Result<Self, PulseError> {
        if cycles == 0 {
            return Err(PulseError::BadDuration(0.0));
        }
        let tau = 2.0 * PI * cycles as f64 / omega;
        Self::modulated(Envelope::Rectangular, tau, omega, -FRAC_PI_2)
    }

    /// Waveform sampled uniformly on `[0, tau]` with both endpoints included.
    pub fn sampled(tau: f64, values: Vec<f64>) -> Result<Self, PulseError> {
        if values.len() < 2 {
            return Err(PulseError::BadSamples("need at least 2 samples".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(PulseError::BadSamples("non-finite sample value".into()));
        }
        Self::new(PulseKind::Sampled { values }, tau)
    }

    /// Sub-pulses at ascending start offsets inside `[0, tau]`; the field is
    /// zero outside the segments.
    pub fn train(tau: f64, segments: Vec<(f64, PulseShape)>) -> Result<Self, PulseError> {
        if segments.is_empty() {
            return Err(PulseError::BadTrain("no segments".into()));
        }
        let mut cursor = 0.0;
        for (start, seg) in &segments {
            if !start.is_finite() || *start < cursor {
                return Err(PulseError::BadTrain(format!(
                    "segment start {start} overlaps or is out of order"
                )));
            }
            cursor = start + seg.duration();
        }
        if cursor > tau * (1.0 + 1e-12) {
            return Err(PulseError::BadTrain(format!(
                "segments extend to {cursor}, beyond tau = {tau}"
            )));
        }
        Self::new(PulseKind::Train { segments }, tau)
    }

    pub fn kind(&self) -> &PulseKind {
        &self.kind
    }

    /// Pulse duration `tau` in atomic units.
    pub fn duration(&self) -> f64 {
        self.tau
    }

    /// Peak of `|f|` over the support, from a dense scan (exact for sampled
    /// waveforms). Used to normalize classification thresholds.
    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    /// Shape value `f(t)`; exactly zero outside `[0, tau]`.
    pub fn value(&self, t: f64) -> f64 {
        if !t.is_finite() || t < 0.0 || t > self.tau {
            return 0.0;
        }
        match &self.engine {
            Engine::Pieces(table) => table.value(t),
            Engine::GaussPlain { center, width } => gauss_value(t, *center, *width),
            Engine::GaussCarrier {
                center,
                width,
                omega,
                phase,
            } => gauss_value(t, *center, *width) * (omega * t + phase).cos(),
            Engine::Train(entries) => {
                for e in entries {
                    if t >= e.start && t <= e.end {
                        return e.shape.value(t - e.start);
                    }
                }
                0.0
            }
        }
    }

    /// Field value `E0 * f(t)`.
    pub fn field_at(&self, e0: f64, t: f64) -> Result<f64, PulseError> {
        if !e0.is_finite() {
            return Err(PulseError::NonFinite("field amplitude"));
        }
        if !t.is_finite() {
            return Err(PulseError::NonFinite("time"));
        }
        Ok(e0 * self.value(t))
    }

    /// Shape-normalized momentum transfer `b0(t) = int_0^t f(s) ds`.
    pub fn momentum_transfer(&self, t: f64) -> Result<f64, PulseError> {
        if !t.is_finite() {
            return Err(PulseError::NonFinite("time"));
        }
        if t <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.b0_raw(t))
    }

    /// Shape-normalized displacement `c0(t) = int_0^t b0(s) ds`.
    pub fn displacement(&self, t: f64) -> Result<f64, PulseError> {
        if !t.is_finite() {
            return Err(PulseError::NonFinite("time"));
        }
        if t <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.c0_raw(t))
    }

    pub(crate) fn b0_raw(&self, t: f64) -> f64 {
        match &self.engine {
            Engine::Pieces(table) => table.b0(t),
            Engine::GaussPlain { center, width } => gauss_b0(t.min(self.tau), *center, *width),
            Engine::GaussCarrier {
                center,
                width,
                omega,
                phase,
            } => gauss_carrier_b0(t.min(self.tau), self.tau, *center, *width, *omega, *phase),
            Engine::Train(entries) => {
                let mut b = 0.0;
                for e in entries {
                    if t <= e.start {
                        return b;
                    }
                    if t <= e.end {
                        return e.b0_in + e.shape.b0_raw(t - e.start);
                    }
                    b = e.b0_out;
                }
                b
            }
        }
    }

    pub(crate) fn c0_raw(&self, t: f64) -> f64 {
        match &self.engine {
            Engine::Pieces(table) => table.c0(t),
            Engine::GaussPlain { center, width } => {
                let tc = t.min(self.tau);
                let mut c = gauss_c0(tc, *center, *width);
                if t > self.tau {
                    c += gauss_b0(self.tau, *center, *width) * (t - self.tau);
                }
                c
            }
            Engine::GaussCarrier {
                center,
                width,
                omega,
                phase,
            } => {
                let tc = t.min(self.tau);
                // c0(t) = t b0(t) - int_0^t s f(s) ds, so only single integrals
                // are ever evaluated numerically
                let b = gauss_carrier_b0(tc, self.tau, *center, *width, *omega, *phase);
                let sf = gauss_carrier_moment(tc, self.tau, *center, *width, *omega, *phase);
                let mut c = tc * b - sf;
                if t > self.tau {
                    c += b * (t - self.tau);
                }
                c
            }
            Engine::Train(entries) => {
                let mut c = 0.0;
                let mut b = 0.0;
                let mut end_prev = 0.0;
                for e in entries {
                    if t <= e.start {
                        return c + b * (t - end_prev);
                    }
                    if t <= e.end {
                        let u = t - e.start;
                        return e.c0_in + e.b0_in * u + e.shape.c0_raw(u);
                    }
                    c = e.c0_out;
                    b = e.b0_out;
                    end_prev = e.end;
                }
                c + b * (t - end_prev)
            }
        }
    }
}

fn build_engine(kind: &PulseKind, tau: f64) -> Result<Engine, PulseError> {
    Ok(match kind {
        PulseKind::Plain(Envelope::Gaussian { center, width }) => Engine::GaussPlain {
            center: *center,
            width: *width,
        },
        PulseKind::Plain(env) => Engine::Pieces(PieceTable::new(envelope_pieces(*env, tau))),
        PulseKind::Modulated {
            envelope: Envelope::Gaussian { center, width },
            omega,
            phase,
        } => Engine::GaussCarrier {
            center: *center,
            width: *width,
            omega: *omega,
            phase: *phase,
        },
        PulseKind::Modulated {
            envelope,
            omega,
            phase,
        } => {
            let pieces = envelope_pieces(*envelope, tau)
                .into_iter()
                .map(|(a, b, terms)| {
                    let modulated = terms
                        .iter()
                        .flat_map(|term| term.modulate(*omega, *phase, a))
                        .collect();
                    (a, b, modulated)
                })
                .collect();
            Engine::Pieces(PieceTable::new(pieces))
        }
        PulseKind::Sampled { values } => {
            let n = values.len() - 1;
            let h = tau / n as f64;
            let pieces = (0..n)
                .map(|i| {
                    let a = i as f64 * h;
                    let b = (i + 1) as f64 * h;
                    let slope = (values[i + 1] - values[i]) / h;
                    (a, b, vec![Term::poly(vec![values[i], slope])])
                })
                .collect();
            Engine::Pieces(PieceTable::new(pieces))
        }
        PulseKind::Train { segments } => {
            let mut entries = Vec::with_capacity(segments.len());
            let mut b0 = 0.0;
            let mut c0 = 0.0;
            let mut end_prev = 0.0;
            for (start, shape) in segments {
                c0 += b0 * (start - end_prev);
                let seg_tau = shape.duration();
                let b0_out = b0 + shape.b0_raw(seg_tau);
                let c0_out = c0 + b0 * seg_tau + shape.c0_raw(seg_tau);
                entries.push(TrainEntry {
                    start: *start,
                    end: start + seg_tau,
                    shape: shape.clone(),
                    b0_in: b0,
                    c0_in: c0,
                    b0_out,
                    c0_out,
                });
                b0 = b0_out;
                c0 = c0_out;
                end_prev = start + seg_tau;
            }
            Engine::Train(entries)
        }
    })
}

/// Envelope waveforms as piecewise polynomial terms in local coordinates.
fn envelope_pieces(env: Envelope, tau: f64) -> Vec<(f64, f64, Vec<Term>)> {
    match env {
        Envelope::Rectangular => vec![(0.0, tau, vec![Term::poly(vec![1.0])])],
        Envelope::Trapezoidal { ramp_fraction } => {
            let r = ramp_fraction * tau;
            let mut pieces = vec![(0.0, r, vec![Term::poly(vec![0.0, 1.0 / r])])];
            if tau - 2.0 * r > 1e-15 * tau {
                pieces.push((r, tau - r, vec![Term::poly(vec![1.0])]));
            }
            pieces.push((tau - r, tau, vec![Term::poly(vec![1.0, -1.0 / r])]));
            pieces
        }
        Envelope::SineSquared => {
            // sin^2(pi t / tau) = 1/2 - cos(2 pi t / tau)/2
            vec![(
                0.0,
                tau,
                vec![
                    Term::poly(vec![0.5]),
                    Term::osc(vec![-0.5], 2.0 * PI / tau, 0.0),
                ],
            )]
        }
        Envelope::Gaussian { .. } => unreachable!("gaussian handled by dedicated engines"),
    }
}

fn gauss_value(t: f64, center: f64, width: f64) -> f64 {
    let u = (t - center) / width;
    (-0.5 * u * u).exp()
}

fn gauss_b0(t: f64, center: f64, width: f64) -> f64 {
    // int_0^t exp(-(s-c)^2/(2w^2)) ds = w sqrt(pi/2) [erf(u(t)) - erf(u(0))]
    let scale = width * (PI / 2.0).sqrt();
    let u = |s: f64| (s - center) / (SQRT_2 * width);
    scale * (libm::erf(u(t)) - libm::erf(u(0.0)))
}

fn gauss_c0(t: f64, center: f64, width: f64) -> f64 {
    // int erf(u) du = u erf(u) + exp(-u^2)/sqrt(pi)
    let g = |u: f64| u * libm::erf(u) + (-u * u).exp() / PI.sqrt();
    let u0 = -center / (SQRT_2 * width);
    let ut = (t - center) / (SQRT_2 * width);
    let scale = width * (PI / 2.0).sqrt();
    scale * (SQRT_2 * width * (g(ut) - g(u0)) - t * libm::erf(u0))
}

/// Fixed-order Gauss-Legendre panels resolving both the envelope width and
/// the carrier period. No elementary antiderivative exists for this family.
fn gauss_carrier_quad<F: Fn(f64) -> f64>(f: F, t: f64, width: f64, omega: f64) -> f64 {
    let period = 2.0 * PI / omega;
    let panel = (width / 4.0).min(period / 4.0).min(t);
    let n = (t / panel).ceil() as usize;
    let h = t / n as f64;
    let (nodes, weights) = crate::quad::gauss_legendre(16);
    let mut acc = 0.0;
    for i in 0..n {
        let a = i as f64 * h;
        let mid = a + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += w * half * f(mid + half * x);
        }
    }
    acc
}

fn gauss_carrier_b0(t: f64, tau: f64, center: f64, width: f64, omega: f64, phase: f64) -> f64 {
    let tc = t.min(tau);
    if tc <= 0.0 {
        return 0.0;
    }
    gauss_carrier_quad(
        |s| gauss_value(s, center, width) * (omega * s + phase).cos(),
        tc,
        width,
        omega,
    )
}

fn gauss_carrier_moment(t: f64, tau: f64, center: f64, width: f64, omega: f64, phase: f64) -> f64 {
    let tc = t.min(tau);
    if tc <= 0.0 {
        return 0.0;
    }
    gauss_carrier_quad(
        |s| s * gauss_value(s, center, width) * (omega * s + phase).cos(),
        tc,
        width,
        omega,
    )
}

fn scan_max_abs(kind: &PulseKind, tau: f64, engine: &Engine) -> f64 {
    if let PulseKind::Sampled { values } = kind {
        // piecewise-linear interpolants attain their extrema at the nodes
        return values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    let nsamp = match kind {
        PulseKind::Modulated { omega, .. } => {
            let cycles = omega * tau / (2.0 * PI);
            ((32.0 * cycles).ceil() as usize).clamp(4096, 1 << 20)
        }
        _ => 4096,
    };
    let mut max = 0.0f64;
    for i in 0..=nsamp {
        let t = tau * i as f64 / nsamp as f64;
        let v = match engine {
            Engine::Pieces(table) => table.value(t),
            Engine::GaussPlain { center, width } => gauss_value(t, *center, *width),
            Engine::GaussCarrier {
                center,
                width,
                omega,
                phase,
            } => gauss_value(t, *center, *width) * (omega * t + phase).cos(),
            Engine::Train(entries) => {
                let mut v = 0.0;
                for e in entries {
                    if t >= e.start && t <= e.end {
                        v = e.shape.value(t - e.start);
                        break;
                    }
                }
                v
            }
        };
        max = max.max(v.abs());
    }
    max
}
