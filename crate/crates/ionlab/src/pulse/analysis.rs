//! Pulse classification and the zero/vanishing structure of the displacement.
//!
//! A pulse falls into one of three asymptotic regimes according to its net
//! momentum transfer `b0(tau)` and net displacement `c0(tau)`. Because the
//! regime is a property of the shape alone, the comparisons are normalized by
//! the natural scales `tau * max|f|` and `tau^2 * max|f|`.

use super::shape::PulseShape;
use super::PulseError;

/// Asymptotic regime of a pulse under increasing field amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseClass {
    /// Net momentum transfer: `b0(tau) != 0`. Ionization tends to one.
    Kicked,
    /// No net kick but a net displacement: `b0(tau) = 0`, `c0(tau) != 0`.
    /// Ionization still tends to one for potentials with finitely many
    /// bound states.
    Displaced,
    /// Both invariants vanish: `b0(tau) = c0(tau) = 0`. The ionization limit
    /// equals the free-evolution value `1 - q(tau)`, strictly below one.
    Balanced,
}

impl std::fmt::Display for PulseClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PulseClass::Kicked => "kicked",
            PulseClass::Displaced => "displaced",
            PulseClass::Balanced => "balanced",
        };
        f.write_str(s)
    }
}

/// One interval of the alternating flat/active partition of `[0, tau]`.
///
/// Flat intervals are the maximal stretches where `c0` vanishes identically;
/// on active intervals `c0` is nonzero except for finitely many points. The
/// first and last interval are always flat, possibly degenerate (zero width),
/// so the pattern is flat, active, flat, ..., active, flat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionInterval {
    pub start: f64,
    pub end: f64,
    pub flat: bool,
}

/// Classification record: net invariants, regime, and displacement structure.
#[derive(Debug, Clone)]
pub struct PulseInvariants {
    /// Net shape-normalized momentum transfer `b0(tau)`.
    pub b0_tau: f64,
    /// Net shape-normalized displacement `c0(tau)`.
    pub c0_tau: f64,
    /// `sqrt(b0(tau)^2 + c0(tau)^2)`.
    pub a0: f64,
    pub class: PulseClass,
    /// Relative tolerance the classification was made with.
    pub tol: f64,
    /// Absolute threshold `tol * tau * max|f|` applied to `b0`.
    pub b0_threshold: f64,
    /// Absolute threshold `tol * tau^2 * max|f|` applied to `c0`.
    pub c0_threshold: f64,
    /// Isolated zeros of `c0`, ascending, outside the flat intervals.
    pub c0_zeros: Vec<f64>,
    /// Maximal intervals where `c0` vanishes identically.
    pub c0_flat_intervals: Vec<(f64, f64)>,
    /// Alternating flat/active partition tiling `[0, tau]`.
    pub partition: Vec<PartitionInterval>,
}

/// Zero/flat structure of the displacement, from `zero_structure`.
#[derive(Debug, Clone)]
pub struct ZeroStructure {
    pub zeros: Vec<f64>,
    pub flat_intervals: Vec<(f64, f64)>,
    pub partition: Vec<PartitionInterval>,
}

pub(crate) const DEFAULT_ZERO_SAMPLES: usize = 512;

impl PulseShape {
    /// Classify the pulse and compute its displacement structure.
    ///
    /// `tol` is a relative tolerance in `(0, 1e-3]`; the actual comparisons
    /// use the scale-normalized thresholds recorded in the result, so a
    /// rescaled pulse `f -> lambda f` classifies identically.
    pub fn classify(&self, tol: f64) -> Result<PulseInvariants, PulseError> {
        if !(tol.is_finite() && tol > 0.0 && tol <= 1e-3) {
            return Err(PulseError::BadTolerance(tol));
        }
        let tau = self.duration();
        let max_f = self.max_abs();
        let b0_tau = self.b0_raw(tau);
        let c0_tau = self.c0_raw(tau);
        let a0 = b0_tau.hypot(c0_tau);
        let b0_threshold = tol * tau * max_f;
        let c0_threshold = tol * tau * tau * max_f;
        let class = if b0_tau.abs() > b0_threshold {
            PulseClass::Kicked
        } else if c0_tau.abs() > c0_threshold {
            PulseClass::Displaced
        } else {
            PulseClass::Balanced
        };
        let zs = self.zero_structure(DEFAULT_ZERO_SAMPLES, tol)?;
        Ok(PulseInvariants {
            b0_tau,
            c0_tau,
            a0,
            class,
            tol,
            b0_threshold,
            c0_threshold,
            c0_zeros: zs.zeros,
            c0_flat_intervals: zs.flat_intervals,
            partition: zs.partition,
        })
    }

    /// Locate the isolated zeros and flat stretches of `c0` on `[0, tau]`.
    ///
    /// `c0` is sampled on a uniform grid of `nsamples` intervals. Runs of at
    /// least three consecutive samples with both `|c0|` and `|b0|` below
    /// their scale-normalized thresholds become flat intervals (`c0 == 0` on
    /// an interval forces `b0 = c0' = 0` there, and the derivative condition
    /// keeps a slow crossing from masquerading as a flat stretch). Isolated
    /// zeros are refined by bisection to a resolution of
    /// `tau / (64 * nsamples)`: sign changes of `c0` directly, and touching
    /// zeros through the sign changes of `b0` at the extrema of `c0`.
    pub fn zero_structure(&self, nsamples: usize, tol: f64) -> Result<ZeroStructure, PulseError> {
        if nsamples < 64 {
            return Err(PulseError::TooFewSamples(nsamples));
        }
        if !(tol.is_finite() && tol > 0.0 && tol <= 1e-3) {
            return Err(PulseError::BadTolerance(tol));
        }
        let tau = self.duration();
        let max_f = self.max_abs();
        let tol_c = tol * tau * tau * max_f;
        let tol_b = tol * tau * max_f;
        let resolution = tau / (64.0 * nsamples as f64);

        let ts: Vec<f64> = (0..=nsamples)
            .map(|i| tau * i as f64 / nsamples as f64)
            .collect();
        let c: Vec<f64> = ts.iter().map(|&t| self.c0_raw(t)).collect();
        let b: Vec<f64> = ts.iter().map(|&t| self.b0_raw(t)).collect();
        let small = |i: usize| c[i].abs() <= tol_c && b[i].abs() <= tol_b;
        let flat_pred = |t: f64| {
            self.c0_raw(t).abs() <= tol_c && self.b0_raw(t).abs() <= tol_b
        };

        // maximal runs of >= 3 small samples, edges refined by bisection
        let mut flats: Vec<(f64, f64)> = Vec::new();
        let mut i = 0;
        while i <= nsamples {
            if small(i) {
                let run_start = i;
                while i + 1 <= nsamples && small(i + 1) {
                    i += 1;
                }
                if i - run_start + 1 >= 3 {
                    let lo = if run_start == 0 {
                        0.0
                    } else {
                        refine_edge(&flat_pred, ts[run_start], ts[run_start - 1], resolution)
                    };
                    let hi = if i == nsamples {
                        tau
                    } else {
                        refine_edge(&flat_pred, ts[i], ts[i + 1], resolution)
                    };
                    flats.push((lo, hi));
                }
            }
            i += 1;
        }

        let in_flat = |t: f64| flats.iter().any(|&(a, b)| t >= a - resolution && t <= b + resolution);

        let mut zeros: Vec<f64> = Vec::new();
        // c0(0) = 0 by construction
        if !in_flat(0.0) {
            zeros.push(0.0);
        }
        for i in 1..nsamples {
            // a sample landing exactly on a zero
            if c[i] == 0.0 && !in_flat(ts[i]) {
                zeros.push(ts[i]);
            }
        }
        for i in 0..nsamples {
            // plain sign change of c0
            if c[i] != 0.0 && c[i + 1] != 0.0 && c[i].signum() != c[i + 1].signum() {
                let z = bisect(|t| self.c0_raw(t), ts[i], ts[i + 1], resolution);
                if !in_flat(z) {
                    zeros.push(z);
                }
                continue;
            }
            // touching zero: c0 dips to zero at an extremum, where b0 = c0'
            // changes sign
            if b[i] != 0.0 && b[i + 1] != 0.0 && b[i].signum() != b[i + 1].signum() {
                let z = bisect(|t| self.b0_raw(t), ts[i], ts[i + 1], resolution);
                if self.c0_raw(z).abs() <= tol_c && !in_flat(z) {
                    zeros.push(z);
                }
            }
        }
        if self.c0_raw(tau).abs() <= tol_c && !in_flat(tau) {
            let far = zeros.iter().all(|&z| (z - tau).abs() > resolution);
            if far {
                zeros.push(tau);
            }
        }
        zeros.sort_by(|a, b| a.partial_cmp(b).expect("finite zero positions"));
        zeros.dedup_by(|a, b| (*a - *b).abs() <= resolution);

        let partition = build_partition(tau, &flats);
        Ok(ZeroStructure {
            zeros,
            flat_intervals: flats,
            partition,
        })
    }
}

/// Bisection for a sign change of `f` between `a` and `b`.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, resolution: f64) -> f64 {
    let mut fa = f(a);
    while (b - a).abs() > resolution {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa.signum() == fm.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Bisection for the boundary of a predicate that holds at `inside` but not
/// at `outside`.
fn refine_edge<F: Fn(f64) -> bool>(pred: &F, mut inside: f64, mut outside: f64, resolution: f64) -> f64 {
    while (outside - inside).abs() > resolution {
        let m = 0.5 * (inside + outside);
        if pred(m) {
            inside = m;
        } else {
            outside = m;
        }
    }
    inside
}

fn build_partition(tau: f64, flats: &[(f64, f64)]) -> Vec<PartitionInterval> {
    let mut out = Vec::new();
    let mut cursor = 0.0;
    let mut iter = flats.iter().peekable();
    // leading flat interval, possibly degenerate
    match iter.peek() {
        Some(&&(a, b)) if a <= 0.0 => {
            out.push(PartitionInterval {
                start: 0.0,
                end: b,
                flat: true,
            });
            cursor = b;
            iter.next();
        }
        _ => out.push(PartitionInterval {
            start: 0.0,
            end: 0.0,
            flat: true,
        }),
    }
    for &(a, b) in iter {
        out.push(PartitionInterval {
            start: cursor,
            end: a,
            flat: false,
        });
        out.push(PartitionInterval {
            start: a,
            end: b,
            flat: true,
        });
        cursor = b;
    }
    if cursor < tau {
        out.push(PartitionInterval {
            start: cursor,
            end: tau,
            flat: false,
        });
        out.push(PartitionInterval {
            start: tau,
            end: tau,
            flat: true,
        });
    }
    out
}
