//! Pulse specifications as key-value documents (TOML), plus CSV waveforms.

use super::shape::{Envelope, PulseShape};
use super::PulseError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Declarative pulse specification, loadable from a TOML document.
///
/// Recognized `kind` values: `rectangular`, `trapezoidal`, `sine-squared`,
/// `gaussian`, `cos`, `sin`, `carrier`, `sampled`. For `cos`/`sin` the
/// duration may be given either as `tau` or as a whole number of `cycles`;
/// `carrier` modulates the envelope named in `envelope` by
/// `cos(omega t + phase)`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub kind: String,
    pub tau: Option<f64>,
    pub omega: Option<f64>,
    pub cycles: Option<u32>,
    pub phase: Option<f64>,
    pub ramp_fraction: Option<f64>,
    pub center: Option<f64>,
    pub width: Option<f64>,
    pub envelope: Option<String>,
    pub samples_path: Option<PathBuf>,
}

impl PulseConfig {
    pub fn from_toml(text: &str) -> Result<Self, PulseError> {
        toml::from_str(text).map_err(|e| PulseError::BadConfig(e.to_string()))
    }

    /// Build the pulse; `base_dir` resolves a relative `samples_path`.
    pub fn build(&self, base_dir: &Path) -> Result<PulseShape, PulseError> {
        let need_tau = || {
            self.tau
                .ok_or_else(|| PulseError::BadConfig("missing tau".into()))
        };
        let need_omega = || {
            self.omega
                .ok_or_else(|| PulseError::BadConfig("missing omega".into()))
        };
        match self.kind.as_str() {
            "rectangular" => PulseShape::rectangular(need_tau()?),
            "trapezoidal" => {
                let r = self
                    .ramp_fraction
                    .ok_or_else(|| PulseError::BadConfig("missing ramp_fraction".into()))?;
                PulseShape::trapezoidal(need_tau()?, r)
            }
            "sine-squared" => PulseShape::sine_squared(need_tau()?),
            "gaussian" => {
                let tau = need_tau()?;
                let center = self.center.unwrap_or(tau / 2.0);
                let width = self
                    .width
                    .ok_or_else(|| PulseError::BadConfig("missing width".into()))?;
                PulseShape::gaussian(tau, center, width)
            }
            "cos" | "sin" => {
                let omega = need_omega()?;
                let is_cos = self.kind == "cos";
                match (self.tau, self.cycles) {
                    (Some(tau), None) => {
                        let phase = if is_cos {
                            0.0
                        } else {
                            -std::f64::consts::FRAC_PI_2
                        };
                        PulseShape::modulated(Envelope::Rectangular, tau, omega, phase)
                    }
                    (None, Some(cycles)) => {
                        if is_cos {
                            PulseShape::cosine_cycles(omega, cycles)
                        } else {
                            PulseShape::sine_cycles(omega, cycles)
                        }
                    }
                    (None, None) => Err(PulseError::BadConfig(
                        "cos/sin pulses need either tau or cycles".into(),
                    )),
                    (Some(_), Some(_)) => Err(PulseError::BadConfig(
                        "give either tau or cycles, not both".into(),
                    )),
                }
            }
            "carrier" => {
                let envelope = match self.envelope.as_deref() {
                    Some("rectangular") | None => Envelope::Rectangular,
                    Some("trapezoidal") => Envelope::Trapezoidal {
                        ramp_fraction: self.ramp_fraction.ok_or_else(|| {
                            PulseError::BadConfig("missing ramp_fraction".into())
                        })?,
                    },
                    Some("sine-squared") => Envelope::SineSquared,
                    Some("gaussian") => {
                        let tau = need_tau()?;
                        Envelope::Gaussian {
                            center: self.center.unwrap_or(tau / 2.0),
                            width: self.width.ok_or_else(|| {
                                PulseError::BadConfig("missing width".into())
                            })?,
                        }
                    }
                    Some(other) => {
                        return Err(PulseError::BadConfig(format!(
                            "unknown envelope '{other}'"
                        )))
                    }
                };
                PulseShape::modulated(
                    envelope,
                    need_tau()?,
                    need_omega()?,
                    self.phase.unwrap_or(0.0),
                )
            }
            "sampled" => {
                let path = self
                    .samples_path
                    .as_ref()
                    .ok_or_else(|| PulseError::BadConfig("missing samples_path".into()))?;
                let full = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                let (tau, values) = load_samples_csv(&full)?;
                PulseShape::sampled(tau, values)
            }
            other => Err(PulseError::BadConfig(format!("unknown kind '{other}'"))),
        }
    }
}

/// Load a sampled waveform from two-column CSV `t,f` with a header row.
/// The time column must start at zero and be uniformly spaced; the returned
/// duration is the last time stamp.
pub fn load_samples_csv(path: &Path) -> Result<(f64, Vec<f64>), PulseError> {
    let text = std::fs::read_to_string(path).map_err(|source| PulseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 {
            continue; // header
        }
        let mut fields = line.split(',');
        let t: f64 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| PulseError::BadSamples(format!("line {}: bad time", lineno + 1)))?;
        let f: f64 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| PulseError::BadSamples(format!("line {}: bad value", lineno + 1)))?;
        times.push(t);
        values.push(f);
    }
    if times.len() < 2 {
        return Err(PulseError::BadSamples(
            "need at least 2 samples".into(),
        ));
    }
    if times[0] != 0.0 {
        return Err(PulseError::BadSamples(format!(
            "time column must start at 0, got {}",
            times[0]
        )));
    }
    let tau = *times.last().expect("non-empty");
    let h = tau / (times.len() - 1) as f64;
    for (i, &t) in times.iter().enumerate() {
        if (t - i as f64 * h).abs() > 1e-9 * tau.max(1.0) {
            return Err(PulseError::BadSamples(format!(
                "time column is not uniformly spaced near t = {t}"
            )));
        }
    }
    Ok((tau, values))
}
