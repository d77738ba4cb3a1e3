//! A numerical laboratory for ionization in the extreme-intensity limit.
//!
//! Three layers build on each other:
//!
//! * [`pulse`] — laser pulse shapes `f(t)`, their classical invariants
//!   (momentum transfer `b0`, displacement `c0`), and the three-regime
//!   classification those invariants induce.
//! * [`spectral`] — free-evolution survival amplitudes of momentum-space
//!   bound states via the kinetic-energy spectral measure, closed forms for
//!   the hydrogen 1s and point-interaction states through a restricted
//!   confluent hypergeometric evaluator, and the critical time below which
//!   the limiting ionization provably stays under one.
//! * [`qdyn`] — a 1D split-operator time-dependent Schrödinger laboratory
//!   (length and Kramers-Henneberger gauges) that probes the amplitude-limit
//!   behavior on grid models: amplitude sweeps, free-evolution deviation,
//!   the momentum-kick population bound, boosted projections, and piecewise
//!   limit products.
//!
//! All quantities are in atomic units.

pub mod pulse;
pub mod quad;
pub mod report;
pub mod spectral;
pub mod qdyn;

mod doctests;
