//! Slow-driving thermodynamics of a finite-time three-reservoir quantum
//! refrigeration cycle (a "tricycle"): a driven two-level system exchanges
//! heat with cold, hot and auxiliary baths through cosine frequency ramps
//! joined by instantaneous quenches.
//!
//! The crate computes the perturbative heats Q = (ΔS_eq + Σ/τ)/β of each
//! branch from the Drazin inverse of the Liouvillian, the thermodynamic
//! length of each ramp, and the cycle-level trade-off quantities
//! LH = R(εᵣ/ε − 1) and RH = 𝓛̄²/τ, and cross-checks the perturbative
//! picture against direct integration of the master equation.
//!
//! Modules, bottom up:
//!
//! * [`superop`] — vectorized density-matrix algebra and the spectral
//!   Drazin inverse;
//! * [`protocol`] — drive schedules, quench closure, cycle validation;
//! * [`tls`] — the two-level-system physics (bath response, Liouvillian,
//!   Gibbs states, closed-form Drazin inverse);
//! * [`quad`] — composite Simpson quadrature with refinement;
//! * [`thermo`] — entropy changes, dissipation Σ, lengths, cycle metrics;
//! * [`oracle`] — Runge–Kutta integration of the master equation and the
//!   1/τ-expansion order check;
//! * [`optimize`] — time allocation from the stationarity constraint;
//! * [`run`] — sweep configuration, execution and CSV/JSONL output.

// Domain checks use `!(v > 0.0)` so NaN arguments are rejected along with
// out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod optimize;
pub mod oracle;
pub mod protocol;
pub mod quad;
pub mod run;
pub mod superop;
pub mod thermo;
pub mod tls;

pub use error::{Error, Result};
pub use protocol::{BranchProtocol, CycleConfig, DriveShape, Reservoir, ReservoirLabel};
pub use quad::QuadratureSpec;
pub use superop::{ObservableVec, StateVec, Superop};
pub use thermo::{BranchThermo, CycleFunctionals, CycleMetrics};
