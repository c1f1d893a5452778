//! Error type shared by the numerics modules.

use thiserror::Error;

/// Errors produced by the cycle numerics.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the operation's domain.
    #[error("domain error: {what} = {value}")]
    Domain { what: &'static str, value: f64 },

    /// A trace pairing produced a non-negligible imaginary part, which
    /// signals broken hermiticity upstream.
    #[error("trace pairing has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    /// The generator's spectrum does not split into a one-dimensional
    /// kernel plus a well-separated decaying part.
    #[error("degenerate spectrum: {detail}")]
    DegenerateSpectrum { detail: String },

    /// A linear solve or matrix inversion failed.
    #[error("singular linear system in {context}")]
    SingularMatrix { context: &'static str },

    /// An integrand evaluated to NaN or infinity.
    #[error("non-finite integrand sample at s = {s}")]
    NonFiniteSample { s: f64 },

    /// A population left [0, 1] by more than the stated tolerance.
    #[error("negative population {value:e}")]
    NegativePopulation { value: f64 },

    /// The length integrand went negative beyond rounding noise,
    /// which indicates a sign-convention bug.
    #[error("length integrand {value:e} at s = {s} is negative beyond tolerance")]
    NegativeLengthIntegrand { value: f64, s: f64 },

    /// The two quadrature routes for the dissipation coefficient diverged.
    #[error("dissipation route disagreement: direct {direct:e} vs by-parts {by_parts:e}")]
    FormDisagreement { direct: f64, by_parts: f64 },

    /// The two routes for the quasistatic heat diverged.
    #[error(
        "quasistatic heat route disagreement: quadrature {quadrature:e} vs entropy {entropy:e}"
    )]
    RouteDisagreement { quadrature: f64, entropy: f64 },

    /// Effective temperature is undefined for inverted or degenerate
    /// populations.
    #[error("non-thermal populations: excited {excited}, ground {ground}")]
    NonThermalState { excited: f64, ground: f64 },

    /// The integrator produced an unphysical state.
    #[error("positivity breach {value:e} at s = {s} (step size too coarse)")]
    PositivityBreach { s: f64, value: f64 },

    /// The error ladder of the order check did not shrink monotonically.
    #[error("non-monotone error sequence: {detail}")]
    NonMonotoneErrors { detail: String },

    /// The time-constraint equation needs a nonzero dissipation
    /// coefficient on every branch.
    #[error("dissipation coefficient is zero on branch {branch}; constraint inapplicable")]
    ZeroSigma { branch: char },

    /// The time-constraint quadratic has no positive real root.
    #[error("no positive root (discriminant {discriminant:e})")]
    NoPositiveRoot { discriminant: f64 },

    /// The requested coefficient of performance cannot be met.
    #[error("infeasible COP target: hot-branch duration solves to {tau_h}")]
    InfeasibleCop { tau_h: f64 },

    /// The cycle configuration violates its invariants.
    #[error("invalid cycle configuration: {issues:?}")]
    InvalidConfig { issues: Vec<String> },

    /// Bad user input to the harness.
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
