//! Physics of the driven two-level system: bath response, the Liouvillian in
//! matrix form, the instantaneous Gibbs state with its analytic derivative,
//! and the closed-form Drazin inverse.
//!
//! The level splitting ħω couples to a bosonic bath through jump operators
//! with rates γ(n+1) (decay) and γn (excitation), which keeps the population
//! and coherence sectors decoupled: the generator is
//!
//! ```text
//!      ┌ −γ(n+1)            0                  0         γn      ┐
//!  L = │  0        −γ(n+½) − iω                0          0      │
//!      │  0                 0          −γ(n+½) + iω       0      │
//!      └  γ(n+1)            0                  0        −γn      ┘
//! ```
//!
//! in the (ρ₁₁, ρ₁₀, ρ₀₁, ρ₀₀) ordering.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::protocol::BranchProtocol;
use crate::superop::{StateVec, Superop};

/// Arguments of the Bose–Einstein factor beyond this are flushed to zero
/// occupation.
const OCCUPATION_CUTOFF: f64 = 700.0;

#[inline]
fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Thermal response of the bath at one instant: mean photon number and
/// damping rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathResponse {
    pub n: f64,
    pub gamma: f64,
}

impl BathResponse {
    /// Response of branch `b` at rescaled time `s`.
    pub fn at(b: &BranchProtocol, s: f64, hbar: f64) -> Result<Self> {
        let omega = b.omega_extended(s);
        Ok(Self {
            n: mean_occupation(omega, b.reservoir.beta, hbar)?,
            gamma: b.damping_rate(s),
        })
    }
}

/// Bose–Einstein occupation n = 1/(exp(βħω) − 1).
///
/// Returns exactly 0 once βħω exceeds 700, where the exponential would
/// overflow long before the occupation becomes representable.
pub fn mean_occupation(omega: f64, beta: f64, hbar: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain {
            what: "omega",
            value: omega,
        });
    }
    if !(beta > 0.0) {
        return Err(Error::Domain {
            what: "beta",
            value: beta,
        });
    }
    let x = beta * hbar * omega;
    if x > OCCUPATION_CUTOFF {
        return Ok(0.0);
    }
    Ok(1.0 / x.exp_m1())
}

/// The Liouvillian in matrix form for splitting ω, damping rate γ and
/// occupation n.
pub fn liouvillian(omega: f64, gamma: f64, n: f64) -> Superop {
    let down = gamma * (n + 1.0);
    let up = gamma * n;
    let deph = -gamma * (n + 0.5);
    Superop::from_matrix(Matrix4::new(
        re(-down),
        re(0.0),
        re(0.0),
        re(up),
        re(0.0),
        Complex64::new(deph, -omega),
        re(0.0),
        re(0.0),
        re(0.0),
        re(0.0),
        Complex64::new(deph, omega),
        re(0.0),
        re(down),
        re(0.0),
        re(0.0),
        re(-up),
    ))
}

/// Liouvillian of branch `b` at rescaled time `s`.
pub fn branch_liouvillian(b: &BranchProtocol, s: f64, hbar: f64) -> Result<Superop> {
    let bath = BathResponse::at(b, s, hbar)?;
    Ok(liouvillian(b.omega_extended(s), bath.gamma, bath.n))
}

/// Gibbs state for occupation n: (n/(2n+1), 0, 0, (n+1)/(2n+1)).
pub fn gibbs_from_occupation(n: f64) -> StateVec {
    let d = 2.0 * n + 1.0;
    StateVec::from_populations(n / d, (n + 1.0) / d)
}

/// Instantaneous Gibbs state of the splitting ω at inverse temperature β.
///
/// Computed through the logistic form p₁ = 1/(e^x + 1) with x = βħω, which
/// stays exact in both the ground-state (x → ∞) and maximally mixed (β = 0)
/// limits. Coherences are exactly zero and the trace exactly one.
pub fn gibbs_state(omega: f64, beta: f64, hbar: f64) -> Result<StateVec> {
    if !(omega > 0.0) {
        return Err(Error::Domain {
            what: "omega",
            value: omega,
        });
    }
    if !(beta >= 0.0) {
        return Err(Error::Domain {
            what: "beta",
            value: beta,
        });
    }
    let x = beta * hbar * omega;
    let p1 = 1.0 / (x.exp() + 1.0);
    let p0 = 1.0 / (1.0 + (-x).exp());
    Ok(StateVec::from_populations(p1, p0))
}

/// Analytic d/ds of the instantaneous Gibbs state along branch `b`:
/// dρ₁₁/ds = (2n+1)⁻² · (−βħ n(n+1)) · dω/ds, traceless by construction.
pub fn d_gibbs_ds(b: &BranchProtocol, s: f64, hbar: f64) -> Result<StateVec> {
    let beta = b.reservoir.beta;
    let n = mean_occupation(b.omega_extended(s), beta, hbar)?;
    let dn_domega = -beta * hbar * n * (n + 1.0);
    let dp1_dn = 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 1.0));
    let dp1 = dp1_dn * dn_domega * b.domega_extended(s);
    Ok(StateVec::from_populations(dp1, -dp1))
}

/// Closed-form Drazin inverse of [`liouvillian`]: the population block maps
/// through −1/(γ(2n+1)) on its traceless part and the coherence entries are
/// plain reciprocals.
pub fn drazin_tls(omega: f64, gamma: f64, n: f64) -> Superop {
    let d2 = gamma * (2.0 * n + 1.0) * (2.0 * n + 1.0);
    let a = (n + 1.0) / d2;
    let b = n / d2;
    let one = re(1.0);
    Superop::from_matrix(Matrix4::new(
        re(-a),
        re(0.0),
        re(0.0),
        re(b),
        re(0.0),
        one / Complex64::new(-gamma * (n + 0.5), -omega),
        re(0.0),
        re(0.0),
        re(0.0),
        re(0.0),
        one / Complex64::new(-gamma * (n + 0.5), omega),
        re(0.0),
        re(a),
        re(0.0),
        re(0.0),
        re(-b),
    ))
}

/// Drazin inverse of branch `b` at rescaled time `s`.
pub fn branch_drazin(b: &BranchProtocol, s: f64, hbar: f64) -> Result<Superop> {
    let bath = BathResponse::at(b, s, hbar)?;
    Ok(drazin_tls(b.omega_extended(s), bath.gamma, bath.n))
}

/// Effective temperature (ħω/k_B)/ln(ρ₀/ρ₁) of a diagonal state.
///
/// Undefined (an error) for inverted or equal populations.
pub fn effective_temperature(state: &StateVec, omega: f64, hbar: f64, k_b: f64) -> Result<f64> {
    let p1 = state.excited().re;
    let p0 = state.ground().re;
    if !(p0 > p1 && p1 > 0.0) {
        return Err(Error::NonThermalState {
            excited: p1,
            ground: p0,
        });
    }
    Ok(hbar * omega / (k_b * (p0 / p1).ln()))
}
