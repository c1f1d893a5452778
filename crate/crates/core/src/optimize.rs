//! Time allocation from the stationarity of the constrained cooling-rate
//! problem. Eliminating the multipliers leaves one constraint equation,
//!
//! ```text
//! ΔS_h τ_h²/Σ_h + ΔS_p τ_p²/Σ_p + ΔS_c τ_c²/Σ_c + 2(τ_c + τ_h + τ_p) = 0,
//! ```
//!
//! quadratic in each duration separately because ΔS_eq and Σ are computed
//! in rescaled time and therefore duration-independent. Two entry points
//! cover the two uses: solving τ_h directly from (τ_c, τ_p), and the
//! fixed-COP pipeline that first pins τ_h from the COP relation and then
//! closes τ_p through the constraint.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::{CycleConfig, ReservoirLabel};
use crate::thermo::CycleFunctionals;

/// An allocation returned by the optimizer, with the constraint residual
/// and the branch functionals it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AllocationResult {
    pub tau_c: f64,
    pub tau_h: f64,
    pub tau_p: f64,
    pub residual: f64,
    /// ΔS_eq per branch in cycle order (c, h, p).
    pub d_s_eq: [f64; 3],
    /// Σ per branch in cycle order (c, h, p).
    pub sigma: [f64; 3],
}

impl AllocationResult {
    pub fn total_tau(&self) -> f64 {
        self.tau_c + self.tau_h + self.tau_p
    }

    pub fn taus(&self) -> [f64; 3] {
        [self.tau_c, self.tau_h, self.tau_p]
    }
}

/// Left side of the time-constraint equation; zero at a stationary
/// allocation. `d_s` and `sigma` are in cycle order (c, h, p).
pub fn constraint_residual(d_s: &[f64; 3], sigma: &[f64; 3], taus: [f64; 3]) -> Result<f64> {
    for (i, s) in sigma.iter().enumerate() {
        if *s == 0.0 {
            return Err(Error::ZeroSigma {
                branch: ReservoirLabel::ALL[i].letter(),
            });
        }
    }
    let [tau_c, tau_h, tau_p] = taus;
    Ok(d_s[1] * tau_h * tau_h / sigma[1]
        + d_s[2] * tau_p * tau_p / sigma[2]
        + d_s[0] * tau_c * tau_c / sigma[0]
        + 2.0 * (tau_c + tau_h + tau_p))
}

/// Real roots of a x² + 2 x + c = 0 by the cancellation-free quadratic
/// formula (q = −(b + sign(b)√disc)/2 with b = 2).
fn quadratic_roots(a: f64, c: f64) -> Result<(f64, f64)> {
    let disc = 4.0 - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::NoPositiveRoot { discriminant: disc });
    }
    let q = -(2.0 + disc.sqrt()) / 2.0; // b = 2 > 0, so q ≤ −1 and never 0
    Ok((q / a, c / q))
}

/// Picks the admissible root. With one positive root it is returned; with
/// two, the one yielding the larger cooling rate R ∝ q_c_rate/(fixed + τ)
/// wins, which the stationarity condition alone cannot decide.
fn select_positive_root(
    roots: (f64, f64),
    q_c_rate: f64,
    fixed_tau: f64,
    disc: f64,
) -> Result<f64> {
    let mut positive: Vec<f64> = [roots.0, roots.1]
        .into_iter()
        .filter(|r| r.is_finite() && *r > 0.0)
        .collect();
    positive.sort_by(|a, b| a.partial_cmp(b).unwrap());
    match positive.len() {
        0 => Err(Error::NoPositiveRoot { discriminant: disc }),
        1 => Ok(positive[0]),
        _ => {
            let rate = |tau: f64| q_c_rate / (fixed_tau + tau);
            if rate(positive[0]) >= rate(positive[1]) {
                Ok(positive[0])
            } else {
                Ok(positive[1])
            }
        }
    }
}

/// Solves the constraint equation for τ_h at given (τ_c, τ_p).
pub fn solve_tau_h(d_s: &[f64; 3], sigma: &[f64; 3], tau_c: f64, tau_p: f64) -> Result<f64> {
    for (i, s) in sigma.iter().enumerate() {
        if *s == 0.0 {
            return Err(Error::ZeroSigma {
                branch: ReservoirLabel::ALL[i].letter(),
            });
        }
    }
    let a = d_s[1] / sigma[1];
    let c = d_s[2] * tau_p * tau_p / sigma[2]
        + d_s[0] * tau_c * tau_c / sigma[0]
        + 2.0 * (tau_c + tau_p);
    let disc = 4.0 - 4.0 * a * c;
    let roots = quadratic_roots(a, c)?;
    let q_c_rate = d_s[0] + sigma[0] / tau_c;
    select_positive_root(roots, q_c_rate, tau_c + tau_p, disc)
}

/// Fixed-COP pipeline: τ_h in closed form from the COP relation, then τ_p
/// from the constraint equation.
///
/// The target must lie in (0, εᵣ); a target at or above the reversible COP
/// is rejected as infeasible.
pub fn solve_fixed_cop(
    config: &CycleConfig,
    funcs: &CycleFunctionals,
    tau_c: f64,
    eps_target: f64,
) -> Result<AllocationResult> {
    if !(tau_c > 0.0) {
        return Err(Error::Domain {
            what: "tau_c",
            value: tau_c,
        });
    }
    let t_c = config.branch(ReservoirLabel::Cold).reservoir.temperature;
    let t_h = config.branch(ReservoirLabel::Hot).reservoir.temperature;
    let t_p = config
        .branch(ReservoirLabel::Auxiliary)
        .reservoir
        .temperature;
    let eps_r = t_c * (t_h - t_p) / (t_h * (t_p - t_c));
    // The strict upper limit is eps_r; the one-ulp shave keeps targets that
    // only round up to eps_r out of the domain.
    if !(eps_target > 0.0 && eps_target < eps_r * (1.0 - 1e-12)) {
        return Err(Error::InfeasibleCop {
            tau_h: f64::INFINITY,
        });
    }

    let d_s = funcs.d_s_eq();
    let sigma = funcs.sigma();
    for (i, s) in sigma.iter().enumerate() {
        if *s == 0.0 {
            return Err(Error::ZeroSigma {
                branch: ReservoirLabel::ALL[i].letter(),
            });
        }
    }

    // Step 1: T_h(ΔS_h + Σ_h/τ_h) = T_c(ΔS_c + Σ_c/τ_c)/ε solved for τ_h.
    let denom = t_c * (d_s[0] + sigma[0] / tau_c) / (t_h * eps_target) - d_s[1];
    let tau_h = sigma[1] / denom;
    if !(tau_h > 0.0 && tau_h.is_finite()) {
        return Err(Error::InfeasibleCop { tau_h });
    }

    // Step 2: the constraint equation, quadratic in τ_p.
    let a = d_s[2] / sigma[2];
    let c = d_s[1] * tau_h * tau_h / sigma[1]
        + d_s[0] * tau_c * tau_c / sigma[0]
        + 2.0 * (tau_c + tau_h);
    let disc = 4.0 - 4.0 * a * c;
    let roots = quadratic_roots(a, c)?;
    let q_c_rate = d_s[0] + sigma[0] / tau_c;
    let tau_p = select_positive_root(roots, q_c_rate, tau_c + tau_h, disc)?;

    let residual = constraint_residual(&d_s, &sigma, [tau_c, tau_h, tau_p])?;
    Ok(AllocationResult {
        tau_c,
        tau_h,
        tau_p,
        residual,
        d_s_eq: d_s,
        sigma,
    })
}
