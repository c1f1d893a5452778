//! Frequency schedules for the three isothermal branches and the parameter
//! closure imposed by the adiabatic quenches.
//!
//! Each branch drives the level splitting with a cosine,
//! ω(s) = δ[cos(πs) + ζ] in rescaled time s = t/τ (the auxiliary branch runs
//! the cosine backwards). The quenches rescale the frequency by the ratio of
//! reservoir temperatures, which pins (ζ_p, δ_h, δ_p) once the temperatures,
//! ζ_c, ζ_h and δ_c are chosen and keeps βħω continuous around the cycle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the quench-closure checks.
const CLOSURE_TOL: f64 = 1e-10;

/// Reservoir labels, in cycle order: cold, hot, auxiliary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReservoirLabel {
    Cold,
    Hot,
    Auxiliary,
}

impl ReservoirLabel {
    pub const ALL: [ReservoirLabel; 3] = [Self::Cold, Self::Hot, Self::Auxiliary];

    /// Conventional one-letter name: c, h or p.
    pub fn letter(&self) -> char {
        match self {
            Self::Cold => 'c',
            Self::Hot => 'h',
            Self::Auxiliary => 'p',
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Self::Cold => 0,
            Self::Hot => 1,
            Self::Auxiliary => 2,
        }
    }
}

/// A thermal reservoir with temperature in energy/k_B units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reservoir {
    pub label: ReservoirLabel,
    /// Temperature T (> 0).
    pub temperature: f64,
    /// Inverse temperature β = 1/(k_B T).
    pub beta: f64,
}

impl Reservoir {
    pub fn new(label: ReservoirLabel, temperature: f64, k_b: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::Domain {
                what: "temperature",
                value: temperature,
            });
        }
        Ok(Self {
            label,
            temperature,
            beta: 1.0 / (k_b * temperature),
        })
    }
}

/// Drive direction of the cosine schedule.
///
/// `Static` disables the modulation entirely (ω held at its s = 0 value);
/// it exists for degenerate branches used as references in tests and
/// diagnostics, not for closed cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriveShape {
    Forward,
    Reversed,
    Static,
}

/// One isothermal branch: reservoir, drive shape and bath response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchProtocol {
    pub reservoir: Reservoir,
    /// Amplitude δ (frequency units, > 0).
    pub delta: f64,
    /// Displacement ζ (> 1, so ω stays positive).
    pub zeta: f64,
    /// Duration τ (> 0).
    pub tau: f64,
    pub shape: DriveShape,
    /// Spectral exponent α ≥ 0 of the bath.
    pub alpha: f64,
    /// Coupling constant γ₀ > 0.
    pub gamma0: f64,
}

impl BranchProtocol {
    /// ω(s) without the domain check; the cosine extends smoothly to all s,
    /// which the finite-difference stencils rely on near the endpoints.
    pub(crate) fn omega_extended(&self, s: f64) -> f64 {
        match self.shape {
            DriveShape::Forward => self.delta * ((std::f64::consts::PI * s).cos() + self.zeta),
            DriveShape::Reversed => {
                self.delta * ((std::f64::consts::PI * (1.0 - s)).cos() + self.zeta)
            }
            DriveShape::Static => self.delta * (1.0 + self.zeta),
        }
    }

    pub(crate) fn domega_extended(&self, s: f64) -> f64 {
        let pi = std::f64::consts::PI;
        match self.shape {
            DriveShape::Forward => -pi * self.delta * (pi * s).sin(),
            DriveShape::Reversed => pi * self.delta * (pi * (1.0 - s)).sin(),
            DriveShape::Static => 0.0,
        }
    }

    /// Damping rate γ(s) = γ₀ ω(s)^α.
    pub fn damping_rate(&self, s: f64) -> f64 {
        self.gamma0 * self.omega_extended(s).powf(self.alpha)
    }
}

/// ω_v(s) for rescaled time s ∈ [0, 1].
pub fn omega(b: &BranchProtocol, s: f64) -> Result<f64> {
    check_unit_interval(s)?;
    Ok(b.omega_extended(s))
}

/// dω_v/ds. Vanishes at both endpoints by the cosine construction.
pub fn domega_ds(b: &BranchProtocol, s: f64) -> Result<f64> {
    check_unit_interval(s)?;
    Ok(b.domega_extended(s))
}

fn check_unit_interval(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            what: "s",
            value: s,
        });
    }
    Ok(())
}

/// Closes the quench relations: given the three temperatures, ζ_c, ζ_h and
/// δ_c, returns (ζ_p, δ_h, δ_p) such that the frequency rescales by the
/// temperature ratio across every quench.
pub fn close_parameters(
    t_c: f64,
    t_h: f64,
    t_p: f64,
    zeta_c: f64,
    zeta_h: f64,
    delta_c: f64,
) -> Result<(f64, f64, f64)> {
    if !(t_h > t_p && t_p > t_c && t_c > 0.0) {
        return Err(Error::Domain {
            what: "temperature ordering",
            value: t_p,
        });
    }
    for (what, v) in [("zeta_c", zeta_c), ("zeta_h", zeta_h)] {
        if !(v > 1.0) {
            return Err(Error::Domain { what, value: v });
        }
    }
    if !(delta_c > 0.0) {
        return Err(Error::Domain {
            what: "delta_c",
            value: delta_c,
        });
    }
    let zeta_p = (1.0 + zeta_c * zeta_h) / (zeta_c + zeta_h);
    let delta_h = t_h * (zeta_c - 1.0) / (t_c * (1.0 + zeta_h)) * delta_c;
    let delta_p = t_p * (zeta_c + zeta_h) / (t_c * (1.0 + zeta_h)) * delta_c;
    if !(zeta_p > 1.0) {
        return Err(Error::Domain {
            what: "zeta_p",
            value: zeta_p,
        });
    }
    Ok((zeta_p, delta_h, delta_p))
}

/// The full cycle: the three branch protocols plus physical constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    /// Branches in cycle order (cold, hot, auxiliary).
    pub branches: [BranchProtocol; 3],
    pub hbar: f64,
    pub k_b: f64,
}

impl CycleConfig {
    /// Builds a closed cycle from the free parameters. The auxiliary branch
    /// runs the cosine reversed; cold and hot run it forward.
    #[allow(clippy::too_many_arguments)]
    pub fn from_seeds(
        t_c: f64,
        t_h: f64,
        t_p: f64,
        zeta_c: f64,
        zeta_h: f64,
        delta_c: f64,
        alpha: f64,
        gamma0: f64,
        taus: [f64; 3],
        hbar: f64,
        k_b: f64,
    ) -> Result<Self> {
        let (zeta_p, delta_h, delta_p) = close_parameters(t_c, t_h, t_p, zeta_c, zeta_h, delta_c)?;
        let mk = |label, t, delta, zeta, shape, tau| -> Result<BranchProtocol> {
            Ok(BranchProtocol {
                reservoir: Reservoir::new(label, t, k_b)?,
                delta,
                zeta,
                tau,
                shape,
                alpha,
                gamma0,
            })
        };
        Ok(Self {
            branches: [
                mk(
                    ReservoirLabel::Cold,
                    t_c,
                    delta_c,
                    zeta_c,
                    DriveShape::Forward,
                    taus[0],
                )?,
                mk(
                    ReservoirLabel::Hot,
                    t_h,
                    delta_h,
                    zeta_h,
                    DriveShape::Forward,
                    taus[1],
                )?,
                mk(
                    ReservoirLabel::Auxiliary,
                    t_p,
                    delta_p,
                    zeta_p,
                    DriveShape::Reversed,
                    taus[2],
                )?,
            ],
            hbar,
            k_b,
        })
    }

    pub fn branch(&self, label: ReservoirLabel) -> &BranchProtocol {
        &self.branches[label.index()]
    }

    pub fn with_taus(&self, taus: [f64; 3]) -> Self {
        let mut out = self.clone();
        for (b, tau) in out.branches.iter_mut().zip(taus) {
            b.tau = tau;
        }
        out
    }

    pub fn total_tau(&self) -> f64 {
        self.branches.iter().map(|b| b.tau).sum()
    }
}

/// One violated invariant, with the size of the violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub description: String,
    pub magnitude: f64,
}

/// Checks every cycle invariant and returns the violations; an empty list
/// means the configuration is valid. Diagnostics only, never an error.
pub fn validate_cycle(config: &CycleConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let [c, h, p] = &config.branches;

    let t_c = c.reservoir.temperature;
    let t_h = h.reservoir.temperature;
    let t_p = p.reservoir.temperature;
    if !(t_h > t_p && t_p > t_c && t_c > 0.0) {
        out.push(Diagnostic {
            description: format!("temperature ordering violated: T_h={t_h}, T_p={t_p}, T_c={t_c}"),
            magnitude: f64::NAN,
        });
    }

    for b in &config.branches {
        let letter = b.reservoir.label.letter();
        if !(b.zeta > 1.0) {
            out.push(Diagnostic {
                description: format!("zeta_{letter} = {} must exceed 1", b.zeta),
                magnitude: 1.0 - b.zeta,
            });
        }
        for (what, v) in [("delta", b.delta), ("tau", b.tau), ("gamma0", b.gamma0)] {
            if !(v > 0.0) {
                out.push(Diagnostic {
                    description: format!("{what}_{letter} = {v} must be positive"),
                    magnitude: -v,
                });
            }
        }
        if b.alpha < 0.0 {
            out.push(Diagnostic {
                description: format!("alpha_{letter} = {} must be nonnegative", b.alpha),
                magnitude: -b.alpha,
            });
        }
        let beta_residual = (b.reservoir.beta * b.reservoir.temperature * config.k_b - 1.0).abs();
        if beta_residual > 1e-14 {
            out.push(Diagnostic {
                description: format!("beta_{letter} inconsistent with T_{letter}"),
                magnitude: beta_residual,
            });
        }
    }

    // Quench closure ratios.
    let checks = [
        (
            "delta_c(zeta_c-1)/[delta_h(zeta_h+1)] = T_c/T_h",
            c.delta * (c.zeta - 1.0) / (h.delta * (h.zeta + 1.0)),
            t_c / t_h,
        ),
        (
            "delta_h(zeta_h-1)/[delta_p(zeta_p-1)] = T_h/T_p",
            h.delta * (h.zeta - 1.0) / (p.delta * (p.zeta - 1.0)),
            t_h / t_p,
        ),
        (
            "delta_p(zeta_p+1)/[delta_c(zeta_c+1)] = T_p/T_c",
            p.delta * (p.zeta + 1.0) / (c.delta * (c.zeta + 1.0)),
            t_p / t_c,
        ),
    ];
    for (name, got, want) in checks {
        let rel = (got - want).abs() / want.abs();
        if rel > CLOSURE_TOL {
            out.push(Diagnostic {
                description: format!("quench closure violated: {name}"),
                magnitude: rel,
            });
        }
    }
    out
}
