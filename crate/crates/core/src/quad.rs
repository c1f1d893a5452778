//! Composite Simpson quadrature on the unit interval, with node-doubling
//! refinement to expose a convergence estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature settings: an odd node count (≥ 3) and the number of doubling
/// passes used for the convergence estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub refinements: usize,
}

impl QuadratureSpec {
    pub fn new(nodes: usize, refinements: usize) -> Result<Self> {
        if nodes < 3 || nodes.is_multiple_of(2) {
            return Err(Error::Usage(format!(
                "quadrature nodes must be odd and at least 3, got {nodes}"
            )));
        }
        Ok(Self { nodes, refinements })
    }

    /// 801 nodes with one doubling pass.
    pub fn standard() -> Self {
        Self {
            nodes: 801,
            refinements: 1,
        }
    }

    pub fn with_nodes(self, nodes: usize) -> Result<Self> {
        Self::new(nodes, self.refinements)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::standard()
    }
}

/// Result of a quadrature: the value at the finest grid and the change under
/// the last node doubling (absent if no refinement was requested).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub convergence: Option<f64>,
    pub nodes_used: usize,
}

fn simpson(f: &mut dyn FnMut(f64) -> Result<f64>, nodes: usize) -> Result<f64> {
    let panels = nodes - 1;
    let h = 1.0 / panels as f64;
    let mut acc = 0.0;
    for k in 0..=panels {
        let s = if k == panels { 1.0 } else { k as f64 * h };
        let y = f(s)?;
        if !y.is_finite() {
            return Err(Error::NonFiniteSample { s });
        }
        let w = if k == 0 || k == panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * y;
    }
    Ok(acc * h / 3.0)
}

/// ∫₀¹ f(s) ds by composite Simpson, refined by node doubling.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    spec: QuadratureSpec,
) -> Result<Quadrature> {
    let mut nodes = spec.nodes;
    let mut value = simpson(&mut f, nodes)?;
    let mut convergence = None;
    for _ in 0..spec.refinements {
        nodes = 2 * (nodes - 1) + 1;
        let refined = simpson(&mut f, nodes)?;
        convergence = Some((refined - value).abs());
        value = refined;
    }
    Ok(Quadrature {
        value,
        convergence,
        nodes_used: nodes,
    })
}

/// Convenience wrapper for infallible integrands.
pub fn integrate_fn<F: FnMut(f64) -> f64>(mut f: F, spec: QuadratureSpec) -> Result<Quadrature> {
    integrate(|s| Ok(f(s)), spec)
}
