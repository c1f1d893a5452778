//! Configuration ingestion, sweep execution and machine-readable output.
//!
//! A run is described by a single JSON document whose keys mirror the
//! physical parameters; anything omitted falls back to the built-in default
//! set (γ₀ = k_B = ħ = 1, δ_c = k_B·T_c, ζ_c = ζ_h = 2, T_h = 6, T_p = 2.4,
//! T_c = 2). Sweeps evaluate a grid over (α, τ_c, τ_p), solve τ_h from the
//! time-constraint equation at each point, and emit one row per grid point
//! in a fixed order so identical configurations produce identical bytes.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize;
use crate::protocol::CycleConfig;
use crate::quad::QuadratureSpec;
use crate::thermo::{self, CycleFunctionals, CycleMetrics};

/// Format version stamped into the CSV header comment.
pub const CSV_FORMAT_VERSION: &str = "tricycle-csv-v1";

/// Sweep column order; the CSV header and the JSONL keys both follow it.
pub const SWEEP_COLUMNS: [&str; 19] = [
    "tau_c",
    "tau_p",
    "tau_h",
    "alpha",
    "eps",
    "eps_r",
    "R",
    "dS_en",
    "Lbar2",
    "lh",
    "rh",
    "lh_minus_rh",
    "L_c",
    "L_h",
    "L_p",
    "Sigma_c",
    "Sigma_h",
    "Sigma_p",
    "status",
];

/// An inclusive arithmetic range; accepts `x`, `"start:stop:step"` or
/// `{"start": .., "stop": .., "step": ..}` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn fixed(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::Usage(format!("invalid range {start}:{stop}:{step}")));
        }
        Ok(Self { start, stop, step })
    }

    /// `"10:40:5"`, `"10:40"` (step 1) or `"20"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("cannot parse '{t}' as a number")))
        };
        match parts.as_slice() {
            [v] => Ok(Self::fixed(num(v)?)),
            [a, b] => Self::new(num(a)?, num(b)?, 1.0),
            [a, b, c] => Self::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::Usage(format!("cannot parse range '{text}'"))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let v = self.start + self.step * k as f64;
            if v > self.stop + 1e-9 * self.step {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }
}

impl<'de> Deserialize<'de> for RangeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Scalar(f64),
            Text(String),
            Triple { start: f64, stop: f64, step: f64 },
        }
        match Raw::deserialize(d)? {
            Raw::Scalar(v) => Ok(RangeSpec::fixed(v)),
            Raw::Text(t) => RangeSpec::parse(&t).map_err(serde::de::Error::custom),
            Raw::Triple { start, stop, step } => {
                RangeSpec::new(start, stop, step).map_err(serde::de::Error::custom)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

/// Integrator settings for the oracle subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    /// Ladder of branch durations for the order check.
    pub tau_ladder: Vec<f64>,
    /// Fixed step count per branch; `None` derives it from the relaxation
    /// rate.
    pub steps: Option<usize>,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            tau_ladder: vec![40.0, 80.0, 160.0],
            steps: None,
        }
    }
}

/// A full run description; the JSON keys are the field names below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(rename = "T_c")]
    pub t_c: f64,
    #[serde(rename = "T_p")]
    pub t_p: f64,
    #[serde(rename = "T_h")]
    pub t_h: f64,
    pub zeta_c: f64,
    pub zeta_h: f64,
    /// Cold-branch amplitude; defaults to k_B·T_c when absent.
    pub delta_c: Option<f64>,
    pub hbar: f64,
    #[serde(rename = "k_B")]
    pub k_b: f64,
    pub gamma0: f64,
    /// Spectral exponents to sweep.
    pub alpha: Vec<f64>,
    pub tau_c: RangeSpec,
    pub tau_p: RangeSpec,
    /// Fixed-COP target for the optimize subcommand.
    pub cop_target: Option<f64>,
    pub nodes: usize,
    pub refinements: usize,
    pub oracle: OracleSettings,
    /// Freeze every drive at its starting frequency. Diagnostic switch for
    /// the oracle subcommand, where the expansion becomes exact; sweeps are
    /// meaningless with it (Σ vanishes on every branch).
    pub static_drive: bool,
    pub out: Option<String>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t_c: 2.0,
            t_p: 2.4,
            t_h: 6.0,
            zeta_c: 2.0,
            zeta_h: 2.0,
            delta_c: None,
            hbar: 1.0,
            k_b: 1.0,
            gamma0: 1.0,
            alpha: vec![0.8],
            tau_c: RangeSpec::new(10.0, 40.0, 5.0).unwrap(),
            tau_p: RangeSpec::new(10.0, 40.0, 5.0).unwrap(),
            cop_target: None,
            nodes: 801,
            refinements: 1,
            oracle: OracleSettings::default(),
            static_drive: false,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("bad config: {e}")))
    }

    pub fn delta_c_value(&self) -> f64 {
        self.delta_c.unwrap_or(self.k_b * self.t_c)
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        QuadratureSpec::new(self.nodes, self.refinements)
    }

    /// Closed cycle at one spectral exponent; durations filled in later.
    pub fn cycle_config(&self, alpha: f64) -> Result<CycleConfig> {
        let mut config = CycleConfig::from_seeds(
            self.t_c,
            self.t_h,
            self.t_p,
            self.zeta_c,
            self.zeta_h,
            self.delta_c_value(),
            alpha,
            self.gamma0,
            [1.0; 3],
            self.hbar,
            self.k_b,
        )?;
        if self.static_drive {
            for b in &mut config.branches {
                b.shape = crate::protocol::DriveShape::Static;
            }
        }
        Ok(config)
    }
}

/// The default parameter set at one spectral exponent, with explicit
/// durations. This is the configuration every diagnostic and test sweeps
/// around.
pub fn caption_config(alpha: f64, taus: [f64; 3]) -> CycleConfig {
    caption_config_with(2.0, 2.0, 2.0, alpha, taus)
}

/// Default temperatures and constants with a custom drive (δ_c, ζ_c, ζ_h).
pub fn caption_config_with(
    delta_c: f64,
    zeta_c: f64,
    zeta_h: f64,
    alpha: f64,
    taus: [f64; 3],
) -> CycleConfig {
    CycleConfig::from_seeds(
        2.0, 6.0, 2.4, zeta_c, zeta_h, delta_c, alpha, 1.0, taus, 1.0, 1.0,
    )
    .expect("default parameters always close")
}

/// Outcome of one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Ok,
    /// The time-constraint equation has no positive root here.
    Infeasible,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "OK",
            RowStatus::Infeasible => "INFEASIBLE",
        }
    }
}

/// One sweep row: the grid point, the solved duration and the metrics.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub tau_c: f64,
    pub tau_p: f64,
    pub tau_h: Option<f64>,
    pub alpha: f64,
    pub metrics: Option<CycleMetrics>,
    pub status: RowStatus,
}

impl SweepRow {
    /// lh − rh, the margin of the trade-off bound; `None` when infeasible.
    pub fn bound_margin(&self) -> Option<f64> {
        self.metrics.as_ref().map(|m| m.lh - m.rh)
    }
}

fn grid_values(cfg: &RunConfig) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let alphas = cfg.alpha.clone();
    let tau_cs = cfg.tau_c.values();
    let tau_ps = cfg.tau_p.values();
    if alphas.is_empty() || tau_cs.is_empty() || tau_ps.is_empty() {
        return Err(Error::Usage("empty sweep grid".into()));
    }
    Ok((alphas, tau_cs, tau_ps))
}

/// Runs the (α, τ_c, τ_p) grid: closes parameters, solves τ_h, assembles
/// metrics. Rows are ordered by grid index (α outermost, then τ_c, then
/// τ_p) regardless of evaluation order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let (alphas, tau_cs, tau_ps) = grid_values(cfg)?;
    let spec = cfg.quadrature()?;

    // The branch functionals depend only on α; compute them once each.
    let prepared: Vec<(f64, CycleConfig, CycleFunctionals)> = alphas
        .par_iter()
        .map(|&alpha| -> Result<_> {
            let base = cfg.cycle_config(alpha)?;
            let funcs = CycleFunctionals::compute(&base, spec)?;
            Ok((alpha, base, funcs))
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::new();
    for (alpha_idx, _) in prepared.iter().enumerate() {
        for &tau_c in &tau_cs {
            for &tau_p in &tau_ps {
                points.push((alpha_idx, tau_c, tau_p));
            }
        }
    }

    points
        .par_iter()
        .map(|&(alpha_idx, tau_c, tau_p)| -> Result<SweepRow> {
            let (alpha, base, funcs) = &prepared[alpha_idx];
            match optimize::solve_tau_h(&funcs.d_s_eq(), &funcs.sigma(), tau_c, tau_p) {
                Ok(tau_h) => {
                    let closed = base.with_taus([tau_c, tau_h, tau_p]);
                    let metrics = thermo::cycle_metrics_from_functionals(&closed, funcs)?;
                    Ok(SweepRow {
                        tau_c,
                        tau_p,
                        tau_h: Some(tau_h),
                        alpha: *alpha,
                        metrics: Some(metrics),
                        status: RowStatus::Ok,
                    })
                }
                Err(Error::NoPositiveRoot { .. }) => Ok(SweepRow {
                    tau_c,
                    tau_p,
                    tau_h: None,
                    alpha: *alpha,
                    metrics: None,
                    status: RowStatus::Infeasible,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// One fixed-COP optimization row.
#[derive(Debug, Clone)]
pub struct OptimizeRow {
    pub tau_c: f64,
    pub alpha: f64,
    pub allocation: Option<optimize::AllocationResult>,
    /// COP recomputed through the thermodynamic pipeline at the returned
    /// allocation.
    pub eps_check: Option<f64>,
    pub status: RowStatus,
}

/// Fixed-COP sweep over the τ_c range for every α.
pub fn run_optimize(cfg: &RunConfig) -> Result<Vec<OptimizeRow>> {
    let eps_target = cfg
        .cop_target
        .ok_or_else(|| Error::Usage("optimize needs a cop_target".into()))?;
    let (alphas, tau_cs, _) = grid_values(cfg)?;
    let spec = cfg.quadrature()?;

    let prepared: Vec<(f64, CycleConfig, CycleFunctionals)> = alphas
        .par_iter()
        .map(|&alpha| -> Result<_> {
            let base = cfg.cycle_config(alpha)?;
            let funcs = CycleFunctionals::compute(&base, spec)?;
            Ok((alpha, base, funcs))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (alpha, base, funcs) in &prepared {
        for &tau_c in &tau_cs {
            match optimize::solve_fixed_cop(base, funcs, tau_c, eps_target) {
                Ok(alloc) => {
                    let closed = base.with_taus(alloc.taus());
                    let metrics = thermo::cycle_metrics_from_functionals(&closed, funcs)?;
                    rows.push(OptimizeRow {
                        tau_c,
                        alpha: *alpha,
                        allocation: Some(alloc),
                        eps_check: Some(metrics.eps),
                        status: RowStatus::Ok,
                    });
                }
                Err(Error::InfeasibleCop { .. }) | Err(Error::NoPositiveRoot { .. }) => {
                    rows.push(OptimizeRow {
                        tau_c,
                        alpha: *alpha,
                        allocation: None,
                        eps_check: None,
                        status: RowStatus::Infeasible,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rows)
}

/// 17 significant digits, the round-trip-exact width for f64.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt(v),
        None => "nan".into(),
    }
}

fn sweep_row_numbers(row: &SweepRow) -> [Option<f64>; 18] {
    let m = row.metrics.as_ref();
    [
        Some(row.tau_c),
        Some(row.tau_p),
        row.tau_h,
        Some(row.alpha),
        m.map(|m| m.eps),
        m.map(|m| m.eps_r),
        m.map(|m| m.cooling_rate),
        m.map(|m| m.d_s_en),
        m.map(|m| m.lbar2),
        m.map(|m| m.lh),
        m.map(|m| m.rh),
        m.map(|m| m.lh - m.rh),
        m.map(|m| m.branches[0].length),
        m.map(|m| m.branches[1].length),
        m.map(|m| m.branches[2].length),
        m.map(|m| m.branches[0].sigma),
        m.map(|m| m.branches[1].sigma),
        m.map(|m| m.branches[2].sigma),
    ]
}

/// Writes the sweep table as CSV with a version comment, LF line endings
/// and 17-significant-digit numbers.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "# format: {CSV_FORMAT_VERSION}")?;
    writeln!(w, "{}", SWEEP_COLUMNS.join(","))?;
    for row in rows {
        let numbers = sweep_row_numbers(row);
        let mut fields: Vec<String> = numbers.iter().map(|v| fmt_opt(*v)).collect();
        fields.push(row.status.as_str().into());
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Writes the sweep table as JSON lines with the same field names as the
/// CSV columns; unavailable values become `null`.
pub fn write_sweep_jsonl<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    for row in rows {
        let numbers = sweep_row_numbers(row);
        let mut fields: Vec<String> = SWEEP_COLUMNS
            .iter()
            .zip(numbers.iter().map(|v| match v {
                Some(v) => fmt(*v),
                None => "null".into(),
            }))
            .map(|(name, value)| format!("\"{name}\":{value}"))
            .collect();
        fields.push(format!("\"status\":\"{}\"", row.status.as_str()));
        writeln!(w, "{{{}}}", fields.join(","))?;
    }
    Ok(())
}

pub const OPTIMIZE_COLUMNS: [&str; 7] = [
    "tau_c",
    "alpha",
    "tau_h",
    "tau_p",
    "eps_check",
    "residual",
    "status",
];

fn optimize_row_numbers(row: &OptimizeRow) -> [Option<f64>; 6] {
    let a = row.allocation.as_ref();
    [
        Some(row.tau_c),
        Some(row.alpha),
        a.map(|a| a.tau_h),
        a.map(|a| a.tau_p),
        row.eps_check,
        a.map(|a| a.residual),
    ]
}

pub fn write_optimize_csv<W: Write>(rows: &[OptimizeRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "# format: {CSV_FORMAT_VERSION}")?;
    writeln!(w, "{}", OPTIMIZE_COLUMNS.join(","))?;
    for row in rows {
        let mut fields: Vec<String> = optimize_row_numbers(row)
            .iter()
            .map(|v| fmt_opt(*v))
            .collect();
        fields.push(row.status.as_str().into());
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn write_optimize_jsonl<W: Write>(rows: &[OptimizeRow], mut w: W) -> std::io::Result<()> {
    for row in rows {
        let numbers = optimize_row_numbers(row);
        let mut fields: Vec<String> = OPTIMIZE_COLUMNS
            .iter()
            .zip(numbers.iter().map(|v| match v {
                Some(v) => fmt(*v),
                None => "null".into(),
            }))
            .map(|(name, value)| format!("\"{name}\":{value}"))
            .collect();
        fields.push(format!("\"status\":\"{}\"", row.status.as_str()));
        writeln!(w, "{{{}}}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing_and_values() {
        let r = RangeSpec::parse("10:40:5").unwrap();
        assert_eq!(r.values(), vec![10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]);
        assert_eq!(RangeSpec::parse("20").unwrap().values(), vec![20.0]);
        assert_eq!(
            RangeSpec::parse("1:3").unwrap().values(),
            vec![1.0, 2.0, 3.0]
        );
        assert!(RangeSpec::parse("4:1:-1").is_err());
        assert!(RangeSpec::parse("a:b").is_err());
    }

    #[test]
    fn config_json_roundtrip_with_defaults() {
        let cfg = RunConfig::from_json(r#"{"alpha":[0.4],"tau_c":"12:14:1","nodes":201}"#).unwrap();
        assert_eq!(cfg.alpha, vec![0.4]);
        assert_eq!(cfg.nodes, 201);
        assert_eq!(cfg.t_h, 6.0);
        assert_eq!(cfg.delta_c_value(), 2.0);
        assert!(RunConfig::from_json("{nonsense").is_err());
    }

    #[test]
    fn sweep_emits_one_row_per_grid_point_in_order() {
        let mut cfg = RunConfig {
            alpha: vec![0.8],
            tau_c: RangeSpec::fixed(20.0),
            tau_p: RangeSpec::new(25.0, 30.0, 5.0).unwrap(),
            nodes: 201,
            refinements: 0,
            ..RunConfig::default()
        };
        cfg.cop_target = None;
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].tau_p, 25.0);
        assert_eq!(rows[1].tau_p, 30.0);
        assert!(rows.iter().all(|r| r.status == RowStatus::Ok));
        for r in &rows {
            assert!(r.bound_margin().unwrap() > 0.0);
        }
    }

    #[test]
    fn sweep_flags_infeasible_points() {
        let cfg = RunConfig {
            alpha: vec![0.8],
            tau_c: RangeSpec::fixed(20.0),
            tau_p: RangeSpec::fixed(20.0),
            nodes: 201,
            refinements: 0,
            ..RunConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].status, RowStatus::Infeasible);
        assert!(rows[0].metrics.is_none());
    }

    #[test]
    fn empty_grid_is_a_usage_error() {
        let cfg = RunConfig {
            alpha: vec![],
            ..RunConfig::default()
        };
        assert!(matches!(run_sweep(&cfg), Err(Error::Usage(_))));
    }

    #[test]
    fn csv_output_is_deterministic_and_carries_the_version() {
        let cfg = RunConfig {
            alpha: vec![0.8],
            tau_c: RangeSpec::fixed(20.0),
            tau_p: RangeSpec::new(20.0, 30.0, 10.0).unwrap(),
            nodes: 201,
            refinements: 0,
            ..RunConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        let mut a = Vec::new();
        write_sweep_csv(&rows, &mut a).unwrap();
        let rows2 = run_sweep(&cfg).unwrap();
        let mut b = Vec::new();
        write_sweep_csv(&rows2, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with(&format!("# format: {CSV_FORMAT_VERSION}\n")));
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("tau_c,tau_p,tau_h"));
        assert!(!text.contains('\r'));
        // One header comment, one header, two data rows.
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(2).unwrap().contains("INFEASIBLE"));
        assert!(text.lines().nth(3).unwrap().ends_with("OK"));
    }

    #[test]
    fn jsonl_rows_parse_as_json() {
        let cfg = RunConfig {
            alpha: vec![0.8],
            tau_c: RangeSpec::fixed(20.0),
            tau_p: RangeSpec::fixed(30.0),
            nodes: 201,
            refinements: 0,
            ..RunConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_sweep_jsonl(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("lh_minus_rh").unwrap().is_number());
            assert_eq!(v.get("status").unwrap(), "OK");
        }
    }

    #[test]
    fn emitted_rows_respect_the_reversible_bounds() {
        let cfg = RunConfig {
            alpha: vec![0.0, 0.8],
            tau_c: RangeSpec::new(10.0, 40.0, 10.0).unwrap(),
            tau_p: RangeSpec::new(10.0, 40.0, 10.0).unwrap(),
            nodes: 201,
            refinements: 0,
            ..RunConfig::default()
        };
        let mut feasible = 0;
        for row in run_sweep(&cfg).unwrap() {
            let Some(m) = row.metrics else { continue };
            feasible += 1;
            assert!(m.eps <= m.eps_r, "eps {} above eps_r {}", m.eps, m.eps_r);
            assert!(m.d_s_en >= 0.0);
        }
        assert!(feasible > 0);
    }

    #[test]
    fn optimize_rows_reproduce_the_target_cop() {
        let cfg = RunConfig {
            alpha: vec![0.8],
            tau_c: RangeSpec::new(10.0, 14.0, 2.0).unwrap(),
            cop_target: Some(2.0),
            nodes: 401,
            refinements: 0,
            ..RunConfig::default()
        };
        let rows = run_optimize(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert_eq!(r.status, RowStatus::Ok);
            assert!((r.eps_check.unwrap() - 2.0).abs() < 1e-8);
            let a = r.allocation.unwrap();
            assert!(a.residual.abs() < 1e-9 * 2.0 * a.total_tau());
        }
    }

    #[test]
    fn optimize_flags_unreachable_targets() {
        let cfg = RunConfig {
            alpha: vec![0.8],
            tau_c: RangeSpec::new(10.0, 20.0, 5.0).unwrap(),
            cop_target: Some(5.0),
            nodes: 201,
            refinements: 0,
            ..RunConfig::default()
        };
        let rows = run_optimize(&cfg).unwrap();
        assert!(rows.iter().all(|r| r.status == RowStatus::Infeasible));
    }

    #[test]
    fn optimize_without_a_target_is_a_usage_error() {
        let cfg = RunConfig::default();
        assert!(matches!(run_optimize(&cfg), Err(Error::Usage(_))));
    }
}
