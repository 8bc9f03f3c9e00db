//! Sweep driver: runs named checks over a grid of residue specs and collects
//! report rows and per-check summaries.
//!
//! Work items are evaluated in parallel; results are gathered in grid order,
//! so output does not depend on scheduling.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bounds::{
    asymptotic_ratios, check_erdos, check_nathanson_chain, check_rplus_poly_bound, check_theorem1,
};
use crate::counting::{
    convolution_reports, count_bruteforce, count_dp, count_recurrence, CountTable,
};
use crate::partset::{parts_up_to, PartSetVariant, ResidueSpec};
use crate::report::Row;
use crate::series::{
    check_derivative_nonpositive, check_eq1, check_eq2_pointwise, check_eq3,
    check_sinh_inequality, default_t_grid, default_x_grid, find_counterexample_odd_remark,
    remark_grid, remark_report, sqrt_inequality_report,
};

/// Brute-force enumeration runs only up to this `n` inside sweeps.
pub const SWEEP_BRUTEFORCE_MAX: usize = 40;
/// `n` range of the exhaustive square-root sweep.
pub const SQRT_SWEEP_MAX: usize = 200;

/// The fixed check registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum CheckName {
    Counts,
    Theorem1,
    Erdos,
    Chain,
    Rpoly,
    Eq1,
    Eq2,
    Eq3,
    Helpers,
    Remark,
    Ratio,
}

impl CheckName {
    pub const ALL: [CheckName; 11] = [
        Self::Counts,
        Self::Theorem1,
        Self::Erdos,
        Self::Chain,
        Self::Rpoly,
        Self::Eq1,
        Self::Eq2,
        Self::Eq3,
        Self::Helpers,
        Self::Remark,
        Self::Ratio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Counts => "counts",
            Self::Theorem1 => "theorem1",
            Self::Erdos => "erdos",
            Self::Chain => "chain",
            Self::Rpoly => "rpoly",
            Self::Eq1 => "eq1",
            Self::Eq2 => "eq2",
            Self::Eq3 => "eq3",
            Self::Helpers => "helpers",
            Self::Remark => "remark",
            Self::Ratio => "ratio",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which residue specs a sweep covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecGrid {
    /// Every nonempty `R ⊆ {0..m-1}` for every `1 ≤ m ≤ m_max`.
    AllSubsets { m_max: usize },
    /// A single spec.
    Single(ResidueSpec),
}

impl SpecGrid {
    pub fn specs(&self) -> Vec<ResidueSpec> {
        match self {
            Self::AllSubsets { m_max } => (1..=*m_max)
                .flat_map(|m| ResidueSpec::all_subsets(m, false).expect("m ≥ 1"))
                .collect(),
            Self::Single(s) => vec![s.clone()],
        }
    }

    /// Largest modulus covered.
    pub fn m_max(&self) -> usize {
        match self {
            Self::AllSubsets { m_max } => *m_max,
            Self::Single(s) => s.m(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid: SpecGrid,
    pub n_max: usize,
    pub checks: Vec<CheckName>,
}

/// Totals for one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub check: CheckName,
    pub total: usize,
    pub failed: usize,
    /// Smallest slack or margin seen (largest relative deviation for `eq1`,
    /// largest excess for `remark`).
    pub worst: Option<f64>,
    pub passed: bool,
    pub note: String,
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let worst = self
            .worst
            .map(crate::report::fmt_real)
            .unwrap_or_else(|| "-".into());
        write!(
            f,
            "{:<9} {} total={} failed={} worst={}",
            self.check,
            if self.passed { "PASS" } else { "FAIL" },
            self.total,
            self.failed,
            worst
        )?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub rows: Vec<Row>,
    pub summary: CheckSummary,
}

fn min_opt(acc: Option<f64>, v: Option<f64>) -> Option<f64> {
    match (acc, v) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn summarize(check: CheckName, rows: &[Row], worst_of: impl Fn(&Row) -> Option<f64>) -> CheckSummary {
    let failed = rows.iter().filter(|r| !r.holds).count();
    let worst = rows.iter().map(worst_of).fold(None, min_opt);
    CheckSummary {
        check,
        total: rows.len(),
        failed,
        worst,
        passed: failed == 0,
        note: String::new(),
    }
}

fn per_spec<F>(specs: &[ResidueSpec], f: F) -> Vec<Row>
where
    F: Fn(&ResidueSpec) -> Vec<Row> + Sync + Send,
{
    specs.par_iter().map(f).collect::<Vec<_>>().concat()
}

fn counts_rows(spec: &ResidueSpec, n_max: usize) -> Vec<Row> {
    let mut rows = Vec::new();
    for variant in [PartSetVariant::FullA, PartSetVariant::APlus, PartSetVariant::RPlus] {
        let parts = parts_up_to(spec, &variant, n_max);
        let dp: CountTable<BigUint> = count_dp(&parts, n_max).expect("valid parts");
        let rec = count_recurrence::<BigUint>(&parts, n_max);
        for n in 0..=n_max {
            let rec_ok = rec.as_ref().map_or(false, |t| t[n] == dp[n]);
            let brute_ok = n > SWEEP_BRUTEFORCE_MAX
                || count_bruteforce(&parts, n).map_or(false, |b| b == dp[n]);
            rows.push(Row {
                check: "counts".into(),
                m: Some(spec.m()),
                residues: Some(spec.residues_label()),
                variant: Some(variant.label()),
                n: Some(n),
                count: Some(dp[n].to_string()),
                holds: rec_ok && brute_ok,
                ..Row::default()
            });
        }
    }
    rows.extend(
        convolution_reports(spec, n_max)
            .iter()
            .map(|r| Row::from_convolution(spec, r)),
    );
    rows
}

fn helpers_rows(m_max: usize) -> Vec<Row> {
    let grid = default_x_grid::<f64>();
    let mut rows: Vec<Row> = grid
        .iter()
        .map(|&x| Row::from_series(&check_sinh_inequality(x).expect("x > 0")))
        .collect();
    for n in 1..=SQRT_SWEEP_MAX {
        for a in 1..=n {
            for k in 1..=n / a {
                let mut row = Row::from_series(&sqrt_inequality_report::<f64>(n, a, k).expect("ak ≤ n"));
                row.x = None;
                row.n = Some(n);
                row.bound_exact = Some((a * k).to_string());
                rows.push(row);
            }
        }
    }
    let mut dgrid = vec![0.0];
    dgrid.extend(&grid);
    for m in 1..=m_max {
        for r in 0..m {
            rows.extend(
                check_derivative_nonpositive(r, m, &dgrid)
                    .expect("r < m")
                    .iter()
                    .map(Row::from_series),
            );
        }
    }
    rows
}

fn run_one(check: CheckName, cfg: &SweepConfig, specs: &[ResidueSpec]) -> CheckOutcome {
    let n_max = cfg.n_max;
    let by_slack = |r: &Row| r.slack;
    let by_margin = |r: &Row| r.margin;
    match check {
        CheckName::Counts => {
            let rows = per_spec(specs, |s| counts_rows(s, n_max));
            let summary = summarize(check, &rows, |_| None);
            CheckOutcome { rows, summary }
        }
        CheckName::Theorem1 | CheckName::Chain => {
            let rows = per_spec(specs, |s| {
                let reps = if check == CheckName::Theorem1 {
                    check_theorem1::<f64>(s, n_max)
                } else {
                    check_nathanson_chain::<f64>(s, n_max)
                };
                reps.expect("nonempty residues")
                    .iter()
                    .map(|r| Row::from_bound(check.name(), r))
                    .collect()
            });
            let summary = summarize(check, &rows, by_slack);
            CheckOutcome { rows, summary }
        }
        CheckName::Erdos => {
            let rows: Vec<Row> = check_erdos::<f64>(n_max)
                .iter()
                .map(|r| Row::from_bound("erdos", r))
                .collect();
            let summary = summarize(check, &rows, by_slack);
            CheckOutcome { rows, summary }
        }
        CheckName::Rpoly => {
            let rows = per_spec(specs, |s| {
                check_rplus_poly_bound(s, n_max).iter().map(Row::from_poly).collect()
            });
            let summary = summarize(check, &rows, |_| None);
            CheckOutcome { rows, summary }
        }
        CheckName::Eq1 => {
            let rows = per_spec(specs, |s| {
                default_t_grid::<f64>()
                    .into_iter()
                    .map(|t| Row::from_series(&check_eq1(s, t).expect("valid t")))
                    .collect()
            });
            let mut summary = summarize(check, &rows, |_| None);
            summary.worst = rows
                .iter()
                .filter_map(|r| Some(r.margin? / r.rhs?.abs()))
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
            summary.note = "worst=max relative deviation".into();
            CheckOutcome { rows, summary }
        }
        CheckName::Eq2 => {
            let grid = default_x_grid::<f64>();
            let pairs: Vec<(usize, usize)> = (1..=cfg.grid.m_max())
                .flat_map(|m| (0..m).map(move |r| (r, m)))
                .collect();
            let rows: Vec<Row> = pairs
                .par_iter()
                .map(|&(r, m)| {
                    grid.iter()
                        .map(|&x| Row::from_series(&check_eq2_pointwise(r, m, x).expect("valid point")))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
                .concat();
            let summary = summarize(check, &rows, by_margin);
            CheckOutcome { rows, summary }
        }
        CheckName::Eq3 => {
            let grid = default_x_grid::<f64>();
            let rows = per_spec(specs, |s| {
                grid.iter()
                    .map(|&x| Row::from_series(&check_eq3(s, x).expect("valid point")))
                    .collect()
            });
            let summary = summarize(check, &rows, by_margin);
            CheckOutcome { rows, summary }
        }
        CheckName::Helpers => {
            let rows = helpers_rows(cfg.grid.m_max());
            let summary = summarize(check, &rows, by_margin);
            CheckOutcome { rows, summary }
        }
        CheckName::Remark => {
            let grid = remark_grid::<f64>();
            let rows: Vec<Row> = grid
                .iter()
                .map(|&x| Row::from_series(&remark_report(x).expect("x > 0")))
                .collect();
            let found = find_counterexample_odd_remark(&grid).expect("x > 0");
            let at_one = found.iter().find(|c| c.x == 1.0);
            let passed = !found.is_empty() && at_one.is_some();
            let summary = CheckSummary {
                check,
                total: rows.len(),
                failed: 0,
                worst: found.iter().map(|c| c.excess).reduce(f64::max),
                passed,
                note: format!(
                    "counterexamples={} excess_at_x1={} worst=max excess",
                    found.len(),
                    at_one.map_or_else(|| "-".into(), |c| crate::report::fmt_real(c.excess))
                ),
            };
            CheckOutcome { rows, summary }
        }
        CheckName::Ratio => {
            let rows = per_spec(specs, |s| {
                asymptotic_ratios::<f64>(s, n_max)
                    .expect("nonempty residues")
                    .into_iter()
                    .map(|(n, ratio)| Row {
                        check: "ratio".into(),
                        m: Some(s.m()),
                        residues: Some(s.residues_label()),
                        variant: Some("full-a".into()),
                        n: Some(n),
                        ratio,
                        holds: true,
                        ..Row::default()
                    })
                    .collect()
            });
            let mut summary = summarize(check, &rows, |_| None);
            summary.worst = rows.iter().filter_map(|r| r.ratio).reduce(f64::max);
            summary.note = "diagnostic only; worst=max ratio".into();
            CheckOutcome { rows, summary }
        }
    }
}

/// Runs every selected check, in registry order of `cfg.checks`.
pub fn run_checks(cfg: &SweepConfig) -> Vec<CheckOutcome> {
    let specs = cfg.grid.specs();
    cfg.checks
        .iter()
        .map(|&c| run_one(c, cfg, &specs))
        .collect()
}
