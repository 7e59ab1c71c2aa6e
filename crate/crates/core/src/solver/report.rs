//! Certification reports and their independent cross-check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Equation, IndexRelation, SolutionTriple};
use crate::certreal::RealSummary;
use crate::reduction::ReductionStatus;
use crate::solver::FormLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Complete,
    Incomplete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Success,
    Failure,
    PrecisionExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub status: StageStatus,
    pub message: Option<String>,
    pub details: Option<StageDetails>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StageDetails {
    Search(SearchStage),
    IndexRelation(IndexRelation),
    Matveev(MatveevStage),
    GlobalBound(GlobalBoundStage),
    Reduction(ReductionStage),
    Sweep(SweepStage),
    Legendre(LegendreStage),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchStage {
    pub n_max: u64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatveevStage {
    pub form: FormLabel,
    pub expression: String,
    pub t: u32,
    pub d: u32,
    pub a: Vec<String>,
    pub b: String,
    pub a_values_checked: bool,
    pub c: RealSummary,
    pub quoted_c_ceiling: String,
    pub c_below_quoted: bool,
    /// `K` in the derived inequality, rounded up to three significant digits.
    pub multiplier: String,
    pub quoted_multiplier: String,
    pub inequality: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalBoundStage {
    pub variable: String,
    pub c0: String,
    pub c1: String,
    pub c2: String,
    pub c3: String,
    pub bound: String,
    pub least: bool,
    pub quoted_bound: String,
    pub within_quoted: bool,
    pub m: String,
    pub m_covers_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionStage {
    pub form: FormLabel,
    pub alpha: String,
    pub mu: String,
    pub a: String,
    pub b: String,
    pub m: String,
    pub q_index: usize,
    pub q: String,
    pub q_selection: String,
    pub epsilon: Option<RealSummary>,
    pub quoted_epsilon: String,
    pub status: ReductionStatus,
    pub omega: String,
    pub omega_bound: Option<u64>,
    pub validity_threshold: u64,
    pub ceiling: Option<u64>,
    pub quoted_ceiling: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub s: u64,
    pub epsilon: Option<String>,
    pub omega_bound: Option<u64>,
    pub status: ReductionStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcludedRow {
    pub s: u64,
    pub reason: String,
    pub epsilon: Option<String>,
    pub status: ReductionStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepStage {
    pub form: FormLabel,
    pub template: String,
    pub s_lo: u64,
    pub s_hi: u64,
    pub a: String,
    pub b: String,
    pub m: String,
    pub q_index: usize,
    pub q: String,
    pub min_epsilon: Option<RealSummary>,
    pub min_epsilon_at: Option<u64>,
    pub quoted_min_epsilon: String,
    pub quoted_min_epsilon_at: Option<u64>,
    pub nonpositive: Vec<u64>,
    pub excluded: Vec<ExcludedRow>,
    pub omega: String,
    pub worst_omega_bound: Option<u64>,
    pub worst_omega_at: Option<u64>,
    pub validity_threshold: u64,
    pub n_ceiling: Option<u64>,
    pub quoted_ceiling: String,
    pub shifts: Vec<ShiftRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerTarget {
    pub k: u64,
    pub e: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegendreStage {
    pub identity_checked_to: u64,
    pub inequality: String,
    pub m: String,
    pub n_star: usize,
    pub q_before: String,
    pub q_n_star: String,
    pub b: String,
    pub quoted_b: String,
    pub lower_bound: String,
    pub power_bound: String,
    pub quoted_power_bound: String,
    pub exponent_ceiling: u64,
    pub n_ceiling: u64,
    pub quoted_n_ceiling: String,
    pub targets: Vec<PowerTarget>,
    pub branch_solutions: Vec<SolutionTriple>,
    pub branch_in_search: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ceilings {
    /// Bound on the Matveev variable (`k` or `n`).
    pub global_bound: Option<String>,
    /// Ceiling on `n − m`.
    pub shift: Option<u64>,
    pub sweep_n: Option<u64>,
    pub legendre_n: Option<u64>,
    pub final_n: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub equation: Equation,
    pub window: u64,
    pub solutions: Vec<SolutionTriple>,
    pub stages: Vec<StageRecord>,
    pub ceilings: Ceilings,
    pub verdict: Verdict,
    pub failing_stage: Option<String>,
    pub timings_ms: BTreeMap<String, u64>,
}

impl CertificationReport {
    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// Same report with every timing zeroed, for comparisons.
    pub fn without_timings(&self) -> CertificationReport {
        let mut r = self.clone();
        for v in r.timings_ms.values_mut() {
            *v = 0;
        }
        r
    }

    pub fn exhausted_precision(&self) -> bool {
        self.stages
            .iter()
            .any(|s| s.status == StageStatus::PrecisionExhausted)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Re-verifies a report without trusting any of its derived data: exact
/// arithmetic on every triple, window against the final ceiling, and a
/// fresh search by plain double loop.
pub fn cross_check(report: &CertificationReport) -> CrossCheck {
    let mut failures = Vec::new();
    if report.verdict != Verdict::Complete {
        failures.push("verdict is not complete".to_string());
    }
    match report.ceilings.final_n {
        Some(c) if c <= report.window => {}
        Some(c) => failures.push(format!(
            "final ceiling {c} exceeds the window {}",
            report.window
        )),
        None => failures.push("no final ceiling".to_string()),
    }
    for t in &report.solutions {
        if t.m > t.n || !report.equation.holds(t) {
            failures.push(format!(
                "{t} does not satisfy {}",
                report.equation.describe()
            ));
        }
    }
    let expected = double_loop(report.equation, report.window);
    let mut got = report.solutions.clone();
    got.sort();
    if got != expected {
        failures.push(format!(
            "solution list differs from a fresh search: expected {} triples, report has {}",
            expected.len(),
            got.len()
        ));
    }
    CrossCheck {
        pass: failures.is_empty(),
        failures,
    }
}

/// Double loop over `(n, m)` with a linear scan of the `V` terms.
fn double_loop(eq: Equation, n_max: u64) -> Vec<SolutionTriple> {
    let (u, v) = eq.families();
    let (u, v) = (u.recurrence(), v.recurrence());
    let us = u.terms(n_max);
    let top = us.iter().max().cloned().unwrap_or_default() * 2;
    let vs: Vec<_> = v.iter().take_while(|(k, x)| *k < 4 || x <= &top).collect();
    let mut out = Vec::new();
    for n in 0..=n_max as usize {
        for m in 0..=n {
            let sum = &us[n] + &us[m];
            for (k, x) in &vs {
                if *x == sum {
                    out.push(SolutionTriple {
                        n: n as u64,
                        m: m as u64,
                        k: *k,
                    });
                }
            }
        }
    }
    out.sort();
    out
}
