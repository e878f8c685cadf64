//! JSON report shapes written by `verify-lemma`.

use serde::Serialize;

#[derive(Serialize)]
pub struct HistoryRow {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub area: f64,
    pub defect: f64,
    pub aligned_dh: f64,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub seeds: u64,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub violations: usize,
    pub all_converged: bool,
    /// Worst (most negative) slack of 4a'+2b' <= 4a+2b across all flows.
    pub worst_slack_i: f64,
    /// Worst slack of 2a' <= a+b.
    pub worst_slack_ii: f64,
    /// Worst slack of b' <= a.
    pub worst_slack_iii: f64,
    /// Worst slack of c' <= c.
    pub worst_slack_c: f64,
    pub worst_area_drift: f64,
    pub worst_symmetry_defect: f64,
    /// Largest step index at which any flow first dropped below defect 1e-6.
    pub max_iterations_to_defect_1e6: usize,
    pub max_final_aligned_dh: f64,
    pub limit_floor_checks_pass: bool,
    pub fault: Option<String>,
    /// Per-step history, included when a single seed is run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub history: Option<Vec<HistoryRow>>,
}
