//! Machine-readable suite reports.
//!
//! Reports serialize deterministically under a fixed seed: wall time is
//! excluded from the JSON form, failures are sorted by trial index, and every
//! failure carries the per-trial seed needed to replay it in isolation.

use std::time::Duration;

use serde::Serialize;

/// One violated check. `observed` vs `required` is oriented so the check
/// passes when `observed <= required + tolerance` (gaps are reported as
/// `observed - required`).
#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    /// Trial index within the suite; replay with `rng_stream(seed, trial)`.
    pub trial: u64,
    /// Per-trial stream seed (the suite seed; streams are trial indices).
    pub seed: u64,
    /// What was being checked and on which inputs.
    pub detail: String,
    pub observed: f64,
    pub required: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertySuiteReport {
    pub suite: String,
    pub measure: String,
    pub trials: u64,
    pub tolerance: f64,
    pub seed: u64,
    /// Largest `observed - required` gap seen across all checks, including
    /// passing ones; negative means comfortable margins everywhere.
    pub max_gap: f64,
    pub failures: Vec<FailureRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PropertySuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Accumulates checks for one suite run and freezes them into a report.
pub(crate) struct SuiteRun {
    suite: &'static str,
    measure: String,
    tolerance: f64,
    seed: u64,
    trials: u64,
    max_gap: f64,
    failures: Vec<FailureRecord>,
    started: std::time::Instant,
}

impl SuiteRun {
    pub(crate) fn new(suite: &'static str, measure: &str, tolerance: f64, seed: u64) -> Self {
        Self {
            suite,
            measure: measure.to_string(),
            tolerance,
            seed,
            trials: 0,
            max_gap: f64::NEG_INFINITY,
            failures: Vec::new(),
            started: std::time::Instant::now(),
        }
    }

    pub(crate) fn count_trial(&mut self) {
        self.trials += 1;
    }

    /// Records a check requiring `observed <= required + tolerance`.
    pub(crate) fn check(&mut self, trial: u64, detail: impl Into<String>, observed: f64, required: f64) {
        let gap = observed - required;
        if gap > self.max_gap {
            self.max_gap = gap;
        }
        if gap > self.tolerance {
            self.failures.push(FailureRecord {
                trial,
                seed: self.seed,
                detail: detail.into(),
                observed,
                required,
                gap,
            });
        }
    }

    /// Records a boolean check; failures report gap 1.
    pub(crate) fn check_flag(&mut self, trial: u64, detail: impl Into<String>, ok: bool) {
        if !ok {
            self.failures.push(FailureRecord {
                trial,
                seed: self.seed,
                detail: detail.into(),
                observed: 1.0,
                required: 0.0,
                gap: 1.0,
            });
            if self.max_gap < 1.0 {
                self.max_gap = 1.0;
            }
        }
    }

    pub(crate) fn finish(mut self) -> PropertySuiteReport {
        self.failures.sort_by_key(|f| f.trial);
        PropertySuiteReport {
            suite: self.suite.to_string(),
            measure: self.measure,
            trials: self.trials,
            tolerance: self.tolerance,
            seed: self.seed,
            max_gap: if self.max_gap.is_finite() { self.max_gap } else { 0.0 },
            failures: self.failures,
            wall_time: self.started.elapsed(),
        }
    }
}

/// Renders a fixed-width summary table, one row per report.
pub fn render_table(reports: &[PropertySuiteReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<20} {:<8} {:>7} {:>10} {:>12} {:>9}  {}\n",
        "suite", "measure", "trials", "failures", "max_gap", "time_ms", "status"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<20} {:<8} {:>7} {:>10} {:>12.3e} {:>9.0}  {}\n",
            r.suite,
            r.measure,
            r.trials,
            r.failures.len(),
            r.max_gap,
            r.wall_time.as_secs_f64() * 1e3,
            if r.passed() { "pass" } else { "FAIL" }
        ));
    }
    out
}

/// CSV form of the summary table (header + one row per report).
pub fn render_csv(reports: &[PropertySuiteReport]) -> String {
    let mut out = String::from("suite,measure,trials,failures,max_gap,seed,status\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{:e},{},{}\n",
            r.suite,
            r.measure,
            r.trials,
            r.failures.len(),
            r.max_gap,
            r.seed,
            if r.passed() { "pass" } else { "fail" }
        ));
    }
    out
}
