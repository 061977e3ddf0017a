//! Summary and verification reports, rendered as flat key-value text.

use curvelab::{DiagnosticsRecord, FlowKind, MonotonicityReport, StopReason};

/// One evaluated check with the statement it verifies.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    /// The identity or bound being checked, written out as a formula.
    pub statement: String,
    pub verdict: bool,
    pub worst: f64,
    pub slack: f64,
    pub worst_time: f64,
    pub detail: String,
}

impl CheckOutcome {
    pub fn from_report(name: &str, statement: &str, r: &MonotonicityReport) -> Self {
        CheckOutcome {
            name: name.into(),
            statement: statement.into(),
            verdict: r.verdict,
            worst: r.worst_violation,
            slack: r.slack,
            worst_time: r.worst_time,
            detail: r.detail.clone(),
        }
    }

    pub fn failed(name: &str, statement: &str, message: String) -> Self {
        CheckOutcome {
            name: name.into(),
            statement: statement.into(),
            verdict: false,
            worst: f64::NAN,
            slack: f64::NAN,
            worst_time: f64::NAN,
            detail: message,
        }
    }
}

/// Fitted exponential rate of one record field.
#[derive(Debug, Clone)]
pub struct RateFit {
    pub field: String,
    pub rate: f64,
    pub quality: f64,
}

#[derive(Debug, Clone)]
pub struct SummaryReport {
    pub scenario: String,
    pub flow: FlowKind,
    pub stop: StopReason,
    pub steps: usize,
    pub records: usize,
    pub wall_seconds: f64,
    pub final_record: DiagnosticsRecord,
    pub checks: Vec<CheckOutcome>,
    pub rates: Vec<RateFit>,
}

impl SummaryReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let f = &self.final_record;
        out.push_str(&format!("scenario = {}\n", self.scenario));
        out.push_str(&format!("flow = {}\n", self.flow));
        out.push_str(&format!("stop_reason = {}\n", self.stop));
        out.push_str(&format!("steps = {}\n", self.steps));
        out.push_str(&format!("records = {}\n", self.records));
        out.push_str(&format!("wall_seconds = {:.3}\n", self.wall_seconds));
        out.push_str(&format!("final.t = {:.9e}\n", f.t));
        out.push_str(&format!("final.L = {:.9e}\n", f.length));
        out.push_str(&format!("final.E = {:.9e}\n", f.bending));
        out.push_str(&format!("final.Kosc = {:.9e}\n", f.kosc));
        out.push_str(&format!("final.omega_hat = {:.9e}\n", f.omega_hat));
        out.push_str(&format!("final.kinf = {:.9e}\n", f.k_inf_scaled));
        for rate in &self.rates {
            out.push_str(&format!(
                "rate.{} = {:.6e} (r2 = {:.6})\n",
                rate.field, rate.rate, rate.quality
            ));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "check.{} = {}\n  statement: {}\n  worst = {:.6e} (slack {:.1e}) at t = {:.6e}\n  {}\n",
                c.name,
                if c.verdict { "pass" } else { "FAIL" },
                c.statement,
                c.worst,
                c.slack,
                c.worst_time,
                c.detail
            ));
        }
        out.push_str(&format!(
            "verdict = {}\n",
            if self.all_passed() { "pass" } else { "FAIL" }
        ));
        out
    }
}

/// Report for a verification suite (a set of named pass/fail items).
#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub items: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|c| c.verdict)
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite = {}\n", self.suite);
        for c in &self.items {
            out.push_str(&format!(
                "check.{} = {}\n  statement: {}\n  worst = {:.6e} (slack {:.1e})\n  {}\n",
                c.name,
                if c.verdict { "pass" } else { "FAIL" },
                c.statement,
                c.worst,
                c.slack,
                c.detail
            ));
        }
        out.push_str(&format!(
            "verdict = {}\n",
            if self.all_passed() { "pass" } else { "FAIL" }
        ));
        out
    }
}
