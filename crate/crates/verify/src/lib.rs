//! Acceptance criteria for `shellspec` and the independent oracles they use.
//!
//! Each criterion returns a pass/fail verdict with a deterministic detail
//! line. Wall-clock budgets are enforced by the runner but never printed.

use std::fmt;
use std::time::{Duration, Instant};

pub mod criteria;
pub mod oracle;

/// Verdict and explanation produced by one criterion body.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    /// Everything with a budget of at most 60 s.
    Fast,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Suite::All),
            "fast" => Ok(Suite::Fast),
            _ => Err(format!("unknown suite '{s}' (expected all or fast)")),
        }
    }
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub budget: Duration,
    run: fn() -> shellspec::Result<Check>,
}

impl Criterion {
    pub fn in_suite(&self, suite: Suite) -> bool {
        suite == Suite::All || self.budget <= Duration::from_secs(60)
    }
}

pub fn criteria() -> Vec<Criterion> {
    use criteria::*;
    let c = |id, title, secs, run| Criterion { id, title, budget: Duration::from_secs(secs), run };
    vec![
        c(1, "regression values at h = -0.8", 1, c01_regression_values),
        c(2, "radial second eigenfunction verdict", 5, c02_radial_verdict),
        c(3, "h-sweep of tau_02 and tau_11", 60, c03_sweep_crossings),
        c(4, "disk and rectangle closed forms", 1, c04_closed_forms),
        c(5, "central symmetry counterexample", 10, c05_central_symmetry),
        c(6, "rectangle and square comparisons", 1, c06_rectangles),
        c(7, "h-derivative identity", 30, c07_h_derivative),
        c(8, "ordering and sign properties", 30, c08_ordering_and_signs),
        c(9, "trial-function bound", 180, c09_trial_bound),
        c(10, "pointwise inequality along the profile", 60, c10_long_inequality),
        c(11, "threshold consistency", 60, c11_thresholds),
        c(12, "symmetry identities", 60, c12_symmetry),
        c(13, "oracle equivalence", 120, c13_oracles),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The criterion could not be evaluated (solver error).
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    pub within_budget: bool,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        write!(f, "criterion {:>2} {tag:<5} {}: {}", self.id, self.title, self.detail)?;
        if !self.within_budget {
            write!(f, " [over time budget]")?;
        }
        Ok(())
    }
}

pub fn run(c: &Criterion) -> Outcome {
    let start = Instant::now();
    let result = (c.run)();
    let within_budget = start.elapsed() <= c.budget;
    let (status, detail) = match result {
        Ok(check) if check.passed && within_budget => (Status::Pass, check.detail),
        Ok(check) => (Status::Fail, check.detail),
        Err(e) => (Status::Error, format!("error: {e}")),
    };
    Outcome { id: c.id, title: c.title, status, detail, within_budget }
}

/// Runs the selected criteria one after another, in id order.
pub fn run_suite(suite: Suite) -> Vec<Outcome> {
    criteria().iter().filter(|c| c.in_suite(suite)).map(run).collect()
}

/// Process exit code for a finished suite: 0 all pass, 3 if any criterion
/// could not be evaluated, 1 otherwise.
pub fn exit_code(outcomes: &[Outcome]) -> i32 {
    if outcomes.iter().any(|o| o.status == Status::Error) {
        3
    } else if outcomes.iter().all(|o| o.status == Status::Pass) {
        0
    } else {
        1
    }
}
