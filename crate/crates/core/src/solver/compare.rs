use super::run::{run_simulation, TimeSeries};
use super::SolverError;
use crate::config::{FlowArrangement, WellConfig};

/// Which arrangement loses less oil temperature between bottom and surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Counter,
    Parallel,
    Tie,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Counter => "counter",
            Verdict::Parallel => "parallel",
            Verdict::Tie => "tie",
        }
    }
}

/// Counter and parallel runs of the same well and schedule.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub counter: TimeSeries,
    pub parallel: TimeSeries,
    pub counter_drop: f64,
    pub parallel_drop: f64,
    pub verdict: Verdict,
}

/// Drops closer than this (relative to their size, floored at 1 K) are a tie.
const TIE_TOLERANCE: f64 = 1e-9;

impl ComparisonReport {
    pub fn from_runs(counter: TimeSeries, parallel: TimeSeries) -> Self {
        let counter_drop = counter.oil_drop();
        let parallel_drop = parallel.oil_drop();
        let scale = counter_drop.abs().max(parallel_drop.abs()).max(1.0);
        let verdict = if (counter_drop - parallel_drop).abs() <= TIE_TOLERANCE * scale {
            Verdict::Tie
        } else if parallel_drop < counter_drop {
            Verdict::Parallel
        } else {
            Verdict::Counter
        };
        ComparisonReport { counter, parallel, counter_drop, parallel_drop, verdict }
    }
}

/// Configuration `cfg` with the flow arrangement replaced.
pub fn with_arrangement(cfg: &WellConfig, mode: FlowArrangement) -> WellConfig {
    WellConfig { mode, ..cfg.clone() }
}

/// Runs both arrangements with otherwise identical parameters, one after the
/// other. Callers with threads can run the two scenarios concurrently and use
/// [`ComparisonReport::from_runs`].
pub fn compare_arrangements(cfg: &WellConfig) -> Result<ComparisonReport, SolverError> {
    let counter = run_simulation(&with_arrangement(cfg, FlowArrangement::Counter))?;
    let parallel = run_simulation(&with_arrangement(cfg, FlowArrangement::Parallel))?;
    Ok(ComparisonReport::from_runs(counter, parallel))
}
