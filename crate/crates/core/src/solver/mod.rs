//! Explicit upwind stepping of the three transport columns coupled to the
//! formation, with boundary logic for both flow arrangements and the cycle
//! schedule.
//!
//! Each column obeys an advection–exchange equation (diffusion neglected),
//! written as `∂T/∂t + w ∂T/∂z = −(1/a) Σ b (T − T_other)` with `z` pointing
//! down. The transport speed `w` is `−v_o` for the oil, `+v_i` for the inner
//! annulus and `−v_e` for the outer one, using the signed velocities of
//! [`Coefficients`](crate::Coefficients).

use core::fmt;

use crate::config::ConfigError;
use crate::kernel::KernelError;
use crate::volterra::VolterraError;

mod compare;
mod run;
mod scheme;

pub use compare::{compare_arrangements, with_arrangement, ComparisonReport, Verdict};
pub use run::{
    run_simulation, CycleSchedule, EnergyBudget, ScalarSample, Simulation, Snapshot, StepPlan,
    TimeSeries,
};
pub use scheme::{apply_boundaries, cfl_limit, cfl_timestep, transport_speeds, upwind_step, Speeds};

/// Whether water is circulating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Circulating,
    ShutIn,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Circulating => "circulating",
            Phase::ShutIn => "shut-in",
        }
    }
}

/// Nodal temperatures at one time level. Node `i` sits at depth `i·h`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub h: f64,
    pub oil: alloc::vec::Vec<f64>,
    pub inner: alloc::vec::Vec<f64>,
    pub outer: alloc::vec::Vec<f64>,
    pub formation: alloc::vec::Vec<f64>,
    /// Heat flux into the formation (W/m).
    pub flux: alloc::vec::Vec<f64>,
    pub time: f64,
    pub phase: Phase,
}

impl GridState {
    pub fn nodes(&self) -> usize {
        self.oil.len()
    }

    pub fn depth_of(&self, node: usize) -> f64 {
        node as f64 * self.h
    }

    pub fn positions(&self) -> alloc::vec::Vec<f64> {
        (0..self.nodes()).map(|i| self.depth_of(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    Config(ConfigError),
    Kernel(KernelError),
    Volterra(VolterraError),
    /// The time step exceeds the stability bound `h / (v_max + C·h)`.
    CflViolation { tau: f64, limit: f64 },
    /// No advection and no exchange: the stability bound is unbounded.
    DegenerateTimeStep,
    /// Stepping past the end of the schedule.
    ScheduleFinished,
}

impl SolverError {
    /// Pipeline stage the failure belongs to.
    pub fn stage(&self) -> &'static str {
        match self {
            SolverError::Config(_) => "config",
            SolverError::CflViolation { .. } | SolverError::DegenerateTimeStep => "cfl",
            SolverError::Kernel(_) | SolverError::Volterra(_) | SolverError::ScheduleFinished => "stepping",
        }
    }
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::Config(e) => e.fmt(f),
            SolverError::Kernel(e) => e.fmt(f),
            SolverError::Volterra(e) => e.fmt(f),
            SolverError::CflViolation { tau, limit } => {
                write!(f, "time step {tau} s exceeds the CFL limit {limit} s")
            }
            SolverError::DegenerateTimeStep => {
                f.write_str("no advection and no exchange: the CFL bound gives no time step")
            }
            SolverError::ScheduleFinished => f.write_str("schedule already finished"),
        }
    }
}

impl core::error::Error for SolverError {}

impl From<ConfigError> for SolverError {
    fn from(e: ConfigError) -> Self {
        SolverError::Config(e)
    }
}

impl From<KernelError> for SolverError {
    fn from(e: KernelError) -> Self {
        SolverError::Kernel(e)
    }
}

impl From<VolterraError> for SolverError {
    fn from(e: VolterraError) -> Self {
        SolverError::Volterra(e)
    }
}
