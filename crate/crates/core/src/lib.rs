//! Transient temperature model of an oil well heated by hot-water circulation.
//!
//! The well is a tubing string (oil flowing upward) surrounded by an inner and
//! an outer water annulus. Hot water is injected into one annulus, turns
//! around at the bottom and leaves through the other. The outer annulus
//! exchanges heat with the surrounding formation, whose response is a
//! convolution of the heat-flux history with a transient conduction kernel.
//!
//! The crate is `no_std` (with `alloc`): it holds the numerics only. File
//! formats, CSV output and the command line live in the `wellheat` crate.
//!
//! Module map:
//! - [`config`]: validated input parameters and derived coefficients.
//! - [`kernel`]: the formation response kernel and a radial conduction oracle.
//! - [`volterra`]: per-node formation history and the convolution update.
//! - [`solver`]: explicit upwind stepping, boundary logic, cycle scheduling
//!   and the counter/parallel comparison.

#![no_std]
// `!(x > 0.0)` style checks reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod config;
pub mod kernel;
pub mod solver;
pub mod volterra;

mod tridiag;

pub use config::{derive_coefficients, Coefficients, ConfigError, FlowArrangement, WellConfig};
pub use kernel::{
    build_kernel_table, p_dimensionless, p_of_time, radial_oracle, radial_oracle_at, KernelError,
    KernelTable, OracleSample, SoilProps,
};
pub use solver::{
    apply_boundaries, cfl_timestep, compare_arrangements, run_simulation, upwind_step,
    ComparisonReport, CycleSchedule, GridState, Phase, Simulation, SolverError, TimeSeries,
    Verdict, with_arrangement,
};
pub use volterra::{formation_update, heat_flux, volterra_residual, FormationHistory, VolterraError};
