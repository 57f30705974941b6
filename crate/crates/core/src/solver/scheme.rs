use alloc::vec::Vec;

use super::{GridState, Phase, SolverError};
use crate::config::{Coefficients, FlowArrangement};

/// Signed transport speeds `w` of the three columns for one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speeds {
    pub oil: f64,
    pub inner: f64,
    pub outer: f64,
}

impl Speeds {
    pub fn max_abs(&self) -> f64 {
        self.oil.abs().max(self.inner.abs()).max(self.outer.abs())
    }
}

/// Water stands still during shut-in; oil keeps flowing unless `oil_in_shut_in`
/// is false.
pub fn transport_speeds(coeffs: &Coefficients, phase: Phase, oil_in_shut_in: bool) -> Speeds {
    match phase {
        Phase::Circulating => Speeds { oil: -coeffs.v_o, inner: coeffs.v_i, outer: -coeffs.v_e },
        Phase::ShutIn => Speeds {
            oil: if oil_in_shut_in { -coeffs.v_o } else { 0.0 },
            inner: 0.0,
            outer: 0.0,
        },
    }
}

/// Largest stable step `h / (v_max + C·h)` for the given speeds.
pub fn cfl_limit(coeffs: &Coefficients, h: f64, v_max: f64) -> Result<f64, SolverError> {
    let denom = v_max + coeffs.exchange_rate_bound() * h;
    if !(denom > 0.0) || !(h > 0.0) {
        return Err(SolverError::DegenerateTimeStep);
    }
    Ok(h / denom)
}

/// Time step `safety · h / (v_max + C·h)` with `v_max` the largest circulating
/// speed and `C` the exchange rate bound. Within this step every nodal update
/// is a convex combination of old values.
pub fn cfl_timestep(coeffs: &Coefficients, h: f64, safety: f64) -> Result<f64, SolverError> {
    Ok(safety * cfl_limit(coeffs, h, coeffs.max_speed())?)
}

/// One upwind step of a single column, in place into `out`.
#[inline]
fn advect_column(
    old: &[f64],
    speed: f64,
    courant: f64,
    rate: impl Fn(usize) -> f64,
    out: &mut Vec<f64>,
) {
    let last = old.len() - 1;
    out.clear();
    for j in 0..=last {
        let upwind = if speed > 0.0 && j > 0 {
            old[j - 1]
        } else if speed < 0.0 && j < last {
            old[j + 1]
        } else {
            old[j]
        };
        // Incremental form: exact for a unit Courant number and for a uniform state.
        out.push(old[j] + courant * (upwind - old[j]) - rate(j));
    }
}

/// Advances the three fluid columns by one forward-Euler upwind step, using
/// the formation temperature of the old level. Formation and flux are carried
/// over unchanged; inflow nodes are left for [`apply_boundaries`].
pub fn upwind_step(
    state: &GridState,
    coeffs: &Coefficients,
    tau: f64,
    speeds: Speeds,
) -> Result<GridState, SolverError> {
    let h = state.h;
    let limit = cfl_limit(coeffs, h, speeds.max_abs()).or_else(|e| match e {
        // Nothing moves and nothing exchanges: any step is stable.
        SolverError::DegenerateTimeStep => Ok(f64::INFINITY),
        other => Err(other),
    })?;
    if !(tau > 0.0) || tau > limit * (1.0 + 1e-12) {
        return Err(SolverError::CflViolation { tau, limit });
    }
    let (oil, inner, outer, formation) = (&state.oil, &state.inner, &state.outer, &state.formation);
    let n = state.nodes();

    let ko = tau / coeffs.a_o;
    let ki = tau / coeffs.a_i;
    let ke = tau / coeffs.a_e;
    let (bo, be, bf) = (coeffs.b_o, coeffs.b_e, coeffs.b_f);

    let mut new_oil = Vec::with_capacity(n);
    let mut new_inner = Vec::with_capacity(n);
    let mut new_outer = Vec::with_capacity(n);
    advect_column(oil, speeds.oil, tau * speeds.oil.abs() / h, |j| ko * (bo * (oil[j] - inner[j])), &mut new_oil);
    advect_column(
        inner,
        speeds.inner,
        tau * speeds.inner.abs() / h,
        |j| ki * (bo * (inner[j] - oil[j]) + be * (inner[j] - outer[j])),
        &mut new_inner,
    );
    advect_column(
        outer,
        speeds.outer,
        tau * speeds.outer.abs() / h,
        |j| ke * (be * (outer[j] - inner[j]) + bf * (outer[j] - formation[j])),
        &mut new_outer,
    );

    Ok(GridState {
        h,
        oil: new_oil,
        inner: new_inner,
        outer: new_outer,
        formation: formation.clone(),
        flux: state.flux.clone(),
        time: state.time + tau,
        phase: state.phase,
    })
}

/// Imposes the inflow data of every moving column.
///
/// Counter flow: oil enters at the bottom at `t_oil_inlet`, water is injected
/// at the top of the inner annulus and the outer annulus is fed by the inner
/// one at the bottom. Parallel flow injects into the outer annulus and feeds
/// the inner annulus from the outer one. A column whose speed is zero has no
/// inflow boundary.
pub fn apply_boundaries(
    state: &mut GridState,
    coeffs: &Coefficients,
    arrangement: FlowArrangement,
    speeds: Speeds,
    t_inj: f64,
) {
    let bottom = state.nodes() - 1;
    if speeds.oil != 0.0 {
        state.oil[bottom] = coeffs.t_oil_inlet;
    }
    match arrangement {
        FlowArrangement::Counter => {
            if speeds.inner != 0.0 {
                state.inner[0] = t_inj;
            }
            if speeds.outer != 0.0 {
                state.outer[bottom] = state.inner[bottom];
            }
        }
        FlowArrangement::Parallel => {
            if speeds.outer != 0.0 {
                state.outer[0] = t_inj;
            }
            if speeds.inner != 0.0 {
                state.inner[bottom] = state.outer[bottom];
            }
        }
    }
}
