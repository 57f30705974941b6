use alloc::vec::Vec;

use super::scheme::{apply_boundaries, cfl_limit, cfl_timestep, transport_speeds, upwind_step, Speeds};
use super::{GridState, Phase, SolverError};
use crate::config::{derive_coefficients, Coefficients, FlowArrangement, WellConfig};
use crate::kernel::{build_kernel_table, KernelTable};
use crate::volterra::{formation_update, heat_flux, FormationHistory};

/// Circulation and shut-in durations of one cycle, and the number of cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSchedule {
    pub heating_s: f64,
    pub cooling_s: f64,
    pub cycles: u32,
}

impl CycleSchedule {
    pub fn from_config(cfg: &WellConfig) -> Self {
        CycleSchedule { heating_s: cfg.cycle_heating_s, cooling_s: cfg.cycle_cooling_s, cycles: cfg.n_cycles }
    }

    pub fn period(&self) -> f64 {
        self.heating_s + self.cooling_s
    }

    /// Splits the schedule into whole steps no longer than `max_tau`. The
    /// step is shrunk so the circulation phase is hit exactly; the shut-in
    /// phase is rounded to the nearest whole number of steps.
    pub fn plan(&self, max_tau: f64) -> StepPlan {
        let heating_steps = libm::ceil(self.heating_s / max_tau * (1.0 - 1e-12)).max(1.0) as usize;
        let tau = self.heating_s / heating_steps as f64;
        let cooling_steps = libm::round(self.cooling_s / tau) as usize;
        StepPlan { tau, heating_steps, cooling_steps, cycles: self.cycles as usize }
    }
}

/// Uniform time grid laid over a [`CycleSchedule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub tau: f64,
    pub heating_steps: usize,
    pub cooling_steps: usize,
    pub cycles: usize,
}

impl StepPlan {
    pub fn steps_per_cycle(&self) -> usize {
        self.heating_steps + self.cooling_steps
    }

    pub fn total_steps(&self) -> usize {
        self.steps_per_cycle() * self.cycles
    }

    /// Phase of the step that advances level `step` to `step + 1`.
    pub fn phase_of_step(&self, step: usize) -> Phase {
        if step % self.steps_per_cycle() < self.heating_steps {
            Phase::Circulating
        } else {
            Phase::ShutIn
        }
    }
}

/// Running global heat balance of the three columns (all in J per run).
///
/// `water_loss − oil_gain − delivered` vanishes for the continuous model; for
/// the scheme it is a first-order quadrature defect.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBudget {
    pub water_initial: f64,
    pub water_final: f64,
    pub oil_initial: f64,
    pub oil_final: f64,
    /// Enthalpy carried into the water columns through their ends.
    pub water_advected_in: f64,
    /// Enthalpy carried into the tubing through its ends.
    pub oil_advected_in: f64,
    /// Heat delivered to the formation.
    pub delivered: f64,
}

impl EnergyBudget {
    pub fn water_loss(&self) -> f64 {
        self.water_initial - self.water_final + self.water_advected_in
    }

    pub fn oil_gain(&self) -> f64 {
        self.oil_final - self.oil_initial - self.oil_advected_in
    }

    pub fn residual(&self) -> f64 {
        self.water_loss() - self.oil_gain() - self.delivered
    }
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Profiles at one recorded level.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub phase: Phase,
    pub oil: Vec<f64>,
    pub inner: Vec<f64>,
    pub outer: Vec<f64>,
    pub formation: Vec<f64>,
    pub flux: Vec<f64>,
}

/// Scalar diagnostics recorded at every level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSample {
    pub time: f64,
    pub phase: Phase,
    /// Water leaving the well at the surface: outer annulus for counter flow,
    /// inner annulus for parallel flow.
    pub outlet_water: f64,
    pub outlet_oil: f64,
    pub bottomhole_oil: f64,
    /// Bottom of the injection annulus, where the water turns around.
    pub bottomhole_water: f64,
    /// `∫ q_f dz` over the well (W).
    pub total_flux: f64,
}

/// Everything recorded by a run.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub arrangement: FlowArrangement,
    pub h: f64,
    pub tau: f64,
    pub plan: StepPlan,
    pub depths: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub scalars: Vec<ScalarSample>,
    pub budget: EnergyBudget,
    pub final_state: GridState,
    pub history: FormationHistory,
}

impl TimeSeries {
    /// Oil temperature at the bottom minus oil temperature at the surface,
    /// at the final level.
    pub fn oil_drop(&self) -> f64 {
        let oil = &self.final_state.oil;
        oil[oil.len() - 1] - oil[0]
    }

    pub fn final_time(&self) -> f64 {
        self.final_state.time
    }
}

/// A run in progress: state, formation history and the step plan.
#[derive(Debug, Clone)]
pub struct Simulation {
    arrangement: FlowArrangement,
    coeffs: Coefficients,
    t_inj: f64,
    oil_in_shut_in: bool,
    plan: StepPlan,
    kernel: KernelTable,
    history: FormationHistory,
    state: GridState,
    step: usize,
    budget: EnergyBudget,
}

impl Simulation {
    /// Sets up the initial state: oil and outer annulus at the geothermal
    /// profile, the inner annulus on the affine profile from the injection
    /// temperature to the bottom geothermal value, and no formation flux.
    pub fn new(cfg: &WellConfig) -> Result<Self, SolverError> {
        cfg.validate()?;
        let coeffs = derive_coefficients(cfg);
        let h = cfg.cell_size();
        let limit = cfl_limit(&coeffs, h, coeffs.max_speed())?;
        let max_tau = if cfg.lambda > 0.0 {
            let tau = cfg.lambda * h;
            if tau > limit * (1.0 + 1e-12) {
                return Err(SolverError::CflViolation { tau, limit });
            }
            tau
        } else {
            cfl_timestep(&coeffs, h, cfg.cfl_safety)?
        };
        let plan = CycleSchedule::from_config(cfg).plan(max_tau);
        let kernel = build_kernel_table(plan.tau, plan.total_steps().max(1), &cfg.soil(), coeffs.b_f)?;

        let nodes = cfg.n_cells + 1;
        let depths: Vec<f64> = (0..nodes).map(|i| i as f64 * h).collect();
        let geo = depths.iter().map(|&z| cfg.geothermal(z)).collect::<Result<Vec<_>, _>>()?;
        let inner = depths.iter().map(|&z| cfg.initial_inner(z)).collect::<Result<Vec<_>, _>>()?;
        let state = GridState {
            h,
            oil: geo.clone(),
            inner,
            outer: geo.clone(),
            formation: geo.clone(),
            flux: alloc::vec![0.0; nodes],
            time: 0.0,
            phase: plan.phase_of_step(0),
        };
        let budget = EnergyBudget {
            water_initial: Self::water_energy(&coeffs, &state),
            oil_initial: coeffs.a_o * trapezoid(&state.oil, h),
            ..EnergyBudget::default()
        };
        Ok(Simulation {
            arrangement: cfg.mode,
            coeffs,
            t_inj: cfg.t_inj,
            oil_in_shut_in: cfg.shut_in_oil_flow,
            plan,
            kernel,
            history: FormationHistory::new(geo),
            state,
            step: 0,
            budget,
        })
    }

    fn water_energy(coeffs: &Coefficients, state: &GridState) -> f64 {
        coeffs.a_i * trapezoid(&state.inner, state.h) + coeffs.a_e * trapezoid(&state.outer, state.h)
    }

    pub fn state(&self) -> &GridState {
        &self.state
    }

    pub fn history(&self) -> &FormationHistory {
        &self.history
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn plan(&self) -> &StepPlan {
        &self.plan
    }

    pub fn kernel(&self) -> &KernelTable {
        &self.kernel
    }

    pub fn tau(&self) -> f64 {
        self.plan.tau
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.plan.total_steps()
    }

    pub fn budget(&self) -> EnergyBudget {
        let mut b = self.budget;
        b.water_final = Self::water_energy(&self.coeffs, &self.state);
        b.oil_final = self.coeffs.a_o * trapezoid(&self.state.oil, self.state.h);
        b
    }

    pub fn scalars(&self) -> ScalarSample {
        let s = &self.state;
        let bottom = s.nodes() - 1;
        let (outlet_water, bottomhole_water) = match self.arrangement {
            FlowArrangement::Counter => (s.outer[0], s.inner[bottom]),
            FlowArrangement::Parallel => (s.inner[0], s.outer[bottom]),
        };
        ScalarSample {
            time: s.time,
            phase: s.phase,
            outlet_water,
            outlet_oil: s.oil[0],
            bottomhole_oil: s.oil[bottom],
            bottomhole_water,
            total_flux: trapezoid(&s.flux, s.h),
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        let s = &self.state;
        Snapshot {
            time: s.time,
            phase: s.phase,
            oil: s.oil.clone(),
            inner: s.inner.clone(),
            outer: s.outer.clone(),
            formation: s.formation.clone(),
            flux: s.flux.clone(),
        }
    }

    fn advected(a: f64, speed: f64, column: &[f64]) -> f64 {
        a * speed * (column[0] - column[column.len() - 1])
    }

    /// Advances one level: fluids with the old formation temperature, then
    /// inflow boundaries, then the formation from the new outer-annulus
    /// temperatures.
    pub fn step(&mut self) -> Result<(), SolverError> {
        if self.is_finished() {
            return Err(SolverError::ScheduleFinished);
        }
        let tau = self.plan.tau;
        let phase = self.plan.phase_of_step(self.step);
        let speeds: Speeds = transport_speeds(&self.coeffs, phase, self.oil_in_shut_in);
        let c = &self.coeffs;
        let old = &self.state;

        self.budget.water_advected_in +=
            tau * (Self::advected(c.a_i, speeds.inner, &old.inner) + Self::advected(c.a_e, speeds.outer, &old.outer));
        self.budget.oil_advected_in += tau * Self::advected(c.a_o, speeds.oil, &old.oil);
        self.budget.delivered += tau * trapezoid(&old.flux, old.h);

        let mut next = upwind_step(old, c, tau, speeds)?;
        apply_boundaries(&mut next, c, self.arrangement, speeds, self.t_inj);
        next.formation = formation_update(&mut self.history, &self.kernel, &next.outer)?;
        let b_f = c.b_f;
        for ((q, te), tf) in next.flux.iter_mut().zip(&next.outer).zip(&next.formation) {
            *q = heat_flux(*te, *tf, b_f);
        }
        self.step += 1;
        // Label the level with the phase of the step that follows it; the
        // final level keeps the phase that produced it.
        next.phase = if self.is_finished() { phase } else { self.plan.phase_of_step(self.step) };
        next.time = self.step as f64 * tau;
        self.state = next;
        Ok(())
    }

    /// Runs the remaining schedule, recording `snapshots_per_cycle` profile
    /// snapshots per cycle (plus the initial and final levels) and scalars at
    /// every level.
    pub fn run(mut self, snapshots_per_cycle: u32) -> Result<TimeSeries, SolverError> {
        let stride = (self.plan.steps_per_cycle() / snapshots_per_cycle.max(1) as usize).max(1);
        let total = self.plan.total_steps();
        let mut snapshots = Vec::with_capacity(total / stride + 2);
        let mut scalars = Vec::with_capacity(total + 1);
        snapshots.push(self.snapshot());
        scalars.push(self.scalars());
        while !self.is_finished() {
            self.step()?;
            scalars.push(self.scalars());
            if self.step.is_multiple_of(stride) || self.is_finished() {
                snapshots.push(self.snapshot());
            }
        }
        let budget = self.budget();
        let depths = self.state.positions();
        Ok(TimeSeries {
            arrangement: self.arrangement,
            h: self.state.h,
            tau: self.plan.tau,
            plan: self.plan,
            depths,
            snapshots,
            scalars,
            budget,
            final_state: self.state,
            history: self.history,
        })
    }
}

pub fn run_simulation(cfg: &WellConfig) -> Result<TimeSeries, SolverError> {
    Simulation::new(cfg)?.run(cfg.snapshots_per_cycle)
}
