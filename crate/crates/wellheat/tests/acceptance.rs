//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wellheat::cli::compare;
use wellheat::config_file::parse_config;
use wellheat::kernel_check::{run_kernel_check, CHECK_WINDOW, REL_TOLERANCE};
use wellheat_core::{
    derive_coefficients, run_simulation, upwind_step, volterra_residual, with_arrangement, cfl_timestep,
    ComparisonReport, FlowArrangement, GridState, Phase, Simulation, TimeSeries, WellConfig,
};
use wellheat_core::solver::Speeds;

fn demo() -> WellConfig {
    let text = include_str!("../../../configs/demo.cfg");
    parse_config(text).expect("demo config parses")
}

fn demo_comparison() -> &'static ComparisonReport {
    static REPORT: OnceLock<ComparisonReport> = OnceLock::new();
    REPORT.get_or_init(|| compare(&demo()).expect("demo comparison runs"))
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn max_dev(values: &[f64], target: f64) -> f64 {
    values.iter().map(|v| (v - target).abs()).fold(0.0, f64::max)
}

fn fields(s: &GridState) -> [&[f64]; 4] {
    [&s.oil, &s.inner, &s.outer, &s.formation]
}

/// Least-squares slope of `log2(err)` against the halving index.
fn fitted_order(errs: &[f64]) -> f64 {
    let n = errs.len() as f64;
    let xs: Vec<f64> = (0..errs.len()).map(|k| k as f64).collect();
    let ys: Vec<f64> = errs.iter().map(|e| -e.log2()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn ratios(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[0] / w[1]).collect()
}

fn fmt_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
}

fn refined(cfg: &WellConfig, k: usize) -> WellConfig {
    WellConfig { n_cells: cfg.n_cells << k, ..cfg.clone() }
}

// 1
fn equilibrium_is_exact() -> Outcome {
    let cfg = WellConfig {
        geo_gradient: 0.0,
        t_inj: 300.0,
        t_surf: 300.0,
        n_cells: 10,
        lambda: 1.0,
        cycle_heating_s: 225_000.0,
        cycle_cooling_s: 25_000.0,
        n_cycles: 4,
        ..demo()
    };
    let mut sim = Simulation::new(&cfg).expect("equilibrium config is valid");
    let steps = sim.plan().total_steps();
    let mut drift: f64 = 0.0;
    while !sim.is_finished() {
        sim.step().expect("step");
        for f in fields(sim.state()) {
            drift = drift.max(max_dev(f, 300.0));
        }
    }
    Outcome::new(steps == 10_000 && drift <= 1e-10, format!("{steps} steps, max drift {drift:e} K (limit 1e-10)"))
}

// 2
fn unit_courant_shift_is_exact() -> Outcome {
    // Powers of two keep h, v and tau exact.
    let cfg = WellConfig {
        depth: 64.0,
        n_cells: 64,
        b_o: 0.0,
        b_e: 0.0,
        b_f: 0.0,
        v_o: 0.5,
        v_i: 0.5,
        area_i: 0.01,
        area_e: 0.01,
        cfl_safety: 1.0,
        lambda: 0.0,
        cycle_heating_s: 256.0,
        cycle_cooling_s: 0.0,
        n_cycles: 1,
        ..demo()
    };
    let coeffs = derive_coefficients(&cfg);
    let h = cfg.cell_size();
    let tau = cfl_timestep(&coeffs, h, 1.0).expect("tau");
    if tau != 2.0 {
        return Outcome::new(false, format!("unit-Courant step is {tau}, expected 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let nodes = cfg.n_cells + 1;
    let profile = |rng: &mut ChaCha8Rng| (0..nodes).map(|_| rng.gen_range(280.0..370.0)).collect::<Vec<f64>>();
    let mut state = GridState {
        h,
        oil: profile(&mut rng),
        inner: profile(&mut rng),
        outer: profile(&mut rng),
        formation: vec![300.0; nodes],
        flux: vec![0.0; nodes],
        time: 0.0,
        phase: Phase::Circulating,
    };
    let speeds = Speeds { oil: -coeffs.v_o, inner: coeffs.v_i, outer: -coeffs.v_e };
    let mut mismatches = 0;
    for _ in 0..32 {
        let next = upwind_step(&state, &coeffs, tau, speeds).expect("step");
        for j in 0..nodes - 1 {
            mismatches += usize::from(next.oil[j].to_bits() != state.oil[j + 1].to_bits());
            mismatches += usize::from(next.outer[j].to_bits() != state.outer[j + 1].to_bits());
            mismatches += usize::from(next.inner[j + 1].to_bits() != state.inner[j].to_bits());
        }
        state = next;
    }
    // Full runs through the boundary logic shift bitwise too.
    let series = run_simulation(&cfg).expect("decoupled run");
    let snaps = &series.snapshots;
    let mut run_mismatches = 0;
    for w in snaps.windows(2) {
        let lag = ((w[1].time - w[0].time) / tau).round() as usize;
        for j in 0..nodes - lag {
            run_mismatches += usize::from(w[1].oil[j].to_bits() != w[0].oil[j + lag].to_bits());
            run_mismatches += usize::from(w[1].inner[j + lag].to_bits() != w[0].inner[j].to_bits());
        }
    }
    Outcome::new(
        mismatches == 0 && run_mismatches == 0,
        format!("32 random-profile steps: {mismatches} mismatched nodes; full run: {run_mismatches}"),
    )
}

fn random_config(rng: &mut ChaCha8Rng) -> WellConfig {
    let mut cfg = WellConfig {
        depth: rng.gen_range(300.0..2500.0),
        formation_radius: rng.gen_range(0.05..0.3),
        area_o: rng.gen_range(0.002..0.02),
        area_i: rng.gen_range(0.002..0.03),
        area_e: rng.gen_range(0.002..0.03),
        rho_o: rng.gen_range(700.0..1000.0),
        rho_w: rng.gen_range(950.0..1050.0),
        rho_f: rng.gen_range(1500.0..3000.0),
        c_o: rng.gen_range(1500.0..2500.0),
        c_w: rng.gen_range(4000.0..4300.0),
        c_f: rng.gen_range(600.0..1200.0),
        k_f: rng.gen_range(0.5..4.0),
        b_o: rng.gen_range(0.0..60.0),
        b_e: rng.gen_range(0.0..60.0),
        b_f: rng.gen_range(0.0..40.0),
        v_o: rng.gen_range(0.0..1.0),
        v_i: rng.gen_range(0.02..1.5),
        t_inj: rng.gen_range(280.0..370.0),
        t_surf: rng.gen_range(270.0..300.0),
        geo_gradient: rng.gen_range(0.0..0.05),
        mode: if rng.gen_bool(0.5) { FlowArrangement::Counter } else { FlowArrangement::Parallel },
        cycle_heating_s: 1.0,
        cycle_cooling_s: 0.0,
        n_cycles: rng.gen_range(1..=3),
        n_cells: rng.gen_range(8..=60),
        lambda: 0.0,
        cfl_safety: rng.gen_range(0.2..=1.0),
        shut_in_oil_flow: rng.gen_bool(0.7),
        snapshots_per_cycle: 10,
    };
    // Durations as whole multiples of the automatic step keep runs small.
    let tau = cfl_timestep(&derive_coefficients(&cfg), cfg.cell_size(), cfg.cfl_safety).expect("tau");
    cfg.cycle_heating_s = tau * rng.gen_range(20..400) as f64;
    cfg.cycle_cooling_s = tau * rng.gen_range(0..200) as f64;
    cfg
}

// 3
fn maximum_principle_holds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut levels = 0usize;
    for _ in 0..20 {
        let cfg = random_config(&mut rng);
        let t_bottom = cfg.geothermal(cfg.depth).expect("bottom");
        let lo = cfg.t_surf.min(cfg.t_inj).min(t_bottom);
        let hi = cfg.t_surf.max(cfg.t_inj).max(t_bottom);
        let mut sim = Simulation::new(&cfg).expect("random config is valid");
        let mut excess: f64 = 0.0;
        while !sim.is_finished() {
            sim.step().expect("step");
            levels += 1;
            for f in fields(sim.state()) {
                for &t in f {
                    excess = excess.max(lo - t).max(t - hi);
                }
            }
        }
        worst = worst.max(excess);
        failures += usize::from(excess > 1e-8);
    }
    Outcome::new(
        failures == 0,
        format!("20 configs, {levels} levels, {failures} outside the hull, worst excursion {worst:.3e} K (tolerance 1e-8)"),
    )
}

fn convergence_config() -> WellConfig {
    WellConfig { n_cells: 25, lambda: 2.0, cycle_heating_s: 14_400.0, cycle_cooling_s: 0.0, n_cycles: 1, ..demo() }
}

// 4
fn self_convergence() -> Outcome {
    let base = convergence_config();
    let mut pass = true;
    let mut detail = Vec::new();
    for mode in [FlowArrangement::Counter, FlowArrangement::Parallel] {
        let runs: Vec<GridState> = (0..5)
            .map(|k| run_simulation(&refined(&with_arrangement(&base, mode), k)).expect("run").final_state)
            .collect();
        let finest = &runs[4];
        let errs: Vec<f64> = (0..4)
            .map(|k| {
                let stride = 1 << (4 - k);
                let coarse = &runs[k];
                let mut e: f64 = 0.0;
                for (cf, ff) in fields(coarse).iter().zip(fields(finest)) {
                    for (i, c) in cf.iter().enumerate() {
                        e = e.max((c - ff[i * stride]).abs());
                    }
                }
                e
            })
            .collect();
        let order = fitted_order(&errs);
        pass &= order >= 0.8;
        detail.push(format!("{mode}: errors [{}] order {order:.3}", fmt_list(&errs)));
    }
    Outcome::new(pass, format!("{} (need >= 0.8)", detail.join("; ")))
}

// 5
fn kernel_matches_oracle() -> Outcome {
    let soil = demo().soil();
    let start = Instant::now();
    let (check, _) = run_kernel_check(&soil).expect("kernel check runs");
    let elapsed = start.elapsed();
    let scale = 2.0 * std::f64::consts::PI * soil.k_f;
    let mut asym_err: f64 = 0.0;
    for r in check.rows.iter().filter(|r| r.s > 0.0 && r.s <= 1e-4) {
        let asym = 2.0 * (r.s / std::f64::consts::PI).sqrt();
        asym_err = asym_err.max((r.oracle * scale - asym).abs() / asym);
        asym_err = asym_err.max((r.closed_form * scale - asym).abs() / asym);
    }
    let pass = check.max_rel_err <= REL_TOLERANCE && asym_err <= 0.01 && elapsed <= Duration::from_secs(60);
    Outcome::new(
        pass,
        format!(
            "max rel err over s in [{}, {}] = {:.4} at s = {:.4} (limit {REL_TOLERANCE}); asymptote rel err {asym_err:.2e} (limit 1e-2); {:.2} s (limit 60 s)",
            CHECK_WINDOW.0,
            CHECK_WINDOW.1,
            check.max_rel_err,
            check.worst_s,
            elapsed.as_secs_f64()
        ),
    )
}

// 6
fn formation_residual_converges() -> Outcome {
    let base = convergence_config();
    let residuals: Vec<f64> = (0..4)
        .map(|k| {
            let cfg = refined(&base, k);
            let series = run_simulation(&cfg).expect("run");
            volterra_residual(&series.history, &cfg.soil(), cfg.b_f, series.tau)
                .expect("residual")
                .into_iter()
                .fold(0.0, f64::max)
        })
        .collect();
    let r = ratios(&residuals);
    Outcome::new(
        r.iter().all(|&x| x >= 1.5),
        format!("residuals [{}] K, ratios [{}] (need >= 1.5)", fmt_list(&residuals), fmt_list(&r)),
    )
}

fn interior_fraction(s: &GridState, pred: impl Fn(usize) -> bool) -> f64 {
    let interior = 1..s.nodes() - 1;
    let len = interior.len() as f64;
    interior.filter(|&j| pred(j)).count() as f64 / len
}

fn l2(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    let sum: f64 = values.iter().enumerate().map(|(i, v)| if i == 0 || i == n { 0.5 * v * v } else { v * v }).sum();
    (sum * h).sqrt()
}

// 7
fn counter_ordering() -> Outcome {
    let s = &demo_comparison().counter.final_state;
    let frac = interior_fraction(s, |j| s.oil[j] >= s.inner[j].min(s.outer[j]) && s.oil[j] <= s.inner[j].max(s.outer[j]));
    Outcome::new(frac >= 0.9, format!("oil between the annuli at {:.1}% of interior nodes (need >= 90%)", 100.0 * frac))
}

// 8
fn parallel_ordering() -> Outcome {
    let report = demo_comparison();
    let s = &report.parallel.final_state;
    let frac = interior_fraction(s, |j| s.oil[j] < s.inner[j].min(s.outer[j]));
    let fp = l2(&s.formation, s.h);
    let fc = l2(&report.counter.final_state.formation, s.h);
    Outcome::new(
        frac >= 0.9 && fp > fc,
        format!(
            "oil below both annuli at {:.1}% of interior nodes (need >= 90%); formation L2 parallel {fp:.6e} vs counter {fc:.6e}",
            100.0 * frac
        ),
    )
}

// 9
fn parallel_has_smaller_drop() -> Outcome {
    let report = demo_comparison();
    Outcome::new(
        report.parallel_drop < report.counter_drop,
        format!(
            "oil drop parallel {:.4} K, counter {:.4} K, smaller: {}",
            report.parallel_drop,
            report.counter_drop,
            report.verdict.name()
        ),
    )
}

// 10
fn never_stationary() -> Outcome {
    let report = demo_comparison();
    let series: &TimeSeries = match demo().mode {
        FlowArrangement::Counter => &report.counter,
        FlowArrangement::Parallel => &report.parallel,
    };
    let per_cycle = series.plan.steps_per_cycle();
    let cycles = series.plan.cycles;
    let end = |c: usize| &series.scalars[c * per_cycle];
    let (prev, last) = (end(cycles - 1), end(cycles));
    let water_change = (last.outlet_water - prev.outlet_water).abs();
    let oil_change = (last.outlet_oil - prev.outlet_oil).abs();
    let final_cycle = &series.scalars[(cycles - 1) * per_cycle..=cycles * per_cycle];
    let lo = final_cycle.iter().map(|s| s.bottomhole_water).fold(f64::INFINITY, f64::min);
    let hi = final_cycle.iter().map(|s| s.bottomhole_water).fold(f64::NEG_INFINITY, f64::max);
    let stabilized = water_change <= 0.1 && oil_change <= 0.1;
    Outcome::new(
        stabilized && hi - lo > 0.1,
        format!(
            "last-cycle outlet change water {water_change:.4} K, oil {oil_change:.4} K (need <= 0.1); bottom-hole range over final cycle {:.4} K (need > 0.1)",
            hi - lo
        ),
    )
}

// 11
fn energy_budget_converges() -> Outcome {
    let base = WellConfig {
        n_cells: 25,
        lambda: 2.0,
        cycle_heating_s: 3600.0,
        cycle_cooling_s: 600.0,
        n_cycles: 4,
        ..demo()
    };
    let mut pass = true;
    let mut detail = Vec::new();
    for mode in [FlowArrangement::Counter, FlowArrangement::Parallel] {
        let residuals: Vec<f64> = (0..4)
            .map(|k| run_simulation(&refined(&with_arrangement(&base, mode), k)).expect("run").budget.residual().abs())
            .collect();
        let r = ratios(&residuals);
        pass &= r.iter().all(|&x| x >= 1.5);
        detail.push(format!("{mode}: residuals [{}] J, ratios [{}]", fmt_list(&residuals), fmt_list(&r)));
    }
    Outcome::new(pass, format!("{} (need >= 1.5)", detail.join("; ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("equilibrium exactness", equilibrium_is_exact),
        ("exact advection at unit Courant number", unit_courant_shift_is_exact),
        ("maximum principle", maximum_principle_holds),
        ("self-convergence", self_convergence),
        ("kernel validation", kernel_matches_oracle),
        ("formation equation residual", formation_residual_converges),
        ("counter-flow ordering", counter_ordering),
        ("parallel-flow ordering and formation heating", parallel_ordering),
        ("arrangement verdict", parallel_has_smaller_drop),
        ("non-stationarity", never_stationary),
        ("energy budget", energy_budget_converges),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Outcome::new(false, "panicked"));
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {name}: {} [{:.1} s]",
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
