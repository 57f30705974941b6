//! CSV and text artifacts written by the command-line driver.
//!
//! Every number goes through [`fmt_sig`], so identical runs give
//! byte-identical files.

use std::fmt::Write as _;
use std::io::{self, Write};

use wellheat_core::{ComparisonReport, FlowArrangement, TimeSeries};

/// Significant digits of every serialized number.
pub const SIG_DIGITS: usize = 9;

pub const PROFILE_HEADER: &str = "time_s,z_m,T_oil_K,T_inner_K,T_outer_K,T_formation_K,q_f_W_per_m";

/// Formats `x` with [`SIG_DIGITS`] significant digits in the shortest of
/// plain or exponent notation, in the manner of C's `%.9g`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_fraction(mantissa.to_string()))
    }
}

fn trim_fraction(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Header of the scalar series; the outlet column names the annulus the
/// water leaves through.
pub fn scalar_header(mode: FlowArrangement) -> &'static str {
    match mode {
        FlowArrangement::Counter => "time_s,outlet_outer_K,bottomhole_oil_K,total_flux_W",
        FlowArrangement::Parallel => "time_s,outlet_inner_K,bottomhole_oil_K,total_flux_W",
    }
}

pub fn write_profiles<W: Write>(mut out: W, series: &TimeSeries) -> io::Result<()> {
    writeln!(out, "{PROFILE_HEADER}")?;
    let mut line = String::new();
    for snap in &series.snapshots {
        let time = fmt_sig(snap.time);
        for (i, z) in series.depths.iter().enumerate() {
            line.clear();
            let _ = write!(
                line,
                "{time},{},{},{},{},{},{}",
                fmt_sig(*z),
                fmt_sig(snap.oil[i]),
                fmt_sig(snap.inner[i]),
                fmt_sig(snap.outer[i]),
                fmt_sig(snap.formation[i]),
                fmt_sig(snap.flux[i]),
            );
            writeln!(out, "{line}")?;
        }
    }
    out.flush()
}

pub fn write_scalars<W: Write>(mut out: W, series: &TimeSeries) -> io::Result<()> {
    writeln!(out, "{}", scalar_header(series.arrangement))?;
    for s in &series.scalars {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_sig(s.time),
            fmt_sig(s.outlet_water),
            fmt_sig(s.bottomhole_oil),
            fmt_sig(s.total_flux)
        )?;
    }
    out.flush()
}

/// Plain-text run summary. `residual` is the per-node residual of the
/// formation equation, when it was computed.
pub fn summary_text(series: &TimeSeries, residual: Option<&[f64]>) -> String {
    let fs = &series.final_state;
    let last = fs.nodes() - 1;
    let b = &series.budget;
    let mut s = String::new();
    let _ = writeln!(s, "arrangement: {}", series.arrangement);
    let _ = writeln!(s, "cells: {}", last);
    let _ = writeln!(s, "cell size (m): {}", fmt_sig(series.h));
    let _ = writeln!(s, "time step (s): {}", fmt_sig(series.tau));
    let _ = writeln!(
        s,
        "steps: {} ({} circulating + {} shut-in per cycle, {} cycles)",
        series.plan.total_steps(),
        series.plan.heating_steps,
        series.plan.cooling_steps,
        series.plan.cycles
    );
    let _ = writeln!(s, "final time (s): {}", fmt_sig(series.final_time()));
    let _ = writeln!(s, "snapshots: {}", series.snapshots.len());
    let _ = writeln!(s, "oil temperature at surface (K): {}", fmt_sig(fs.oil[0]));
    let _ = writeln!(s, "oil temperature at bottom (K): {}", fmt_sig(fs.oil[last]));
    let _ = writeln!(s, "oil temperature drop (K): {}", fmt_sig(series.oil_drop()));
    if let Some(sample) = series.scalars.last() {
        let _ = writeln!(s, "outlet water temperature (K): {}", fmt_sig(sample.outlet_water));
        let _ = writeln!(s, "bottom-hole water temperature (K): {}", fmt_sig(sample.bottomhole_water));
        let _ = writeln!(s, "formation heat flux (W): {}", fmt_sig(sample.total_flux));
    }
    let _ = writeln!(s, "heat lost by water (J): {}", fmt_sig(b.water_loss()));
    let _ = writeln!(s, "heat gained by oil (J): {}", fmt_sig(b.oil_gain()));
    let _ = writeln!(s, "heat delivered to formation (J): {}", fmt_sig(b.delivered));
    let _ = writeln!(s, "energy balance residual (J): {}", fmt_sig(b.residual()));
    if let Some(r) = residual {
        let worst = r.iter().copied().fold(0.0_f64, f64::max);
        let _ = writeln!(s, "formation equation residual, max over nodes (K): {}", fmt_sig(worst));
    }
    s
}

pub fn comparison_text(report: &ComparisonReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "counter oil temperature drop (K): {}", fmt_sig(report.counter_drop));
    let _ = writeln!(s, "parallel oil temperature drop (K): {}", fmt_sig(report.parallel_drop));
    let _ = writeln!(s, "smaller drop: {}", report.verdict.name());
    s
}
