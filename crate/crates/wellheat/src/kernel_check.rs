//! Closed-form kernel against the radial conduction oracle.

use std::io::{self, Write};

use wellheat_core::{p_of_time, radial_oracle_at, KernelError, OracleSample, SoilProps};

use crate::output::fmt_sig;

pub const KERNEL_HEADER: &str = "s,p_hasan_kabir,p_oracle,rel_err";
pub const ORACLE_HEADER: &str = "t_seconds,s_dimensionless,p_value";

/// Agreement required over [`CHECK_WINDOW`].
pub const REL_TOLERANCE: f64 = 0.05;
/// Dimensionless-time window of the agreement check.
pub const CHECK_WINDOW: (f64, f64) = (0.01, 100.0);

/// Radial cells used by the oracle.
pub const ORACLE_CELLS: usize = 400;

const DECADES: (i32, i32) = (-6, 3);
const PER_DECADE: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRow {
    pub s: f64,
    pub t: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelCheck {
    pub rows: Vec<KernelRow>,
    /// Largest `|rel_err|` inside [`CHECK_WINDOW`].
    pub max_rel_err: f64,
    /// Dimensionless time where it occurs.
    pub worst_s: f64,
}

impl KernelCheck {
    pub fn passed(&self) -> bool {
        self.max_rel_err <= REL_TOLERANCE
    }

    pub fn verdict_line(&self) -> String {
        format!(
            "kernel check: max |rel_err| over s in [{}, {}] = {} at s = {} (threshold {}): {}",
            fmt_sig(CHECK_WINDOW.0),
            fmt_sig(CHECK_WINDOW.1),
            fmt_sig(self.max_rel_err),
            fmt_sig(self.worst_s),
            fmt_sig(REL_TOLERANCE),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// `0` followed by `PER_DECADE` log-spaced points per decade, endpoints
/// included. Exact decades keep the window edges on the grid.
pub fn sample_points() -> Vec<f64> {
    let mut s = vec![0.0];
    for k in DECADES.0 * PER_DECADE..=DECADES.1 * PER_DECADE {
        s.push(10f64.powf(k as f64 / PER_DECADE as f64));
    }
    s
}

pub fn relative_error(closed_form: f64, oracle: f64) -> f64 {
    if oracle == 0.0 {
        if closed_form == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (closed_form - oracle) / oracle
    }
}

pub fn run_kernel_check(soil: &SoilProps) -> Result<(KernelCheck, Vec<OracleSample>), KernelError> {
    let s_values = sample_points();
    let times: Vec<f64> = s_values.iter().map(|&s| soil.time_of(s)).collect();
    let oracle = radial_oracle_at(soil, &times, ORACLE_CELLS)?;
    let mut rows = Vec::with_capacity(oracle.len());
    for (&s, o) in s_values.iter().zip(&oracle) {
        let closed_form = p_of_time(o.t, soil)?;
        rows.push(KernelRow { s, t: o.t, closed_form, oracle: o.p, rel_err: relative_error(closed_form, o.p) });
    }
    let (mut max_rel_err, mut worst_s) = (0.0, f64::NAN);
    for r in &rows {
        let inside = r.s >= CHECK_WINDOW.0 * (1.0 - 1e-12) && r.s <= CHECK_WINDOW.1 * (1.0 + 1e-12);
        if inside && r.rel_err.abs() > max_rel_err {
            max_rel_err = r.rel_err.abs();
            worst_s = r.s;
        }
    }
    Ok((KernelCheck { rows, max_rel_err, worst_s }, oracle))
}

pub fn write_kernel_csv<W: Write>(mut out: W, check: &KernelCheck) -> io::Result<()> {
    writeln!(out, "{KERNEL_HEADER}")?;
    for r in &check.rows {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_sig(r.s),
            fmt_sig(r.closed_form),
            fmt_sig(r.oracle),
            fmt_sig(r.rel_err)
        )?;
    }
    out.flush()
}

pub fn write_oracle_csv<W: Write>(mut out: W, samples: &[OracleSample]) -> io::Result<()> {
    writeln!(out, "{ORACLE_HEADER}")?;
    for o in samples {
        writeln!(out, "{},{},{}", fmt_sig(o.t), fmt_sig(o.s), fmt_sig(o.p))?;
    }
    out.flush()
}
