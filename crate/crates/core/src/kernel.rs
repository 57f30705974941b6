//! Transient response of the formation to a unit lineal heat flux.
//!
//! The production path uses the Hasan–Kabir closed form [`p_dimensionless`].
//! [`radial_oracle`] solves the underlying radial conduction problem with an
//! implicit finite-volume scheme and serves only to validate that closed form.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::tridiag;

/// Dimensionless time at which the closed form switches branch.
pub const BRANCH_SWITCH: f64 = 1.5;

/// Outer radius of the oracle domain, in multiples of the formation radius.
pub const ORACLE_OUTER_RADIUS: f64 = 1.0e3;

/// Relative growth of the oracle's internal time steps.
const ORACLE_REL_STEP: f64 = 1.0e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelError {
    NegativeArgument(f64),
    InvalidSoil(&'static str),
    InvalidStep,
    /// The oracle needs at least 16 radial cells and 16 time samples.
    GridTooCoarse,
    /// A tridiagonal solve produced a zero pivot or non-finite values.
    SolveFailed { time: f64 },
    TableTooShort { needed: usize, available: usize },
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelError::NegativeArgument(v) => write!(f, "kernel argument {v} is negative"),
            KernelError::InvalidSoil(field) => write!(f, "soil property `{field}` must be positive"),
            KernelError::InvalidStep => f.write_str("time step must be positive and finite"),
            KernelError::GridTooCoarse => {
                f.write_str("radial oracle needs at least 16 radial cells and 16 time samples")
            }
            KernelError::SolveFailed { time } => {
                write!(f, "radial solve failed at t = {time} s (grid or time-step pathology)")
            }
            KernelError::TableTooShort { needed, available } => {
                write!(f, "kernel table has {available} entries, level needs {needed}")
            }
        }
    }
}

impl core::error::Error for KernelError {}

/// Thermal properties of the soil and the radius of the formation face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoilProps {
    pub rho_f: f64,
    pub c_f: f64,
    pub k_f: f64,
    pub r_f: f64,
}

impl SoilProps {
    pub fn validate(&self) -> Result<(), KernelError> {
        for (name, v) in [("rho_f", self.rho_f), ("c_f", self.c_f), ("k_f", self.k_f), ("r_f", self.r_f)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(KernelError::InvalidSoil(name));
            }
        }
        Ok(())
    }

    /// Dimensionless time `k_f t / (ρ_f c_f r_f²)`.
    pub fn dimensionless_time(&self, t: f64) -> f64 {
        self.k_f * t / (self.rho_f * self.c_f * self.r_f * self.r_f)
    }

    /// Inverse of [`SoilProps::dimensionless_time`].
    pub fn time_of(&self, s: f64) -> f64 {
        s * self.rho_f * self.c_f * self.r_f * self.r_f / self.k_f
    }
}

/// Hasan–Kabir dimensionless formation response.
///
/// The two branches do not meet at `s = 1.5`: the left branch gives about
/// 0.87421 and the right one about 0.85017, a drop of roughly 2.7%. The
/// printed switch point is kept as is.
pub fn p_dimensionless(s: f64) -> Result<f64, KernelError> {
    if !(s >= 0.0) {
        return Err(KernelError::NegativeArgument(s));
    }
    let value = if s <= BRANCH_SWITCH {
        let root = libm::sqrt(s);
        2.0 / libm::sqrt(PI) * root * (1.0 - 0.3 * root)
    } else {
        0.5 * (0.80907 + libm::log(s)) * (1.0 + 0.6 / s)
    };
    Ok(value)
}

/// Formation kernel `p(t)` in K·m/W: the face temperature rise per unit
/// lineal heat flux.
pub fn p_of_time(t: f64, soil: &SoilProps) -> Result<f64, KernelError> {
    if !(t >= 0.0) {
        return Err(KernelError::NegativeArgument(t));
    }
    let s = soil.dimensionless_time(t);
    Ok(p_dimensionless(s)? / (2.0 * PI * soil.k_f))
}

/// Kernel samples at multiples of a fixed time step.
///
/// `values[m]` is the weight `P_m = ½·b_f·p(m·τ)` of the composite trapezoid
/// update for the formation temperature. It is dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    tau: f64,
    values: Vec<f64>,
}

impl KernelTable {
    /// Wraps precomputed weights. `values[0]` must be zero.
    pub fn from_values(tau: f64, values: Vec<f64>) -> Result<Self, KernelError> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(KernelError::InvalidStep);
        }
        match values.first() {
            Some(0.0) => Ok(KernelTable { tau, values }),
            Some(&v0) => Err(KernelError::NegativeArgument(v0)),
            None => Err(KernelError::TableTooShort { needed: 1, available: 0 }),
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Highest time level the table can serve.
    pub fn max_level(&self) -> usize {
        self.values.len() - 1
    }

    /// True when the weights never decrease. Fails for fine steps whose samples
    /// straddle the branch switch of the closed form.
    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

pub fn build_kernel_table(
    tau: f64,
    n_steps: usize,
    soil: &SoilProps,
    b_f: f64,
) -> Result<KernelTable, KernelError> {
    if !(tau.is_finite() && tau > 0.0) || n_steps < 1 {
        return Err(KernelError::InvalidStep);
    }
    soil.validate()?;
    let values = (0..=n_steps)
        .map(|m| p_of_time(m as f64 * tau, soil).map(|p| 0.5 * b_f * p))
        .collect::<Result<Vec<_>, _>>()?;
    KernelTable::from_values(tau, values)
}

/// One sample of the radial oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    /// Time (s).
    pub t: f64,
    /// Dimensionless time.
    pub s: f64,
    /// Face temperature per unit lineal flux (K·m/W), comparable to [`p_of_time`].
    pub p: f64,
}

/// Radial grid from the formation face out to [`ORACLE_OUTER_RADIUS`], in
/// units of `r_f`, with spacing growing geometrically from `first`.
fn graded_grid(n_cells: usize, first: f64) -> Vec<f64> {
    let span = ORACLE_OUTER_RADIUS - 1.0;
    let n = n_cells as f64;
    let total = |g: f64| {
        if (g - 1.0).abs() < 1e-12 {
            first * n
        } else {
            first * (libm::pow(g, n) - 1.0) / (g - 1.0)
        }
    };
    let growth = if total(1.0) >= span {
        1.0
    } else {
        let (mut lo, mut hi) = (1.0, 2.0);
        while total(hi) < span {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if total(mid) < span {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut r = Vec::with_capacity(n_cells + 1);
    r.push(1.0);
    let mut dr = if growth == 1.0 { span / n } else { first };
    for _ in 0..n_cells {
        let next = r[r.len() - 1] + dr;
        r.push(next);
        dr *= growth;
    }
    // Pin the far end against accumulated rounding.
    r[n_cells] = ORACLE_OUTER_RADIUS;
    r
}

/// Solves the dimensionless radial problem
/// `∂u/∂s = (1/r) ∂/∂r (r ∂u/∂r)` on `1 < r < 1000` with `u(r, 0) = 0`,
/// `-∂u/∂r(1, s) = 1` and `u(1000, s) = 0`, reporting `u(1, s)` at the
/// requested dimensionless times. Backward Euler with geometrically growing
/// steps resolves the `√s` start-up.
fn radial_face_response(times: &[f64], n_r: usize) -> Result<Vec<f64>, KernelError> {
    let s_first = times.iter().copied().find(|&s| s > 0.0).unwrap_or(1.0);
    let first_cell = (0.02 * libm::sqrt(s_first)).min(1.0e-2);
    let r = graded_grid(n_r, first_cell);
    let m = n_r; // node m is the far-field Dirichlet node
    let half: Vec<f64> = (0..m).map(|j| 0.5 * (r[j] + r[j + 1])).collect();
    // Control-volume measure (per radian) and face conductances.
    let mut volume = Vec::with_capacity(m);
    for j in 0..m {
        let inner = if j == 0 { r[0] } else { half[j - 1] };
        volume.push(0.5 * (half[j] * half[j] - inner * inner));
    }
    let conductance: Vec<f64> = (0..m).map(|j| half[j] / (r[j + 1] - r[j])).collect();

    let mut u = alloc::vec![0.0; m];
    let mut lower = alloc::vec![0.0; m];
    let mut diag = alloc::vec![0.0; m];
    let mut upper = alloc::vec![0.0; m];
    let mut rhs = alloc::vec![0.0; m];

    let mut out = Vec::with_capacity(times.len());
    let mut now = 0.0_f64;
    let start_step = 1.0e-6 * s_first;
    for &target in times {
        if !(target >= now) {
            return Err(KernelError::NegativeArgument(target - now));
        }
        while now < target {
            let mut dt = (ORACLE_REL_STEP * now).max(start_step);
            if now + dt >= target * (1.0 - 1e-12) {
                dt = target - now;
            }
            for j in 0..m {
                let west = if j == 0 { 0.0 } else { conductance[j - 1] };
                let east = conductance[j];
                lower[j] = -west;
                upper[j] = if j + 1 < m { -east } else { 0.0 };
                diag[j] = volume[j] / dt + west + east;
                rhs[j] = volume[j] / dt * u[j];
            }
            // Unit flux entering through the face r = 1.
            rhs[0] += r[0];
            u = tridiag::solve(&lower, &diag, &upper, &rhs)
                .ok_or(KernelError::SolveFailed { time: now + dt })?;
            now += dt;
            if target - now < 1e-12 * target {
                now = target;
            }
        }
        out.push(u[0]);
    }
    Ok(out)
}

/// Radial oracle sampled at `n_t + 1` uniform times on `[0, t_end]`.
pub fn radial_oracle(
    soil: &SoilProps,
    t_end: f64,
    n_r: usize,
    n_t: usize,
) -> Result<Vec<OracleSample>, KernelError> {
    if n_r < 16 || n_t < 16 {
        return Err(KernelError::GridTooCoarse);
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(KernelError::InvalidStep);
    }
    let times: Vec<f64> = (0..=n_t).map(|j| t_end * j as f64 / n_t as f64).collect();
    radial_oracle_at(soil, &times, n_r)
}

/// Radial oracle sampled at arbitrary non-decreasing times (s).
pub fn radial_oracle_at(
    soil: &SoilProps,
    times: &[f64],
    n_r: usize,
) -> Result<Vec<OracleSample>, KernelError> {
    soil.validate()?;
    if n_r < 16 {
        return Err(KernelError::GridTooCoarse);
    }
    let dimless: Vec<f64> = times.iter().map(|&t| soil.dimensionless_time(t)).collect();
    let face = radial_face_response(&dimless, n_r)?;
    let scale = 1.0 / (2.0 * PI * soil.k_f);
    Ok(times
        .iter()
        .zip(dimless)
        .zip(face)
        .map(|((&t, s), u)| OracleSample { t, s, p: u * scale })
        .collect())
}
