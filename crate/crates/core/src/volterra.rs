//! Formation temperature from the heat-flux history.
//!
//! The formation face temperature is a Duhamel convolution of the kernel with
//! the flux history. Discretised by the composite trapezoid rule on a uniform
//! time grid it becomes
//!
//! ```text
//! T_F^n = 1/(1+P_1) · ( T_Z + Σ_{k=1}^{n-1} (T_V^k − T_F^k)(P_{n+1−k} − P_{n−1−k}) + P_1·T_V^n )
//! ```
//!
//! with `P_m` the weights stored in a [`KernelTable`]. Every level depends on
//! all previous ones, so the full history is kept.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::kernel::{p_of_time, KernelError, KernelTable, SoilProps, BRANCH_SWITCH};

#[derive(Debug, Clone, PartialEq)]
pub enum VolterraError {
    Kernel(KernelError),
    NodeCountMismatch { expected: usize, got: usize },
}

impl From<KernelError> for VolterraError {
    fn from(e: KernelError) -> Self {
        VolterraError::Kernel(e)
    }
}

impl fmt::Display for VolterraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VolterraError::Kernel(e) => e.fmt(f),
            VolterraError::NodeCountMismatch { expected, got } => {
                write!(f, "history has {expected} nodes, update supplied {got}")
            }
        }
    }
}

impl core::error::Error for VolterraError {}

/// Past outer-annulus water temperatures `T_V` and formation temperatures
/// `T_F` at every node, levels `1..=levels()`. Level 0 is the undisturbed
/// state `T_V = T_F = T_Z` and is not stored.
#[derive(Debug, Clone)]
pub struct FormationHistory {
    geothermal: Vec<f64>,
    // Time-major: level k occupies [(k-1)·nodes, k·nodes).
    outer: Vec<f64>,
    formation: Vec<f64>,
    levels: usize,
    kernel_terms: u64,
}

impl FormationHistory {
    pub fn new(geothermal: Vec<f64>) -> Self {
        FormationHistory {
            geothermal,
            outer: Vec::new(),
            formation: Vec::new(),
            levels: 0,
            kernel_terms: 0,
        }
    }

    pub fn nodes(&self) -> usize {
        self.geothermal.len()
    }

    /// Number of stored levels; the next update produces level `levels() + 1`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn geothermal(&self) -> &[f64] {
        &self.geothermal
    }

    /// Outer-annulus temperatures at `level` (level 0 is `T_Z`).
    pub fn outer_level(&self, level: usize) -> &[f64] {
        if level == 0 {
            return &self.geothermal;
        }
        let n = self.nodes();
        &self.outer[(level - 1) * n..level * n]
    }

    /// Formation temperatures at `level` (level 0 is `T_Z`).
    pub fn formation_level(&self, level: usize) -> &[f64] {
        if level == 0 {
            return &self.geothermal;
        }
        let n = self.nodes();
        &self.formation[(level - 1) * n..level * n]
    }

    /// Kernel products evaluated so far across all nodes and updates.
    pub fn kernel_terms(&self) -> u64 {
        self.kernel_terms
    }

    pub fn push(&mut self, outer: &[f64], formation: &[f64]) -> Result<(), VolterraError> {
        let n = self.nodes();
        for got in [outer.len(), formation.len()] {
            if got != n {
                return Err(VolterraError::NodeCountMismatch { expected: n, got });
            }
        }
        self.outer.extend_from_slice(outer);
        self.formation.extend_from_slice(formation);
        self.levels += 1;
        Ok(())
    }
}

pub fn heat_flux(t_e: f64, t_f: f64, b_f: f64) -> f64 {
    b_f * (t_e - t_f)
}

/// Advances the formation to the next level given the new outer-annulus
/// temperatures, records both in the history and returns `T_F`.
pub fn formation_update(
    hist: &mut FormationHistory,
    kernel: &KernelTable,
    outer_new: &[f64],
) -> Result<Vec<f64>, VolterraError> {
    let nodes = hist.nodes();
    if outer_new.len() != nodes {
        return Err(VolterraError::NodeCountMismatch { expected: nodes, got: outer_new.len() });
    }
    let level = hist.levels + 1;
    if kernel.max_level() < level {
        return Err(KernelError::TableTooShort { needed: level + 1, available: kernel.len() }.into());
    }
    let p = kernel.values();
    let mut acc = vec![0.0; nodes];
    for k in 1..level {
        let weight = p[level + 1 - k] - p[level - 1 - k];
        let base = (k - 1) * nodes;
        let tv = &hist.outer[base..base + nodes];
        let tf = &hist.formation[base..base + nodes];
        for ((a, v), f) in acc.iter_mut().zip(tv).zip(tf) {
            *a += (v - f) * weight;
        }
    }
    hist.kernel_terms += ((level - 1) * nodes) as u64;

    // Written relative to T_Z so that an undisturbed node stays exactly at T_Z.
    let p1 = p[1];
    let formation: Vec<f64> = acc
        .iter()
        .zip(outer_new)
        .zip(&hist.geothermal)
        .map(|((a, v), z)| z + (a + p1 * (v - z)) / (1.0 + p1))
        .collect();
    hist.push(outer_new, &formation)?;
    Ok(formation)
}

const GAUSS_8: [(f64, f64); 8] = [
    (-0.9602898564975362, 0.10122853629037669),
    (-0.7966664774136267, 0.22238103445337434),
    (-0.525532409916329, 0.31370664587788705),
    (-0.18343464249564978, 0.36268378337836177),
    (0.18343464249564978, 0.36268378337836177),
    (0.525532409916329, 0.31370664587788705),
    (0.7966664774136267, 0.22238103445337434),
    (0.9602898564975362, 0.10122853629037669),
];

fn gauss<F: Fn(f64) -> Result<f64, KernelError>>(a: f64, b: f64, f: F) -> Result<f64, KernelError> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in GAUSS_8 {
        sum += w * f(mid + half * x)?;
    }
    Ok(half * sum)
}

/// `∫_a^b p(u) du`, split at the branch switch. On the `√s` branch the
/// substitution `u = x²` makes the integrand polynomial, so Gauss is exact.
fn kernel_integral(a: f64, b: f64, soil: &SoilProps) -> Result<f64, KernelError> {
    let switch = soil.time_of(BRANCH_SWITCH);
    if a < switch && switch < b {
        return Ok(kernel_integral(a, switch, soil)? + kernel_integral(switch, b, soil)?);
    }
    if b <= switch {
        gauss(libm::sqrt(a), libm::sqrt(b), |x| Ok(p_of_time(x * x, soil)? * 2.0 * x))
    } else {
        gauss(a, b, |u| p_of_time(u, soil))
    }
}

/// Per-node residual of the continuous Volterra equation for the flux,
///
/// ```text
/// b_f (T_e − T_z) = q_f + b_f ∫_0^t p′(t−s) q_f(s) ds,
/// ```
///
/// evaluated on a completed history. The flux is interpolated linearly in time
/// and the singular `p′` is integrated by parts, leaving exact kernel
/// integrals `∫ p` over each step that are computed by Gauss quadrature. The
/// residual therefore measures the quadrature error of the trapezoid update.
/// Returns the maximum absolute residual over all levels, per node (W/m).
pub fn volterra_residual(
    hist: &FormationHistory,
    soil: &SoilProps,
    b_f: f64,
    tau: f64,
) -> Result<Vec<f64>, VolterraError> {
    let nodes = hist.nodes();
    let levels = hist.levels();
    if b_f == 0.0 || levels == 0 {
        return Ok(vec![0.0; nodes]);
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(KernelError::InvalidStep.into());
    }
    soil.validate()?;
    // cell[j] = ∫_{(j-1)τ}^{jτ} p(u) du / τ
    let mut cell = vec![0.0; levels + 1];
    for (j, c) in cell.iter_mut().enumerate().skip(1) {
        *c = kernel_integral((j - 1) as f64 * tau, j as f64 * tau, soil)? / tau;
    }

    let mut residual = vec![0.0; nodes];
    let mut q = vec![0.0; levels + 1];
    for (i, res) in residual.iter_mut().enumerate() {
        for (k, qk) in q.iter_mut().enumerate().skip(1) {
            *qk = heat_flux(hist.outer_level(k)[i], hist.formation_level(k)[i], b_f);
        }
        let t_z = hist.geothermal[i];
        let mut worst: f64 = 0.0;
        for n in 1..=levels {
            let conv: f64 = (0..n).map(|k| (q[k + 1] - q[k]) * cell[n - k]).sum();
            let lhs = b_f * (hist.outer_level(n)[i] - t_z);
            let rhs = q[n] + b_f * conv;
            worst = worst.max((lhs - rhs).abs());
        }
        *res = worst;
    }
    Ok(residual)
}
