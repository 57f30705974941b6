//! Input parameters, their invariants, and the coefficients derived from them.
//!
//! All quantities are SI. Depth `z` is measured downward from the surface,
//! so the bottom of the well sits at `z = depth`.

use core::fmt;

use crate::kernel::SoilProps;

/// Which annulus receives the injected water.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowArrangement {
    /// Injection into the inner annulus, return through the outer one.
    Counter,
    /// Injection into the outer annulus, return through the inner one.
    Parallel,
}

impl FlowArrangement {
    pub fn name(self) -> &'static str {
        match self {
            FlowArrangement::Counter => "counter",
            FlowArrangement::Parallel => "parallel",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "counter" => Some(FlowArrangement::Counter),
            "parallel" => Some(FlowArrangement::Parallel),
            _ => None,
        }
    }
}

impl fmt::Display for FlowArrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An invalid parameter. `key` is the configuration key of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Invalid { key: &'static str, reason: &'static str },
    DepthOutOfRange { z: f64, depth: f64 },
}

impl ConfigError {
    pub fn key(&self) -> Option<&'static str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            ConfigError::DepthOutOfRange { .. } => None,
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Invalid { key, reason } => write!(f, "invalid value for `{key}`: {reason}"),
            ConfigError::DepthOutOfRange { z, depth } => {
                write!(f, "depth {z} m lies outside the well [0, {depth}] m")
            }
        }
    }
}

impl core::error::Error for ConfigError {}

/// Every physical, geometric, soil and numerical input of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct WellConfig {
    /// Well depth `L` (m).
    pub depth: f64,
    /// Radius of the formation face `r_f` (m).
    pub formation_radius: f64,
    /// Cross-section of the tubing (m²).
    pub area_o: f64,
    /// Cross-section of the inner annulus (m²).
    pub area_i: f64,
    /// Cross-section of the outer annulus (m²).
    pub area_e: f64,
    pub rho_o: f64,
    pub rho_w: f64,
    pub rho_f: f64,
    pub c_o: f64,
    pub c_w: f64,
    pub c_f: f64,
    /// Soil thermal conductivity (W/(m·K)).
    pub k_f: f64,
    /// Tubing to inner annulus exchange coefficient per unit length (W/(m·K)).
    pub b_o: f64,
    /// Inner to outer annulus exchange coefficient per unit length (W/(m·K)).
    pub b_e: f64,
    /// Outer annulus to formation exchange coefficient per unit length (W/(m·K)).
    pub b_f: f64,
    /// Oil speed (m/s), upward.
    pub v_o: f64,
    /// Speed of the water in the inner annulus (m/s). The outer speed follows
    /// from mass conservation.
    pub v_i: f64,
    /// Injection temperature (K).
    pub t_inj: f64,
    /// Geothermal temperature at the surface (K).
    pub t_surf: f64,
    /// Geothermal gradient (K/m).
    pub geo_gradient: f64,
    pub mode: FlowArrangement,
    /// Circulation phase of each cycle (s).
    pub cycle_heating_s: f64,
    /// Shut-in phase of each cycle (s).
    pub cycle_cooling_s: f64,
    pub n_cycles: u32,
    pub n_cells: usize,
    /// Grid ratio τ/h (s/m). Zero selects the time step from the CFL bound
    /// scaled by `cfl_safety`.
    pub lambda: f64,
    pub cfl_safety: f64,
    /// Whether oil keeps flowing while circulation is stopped.
    pub shut_in_oil_flow: bool,
    /// Profile snapshots recorded per cycle.
    pub snapshots_per_cycle: u32,
}

fn positive(key: &'static str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::Invalid { key, reason: "must be finite and strictly positive" })
    }
}

fn non_negative(key: &'static str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ConfigError::Invalid { key, reason: "must be finite and non-negative" })
    }
}

fn finite(key: &'static str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Invalid { key, reason: "must be finite" })
    }
}

impl WellConfig {
    /// Checks every field invariant. Errors carry the configuration key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        positive("depth_L", self.depth)?;
        positive("formation_radius_rf", self.formation_radius)?;
        positive("area_o", self.area_o)?;
        positive("area_i", self.area_i)?;
        positive("area_e", self.area_e)?;
        positive("rho_o", self.rho_o)?;
        positive("rho_w", self.rho_w)?;
        positive("rho_f", self.rho_f)?;
        positive("c_o", self.c_o)?;
        positive("c_w", self.c_w)?;
        positive("c_f", self.c_f)?;
        positive("k_f", self.k_f)?;
        non_negative("b_o", self.b_o)?;
        non_negative("b_e", self.b_e)?;
        non_negative("b_f", self.b_f)?;
        non_negative("v_o", self.v_o)?;
        non_negative("v_i", self.v_i)?;
        positive("T_inj", self.t_inj)?;
        positive("T_surf", self.t_surf)?;
        finite("geo_gradient", self.geo_gradient)?;
        if self.t_surf + self.geo_gradient * self.depth <= 0.0 {
            return Err(ConfigError::Invalid {
                key: "geo_gradient",
                reason: "geothermal temperature must stay positive down to the bottom",
            });
        }
        positive("cycle_heating_s", self.cycle_heating_s)?;
        non_negative("cycle_cooling_s", self.cycle_cooling_s)?;
        if self.n_cycles < 1 {
            return Err(ConfigError::Invalid { key: "n_cycles", reason: "must be at least 1" });
        }
        if self.n_cells < 2 {
            return Err(ConfigError::Invalid { key: "n_cells", reason: "must be at least 2" });
        }
        non_negative("lambda", self.lambda)?;
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(ConfigError::Invalid { key: "cfl_safety", reason: "must lie in (0, 1]" });
        }
        if self.snapshots_per_cycle < 1 {
            return Err(ConfigError::Invalid {
                key: "snapshots_per_cycle",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }

    /// Undisturbed formation temperature at depth `z`.
    pub fn geothermal(&self, z: f64) -> Result<f64, ConfigError> {
        // Allow for round-off in node positions computed as i·h.
        let slack = 1e-9 * self.depth;
        if !(z >= -slack && z <= self.depth + slack) {
            return Err(ConfigError::DepthOutOfRange { z, depth: self.depth });
        }
        Ok(self.t_surf + self.geo_gradient * z)
    }

    /// Initial inner-annulus profile: affine from the injection temperature at
    /// the surface to the geothermal temperature at the bottom.
    pub fn initial_inner(&self, z: f64) -> Result<f64, ConfigError> {
        let bottom = self.geothermal(self.depth)?;
        self.geothermal(z)?;
        let frac = z / self.depth;
        Ok(self.t_inj + (bottom - self.t_inj) * frac)
    }

    pub fn soil(&self) -> SoilProps {
        SoilProps {
            rho_f: self.rho_f,
            c_f: self.c_f,
            k_f: self.k_f,
            r_f: self.formation_radius,
        }
    }

    pub fn cell_size(&self) -> f64 {
        self.depth / self.n_cells as f64
    }
}

/// Lineal heat capacities, exchange coefficients and signed velocities.
///
/// Velocities keep the sign convention of the transport equations: with all
/// three positive the oil and the outer annulus flow upward and the inner
/// annulus flows downward (counter flow). Parallel flow flips both water signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a_o: f64,
    pub a_i: f64,
    pub a_e: f64,
    pub b_o: f64,
    pub b_e: f64,
    pub b_f: f64,
    pub v_o: f64,
    pub v_i: f64,
    pub v_e: f64,
    /// Oil temperature entering at the bottom, equal to the geothermal value there.
    pub t_oil_inlet: f64,
}

impl Coefficients {
    /// Rate constant bounding the explicit exchange terms: the largest total
    /// exchange coefficient of one column divided by its heat capacity.
    pub fn exchange_rate_bound(&self) -> f64 {
        let oil = self.b_o / self.a_o;
        let inner = (self.b_o + self.b_e) / self.a_i;
        let outer = (self.b_e + self.b_f) / self.a_e;
        oil.max(inner).max(outer)
    }

    pub fn max_speed(&self) -> f64 {
        self.v_o.abs().max(self.v_i.abs()).max(self.v_e.abs())
    }
}

pub fn derive_coefficients(cfg: &WellConfig) -> Coefficients {
    let a_o = cfg.area_o * cfg.rho_o * cfg.c_o;
    let a_i = cfg.area_i * cfg.rho_w * cfg.c_w;
    let a_e = cfg.area_e * cfg.rho_w * cfg.c_w;
    let v_e = a_i * cfg.v_i / a_e;
    let water_sign = match cfg.mode {
        FlowArrangement::Counter => 1.0,
        FlowArrangement::Parallel => -1.0,
    };
    Coefficients {
        a_o,
        a_i,
        a_e,
        b_o: cfg.b_o,
        b_e: cfg.b_e,
        b_f: cfg.b_f,
        v_o: cfg.v_o,
        v_i: water_sign * cfg.v_i,
        v_e: water_sign * v_e,
        t_oil_inlet: cfg.t_surf + cfg.geo_gradient * cfg.depth,
    }
}

#[cfg(test)]
pub(crate) fn sample_config() -> WellConfig {
    WellConfig {
        depth: 1000.0,
        formation_radius: 0.2,
        area_o: 0.01,
        area_i: 0.01,
        area_e: 0.02,
        rho_o: 900.0,
        rho_w: 1000.0,
        rho_f: 2500.0,
        c_o: 2000.0,
        c_w: 4000.0,
        c_f: 800.0,
        k_f: 2.0,
        b_o: 20.0,
        b_e: 10.0,
        b_f: 30.0,
        v_o: 0.5,
        v_i: 1.0,
        t_inj: 360.0,
        t_surf: 288.0,
        geo_gradient: 0.03,
        mode: FlowArrangement::Counter,
        cycle_heating_s: 3600.0,
        cycle_cooling_s: 0.0,
        n_cycles: 1,
        n_cells: 20,
        lambda: 0.0,
        cfl_safety: 0.9,
        shut_in_oil_flow: true,
        snapshots_per_cycle: 50,
    }
}
