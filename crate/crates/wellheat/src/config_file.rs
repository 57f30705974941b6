//! Flat `key = value` configuration documents.
//!
//! One entry per line, keys exactly as listed in [`REQUIRED_KEYS`] and
//! [`OPTIONAL_KEYS`], SI units throughout, `#` starts a comment. Unknown and
//! repeated keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;
use wellheat_core::{ConfigError, FlowArrangement, SoilProps, WellConfig};

pub const REQUIRED_KEYS: [&str; 27] = [
    "depth_L",
    "formation_radius_rf",
    "area_o",
    "area_i",
    "area_e",
    "rho_o",
    "rho_w",
    "rho_f",
    "c_o",
    "c_w",
    "c_f",
    "k_f",
    "b_o",
    "b_e",
    "b_f",
    "v_o",
    "v_i",
    "T_inj",
    "T_surf",
    "geo_gradient",
    "mode",
    "cycle_heating_s",
    "cycle_cooling_s",
    "n_cycles",
    "n_cells",
    "lambda",
    "cfl_safety",
];

/// Keys that may be omitted, with their defaults.
pub const OPTIONAL_KEYS: [(&str, &str); 2] = [("shut_in_oil_flow", "true"), ("snapshots_per_cycle", "50")];

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("cannot parse value `{value}` for key `{key}`")]
    BadValue { key: &'static str, value: String },
    #[error(transparent)]
    Invalid(#[from] ConfigError),
}

impl ParseError {
    /// The configuration key the error is about, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ParseError::Syntax { .. } => None,
            ParseError::UnknownKey { key, .. } | ParseError::DuplicateKey { key, .. } => Some(key),
            ParseError::MissingKey(key) => Some(key),
            ParseError::BadValue { key, .. } => Some(key),
            ParseError::Invalid(e) => e.key(),
        }
    }
}

fn known_key(key: &str) -> Option<&'static str> {
    REQUIRED_KEYS
        .iter()
        .copied()
        .chain(OPTIONAL_KEYS.iter().map(|(k, _)| *k))
        .find(|k| *k == key)
}

struct Entries<'a> {
    map: BTreeMap<&'static str, &'a str>,
}

impl<'a> Entries<'a> {
    fn raw(&self, key: &'static str) -> Result<&'a str, ParseError> {
        if let Some(v) = self.map.get(key) {
            return Ok(v);
        }
        OPTIONAL_KEYS
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, default)| *default)
            .ok_or(ParseError::MissingKey(key))
    }

    fn get<T: std::str::FromStr>(&self, key: &'static str) -> Result<T, ParseError> {
        let raw = self.raw(key)?;
        raw.parse().map_err(|_| ParseError::BadValue { key, value: raw.to_string() })
    }
}

fn read_entries(text: &str) -> Result<Entries<'_>, ParseError> {
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ParseError::Syntax { line: line_no })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ParseError::Syntax { line: line_no });
        }
        let known = known_key(key).ok_or_else(|| ParseError::UnknownKey { line: line_no, key: key.to_string() })?;
        if map.insert(known, value).is_some() {
            return Err(ParseError::DuplicateKey { line: line_no, key: key.to_string() });
        }
    }
    Ok(Entries { map })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<WellConfig, ParseError> {
    let e = read_entries(text)?;
    // Report missing keys in document order before any value errors.
    for key in REQUIRED_KEYS {
        e.raw(key)?;
    }
    let mode_raw = e.raw("mode")?;
    let mode = FlowArrangement::from_name(mode_raw)
        .ok_or_else(|| ParseError::BadValue { key: "mode", value: mode_raw.to_string() })?;
    let cfg = WellConfig {
        depth: e.get("depth_L")?,
        formation_radius: e.get("formation_radius_rf")?,
        area_o: e.get("area_o")?,
        area_i: e.get("area_i")?,
        area_e: e.get("area_e")?,
        rho_o: e.get("rho_o")?,
        rho_w: e.get("rho_w")?,
        rho_f: e.get("rho_f")?,
        c_o: e.get("c_o")?,
        c_w: e.get("c_w")?,
        c_f: e.get("c_f")?,
        k_f: e.get("k_f")?,
        b_o: e.get("b_o")?,
        b_e: e.get("b_e")?,
        b_f: e.get("b_f")?,
        v_o: e.get("v_o")?,
        v_i: e.get("v_i")?,
        t_inj: e.get("T_inj")?,
        t_surf: e.get("T_surf")?,
        geo_gradient: e.get("geo_gradient")?,
        mode,
        cycle_heating_s: e.get("cycle_heating_s")?,
        cycle_cooling_s: e.get("cycle_cooling_s")?,
        n_cycles: e.get("n_cycles")?,
        n_cells: e.get("n_cells")?,
        lambda: e.get("lambda")?,
        cfl_safety: e.get("cfl_safety")?,
        shut_in_oil_flow: e.get("shut_in_oil_flow")?,
        snapshots_per_cycle: e.get("snapshots_per_cycle")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Reads only the soil properties of a document. Other known keys may be
/// present or absent and are not checked.
pub fn parse_soil(text: &str) -> Result<SoilProps, ParseError> {
    let e = read_entries(text)?;
    let soil = SoilProps {
        rho_f: e.get("rho_f")?,
        c_f: e.get("c_f")?,
        k_f: e.get("k_f")?,
        r_f: e.get("formation_radius_rf")?,
    };
    let checks = [("rho_f", soil.rho_f), ("c_f", soil.c_f), ("k_f", soil.k_f), ("formation_radius_rf", soil.r_f)];
    for (key, value) in checks {
        if !(value.is_finite() && value > 0.0) {
            return Err(ConfigError::Invalid { key, reason: "must be positive" }.into());
        }
    }
    Ok(soil)
}

/// Canonical rendering; [`parse_config`] reads it back to an identical value.
pub fn render_config(cfg: &WellConfig) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{key} = {value}");
    };
    put("depth_L", &cfg.depth);
    put("formation_radius_rf", &cfg.formation_radius);
    put("area_o", &cfg.area_o);
    put("area_i", &cfg.area_i);
    put("area_e", &cfg.area_e);
    put("rho_o", &cfg.rho_o);
    put("rho_w", &cfg.rho_w);
    put("rho_f", &cfg.rho_f);
    put("c_o", &cfg.c_o);
    put("c_w", &cfg.c_w);
    put("c_f", &cfg.c_f);
    put("k_f", &cfg.k_f);
    put("b_o", &cfg.b_o);
    put("b_e", &cfg.b_e);
    put("b_f", &cfg.b_f);
    put("v_o", &cfg.v_o);
    put("v_i", &cfg.v_i);
    put("T_inj", &cfg.t_inj);
    put("T_surf", &cfg.t_surf);
    put("geo_gradient", &cfg.geo_gradient);
    put("mode", &cfg.mode);
    put("cycle_heating_s", &cfg.cycle_heating_s);
    put("cycle_cooling_s", &cfg.cycle_cooling_s);
    put("n_cycles", &cfg.n_cycles);
    put("n_cells", &cfg.n_cells);
    put("lambda", &cfg.lambda);
    put("cfl_safety", &cfg.cfl_safety);
    put("shut_in_oil_flow", &cfg.shut_in_oil_flow);
    put("snapshots_per_cycle", &cfg.snapshots_per_cycle);
    out
}
