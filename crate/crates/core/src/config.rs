//! Scenario configuration: defaults, a flat `key = value` file format, and
//! validation.
//!
//! The file format is deliberately minimal and diff-friendly: one
//! `snake_case_key = value` pair per line, `#` starts a comment (full-line
//! or trailing), lists are comma-separated.  Unknown keys and duplicate
//! keys are hard errors with line numbers, so a typo cannot silently fall
//! back to a default.

use crate::error::{Result, SimError};
use crate::metrics::SchemeTiming;
use crate::scheme::{expand_variants, CrcMode, GhBattery, Scheme, Variant};
use std::path::Path;

/// Full description of one simulation scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Inter-site distance of the 7-site hexagonal grid (m).
    pub isd_m: f64,
    /// Carrier frequency (GHz); documentation only — the propagation
    /// constants below already encode it.
    pub carrier_ghz: f64,
    /// System bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Transmit power box (W).
    pub p_max_w: f64,
    pub p_min_w: f64,
    /// Pairwise distance window for grouping (m).
    pub d_min_m: f64,
    pub d_max_m: f64,
    /// Open-loop power-control target (dBm) and pathloss compensation.
    pub p0_dbm: f64,
    pub pc_alpha: f64,
    /// Lognormal shadowing standard deviation (dB).
    pub shadowing_std_db: f64,
    /// Distance-dependent loss: intercept + slope*log10(d_m) (dB).
    pub pathloss_intercept_db: f64,
    pub pathloss_slope_db: f64,
    /// Horizontal antenna pattern parameters.
    pub theta_3db_deg: f64,
    pub a_m_db: f64,
    /// Receiver noise figures (dB).
    pub nf_bs_db: f64,
    pub nf_ue_db: f64,
    /// Outage reporting threshold (bps).
    pub min_throughput_bps: f64,
    /// UE density (per km^2).
    pub ue_density_per_km2: f64,
    /// Drops per scenario point.
    pub drops: u32,
    /// Master seed; every random quantity derives from it.
    pub seed: u64,
    /// Upper bound applied to each source's BER target.
    pub theta_e_ceiling: f64,
    /// Evaluated scheme set and cooperative flavors.
    pub schemes: Vec<Scheme>,
    pub crc_modes: Vec<CrcMode>,
    pub gh_battery_modes: Vec<GhBattery>,
    /// Half-duplex cycle overrides.
    pub nc_slots: u32,
    pub nc_streams: u32,
    pub fw_slots: u32,
    pub fw_streams: u32,
    /// Damped interference/power fixed-point iterations (0 = frozen
    /// interference field from power-controlled direct transmission).
    pub interference_iterations: u32,
    /// When true, relay slots that carry nothing after a failed integrity
    /// check are credited back to the battery.
    pub crc_energy_refund: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            isd_m: 500.0,
            carrier_ghz: 2.0,
            bandwidth_hz: 10.0e6,
            p_max_w: 0.25,
            p_min_w: 1.0e-7,
            d_min_m: 35.0,
            d_max_m: 100.0,
            p0_dbm: -110.0,
            pc_alpha: 1.0,
            shadowing_std_db: 10.0,
            pathloss_intercept_db: 34.5,
            pathloss_slope_db: 38.0,
            theta_3db_deg: 70.0,
            a_m_db: 20.0,
            nf_bs_db: 5.0,
            nf_ue_db: 9.0,
            min_throughput_bps: 1.0e6,
            ue_density_per_km2: 42.0,
            drops: 100,
            seed: 0x00C0_FFEE_5EED_0001,
            theta_e_ceiling: 0.01,
            schemes: vec![Scheme::Dt, Scheme::Fw, Scheme::Nc],
            crc_modes: vec![CrcMode::Off, CrcMode::On],
            gh_battery_modes: vec![GhBattery::Unconstrained, GhBattery::Limited],
            nc_slots: 3,
            nc_streams: 2,
            fw_slots: 4,
            fw_streams: 2,
            interference_iterations: 0,
            crc_energy_refund: false,
        }
    }
}

fn cfg_err(line: usize, msg: impl Into<String>) -> SimError {
    SimError::Config(format!("line {line}: {}", msg.into()))
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| cfg_err(line, format!("{key}: `{v}` is not a number")))
}

fn parse_u32(line: usize, key: &str, v: &str) -> Result<u32> {
    v.parse::<u32>()
        .map_err(|_| cfg_err(line, format!("{key}: `{v}` is not a non-negative integer")))
}

fn parse_u64(line: usize, key: &str, v: &str) -> Result<u64> {
    let t = v.trim();
    let parsed = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u64::from_str_radix(&hex.replace('_', ""), 16)
    } else {
        t.replace('_', "").parse::<u64>()
    };
    parsed.map_err(|_| cfg_err(line, format!("{key}: `{v}` is not a u64 (decimal or 0x hex)")))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(cfg_err(line, format!("{key}: `{v}` is not a boolean"))),
    }
}

fn parse_list<T>(line: usize, v: &str, mut item: impl FnMut(&str) -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for part in v.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(item(part).map_err(|e| cfg_err(line, e.to_string()))?);
    }
    Ok(out)
}

impl ScenarioConfig {
    /// Parse a config file's text; omitted keys keep their defaults.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(cfg_err(line_no, format!("expected `key = value`, got `{line}`")));
            };
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(cfg_err(line_no, format!("duplicate key `{key}`")));
            }
            seen.push(key.to_string());
            cfg.apply(line_no, key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load and parse a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    fn apply(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        match key {
            "isd_m" => self.isd_m = parse_f64(line, key, value)?,
            "carrier_ghz" => self.carrier_ghz = parse_f64(line, key, value)?,
            "bandwidth_hz" => self.bandwidth_hz = parse_f64(line, key, value)?,
            "p_max_w" => self.p_max_w = parse_f64(line, key, value)?,
            "p_min_w" => self.p_min_w = parse_f64(line, key, value)?,
            "d_min_m" => self.d_min_m = parse_f64(line, key, value)?,
            "d_max_m" => self.d_max_m = parse_f64(line, key, value)?,
            "p0_dbm" => self.p0_dbm = parse_f64(line, key, value)?,
            "pc_alpha" => self.pc_alpha = parse_f64(line, key, value)?,
            "shadowing_std_db" => self.shadowing_std_db = parse_f64(line, key, value)?,
            "pathloss_intercept_db" => {
                self.pathloss_intercept_db = parse_f64(line, key, value)?
            }
            "pathloss_slope_db" => self.pathloss_slope_db = parse_f64(line, key, value)?,
            "theta_3db_deg" => self.theta_3db_deg = parse_f64(line, key, value)?,
            "a_m_db" => self.a_m_db = parse_f64(line, key, value)?,
            "nf_bs_db" => self.nf_bs_db = parse_f64(line, key, value)?,
            "nf_ue_db" => self.nf_ue_db = parse_f64(line, key, value)?,
            "min_throughput_bps" => self.min_throughput_bps = parse_f64(line, key, value)?,
            "ue_density_per_km2" => self.ue_density_per_km2 = parse_f64(line, key, value)?,
            "drops" => self.drops = parse_u32(line, key, value)?,
            "seed" => self.seed = parse_u64(line, key, value)?,
            "theta_e_ceiling" => self.theta_e_ceiling = parse_f64(line, key, value)?,
            "schemes" => self.schemes = parse_list(line, value, Scheme::parse)?,
            "crc_modes" => self.crc_modes = parse_list(line, value, CrcMode::parse)?,
            "gh_battery_modes" => {
                self.gh_battery_modes = parse_list(line, value, GhBattery::parse)?
            }
            "nc_slots" => self.nc_slots = parse_u32(line, key, value)?,
            "nc_streams" => self.nc_streams = parse_u32(line, key, value)?,
            "fw_slots" => self.fw_slots = parse_u32(line, key, value)?,
            "fw_streams" => self.fw_streams = parse_u32(line, key, value)?,
            "interference_iterations" => {
                self.interference_iterations = parse_u32(line, key, value)?
            }
            "crc_energy_refund" => self.crc_energy_refund = parse_bool(line, key, value)?,
            _ => return Err(cfg_err(line, format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("isd_m", self.isd_m),
            ("carrier_ghz", self.carrier_ghz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("p_max_w", self.p_max_w),
            ("p_min_w", self.p_min_w),
            ("d_min_m", self.d_min_m),
            ("d_max_m", self.d_max_m),
            ("shadowing_std_db", self.shadowing_std_db),
            ("theta_3db_deg", self.theta_3db_deg),
            ("a_m_db", self.a_m_db),
            ("min_throughput_bps", self.min_throughput_bps),
            ("ue_density_per_km2", self.ue_density_per_km2),
            ("theta_e_ceiling", self.theta_e_ceiling),
        ];
        for (name, v) in positives {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SimError::invalid(name, "must be positive and finite"));
            }
        }
        if self.p_min_w >= self.p_max_w {
            return Err(SimError::invalid("p_min_w", "must be below p_max_w"));
        }
        if self.d_min_m >= self.d_max_m {
            return Err(SimError::invalid("d_min_m", "must be below d_max_m"));
        }
        if !(0.0..=1.0).contains(&self.pc_alpha) {
            return Err(SimError::invalid("pc_alpha", "must lie in [0, 1]"));
        }
        if self.theta_e_ceiling > 0.5 {
            return Err(SimError::invalid("theta_e_ceiling", "must not exceed 0.5"));
        }
        if self.drops == 0 {
            return Err(SimError::invalid("drops", "must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(SimError::invalid("schemes", "must not be empty"));
        }
        let any_coop = self.schemes.iter().any(|s| *s != Scheme::Dt);
        if any_coop && (self.crc_modes.is_empty() || self.gh_battery_modes.is_empty()) {
            return Err(SimError::invalid(
                "crc_modes/gh_battery_modes",
                "must not be empty when cooperative schemes are enabled",
            ));
        }
        if self.interference_iterations > 10 {
            return Err(SimError::invalid(
                "interference_iterations",
                "at most 10 damped iterations supported",
            ));
        }
        // Timing overrides must describe valid cycles.
        SchemeTiming::with_counts(Scheme::Nc, self.nc_slots, self.nc_streams)?;
        SchemeTiming::with_counts(Scheme::Fw, self.fw_slots, self.fw_streams)?;
        Ok(())
    }

    /// All scheme variants this config evaluates, in deterministic order.
    pub fn variants(&self) -> Vec<Variant> {
        expand_variants(&self.schemes, &self.crc_modes, &self.gh_battery_modes)
    }

    /// Slot accounting for a scheme, with config overrides applied.
    pub fn timing_for(&self, scheme: Scheme) -> SchemeTiming {
        match scheme {
            Scheme::Dt => SchemeTiming::defaults(Scheme::Dt),
            Scheme::Nc => SchemeTiming::with_counts(Scheme::Nc, self.nc_slots, self.nc_streams)
                .expect("validated at load time"),
            Scheme::Fw => SchemeTiming::with_counts(Scheme::Fw, self.fw_slots, self.fw_streams)
                .expect("validated at load time"),
        }
    }
}
