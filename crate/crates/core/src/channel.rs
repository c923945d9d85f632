//! Propagation and receiver-noise modelling.
//!
//! Links are characterised by a distance-driven path loss, a per-(terminal,
//! site) log-normal shadowing term and, at base-station receivers, the sector
//! antenna pattern.  Everything downstream of detection works with a single
//! "equivalent noise" scale per link: the standard deviation of the
//! unit-energy symbol observation once the received signal power has been
//! normalised out.

use crate::deployment::{Point, SiteGrid};
use crate::error::{require_positive, Result, SimError};
use crate::units::db_to_linear;
use rand::Rng;
use rand_distr::StandardNormal;

/// Default path-loss intercept at 1 m (dB).
pub const DEFAULT_PL_INTERCEPT_DB: f64 = 34.5;
/// Default path-loss distance slope (dB per decade).
pub const DEFAULT_PL_SLOPE_DB: f64 = 38.0;
/// Default shadowing standard deviation (dB).
pub const DEFAULT_SHADOWING_STD_DB: f64 = 10.0;
/// Default receiver noise figure at a base station (dB).
pub const DEFAULT_NF_BS_DB: f64 = 5.0;
/// Default receiver noise figure at a handheld terminal (dB).
pub const DEFAULT_NF_UE_DB: f64 = 9.0;
/// Thermal noise power spectral density (dBm/Hz).
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

/// Distance-based path loss in dB with the default urban coefficients.
///
/// The model is floored at 1 m so that co-located terminals still see a
/// finite loss.
pub fn pathloss_db(distance_m: f64) -> f64 {
    pathloss_db_with(distance_m, DEFAULT_PL_INTERCEPT_DB, DEFAULT_PL_SLOPE_DB)
}

/// Distance-based path loss in dB with explicit coefficients.
pub fn pathloss_db_with(distance_m: f64, intercept_db: f64, slope_db: f64) -> f64 {
    intercept_db + slope_db * distance_m.max(1.0).log10()
}

/// Thermal noise power in watts for a receiver of the given bandwidth and
/// noise figure.
pub fn thermal_noise_power_w(bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    require_positive("bandwidth_hz", bandwidth_hz)?;
    let dbm = THERMAL_NOISE_DBM_PER_HZ + 10.0 * bandwidth_hz.log10() + noise_figure_db;
    Ok(crate::units::dbm_to_watts(dbm))
}

/// One log-normal shadowing draw in dB: `N(0, std_db^2)`.
pub fn draw_shadowing_db<R: Rng + ?Sized>(rng: &mut R, std_db: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    std_db * z
}

/// What kind of link a gain describes; determines whether the sector antenna
/// participates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    /// Terminal to base-station sector: antenna pattern applies.
    ToSector { sector: usize },
    /// Terminal to terminal: omnidirectional on both ends.
    TerminalToTerminal,
}

/// Composite linear power gain of one link.
///
/// `gain = 10^(-(PL - A + X)/10)` where `PL` is the path loss, `A` the sector
/// antenna gain (zero for terminal-terminal links) and `X` the shadowing
/// draw, all in dB.
pub fn link_gain_linear(pathloss_db: f64, antenna_gain_db: f64, shadowing_db: f64) -> f64 {
    db_to_linear(-(pathloss_db - antenna_gain_db + shadowing_db))
}

/// Convenience constructor for a terminal-to-sector gain.
pub fn sector_link_gain(
    grid: &SiteGrid,
    sector: usize,
    ue_pos: &Point,
    shadowing_db: f64,
    intercept_db: f64,
    slope_db: f64,
) -> f64 {
    let site_pos = grid.site_position_of_sector(sector);
    let dist = site_pos.distance(ue_pos);
    let pl = pathloss_db_with(dist, intercept_db, slope_db);
    let ant = grid.sector_gain_db(sector, ue_pos);
    link_gain_linear(pl, ant, shadowing_db)
}

/// Convenience constructor for a terminal-to-terminal gain.
pub fn terminal_link_gain(
    a: &Point,
    b: &Point,
    shadowing_db: f64,
    intercept_db: f64,
    slope_db: f64,
) -> f64 {
    let pl = pathloss_db_with(a.distance(b), intercept_db, slope_db);
    link_gain_linear(pl, 0.0, shadowing_db)
}

/// Total interference power at a receiver: sum of `p_i * g_i` over the
/// active interferers, with `g_i` the composite gain from interferer `i`
/// towards this receiver.
pub fn interference_power_w(contributions: &[(f64, f64)]) -> f64 {
    contributions.iter().map(|&(p, g)| p * g).sum()
}

/// Equivalent observation-noise standard deviation for a unit-energy symbol:
/// `sigma = sqrt((I + N) / (p * g))`.
///
/// `p * g` is the received signal power; `I + N` the total disturbance power
/// at the same receiver.
pub fn equivalent_noise_sigma(
    tx_power_w: f64,
    gain_linear: f64,
    noise_plus_interference_w: f64,
) -> Result<f64> {
    require_positive("tx_power_w", tx_power_w)?;
    require_positive("gain_linear", gain_linear)?;
    require_positive("noise_plus_interference_w", noise_plus_interference_w)?;
    let rx = tx_power_w * gain_linear;
    if !rx.is_finite() || rx <= 0.0 {
        return Err(SimError::numerical(
            "equivalent_noise_sigma",
            "received power is not positive and finite",
        ));
    }
    Ok((noise_plus_interference_w / rx).sqrt())
}

/// Signal-to-interference-plus-noise ratio implied by an equivalent noise
/// scale: `SINR = 1 / sigma^2`.
pub fn sinr_from_sigma(sigma: f64) -> f64 {
    1.0 / (sigma * sigma)
}
