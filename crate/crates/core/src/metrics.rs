//! Throughput, energy, and energy-efficiency accounting.
//!
//! Cooperative schemes are half-duplex: a group cycle spends separate time
//! slots on each source uplink and on the relay's forward transmissions, so
//! delivered information streams are diluted by the cycle length and every
//! transmitter's battery drain is weighted by its active-slot fraction.
//! Energy efficiency is delivered bits over battery-counted transmit power;
//! an unconstrained relay is excluded from the denominator.

use crate::error::{require_non_negative, require_positive, Result, SimError};
use crate::scheme::{GhBattery, Scheme};

/// Reporting threshold (bps) under which a source counts as in outage.
pub const DEFAULT_MIN_THROUGHPUT_BPS: f64 = 1.0e6;

/// Half-duplex slot accounting for one scheme cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeTiming {
    pub scheme: Scheme,
    /// Slots in one full cycle.
    pub slots: u32,
    /// Information streams delivered per cycle (one per source).
    pub streams: u32,
    /// Slots each source transmits in, per cycle.
    pub source_active_slots: u32,
    /// Slots the relay transmits in, per cycle (0 for DT).
    pub gh_active_slots: u32,
}

impl SchemeTiming {
    /// Default cycle structure: DT carries one stream in one slot; NC uses
    /// three slots (two source uplinks plus one combined forward) for two
    /// streams; FW needs four (two uplinks plus one forward each).
    pub fn defaults(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Dt => Self {
                scheme,
                slots: 1,
                streams: 1,
                source_active_slots: 1,
                gh_active_slots: 0,
            },
            Scheme::Nc => Self {
                scheme,
                slots: 3,
                streams: 2,
                source_active_slots: 1,
                gh_active_slots: 1,
            },
            Scheme::Fw => Self {
                scheme,
                slots: 4,
                streams: 2,
                source_active_slots: 1,
                gh_active_slots: 2,
            },
        }
    }

    /// Override the cycle structure (config knob); validated.
    pub fn with_counts(scheme: Scheme, slots: u32, streams: u32) -> Result<Self> {
        let base = Self::defaults(scheme);
        let t = Self {
            slots,
            streams,
            ..base
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.slots == 0 || self.streams == 0 {
            return Err(SimError::invalid(
                "scheme_timing",
                "slots and streams must be at least 1",
            ));
        }
        if self.streams > self.slots {
            return Err(SimError::invalid(
                "scheme_timing",
                "cannot deliver more streams than slots per cycle",
            ));
        }
        let used = self.n_sources() as u32 * self.source_active_slots + self.gh_active_slots;
        if used > self.slots {
            return Err(SimError::invalid(
                "scheme_timing",
                "active slots exceed the cycle length",
            ));
        }
        if self.scheme == Scheme::Dt && self.gh_active_slots != 0 {
            return Err(SimError::invalid(
                "scheme_timing",
                "DT has no relay transmissions",
            ));
        }
        Ok(())
    }

    pub fn n_sources(&self) -> usize {
        match self.scheme {
            Scheme::Dt => 1,
            _ => 2,
        }
    }

    /// Fraction of cycle time one source's stream effectively occupies:
    /// delivered streams split over the cycle and over the sources.
    pub fn per_source_stream_fraction(&self) -> f64 {
        self.streams as f64 / (self.slots as f64 * self.n_sources() as f64)
    }

    /// Fraction of slots a source transmitter is active.
    pub fn source_duty(&self) -> f64 {
        self.source_active_slots as f64 / self.slots as f64
    }

    /// Fraction of slots the relay transmitter is active.
    pub fn gh_duty(&self) -> f64 {
        self.gh_active_slots as f64 / self.slots as f64
    }
}

/// Shannon capacity `B log2(1 + sinr)` in bps.
pub fn shannon_capacity(sinr_linear: f64, bandwidth_hz: f64) -> Result<f64> {
    require_non_negative("sinr_linear", sinr_linear)?;
    require_positive("bandwidth_hz", bandwidth_hz)?;
    Ok(bandwidth_hz * (1.0 + sinr_linear).log2())
}

/// Delivered rate for one source under half-duplex accounting: the stream
/// rides the bottleneck link at the per-source stream fraction of the cycle.
pub fn ue_throughput(
    timing: &SchemeTiming,
    bottleneck_sinr_linear: f64,
    bandwidth_hz: f64,
) -> Result<f64> {
    timing.validate()?;
    Ok(timing.per_source_stream_fraction() * shannon_capacity(bottleneck_sinr_linear, bandwidth_hz)?)
}

/// Battery-counted time-averaged power (watts) of one cooperative group.
///
/// `source_powers_w` are the per-source transmit powers, `gh_power_w` the
/// relay's.  The relay is excluded when its battery is unconstrained.
/// `gh_energy_factor` scales the relay's charged energy (1.0 = always
/// charged; below 1.0 credits forward slots that carry nothing, e.g. after
/// an integrity-check failure).
pub fn group_battery_power(
    timing: &SchemeTiming,
    source_powers_w: &[f64],
    gh_power_w: f64,
    gh_battery: GhBattery,
    gh_energy_factor: f64,
) -> Result<f64> {
    timing.validate()?;
    if source_powers_w.len() != timing.n_sources() {
        return Err(SimError::invalid(
            "source_powers_w",
            "length must match the scheme's source count",
        ));
    }
    require_non_negative("gh_power_w", gh_power_w)?;
    if !(0.0..=1.0).contains(&gh_energy_factor) {
        return Err(SimError::invalid("gh_energy_factor", "must lie in [0, 1]"));
    }
    let mut total = 0.0;
    for &p in source_powers_w {
        require_non_negative("source power", p)?;
        total += p * timing.source_duty();
    }
    if timing.scheme != Scheme::Dt && gh_battery == GhBattery::Limited {
        total += gh_power_w * timing.gh_duty() * gh_energy_factor;
    }
    Ok(total)
}

/// Energy efficiency in Mbps/W; `None` when the battery power is zero.
pub fn energy_efficiency(throughput_bps: f64, battery_power_w: f64) -> Option<f64> {
    if battery_power_w <= 0.0 {
        return None;
    }
    Some(throughput_bps / 1.0e6 / battery_power_w)
}

/// Fraction of sources whose delivered rate falls below the threshold.
pub fn outage_fraction(throughputs_bps: &[f64], threshold_bps: f64) -> f64 {
    if throughputs_bps.is_empty() {
        return 0.0;
    }
    let below = throughputs_bps
        .iter()
        .filter(|&&t| t < threshold_bps)
        .count();
    below as f64 / throughputs_bps.len() as f64
}

/// Per-source evaluation record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UeMetrics {
    pub ber: f64,
    pub throughput_bps: f64,
    /// This source's own battery-counted power; the shared relay is
    /// accounted at group level only.
    pub battery_power_w: f64,
    pub ee_mbps_per_w: Option<f64>,
}

/// Sample statistics over drops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    /// 95% normal-approximation half-width: 1.96 std / sqrt(n).
    pub ci95: f64,
    pub n: usize,
}

impl Stats {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(SimError::invalid("samples", "need at least one sample"));
        }
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>()
                / (n as f64 - 1.0);
            var.sqrt()
        } else {
            0.0
        };
        let ci95 = 1.96 * std / (n as f64).sqrt();
        Ok(Self { mean, std, ci95, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{GhBattery, Scheme};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn capacity_reference_points() {
        assert_abs_diff_eq!(
            shannon_capacity(1.0, 10.0e6).unwrap(),
            10.0e6,
            epsilon = 1e-3
        );
        assert_eq!(shannon_capacity(0.0, 10.0e6).unwrap(), 0.0);
        assert_abs_diff_eq!(
            shannon_capacity(15.0, 10.0e6).unwrap(),
            40.0e6,
            epsilon = 1e-3
        );
        assert!(shannon_capacity(-0.1, 10.0e6).is_err());
    }

    #[test]
    fn throughput_includes_slot_overhead() {
        let b = 10.0e6;
        let dt = SchemeTiming::defaults(Scheme::Dt);
        let nc = SchemeTiming::defaults(Scheme::Nc);
        let fw = SchemeTiming::defaults(Scheme::Fw);
        assert_abs_diff_eq!(ue_throughput(&dt, 1.0, b).unwrap(), 10.0e6, epsilon = 1e-3);
        assert_relative_eq!(
            ue_throughput(&nc, 15.0, b).unwrap(),
            40.0e6 / 3.0,
            max_relative = 1e-12
        );
        assert_abs_diff_eq!(ue_throughput(&fw, 15.0, b).unwrap(), 10.0e6, epsilon = 1e-3);
        // Equal link quality: DT always delivers at least the cooperative
        // per-source rate (pure slot overhead).
        for sinr in [0.1, 1.0, 7.0, 100.0] {
            let d = ue_throughput(&dt, sinr, b).unwrap();
            assert!(d >= ue_throughput(&nc, sinr, b).unwrap());
            assert!(d >= ue_throughput(&fw, sinr, b).unwrap());
        }
    }

    #[test]
    fn timing_validation_rejects_bad_cycles() {
        assert!(SchemeTiming::with_counts(Scheme::Nc, 0, 2).is_err());
        assert!(SchemeTiming::with_counts(Scheme::Nc, 2, 3).is_err());
        // 2 sources * 1 + 1 relay slot = 3 > 2.
        assert!(SchemeTiming::with_counts(Scheme::Nc, 2, 2).is_err());
        let ok = SchemeTiming::with_counts(Scheme::Nc, 4, 2).unwrap();
        assert_eq!(ok.slots, 4);
        assert_abs_diff_eq!(ok.per_source_stream_fraction(), 0.25);
    }

    #[test]
    fn battery_power_exclusion_rule() {
        let nc = SchemeTiming::defaults(Scheme::Nc);
        let sources = [1.0e-3, 1.0e-3];
        let wi =
            group_battery_power(&nc, &sources, 0.25, GhBattery::Unconstrained, 1.0).unwrap();
        // Sources active one slot in three each.
        assert_relative_eq!(wi, 2.0e-3 / 3.0, max_relative = 1e-12);
        let wo = group_battery_power(&nc, &sources, 0.25, GhBattery::Limited, 1.0).unwrap();
        assert_relative_eq!(wo, 2.0e-3 / 3.0 + 0.25 / 3.0, max_relative = 1e-12);
        assert!(wo > wi);
        // Refund factor scales only the relay term.
        let half = group_battery_power(&nc, &sources, 0.25, GhBattery::Limited, 0.5).unwrap();
        assert_relative_eq!(half, 2.0e-3 / 3.0 + 0.125 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn fw_relay_duty_is_double() {
        let fw = SchemeTiming::defaults(Scheme::Fw);
        assert_abs_diff_eq!(fw.source_duty(), 0.25);
        assert_abs_diff_eq!(fw.gh_duty(), 0.5);
        let wo = group_battery_power(&fw, &[0.0, 0.0], 0.1, GhBattery::Limited, 1.0).unwrap();
        assert_relative_eq!(wo, 0.05, max_relative = 1e-12);
    }

    #[test]
    fn efficiency_ratio_and_homogeneity() {
        // 10 Mbps on 1 mW battery power.
        assert_abs_diff_eq!(
            energy_efficiency(10.0e6, 1.0e-3).unwrap(),
            10_000.0,
            epsilon = 1e-9
        );
        assert_eq!(energy_efficiency(10.0e6, 0.0), None);
        // Scaling powers by k scales EE by 1/k.
        let base = energy_efficiency(5.0e6, 2.0e-3).unwrap();
        let scaled = energy_efficiency(5.0e6, 2.0e-2).unwrap();
        assert_relative_eq!(scaled, base / 10.0, max_relative = 1e-12);
    }

    #[test]
    fn wi_group_ee_dominates_wo() {
        let nc = SchemeTiming::defaults(Scheme::Nc);
        let tput = 20.0e6;
        let sources = [2.0e-3, 3.0e-3];
        let wi =
            group_battery_power(&nc, &sources, 0.25, GhBattery::Unconstrained, 1.0).unwrap();
        let wo = group_battery_power(&nc, &sources, 0.25, GhBattery::Limited, 1.0).unwrap();
        let ee_wi = energy_efficiency(tput, wi).unwrap();
        let ee_wo = energy_efficiency(tput, wo).unwrap();
        assert!(ee_wi > ee_wo);
    }

    #[test]
    fn outage_counts_below_threshold() {
        let t = [0.5e6, 1.0e6, 2.0e6, 0.2e6];
        assert_abs_diff_eq!(outage_fraction(&t, 1.0e6), 0.5);
        assert_eq!(outage_fraction(&[], 1.0e6), 0.0);
    }

    #[test]
    fn stats_match_hand_computation() {
        let one = Stats::from_samples(&[3.25]).unwrap();
        assert_eq!(one.mean, 3.25);
        assert_eq!(one.std, 0.0);
        assert_eq!(one.ci95, 0.0);
        let two = Stats::from_samples(&[2.0, 2.0]).unwrap();
        assert_eq!(two.std, 0.0);
        // {1,2,3,4}: mean 2.5, sample variance 5/3.
        let s = Stats::from_samples(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(s.mean, 2.5);
        assert_relative_eq!(s.std, (5.0f64 / 3.0).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(s.ci95, 1.96 * s.std / 2.0, max_relative = 1e-12);
        assert!(Stats::from_samples(&[]).is_err());
    }
}
