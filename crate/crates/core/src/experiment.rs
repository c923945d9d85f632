//! Drop orchestration: realizes geometry and channels once per drop,
//! evaluates every configured scheme variant on that shared realization,
//! aggregates over drops, and sweeps deployment densities.
//!
//! The evaluation is two-phase.  Phase 1 computes a frozen interference
//! field: one active transmitter per sector, drawn uniformly, radiating at
//! its open-loop power-controlled level.  Phase 2 solves each cooperative
//! group's power minimization against that field.  An optional damped
//! fixed-point refresh (`interference_iterations`) feeds optimized powers
//! back into the field.
//!
//! Metrics come only from receivers attached to the center site; the outer
//! ring exists to generate realistic interference.

use crate::channel::{
    equivalent_noise_sigma, sector_link_gain, sinr_from_sigma, terminal_link_gain,
    thermal_noise_power_w, draw_shadowing_db,
};
use crate::config::ScenarioConfig;
use crate::deployment::{
    build_hex_grid, form_groups, isd_for_bs_density, place_ues, select_gh, MscGroup, SiteGrid,
    UeDrop, NUM_SECTORS,
};
use crate::error::{Result, SimError};
use crate::metrics::{
    energy_efficiency, ue_throughput, SchemeTiming, Stats,
};
use crate::phy;
use crate::power::{self, dt_power_control, GroupLinks, OptProblem, PowerAllocation};
use crate::rng;
use crate::scheme::{CrcMode, GhBattery, Scheme, Variant};
use crate::units::linear_to_db;
use rayon::prelude::*;

/// Stream salts for the per-drop random quantities, drawn in fixed order.
const TAG_SITE_SHADOW: u64 = 0x5AD0_0001;
const TAG_INTERFERER: u64 = 0x5AD0_0002;
const TAG_ACCESS_SHADOW: u64 = 0x5AD0_0003;

/// Site index whose sectors define the measurement region.
const CENTER_SITE: usize = 0;

/// Everything random about one drop, realized once and shared by every
/// scheme variant so that differences are purely scheme-driven.
#[derive(Debug, Clone)]
pub struct DropRealization {
    pub grid: SiteGrid,
    pub ue: UeDrop,
    /// `[ue][sector]` linear link gain (pathloss, antenna, shadowing).
    pub gain: Vec<Vec<f64>>,
    /// Best sector per UE (its serving/direct sector) and the gain to it.
    pub serving_sector: Vec<usize>,
    pub best_gain: Vec<f64>,
    /// Open-loop power-controlled transmit power per UE.
    pub dt_power_w: Vec<f64>,
    pub groups: Vec<MscGroup>,
    /// Group index a UE belongs to, if any.
    pub group_of_ue: Vec<Option<usize>>,
    /// Active transmitter per sector (phase-1 interference field).
    pub interferer: Vec<Option<usize>>,
    /// Per-group source-to-relay access gains.
    pub access_gain: Vec<[f64; 2]>,
    /// Per-group out-of-group interferers audible at the relay:
    /// `(ue, linear gain to the relay)`.
    pub gh_int_gain: Vec<Vec<(usize, f64)>>,
    pub thermal_bs_w: f64,
    pub thermal_ue_w: f64,
}

/// Receiver-side disturbance powers for one interferer power assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceField {
    /// Noise-plus-interference at each sector receiver (W).
    pub npi_bs_w: Vec<f64>,
    /// Noise-plus-interference at each group's relay receiver (W).
    pub npi_gh_w: Vec<f64>,
}

impl DropRealization {
    /// Builds the realization for `(config, sweep point, drop index)`.
    /// Random draws happen in a fixed order so the result is a pure
    /// function of the seeds.
    pub fn build(cfg: &ScenarioConfig, point_index: u64, drop_index: u64) -> Result<Self> {
        let grid = build_hex_grid(cfg.isd_m)?.with_antenna(cfg.theta_3db_deg, cfg.a_m_db)?;
        let drop_seed = rng::drop_seed(cfg.seed, point_index, drop_index);
        let ue = place_ues(cfg.ue_density_per_km2, &grid, drop_seed)?;
        let n = ue.len();
        let n_sites = grid.sites.len();

        // Site shadowing, shared by a site's three sectors; UE-major order.
        let mut shadow_rng = rng::stream(drop_seed, TAG_SITE_SHADOW);
        let shadow_site: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..n_sites)
                    .map(|_| draw_shadowing_db(&mut shadow_rng, cfg.shadowing_std_db))
                    .collect()
            })
            .collect();

        let mut gain = vec![vec![0.0; NUM_SECTORS]; n];
        let mut serving_sector = vec![0usize; n];
        let mut best_gain = vec![0.0f64; n];
        for u in 0..n {
            for s in 0..NUM_SECTORS {
                gain[u][s] = sector_link_gain(
                    &grid,
                    s,
                    &ue.positions[u],
                    shadow_site[u][grid.site_of_sector(s)],
                    cfg.pathloss_intercept_db,
                    cfg.pathloss_slope_db,
                );
                if s == 0 || gain[u][s] > best_gain[u] {
                    best_gain[u] = gain[u][s];
                    serving_sector[u] = s;
                }
            }
        }

        // Open-loop fractional power control against the effective link
        // loss (pathloss + antenna + shadowing) to the serving sector.
        let dt_power_w: Vec<f64> = (0..n)
            .map(|u| {
                let pl_eff_db = -linear_to_db(best_gain[u]);
                dt_power_control(pl_eff_db, cfg.p0_dbm, cfg.pc_alpha, cfg.p_min_w, cfg.p_max_w)
            })
            .collect();

        // Cooperative triples, relay = member with the best direct link.
        let triples = form_groups(&ue, cfg.d_min_m, cfg.d_max_m);
        let mut groups = Vec::with_capacity(triples.len());
        let mut group_of_ue = vec![None; n];
        for t in &triples {
            let gh = select_gh(t, &best_gain);
            let mut sources = [0usize; 2];
            let mut k = 0;
            for &m in t {
                if m != gh {
                    sources[k] = m;
                    k += 1;
                }
            }
            let g = MscGroup {
                sources,
                gh,
                serving_sector: serving_sector[gh],
            };
            for &m in t {
                group_of_ue[m] = Some(groups.len());
            }
            groups.push(g);
        }

        // One active transmitter per sector, uniform among its UEs.
        let mut int_rng = rng::stream(drop_seed, TAG_INTERFERER);
        let mut interferer = vec![None; NUM_SECTORS];
        for (s, slot) in interferer.iter_mut().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&u| serving_sector[u] == s).collect();
            if !members.is_empty() {
                use rand::Rng;
                *slot = Some(members[int_rng.random_range(0..members.len())]);
            }
        }

        // Access-link shadowing, drawn in need order: per group, first the
        // two source-to-relay links, then audible interferers by sector.
        let mut access_rng = rng::stream(drop_seed, TAG_ACCESS_SHADOW);
        let mut access_gain = Vec::with_capacity(groups.len());
        let mut gh_int_gain = Vec::with_capacity(groups.len());
        for g in &groups {
            let gh_pos = &ue.positions[g.gh];
            let mut ag = [0.0; 2];
            for (k, &src) in g.sources.iter().enumerate() {
                let sh = draw_shadowing_db(&mut access_rng, cfg.shadowing_std_db);
                ag[k] = terminal_link_gain(
                    &ue.positions[src],
                    gh_pos,
                    sh,
                    cfg.pathloss_intercept_db,
                    cfg.pathloss_slope_db,
                );
            }
            access_gain.push(ag);
            let mut audible = Vec::new();
            for (s, slot) in interferer.iter().enumerate() {
                if s == g.serving_sector {
                    continue;
                }
                if let Some(i) = *slot {
                    if g.contains(i) {
                        continue;
                    }
                    let sh = draw_shadowing_db(&mut access_rng, cfg.shadowing_std_db);
                    let gl = terminal_link_gain(
                        &ue.positions[i],
                        gh_pos,
                        sh,
                        cfg.pathloss_intercept_db,
                        cfg.pathloss_slope_db,
                    );
                    audible.push((i, gl));
                }
            }
            gh_int_gain.push(audible);
        }

        Ok(Self {
            grid,
            ue,
            gain,
            serving_sector,
            best_gain,
            dt_power_w,
            groups,
            group_of_ue,
            interferer,
            access_gain,
            gh_int_gain,
            thermal_bs_w: thermal_noise_power_w(cfg.bandwidth_hz, cfg.nf_bs_db)?,
            thermal_ue_w: thermal_noise_power_w(cfg.bandwidth_hz, cfg.nf_ue_db)?,
        })
    }

    /// Disturbance powers when each interferer `i` radiates `p_int[i]` W.
    /// A receiver attached to sector `s` hears the interferers of every
    /// sector except `s` (its own uplink resource carries the wanted
    /// signal); a relay additionally never hears its own group.
    pub fn field_for(&self, p_int: &[f64]) -> InterferenceField {
        let mut npi_bs_w = vec![self.thermal_bs_w; NUM_SECTORS];
        for (t, slot) in self.interferer.iter().enumerate() {
            if let Some(i) = *slot {
                for (s, npi) in npi_bs_w.iter_mut().enumerate() {
                    if s != t {
                        *npi += p_int[i] * self.gain[i][s];
                    }
                }
            }
        }
        let npi_gh_w = self
            .gh_int_gain
            .iter()
            .map(|audible| {
                self.thermal_ue_w
                    + audible
                        .iter()
                        .map(|&(i, gl)| p_int[i] * gl)
                        .sum::<f64>()
            })
            .collect();
        InterferenceField { npi_bs_w, npi_gh_w }
    }

    /// Phase-1 field: every interferer at its power-controlled level.
    pub fn phase1_field(&self) -> InterferenceField {
        self.field_for(&self.dt_power_w)
    }

    pub fn is_measured_sector(&self, sector: usize) -> bool {
        self.grid.site_of_sector(sector) == CENTER_SITE
    }

    fn measured_ue(&self, ue: usize) -> bool {
        self.is_measured_sector(self.serving_sector[ue])
    }

    /// Equivalent direct-link noise deviation for a UE at its
    /// power-controlled level against the given field.
    fn dt_sigma(&self, ue: usize, field: &InterferenceField) -> Result<f64> {
        equivalent_noise_sigma(
            self.dt_power_w[ue],
            self.best_gain[ue],
            field.npi_bs_w[self.serving_sector[ue]],
        )
    }

    /// Per-source BER target: its own direct-transmission BER, capped.
    fn theta_for(&self, ue: usize, phase1: &InterferenceField, ceiling: f64) -> Result<f64> {
        let ber = phy::dt_ber(self.dt_sigma(ue, phase1)?);
        Ok(ber.min(ceiling))
    }

    fn group_problem(
        &self,
        g: usize,
        variant: &Variant,
        field: &InterferenceField,
        phase1: &InterferenceField,
        cfg: &ScenarioConfig,
    ) -> Result<OptProblem> {
        let grp = &self.groups[g];
        let sg = grp.serving_sector;
        let links = GroupLinks {
            access_gain: self.access_gain[g],
            direct_gain: [
                self.gain[grp.sources[0]][sg],
                self.gain[grp.sources[1]][sg],
            ],
            fronthaul_gain: self.gain[grp.gh][sg],
            npi_gh_w: field.npi_gh_w[g],
            npi_bs_w: field.npi_bs_w[sg],
        };
        let theta = [
            self.theta_for(grp.sources[0], phase1, cfg.theta_e_ceiling)?,
            self.theta_for(grp.sources[1], phase1, cfg.theta_e_ceiling)?,
        ];
        OptProblem::relay(
            variant.scheme,
            variant.crc.unwrap_or(CrcMode::Off),
            variant.gh_battery.unwrap_or(GhBattery::Unconstrained),
            links,
            theta,
            cfg.p_min_w,
            cfg.p_max_w,
        )
    }
}

/// Per-variant accounting for one drop: sums over the measured region.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DropEval {
    /// All measured traffic (cooperative sources plus DT carriers).
    pub tput_bps: f64,
    pub battery_w: f64,
    pub n_traffic: usize,
    pub n_outage: usize,
    /// Cooperative-only slice of the above.
    pub grouped_tput_bps: f64,
    pub grouped_battery_w: f64,
    pub n_grouped_sources: usize,
    pub n_grouped_outage: usize,
    /// Groups with at least one member in the measured population.
    pub n_groups_measured: usize,
    pub n_groups_feasible: usize,
}

impl DropEval {
    /// Drop-level energy efficiency: delivered bits over battery power.
    pub fn ee_mbps_per_w(&self) -> Option<f64> {
        energy_efficiency(self.tput_bps, self.battery_w)
    }

    pub fn grouped_ee_mbps_per_w(&self) -> Option<f64> {
        energy_efficiency(self.grouped_tput_bps, self.grouped_battery_w)
    }

    pub fn mean_tput_mbps(&self) -> Option<f64> {
        if self.n_traffic == 0 {
            None
        } else {
            Some(self.tput_bps / 1.0e6 / self.n_traffic as f64)
        }
    }

    pub fn grouped_mean_tput_mbps(&self) -> Option<f64> {
        if self.n_grouped_sources == 0 {
            None
        } else {
            Some(self.grouped_tput_bps / 1.0e6 / self.n_grouped_sources as f64)
        }
    }
}

fn dt_contribution(
    real: &DropRealization,
    ue: usize,
    field: &InterferenceField,
    cfg: &ScenarioConfig,
    out: &mut DropEval,
) -> Result<()> {
    let sigma = real.dt_sigma(ue, field)?;
    let sinr = sinr_from_sigma(sigma);
    let timing = SchemeTiming::defaults(Scheme::Dt);
    let tput = ue_throughput(&timing, sinr, cfg.bandwidth_hz)?;
    out.tput_bps += tput;
    out.battery_w += real.dt_power_w[ue];
    out.n_traffic += 1;
    if tput < cfg.min_throughput_bps {
        out.n_outage += 1;
    }
    Ok(())
}

/// Solved powers for one cooperative group under one variant.
struct GroupSolution {
    alloc: PowerAllocation,
}

fn solve_group(
    real: &DropRealization,
    g: usize,
    variant: &Variant,
    field: &InterferenceField,
    phase1: &InterferenceField,
    cfg: &ScenarioConfig,
) -> Result<GroupSolution> {
    let problem = real.group_problem(g, variant, field, phase1, cfg)?;
    let alloc = power::optimize_powers(&problem)?;
    Ok(GroupSolution { alloc })
}

/// Relay energy multiplier: slots that carry nothing after a failed
/// integrity check are credited back when the config enables the refund.
fn gh_energy_factor(
    real: &DropRealization,
    g: usize,
    variant: &Variant,
    sol: &GroupSolution,
    field: &InterferenceField,
    cfg: &ScenarioConfig,
) -> f64 {
    let crc = variant.crc.unwrap_or(CrcMode::Off);
    if crc != CrcMode::On || !cfg.crc_energy_refund {
        return 1.0;
    }
    let mut access_ber = [0.0; 2];
    for (k, ber) in access_ber.iter_mut().enumerate() {
        let sinr = sol.alloc.powers_w[k] * real.access_gain[g][k] / field.npi_gh_w[g];
        *ber = phy::bpsk_ber(1.0 / sinr.sqrt());
    }
    match variant.scheme {
        Scheme::Nc => (1.0 - access_ber[0]) * (1.0 - access_ber[1]),
        _ => 1.0 - 0.5 * (access_ber[0] + access_ber[1]),
    }
}

/// Credits one measured member of a feasible group: sources add their
/// stream's throughput and slot-weighted power, the relay adds overhead
/// energy (only when battery-counted) and no traffic of its own.
#[allow(clippy::too_many_arguments)]
fn add_member_contribution(
    real: &DropRealization,
    g: usize,
    ue: usize,
    variant: &Variant,
    sol: &GroupSolution,
    field: &InterferenceField,
    cfg: &ScenarioConfig,
    out: &mut DropEval,
) -> Result<()> {
    let grp = &real.groups[g];
    let sg = grp.serving_sector;
    let timing = cfg.timing_for(variant.scheme);
    let p = &sol.alloc.powers_w;
    if ue == grp.gh {
        if variant.gh_battery.unwrap_or(GhBattery::Unconstrained) == GhBattery::Limited {
            let share =
                p[2] * timing.gh_duty() * gh_energy_factor(real, g, variant, sol, field, cfg);
            out.battery_w += share;
            out.grouped_battery_w += share;
        }
        return Ok(());
    }
    let k = usize::from(grp.sources[0] != ue);
    let access_sinr = p[k] * real.access_gain[g][k] / field.npi_gh_w[g];
    let fh_sinr = p[2] * real.gain[grp.gh][sg] / field.npi_bs_w[sg];
    let tput = ue_throughput(&timing, access_sinr.min(fh_sinr), cfg.bandwidth_hz)?;
    out.tput_bps += tput;
    out.grouped_tput_bps += tput;
    out.n_traffic += 1;
    out.n_grouped_sources += 1;
    if tput < cfg.min_throughput_bps {
        out.n_outage += 1;
        out.n_grouped_outage += 1;
    }
    let share = p[k] * timing.source_duty();
    out.battery_w += share;
    out.grouped_battery_w += share;
    Ok(())
}

/// Damped fixed-point refresh of the interference field: re-solve every
/// group against the current field, feed the resulting per-UE powers back
/// into the interferer set (damping 0.5), stop when the largest relative
/// power change falls below 1%.
fn iterate_field(
    real: &DropRealization,
    variant: &Variant,
    cfg: &ScenarioConfig,
    phase1: &InterferenceField,
) -> Result<InterferenceField> {
    let mut p_int = real.dt_power_w.clone();
    for _ in 0..cfg.interference_iterations {
        let field = real.field_for(&p_int);
        let mut target = real.dt_power_w.clone();
        for g in 0..real.groups.len() {
            let sol = solve_group(real, g, variant, &field, phase1, cfg)?;
            if sol.alloc.feasible {
                let grp = &real.groups[g];
                target[grp.sources[0]] = sol.alloc.powers_w[0];
                target[grp.sources[1]] = sol.alloc.powers_w[1];
                target[grp.gh] = sol.alloc.powers_w[2];
            }
        }
        let mut max_rel = 0.0f64;
        for (cur, tgt) in p_int.iter_mut().zip(target.iter()) {
            let next = 0.5 * *cur + 0.5 * tgt;
            max_rel = max_rel.max((next - *cur).abs() / cur.max(1e-30));
            *cur = next;
        }
        if max_rel < 0.01 {
            break;
        }
    }
    Ok(real.field_for(&p_int))
}

/// Evaluates one scheme variant on a realized drop.
pub fn evaluate_variant(
    real: &DropRealization,
    variant: &Variant,
    cfg: &ScenarioConfig,
    phase1: &InterferenceField,
) -> Result<DropEval> {
    let field = if variant.is_cooperative() && cfg.interference_iterations > 0 {
        iterate_field(real, variant, cfg, phase1)?
    } else {
        phase1.clone()
    };
    let mut out = DropEval::default();
    // The measured population is the same for every variant: UEs served by
    // a center-site sector. Cooperative variants first solve each group
    // that touches that population, then every measured UE is credited by
    // its role; members of infeasible groups fall back to plain direct
    // transmission, so a drop with no feasible group reproduces the DT
    // figures exactly.
    let mut solutions: Vec<Option<GroupSolution>> = Vec::new();
    if variant.is_cooperative() {
        solutions.reserve(real.groups.len());
        for g in 0..real.groups.len() {
            let grp = &real.groups[g];
            if !grp.members().iter().any(|&m| real.measured_ue(m)) {
                solutions.push(None);
                continue;
            }
            let sol = solve_group(real, g, variant, &field, phase1, cfg)?;
            out.n_groups_measured += 1;
            if sol.alloc.feasible {
                out.n_groups_feasible += 1;
            }
            solutions.push(Some(sol));
        }
    }
    for u in 0..real.ue.len() {
        if !real.measured_ue(u) {
            continue;
        }
        let group = if variant.is_cooperative() {
            real.group_of_ue[u]
        } else {
            None
        };
        match group.and_then(|g| solutions[g].as_ref().map(|s| (g, s))) {
            Some((g, sol)) if sol.alloc.feasible => {
                add_member_contribution(real, g, u, variant, sol, &field, cfg, &mut out)?;
            }
            _ => dt_contribution(real, u, &field, cfg, &mut out)?,
        }
    }
    Ok(out)
}

/// Realizes one drop and evaluates every configured variant on it.
pub fn run_drop(
    cfg: &ScenarioConfig,
    point_index: u64,
    drop_index: u64,
) -> Result<Vec<(Variant, DropEval)>> {
    let tag = |e: SimError| {
        SimError::numerical(
            "run_drop",
            format!("drop {drop_index} (point {point_index}): {e}"),
        )
    };
    let real = DropRealization::build(cfg, point_index, drop_index).map_err(tag)?;
    let phase1 = real.phase1_field();
    let mut out = Vec::new();
    for variant in cfg.variants() {
        let eval = evaluate_variant(&real, &variant, cfg, &phase1).map_err(|e| {
            SimError::numerical(
                "run_drop",
                format!(
                    "drop {drop_index} (point {point_index}), variant {}: {e}",
                    variant.label()
                ),
            )
        })?;
        out.push((variant, eval));
    }
    Ok(out)
}

/// Aggregate of one variant over a scenario's drops.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantSummary {
    pub variant: Variant,
    /// Drop-level energy efficiency (Mbps/W), over drops with traffic.
    pub ee: Stats,
    /// Mean per-source throughput (Mbps), over drops with traffic.
    pub tput_mbps: Stats,
    /// Cooperative-only aggregates, when any group was measured.
    pub grouped_ee: Option<Stats>,
    pub grouped_tput_mbps: Option<Stats>,
    pub grouped_outage_frac: f64,
    /// Pooled fraction of measured sources below the rate threshold.
    pub outage_frac: f64,
    /// Drops that contributed samples.
    pub drops_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub summaries: Vec<VariantSummary>,
    pub drops: u32,
}

impl ScenarioResult {
    pub fn summary_for(&self, label: &str) -> Option<&VariantSummary> {
        self.summaries.iter().find(|s| s.variant.label() == label)
    }
}

/// Runs all drops of one scenario point and aggregates per variant.
pub fn run_scenario(cfg: &ScenarioConfig, point_index: u64) -> Result<ScenarioResult> {
    cfg.validate()?;
    let evals: Vec<Vec<(Variant, DropEval)>> = (0..cfg.drops as u64)
        .into_par_iter()
        .map(|d| run_drop(cfg, point_index, d))
        .collect::<Result<_>>()?;
    let variants = cfg.variants();
    let mut summaries = Vec::with_capacity(variants.len());
    for (vi, variant) in variants.iter().enumerate() {
        let mut ee_samples = Vec::new();
        let mut tput_samples = Vec::new();
        let mut grouped_ee_samples = Vec::new();
        let mut grouped_tput_samples = Vec::new();
        let mut outage = 0usize;
        let mut traffic = 0usize;
        let mut grouped_outage = 0usize;
        let mut grouped_sources = 0usize;
        for drop in &evals {
            let (_, e) = &drop[vi];
            if let (Some(ee), Some(t)) = (e.ee_mbps_per_w(), e.mean_tput_mbps()) {
                ee_samples.push(ee);
                tput_samples.push(t);
            }
            if let (Some(g), Some(t)) = (e.grouped_ee_mbps_per_w(), e.grouped_mean_tput_mbps()) {
                grouped_ee_samples.push(g);
                grouped_tput_samples.push(t);
            }
            outage += e.n_outage;
            traffic += e.n_traffic;
            grouped_outage += e.n_grouped_outage;
            grouped_sources += e.n_grouped_sources;
        }
        if ee_samples.is_empty() {
            return Err(SimError::numerical(
                "run_scenario",
                format!(
                    "variant {}: no drop produced measurable traffic",
                    variant.label()
                ),
            ));
        }
        summaries.push(VariantSummary {
            variant: *variant,
            ee: Stats::from_samples(&ee_samples)?,
            tput_mbps: Stats::from_samples(&tput_samples)?,
            grouped_ee: if grouped_ee_samples.is_empty() {
                None
            } else {
                Some(Stats::from_samples(&grouped_ee_samples)?)
            },
            grouped_tput_mbps: if grouped_tput_samples.is_empty() {
                None
            } else {
                Some(Stats::from_samples(&grouped_tput_samples)?)
            },
            grouped_outage_frac: if grouped_sources == 0 {
                0.0
            } else {
                grouped_outage as f64 / grouped_sources as f64
            },
            outage_frac: if traffic == 0 {
                0.0
            } else {
                outage as f64 / traffic as f64
            },
            drops_used: ee_samples.len(),
        });
    }
    Ok(ScenarioResult {
        summaries,
        drops: cfg.drops,
    })
}

/// Swept deployment variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    BsDensity,
    UeDensity,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::BsDensity => "bs_density",
            SweepVar::UeDensity => "ue_density",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bs_density" => Ok(SweepVar::BsDensity),
            "ue_density" => Ok(SweepVar::UeDensity),
            other => Err(SimError::Config(format!("unknown sweep variable `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    /// Strictly increasing positive sweep values (densities per km^2).
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(SimError::invalid("sweep values", "must not be empty"));
        }
        for w in self.values.windows(2) {
            if w[1] <= w[0] {
                return Err(SimError::invalid(
                    "sweep values",
                    "must be strictly increasing",
                ));
            }
        }
        if self.values[0] <= 0.0 {
            return Err(SimError::invalid("sweep values", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct SweepPoint {
    pub value: f64,
    /// Per-point failures are recorded here; the sweep continues.
    pub result: Result<ScenarioResult>,
}

#[derive(Debug)]
pub struct SweepResult {
    pub var: SweepVar,
    pub points: Vec<SweepPoint>,
}

/// Sweeps a deployment density. The BS-density sweep rescales the grid
/// (per-km^2 sector count -> inter-site distance); the UE-density sweep
/// repopulates the fixed grid.
pub fn run_sweep(cfg: &ScenarioConfig, spec: &SweepSpec) -> Result<SweepResult> {
    cfg.validate()?;
    spec.validate()?;
    let points = spec
        .values
        .iter()
        .enumerate()
        .map(|(pi, &value)| {
            let result = (|| {
                let mut point_cfg = cfg.clone();
                match spec.var {
                    SweepVar::BsDensity => point_cfg.isd_m = isd_for_bs_density(value)?,
                    SweepVar::UeDensity => point_cfg.ue_density_per_km2 = value,
                }
                run_scenario(&point_cfg, pi as u64)
            })();
            SweepPoint { value, result }
        })
        .collect();
    Ok(SweepResult {
        var: spec.var,
        points,
    })
}

/// Percentage gains of each variant over the direct-transmission baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct GainRow {
    pub variant: Variant,
    /// `100 * (metric / metric_DT - 1)`; `None` when the baseline is zero.
    pub ee_gain_pct: Option<f64>,
    pub tput_gain_pct: Option<f64>,
}

/// Runs the scenario and reports per-variant gains relative to DT.
pub fn compare_schemes(cfg: &ScenarioConfig) -> Result<(ScenarioResult, Vec<GainRow>)> {
    if !cfg.schemes.contains(&Scheme::Dt) {
        return Err(SimError::invalid(
            "schemes",
            "comparison requires the DT baseline",
        ));
    }
    let result = run_scenario(cfg, 0)?;
    let dt = result
        .summary_for("DT")
        .ok_or_else(|| SimError::numerical("compare_schemes", "missing DT summary"))?;
    let (dt_ee, dt_tput) = (dt.ee.mean, dt.tput_mbps.mean);
    let gain = |value: f64, base: f64| {
        if base == 0.0 {
            None
        } else {
            Some(100.0 * (value / base - 1.0))
        }
    };
    let rows = result
        .summaries
        .iter()
        .map(|s| GainRow {
            variant: s.variant,
            ee_gain_pct: gain(s.ee.mean, dt_ee),
            tput_gain_pct: gain(s.tput_mbps.mean, dt_tput),
        })
        .collect();
    Ok((result, rows))
}

/// One analytic-versus-Monte-Carlo agreement check.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    pub analytic: f64,
    pub mc_mean: f64,
    pub mc_std_error: f64,
}

impl OracleCheck {
    /// Deviation in standard-error units (infinite if SE is zero but the
    /// values differ).
    pub fn deviation_se(&self) -> f64 {
        let d = (self.analytic - self.mc_mean).abs();
        if self.mc_std_error > 0.0 {
            d / self.mc_std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Cross-checks the closed-form error models against their Monte-Carlo
/// oracles on a fixed case battery. Used by the CLI `validate` command.
pub fn validate_analytics(trials: u64, seed: u64) -> Result<Vec<OracleCheck>> {
    use crate::mc::{mc_fw_end_to_end, mc_nc_detection, mc_nc_end_to_end, McConfig};
    use crate::phy::{fw_ber, nc_ber, nc_correct_detection, FronthaulSign, NoiseTriple};

    let cfg = McConfig::new(trials, seed)?;
    let mut checks = Vec::new();

    let det_cases: [([f64; 3], FronthaulSign); 3] = [
        ([0.6, 0.6, 0.6], FronthaulSign::Correct),
        ([1.0, 1.5, 0.6], FronthaulSign::Flipped),
        ([2.5, 0.3, 1.0], FronthaulSign::Correct),
    ];
    for (s, sign) in det_cases {
        let nt = NoiseTriple::new(s[0], s[1], s[2])?;
        let analytic = nc_correct_detection(&nt, sign)?;
        let mean = [1.0, 1.0, sign.sign()];
        let est = mc_nc_detection(&mean, &nt, &cfg)?;
        checks.push(OracleCheck {
            name: format!("detection sigma=({},{},{}) {:?}", s[0], s[1], s[2], sign),
            analytic,
            mc_mean: est.mean,
            mc_std_error: est.std_error,
        });
    }

    let e2e_cases: [(f64, f64, [f64; 3], CrcMode); 3] = [
        (0.01, 0.01, [0.6, 0.6, 0.6], CrcMode::Off),
        (0.01, 0.01, [0.6, 0.6, 0.6], CrcMode::On),
        (0.1, 0.05, [1.0, 0.6, 1.5], CrcMode::Off),
    ];
    for (a1, a2, s, crc) in e2e_cases {
        let nt = NoiseTriple::new(s[0], s[1], s[2])?;
        let analytic = nc_ber(a1, a2, &nt, crc)?;
        let est = mc_nc_end_to_end(a1, a2, &nt, crc, &cfg)?;
        checks.push(OracleCheck {
            name: format!("nc end-to-end a=({a1},{a2}) {}", crc.as_str()),
            analytic,
            mc_mean: est.mean,
            mc_std_error: est.std_error,
        });
    }

    for crc in [CrcMode::Off, CrcMode::On] {
        let (sa, sf) = (1.0, 1.3);
        let analytic = fw_ber(phy::bpsk_ber(sa), phy::bpsk_ber(sf), crc);
        let est = mc_fw_end_to_end(sa, sf, crc, &cfg)?;
        checks.push(OracleCheck {
            name: format!("fw end-to-end sigma=({sa},{sf}) {}", crc.as_str()),
            analytic,
            mc_mean: est.mean,
            mc_std_error: est.std_error,
        });
    }

    Ok(checks)
}
