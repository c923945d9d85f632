//! Symbol-level Monte-Carlo reference estimators.
//!
//! Every closed-form probability in [`crate::phy`] has a brute-force
//! counterpart here, used by the test suites as the ground truth.  Trials
//! are split into fixed-size chunks, each driven by its own deterministic
//! substream, and chunk success counts are merged as exact integer sums, so
//! an estimate depends only on `(trials, seed)` — never on thread count,
//! scheduling order, or the work-unit size.

use crate::error::{require_in_range, Result, SimError};
use crate::phy::{NoiseTriple, NC_POINTS};
use crate::rng;
use crate::scheme::CrcMode;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Trials per RNG substream; fixed so that estimates are reproducible
/// independently of parallelism.
const CHUNK: u64 = 8192;

const TAG_DETECTION: u64 = 0xDE7E_C700;
const TAG_NC_E2E: u64 = 0x0E2E_0001;
const TAG_NC_CASE: u64 = 0x0E2E_0002;
const TAG_FW_E2E: u64 = 0xF0F0_0003;

/// Monte-Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Scheduling hint only; estimates never depend on it.
    pub batch_size: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 0x5EED_CAFE_F00D_D1CE,
            batch_size: 65_536,
        }
    }
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        let cfg = Self {
            trials,
            seed,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(SimError::invalid("trials", "must be at least 1"));
        }
        if self.batch_size < 1 {
            return Err(SimError::invalid("batch_size", "must be at least 1"));
        }
        Ok(())
    }
}

/// A binomial proportion estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    pub fn from_successes(successes: u64, trials: u64) -> Self {
        debug_assert!(successes <= trials && trials > 0);
        let p = successes as f64 / trials as f64;
        Self {
            mean: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
        }
    }
}

/// Runs `cfg.trials` Bernoulli trials in deterministic chunks and counts
/// positives.  `op_tag` isolates the substream family of each estimator so
/// different estimators sharing one seed do not replay each other's draws.
fn count_positives<F>(cfg: &McConfig, op_tag: u64, trial: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha12Rng) -> bool + Sync,
{
    cfg.validate()?;
    let base = rng::derive_seed(cfg.seed, op_tag);
    let n_chunks = cfg.trials.div_ceil(CHUNK);
    let total: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::stream(base, c);
            let lo = c * CHUNK;
            let count = CHUNK.min(cfg.trials - lo);
            let mut hits = 0u64;
            for _ in 0..count {
                if trial(&mut r) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(McEstimate::from_successes(total, cfg.trials))
}

/// Index of the nearest signal-set point to `y` under the unweighted
/// Euclidean metric.  All points share the same norm, so nearest equals the
/// largest inner product; ties resolve to the lowest index.
#[inline]
pub fn nearest_point(y: &[f64; 3]) -> usize {
    let dots = [
        y[0] + y[1] + y[2],
        y[0] - y[1] - y[2],
        -y[0] + y[1] - y[2],
        -y[0] - y[1] + y[2],
    ];
    let mut best = 0;
    for (k, &d) in dots.iter().enumerate().skip(1) {
        if d > dots[best] {
            best = k;
        }
    }
    best
}

#[inline]
fn noisy_observation<R: Rng + ?Sized>(r: &mut R, mean: &[f64; 3], nt: &NoiseTriple) -> [f64; 3] {
    // Coordinate draw order is fixed (1, 2, 3) for reproducibility.
    let z1: f64 = r.sample(StandardNormal);
    let z2: f64 = r.sample(StandardNormal);
    let z3: f64 = r.sample(StandardNormal);
    [
        mean[0] + nt.sigma[0] * z1,
        mean[1] + nt.sigma[1] * z2,
        mean[2] + nt.sigma[2] * z3,
    ]
}

/// Estimates the probability that the nearest-point detector lands on a
/// point with first coordinate +1, for a received mean in {-1,+1}^3.
///
/// This is the Monte-Carlo counterpart of
/// [`crate::phy::detection_event_probs`]' union probability.
pub fn mc_nc_detection(mean: &[f64; 3], nt: &NoiseTriple, cfg: &McConfig) -> Result<McEstimate> {
    for &m in mean {
        if m != 1.0 && m != -1.0 {
            return Err(SimError::invalid("mean", "coordinates must be +1 or -1"));
        }
    }
    count_positives(cfg, TAG_DETECTION, |r| {
        let y = noisy_observation(r, mean, nt);
        NC_POINTS[nearest_point(&y)][0] > 0.0
    })
}

#[inline]
fn symbol(bit: bool) -> f64 {
    if bit {
        -1.0
    } else {
        1.0
    }
}

#[inline]
fn nc_trial_is_error<R: Rng + ?Sized>(
    r: &mut R,
    e1: bool,
    e2: bool,
    pe_a1: f64,
    pe_a2: f64,
    nt: &NoiseTriple,
    crc: CrcMode,
) -> bool {
    let flip1 = r.random::<f64>() < pe_a1;
    let flip2 = r.random::<f64>() < pe_a2;
    if crc == CrcMode::On && (flip1 || flip2) {
        // Relay withholds the corrupted word; the bit never reaches the
        // base station and counts as an error.
        return true;
    }
    let g1 = e1 ^ flip1;
    let g2 = e2 ^ flip2;
    let mean = [symbol(e1), symbol(e2), symbol(g1 ^ g2)];
    let y = noisy_observation(r, &mean, nt);
    NC_POINTS[nearest_point(&y)][0] != symbol(e1)
}

/// End-to-end bit error rate of source 1 under the network-coded scheme:
/// random source bits, access-link flips, XOR at the relay, noisy
/// three-dimensional detection.  Counterpart of [`crate::phy::nc_ber`].
pub fn mc_nc_end_to_end(
    pe_a1: f64,
    pe_a2: f64,
    nt: &NoiseTriple,
    crc: CrcMode,
    cfg: &McConfig,
) -> Result<McEstimate> {
    require_in_range("pe_a1", pe_a1, 0.0, 0.5)?;
    require_in_range("pe_a2", pe_a2, 0.0, 0.5)?;
    count_positives(cfg, TAG_NC_E2E, |r| {
        let e1 = r.random::<bool>();
        let e2 = r.random::<bool>();
        nc_trial_is_error(r, e1, e2, pe_a1, pe_a2, nt, crc)
    })
}

/// Same as [`mc_nc_end_to_end`] but with the transmitted bit pair held
/// fixed; used to verify the four cases agree (symmetry of the signal set).
pub fn mc_nc_end_to_end_case(
    bits: (u8, u8),
    pe_a1: f64,
    pe_a2: f64,
    nt: &NoiseTriple,
    crc: CrcMode,
    cfg: &McConfig,
) -> Result<McEstimate> {
    require_in_range("pe_a1", pe_a1, 0.0, 0.5)?;
    require_in_range("pe_a2", pe_a2, 0.0, 0.5)?;
    let (e1, e2) = (bits.0 != 0, bits.1 != 0);
    count_positives(cfg, TAG_NC_CASE, |r| {
        nc_trial_is_error(r, e1, e2, pe_a1, pe_a2, nt, crc)
    })
}

/// End-to-end bit error rate of the two-hop forwarding scheme: BPSK access
/// hop, hard decision at the relay, BPSK fronthaul hop.  With CRC the relay
/// drops wrongly received bits (counted as errors).  Counterpart of
/// [`crate::phy::fw_ber`] composed with [`crate::phy::bpsk_ber`].
pub fn mc_fw_end_to_end(
    sigma_access: f64,
    sigma_fronthaul: f64,
    crc: CrcMode,
    cfg: &McConfig,
) -> Result<McEstimate> {
    for (name, s) in [
        ("sigma_access", sigma_access),
        ("sigma_fronthaul", sigma_fronthaul),
    ] {
        if !(s > 0.0 && s.is_finite()) {
            return Err(SimError::invalid(name, "must be positive and finite"));
        }
    }
    count_positives(cfg, TAG_FW_E2E, |r| {
        let e = r.random::<bool>();
        let s = symbol(e);
        let za: f64 = r.sample(StandardNormal);
        let relay_decision = if s + sigma_access * za >= 0.0 { 1.0 } else { -1.0 };
        if crc == CrcMode::On && relay_decision != s {
            return true;
        }
        let zf: f64 = r.sample(StandardNormal);
        let bs_decision = if relay_decision + sigma_fronthaul * zf >= 0.0 {
            1.0
        } else {
            -1.0
        };
        bs_decision != s
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy;
    use approx::assert_abs_diff_eq;

    fn nt111() -> NoiseTriple {
        NoiseTriple::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn estimate_formula() {
        let e = McEstimate::from_successes(250, 1000);
        assert_abs_diff_eq!(e.mean, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(
            e.std_error,
            (0.25f64 * 0.75 / 1000.0).sqrt(),
            epsilon = 1e-15
        );
        assert_eq!(e.trials, 1000);
    }

    #[test]
    fn detection_is_deterministic_and_batch_independent() {
        let nt = nt111();
        let a = McConfig {
            trials: 200_000,
            seed: 42,
            batch_size: 1000,
        };
        let b = McConfig {
            trials: 200_000,
            seed: 42,
            batch_size: 65_536,
        };
        let ea = mc_nc_detection(&[1.0, 1.0, 1.0], &nt, &a).unwrap();
        let eb = mc_nc_detection(&[1.0, 1.0, 1.0], &nt, &b).unwrap();
        assert_eq!(ea, eb);
        let c = McConfig { seed: 43, ..a };
        let ec = mc_nc_detection(&[1.0, 1.0, 1.0], &nt, &c).unwrap();
        assert_ne!(ea.mean, ec.mean);
    }

    #[test]
    fn noiseless_detection_is_certain() {
        let nt = NoiseTriple::new(1e-6, 1e-6, 1e-6).unwrap();
        let cfg = McConfig::new(10_000, 7).unwrap();
        let e = mc_nc_detection(&[1.0, 1.0, 1.0], &nt, &cfg).unwrap();
        assert_eq!(e.mean, 1.0);
    }

    #[test]
    fn detection_matches_analytic_at_unit_noise() {
        let nt = nt111();
        let cfg = McConfig::new(1_000_000, 2024).unwrap();
        let mc = mc_nc_detection(&[1.0, 1.0, 1.0], &nt, &cfg).unwrap();
        let analytic = phy::nc_correct_detection(&nt, phy::FronthaulSign::Correct).unwrap();
        assert!(
            (mc.mean - analytic).abs() <= 4.0 * mc.std_error,
            "mc {} vs analytic {} (se {})",
            mc.mean,
            analytic,
            mc.std_error
        );
    }

    #[test]
    fn flipped_mean_matches_analytic() {
        let nt = NoiseTriple::new(0.6, 1.1, 0.9).unwrap();
        let cfg = McConfig::new(1_000_000, 77).unwrap();
        let mc = mc_nc_detection(&[1.0, 1.0, -1.0], &nt, &cfg).unwrap();
        let analytic = phy::nc_correct_detection(&nt, phy::FronthaulSign::Flipped).unwrap();
        assert!((mc.mean - analytic).abs() <= 4.0 * mc.std_error);
    }

    #[test]
    fn e2e_perfect_links_never_err() {
        let nt = NoiseTriple::new(1e-6, 1e-6, 1e-6).unwrap();
        let cfg = McConfig::new(20_000, 5).unwrap();
        for crc in [CrcMode::Off, CrcMode::On] {
            let e = mc_nc_end_to_end(0.0, 0.0, &nt, crc, &cfg).unwrap();
            assert_eq!(e.mean, 0.0);
        }
    }

    #[test]
    fn e2e_matches_analytic_both_crc_modes() {
        let nt = nt111();
        let cfg = McConfig::new(400_000, 99).unwrap();
        for crc in [CrcMode::Off, CrcMode::On] {
            let mc = mc_nc_end_to_end(0.1, 0.1, &nt, crc, &cfg).unwrap();
            let analytic = phy::nc_ber(0.1, 0.1, &nt, crc).unwrap();
            assert!(
                (mc.mean - analytic).abs() <= 4.0 * mc.std_error,
                "{crc:?}: mc {} vs analytic {}",
                mc.mean,
                analytic
            );
        }
    }

    #[test]
    fn four_transmitted_cases_agree() {
        let nt = nt111();
        let cfg = McConfig::new(200_000, 321).unwrap();
        let cases: Vec<McEstimate> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&b| mc_nc_end_to_end_case(b, 0.1, 0.1, &nt, CrcMode::Off, &cfg).unwrap())
            .collect();
        for w in cases.windows(2) {
            let se = (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt();
            assert!(
                (w[0].mean - w[1].mean).abs() <= 4.0 * se,
                "case means {} vs {}",
                w[0].mean,
                w[1].mean
            );
        }
    }

    #[test]
    fn fw_matches_closed_form() {
        let cfg = McConfig::new(400_000, 11).unwrap();
        //

        // Unit noise on both hops, no CRC: 2q - 2q^2 with q = Q(1).
        let mc = mc_fw_end_to_end(1.0, 1.0, CrcMode::Off, &cfg).unwrap();
        assert!(
            (mc.mean - 0.266967).abs() <= 4.0 * mc.std_error,
            "mc {} vs 0.266967",
            mc.mean
        );
        let analytic = phy::fw_ber(phy::bpsk_ber(1.0), phy::bpsk_ber(1.0), CrcMode::Off);
        assert!((mc.mean - analytic).abs() <= 4.0 * mc.std_error);

        // Near-perfect access hop: estimate collapses to the fronthaul BER.
        let mc2 = mc_fw_end_to_end(1e-3, 1.3, CrcMode::Off, &cfg).unwrap();
        let expect = phy::bpsk_ber(1.3);
        assert!((mc2.mean - expect).abs() <= 4.0 * mc2.std_error);

        // CRC can only raise the error rate.
        let mc3 = mc_fw_end_to_end(1.0, 1.0, CrcMode::On, &cfg).unwrap();
        let se = (mc.std_error.powi(2) + mc3.std_error.powi(2)).sqrt();
        assert!(mc.mean <= mc3.mean + 3.0 * se);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let nt = nt111();
        assert!(McConfig::new(0, 1).is_err());
        let cfg = McConfig::new(100, 1).unwrap();
        assert!(mc_nc_end_to_end(0.7, 0.0, &nt, CrcMode::Off, &cfg).is_err());
        assert!(mc_fw_end_to_end(-1.0, 1.0, CrcMode::Off, &cfg).is_err());
    }
}
