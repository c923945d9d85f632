//! Closed-form bit-error analysis for the three uplink schemes.
//!
//! Direct transmission uses plain BPSK over one link.  The forwarding scheme
//! chains two BPSK hops.  The network-coded scheme maps the two source bits
//! and their XOR onto a four-point signal set in three dimensions; the base
//! station receives the two direct observations plus the relayed parity and
//! picks the nearest valid point (unweighted Euclidean metric).
//!
//! The correct-detection probability is computed for an arbitrary received
//! mean vector `m` in {-1,+1}^3.  Writing the received vector as `y = m + n`
//! with independent zero-mean Gaussian noise `n_i` of standard deviation
//! `sigma_i`, the pairwise nearest-point comparisons reduce to half-spaces
//! that are linear in at most two noise coordinates, because any two valid
//! points differ in exactly two coordinates.  With
//! `c1=(1,1,1), c2=(1,-1,-1), c3=(-1,1,-1), c4=(-1,-1,1)` and `d_k` the
//! squared distance to `c_k`, the success event (nearest point has first
//! coordinate +1) is the union of
//!
//! * `A = {d1<=d3, d1<=d4} = {n2 >= -n1-(m1+m2)} ∩ {n3 >= -n1-(m1+m3)}`
//! * `B = {d2<=d3, d2<=d4} = {n2 <=  n1+(m1-m2)} ∩ {n3 <=  n1+(m1-m3)}`
//!
//! Conditioned on `n1`, the `n2` and `n3` constraints are independent, so
//! each probability is a one-dimensional integral of products of Gaussian
//! CDFs.  The three integrands (A, B, A∩B) are evaluated together on shared
//! quadrature panels; the A∩B integrand is built from the same CDF values
//! through expressions that are floating-point-monotone, which makes
//! `P(A∩B) <= min(P(A), P(B))` hold exactly, not just approximately.

use crate::error::{require_in_range, Result, SimError};
use crate::numeric::{integrate_adaptive, normal_cdf, normal_pdf};
use crate::scheme::CrcMode;

/// Default absolute tolerance for the detection-probability quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// The four valid points of the coded signal set, in bit order:
/// index `2*e1 + e2` holds the point for source bits `(e1, e2)`.
pub const NC_POINTS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Signal-set point for a pair of source bits: `s_i = 1 - 2 e_i` on the
/// direct coordinates and `1 - 2 (e1 XOR e2)` on the parity coordinate.
pub fn point_for_bits(e1: u8, e2: u8) -> [f64; 3] {
    debug_assert!(e1 <= 1 && e2 <= 1);
    [
        1.0 - 2.0 * f64::from(e1),
        1.0 - 2.0 * f64::from(e2),
        1.0 - 2.0 * f64::from(e1 ^ e2),
    ]
}

/// Index of the signal-set point for a pair of source bits.
pub fn point_index_for_bits(e1: u8, e2: u8) -> usize {
    debug_assert!(e1 <= 1 && e2 <= 1);
    usize::from(2 * e1 + e2)
}

/// The three equivalent noise standard deviations seen by the base-station
/// detector: direct link of source 1, direct link of source 2, fronthaul.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseTriple {
    pub sigma: [f64; 3],
}

impl NoiseTriple {
    pub fn new(sigma1: f64, sigma2: f64, sigma3: f64) -> Result<Self> {
        for (name, s) in [("sigma1", sigma1), ("sigma2", sigma2), ("sigma3", sigma3)] {
            if !(s > 0.0 && s.is_finite()) {
                return Err(SimError::invalid(
                    name,
                    format!("noise scale must be positive and finite, got {s}"),
                ));
            }
        }
        Ok(Self {
            sigma: [sigma1, sigma2, sigma3],
        })
    }

    /// The same triple viewed from the second source's perspective: the two
    /// direct-link scales swap, the fronthaul stays.
    pub fn swapped(&self) -> Self {
        Self {
            sigma: [self.sigma[1], self.sigma[0], self.sigma[2]],
        }
    }

    pub fn max_sigma(&self) -> f64 {
        self.sigma.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Access- and fronthaul-link bit error probabilities for one group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerTriple {
    pub access1: f64,
    pub access2: f64,
    pub fronthaul: f64,
}

impl BerTriple {
    pub fn new(access1: f64, access2: f64, fronthaul: f64) -> Result<Self> {
        require_in_range("access1", access1, 0.0, 0.5)?;
        require_in_range("access2", access2, 0.0, 0.5)?;
        require_in_range("fronthaul", fronthaul, 0.0, 0.5)?;
        Ok(Self {
            access1,
            access2,
            fronthaul,
        })
    }
}

/// BPSK bit error probability for a unit-energy symbol observed with
/// Gaussian noise of standard deviation `sigma`:
/// `0.5 * erfc(1 / (sqrt(2) * sigma))`.
pub fn bpsk_ber(sigma: f64) -> f64 {
    debug_assert!(sigma > 0.0);
    crate::numeric::normal_sf(1.0 / sigma)
}

/// Direct-transmission bit error probability; identical to [`bpsk_ber`] on
/// the direct link.
pub fn dt_ber(sigma_direct: f64) -> f64 {
    bpsk_ber(sigma_direct)
}

/// Probabilities of the two success events of the nearest-point detector and
/// of their intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventProbs {
    pub p_a: f64,
    pub p_b: f64,
    pub p_ab: f64,
}

impl EventProbs {
    /// Probability of correct detection of the first source bit:
    /// `P(A ∪ B) = P(A) + P(B) - P(A ∩ B)`.
    pub fn p_correct(&self) -> f64 {
        (self.p_a + self.p_b - self.p_ab).clamp(0.0, 1.0)
    }
}

fn validate_mean(mean: &[f64; 3]) -> Result<()> {
    for (i, &m) in mean.iter().enumerate() {
        if m != 1.0 && m != -1.0 {
            return Err(SimError::invalid(
                "mean",
                format!("coordinate {i} must be +1 or -1, got {m}"),
            ));
        }
    }
    Ok(())
}

/// Event probabilities of the nearest-point detector for an arbitrary
/// received mean vector in {-1,+1}^3.
///
/// Success is defined as the detector choosing a point with first
/// coordinate +1, i.e. recovering bit `e1 = 0`; by the sign symmetry of the
/// signal set this covers every transmitted case after relabeling.
pub fn detection_event_probs(
    mean: &[f64; 3],
    nt: &NoiseTriple,
    abs_tol: f64,
) -> Result<EventProbs> {
    validate_mean(mean)?;
    let [s1, s2, s3] = nt.sigma;
    // Half-space offsets; each is -2, 0, or +2.
    let a2 = mean[0] + mean[1];
    let a3 = mean[0] + mean[2];
    let b2 = mean[0] - mean[1];
    let b3 = mean[0] - mean[2];

    // Integrate over u = n1 / sigma1 (standard normal).  Given u:
    //   P(A | u) = P(n2 >= -n1-a2) * P(n3 >= -n1-a3) = F2l * F3l
    //   P(B | u) = P(n2 <=  n1+b2) * P(n3 <=  n1+b3) = F2h * F3h
    //   P(A∩B|u) = interval probability in each coordinate.
    // The interval probability is F_low + F_high - 1 clamped at zero; it is
    // computed as the minimum of the two one-sided differences so that each
    // branch is bounded by its corresponding factor exactly in floating
    // point, making the A∩B component dominated by both others on every
    // quadrature node.
    let integrand = |u: f64| -> [f64; 3] {
        let x = s1 * u;
        let f2l = normal_cdf((x + a2) / s2);
        let f3l = normal_cdf((x + a3) / s3);
        let f2h = normal_cdf((x + b2) / s2);
        let f3h = normal_cdf((x + b3) / s3);
        let i2 = (f2l - (1.0 - f2h)).min(f2h - (1.0 - f2l)).max(0.0);
        let i3 = (f3l - (1.0 - f3h)).min(f3h - (1.0 - f3l)).max(0.0);
        let w = normal_pdf(u);
        [w * (f2l * f3l), w * (f2h * f3h), w * (i2 * i3)]
    };

    // Range +/- 10 * max sigma in n1 units, expressed in u units; interior
    // breakpoints seed the adaptive refinement around the density mode.
    let limit = 10.0 * nt.max_sigma() / s1;
    let breakpoints = [
        -limit, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, limit,
    ];
    let [p_a, p_b, p_ab] = integrate_adaptive(&integrand, &breakpoints, abs_tol)?;
    Ok(EventProbs { p_a, p_b, p_ab })
}

/// Success-event probabilities for the reference case: transmitted bits
/// `(0, 0)` (symbols `(+1, +1)`) and a correctly forwarded parity.
pub fn nc_event_probabilities(nt: &NoiseTriple) -> Result<EventProbs> {
    nc_event_probabilities_with_tol(nt, DEFAULT_QUAD_TOL)
}

pub fn nc_event_probabilities_with_tol(nt: &NoiseTriple, abs_tol: f64) -> Result<EventProbs> {
    detection_event_probs(&[1.0, 1.0, 1.0], nt, abs_tol)
}

/// Whether the relayed parity symbol carries the correct sign relative to
/// the source symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FronthaulSign {
    Correct,
    Flipped,
}

impl FronthaulSign {
    pub fn sign(self) -> f64 {
        match self {
            FronthaulSign::Correct => 1.0,
            FronthaulSign::Flipped => -1.0,
        }
    }
}

/// Probability that the nearest-point detector recovers the first source bit
/// given transmitted symbols `(+1, +1)` and a relayed parity whose mean is
/// `fronthaul_sign`.
pub fn nc_correct_detection(nt: &NoiseTriple, fronthaul_sign: FronthaulSign) -> Result<f64> {
    nc_correct_detection_with_tol(nt, fronthaul_sign, DEFAULT_QUAD_TOL)
}

pub fn nc_correct_detection_with_tol(
    nt: &NoiseTriple,
    fronthaul_sign: FronthaulSign,
    abs_tol: f64,
) -> Result<f64> {
    let mean = [1.0, 1.0, fronthaul_sign.sign()];
    Ok(detection_event_probs(&mean, nt, abs_tol)?.p_correct())
}

/// End-to-end bit error probability of the first source under the
/// network-coded scheme.
///
/// `pe_a1` and `pe_a2` are the access-link bit error probabilities of the
/// two sources at the relay.  Without CRC the relay always forwards the
/// parity of its (possibly wrong) decisions: an even number of access errors
/// leaves the relayed sign correct, an odd number flips it.  With CRC the
/// relay forwards only when both source words were received intact, and any
/// access error counts as a lost bit.
///
/// The second source's error probability is this function with the access
/// probabilities exchanged and `nt.swapped()`.
pub fn nc_ber(pe_a1: f64, pe_a2: f64, nt: &NoiseTriple, crc: CrcMode) -> Result<f64> {
    nc_ber_with_tol(pe_a1, pe_a2, nt, crc, DEFAULT_QUAD_TOL)
}

pub fn nc_ber_with_tol(
    pe_a1: f64,
    pe_a2: f64,
    nt: &NoiseTriple,
    crc: CrcMode,
    abs_tol: f64,
) -> Result<f64> {
    require_in_range("pe_a1", pe_a1, 0.0, 0.5)?;
    require_in_range("pe_a2", pe_a2, 0.0, 0.5)?;
    let both_clean = (1.0 - pe_a1) * (1.0 - pe_a2);
    let pc_correct = nc_correct_detection_with_tol(nt, FronthaulSign::Correct, abs_tol)?;
    let success = match crc {
        CrcMode::On => both_clean * pc_correct,
        CrcMode::Off => {
            let w_even = both_clean + pe_a1 * pe_a2;
            let w_odd = pe_a1 * (1.0 - pe_a2) + (1.0 - pe_a1) * pe_a2;
            let pc_flipped = if w_odd > 0.0 {
                nc_correct_detection_with_tol(nt, FronthaulSign::Flipped, abs_tol)?
            } else {
                0.0
            };
            w_even * pc_correct + w_odd * pc_flipped
        }
    };
    Ok((1.0 - success).clamp(0.0, 1.0))
}

/// End-to-end bit error probability of the two-hop forwarding scheme.
///
/// Without CRC the relay forwards its hard decision, so the end-to-end bit
/// is wrong when exactly one hop errs: `a + f - 2af`.  With CRC an access
/// error drops the bit entirely (always counted wrong) and otherwise only
/// the fronthaul hop can err: `a + (1-a) f = a + f - af`.
pub fn fw_ber(pe_access: f64, pe_fronthaul: f64, crc: CrcMode) -> f64 {
    debug_assert!((0.0..=0.5).contains(&pe_access));
    debug_assert!((0.0..=0.5).contains(&pe_fronthaul));
    match crc {
        CrcMode::Off => pe_access + pe_fronthaul - 2.0 * pe_access * pe_fronthaul,
        CrcMode::On => pe_access + pe_fronthaul - pe_access * pe_fronthaul,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn signal_set_closure() {
        for e1 in 0..=1u8 {
            for e2 in 0..=1u8 {
                let p = point_for_bits(e1, e2);
                let idx = point_index_for_bits(e1, e2);
                assert_eq!(p, NC_POINTS[idx]);
                // Parity coordinate is the product of the first two.
                assert_eq!(p[2], p[0] * p[1]);
            }
        }
    }

    #[test]
    fn bpsk_reference_values() {
        // sigma = 1: Q(1).
        assert_abs_diff_eq!(bpsk_ber(1.0), 0.158655253931, epsilon = 1e-9);
        assert!(bpsk_ber(1e-3) < 1e-10);
        assert_abs_diff_eq!(bpsk_ber(1e6), 0.5, epsilon = 1e-5);
        // Monotone in sigma.
        let mut prev = 0.0;
        for k in 1..60 {
            let b = bpsk_ber(0.1 * k as f64);
            assert!(b > prev);
            assert!((0.0..0.5).contains(&b));
            prev = b;
        }
        // dt_ber is definitionally the same curve.
        for k in 1..20 {
            let s = 0.17 * k as f64;
            assert_eq!(dt_ber(s), bpsk_ber(s));
        }
    }

    /// Independent oracle: plain Simpson integration of the conditional-CDF
    /// product form, written without any shared machinery.
    fn simpson_events(mean: [f64; 3], s: [f64; 3]) -> (f64, f64, f64) {
        let (a2, a3) = (mean[0] + mean[1], mean[0] + mean[2]);
        let (b2, b3) = (mean[0] - mean[1], mean[0] - mean[2]);
        let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let cdf = |t: f64| 0.5 * statrs::function::erf::erfc(-t / 2f64.sqrt());
        let f = |u: f64| {
            let x = s[0] * u;
            let f2l = cdf((x + a2) / s[1]);
            let f3l = cdf((x + a3) / s[2]);
            let f2h = cdf((x + b2) / s[1]);
            let f3h = cdf((x + b3) / s[2]);
            let i2 = (f2l + f2h - 1.0).max(0.0);
            let i3 = (f3l + f3h - 1.0).max(0.0);
            (
                phi(u) * f2l * f3l,
                phi(u) * f2h * f3h,
                phi(u) * i2 * i3,
            )
        };
        let (lo, hi, n) = (-12.0f64, 12.0f64, 24_000usize);
        let h = (hi - lo) / n as f64;
        let (mut pa, mut pb, mut pab) = (0.0, 0.0, 0.0);
        for i in 0..=n {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let (va, vb, vab) = f(lo + i as f64 * h);
            pa += w * va;
            pb += w * vb;
            pab += w * vab;
        }
        (pa * h / 3.0, pb * h / 3.0, pab * h / 3.0)
    }

    #[test]
    fn event_probs_match_independent_simpson_equal_sigmas() {
        let nt = NoiseTriple::new(1.0, 1.0, 1.0).unwrap();
        let ep = nc_event_probabilities(&nt).unwrap();
        let (pa, pb, pab) = simpson_events([1.0, 1.0, 1.0], [1.0, 1.0, 1.0]);
        assert_abs_diff_eq!(ep.p_a, pa, epsilon = 1e-8);
        assert_abs_diff_eq!(ep.p_b, pb, epsilon = 1e-8);
        assert_abs_diff_eq!(ep.p_ab, pab, epsilon = 1e-8);
        // With equal scales, event B is scale-free: P(n1 largest of 3 iid).
        assert_abs_diff_eq!(ep.p_b, 1.0 / 3.0, epsilon = 1e-8);
    }

    #[test]
    fn event_probs_match_independent_simpson_unequal_sigmas() {
        let nt = NoiseTriple::new(0.7, 1.3, 2.1).unwrap();
        let ep = nc_event_probabilities(&nt).unwrap();
        let (pa, pb, pab) = simpson_events([1.0, 1.0, 1.0], [0.7, 1.3, 2.1]);
        assert_abs_diff_eq!(ep.p_a, pa, epsilon = 1e-8);
        assert_abs_diff_eq!(ep.p_b, pb, epsilon = 1e-8);
        assert_abs_diff_eq!(ep.p_ab, pab, epsilon = 1e-8);
    }

    #[test]
    fn flipped_mean_matches_independent_simpson() {
        let nt = NoiseTriple::new(0.6, 1.1, 0.9).unwrap();
        let ep = detection_event_probs(&[1.0, 1.0, -1.0], &nt, 1e-10).unwrap();
        let (pa, pb, pab) = simpson_events([1.0, 1.0, -1.0], [0.6, 1.1, 0.9]);
        assert_abs_diff_eq!(ep.p_a, pa, epsilon = 1e-8);
        assert_abs_diff_eq!(ep.p_b, pb, epsilon = 1e-8);
        assert_abs_diff_eq!(ep.p_ab, pab, epsilon = 1e-8);
    }

    #[test]
    fn small_noise_limits() {
        let nt = NoiseTriple::new(1e-9, 1e-9, 1e-9).unwrap();
        let ep = nc_event_probabilities(&nt).unwrap();
        // A concentrates to certainty; B and A∩B keep the scale-free
        // one-third of the half-space pair through the origin.
        assert_abs_diff_eq!(ep.p_a, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(ep.p_b, 1.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(ep.p_ab, 1.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(ep.p_correct(), 1.0, epsilon = 1e-6);

        // Flipped parity, vanishing noise: the mean sits equidistant from
        // the two success points and one failure point; success keeps 2/3.
        let pc = nc_correct_detection(&nt, FronthaulSign::Flipped).unwrap();
        assert_abs_diff_eq!(pc, 2.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn intersection_never_exceeds_either_event() {
        // Deterministic pseudo-random triples; the exhaustive version lives
        // in the acceptance suite.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            0.05 + 2.95 * ((state >> 11) as f64 / (1u64 << 53) as f64)
        };
        for _ in 0..25 {
            let nt = NoiseTriple::new(next(), next(), next()).unwrap();
            for mean in [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0]] {
                let ep = detection_event_probs(&mean, &nt, 1e-9).unwrap();
                assert!(ep.p_ab <= ep.p_a, "{ep:?}");
                assert!(ep.p_ab <= ep.p_b, "{ep:?}");
                assert!((0.0..=1.0).contains(&ep.p_correct()));
            }
        }
    }

    #[test]
    fn joint_scale_doubling_degrades_correct_detection() {
        for s in [[0.3, 0.5, 0.8], [1.0, 1.0, 1.0], [0.4, 1.6, 0.9]] {
            let nt = NoiseTriple::new(s[0], s[1], s[2]).unwrap();
            let doubled = NoiseTriple::new(2.0 * s[0], 2.0 * s[1], 2.0 * s[2]).unwrap();
            let p1 = nc_correct_detection(&nt, FronthaulSign::Correct).unwrap();
            let p2 = nc_correct_detection(&doubled, FronthaulSign::Correct).unwrap();
            assert!(p1 >= p2, "doubling all scales must not help: {p1} vs {p2}");
        }
    }

    #[test]
    fn nc_ber_perfect_access_reduces_to_detection() {
        let nt = NoiseTriple::new(0.8, 1.2, 1.0).unwrap();
        let pc = nc_correct_detection(&nt, FronthaulSign::Correct).unwrap();
        for crc in [CrcMode::Off, CrcMode::On] {
            let ber = nc_ber(0.0, 0.0, &nt, crc).unwrap();
            assert_abs_diff_eq!(ber, 1.0 - pc, epsilon = 1e-12);
        }
    }

    #[test]
    fn nc_ber_crc_formula_identity() {
        let nt = NoiseTriple::new(1.0, 0.7, 1.4).unwrap();
        let (a1, a2) = (0.07, 0.19);
        let pc = nc_correct_detection(&nt, FronthaulSign::Correct).unwrap();
        let ber = nc_ber(a1, a2, &nt, CrcMode::On).unwrap();
        assert_abs_diff_eq!(ber, 1.0 - (1.0 - a1) * (1.0 - a2) * pc, epsilon = 1e-12);
    }

    #[test]
    fn nc_ber_no_crc_mixes_both_parity_cases() {
        let nt = NoiseTriple::new(1.0, 1.0, 1.0).unwrap();
        let (a1, a2) = (0.1, 0.1);
        let pc_p = nc_correct_detection(&nt, FronthaulSign::Correct).unwrap();
        let pc_m = nc_correct_detection(&nt, FronthaulSign::Flipped).unwrap();
        let w_even = 0.9 * 0.9 + 0.1 * 0.1;
        let w_odd = 2.0 * 0.9 * 0.1;
        let ber = nc_ber(a1, a2, &nt, CrcMode::Off).unwrap();
        assert_abs_diff_eq!(ber, 1.0 - (w_even * pc_p + w_odd * pc_m), epsilon = 1e-12);
    }

    #[test]
    fn second_source_view_swaps_cleanly() {
        let nt = NoiseTriple::new(0.5, 1.5, 1.0).unwrap();
        assert_eq!(nt.swapped().sigma, [1.5, 0.5, 1.0]);
        assert_eq!(nt.swapped().swapped(), nt);
        // With equal direct-link scales the two sources are symmetric.
        let sym = NoiseTriple::new(1.1, 1.1, 0.9).unwrap();
        let b1 = nc_ber(0.03, 0.12, &sym, CrcMode::Off).unwrap();
        let b2 = nc_ber(0.12, 0.03, &sym.swapped(), CrcMode::Off).unwrap();
        assert_abs_diff_eq!(b1, b2, epsilon = 1e-12);
    }

    #[test]
    fn fw_reference_values_and_identity() {
        assert_relative_eq!(fw_ber(0.1, 0.1, CrcMode::Off), 0.18, epsilon = 1e-12);
        assert_relative_eq!(fw_ber(0.1, 0.1, CrcMode::On), 0.19, epsilon = 1e-12);
        assert_relative_eq!(fw_ber(0.0, 0.23, CrcMode::Off), 0.23, epsilon = 1e-12);
        assert_relative_eq!(fw_ber(0.0, 0.23, CrcMode::On), 0.23, epsilon = 1e-12);
        // CRC = no-CRC + a*f, exactly.
        let mut state = 1234567u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            0.5 * ((state >> 11) as f64 / (1u64 << 53) as f64)
        };
        for _ in 0..1000 {
            let (a, f) = (next(), next());
            let lhs = fw_ber(a, f, CrcMode::Off) + a * f;
            let rhs = fw_ber(a, f, CrcMode::On);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-15);
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(NoiseTriple::new(0.0, 1.0, 1.0).is_err());
        assert!(NoiseTriple::new(1.0, -1.0, 1.0).is_err());
        assert!(NoiseTriple::new(1.0, 1.0, f64::INFINITY).is_err());
        let nt = NoiseTriple::new(1.0, 1.0, 1.0).unwrap();
        assert!(nc_ber(0.6, 0.1, &nt, CrcMode::Off).is_err());
        assert!(detection_event_probs(&[1.0, 0.5, 1.0], &nt, 1e-9).is_err());
    }
}
