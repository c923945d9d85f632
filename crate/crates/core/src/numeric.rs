//! Shared numerics: Gaussian special functions, adaptive Gauss-Legendre
//! quadrature, and two small derivative-free minimizers.
//!
//! Quadrature integrates a *vector-valued* integrand (three components) so
//! that related probabilities share one panel partition; differences between
//! the components are then exact to machine precision on the shared nodes.

use crate::error::{Result, SimError};
use statrs::function::erf;
use std::sync::OnceLock;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Standard normal density.
#[inline]
pub fn normal_pdf(x: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    (-0.5 * x * x).exp() * INV_SQRT_2PI
}

/// Standard normal CDF, Phi(x) = erfc(-x/sqrt(2)) / 2.
///
/// Infinite arguments (which arise in degenerate noise-scale limits) map to
/// the exact limit values.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_infinite() {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    0.5 * erf::erfc(-x / SQRT_2)
}

/// Standard normal upper tail, Q(x) = 1 - Phi(x).
#[inline]
pub fn normal_sf(x: f64) -> f64 {
    if x.is_infinite() {
        return if x > 0.0 { 0.0 } else { 1.0 };
    }
    0.5 * erf::erfc(x / SQRT_2)
}

const GL_ORDER: usize = 15;

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence (no hard-coded tables).
fn gauss_legendre_15() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static TABLE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n.div_ceil(2) {
            // Asymptotic root estimate, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut p1;
            let mut p0;
            for _ in 0..100 {
                p0 = 1.0;
                p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            p0 = 1.0;
            p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

/// One 15-point Gauss-Legendre panel of a vector integrand.
fn gl_panel<F>(f: &F, a: f64, b: f64) -> [f64; 3]
where
    F: Fn(f64) -> [f64; 3],
{
    let (nodes, weights) = gauss_legendre_15();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [0.0; 3];
    for (&x, &w) in nodes.iter().zip(weights.iter()) {
        let v = f(mid + half * x);
        for c in 0..3 {
            acc[c] += w * v[c];
        }
    }
    for c in &mut acc {
        *c *= half;
    }
    acc
}

fn adapt<F>(
    f: &F,
    a: f64,
    b: f64,
    whole: [f64; 3],
    tol: f64,
    depth: u32,
    out: &mut [f64; 3],
) -> Result<()>
where
    F: Fn(f64) -> [f64; 3],
{
    let mid = 0.5 * (a + b);
    let left = gl_panel(f, a, mid);
    let right = gl_panel(f, mid, b);
    let mut err: f64 = 0.0;
    for c in 0..3 {
        err = err.max((left[c] + right[c] - whole[c]).abs());
    }
    if err <= tol {
        for c in 0..3 {
            out[c] += left[c] + right[c];
        }
        return Ok(());
    }
    if depth == 0 {
        return Err(SimError::numerical(
            "adaptive quadrature",
            format!("panel [{a}, {b}] failed to reach abs tol {tol:e} (err {err:e})"),
        ));
    }
    adapt(f, a, mid, left, 0.5 * tol, depth - 1, out)?;
    adapt(f, mid, b, right, 0.5 * tol, depth - 1, out)
}

/// Adaptive Gauss-Legendre integration of a 3-component integrand over the
/// segments delimited by `breakpoints` (ascending). The absolute tolerance
/// applies to each component of the total.
pub fn integrate_adaptive<F>(f: &F, breakpoints: &[f64], abs_tol: f64) -> Result<[f64; 3]>
where
    F: Fn(f64) -> [f64; 3],
{
    assert!(breakpoints.len() >= 2, "need at least one segment");
    assert!(abs_tol > 0.0, "tolerance must be positive");
    let nseg = breakpoints.len() - 1;
    let seg_tol = abs_tol / nseg as f64;
    let mut total = [0.0; 3];
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a >= b {
            continue;
        }
        let whole = gl_panel(f, a, b);
        adapt(f, a, b, whole, seg_tol, 48, &mut total)?;
    }
    Ok(total)
}

/// Result of a Nelder-Mead minimization.
#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Nelder-Mead simplex minimizer for 1-3 dimensions. Infinite objective
/// values (used to encode infeasibility) are handled by ordinary ordering;
/// NaN is treated as +inf.
pub fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    scale: &[f64],
    max_evals: usize,
    x_tol: f64,
) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1 && scale.len() == n);
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += scale[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if spread < x_tol {
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for (x, _) in simplex.iter().take(n) {
            for i in 0..n {
                centroid[i] += x[i] / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|i| 2.0 * centroid[i] - worst.0[i]).collect();
        let f_r = eval(&reflect, &mut evals);

        if f_r < simplex[0].1 {
            // Try to expand.
            let expand: Vec<f64> = (0..n).map(|i| 3.0 * centroid[i] - 2.0 * worst.0[i]).collect();
            let f_e = eval(&expand, &mut evals);
            simplex[n] = if f_e < f_r { (expand, f_e) } else { (reflect, f_r) };
        } else if f_r < simplex[n - 1].1 {
            simplex[n] = (reflect, f_r);
        } else {
            // Contract (outside if the reflection helped over the worst).
            let towards = if f_r < worst.1 { &reflect } else { &worst.0 };
            let contract: Vec<f64> = (0..n).map(|i| 0.5 * (centroid[i] + towards[i])).collect();
            let f_c = eval(&contract, &mut evals);
            if f_c < worst.1.min(f_r) {
                simplex[n] = (contract, f_c);
            } else {
                // Shrink towards the best vertex.
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    for (vi, bi) in v.0.iter_mut().zip(best.iter()) {
                        *vi = 0.5 * (*vi + bi);
                    }
                    v.1 = eval(&v.0.clone(), &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    NmResult {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        evals,
    }
}

/// Golden-section minimization of a unimodal 1-D function on [a, b].
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > x_tol && iters < 200 {
        iters += 1;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
