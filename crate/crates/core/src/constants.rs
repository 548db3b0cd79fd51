//! Optimized and closed-form constants of the vacuum estimates.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub achieved_tolerance: f64,
    pub evaluations: usize,
}

/// 3(e^β − 1)/(4e^{3β} + 7e^β − 8), the rate delivered by the interpolation at β.
pub fn objective_a(beta: f64) -> f64 {
    if beta == 0.0 {
        return 0.0;
    }
    let e = beta.exp();
    3.0 * beta.exp_m1() / (4.0 * e.powi(3) + 7.0 * e - 8.0)
}

/// θ(β) = 3/(7 − 8e^{−β} + 4e^{2β}); equalizes the two exponent coefficients.
pub fn theta_of_beta(beta: f64) -> f64 {
    3.0 / (7.0 - 8.0 * (-beta).exp() + 4.0 * (2.0 * beta).exp())
}

/// a³b(√(2π)(ab − 2/3) + (8/9)a³).
pub fn trial_objective(a: f64, b: f64) -> f64 {
    a.powi(3) * b * ((2.0 * PI).sqrt() * (a * b - 2.0 / 3.0) + 8.0 / 9.0 * a.powi(3))
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of a unimodal `f` on [lo, hi].
pub fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, max_iter: usize) -> OptResult {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut evals = 2;
    let mut it = 0;
    while b - a > tol && it < max_iter {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
        evals += 1;
        it += 1;
    }
    let x = if f1 <= f2 { x1 } else { x2 };
    OptResult {
        argmin: vec![x],
        value: f(x),
        achieved_tolerance: b - a,
        evaluations: evals + 1,
    }
}

/// Grid scan for a bracket, then golden section inside it.
pub fn bracketed_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid: usize, tol: f64) -> OptResult {
    let step = (hi - lo) / grid as f64;
    let (mut best, mut best_v) = (0, f64::INFINITY);
    for i in 0..=grid {
        let v = f(lo + step * i as f64);
        if v < best_v {
            best = i;
            best_v = v;
        }
    }
    let a = lo + step * best.saturating_sub(1) as f64;
    let b = (lo + step * (best + 1) as f64).min(hi);
    let mut r = golden_section_min(&f, a, b, tol, 400);
    r.evaluations += grid + 1;
    r
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AOptimum {
    pub a: f64,
    pub beta_star: f64,
    pub theta_star: f64,
    pub result: OptResult,
}

/// a = max_{β ≥ 0} 3(e^β − 1)/(4e^{3β} + 7e^β − 8), with its maximizer and θ(β*).
pub fn optimize_a() -> AOptimum {
    let r = bracketed_min(|b| -objective_a(b), 0.0, 2.0, 2000, 1e-10);
    let beta = r.argmin[0];
    AOptimum {
        a: objective_a(beta),
        beta_star: beta,
        theta_star: theta_of_beta(beta),
        result: OptResult {
            value: objective_a(beta),
            ..r
        },
    }
}

/// min over a > 0, b ∈ (0, 1) of the trial objective: coarse grid, then
/// coordinate descent with golden-section line searches.
pub fn trial_minimum() -> OptResult {
    let (a_lo, a_hi) = (1e-6, 3.0);
    let (b_lo, b_hi) = (1e-6, 1.0 - 1e-6);
    let g = 200;
    let mut evals = 0;
    let (mut a, mut b, mut best) = (1.0, 0.5, f64::INFINITY);
    for i in 0..=g {
        for j in 0..=g {
            let x = a_lo + (a_hi - a_lo) * i as f64 / g as f64;
            let y = b_lo + (b_hi - b_lo) * j as f64 / g as f64;
            let v = trial_objective(x, y);
            evals += 1;
            if v < best {
                (a, b, best) = (x, y, v);
            }
        }
    }
    let (mut da, mut db) = ((a_hi - a_lo) / g as f64, (b_hi - b_lo) / g as f64);
    let mut achieved = f64::INFINITY;
    for _ in 0..500 {
        let ra = golden_section_min(|x| trial_objective(x, b), (a - 2.0 * da).max(a_lo), (a + 2.0 * da).min(a_hi), 1e-13, 200);
        let rb = golden_section_min(|y| trial_objective(ra.argmin[0], y), (b - 2.0 * db).max(b_lo), (b + 2.0 * db).min(b_hi), 1e-13, 200);
        evals += ra.evaluations + rb.evaluations;
        let (na, nb) = (ra.argmin[0], rb.argmin[0]);
        let step = (na - a).abs().max((nb - b).abs());
        da = da.min(step.max(1e-9) * 4.0);
        db = db.min(step.max(1e-9) * 4.0);
        (a, b) = (na, nb);
        achieved = step.max(ra.achieved_tolerance).max(rb.achieved_tolerance);
        if step < 1e-12 {
            break;
        }
    }
    OptResult {
        argmin: vec![a, b],
        value: trial_objective(a, b),
        achieved_tolerance: achieved,
        evaluations: evals,
    }
}

/// −2^{−35/6} 3^{2/3} π^{5/6}, printed value of the trial minimum.
pub fn trial_minimum_closed_form() -> f64 {
    -(2f64.powf(-35.0 / 6.0) * 3f64.powf(2.0 / 3.0) * PI.powf(5.0 / 6.0))
}

/// 2^{−11/6} 3^{−1/3} π^{−13/6}, the prefactor of the Z^{5/3} limit.
pub fn limit_prefactor() -> f64 {
    2f64.powf(-11.0 / 6.0) * 3f64.powf(-1.0 / 3.0) * PI.powf(-13.0 / 6.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForms {
    /// 2^{−23/3} 3^{1/3} π^{−4/3}
    pub c1: f64,
    /// 2^{−4/3} 3^{2/3} π^{−1/3}
    pub c2: f64,
    /// Optimized a (same as [`optimize_a`]).
    pub a: f64,
    /// 1/(6π²), coefficient of Λ³ in the L^∞ density bound.
    pub delta_coeff: f64,
}

pub fn closed_form_constants() -> ClosedForms {
    ClosedForms {
        c1: 2f64.powf(-23.0 / 3.0) * 3f64.powf(1.0 / 3.0) * PI.powf(-4.0 / 3.0),
        c2: 2f64.powf(-4.0 / 3.0) * 3f64.powf(2.0 / 3.0) * PI.powf(-1.0 / 3.0),
        a: constants().a,
        delta_coeff: 1.0 / (6.0 * PI * PI),
    }
}

/// Everything the CLI reports, computed once per process.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub a: f64,
    pub beta_star: f64,
    pub theta_star: f64,
    pub c1: f64,
    pub c2: f64,
    pub trial_min: f64,
    pub a_star: f64,
    pub b_star: f64,
}

pub fn compute_constants() -> ConstantsReport {
    let opt = optimize_a();
    let tm = trial_minimum();
    ConstantsReport {
        a: opt.a,
        beta_star: opt.beta_star,
        theta_star: opt.theta_star,
        c1: 2f64.powf(-23.0 / 3.0) * 3f64.powf(1.0 / 3.0) * PI.powf(-4.0 / 3.0),
        c2: 2f64.powf(-4.0 / 3.0) * 3f64.powf(2.0 / 3.0) * PI.powf(-1.0 / 3.0),
        trial_min: tm.value,
        a_star: tm.argmin[0],
        b_star: tm.argmin[1],
    }
}

static CONSTANTS: OnceLock<ConstantsReport> = OnceLock::new();

pub fn constants() -> &'static ConstantsReport {
    CONSTANTS.get_or_init(compute_constants)
}

/// Fresh computation when `recompute`, memoized copy otherwise.
pub fn constants_with(recompute: bool) -> ConstantsReport {
    if recompute {
        compute_constants()
    } else {
        constants().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objective_examples() {
        assert_eq!(objective_a(0.0), 0.0);
        assert!((objective_a(0.36443) - 0.0941248).abs() < 1e-6);
        let e = 1f64.exp();
        let want = 3.0 * (e - 1.0) / (4.0 * e.powi(3) + 7.0 * e - 8.0);
        assert!((objective_a(1.0) - want).abs() < 1e-15);
        assert!((objective_a(1.0) - 0.0564171904077822).abs() < 1e-13);
        assert!(objective_a(1.0) < optimize_a().a);
    }

    #[test]
    fn trial_examples() {
        assert!((trial_objective(1.0, 0.5) - 0.235558754891861).abs() < 1e-12);
        assert!((trial_minimum_closed_form() + 0.094_703_076_806_609_96).abs() < 1e-15);
    }

    #[test]
    fn golden_section_quadratic() {
        let r = golden_section_min(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10, 200);
        assert!((r.argmin[0] - 0.3).abs() < 1e-9);
        assert!(r.achieved_tolerance <= 1e-10);
    }

    #[test]
    fn memoized_equals_recomputed() {
        assert_eq!(constants_with(true), *constants());
    }
}
