//! Trial-state energy terms, thresholds and the pair-probability curve.

use std::f64::consts::PI;

use proptest::prelude::*;
use quasifree::constants::{self, closed_form_constants};
use quasifree::vacuum_energy::{
    coulomb_limit, coulomb_pairing, density_sup_check, energy_bounds, energy_table, pair_bound_from,
    thresholds_and_constants, trial_density_fourier, trial_energy_breakdown, validity_threshold, DensityProfile,
    ExternalDensity, TrialParams,
};

fn model(nu: ExternalDensity, lambda: f64, alpha: f64) -> TrialParams {
    TrialParams::optimal(1.0, alpha, lambda, nu, 1.0)
}

fn standard() -> TrialParams {
    model(ExternalDensity::uniform_ball(1.0).unwrap(), 1.0, 1.0)
}

/// D of two normalized Gaussians: √(2/π)/√(σ₁² + σ₂²).
fn gaussian_pair(s1: f64, s2: f64) -> f64 {
    (2.0 / PI).sqrt() / (s1 * s1 + s2 * s2).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn coulomb_pairing_of_gaussians(s1 in 0.2f64..3.0, s2 in 0.2f64..3.0) {
        let f = ExternalDensity::gaussian(s1).unwrap();
        let g = ExternalDensity::gaussian(s2).unwrap();
        let fg = coulomb_pairing(|k| f.fourier(k), |k| g.fourier(k), f64::INFINITY).unwrap();
        let gf = coulomb_pairing(|k| g.fourier(k), |k| f.fourier(k), f64::INFINITY).unwrap();
        let want = gaussian_pair(s1, s2);
        prop_assert!((fg - want).abs() <= 1e-8 * want);
        prop_assert!((fg - gf).abs() <= 1e-14 * want);
    }

    #[test]
    fn lower_bound_is_rescaled(z in 1.0f64..1e8, lambda in 0.2f64..5.0, alpha in 0.01f64..2.0) {
        let nu = ExternalDensity::uniform_ball(1.0).unwrap();
        let e = energy_bounds(z, alpha, lambda, &nu).unwrap();
        prop_assert!((e.lower - z * z * e.tilde_lower).abs() <= 1e-12 * e.lower.abs());
        prop_assert_eq!(e.upper.is_some(), z > validity_threshold());
    }

    #[test]
    fn pair_bound_monotone(u in 0.0f64..3.0, du in 1e-3f64..1.0) {
        let th = thresholds_and_constants(&standard()).unwrap();
        let z = th.z1_tilde * (1.0 + u);
        let lo = pair_bound_from(z, &th);
        let hi = pair_bound_from(z * (1.0 + du), &th);
        prop_assert!(lo.valid && hi.valid);
        prop_assert!(lo.value > 0.0 && hi.value <= 1.0 && hi.value >= lo.value);
    }
}

#[test]
fn remainder_and_scaling() {
    for nu in [ExternalDensity::uniform_ball(1.0).unwrap(), ExternalDensity::gaussian(0.5).unwrap()] {
        let m = model(nu, 1.0, 1.0);
        let limit = coulomb_limit(&m).unwrap();
        for z in [10.0, 1e3, 1e6, 1e9] {
            let p = m.with_z(z);
            let e = trial_energy_breakdown(&p).unwrap();
            assert!(e.r1_exact.abs() <= e.r1_bound, "Z={z}: |R1| {} > {}", e.r1_exact, e.r1_bound);
            // With ν̂ frozen at ν̂(0) the two Coulomb terms scale exactly like Z^{5/3}.
            let frozen = (-(e.d_rho1_nu - e.r1_exact) + 0.5 * e.d_rho1_rho1) / z.powf(5.0 / 3.0);
            assert!((frozen - limit).abs() <= 1e-8 * limit.abs(), "Z={z}: {frozen} vs {limit}");
            // tr Q = ∫ρ₁ = (2π)^{3/2} ρ̂₁(0).
            let tr_q = (2.0 * PI).powf(1.5) * trial_density_fourier(&p, 0.0);
            assert!((e.kinetic_bound - 2f64.sqrt() * tr_q).abs() <= 1e-12 * e.kinetic_bound);
        }
    }
}

#[test]
fn trial_objective_dominates_limit() {
    // The trial objective replaces both limit integrals by their bounds, so it dominates the exact limit.
    let m = standard();
    let k = constants::constants();
    let limit = coulomb_limit(&m).unwrap();
    let want = constants::limit_prefactor() * constants::trial_objective(k.a_star, k.b_star);
    assert!(limit <= want + 1e-12, "{limit} vs bound {want}");
}

#[test]
fn threshold_solves_half_ratio() {
    for nu in [ExternalDensity::uniform_ball(1.0).unwrap(), ExternalDensity::gaussian(2.0).unwrap()] {
        for lambda in [0.5, 1.0, 3.0] {
            let th = thresholds_and_constants(&model(nu.clone(), lambda, 0.5)).unwrap();
            let x = th.x0;
            assert!((th.b1 * x + th.b2 * x * x - 0.5).abs() < 1e-12);
            assert!(th.z1_tilde >= x.powi(-3) * (1.0 - 1e-15));
            assert!((th.kappa - constants::constants().a * th.c).abs() <= 1e-15 * th.kappa);
        }
    }
}

#[test]
fn sandwich_above_threshold() {
    let m = standard();
    let th = thresholds_and_constants(&m).unwrap();
    let c = closed_form_constants();
    let mut prev = 0.0;
    for j in 1..=40 {
        let z = th.z1_tilde * 1.5f64.powi(j);
        let e = energy_bounds(z, 1.0, 1.0, &m.nu).unwrap();
        let ratio = e.upper_ratio(z, 1.0, 1.0, 1.0).unwrap();
        assert!(ratio >= 0.5 * c.c1 && ratio <= c.c1 && ratio > prev);
        assert!(-e.lower / z.powf(5.0 / 3.0) == c.c2 && c.c1 <= c.c2);
        prev = ratio;
    }
}

#[test]
fn density_sup_below_cutoff_bound() {
    for z in [10.0, 1e4, 1e8] {
        let s = density_sup_check(&standard().with_z(z)).unwrap();
        assert!(s.pass && s.sup <= s.bound, "Z={z}: {} vs {}", s.sup, s.bound);
    }
}

#[test]
fn negative_charge_and_q_zero() {
    let neg = ExternalDensity::new(DensityProfile::UniformBall { radius: 1.0, charge_sign: -1.0 }).unwrap();
    let m = model(neg, 1.0, 1.0).with_z(1e4);
    assert!(trial_density_fourier(&m, 0.0) < 0.0);
    let e = trial_energy_breakdown(&m).unwrap();
    let pos = trial_energy_breakdown(&standard().with_z(1e4)).unwrap();
    assert!((e.upper_bound_ez - pos.upper_bound_ez).abs() <= 1e-12 * pos.upper_bound_ez.abs());
    assert!((e.d_rho1_nu - pos.d_rho1_nu).abs() <= 1e-10 * pos.d_rho1_nu.abs());

    let zero = ExternalDensity::new(DensityProfile::Tabulated { r: vec![0.0, 1.0, 2.0], values: vec![0.0, 1.0, -0.5] });
    assert!(zero.is_err());
}

#[test]
fn table_flags_rows_below_threshold() {
    let m = standard();
    let th = thresholds_and_constants(&m).unwrap();
    let (_, rows) = energy_table(&m, &[0.1, 100.0, th.z1_tilde * 2.0]).unwrap();
    assert!(rows[0].e_upper.is_none() && rows[0].below_threshold && rows[0].pz_lower.is_none());
    assert!(rows[1].e_upper.is_some() && rows[1].below_threshold && rows[1].n_lower.is_none());
    assert!(!rows[2].below_threshold && rows[2].pz_lower.unwrap() > 0.99);
}
