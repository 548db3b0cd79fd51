//! Trial-state energies of the polarized Dirac vacuum in Fourier space, the
//! resulting bounds on E(Z), the thresholds Z̃₁, C, κ, and the lower bound
//! on the pair-creation probability.
//!
//! Coulomb pairing convention: D(f, g) = 4π ∫ f̂(k) ĝ(k)/|k|² dk, which for
//! radial real transforms is 16π² ∫₀^∞ f̂(k) ĝ(k) dk.

mod density;
pub mod quadrature;
mod spinor;
mod trial;

use std::f64::consts::PI;

pub use density::{ball_shape, DensityProfile, ExternalDensity, FOURIER_NORM};
pub use spinor::{alpha, alpha_dot, beta, dirac_free, spinor_frame, Mat4, Spinor, SpinorFrame};
pub use trial::{
    autocorrelation_lower_bound, ball_autocorrelation, ball_indicator_fourier, coulomb_limit,
    density_sup_check, energy_bounds, energy_table, indicator_fourier_lower_bound, limit_integrals,
    number_lower_bound, pair_bound_from, pair_probability_lower_bound, thresholds_and_constants,
    trial_density_fourier, trial_density_real, trial_energy_breakdown, validity_threshold,
    DensitySup, EnergyBounds, EnergyBreakdown, EnergyRow, PairBound, Thresholds, TrialParams,
};

use crate::error::Result;
use quadrature::{integrate_to_infinity, integrate_with_breaks, QuadOptions};

fn quad_opts() -> QuadOptions {
    QuadOptions { rel_tol: 1e-10, abs_tol: 1e-300, max_intervals: 20000 }
}

/// ∫₀^kmax f(k) dk (kmax may be +∞).
pub(crate) fn radial_integral(f: impl Fn(f64) -> f64, kmax: f64) -> Result<f64> {
    radial_integral_with_breaks(f, &[], kmax)
}

fn radial_integral_with_breaks(f: impl Fn(f64) -> f64, breaks: &[f64], kmax: f64) -> Result<f64> {
    if kmax.is_infinite() {
        let edge = breaks.iter().copied().fold(0.0, f64::max);
        let head = if edge > 0.0 { integrate_with_breaks(&f, 0.0, edge, breaks, quad_opts())?.value } else { 0.0 };
        Ok(head + integrate_to_infinity(&f, edge, quad_opts())?.value)
    } else {
        Ok(integrate_with_breaks(f, 0.0, kmax, breaks, quad_opts())?.value)
    }
}

/// D(f, g) for radial Fourier transforms `f_hat`, `g_hat`, integrated over |k| ≤ kmax.
pub fn coulomb_pairing(f_hat: impl Fn(f64) -> f64, g_hat: impl Fn(f64) -> f64, kmax: f64) -> Result<f64> {
    coulomb_pairing_with_breaks(f_hat, g_hat, &[], kmax)
}

/// [`coulomb_pairing`] with known kinks or support edges split out.
pub fn coulomb_pairing_with_breaks(
    f_hat: impl Fn(f64) -> f64,
    g_hat: impl Fn(f64) -> f64,
    breaks: &[f64],
    kmax: f64,
) -> Result<f64> {
    let v = radial_integral_with_breaks(|k| f_hat(k) * g_hat(k), breaks, kmax)?;
    Ok(16.0 * PI * PI * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_self_energy() {
        let nu = ExternalDensity::uniform_ball(1.0).unwrap();
        let d = coulomb_pairing(|k| nu.fourier(k), |k| nu.fourier(k), f64::INFINITY).unwrap();
        assert!((d - 1.2).abs() < 1e-8 * 1.2);
        let nu2 = ExternalDensity::uniform_ball(2.0).unwrap();
        assert!((nu2.coulomb_norm().unwrap().powi(2) - 0.6).abs() < 1e-8);
    }

    #[test]
    fn gaussian_self_energy() {
        let s = 0.7;
        let nu = ExternalDensity::gaussian(s).unwrap();
        let want = 1.0 / (s * PI.sqrt());
        assert!((nu.coulomb_norm().unwrap().powi(2) - want).abs() < 1e-8 * want);
    }

    #[test]
    fn disjoint_windows() {
        let f = |k: f64| if k < 1.0 { 1.0 } else { 0.0 };
        let g = |k: f64| if k > 2.0 && k < 3.0 { 1.0 } else { 0.0 };
        assert_eq!(coulomb_pairing_with_breaks(f, g, &[1.0, 2.0, 3.0], 4.0).unwrap(), 0.0);
    }
}
