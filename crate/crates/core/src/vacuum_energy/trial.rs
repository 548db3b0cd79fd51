use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::density::{ball_shape, sinc, ExternalDensity, FOURIER_NORM};
use super::quadrature::{integrate, QuadOptions};
use super::{coulomb_pairing_with_breaks, radial_integral};
use crate::constants::{self, limit_prefactor};
use crate::error::{Error, Result};

/// (2π)^{−3/2} · 4π/3: the smallest |q|Z for which the trial state exists.
pub fn validity_threshold() -> f64 {
    FOURIER_NORM * 4.0 * PI / 3.0
}

/// F̂ for F = 1_{B(0,a)}: √(2/π)(sin ak − ak cos ak)/k³.
pub fn ball_indicator_fourier(a: f64, k: f64) -> f64 {
    FOURIER_NORM * 4.0 * PI / 3.0 * a.powi(3) * ball_shape(a * k)
}

/// g⋆g̃ for the normalized ball g of radius b: (2b − k)²(4b + k)/(16b³) on [0, 2b].
pub fn ball_autocorrelation(b: f64, k: f64) -> f64 {
    if k >= 2.0 * b {
        0.0
    } else {
        (2.0 * b - k).powi(2) * (4.0 * b + k) / (16.0 * b.powi(3))
    }
}

/// Lower bound (1 − k/2b)³ on [0, 2b] for the autocorrelation.
pub fn autocorrelation_lower_bound(b: f64, k: f64) -> f64 {
    if k >= 2.0 * b {
        0.0
    } else {
        (1.0 - k / (2.0 * b)).powi(3)
    }
}

/// Lower bound (a³/√(2π))(2/3 − ab) for F̂ on [0, 2b].
pub fn indicator_fourier_lower_bound(a: f64, b: f64) -> f64 {
    a.powi(3) / (2.0 * PI).sqrt() * (2.0 / 3.0 - a * b)
}

/// Parameters of the trial state and of the external field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialParams {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub alpha_c: f64,
    pub z: f64,
    pub nu: ExternalDensity,
    pub c_lambda: f64,
}

impl TrialParams {
    /// Parameters at the optimal (a*, b*).
    pub fn optimal(z: f64, alpha_c: f64, lambda: f64, nu: ExternalDensity, c_lambda: f64) -> Self {
        let k = constants::constants();
        Self { a: k.a_star, b: k.b_star, lambda, alpha_c, z, nu, c_lambda }
    }

    pub fn with_z(&self, z: f64) -> Self {
        Self { z, ..self.clone() }
    }

    /// Checks everything except the r < Λ/2 constraint, which depends on Z.
    pub fn check_model(&self) -> Result<()> {
        let pos = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::argument(name, "finite and > 0", v))
            }
        };
        pos("a", self.a)?;
        pos("lambda", self.lambda)?;
        pos("alpha_c", self.alpha_c)?;
        pos("c_lambda", self.c_lambda)?;
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(Error::argument("b", "in (0, 1)", self.b));
        }
        if self.nu.charge() == 0.0 {
            return Err(Error::Config("total charge q = 0 is not supported".into()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_model()?;
        if !(self.z > 0.0) || !self.z.is_finite() {
            return Err(Error::argument("Z", "finite and > 0", self.z));
        }
        if !self.trial_state_exists() {
            return Err(Error::argument("|q|Z", "> (2pi)^{-3/2} 4pi/3 (r < Lambda/2)", self.nu.charge().abs() * self.z));
        }
        Ok(())
    }

    pub fn trial_state_exists(&self) -> bool {
        self.nu.charge().abs() * self.z > validity_threshold()
    }

    /// V_Λ = vol B(0, Λ/2).
    pub fn v_lambda(&self) -> f64 {
        PI * self.lambda.powi(3) / 6.0
    }

    /// r = (2π)^{−1/2} (|q|Z / V_Λ)^{−1/3}.
    pub fn r(&self) -> f64 {
        (2.0 * PI).sqrt().recip() * (self.nu.charge().abs() * self.z / self.v_lambda()).powf(-1.0 / 3.0)
    }

    /// Radius of the support of ρ̂₁.
    pub fn support(&self) -> f64 {
        2.0 * self.b * self.r()
    }
}

/// ρ̂₁(k) = (2π)^{−3} V_Λ r^{−3} F̂(k/r) g⋆g̃(k/r), negated when q < 0.
pub fn trial_density_fourier(params: &TrialParams, k: f64) -> f64 {
    let r = params.r();
    let s = params.nu.charge().signum();
    s * (2.0 * PI).powi(-3) * params.v_lambda() * r.powi(-3)
        * ball_indicator_fourier(params.a, k / r)
        * ball_autocorrelation(params.b, k / r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// √(1+Λ²) tr Q
    pub kinetic_bound: f64,
    pub d_rho1_nu: f64,
    pub d_rho1_rho1: f64,
    /// |R₁| ≤ this, R₁ = D(ρ₁, Zν) − 4π|q|Z(2π)^{−3/2}∫ρ̂₁/|k|²
    pub r1_bound: f64,
    pub r1_exact: f64,
    pub d_rho2_nu_bound: f64,
    pub d_rho1_rho2_bound: f64,
    pub d_rho2_rho2_bound: f64,
    /// kinetic − αD(ρ₁,Zν) + (α/2)D(ρ₁,ρ₁) + α(|D(ρ₂,Zν)| + |D(ρ₁,ρ₂)| + |D(ρ₂,ρ₂)|/2) bounds
    pub itemized_upper: f64,
    /// −c₁αΛ|q|^{5/3}Z^{5/3}(1 − B₁Z^{−1/3} − B₂Z^{−2/3})
    pub upper_bound_ez: f64,
    /// −c₂αΛZ^{5/3}
    pub lower_bound_ez: f64,
}

pub fn trial_energy_breakdown(params: &TrialParams) -> Result<EnergyBreakdown> {
    params.validate()?;
    let (a, b, lam, al, z) = (params.a, params.b, params.lambda, params.alpha_c, params.z);
    let q = params.nu.charge().abs();
    let m1 = params.nu.first_moment();
    let kmax = params.support();
    let breaks = [kmax];
    let rho1 = |k: f64| trial_density_fourier(params, k);

    let d_rho1_nu = z * coulomb_pairing_with_breaks(rho1, |k| params.nu.fourier(k), &breaks, 2.0 * lam)?;
    let d_rho1_rho1 = coulomb_pairing_with_breaks(rho1, rho1, &breaks, 2.0 * lam)?;
    // D(ρ₁, Zν) with ν̂ frozen at ν̂(0); the difference is R₁.
    let frozen = params.nu.fourier(0.0);
    let r1_exact = d_rho1_nu - z * coulomb_pairing_with_breaks(rho1, |_| frozen, &breaks, 2.0 * lam)?;

    let tr_q = FOURIER_NORM * 4.0 * PI / 3.0 * a.powi(3) * q * z;
    let kinetic_bound = (1.0 + lam * lam).sqrt() * tr_q;

    let p = |base: f64, e: f64| base.powf(e);
    let r1_bound = p(2.0, 5.0 / 3.0) * p(3.0, -5.0 / 3.0) * p(PI, -11.0 / 6.0) * a.powi(3) * b * b * m1 * lam * lam * p(q, 1.0 / 3.0) * p(z, 4.0 / 3.0);
    let beta1 = p(2.0, 19.0 / 3.0) * p(3.0, -2.0 / 3.0) * 7.0 * p(PI, 23.0 / 6.0) * a.powi(3) * b * b;
    let beta2 = p(2.0, 11.0 / 6.0) * p(3.0, -8.0 / 3.0) * 7.0 * p(PI, -7.0 / 3.0) * a.powi(6) * b * b;
    let beta3 = p(2.0, -1.5) * p(3.0, -4.0) * 49.0 * p(PI, -2.5) * a.powi(6) * b.powi(3);
    let d_rho2_nu_bound = beta1 * lam * lam * p(q, 1.0 / 3.0) * p(z, 4.0 / 3.0);
    let d_rho1_rho2_bound = beta2 * lam * lam * p(q, 4.0 / 3.0) * p(z, 4.0 / 3.0);
    let d_rho2_rho2_bound = beta3 * lam.powi(3) * q * z;

    let itemized_upper = kinetic_bound - al * d_rho1_nu + 0.5 * al * d_rho1_rho1
        + al * (d_rho2_nu_bound + d_rho1_rho2_bound + 0.5 * d_rho2_rho2_bound);

    let th = thresholds_and_constants(params)?;
    let c = constants::closed_form_constants();
    let upper_bound_ez = -c.c1 * al * lam * p(q, 5.0 / 3.0) * p(z, 5.0 / 3.0)
        * (1.0 - th.b1 * p(z, -1.0 / 3.0) - th.b2 * p(z, -2.0 / 3.0));
    Ok(EnergyBreakdown {
        kinetic_bound,
        d_rho1_nu,
        d_rho1_rho1,
        r1_bound,
        r1_exact,
        d_rho2_nu_bound,
        d_rho1_rho2_bound,
        d_rho2_rho2_bound,
        itemized_upper,
        upper_bound_ez,
        lower_bound_ez: -c.c2 * al * lam * p(z, 5.0 / 3.0),
    })
}

/// ∫_{B(0,2Λ)} F̂ g⋆g̃/|k|² and ∫_{B(0,2Λ)} (F̂ g⋆g̃)²/|k|² in the unscaled variables.
pub fn limit_integrals(a: f64, b: f64, lambda: f64) -> Result<(f64, f64)> {
    let f = |k: f64| ball_indicator_fourier(a, k) * ball_autocorrelation(b, k);
    let top = (2.0 * b).min(2.0 * lambda);
    let j1 = 4.0 * PI * radial_integral(f, top)?;
    let j2 = 4.0 * PI * radial_integral(|k| f(k).powi(2), top)?;
    Ok((j1, j2))
}

/// Prefactor · αΛ|q|^{5/3} · (−J₁ + J₂/2): limit of Z^{−5/3}(−αD(ρ₁,Zν) + (α/2)D(ρ₁,ρ₁)).
pub fn coulomb_limit(params: &TrialParams) -> Result<f64> {
    let (j1, j2) = limit_integrals(params.a, params.b, params.lambda)?;
    let q = params.nu.charge().abs();
    Ok(limit_prefactor() * params.alpha_c * params.lambda * q.powf(5.0 / 3.0) * (-j1 + 0.5 * j2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub b1: f64,
    pub b2: f64,
    pub x0: f64,
    pub z1_tilde: f64,
    pub c: f64,
    pub kappa: f64,
    pub coulomb_norm_nu: f64,
}

pub fn thresholds_and_constants(params: &TrialParams) -> Result<Thresholds> {
    params.check_model()?;
    let (a, b, lam, al) = (params.a, params.b, params.lambda, params.alpha_c);
    let q = params.nu.charge().abs();
    let m1 = params.nu.first_moment();
    let p = |base: f64, e: f64| base.powf(e);
    let b1 = p(2.0, 28.0 / 3.0) / 9.0 * p(PI, -0.5) * a.powi(3) * b * b * m1 * lam * p(q, -4.0 / 3.0)
        + p(2.0, 4.0 / 3.0) / 3.0 * 7.0 * p(PI, 31.0 / 6.0) * a.powi(3) * b * b * lam * p(q, -4.0 / 3.0)
        + p(2.0, 51.0 / 6.0) / 27.0 * 7.0 / PI * a.powi(6) * b * b * lam * p(q, -1.0 / 3.0);
    let b2 = p(2.0, 37.0 / 6.0) * p(3.0, -1.0 / 3.0) * p(PI, 4.0 / 3.0) * a.powi(3) * (1.0 + lam * lam).sqrt() / lam.powi(4) / al * p(q, -2.0 / 3.0)
        + p(2.0, 31.0 / 6.0) * p(3.0, -11.0 / 3.0) * 49.0 * p(PI, -7.0 / 6.0) * a.powi(6) * b.powi(3) * lam * lam * p(q, -2.0 / 3.0);
    // B₁/(2B₂)(√(1 + 2B₂/B₁²) − 1), rewritten without the cancellation.
    let x0 = 1.0 / (b1 + (b1 * b1 + 2.0 * b2).sqrt());
    let z1_tilde = x0.powi(-3).max(validity_threshold() / q);
    let c1 = constants::closed_form_constants().c1;
    let norm = params.nu.coulomb_norm()?;
    let z23 = z1_tilde.powf(2.0 / 3.0);
    let c = ((1.0 + c1 * lam * p(q, 5.0 / 3.0) / (params.c_lambda * norm) * z23).sqrt() - 1.0).powi(2) / z23;
    let kappa = constants::constants().a * c;
    Ok(Thresholds { b1, b2, x0, z1_tilde, c, kappa, coulomb_norm_nu: norm })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairBound {
    pub value: f64,
    /// False below Z̃₁, where the bound is not established and `value` is 0.
    pub valid: bool,
}

/// 1 − e^{−κZ^{2/3}} for Z > Z̃₁.
pub fn pair_probability_lower_bound(z: f64, params: &TrialParams) -> Result<PairBound> {
    let th = thresholds_and_constants(params)?;
    Ok(pair_bound_from(z, &th))
}

pub fn pair_bound_from(z: f64, th: &Thresholds) -> PairBound {
    if z > th.z1_tilde {
        PairBound { value: -(-th.kappa * z.powf(2.0 / 3.0)).exp_m1(), valid: true }
    } else {
        PairBound { value: 0.0, valid: false }
    }
}

/// C·Z^{2/3}, lower bound on tr(Q₊₊ − Q₋₋) for Z > Z̃₁.
pub fn number_lower_bound(z: f64, th: &Thresholds) -> Option<f64> {
    (z > th.z1_tilde).then(|| th.c * z.powf(2.0 / 3.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBounds {
    pub upper: Option<f64>,
    pub lower: f64,
    /// −(3/4)α(8πε)^{1/3}, the bound on the scaled problem at ε = Λ³/(6π²Z).
    pub tilde_lower: f64,
    pub epsilon: f64,
    pub notice: Option<String>,
}

impl EnergyBounds {
    /// −upper/(αΛ|q|^{5/3}Z^{5/3}).
    pub fn upper_ratio(&self, z: f64, alpha_c: f64, lambda: f64, q: f64) -> Option<f64> {
        self.upper.map(|u| -u / (alpha_c * lambda * q.abs().powf(5.0 / 3.0) * z.powf(5.0 / 3.0)))
    }
}

pub fn energy_bounds(z: f64, alpha_c: f64, lambda: f64, nu: &ExternalDensity) -> Result<EnergyBounds> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::argument("Z", "finite and > 0", z));
    }
    let params = TrialParams::optimal(z, alpha_c, lambda, nu.clone(), 1.0);
    params.check_model()?;
    let c2 = constants::closed_form_constants().c2;
    let epsilon = lambda.powi(3) / (6.0 * PI * PI) / z;
    let tilde_lower = -0.75 * alpha_c * (8.0 * PI * epsilon).powf(1.0 / 3.0);
    let (upper, notice) = if params.trial_state_exists() {
        (Some(trial_energy_breakdown(&params)?.upper_bound_ez), None)
    } else {
        (None, Some(format!("Z = {z} is below the trial-state threshold; upper bound omitted")))
    };
    Ok(EnergyBounds {
        upper,
        lower: -c2 * alpha_c * lambda * z.powf(5.0 / 3.0),
        tilde_lower,
        epsilon,
        notice,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySup {
    pub sup: f64,
    pub bound: f64,
    pub pass: bool,
}

/// ρ₁(x) = (2π)^{−3/2} 4π ∫ ρ̂₁(k) k² sinc(k|x|) dk.
pub fn trial_density_real(params: &TrialParams, x: f64) -> Result<f64> {
    let kmax = params.support();
    let r = integrate(
        |k| trial_density_fourier(params, k) * k * k * sinc(k * x),
        0.0,
        kmax,
        QuadOptions { abs_tol: 1e-15, ..Default::default() },
    )?;
    Ok(FOURIER_NORM * 4.0 * PI * r.value)
}

/// sup|ρ₁| on a radial grid against Λ³/(6π²).
pub fn density_sup_check(params: &TrialParams) -> Result<DensitySup> {
    params.validate()?;
    let scale = 1.0 / params.support();
    let mut sup: f64 = 0.0;
    for j in 0..=400 {
        let x = 40.0 * scale * j as f64 / 400.0;
        sup = sup.max(trial_density_real(params, x)?.abs());
    }
    let bound = params.lambda.powi(3) / (6.0 * PI * PI);
    Ok(DensitySup { sup, bound, pass: sup <= bound + 1e-8 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRow {
    pub z: f64,
    pub e_upper: Option<f64>,
    pub e_lower: f64,
    pub n_lower: Option<f64>,
    pub pz_lower: Option<f64>,
    pub below_threshold: bool,
}

/// One row per Z: energy bounds, number bound and pair-probability bound.
pub fn energy_table(model: &TrialParams, z_grid: &[f64]) -> Result<(Thresholds, Vec<EnergyRow>)> {
    model.check_model()?;
    let th = thresholds_and_constants(model)?;
    let c2 = constants::closed_form_constants().c2;
    let mut rows = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let p = model.with_z(z);
        let e_upper = if p.trial_state_exists() { Some(trial_energy_breakdown(&p)?.upper_bound_ez) } else { None };
        let below = z <= th.z1_tilde;
        rows.push(EnergyRow {
            z,
            e_upper,
            e_lower: -c2 * model.alpha_c * model.lambda * z.powf(5.0 / 3.0),
            n_lower: number_lower_bound(z, &th),
            pz_lower: (!below).then(|| pair_bound_from(z, &th).value),
            below_threshold: below,
        });
    }
    Ok((th, rows))
}
