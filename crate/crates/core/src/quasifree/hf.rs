use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances::Tolerances;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::argument("beta", "finite and >= 0", beta));
    }
    Ok(())
}

/// Eigenvalues of γ, snapped onto {0, 1} when within `snap`, after checking
/// 0 ≤ γ ≤ 1.
pub(crate) fn occupations(gamma: &CMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let herm = linalg::hermiticity_defect(gamma);
    if herm > tol.identity {
        return Err(Error::Constraint {
            what: "gamma hermitian",
            margin: herm,
        });
    }
    let w = linalg::eigvalsh(gamma);
    let worst = w.iter().fold(0.0f64, |acc, &l| acc.max(-l).max(l - 1.0));
    if worst > tol.identity {
        return Err(Error::Constraint {
            what: "0 <= gamma <= 1",
            margin: worst,
        });
    }
    Ok(w
        .into_iter()
        .map(|l| {
            if l.abs() <= tol.snap {
                0.0
            } else if (1.0 - l).abs() <= tol.snap {
                1.0
            } else {
                l.clamp(0.0, 1.0)
            }
        })
        .collect())
}

/// ω(e^{−β𝒩}) = det(1 + (e^{−β} − 1)γ) for the HF state with 1-pdm γ.
pub fn hf_generating_function(gamma: &CMatrix, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let lam = occupations(gamma, &Tolerances::default())?;
    let t = (-beta).exp_m1();
    Ok(lam.iter().map(|l| 1.0 + t * l).product())
}

/// ω(𝒫_k), k = 0..=n, as the coefficients of ∏(1 − λ_i + λ_i x).
pub fn hf_sector_distribution(gamma: &CMatrix) -> Result<Vec<f64>> {
    let mut lam = occupations(gamma, &Tolerances::default())?;
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok(poly_from_occupations(&lam))
}

pub(crate) fn poly_from_occupations(lam: &[f64]) -> Vec<f64> {
    let mut coef = vec![0.0; lam.len() + 1];
    coef[0] = 1.0;
    for (deg, &l) in lam.iter().enumerate() {
        for k in (0..=deg + 1).rev() {
            let keep = if k <= deg { coef[k] * (1.0 - l) } else { 0.0 };
            let raise = if k > 0 { coef[k - 1] * l } else { 0.0 };
            coef[k] = keep + raise;
        }
    }
    coef
}

/// dim ker(γ − 1), counting eigenvalues within `tol.filled` of 1.
pub fn filled_modes(gamma: &CMatrix, tol: &Tolerances) -> usize {
    linalg::eigvalsh(gamma)
        .iter()
        .filter(|&&l| (1.0 - l).abs() <= tol.filled)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    Hf,
    PureHfb,
}

/// Upper bound on ω(𝒫_k) in terms of tr γ and k₀ = dim ker(γ − 1).
///
/// HF: (e·trγ)^k / k! · e^{−trγ} for k ≥ k₀.
/// Pure HFB: e^{k/2}/ℓ! · (trγ/2)^ℓ · e^{−trγ/2} for k = k₀ + 2ℓ.
/// Sectors that must vanish (k < k₀, or k − k₀ odd in the pure case) return 0.
pub fn sector_tail_bounds(tr_gamma: f64, k0: usize, k: usize, kind: TailKind) -> Result<f64> {
    if !(tr_gamma >= 0.0) || !tr_gamma.is_finite() {
        return Err(Error::argument("tr_gamma", "finite and >= 0", tr_gamma));
    }
    if k < k0 {
        return Ok(0.0);
    }
    // Work in logs so large k does not overflow the factorial.
    let ln_fact = |m: usize| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
    let pow_ln = |base: f64, e: usize| if e == 0 { 0.0 } else { e as f64 * base.ln() };
    Ok(match kind {
        TailKind::Hf => {
            if tr_gamma == 0.0 {
                return Ok(if k == 0 { 1.0 } else { 0.0 });
            }
            (pow_ln(std::f64::consts::E * tr_gamma, k) - ln_fact(k) - tr_gamma).exp()
        }
        TailKind::PureHfb => {
            if (k - k0) % 2 == 1 {
                return Ok(0.0);
            }
            let l = (k - k0) / 2;
            if tr_gamma == 0.0 && l > 0 {
                return Ok(0.0);
            }
            (k as f64 / 2.0 + pow_ln(tr_gamma / 2.0, l) - ln_fact(l) - tr_gamma / 2.0).exp()
        }
    })
}
