use crate::constants;
use crate::error::{Error, Result};

/// e^{−a·trγ}, the vacuum-overlap bound valid for every quasi-free state.
pub fn mixed_vacuum_bound(tr_gamma: f64) -> Result<f64> {
    if !(tr_gamma >= 0.0) || !tr_gamma.is_finite() {
        return Err(Error::argument("tr_gamma", "finite and >= 0", tr_gamma));
    }
    Ok((-constants::constants().a * tr_gamma).exp())
}

/// Coefficients (of tr D, of tr V*V) in the exponent of the interpolated bound.
pub fn interpolation_coefficients(beta: f64, theta: f64) -> (f64, f64) {
    let c_d = theta * (-beta).exp_m1();
    let c_v = theta * (2.0 * beta).exp_m1() / 2.0 - (1.0 - theta) * 3.0 / 8.0;
    (c_d, c_v)
}

/// exp(θ(e^{−β}−1)·trD + [θ(e^{2β}−1)/2 − (1−θ)·3/8]·trV*V).
pub fn interpolated_vacuum_bound(tr_d: f64, tr_vv: f64, beta: f64, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::argument("theta", "in [0, 1]", theta));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::argument("beta", "finite and >= 0", beta));
    }
    for (name, v) in [("tr_d", tr_d), ("tr_vv", tr_vv)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::argument(name, "finite and >= 0", v));
        }
    }
    let (c_d, c_v) = interpolation_coefficients(beta, theta);
    Ok((c_d * tr_d + c_v * tr_vv).exp())
}
