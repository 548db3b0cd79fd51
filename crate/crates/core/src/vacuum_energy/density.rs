use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// (2π)^{−3/2}
pub const FOURIER_NORM: f64 = 0.063_493_635_934_240_97;

/// 3(sin x − x cos x)/x³, the normalized transform of a ball indicator (1 at x = 0).
pub fn ball_shape(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0
    } else {
        3.0 * (x.sin() - x * x.cos()) / (x * x * x)
    }
}

/// sin(x)/x
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Radial profile of the external density, as accepted in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityProfile {
    /// Uniform charge on the ball of radius `radius`.
    UniformBall {
        radius: f64,
        #[serde(default = "plus_one")]
        charge_sign: f64,
    },
    /// Isotropic Gaussian with standard deviation `sigma` per coordinate.
    Gaussian {
        sigma: f64,
        #[serde(default = "plus_one")]
        charge_sign: f64,
    },
    /// Values `values[i]` at radii `r[i]` (ascending), rescaled so ∫|ν| = 1.
    Tabulated { r: Vec<f64>, values: Vec<f64> },
}

fn plus_one() -> f64 {
    1.0
}

/// Radial external density ν with ∫|ν| = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityProfile", into = "DensityProfile")]
pub struct ExternalDensity {
    profile: DensityProfile,
    /// Rescaling applied to tabulated values.
    scale: f64,
    q: f64,
    first_moment: f64,
}

impl From<ExternalDensity> for DensityProfile {
    fn from(d: ExternalDensity) -> Self {
        d.profile
    }
}

impl TryFrom<DensityProfile> for ExternalDensity {
    type Error = Error;
    fn try_from(p: DensityProfile) -> Result<Self> {
        ExternalDensity::new(p)
    }
}

fn trapezoid(x: &[f64], y: impl Fn(usize) -> f64) -> f64 {
    (1..x.len()).map(|i| 0.5 * (x[i] - x[i - 1]) * (y(i) + y(i - 1))).sum()
}

impl ExternalDensity {
    pub fn new(profile: DensityProfile) -> Result<Self> {
        let sign_ok = |s: f64| {
            if s == 1.0 || s == -1.0 {
                Ok(s)
            } else {
                Err(Error::argument("charge_sign", "+1 or -1", s))
            }
        };
        let (scale, q, first_moment) = match &profile {
            DensityProfile::UniformBall { radius, charge_sign } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::argument("radius", "finite and > 0", *radius));
                }
                (1.0, sign_ok(*charge_sign)?, 0.75 * radius)
            }
            DensityProfile::Gaussian { sigma, charge_sign } => {
                if !(*sigma > 0.0) || !sigma.is_finite() {
                    return Err(Error::argument("sigma", "finite and > 0", *sigma));
                }
                (1.0, sign_ok(*charge_sign)?, sigma * (8.0 / PI).sqrt())
            }
            DensityProfile::Tabulated { r, values } => {
                if r.len() != values.len() || r.len() < 2 {
                    return Err(Error::Config("tabulated density needs matching r/values of length >= 2".into()));
                }
                if r.windows(2).any(|w| !(w[1] > w[0])) || r[0] < 0.0 {
                    return Err(Error::Config("tabulated radii must be non-negative and strictly ascending".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config("tabulated density values must be finite".into()));
                }
                let abs = 4.0 * PI * trapezoid(r, |i| values[i].abs() * r[i] * r[i]);
                if !(abs > 0.0) {
                    return Err(Error::Config("tabulated density vanishes identically".into()));
                }
                let s = 1.0 / abs;
                let q = 4.0 * PI * s * trapezoid(r, |i| values[i] * r[i] * r[i]);
                let m1 = 4.0 * PI * s * trapezoid(r, |i| values[i].abs() * r[i].powi(3));
                (s, q, m1)
            }
        };
        if q.abs() < 1e-12 {
            return Err(Error::Config("total charge q = 0 is not supported".into()));
        }
        Ok(Self { profile, scale, q, first_moment })
    }

    pub fn uniform_ball(radius: f64) -> Result<Self> {
        Self::new(DensityProfile::UniformBall { radius, charge_sign: 1.0 })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(DensityProfile::Gaussian { sigma, charge_sign: 1.0 })
    }

    pub fn profile(&self) -> &DensityProfile {
        &self.profile
    }

    /// q = ∫ν
    pub fn charge(&self) -> f64 {
        self.q
    }

    /// ∫|x||ν(x)| dx
    pub fn first_moment(&self) -> f64 {
        self.first_moment
    }

    /// ν(|x|) in real space.
    pub fn value(&self, r: f64) -> f64 {
        match &self.profile {
            DensityProfile::UniformBall { radius, charge_sign } => {
                if r <= *radius {
                    charge_sign * 3.0 / (4.0 * PI * radius.powi(3))
                } else {
                    0.0
                }
            }
            DensityProfile::Gaussian { sigma, charge_sign } => {
                charge_sign * (2.0 * PI * sigma * sigma).powf(-1.5) * (-r * r / (2.0 * sigma * sigma)).exp()
            }
            DensityProfile::Tabulated { r: grid, values } => {
                if r < grid[0] || r > *grid.last().unwrap() {
                    return 0.0;
                }
                let i = grid.partition_point(|&x| x <= r).clamp(1, grid.len() - 1);
                let t = (r - grid[i - 1]) / (grid[i] - grid[i - 1]);
                self.scale * (values[i - 1] * (1.0 - t) + values[i] * t)
            }
        }
    }

    /// ν̂(|k|) = (2π)^{−3/2} ∫ ν(x) e^{−ik·x} dx.
    pub fn fourier(&self, k: f64) -> f64 {
        match &self.profile {
            DensityProfile::UniformBall { radius, charge_sign } => charge_sign * FOURIER_NORM * ball_shape(k * radius),
            DensityProfile::Gaussian { sigma, charge_sign } => {
                charge_sign * FOURIER_NORM * (-0.5 * sigma * sigma * k * k).exp()
            }
            DensityProfile::Tabulated { r, values } => {
                FOURIER_NORM * 4.0 * PI * self.scale * trapezoid(r, |i| values[i] * r[i] * r[i] * sinc(k * r[i]))
            }
        }
    }

    /// ‖ν‖_𝒞 = D(ν, ν)^{1/2}.
    pub fn coulomb_norm(&self) -> Result<f64> {
        let d = super::coulomb_pairing(|k| self.fourier(k), |k| self.fourier(k), f64::INFINITY)?;
        Ok(d.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let b = ExternalDensity::uniform_ball(2.0).unwrap();
        assert_eq!((b.charge(), b.first_moment()), (1.0, 1.5));
        assert!((b.fourier(0.0) - FOURIER_NORM).abs() < 1e-17);
        let g = ExternalDensity::gaussian(1.0).unwrap();
        assert!((g.first_moment() - (8.0 / PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tabulated_matches_ball() {
        let radius = 1.0;
        let n = 20001;
        let r: Vec<f64> = (0..n).map(|i| 1.2 * i as f64 / (n - 1) as f64).collect();
        let values: Vec<f64> = r.iter().map(|&x| if x <= radius { 5.0 } else { 0.0 }).collect();
        let t = ExternalDensity::new(DensityProfile::Tabulated { r, values }).unwrap();
        let b = ExternalDensity::uniform_ball(radius).unwrap();
        assert!((t.charge() - 1.0).abs() < 1e-12);
        assert!((t.first_moment() - 0.75).abs() < 1e-3);
        for k in [0.0, 0.5, 2.0] {
            assert!((t.fourier(k) - b.fourier(k)).abs() < 1e-4);
        }
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(ExternalDensity::uniform_ball(-1.0).is_err());
        assert!(ExternalDensity::new(DensityProfile::Gaussian { sigma: 1.0, charge_sign: 0.5 }).is_err());
        let zero_charge = DensityProfile::Tabulated { r: vec![1.0, 2.0], values: vec![4.0, -1.0] };
        assert!(ExternalDensity::new(zero_charge).is_err());
    }

    #[test]
    fn serde_shape() {
        let d: ExternalDensity = serde_json::from_str(r#"{"kind":"uniform_ball","radius":1.0}"#).unwrap();
        assert_eq!(d.charge(), 1.0);
        assert!(serde_json::from_str::<ExternalDensity>(r#"{"kind":"gaussian","sigma":-1.0}"#).is_err());
    }
}
