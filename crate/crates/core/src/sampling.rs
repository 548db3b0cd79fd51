//! Seeded random instances for the property suites. All generators draw from
//! `ChaCha8Rng`, so a seed reproduces an instance on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{self, block2, c, CMatrix, CVector, C64};
use crate::quasifree::QuasiFreeSpec;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c64(rng: &mut SuiteRng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector(rng: &mut SuiteRng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| gaussian_c64(rng))
}

pub fn random_matrix(rng: &mut SuiteRng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian_c64(rng))
}

pub fn random_hermitian(rng: &mut SuiteRng, n: usize) -> CMatrix {
    linalg::hermitian_part(&random_matrix(rng, n))
}

pub fn random_antisymmetric(rng: &mut SuiteRng, n: usize) -> CMatrix {
    let m = random_matrix(rng, n);
    (&m - m.transpose()) * c(0.5, 0.0)
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary(rng: &mut SuiteRng, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = random_matrix(rng, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

/// Occupations in [0, 1], with exact 0s and 1s mixed in now and then.
pub fn random_occupations(rng: &mut SuiteRng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| match rng.random_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        })
        .collect()
}

/// Random HF 1-pdm U diag(λ) U*.
pub fn random_hf_gamma(rng: &mut SuiteRng, n: usize) -> CMatrix {
    let lam = random_occupations(rng, n);
    let u = random_unitary(rng, n);
    &u * linalg::real_diag(&lam) * u.adjoint()
}

/// Random Bogoliubov map 𝒱 = exp(i h) in the J = conj frame, with
/// h = [[A, C], [C*, −Ā]] (A Hermitian, C antisymmetric) so that 𝒱 commutes
/// with the particle-hole map.
pub fn random_bogoliubov(rng: &mut SuiteRng, n: usize, scale: f64) -> CMatrix {
    let a = random_hermitian(rng, n) * c(scale, 0.0);
    let cm = random_antisymmetric(rng, n) * c(scale, 0.0);
    let h = block2(&a, &cm, &cm.adjoint(), &(-linalg::conj(&a)));
    linalg::expi_hermitian(&h)
}

/// Spec with Γ' = 𝒱* diag(D, 1 − D) 𝒱 for a random Bogoliubov map and
/// `d` in [0, 1/2]; the result is a valid quasi-free state by construction.
pub fn spec_from_bogoliubov(v: &CMatrix, d: &[f64]) -> QuasiFreeSpec {
    let n = d.len();
    let dm = linalg::real_diag(d);
    let target = linalg::block_diag(&dm, &(linalg::identity(n) - &dm));
    let g = v.adjoint() * target * v;
    let gamma = linalg::hermitian_part(&g.view((0, 0), (n, n)).into_owned());
    let b = g.view((0, n), (n, n)).into_owned();
    let b = (&b - b.transpose()) * c(0.5, 0.0);
    QuasiFreeSpec::with_pairing_form(gamma, b).expect("square blocks")
}

/// Mixed quasi-free spec with pairing.
pub fn random_mixed_spec(rng: &mut SuiteRng, n: usize) -> QuasiFreeSpec {
    let scale = rng.random_range(0.3..1.5);
    let v = random_bogoliubov(rng, n, scale);
    let d: Vec<f64> = (0..n)
        .map(|_| match rng.random_range(0..8) {
            0 => 0.0,
            1 => 0.5,
            _ => rng.random_range(0.0..0.5),
        })
        .collect();
    spec_from_bogoliubov(&v, &d)
}

/// Pure quasi-free spec (D = 0).
pub fn random_pure_spec(rng: &mut SuiteRng, n: usize) -> QuasiFreeSpec {
    let scale = rng.random_range(0.3..1.5);
    let v = random_bogoliubov(rng, n, scale);
    spec_from_bogoliubov(&v, &vec![0.0; n])
}

/// Spec with a random J: the pairing form is re-expressed as α = B K*.
pub fn with_random_j(rng: &mut SuiteRng, spec: &QuasiFreeSpec) -> QuasiFreeSpec {
    let k = random_unitary(rng, spec.n_modes());
    let alpha = spec.pairing_form() * k.adjoint();
    QuasiFreeSpec::new(spec.gamma.clone(), Some(alpha), k).expect("square blocks")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_valid() {
        let mut r = rng(1);
        for n in 1..5 {
            assert!(linalg::unitarity_defect(&random_unitary(&mut r, n)) < 1e-13);
            assert!(linalg::unitarity_defect(&random_bogoliubov(&mut r, n, 1.0)) < 1e-13);
            let s = random_mixed_spec(&mut r, n);
            assert!(s.validate().valid(), "{:?}", s.validate());
            let p = random_pure_spec(&mut r, n);
            assert!(p.purity_defect() < 1e-12);
            assert!(with_random_j(&mut r, &s).validate().valid());
        }
    }

    #[test]
    fn deterministic() {
        let a = random_mixed_spec(&mut rng(9), 3);
        let b = random_mixed_spec(&mut rng(9), 3);
        assert_eq!(a, b);
    }
}
