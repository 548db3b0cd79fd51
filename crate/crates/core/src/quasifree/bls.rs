//! Diagonalization of Γ(γ, α) by a Bogoliubov map.
//!
//! In the frame where J is plain conjugation, Γ' = [[γ, B], [B*, 1 − γ̄]]
//! satisfies SΓ'S = 1 − Γ' for S(x, y) = (ȳ, x̄). Eigenvectors with eigenvalue
//! below 1/2 give quasi-particle vectors w_k = (x_k, y_k) directly; the
//! eigenspace at exactly 1/2 is S-invariant and is split by building an
//! S-real orthonormal basis r_j (S r_j = r_j) and pairing
//! w = (r_{2j} + i r_{2j+1})/√2, whose S-image is orthogonal to it.

use serde::Serialize;

use super::QuasiFreeSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, block2, c, CMatrix, CVector, I};
use crate::tolerances::Tolerances;

/// Quasi-particle data in the J = conj frame.
#[derive(Debug, Clone)]
pub(crate) struct ReducedDiag {
    pub d: Vec<f64>,
    /// Columns x_k.
    pub x: CMatrix,
    /// Columns y_k.
    pub y: CMatrix,
}

fn particle_hole(v: &CVector, n: usize) -> CVector {
    let mut out = CVector::zeros(2 * n);
    for i in 0..n {
        out[i] = v[n + i].conj();
        out[n + i] = v[i].conj();
    }
    out
}

pub(crate) fn reduced_diagonalization(gamma: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<ReducedDiag> {
    let n = gamma.nrows();
    let big = block2(gamma, b, &b.adjoint(), &(linalg::identity(n) - linalg::conj(gamma)));
    let (w, v) = linalg::eigh(&big);

    let mut chosen: Vec<CVector> = Vec::with_capacity(n);
    let mut half: Vec<CVector> = Vec::new();
    for (i, &l) in w.iter().enumerate() {
        if l < 0.5 - tol.degeneracy {
            chosen.push(v.column(i).into_owned());
        } else if l <= 0.5 + tol.degeneracy {
            half.push(v.column(i).into_owned());
        }
    }
    if half.len() % 2 == 1 || chosen.len() + half.len() / 2 != n {
        return Err(Error::Convergence {
            what: "particle-hole pairing of the spectrum of Gamma",
            achieved: (chosen.len() as f64 - (n as f64 - half.len() as f64 / 2.0)).abs(),
        });
    }

    if !half.is_empty() {
        let mut real: Vec<CVector> = Vec::with_capacity(half.len());
        for e in &half {
            let se = particle_hole(e, n);
            for cand in [e + &se, (e - &se) * I] {
                let mut r = cand;
                for _ in 0..2 {
                    for q in &real {
                        // ⟨q, r⟩ is real for S-real q and r, so S-reality survives.
                        let p = q.dotc(&r).re;
                        r -= q * c(p, 0.0);
                    }
                }
                let nr = r.norm();
                if nr > 1e-6 && real.len() < half.len() {
                    real.push(r / c(nr, 0.0));
                }
            }
        }
        if real.len() != half.len() {
            return Err(Error::Convergence {
                what: "S-real basis of the 1/2 eigenspace",
                achieved: (half.len() - real.len()) as f64,
            });
        }
        let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        for pair in real.chunks(2) {
            chosen.push((&pair[0] + &pair[1] * I) * s);
        }
    }

    let wmat = CMatrix::from_columns(&chosen);
    let d = (0..n)
        .map(|k| {
            let wk = wmat.column(k);
            (wk.adjoint() * &big * wk)[(0, 0)].re
        })
        .collect();
    Ok(ReducedDiag {
        d,
        x: wmat.rows(0, n).into_owned(),
        y: wmat.rows(n, n).into_owned(),
    })
}

/// 𝒱 = [[U, J*VJ*], [V, JUJ*]] with 𝒱Γ(γ, α)𝒱* = Γ(D, 0).
#[derive(Debug, Clone, Serialize)]
pub struct BogoliubovDiag {
    pub d: Vec<f64>,
    #[serde(skip)]
    pub u: CMatrix,
    #[serde(skip)]
    pub v: CMatrix,
    #[serde(skip)]
    pub bogoliubov: CMatrix,
    pub tr_vv: f64,
}

impl BogoliubovDiag {
    pub fn tr_d(&self) -> f64 {
        self.d.iter().sum()
    }

    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.bogoliubov)
    }

    /// max |𝒱Γ𝒱* − Γ(D, 0)|.
    pub fn conjugation_defect(&self, spec: &QuasiFreeSpec) -> f64 {
        let n = spec.n_modes();
        let k = &spec.j_unitary;
        let dm = linalg::real_diag(&self.d);
        let target = linalg::block_diag(&dm, &(linalg::identity(n) - k * &dm * k.adjoint()));
        let got = &self.bogoliubov * spec.gamma_block() * self.bogoliubov.adjoint();
        linalg::max_abs(&(got - target))
    }
}

pub fn bls_diagonalize(spec: &QuasiFreeSpec) -> Result<BogoliubovDiag> {
    let tol = Tolerances::default();
    spec.require_valid(&tol)?;
    let r = reduced_diagonalization(&spec.gamma, &spec.pairing_form(), &tol)?;
    let k = &spec.j_unitary;
    // Reduced frame: U = X*, V = Yᵀ. Back in the original frame V picks up K.
    let u = r.x.adjoint();
    let v_red = r.y.transpose();
    let v = k * &v_red;
    let top = block2(&u, &(linalg::conj(&v_red) * k.adjoint()), &v, &(k * linalg::conj(&u) * k.adjoint()));
    let tr_vv = r.y.iter().map(|z| z.norm_sqr()).sum();
    Ok(BogoliubovDiag {
        d: r.d,
        u,
        v,
        bogoliubov: top,
        tr_vv,
    })
}
