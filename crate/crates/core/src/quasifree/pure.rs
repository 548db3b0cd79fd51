use serde::Serialize;

use super::hf::occupations;
use super::QuasiFreeSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, ZERO};
use crate::tolerances::Tolerances;

/// ω(e^{−β𝒩}) = det √(1 + (e^{−2β} − 1)γ) for a pure quasi-free state.
pub fn pure_hfb_generating_function(spec: &QuasiFreeSpec, beta: f64) -> Result<f64> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::argument("beta", "finite and >= 0", beta));
    }
    let tol = Tolerances::default();
    spec.require_pure(&tol)?;
    let t = (-2.0 * beta).exp_m1();
    Ok(occupations(&spec.gamma, &tol)?
        .iter()
        .map(|l| (1.0 + t * l).max(0.0).sqrt())
        .product())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityStructure {
    pub k0: usize,
    /// Sectors k ≤ n with k < k₀ or k − k₀ odd.
    pub forbidden: Vec<usize>,
}

pub fn pure_hfb_k0_parity(spec: &QuasiFreeSpec) -> Result<ParityStructure> {
    let tol = Tolerances::default();
    spec.require_pure(&tol)?;
    let k0 = super::hf::filled_modes(&spec.gamma, &tol);
    let forbidden = (0..=spec.n_modes())
        .filter(|&k| k < k0 || (k - k0) % 2 == 1)
        .collect();
    Ok(ParityStructure { k0, forbidden })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairBlock {
    pub lambda: f64,
    pub alpha: f64,
}

/// Simultaneous block form of a pure state: `k0` filled modes, 2×2 paired
/// blocks, and empty modes.
///
/// Columns of `frame` are ordered as the filled modes, then (f_i, g_i) for
/// each pair, then the empty modes. In that frame γ is diagonal and the
/// pairing form has B'[f_i, g_i] = α_i = −B'[g_i, f_i].
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalBlocks {
    pub k0: usize,
    pub pairs: Vec<PairBlock>,
    pub frame: CMatrix,
}

impl CanonicalBlocks {
    /// (γ, B) in the frame's own basis.
    pub fn block_matrices(&self) -> (CMatrix, CMatrix) {
        let n = self.frame.nrows();
        let mut g = CMatrix::zeros(n, n);
        let mut b = CMatrix::zeros(n, n);
        for i in 0..self.k0 {
            g[(i, i)] = c(1.0, 0.0);
        }
        for (p, blk) in self.pairs.iter().enumerate() {
            let (f, h) = (self.k0 + 2 * p, self.k0 + 2 * p + 1);
            g[(f, f)] = c(blk.lambda, 0.0);
            g[(h, h)] = c(blk.lambda, 0.0);
            b[(f, h)] = c(blk.alpha, 0.0);
            b[(h, f)] = c(-blk.alpha, 0.0);
        }
        (g, b)
    }

    /// (γ, B) back in the mode basis: γ = F γ' F*, B = F B' Fᵀ.
    pub fn reassemble(&self) -> (CMatrix, CMatrix) {
        let (g, b) = self.block_matrices();
        let f = &self.frame;
        (f * g * f.adjoint(), f * b * f.transpose())
    }
}

pub fn pure_hfb_canonical_form(spec: &QuasiFreeSpec) -> Result<CanonicalBlocks> {
    let tol = Tolerances::default();
    spec.require_pure(&tol)?;
    let n = spec.n_modes();
    let b = spec.pairing_form();
    let (lam, vecs) = linalg::eigh(&spec.gamma);

    // Clusters of (numerically) equal eigenvalues.
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &l) in lam.iter().enumerate() {
        match clusters.last_mut() {
            Some((_, idx)) if (l - lam[*idx.last().unwrap()]).abs() <= 1e-8 => idx.push(i),
            _ => clusters.push((l, vec![i])),
        }
    }

    let mut filled = Vec::new();
    let mut empty = Vec::new();
    let mut paired: Vec<(PairBlock, CVector, CVector)> = Vec::new();
    for (_, idx) in &clusters {
        let l = idx.iter().map(|&i| lam[i]).sum::<f64>() / idx.len() as f64;
        let e = CMatrix::from_columns(&idx.iter().map(|&i| vecs.column(i)).collect::<Vec<_>>());
        if (1.0 - l).abs() <= tol.filled {
            filled.extend(e.column_iter().map(|col| col.into_owned()));
            continue;
        }
        if l.abs() <= tol.filled {
            empty.extend(e.column_iter().map(|col| col.into_owned()));
            continue;
        }
        if idx.len() % 2 == 1 {
            return Err(Error::Convergence {
                what: "pairing of an odd-dimensional eigenspace",
                achieved: l,
            });
        }
        let cm = e.adjoint() * &b * linalg::conj(&e);
        for (u, r, a) in antisymmetric_takagi(&cm)? {
            paired.push((PairBlock { lambda: l, alpha: a }, &e * u, &e * r));
        }
    }

    let k0 = filled.len();
    let mut cols = filled;
    for (_, f, g) in &paired {
        cols.push(f.clone());
        cols.push(g.clone());
    }
    cols.extend(empty);
    let frame = CMatrix::from_columns(&cols);
    debug_assert_eq!(frame.ncols(), n);
    Ok(CanonicalBlocks {
        k0,
        pairs: paired.into_iter().map(|(p, _, _)| p).collect(),
        frame,
    })
}

/// Normal form C = Σ α_i (u_i r_iᵀ − r_i u_iᵀ) of an antisymmetric C with
/// C C* proportional to the identity.
fn antisymmetric_takagi(cm: &CMatrix) -> Result<Vec<(CVector, CVector, f64)>> {
    let m = cm.nrows();
    let mut basis: Vec<CVector> = Vec::new();
    let mut out = Vec::new();
    let ch = cm.adjoint();
    for seed in 0..m {
        if basis.len() == m {
            break;
        }
        let mut u = CVector::from_fn(m, |i, _| if i == seed { c(1.0, 0.0) } else { ZERO });
        for _ in 0..2 {
            for v in &basis {
                let p = v.dotc(&u);
                u -= v * p;
            }
        }
        let nu = u.norm();
        if nu < 1e-6 {
            continue;
        }
        u /= c(nu, 0.0);
        let cu = &ch * &u;
        let a = cu.norm();
        if a < 1e-12 {
            return Err(Error::Convergence {
                what: "pair block extraction",
                achieved: a,
            });
        }
        let r = linalg::conj_vec(&cu) / c(a, 0.0);
        basis.push(u.clone());
        basis.push(r.clone());
        out.push((u, r, a));
    }
    if basis.len() != m {
        return Err(Error::Convergence {
            what: "pair block extraction",
            achieved: (m - basis.len()) as f64,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, real_diag};

    fn pair_spec(l: f64) -> QuasiFreeSpec {
        let s = (l - l * l).sqrt();
        let b = CMatrix::from_row_slice(2, 2, &[ZERO, c(s, 0.0), c(-s, 0.0), ZERO]);
        QuasiFreeSpec::with_pairing_form(real_diag(&[l, l]), b).unwrap()
    }

    #[test]
    fn examples() {
        let z = pure_hfb_canonical_form(&QuasiFreeSpec::hf(CMatrix::zeros(2, 2))).unwrap();
        assert_eq!((z.k0, z.pairs.len()), (0, 0));
        let f = pure_hfb_canonical_form(&QuasiFreeSpec::hf(real_diag(&[1.0]))).unwrap();
        assert_eq!((f.k0, f.pairs.len()), (1, 0));
        let p = pure_hfb_canonical_form(&pair_spec(0.5)).unwrap();
        assert_eq!(p.k0, 0);
        assert_eq!(p.pairs.len(), 1);
        assert!((p.pairs[0].lambda - 0.5).abs() < 1e-12 && (p.pairs[0].alpha - 0.5).abs() < 1e-12);
        let spec = pair_spec(0.5);
        let (g, b) = p.reassemble();
        assert!(max_abs(&(g - &spec.gamma)) < 1e-12 && max_abs(&(b - spec.pairing_form())) < 1e-12);
    }

    #[test]
    fn mixed_rejected() {
        assert!(matches!(
            pure_hfb_canonical_form(&QuasiFreeSpec::hf(real_diag(&[0.3]))),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn generating_function_values() {
        let g = pure_hfb_generating_function(&pair_spec(0.5), 2f64.ln()).unwrap();
        assert!((g - 0.625).abs() < 1e-12);
        let g = pure_hfb_generating_function(&QuasiFreeSpec::hf(CMatrix::zeros(2, 2)), 1.0).unwrap();
        assert_eq!(g, 1.0);
        let par = pure_hfb_k0_parity(&QuasiFreeSpec::hf(real_diag(&[1.0, 1.0]))).unwrap();
        assert_eq!(par.k0, 2);
        assert_eq!(par.forbidden, vec![0, 1]);
    }
}
