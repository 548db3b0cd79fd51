use super::basis::{jw_sign, FockBasis};
use super::operator::DenseOperator;
use crate::linalg::{CMatrix, CVector, C64, ZERO};

/// Linear field operator `Σ create_i a†_i + Σ annihilate_i a_i`.
///
/// `a*(f)` has `create = f`; `a(g)` has `annihilate = conj(g)`, so that `a(g)`
/// is antilinear in `g` and `a*(f)` linear in `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOperator {
    pub create: CVector,
    pub annihilate: CVector,
}

impl FieldOperator {
    pub fn zero(n: usize) -> Self {
        Self {
            create: CVector::zeros(n),
            annihilate: CVector::zeros(n),
        }
    }

    /// a*(f)
    pub fn creator(f: &CVector) -> Self {
        Self {
            create: f.clone(),
            annihilate: CVector::zeros(f.len()),
        }
    }

    /// a(g)
    pub fn annihilator(g: &CVector) -> Self {
        Self {
            create: CVector::zeros(g.len()),
            annihilate: g.map(|z| z.conj()),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.create.len()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            create: self.annihilate.map(|z| z.conj()),
            annihilate: self.create.map(|z| z.conj()),
        }
    }

    pub fn scaled(&self, z: C64) -> Self {
        Self {
            create: &self.create * z,
            annihilate: &self.annihilate * z,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            create: &self.create + &other.create,
            annihilate: &self.annihilate + &other.annihilate,
        }
    }

    /// The scalar `{A, B}` (anticommutators of linear fields are multiples of Id).
    pub fn anticommutator(&self, other: &Self) -> C64 {
        self.create
            .iter()
            .zip(other.annihilate.iter())
            .chain(self.annihilate.iter().zip(other.create.iter()))
            .map(|(x, y)| x * y)
            .sum()
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let n = self.n_modes();
        debug_assert_eq!(v.len(), 1 << n);
        let mut out = CVector::zeros(v.len());
        for (m, &amp) in v.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            for i in 0..n {
                let bit = 1 << i;
                let s = jw_sign(m, i);
                if m & bit == 0 {
                    let coef = self.create[i];
                    if coef != ZERO {
                        out[m | bit] += coef * amp * s;
                    }
                } else {
                    let coef = self.annihilate[i];
                    if coef != ZERO {
                        out[m ^ bit] += coef * amp * s;
                    }
                }
            }
        }
        out
    }

    pub fn to_dense(&self, basis: &FockBasis) -> DenseOperator {
        let dim = basis.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            for i in 0..basis.n_modes() {
                let bit = 1 << i;
                let s = jw_sign(col, i);
                if col & bit == 0 {
                    m[(col | bit, col)] += self.create[i] * s;
                } else {
                    m[(col ^ bit, col)] += self.annihilate[i] * s;
                }
            }
        }
        DenseOperator::from_matrix_unchecked(m)
    }
}

/// Apply `ops[0] ops[1] ⋯ ops[k−1]` to `v` (rightmost first).
pub fn apply_product(ops: &[FieldOperator], v: &CVector) -> CVector {
    ops.iter().rev().fold(v.clone(), |acc, op| op.apply(&acc))
}
