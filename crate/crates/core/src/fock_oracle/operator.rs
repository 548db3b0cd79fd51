use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::basis::{annihilate, create, FockBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, MatrixJson, C64};

/// Dense operator on a Fock space, in the occupation-mask basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct DenseOperator {
    m: CMatrix,
}

impl DenseOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Config("operator entries must be finite".into()));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: CMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: CMatrix::zeros(dim, dim) }
    }

    pub fn diagonal(values: impl IntoIterator<Item = C64>) -> Self {
        let v: Vec<C64> = values.into_iter().collect();
        Self {
            m: CMatrix::from_diagonal(&linalg::CVector::from_vec(v)),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { m: &self.m * z }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self {
            m: &self.m * &other.m + &other.m * &self.m,
        }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.m)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        linalg::unitarity_defect(&self.m) <= tol
    }

    /// Largest entry of `self − other` in absolute value.
    pub fn distance(&self, other: &Self) -> f64 {
        linalg::max_abs(&(&self.m - &other.m))
    }

    pub fn to_json(&self) -> String {
        linalg::matrix_to_json(&self.m)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::new(linalg::matrix_from_json(s)?)
    }
}

impl TryFrom<MatrixJson> for DenseOperator {
    type Error = Error;
    fn try_from(js: MatrixJson) -> Result<Self> {
        Self::new(CMatrix::try_from(&js)?)
    }
}

impl From<DenseOperator> for MatrixJson {
    fn from(op: DenseOperator) -> Self {
        MatrixJson::from(&op.m)
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: Self) -> DenseOperator {
        DenseOperator { m: &self.m * &rhs.m }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: Self) -> DenseOperator {
        DenseOperator { m: &self.m + &rhs.m }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: Self) -> DenseOperator {
        DenseOperator { m: &self.m - &rhs.m }
    }
}

/// The pair (a†_i, a_i) as dense matrices.
pub fn mode_operators(basis: &FockBasis, i: usize) -> Result<(DenseOperator, DenseOperator)> {
    basis.check_mode(i)?;
    let dim = basis.dim();
    let mut cr = CMatrix::zeros(dim, dim);
    for m in 0..dim {
        if let Some((s, out)) = create(m, i) {
            cr[(out, m)] = c(s, 0.0);
        }
    }
    let an = cr.adjoint();
    debug_assert!((0..dim).all(|m| annihilate(m, i).is_none_or(|(s, o)| an[(o, m)].re == s)));
    Ok((DenseOperator { m: cr }, DenseOperator { m: an }))
}

pub fn number_operator(basis: &FockBasis) -> DenseOperator {
    DenseOperator::diagonal((0..basis.dim()).map(|m| c(FockBasis::sector(m) as f64, 0.0)))
}

/// e^{−β𝒩}, diagonal on the particle-number sectors.
pub fn exp_number(basis: &FockBasis, beta: f64) -> DenseOperator {
    DenseOperator::diagonal(
        (0..basis.dim()).map(|m| c((-beta * FockBasis::sector(m) as f64).exp(), 0.0)),
    )
}

pub fn sector_projector(basis: &FockBasis, k: usize) -> DenseOperator {
    DenseOperator::diagonal((0..basis.dim()).map(|m| {
        c(if FockBasis::sector(m) == k { 1.0 } else { 0.0 }, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode() {
        let b = FockBasis::new(1).unwrap();
        let (cr, an) = mode_operators(&b, 0).unwrap();
        assert_eq!(cr.matrix()[(1, 0)], c(1.0, 0.0));
        assert_eq!(an.matrix()[(0, 1)], c(1.0, 0.0));
        assert!(mode_operators(&b, 1).is_err());
    }

    #[test]
    fn car_three_modes() {
        let b = FockBasis::new(3).unwrap();
        let ops: Vec<_> = (0..3).map(|i| mode_operators(&b, i).unwrap()).collect();
        let id = DenseOperator::identity(8);
        for i in 0..3 {
            for j in 0..3 {
                let ac = ops[i].1.anticommutator(&ops[j].0);
                let want = if i == j { id.clone() } else { DenseOperator::zeros(8) };
                assert!(ac.distance(&want) < 1e-12);
                assert!(ops[i].1.anticommutator(&ops[j].1).distance(&DenseOperator::zeros(8)) < 1e-12);
            }
        }
    }

    #[test]
    fn json_format() {
        let op = DenseOperator::identity(2);
        let s = serde_json::to_string(&op).unwrap();
        assert_eq!(s, r#"{"dim":2,"entries":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[1.0,0.0]]}"#);
        assert_eq!(DenseOperator::from_json(&s).unwrap(), op);
    }
}
