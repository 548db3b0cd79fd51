//! Product states over disjoint mode blocks, and the signed permutation T
//! identifying ⊗_b 𝓕(block_b) with 𝓕(all modes).

use super::basis::{jw_sign, FockBasis};
use super::operator::DenseOperator;
use super::state::OracleState;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, ZERO};

/// A block of global mode indices together with a state on those modes
/// (local mode `j` of the state is global mode `modes[j]`).
#[derive(Debug, Clone)]
pub struct ModeBlock<'a> {
    pub modes: Vec<usize>,
    pub state: &'a OracleState,
}

/// Block layout with the uncovered modes appended as a final vacuum block.
#[derive(Debug, Clone)]
pub struct TensorLayout {
    pub n_modes: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl TensorLayout {
    pub fn new(n_modes: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n_modes];
        for &m in blocks.iter().flatten() {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange { index: m, n_modes });
            }
            if seen[m] {
                return Err(Error::OverlappingBlocks(m));
            }
            seen[m] = true;
        }
        let mut blocks = blocks;
        let rest: Vec<usize> = (0..n_modes).filter(|&m| !seen[m]).collect();
        if !rest.is_empty() {
            blocks.push(rest);
        }
        Ok(Self { n_modes, blocks })
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for b in &self.blocks {
            off.push(acc);
            acc += b.len();
        }
        off
    }

    /// Local masks of each block packed into one tensor index, block 0 in the low bits.
    pub fn split(&self, t: usize) -> Vec<usize> {
        self.offsets()
            .iter()
            .zip(&self.blocks)
            .map(|(&o, b)| (t >> o) & ((1 << b.len()) - 1))
            .collect()
    }

    /// T|t⟩ = sign |global mask⟩, where the tensor vector |m_0⟩⊗|m_1⟩⊗⋯ is the
    /// product of the blocks' creation monomials taken block by block.
    pub fn to_global(&self, t: usize) -> (f64, usize) {
        let locals = self.split(t);
        let mut order = Vec::new();
        for (b, &m) in self.blocks.iter().zip(&locals) {
            for (j, &g) in b.iter().enumerate() {
                if m >> j & 1 == 1 {
                    order.push(g);
                }
            }
        }
        let mut inversions = 0;
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if order[i] > order[j] {
                    inversions += 1;
                }
            }
        }
        let mask = order.iter().fold(0, |acc, &g| acc | 1 << g);
        (if inversions % 2 == 0 { 1.0 } else { -1.0 }, mask)
    }

    /// T as a dense matrix from the tensor basis to the mask basis.
    pub fn isometry(&self) -> DenseOperator {
        let dim = 1 << self.n_modes;
        let mut t = CMatrix::zeros(dim, dim);
        for x in 0..dim {
            let (s, g) = self.to_global(x);
            t[(g, x)] = c(s, 0.0);
        }
        DenseOperator::from_matrix_unchecked(t)
    }

    /// Twisted generator Υ(−Id)⊗⋯⊗Υ(−Id)⊗a_b(local)⊗Id⊗⋯ on the tensor basis,
    /// as a creation (`creator = true`) or annihilation operator.
    pub fn twisted_mode_operator(&self, block: usize, local: usize, creator: bool) -> DenseOperator {
        let dim = 1 << self.n_modes;
        let offsets = self.offsets();
        let mut out = CMatrix::zeros(dim, dim);
        for t in 0..dim {
            let locals = self.split(t);
            let m = locals[block];
            let occupied = m >> local & 1 == 1;
            if occupied == creator {
                continue;
            }
            let twist: u32 = locals[..block].iter().map(|x| x.count_ones()).sum();
            let s = jw_sign(m, local) * if twist.is_multiple_of(2) { 1.0 } else { -1.0 };
            out[(t ^ (1 << (offsets[block] + local)), t)] = c(s, 0.0);
        }
        DenseOperator::from_matrix_unchecked(out)
    }
}

/// The product state ⊗_b ω_b placed on disjoint blocks of `n_modes` modes.
/// Modes not covered by any block are left in the vacuum.
pub fn product_state_assemble(n_modes: usize, blocks: &[ModeBlock<'_>]) -> Result<OracleState> {
    let basis = FockBasis::new(n_modes)?;
    for b in blocks {
        if b.modes.len() != b.state.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: b.state.n_modes(),
                found: b.modes.len(),
            });
        }
    }
    let layout = TensorLayout::new(n_modes, blocks.iter().map(|b| b.modes.clone()).collect())?;
    let dim = basis.dim();
    let images: Vec<(f64, usize, Vec<usize>)> = (0..dim)
        .map(|t| {
            let (s, g) = layout.to_global(t);
            (s, g, layout.split(t))
        })
        .collect();
    let mut rho = CMatrix::zeros(dim, dim);
    for (sx, gx, lx) in &images {
        for (sy, gy, ly) in &images {
            let mut v = c(sx * sy, 0.0);
            for (k, b) in blocks.iter().enumerate() {
                v *= b.state.rho().matrix()[(lx[k], ly[k])];
                if v == ZERO {
                    break;
                }
            }
            // the implicit vacuum block
            if blocks.len() < layout.blocks.len() && (lx[blocks.len()] != 0 || ly[blocks.len()] != 0) {
                v = ZERO;
            }
            rho[(*gx, *gy)] = v;
        }
    }
    Ok(OracleState::from_parts_unchecked(basis, rho))
}

/// Overlap matrix ⟨Tx, Ty⟩ over the tensor basis; equals Id iff T is an isometry.
pub fn isometry_gram(layout: &TensorLayout) -> CMatrix {
    let t = layout.isometry();
    t.matrix().adjoint() * t.matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::operator::mode_operators;
    use crate::fock_oracle::state::quasi_free_oracle_state;
    use crate::linalg::{max_abs, real_diag};
    use crate::quasifree::QuasiFreeSpec;

    #[test]
    fn t_intertwines_twisted_generators() {
        let layout = TensorLayout::new(5, vec![vec![3, 0], vec![4, 1]]).unwrap();
        assert_eq!(layout.blocks.len(), 3);
        let t = layout.isometry();
        assert!(max_abs(&(isometry_gram(&layout) - CMatrix::identity(32, 32))) < 1e-15);
        let basis = FockBasis::new(5).unwrap();
        for (b, modes) in layout.blocks.iter().enumerate() {
            for (j, &g) in modes.iter().enumerate() {
                let twisted = layout.twisted_mode_operator(b, j, false);
                let (_, an) = mode_operators(&basis, g).unwrap();
                let lhs = &(&t * &twisted) * &t.adjoint();
                assert!(lhs.distance(&an) < 1e-15, "block {b} mode {g}");
            }
        }
    }

    #[test]
    fn overlapping_blocks_rejected() {
        assert!(matches!(
            TensorLayout::new(3, vec![vec![0, 1], vec![1]]),
            Err(Error::OverlappingBlocks(1))
        ));
    }

    #[test]
    fn independent_modes_convolve() {
        let s1 = quasi_free_oracle_state(&QuasiFreeSpec::hf(real_diag(&[0.3]))).unwrap();
        let s2 = quasi_free_oracle_state(&QuasiFreeSpec::hf(real_diag(&[0.6]))).unwrap();
        let joint = product_state_assemble(
            2,
            &[
                ModeBlock { modes: vec![1], state: &s1 },
                ModeBlock { modes: vec![0], state: &s2 },
            ],
        )
        .unwrap();
        let p = joint.sector_distribution();
        let want = [0.7 * 0.4, 0.3 * 0.4 + 0.7 * 0.6, 0.3 * 0.6];
        for (x, y) in p.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
        let g = joint.one_pdm();
        assert!((g[(0, 0)].re - 0.6).abs() < 1e-15 && (g[(1, 1)].re - 0.3).abs() < 1e-15);
    }
}
