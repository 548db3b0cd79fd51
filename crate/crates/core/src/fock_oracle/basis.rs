use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of modes: dense operators are 4096 × 4096 there.
pub const MODE_CAP: usize = 12;

/// Occupation-number basis of the fermionic Fock space over `n_modes` modes.
///
/// Basis vector `m` is `a†_{i1} a†_{i2} ⋯ a†_{ik} Ω` with `i1 < i2 < ⋯` the set
/// bits of `m`, so mode `i` picks up the parity of the occupied modes below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockBasis {
    n_modes: usize,
}

impl FockBasis {
    pub fn new(n_modes: usize) -> Result<Self> {
        Self::with_cap(n_modes, MODE_CAP)
    }

    /// Same as [`FockBasis::new`] with a tighter cap. Caps above [`MODE_CAP`] are clamped.
    pub fn with_cap(n_modes: usize, cap: usize) -> Result<Self> {
        let cap = cap.min(MODE_CAP);
        if n_modes > cap {
            return Err(Error::DimensionCap {
                requested: n_modes,
                cap,
            });
        }
        Ok(Self { n_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        1 << self.n_modes
    }

    pub fn sector(mask: usize) -> usize {
        mask.count_ones() as usize
    }

    pub fn check_mode(&self, i: usize) -> Result<()> {
        if i >= self.n_modes {
            return Err(Error::ModeOutOfRange {
                index: i,
                n_modes: self.n_modes,
            });
        }
        Ok(())
    }
}

/// (−1)^(number of occupied modes below `i`).
#[inline]
pub fn jw_sign(mask: usize, i: usize) -> f64 {
    if (mask & ((1 << i) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// a†_i |mask⟩ = sign |mask'⟩, or `None` if mode `i` is already occupied.
#[inline]
pub fn create(mask: usize, i: usize) -> Option<(f64, usize)> {
    let bit = 1 << i;
    (mask & bit == 0).then(|| (jw_sign(mask, i), mask | bit))
}

/// a_i |mask⟩ = sign |mask'⟩, or `None` if mode `i` is empty.
#[inline]
pub fn annihilate(mask: usize, i: usize) -> Option<(f64, usize)> {
    let bit = 1 << i;
    (mask & bit != 0).then(|| (jw_sign(mask, i), mask ^ bit))
}

/// One ladder operator on a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// Apply a product `ops[0] ops[1] ⋯` of ladder operators to a basis vector
/// (rightmost acts first).
pub fn apply_monomial(ops: &[Ladder], mask: usize) -> Option<(f64, usize)> {
    let mut sign = 1.0;
    let mut m = mask;
    for op in ops.iter().rev() {
        let (s, next) = match *op {
            Ladder::Create(i) => create(m, i)?,
            Ladder::Annihilate(i) => annihilate(m, i)?,
        };
        sign *= s;
        m = next;
    }
    Some((sign, m))
}
