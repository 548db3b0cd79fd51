//! 2p-point functions of quasi-free states by the signed sum over pairings,
//! with the one-step recursion as an independent second evaluator.
//!
//! Two-point values, with B = αK the pairing form (B_{ij} = ω(a_i a_j)):
//!
//! ```text
//! ω(a*(f) a(g))  = ⟨g, γ f⟩
//! ω(a(g) a*(f))  = ⟨g, f⟩ − ⟨g, γ f⟩
//! ω(a*(f) a*(g)) = ⟨αJf, g⟩ = gᵀ B̄ f
//! ω(a(f) a(g))   = f* B ḡ = conj ω(a*(g) a*(f))
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_oracle::FieldOperator;
use crate::linalg::{conj, conj_vec, CVector, C64, ZERO};
use crate::quasifree::QuasiFreeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Creator,
    Annihilator,
}

/// a*(f) or a(f).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSymbol {
    pub kind: SymbolKind,
    pub vector: CVector,
}

impl FieldSymbol {
    pub fn creator(f: CVector) -> Self {
        Self {
            kind: SymbolKind::Creator,
            vector: f,
        }
    }

    pub fn annihilator(f: CVector) -> Self {
        Self {
            kind: SymbolKind::Annihilator,
            vector: f,
        }
    }

    pub fn to_operator(&self) -> FieldOperator {
        match self.kind {
            SymbolKind::Creator => FieldOperator::creator(&self.vector),
            SymbolKind::Annihilator => FieldOperator::annihilator(&self.vector),
        }
    }

    /// The scalar {self, other}.
    pub fn anticommutator(&self, other: &Self) -> C64 {
        match (self.kind, other.kind) {
            (SymbolKind::Annihilator, SymbolKind::Creator) => self.vector.dotc(&other.vector),
            (SymbolKind::Creator, SymbolKind::Annihilator) => other.vector.dotc(&self.vector),
            _ => ZERO,
        }
    }
}

/// A perfect matching of {0, …, 2p−1} with each pair increasing and the
/// pairs ordered by their first element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub sign: i8,
}

const MAX_P: usize = 6;

fn check_order(p: usize) -> Result<()> {
    if p == 0 || p > MAX_P {
        return Err(Error::PairingOrder(p));
    }
    Ok(())
}

/// All (2p−1)!! pairings, smallest open index paired first.
pub fn enumerate_pairings(p: usize) -> Result<Vec<Pairing>> {
    check_order(p)?;
    let mut out = Vec::new();
    let open: Vec<usize> = (0..2 * p).collect();
    let mut current = Vec::with_capacity(p);
    recurse(&open, &mut current, &mut out);
    Ok(out)
}

fn recurse(open: &[usize], current: &mut Vec<(usize, usize)>, out: &mut Vec<Pairing>) {
    if open.is_empty() {
        let flat: Vec<usize> = current.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut inv = 0;
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                if flat[i] > flat[j] {
                    inv += 1;
                }
            }
        }
        out.push(Pairing {
            pairs: current.clone(),
            sign: if inv % 2 == 0 { 1 } else { -1 },
        });
        return;
    }
    let first = open[0];
    for k in 1..open.len() {
        let rest: Vec<usize> = open[1..].iter().copied().filter(|&x| x != open[k]).collect();
        current.push((first, open[k]));
        recurse(&rest, current, out);
        current.pop();
    }
}

fn check_dim(spec: &QuasiFreeSpec, e: &FieldSymbol) -> Result<()> {
    if e.vector.len() != spec.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: spec.n_modes(),
            found: e.vector.len(),
        });
    }
    Ok(())
}

/// ω(e1 e2).
pub fn two_point_value(spec: &QuasiFreeSpec, e1: &FieldSymbol, e2: &FieldSymbol) -> Result<C64> {
    check_dim(spec, e1)?;
    check_dim(spec, e2)?;
    Ok(two_point_unchecked(spec, &spec.pairing_form(), e1, e2))
}

fn two_point_unchecked(spec: &QuasiFreeSpec, b: &crate::linalg::CMatrix, e1: &FieldSymbol, e2: &FieldSymbol) -> C64 {
    use SymbolKind::*;
    let g = &spec.gamma;
    match (e1.kind, e2.kind) {
        (Creator, Annihilator) => e2.vector.dotc(&(g * &e1.vector)),
        (Annihilator, Creator) => e1.vector.dotc(&e2.vector) - e1.vector.dotc(&(g * &e2.vector)),
        (Creator, Creator) => e2.vector.dot(&(conj(b) * &e1.vector)),
        (Annihilator, Annihilator) => e1.vector.dotc(&(b * conj_vec(&e2.vector))),
    }
}

fn prepare(spec: &QuasiFreeSpec, symbols: &[FieldSymbol]) -> Result<Option<crate::linalg::CMatrix>> {
    for e in symbols {
        check_dim(spec, e)?;
    }
    if symbols.len() % 2 == 1 {
        return Ok(None);
    }
    check_order(symbols.len() / 2)?;
    Ok(Some(spec.pairing_form()))
}

/// ω(e_1 ⋯ e_2p) as Σ_π ε(π) ∏ ω(e_{π(2j−1)} e_{π(2j)}). Odd products vanish.
pub fn wick_expectation(spec: &QuasiFreeSpec, symbols: &[FieldSymbol]) -> Result<C64> {
    let Some(b) = prepare(spec, symbols)? else {
        return Ok(ZERO);
    };
    let p = symbols.len() / 2;
    let n = symbols.len();
    let mut table = vec![ZERO; n * n];
    for i in 0..n {
        for j in i + 1..n {
            table[i * n + j] = two_point_unchecked(spec, &b, &symbols[i], &symbols[j]);
        }
    }
    Ok(enumerate_pairings(p)?
        .iter()
        .map(|pi| {
            let prod: C64 = pi.pairs.iter().map(|&(i, j)| table[i * n + j]).product();
            prod * f64::from(pi.sign)
        })
        .sum())
}

/// Same value via W(e_1 … e_2K) = Σ_{i≥2} (−1)^i ω(e_1 e_i) W(rest).
pub fn wick_recursive(spec: &QuasiFreeSpec, symbols: &[FieldSymbol]) -> Result<C64> {
    let Some(b) = prepare(spec, symbols)? else {
        return Ok(ZERO);
    };
    let idx: Vec<usize> = (0..symbols.len()).collect();
    Ok(recursive(spec, &b, symbols, &idx))
}

fn recursive(spec: &QuasiFreeSpec, b: &crate::linalg::CMatrix, s: &[FieldSymbol], idx: &[usize]) -> C64 {
    if idx.is_empty() {
        return C64::new(1.0, 0.0);
    }
    let mut acc = ZERO;
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[k]).collect();
        // 1-based position k+1: sign (−1)^{k+1}
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += two_point_unchecked(spec, b, &s[idx[0]], &s[idx[k]]) * recursive(spec, b, s, &rest) * sign;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real_diag, CMatrix};

    fn v(xs: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(xs.len(), xs.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn pairing_counts_and_signs() {
        let p1 = enumerate_pairings(1).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].sign, 1);
        let p2 = enumerate_pairings(2).unwrap();
        assert_eq!(p2.iter().map(|p| p.sign).collect::<Vec<_>>(), vec![1, -1, 1]);
        assert_eq!(p2[1].pairs, vec![(0, 2), (1, 3)]);
        let dfact = [1, 3, 15, 105, 945, 10395];
        for p in 1..=6 {
            assert_eq!(enumerate_pairings(p).unwrap().len(), dfact[p - 1]);
        }
        assert!(enumerate_pairings(0).is_err() && enumerate_pairings(7).is_err());
    }

    #[test]
    fn vacuum_and_filled_two_points() {
        let f = v(&[(0.3, 0.2), (1.0, -0.5)]);
        let g = v(&[(-0.1, 0.4), (0.2, 0.0)]);
        let vac = QuasiFreeSpec::hf(CMatrix::zeros(2, 2));
        let z = two_point_value(&vac, &FieldSymbol::annihilator(g.clone()), &FieldSymbol::creator(f.clone())).unwrap();
        assert!((z - g.dotc(&f)).norm() < 1e-15);
        let full = QuasiFreeSpec::hf(CMatrix::identity(2, 2));
        let z = two_point_value(&full, &FieldSymbol::creator(f.clone()), &FieldSymbol::annihilator(g.clone())).unwrap();
        assert!((z - g.dotc(&f)).norm() < 1e-15);
    }

    #[test]
    fn four_point_hf_determinant() {
        let spec = QuasiFreeSpec::hf(real_diag(&[0.2, 0.7, 0.4]));
        let f1 = v(&[(1.0, 0.0), (0.3, 0.1), (0.0, 0.2)]);
        let f2 = v(&[(0.0, 1.0), (0.5, 0.0), (-0.3, 0.0)]);
        let g1 = v(&[(0.2, 0.2), (1.0, 0.0), (0.0, 0.0)]);
        let g2 = v(&[(0.1, 0.0), (0.0, -0.4), (0.9, 0.0)]);
        let syms = [
            FieldSymbol::creator(f1.clone()),
            FieldSymbol::creator(f2.clone()),
            FieldSymbol::annihilator(g2.clone()),
            FieldSymbol::annihilator(g1.clone()),
        ];
        let gm = &spec.gamma;
        let e = |g: &CVector, f: &CVector| g.dotc(&(gm * f));
        let want = e(&g1, &f1) * e(&g2, &f2) - e(&g1, &f2) * e(&g2, &f1);
        assert!((wick_expectation(&spec, &syms).unwrap() - want).norm() < 1e-14);
        assert!((wick_recursive(&spec, &syms).unwrap() - want).norm() < 1e-14);
        assert_eq!(wick_expectation(&spec, &syms[..3]).unwrap(), ZERO);
        assert_eq!(wick_recursive(&spec, &syms[..3]).unwrap(), ZERO);
    }

    #[test]
    fn dimension_guard() {
        let spec = QuasiFreeSpec::hf(real_diag(&[0.2, 0.7]));
        let bad = FieldSymbol::creator(v(&[(1.0, 0.0)]));
        assert!(two_point_value(&spec, &bad, &bad).is_err());
    }
}
