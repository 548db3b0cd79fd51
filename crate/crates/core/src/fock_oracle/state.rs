use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::basis::{apply_monomial, FockBasis, Ladder};
use super::field::FieldOperator;
use super::operator::DenseOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, C64, ZERO};
use crate::quasifree::{bls, QuasiFreeSpec};
use crate::tolerances::Tolerances;

/// Exact density matrix on a finite Fock space.
#[derive(Debug, Clone)]
pub struct OracleState {
    basis: FockBasis,
    rho: DenseOperator,
}

/// Deviations of a density matrix from the state axioms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDefects {
    pub hermiticity: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl OracleState {
    pub fn from_density(basis: FockBasis, rho: DenseOperator, tol: f64) -> Result<Self> {
        if rho.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: rho.dim(),
            });
        }
        let state = Self { basis, rho };
        let d = state.defects();
        if d.hermiticity > tol {
            return Err(Error::Constraint {
                what: "density matrix hermiticity",
                margin: d.hermiticity,
            });
        }
        if d.trace > tol {
            return Err(Error::Constraint {
                what: "density matrix trace",
                margin: d.trace,
            });
        }
        if d.min_eigenvalue < -tol {
            return Err(Error::Constraint {
                what: "density matrix positivity",
                margin: -d.min_eigenvalue,
            });
        }
        Ok(state)
    }

    /// |ψ⟩⟨ψ| for a unit vector ψ.
    pub fn pure(basis: FockBasis, psi: &CVector) -> Result<Self> {
        if psi.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: psi.len(),
            });
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > Tolerances::default().identity {
            return Err(Error::argument("state vector norm", "1", norm));
        }
        Ok(Self {
            basis,
            rho: DenseOperator::from_matrix_unchecked(psi * psi.adjoint()),
        })
    }

    pub fn vacuum(basis: FockBasis) -> Self {
        let mut rho = CMatrix::zeros(basis.dim(), basis.dim());
        rho[(0, 0)] = c(1.0, 0.0);
        Self {
            basis,
            rho: DenseOperator::from_matrix_unchecked(rho),
        }
    }

    pub(crate) fn from_parts_unchecked(basis: FockBasis, rho: CMatrix) -> Self {
        Self {
            basis,
            rho: DenseOperator::from_matrix_unchecked(rho),
        }
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn n_modes(&self) -> usize {
        self.basis.n_modes()
    }

    pub fn rho(&self) -> &DenseOperator {
        &self.rho
    }

    pub fn defects(&self) -> StateDefects {
        let m = linalg::hermitian_part(self.rho.matrix());
        let w = linalg::eigvalsh(&m);
        StateDefects {
            hermiticity: self.rho.hermiticity_defect(),
            trace: (self.rho.trace() - c(1.0, 0.0)).norm(),
            min_eigenvalue: w.first().copied().unwrap_or(0.0),
        }
    }

    /// ω(A) = tr(ρA).
    pub fn expectation(&self, obs: &DenseOperator) -> Result<C64> {
        if obs.dim() != self.rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.rho.dim(),
                found: obs.dim(),
            });
        }
        let (r, o) = (self.rho.matrix(), obs.matrix());
        let mut acc = ZERO;
        for i in 0..r.nrows() {
            for j in 0..r.ncols() {
                acc += r[(i, j)] * o[(j, i)];
            }
        }
        Ok(acc)
    }

    /// ω(A₁A₂⋯A_k) for linear field operators.
    pub fn expectation_of_product(&self, ops: &[FieldOperator]) -> C64 {
        let r = self.rho.matrix();
        let dim = r.nrows();
        let mut acc = ZERO;
        let mut e = CVector::zeros(dim);
        for m in 0..dim {
            e.fill(ZERO);
            e[m] = c(1.0, 0.0);
            let col = super::field::apply_product(ops, &e);
            // (ρX)_{mm} = Σ_x ρ_{mx} X_{xm}
            for (x, &v) in col.iter().enumerate() {
                if v != ZERO {
                    acc += r[(m, x)] * v;
                }
            }
        }
        acc
    }

    /// ω of a monomial in single-mode ladder operators.
    pub fn monomial_expectation(&self, ops: &[Ladder]) -> C64 {
        let r = self.rho.matrix();
        (0..r.nrows())
            .filter_map(|m| apply_monomial(ops, m).map(|(s, out)| r[(m, out)] * s))
            .sum()
    }

    /// γ with γ_{ji} = ω(a†_i a_j), i.e. ⟨g, γf⟩ = ω(a*(f) a(g)).
    pub fn one_pdm(&self) -> CMatrix {
        let n = self.n_modes();
        CMatrix::from_fn(n, n, |j, i| {
            self.monomial_expectation(&[Ladder::Create(i), Ladder::Annihilate(j)])
        })
    }

    /// B with B_{ij} = ω(a_i a_j). For a spec with unitary K this is αK.
    pub fn pairing_form(&self) -> CMatrix {
        let n = self.n_modes();
        CMatrix::from_fn(n, n, |i, j| {
            self.monomial_expectation(&[Ladder::Annihilate(i), Ladder::Annihilate(j)])
        })
    }

    /// ω(𝒫_k) for k = 0..=n_modes.
    pub fn sector_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_modes() + 1];
        for m in 0..self.rho.dim() {
            out[FockBasis::sector(m)] += self.rho.matrix()[(m, m)].re;
        }
        out
    }

    /// ω(|Ω⟩⟨Ω|).
    pub fn vacuum_overlap(&self) -> f64 {
        self.rho.matrix()[(0, 0)].re
    }

    pub fn mean_number(&self) -> f64 {
        (0..self.rho.dim())
            .map(|m| FockBasis::sector(m) as f64 * self.rho.matrix()[(m, m)].re)
            .sum()
    }
}

pub fn expectation(state: &OracleState, obs: &DenseOperator) -> Result<C64> {
    state.expectation(obs)
}

pub fn sector_distribution(state: &OracleState) -> Vec<f64> {
    state.sector_distribution()
}

/// Density matrix of the quasi-free state with data `spec`.
///
/// Without pairing the state is the product Gibbs state in the eigenbasis of γ
/// (filled modes occupied outright). With pairing the quasi-particle
/// annihilators d_k are read off the Bogoliubov diagonalization, the
/// quasi-vacuum is projected out of a fixed random vector by ∏ d_k, and the
/// quasi-particle occupations D_k are put on top of it.
pub fn quasi_free_oracle_state(spec: &QuasiFreeSpec) -> Result<OracleState> {
    quasi_free_oracle_state_with(spec, &Tolerances::default())
}

pub fn quasi_free_oracle_state_with(spec: &QuasiFreeSpec, tol: &Tolerances) -> Result<OracleState> {
    let basis = FockBasis::new(spec.n_modes())?;
    spec.require_valid(tol)?;
    let n = spec.n_modes();

    let hf = spec.alpha.is_none() || linalg::max_abs(&spec.pairing_form()) == 0.0;
    let (occupations, quasi, vacuum) = if hf {
        let (lam, f) = linalg::eigh(&spec.gamma);
        let lam: Vec<f64> = lam.iter().map(|&l| snap01(l, tol.snap)).collect();
        let ops: Vec<FieldOperator> = (0..n)
            .map(|k| FieldOperator::annihilator(&f.column(k).into_owned()))
            .collect();
        let mut omega = CVector::zeros(basis.dim());
        omega[0] = c(1.0, 0.0);
        (lam, ops, omega)
    } else {
        let diag = bls::reduced_diagonalization(&spec.gamma, &spec.pairing_form(), tol)?;
        let ops: Vec<FieldOperator> = (0..n)
            .map(|k| {
                // d_k = a(x_k) − a*(conj y_k)
                let x = diag.x.column(k).into_owned();
                let y = diag.y.column(k).into_owned();
                FieldOperator::annihilator(&x).plus(&FieldOperator::creator(&linalg::conj_vec(&y)).scaled(c(-1.0, 0.0)))
            })
            .collect();
        let omega = quasi_vacuum(&basis, &ops, tol)?;
        let d: Vec<f64> = diag.d.iter().map(|&l| snap01(l, tol.snap)).collect();
        (d, ops, omega)
    };

    Ok(gibbs_over_quasi_modes(basis, &occupations, &quasi, &vacuum))
}

fn snap01(l: f64, tol: f64) -> f64 {
    if l.abs() <= tol {
        0.0
    } else if (1.0 - l).abs() <= tol {
        1.0
    } else {
        l.clamp(0.0, 1.0)
    }
}

/// Common kernel of the annihilators `d_k`, normalized.
fn quasi_vacuum(basis: &FockBasis, d: &[FieldOperator], tol: &Tolerances) -> Result<CVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_fac0);
    let mut best: Option<CVector> = None;
    'attempt: for _ in 0..4 {
        let mut v = CVector::from_fn(basis.dim(), |_, _| {
            c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        for op in d {
            v = op.apply(&v);
            let nv = v.norm();
            // A collapse this deep means the start vector was nearly orthogonal to the vacuum.
            if !(nv > 1e-6) {
                continue 'attempt;
            }
            v /= c(nv, 0.0);
        }
        best = Some(v);
        break;
    }
    let v = best.ok_or(Error::Convergence {
        what: "quasi-vacuum projection",
        achieved: 1.0,
    })?;
    let residual = d.iter().map(|op| op.apply(&v).norm()).fold(0.0, f64::max);
    if !(residual <= tol.identity) {
        return Err(Error::Convergence {
            what: "quasi-vacuum projection",
            achieved: residual,
        });
    }
    Ok(v)
}

/// ρ = Σ_S ∏_{k∈S} λ_k ∏_{k∉S} (1 − λ_k) |ψ_S⟩⟨ψ_S| with ψ_S = ∏_{k∈S} d†_k Ω_q.
fn gibbs_over_quasi_modes(
    basis: FockBasis,
    occupations: &[f64],
    d: &[FieldOperator],
    vacuum: &CVector,
) -> OracleState {
    let n = occupations.len();
    let dim = basis.dim();
    let creators: Vec<FieldOperator> = d.iter().map(|op| op.adjoint()).collect();
    // ψ_S built incrementally from ψ_{S without its highest element}.
    let mut psi: Vec<Option<CVector>> = vec![None; dim];
    psi[0] = Some(vacuum.clone());
    let mut cols: Vec<CVector> = Vec::new();
    for s in 0..dim {
        let w: f64 = (0..n)
            .map(|k| if s >> k & 1 == 1 { occupations[k] } else { 1.0 - occupations[k] })
            .product();
        if s > 0 {
            let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
            let rest = s ^ (1 << top);
            let prev = psi[rest].as_ref().expect("subsets visited first");
            psi[s] = Some(creators[top].apply(prev));
        }
        if w > 0.0 {
            cols.push(psi[s].as_ref().unwrap() * c(w.sqrt(), 0.0));
        }
    }
    let m = CMatrix::from_columns(&cols);
    let rho = &m * m.adjoint();
    OracleState::from_parts_unchecked(basis, rho)
}

/// Mode bookkeeping for [`bogoliubov_vacuum`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VacuumLayout {
    /// Particle partner of each paired block.
    pub pair_particles: Vec<usize>,
    /// Anti-particle partner of each paired block.
    pub pair_antiparticles: Vec<usize>,
    pub real_particles: Vec<usize>,
    pub real_antiparticles: Vec<usize>,
}

/// The pure quasi-free vector
/// `∏(1+λ_i²)^{-1/2} ∏ a*(f_n) ∏ b*(g_m) ∏(1 + λ_i a*(v_i) b*(u_i)) Ω`.
///
/// Modes are laid out as `[v_1..v_L, f_1..f_N, u_1..u_L, g_1..g_M]`; remaining
/// modes of `basis` stay empty.
pub fn bogoliubov_vacuum(
    lambdas: &[f64],
    n_particles: usize,
    n_antiparticles: usize,
    basis: &FockBasis,
) -> Result<(CVector, VacuumLayout)> {
    let l = lambdas.len();
    let need = 2 * l + n_particles + n_antiparticles;
    if need > basis.n_modes() {
        return Err(Error::DimensionCap {
            requested: need,
            cap: basis.n_modes(),
        });
    }
    if let Some(&bad) = lambdas.iter().find(|&&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::argument("lambda", "finite and non-negative", bad));
    }
    let layout = VacuumLayout {
        pair_particles: (0..l).collect(),
        real_particles: (l..l + n_particles).collect(),
        pair_antiparticles: (l + n_particles..2 * l + n_particles).collect(),
        real_antiparticles: (2 * l + n_particles..need).collect(),
    };
    let n = basis.n_modes();
    let unit = |i: usize| CVector::from_fn(n, |j, _| if i == j { c(1.0, 0.0) } else { ZERO });
    let mut v = CVector::zeros(basis.dim());
    v[0] = c(1.0, 0.0);
    for (i, &lam) in lambdas.iter().enumerate() {
        let pair = [
            FieldOperator::creator(&unit(layout.pair_particles[i])),
            FieldOperator::creator(&unit(layout.pair_antiparticles[i])),
        ];
        let excited = super::field::apply_product(&pair, &v);
        v = (&v + excited * c(lam, 0.0)) / c((1.0 + lam * lam).sqrt(), 0.0);
    }
    for &g in layout.real_antiparticles.iter().rev() {
        v = FieldOperator::creator(&unit(g)).apply(&v);
    }
    for &f in layout.real_particles.iter().rev() {
        v = FieldOperator::creator(&unit(f)).apply(&v);
    }
    Ok((v, layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::operator::number_operator;
    use crate::linalg::real_diag;

    #[test]
    fn single_mode_hf() {
        let spec = QuasiFreeSpec::hf(real_diag(&[0.3]));
        let s = quasi_free_oracle_state(&spec).unwrap();
        let r = s.rho().matrix();
        assert!((r[(0, 0)].re - 0.7).abs() < 1e-15 && (r[(1, 1)].re - 0.3).abs() < 1e-15);
        assert!((s.one_pdm()[(0, 0)].re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn zero_gamma_is_vacuum() {
        let s = quasi_free_oracle_state(&QuasiFreeSpec::hf(CMatrix::zeros(3, 3))).unwrap();
        assert_eq!(s.sector_distribution(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn binomial_sectors() {
        let s = quasi_free_oracle_state(&QuasiFreeSpec::hf(real_diag(&[0.5, 0.5]))).unwrap();
        let p = s.sector_distribution();
        for (x, y) in p.iter().zip([0.25, 0.5, 0.25]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn pair_vacuum_from_formula() {
        let b = FockBasis::new(2).unwrap();
        let (v, _) = bogoliubov_vacuum(&[1.0], 0, 0, &b).unwrap();
        let s = OracleState::pure(b, &v).unwrap();
        assert!((s.vacuum_overlap() - 0.5).abs() < 1e-15);
        assert!((s.expectation(&number_operator(&b)).unwrap().re - 1.0).abs() < 1e-15);
        let g = s.one_pdm();
        assert!((g[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(s.sector_distribution()[1].abs() < 1e-15);

        let b1 = FockBasis::new(1).unwrap();
        let (v, _) = bogoliubov_vacuum(&[], 1, 0, &b1).unwrap();
        assert_eq!(OracleState::pure(b1, &v).unwrap().vacuum_overlap(), 0.0);
        assert!(bogoliubov_vacuum(&[0.5], 1, 0, &FockBasis::new(2).unwrap()).is_err());
    }

    #[test]
    fn from_density_rejects_bad() {
        let b = FockBasis::new(1).unwrap();
        let bad = DenseOperator::new(real_diag(&[1.2, -0.2])).unwrap();
        assert!(OracleState::from_density(b, bad, 1e-10).is_err());
        let ok = DenseOperator::new(real_diag(&[0.6, 0.4])).unwrap();
        assert!(OracleState::from_density(b, ok, 1e-10).is_ok());
    }
}
