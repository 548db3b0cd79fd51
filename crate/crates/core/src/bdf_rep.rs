//! Twisted field operators ψ*(f) = a₊*((1−Π)f) ⊗ 1 + Υ(−1) ⊗ a₋(JΠf) on
//! 𝓕(ℌ₊) ⊗ 𝓕(ℌ₋), with ℌ₊ = range(1−Π) and ℌ₋ = J range(Π).
//!
//! The tensor product is realized on one Fock space of n modes: the first
//! n₊ modes carry an orthonormal basis φᵢ of range(1−Π), the last n₋ modes
//! the hole basis χⱼ = Jψⱼ for an orthonormal basis ψⱼ of range(Π). With the
//! Jordan-Wigner ordering putting ℌ₊ first, the parity twist Υ(−1) ⊗ 1 is
//! exactly the string carried by the ℌ₋ ladder operators, and
//!
//!   ψ*(f) = Σᵢ ⟨φᵢ, f⟩ cᵢ† + Σⱼ ⟨ψⱼ, f⟩ c_{n₊+j}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_oracle::{quasi_free_oracle_state_with, FieldOperator, FockBasis, OracleState};
use crate::linalg::{self, c, CMatrix, CVector, MatrixJson};
use crate::quasifree::{mixed_vacuum_bound, validate, Check, QuasiFreeSpec, ValidationReport};
use crate::sampling::{self, SuiteRng};
use crate::tolerances::Tolerances;
use crate::wick::{two_point_value, FieldSymbol};

/// Tolerance on Π² = Π = Π*, J*J = 1 and the branch relation.
pub const FRAME_TOL: f64 = 1e-12;

/// Which of JΠJ* = Π or JΠJ* = 1 − Π holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Preserves,
    Complements,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BdfFrame {
    pi: CMatrix,
    k: CMatrix,
    branch: Branch,
    /// Columns φᵢ spanning range(1−Π).
    plus: CMatrix,
    /// Columns ψⱼ spanning range(Π).
    minus: CMatrix,
}

impl BdfFrame {
    pub fn new(pi: CMatrix, j_unitary: CMatrix) -> Result<Self> {
        let n = pi.nrows();
        linalg::check_square(&pi, n)?;
        linalg::check_square(&j_unitary, n)?;
        let idem = linalg::max_abs(&(&pi * &pi - &pi)).max(linalg::hermiticity_defect(&pi));
        if idem > FRAME_TOL {
            return Err(Error::Constraint { what: "Pi orthogonal projection", margin: idem });
        }
        let ud = linalg::unitarity_defect(&j_unitary);
        if ud > FRAME_TOL {
            return Err(Error::Constraint { what: "K unitary", margin: ud });
        }
        let jpj = &j_unitary * linalg::conj(&pi) * j_unitary.adjoint();
        let d_same = linalg::max_abs(&(&jpj - &pi));
        let d_comp = linalg::max_abs(&(&jpj + &pi - linalg::identity(n)));
        let branch = if d_same <= FRAME_TOL {
            Branch::Preserves
        } else if d_comp <= FRAME_TOL {
            Branch::Complements
        } else {
            return Err(Error::Constraint { what: "J Pi J* equals Pi or 1 - Pi", margin: d_same.min(d_comp) });
        };
        let (w, v) = linalg::eigh(&pi);
        let n_minus = w.iter().filter(|&&x| x > 0.5).count();
        let n_plus = n - n_minus;
        let plus = v.columns(0, n_plus).into_owned();
        let minus = v.columns(n_plus, n_minus).into_owned();
        Ok(Self { pi, k: j_unitary, branch, plus, minus })
    }

    pub fn dim(&self) -> usize {
        self.pi.nrows()
    }

    pub fn n_plus(&self) -> usize {
        self.plus.ncols()
    }

    pub fn n_minus(&self) -> usize {
        self.minus.ncols()
    }

    pub fn pi(&self) -> &CMatrix {
        &self.pi
    }

    pub fn j_unitary(&self) -> &CMatrix {
        &self.k
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn plus_basis(&self) -> &CMatrix {
        &self.plus
    }

    pub fn minus_basis(&self) -> &CMatrix {
        &self.minus
    }

    /// χⱼ = Jψⱼ, the one-body states of the holes.
    pub fn hole_basis(&self) -> CMatrix {
        &self.k * linalg::conj(&self.minus)
    }

    pub fn fock_basis(&self) -> Result<FockBasis> {
        FockBasis::new(self.dim())
    }

    /// ψ*(f) as a linear combination of the c-mode ladder operators.
    pub fn psi_star(&self, f: &CVector) -> Result<FieldOperator> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: f.len() });
        }
        let n = self.dim();
        let np = self.n_plus();
        let mut op = FieldOperator::zero(n);
        for i in 0..np {
            op.create[i] = self.plus.column(i).dotc(f);
        }
        for j in 0..self.n_minus() {
            op.annihilate[np + j] = self.minus.column(j).dotc(f);
        }
        Ok(op)
    }

    /// ψ(f) = ψ*(f)†.
    pub fn psi(&self, f: &CVector) -> Result<FieldOperator> {
        Ok(self.psi_star(f)?.adjoint())
    }

    /// c-ladder operators written as ψ-symbols: c†ₐ for a plus mode is ψ*(φₐ),
    /// for a minus mode it is ψ(ψₐ).
    fn c_dagger_symbol(&self, a: usize) -> FieldSymbol {
        let np = self.n_plus();
        if a < np {
            FieldSymbol::creator(self.plus.column(a).into_owned())
        } else {
            FieldSymbol::annihilator(self.minus.column(a - np).into_owned())
        }
    }

    fn c_symbol(&self, a: usize) -> FieldSymbol {
        let np = self.n_plus();
        if a < np {
            FieldSymbol::annihilator(self.plus.column(a).into_owned())
        } else {
            FieldSymbol::creator(self.minus.column(a - np).into_owned())
        }
    }

    /// (1−Π)M(1−Π) and ΠMΠ.
    pub fn diagonal_blocks(&self, m: &CMatrix) -> (CMatrix, CMatrix) {
        let p_plus = linalg::identity(self.dim()) - &self.pi;
        (&p_plus * m * &p_plus, &self.pi * m * &self.pi)
    }
}

/// ψ*(f) as a dense operator on 𝓕(ℌ₊) ⊗ 𝓕(ℌ₋).
pub fn field_operator(frame: &BdfFrame, f: &CVector) -> Result<crate::fock_oracle::DenseOperator> {
    let basis = frame.fock_basis()?;
    Ok(frame.psi_star(f)?.to_dense(&basis))
}

/// Renormalized one-particle density matrix Q = γ − Π (γ the 1-pdm of ψ) and
/// pairing matrix p, with Γ(Π + Q, p) the generalized density matrix of ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct BdfSpec {
    pub frame: BdfFrame,
    pub q: CMatrix,
    pub p: CMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BdfReport {
    pub q_hermitian: Check,
    pub block: ValidationReport,
    /// −λ_min(Q + Π) and λ_max(Q + Π) − 1
    pub q_range: Check,
    /// −λ_min(Q₊₊ − Q₋₋ − Q²)
    pub number_inequality: Check,
}

impl BdfReport {
    pub fn checks(&self) -> Vec<Check> {
        let mut v = vec![self.q_hermitian];
        v.extend(self.block.checks());
        v.push(self.q_range);
        v.push(self.number_inequality);
        v
    }

    pub fn first_failure(&self) -> Option<Check> {
        self.checks().into_iter().find(|c| !c.passed)
    }
}

fn at_most(name: &'static str, value: f64, tol: f64) -> Check {
    Check { name, value, passed: value <= tol }
}

impl BdfSpec {
    pub fn new(frame: BdfFrame, q: CMatrix, p: CMatrix, tol: &Tolerances) -> Result<Self> {
        let spec = Self::unchecked(frame, q, p)?;
        if let Some(c) = spec.validate(tol).first_failure() {
            return Err(Error::Constraint { what: c.name, margin: c.value });
        }
        Ok(spec)
    }

    /// p = 0.
    pub fn without_pairing(frame: BdfFrame, q: CMatrix, tol: &Tolerances) -> Result<Self> {
        let n = frame.dim();
        Self::new(frame, q, CMatrix::zeros(n, n), tol)
    }

    fn unchecked(frame: BdfFrame, q: CMatrix, p: CMatrix) -> Result<Self> {
        let n = frame.dim();
        linalg::check_square(&q, n)?;
        linalg::check_square(&p, n)?;
        Ok(Self { frame, q, p })
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// The quasi-free data (Π + Q, p, K) seen by the ψ fields.
    pub fn psi_spec(&self) -> QuasiFreeSpec {
        QuasiFreeSpec {
            gamma: &self.frame.pi + &self.q,
            alpha: Some(self.p.clone()),
            j_unitary: self.frame.k.clone(),
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> BdfReport {
        let t = tol.identity;
        let block = validate(&self.psi_spec(), tol);
        let w = linalg::eigvalsh(&(&self.frame.pi + &self.q));
        let range = (-w.first().copied().unwrap_or(0.0)).max(w.last().copied().unwrap_or(0.0) - 1.0);
        let (qpp, qmm) = self.frame.diagonal_blocks(&self.q);
        let gap = qpp - qmm - &self.q * &self.q;
        let gap_min = linalg::eigvalsh(&linalg::hermitian_part(&gap)).first().copied().unwrap_or(0.0);
        BdfReport {
            q_hermitian: at_most("Q hermitian", linalg::hermiticity_defect(&self.q), t),
            block,
            q_range: at_most("-Pi <= Q <= 1 - Pi", range, t),
            number_inequality: at_most("Q++ - Q-- >= Q^2", -gap_min, t),
        }
    }

    /// tr(Q₊₊ − Q₋₋).
    pub fn relative_number(&self) -> f64 {
        let (qpp, qmm) = self.frame.diagonal_blocks(&self.q);
        linalg::trace_re(&qpp) - linalg::trace_re(&qmm)
    }

    /// Quasi-free data of the same state in the c-mode picture.
    pub fn c_mode_spec(&self) -> Result<QuasiFreeSpec> {
        let spec = self.psi_spec();
        let n = self.dim();
        let f = &self.frame;
        let mut gamma = CMatrix::zeros(n, n);
        let mut b = CMatrix::zeros(n, n);
        for a in 0..n {
            for bb in 0..n {
                // γ_{ba} = ω(c†ₐ c_b), B_{ab} = ω(cₐ c_b)
                gamma[(bb, a)] = two_point_value(&spec, &f.c_dagger_symbol(a), &f.c_symbol(bb))?;
                b[(a, bb)] = two_point_value(&spec, &f.c_symbol(a), &f.c_symbol(bb))?;
            }
        }
        QuasiFreeSpec::with_pairing_form(linalg::hermitian_part(&gamma), (&b - b.transpose()) * c(0.5, 0.0))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BdfSpecJson::from(self)).expect("spec serialization")
    }

    pub fn from_json(s: &str, tol: &Tolerances) -> Result<Self> {
        let js: BdfSpecJson = serde_json::from_str(s)?;
        js.into_spec(tol)
    }
}

/// Wire format: `{"pi": M, "j_unitary": M, "q": M, "p": M?}` with M a matrix
/// in the shared `{dim, entries}` layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BdfSpecJson {
    pub pi: MatrixJson,
    pub j_unitary: MatrixJson,
    pub q: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<MatrixJson>,
}

impl From<&BdfSpec> for BdfSpecJson {
    fn from(s: &BdfSpec) -> Self {
        Self {
            pi: MatrixJson::from(&s.frame.pi),
            j_unitary: MatrixJson::from(&s.frame.k),
            q: MatrixJson::from(&s.q),
            p: Some(MatrixJson::from(&s.p)),
        }
    }
}

impl BdfSpecJson {
    pub fn into_spec(&self, tol: &Tolerances) -> Result<BdfSpec> {
        let frame = BdfFrame::new(CMatrix::try_from(&self.pi)?, CMatrix::try_from(&self.j_unitary)?)?;
        let q = CMatrix::try_from(&self.q)?;
        let p = match &self.p {
            Some(p) => CMatrix::try_from(p)?,
            None => CMatrix::zeros(frame.dim(), frame.dim()),
        };
        BdfSpec::new(frame, q, p, tol)
    }
}

/// The BDF state with data (Q, p) as a density matrix on 𝓕(ℌ₊) ⊗ 𝓕(ℌ₋).
pub fn bdf_state_build(spec: &BdfSpec) -> Result<OracleState> {
    bdf_state_build_with(spec, &Tolerances::default())
}

pub fn bdf_state_build_with(spec: &BdfSpec, tol: &Tolerances) -> Result<OracleState> {
    if let Some(c) = spec.validate(tol).first_failure() {
        return Err(Error::Constraint { what: c.name, margin: c.value });
    }
    quasi_free_oracle_state_with(&spec.c_mode_spec()?, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalOrdered {
    pub q: CMatrix,
    pub p: CMatrix,
    /// ω(𝒩) = tr(Q₊₊ − Q₋₋)
    pub n_avg: f64,
}

/// Reads (Q, p) back off a state: ⟨g, (Π + Q) f⟩ = ω(ψ*(f)ψ(g)) and
/// pK = [ω(ψ(eᵢ)ψ(eⱼ))].
pub fn normal_ordered_pdm(state: &OracleState, frame: &BdfFrame) -> Result<NormalOrdered> {
    let n = frame.dim();
    if state.n_modes() != n {
        return Err(Error::DimensionMismatch { expected: n, found: state.n_modes() });
    }
    let e = |i: usize| {
        let mut v = CVector::zeros(n);
        v[i] = c(1.0, 0.0);
        v
    };
    let star: Vec<FieldOperator> = (0..n).map(|i| frame.psi_star(&e(i))).collect::<Result<_>>()?;
    let ann: Vec<FieldOperator> = star.iter().map(FieldOperator::adjoint).collect();
    let gamma = CMatrix::from_fn(n, n, |j, i| state.expectation_of_product(&[star[i].clone(), ann[j].clone()]));
    let b = CMatrix::from_fn(n, n, |i, j| state.expectation_of_product(&[ann[i].clone(), ann[j].clone()]));
    let q = gamma - &frame.pi;
    let p = b * frame.k.adjoint();
    let (qpp, qmm) = frame.diagonal_blocks(&q);
    let n_avg = linalg::trace_re(&qpp) - linalg::trace_re(&qmm);
    Ok(NormalOrdered { q, p, n_avg })
}

/// e^{−a tr(Q₊₊ − Q₋₋)}, an upper bound on the vacuum expectation of the state.
pub fn bdf_vacuum_bound(spec: &BdfSpec) -> Result<f64> {
    let n = spec.relative_number();
    if n < -Tolerances::default().identity {
        return Err(Error::Constraint { what: "tr(Q++ - Q--) >= 0", margin: -n });
    }
    mixed_vacuum_bound(n.max(0.0))
}

/// p(ω) = 1 − ω(|Ω⟩⟨Ω|).
pub fn pair_probability(state: &OracleState) -> f64 {
    (1.0 - state.vacuum_overlap()).clamp(0.0, 1.0)
}

/// Random frame of dimension n: Π = W P W* for a Haar W. In the complementing
/// branch n must be even and rank Π = n/2.
pub fn random_frame(rng: &mut SuiteRng, n: usize, branch: Branch) -> Result<BdfFrame> {
    use rand::Rng;
    let w = sampling::random_unitary(rng, n);
    let (rank, swap) = match branch {
        Branch::Preserves => (rng.random_range(0..=n), false),
        Branch::Complements => {
            if n % 2 == 1 {
                return Err(Error::argument("n", "even for the complementing branch", n as f64));
            }
            (n / 2, true)
        }
    };
    let p = linalg::real_diag(&(0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    let s = if swap {
        CMatrix::from_fn(n, n, |i, j| if (i + n / 2) % n == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    } else {
        linalg::identity(n)
    };
    // K conj(Π) K* = W S P Sᵀ W* for K = W S Wᵀ.
    let k = &w * s * w.transpose();
    let pi = linalg::hermitian_part(&(&w * p * w.adjoint()));
    BdfFrame::new(pi, k)
}

/// Random valid spec on `frame`: Γ pulled back from a random Bogoliubov map and
/// D ∈ [0, 1/2], then re-expressed relative to Π.
pub fn random_spec(rng: &mut SuiteRng, frame: &BdfFrame) -> Result<BdfSpec> {
    let base = sampling::random_mixed_spec(rng, frame.dim());
    let p = base.pairing_form() * frame.k.adjoint();
    let q = &base.gamma - &frame.pi;
    BdfSpec::unchecked(frame.clone(), q, p)
}

/// Random valid spec without pairing: Q = γ − Π for a random HF γ.
pub fn random_hf_spec(rng: &mut SuiteRng, frame: &BdfFrame) -> Result<BdfSpec> {
    let gamma = sampling::random_hf_gamma(rng, frame.dim());
    let n = frame.dim();
    BdfSpec::unchecked(frame.clone(), gamma - &frame.pi, CMatrix::zeros(n, n))
}

/// Frame of the free Dirac operator on the two momenta ±p: Π is its negative
/// spectral projection and J the charge conjugation iβα₂·conj composed with
/// p ↦ −p, so that JΠJ* = 1 − Π.
pub fn dirac_frame(p: [f64; 3]) -> Result<BdfFrame> {
    use crate::vacuum_energy::{alpha, beta, dirac_free};
    let to_dyn = |m: crate::vacuum_energy::Mat4| CMatrix::from_fn(4, 4, |i, j| m[(i, j)]);
    let neg = |q: [f64; 3]| {
        let (w, v) = linalg::eigh(&to_dyn(dirac_free(q)));
        let vn = v.columns(0, w.iter().filter(|&&x| x < 0.0).count()).into_owned();
        &vn * vn.adjoint()
    };
    let minus_p = [-p[0], -p[1], -p[2]];
    let z = CMatrix::zeros(4, 4);
    let pi = linalg::block_diag(&neg(p), &neg(minus_p));
    let cc = to_dyn(beta() * alpha(1)) * linalg::I;
    let k = linalg::block2(&z, &cc, &cc, &z);
    BdfFrame::new(linalg::hermitian_part(&pi), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_oracle::{bogoliubov_vacuum, number_operator, OracleState};

    fn vec_of(xs: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(xs.len(), xs.iter().map(|&(a, b)| c(a, b)))
    }

    fn simple_frame() -> BdfFrame {
        // Π projects on e₂; J = conj.
        BdfFrame::new(linalg::real_diag(&[0.0, 0.0, 1.0]), linalg::identity(3)).unwrap()
    }

    #[test]
    fn branches_detected() {
        let mut rng = sampling::rng(11);
        for n in [2, 4, 6] {
            assert_eq!(random_frame(&mut rng, n, Branch::Preserves).unwrap().branch(), Branch::Preserves);
            assert_eq!(random_frame(&mut rng, n, Branch::Complements).unwrap().branch(), Branch::Complements);
        }
        assert_eq!(dirac_frame([0.3, -0.4, 1.1]).unwrap().branch(), Branch::Complements);
        let bad = linalg::real_diag(&[1.0, 0.5]);
        assert!(BdfFrame::new(bad, linalg::identity(2)).is_err());
    }

    #[test]
    fn car_on_random_frames() {
        let mut rng = sampling::rng(5);
        for n in 1..=6 {
            let frame = random_frame(&mut rng, n, Branch::Preserves).unwrap();
            let basis = frame.fock_basis().unwrap();
            let f = sampling::random_vector(&mut rng, n);
            let g = sampling::random_vector(&mut rng, n);
            let sf = field_operator(&frame, &f).unwrap();
            let sg = field_operator(&frame, &g).unwrap();
            let id = crate::fock_oracle::DenseOperator::identity(basis.dim());
            let ac = sf.adjoint().anticommutator(&sg);
            assert!(ac.distance(&id.scale(f.dotc(&g))) < 1e-12);
            assert!(sf.anticommutator(&sg).distance(&id.scale(c(0.0, 0.0))) < 1e-12);
        }
    }

    #[test]
    fn pieces_on_each_subspace() {
        let frame = simple_frame();
        let plus = frame.plus_basis().column(0).into_owned();
        let op = frame.psi_star(&plus).unwrap();
        assert!(op.annihilate.norm() == 0.0 && (op.create.norm() - 1.0).abs() < 1e-15);
        let minus = vec_of(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let op = frame.psi_star(&minus).unwrap();
        assert!(op.create.norm() < 1e-15 && (op.annihilate.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_and_single_excitations() {
        let frame = simple_frame();
        let basis = frame.fock_basis().unwrap();
        let vac = OracleState::vacuum(basis);
        let no = normal_ordered_pdm(&vac, &frame).unwrap();
        assert!(linalg::max_abs(&no.q) < 1e-15 && linalg::max_abs(&no.p) < 1e-15 && no.n_avg == 0.0);

        // a particle in the first plus mode
        let mut psi = CVector::zeros(basis.dim());
        psi[1] = c(1.0, 0.0);
        let st = OracleState::pure(basis, &psi).unwrap();
        let no = normal_ordered_pdm(&st, &frame).unwrap();
        let phi = frame.plus_basis().column(0).into_owned();
        assert!(linalg::max_abs(&(&no.q - &phi * phi.adjoint())) < 1e-14);
        assert!((no.n_avg - 1.0).abs() < 1e-14);
        assert_eq!(pair_probability(&st), 1.0);

        // a hole: the last mode carries Jφ with φ = e₂ ∈ range Π
        let mut psi = CVector::zeros(basis.dim());
        psi[4] = c(1.0, 0.0);
        let st = OracleState::pure(basis, &psi).unwrap();
        let no = normal_ordered_pdm(&st, &frame).unwrap();
        assert!(linalg::max_abs(&(&no.q + linalg::real_diag(&[0.0, 0.0, 1.0]))) < 1e-14);
        assert!((no.n_avg - 1.0).abs() < 1e-14);
    }

    #[test]
    fn block_formula_matches_two_point_build() {
        let mut rng = sampling::rng(21);
        for branch in [Branch::Preserves, Branch::Complements] {
            let frame = random_frame(&mut rng, 4, branch).unwrap();
            let s = random_spec(&mut rng, &frame).unwrap();
            let cs = s.c_mode_spec().unwrap();
            let psi = s.psi_spec();
            let (phi, chi) = (frame.plus_basis(), frame.minus_basis());
            let (g, b) = (&psi.gamma, psi.pairing_form());
            let nm = frame.n_minus();
            let want_g = linalg::block2(
                &(phi.adjoint() * g * phi),
                &-(phi.adjoint() * &b * linalg::conj(chi)),
                &(chi.transpose() * linalg::conj(&b) * phi),
                &(linalg::identity(nm) - linalg::conj(&(chi.adjoint() * g * chi))),
            );
            let want_b = linalg::block2(
                &(phi.adjoint() * &b * linalg::conj(phi)),
                &-(phi.adjoint() * g * chi),
                &(chi.transpose() * g.transpose() * linalg::conj(phi)),
                &-(chi.transpose() * linalg::conj(&b) * chi),
            );
            assert!(linalg::max_abs(&(&cs.gamma - want_g)) < 1e-12);
            assert!(linalg::max_abs(&(cs.pairing_form() - want_b)) < 1e-12);
        }
    }

    #[test]
    fn round_trip_and_bound() {
        let tol = Tolerances::default();
        let mut rng = sampling::rng(8);
        for (n, branch) in [(3, Branch::Preserves), (4, Branch::Complements), (4, Branch::Preserves)] {
            for _ in 0..5 {
                let frame = random_frame(&mut rng, n, branch).unwrap();
                let s = random_spec(&mut rng, &frame).unwrap();
                assert!(s.validate(&tol).first_failure().is_none(), "{:?}", s.validate(&tol).first_failure());
                let st = bdf_state_build(&s).unwrap();
                let no = normal_ordered_pdm(&st, &frame).unwrap();
                assert!(linalg::max_abs(&(&no.q - &s.q)) < 1e-8);
                assert!(linalg::max_abs(&(&no.p - &s.p)) < 1e-8);
                let number = st.expectation(&number_operator(st.basis())).unwrap().re;
                assert!((number - no.n_avg).abs() < 1e-9);
                assert!((number - s.relative_number()).abs() < 1e-9);
                assert!(st.vacuum_overlap() <= bdf_vacuum_bound(&s).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn mixed_rank_one() {
        let frame = simple_frame();
        let phi = frame.plus_basis().column(1).into_owned();
        let q = &phi * phi.adjoint() * c(0.35, 0.0);
        let s = BdfSpec::without_pairing(frame.clone(), q.clone(), &Tolerances::default()).unwrap();
        let st = bdf_state_build(&s).unwrap();
        let no = normal_ordered_pdm(&st, &frame).unwrap();
        assert!(linalg::max_abs(&(&no.q - q)) < 1e-9);
        assert!((st.vacuum_overlap() - 0.65).abs() < 1e-12);
        assert!(st.vacuum_overlap() <= bdf_vacuum_bound(&s).unwrap());
    }

    #[test]
    fn trivial_spec_is_vacuum() {
        let frame = dirac_frame([0.2, 0.1, -0.7]).unwrap();
        let s = BdfSpec::without_pairing(frame, CMatrix::zeros(8, 8), &Tolerances::default()).unwrap();
        assert_eq!(bdf_vacuum_bound(&s).unwrap(), 1.0);
        let st = bdf_state_build(&s).unwrap();
        assert!((st.vacuum_overlap() - 1.0).abs() < 1e-12);
        assert!(pair_probability(&st) < 1e-12);
    }

    #[test]
    fn bogoliubov_vacuum_pair_probability() {
        let basis = FockBasis::new(2).unwrap();
        let (psi, _) = bogoliubov_vacuum(&[1.0], 0, 0, &basis).unwrap();
        let st = OracleState::pure(basis, &psi).unwrap();
        assert!((pair_probability(&st) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn vacuum_bound_value() {
        let frame = BdfFrame::new(CMatrix::zeros(5, 5), linalg::identity(5)).unwrap();
        let s = BdfSpec::without_pairing(frame, linalg::identity(5), &Tolerances::default()).unwrap();
        assert!((s.relative_number() - 5.0).abs() < 1e-14);
        assert!((bdf_vacuum_bound(&s).unwrap() - 0.6246123924333875).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = sampling::rng(3);
        let frame = random_frame(&mut rng, 2, Branch::Complements).unwrap();
        let s = random_spec(&mut rng, &frame).unwrap();
        let back = BdfSpec::from_json(&s.to_json(), &Tolerances::default()).unwrap();
        assert!(linalg::max_abs(&(&back.q - &s.q)) == 0.0);
        assert_eq!(back.frame.branch(), Branch::Complements);
    }
}
