use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, block2, check_square, identity, CMatrix, MatrixJson};
use crate::tolerances::Tolerances;

/// One-particle density matrix γ, pairing matrix α and the unitary K of the
/// anti-unitary J = K·conj.
///
/// Internally the pairing enters through the form B = αK, for which
/// B_{ij} = ω(a_i a_j) in the mode basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiFreeSpec {
    pub gamma: CMatrix,
    pub alpha: Option<CMatrix>,
    pub j_unitary: CMatrix,
}

impl QuasiFreeSpec {
    pub fn new(gamma: CMatrix, alpha: Option<CMatrix>, j_unitary: CMatrix) -> Result<Self> {
        let n = gamma.nrows();
        check_square(&gamma, n)?;
        check_square(&j_unitary, n)?;
        if let Some(a) = &alpha {
            check_square(a, n)?;
        }
        Ok(Self {
            gamma,
            alpha,
            j_unitary,
        })
    }

    /// Hartree-Fock data: no pairing, J = conj.
    pub fn hf(gamma: CMatrix) -> Self {
        let n = gamma.nrows();
        Self {
            gamma,
            alpha: None,
            j_unitary: identity(n),
        }
    }

    /// Data given directly by the pairing form B (so K = Id and α = B).
    pub fn with_pairing_form(gamma: CMatrix, b: CMatrix) -> Result<Self> {
        let n = gamma.nrows();
        Self::new(gamma, Some(b), identity(n))
    }

    pub fn n_modes(&self) -> usize {
        self.gamma.nrows()
    }

    /// B = αK (zero when α is absent).
    pub fn pairing_form(&self) -> CMatrix {
        match &self.alpha {
            Some(a) => a * &self.j_unitary,
            None => CMatrix::zeros(self.n_modes(), self.n_modes()),
        }
    }

    /// Γ(γ, α) = [[γ, α], [α*, 1 − JγJ*]].
    pub fn gamma_block(&self) -> CMatrix {
        let n = self.n_modes();
        let k = &self.j_unitary;
        let a = self.alpha.clone().unwrap_or_else(|| CMatrix::zeros(n, n));
        let jgj = k * linalg::conj(&self.gamma) * k.adjoint();
        block2(&self.gamma, &a, &a.adjoint(), &(identity(n) - jgj))
    }

    /// Γ in the frame where J is plain conjugation: [[γ, B], [B*, 1 − γ̄]].
    pub fn reduced_block(&self) -> CMatrix {
        let n = self.n_modes();
        let b = self.pairing_form();
        block2(&self.gamma, &b, &b.adjoint(), &(identity(n) - linalg::conj(&self.gamma)))
    }

    /// Same state with K = Id and α replaced by B.
    pub fn reduced(&self) -> Self {
        Self {
            gamma: self.gamma.clone(),
            alpha: self.alpha.as_ref().map(|_| self.pairing_form()),
            j_unitary: identity(self.n_modes()),
        }
    }

    /// ‖Γ² − Γ‖ in operator norm.
    pub fn purity_defect(&self) -> f64 {
        let g = self.reduced_block();
        linalg::op_norm(&(&g * &g - &g))
    }

    pub fn require_pure(&self, tol: &Tolerances) -> Result<()> {
        let defect = self.purity_defect();
        if defect > tol.purity {
            return Err(Error::NotPure { defect });
        }
        Ok(())
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self, &Tolerances::default())
    }

    pub fn require_valid(&self, tol: &Tolerances) -> Result<()> {
        let r = validate(self, tol);
        match r.first_failure() {
            None => Ok(()),
            Some(c) => Err(Error::Constraint {
                what: c.name,
                margin: c.value,
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpecJson::from(self)).expect("spec serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let js: SpecJson = serde_json::from_str(s)?;
        Self::try_from(&js)
    }
}

/// Outcome of one invariant check. `value` is the worst violation found
/// (zero or negative means the check holds with that much room).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, defect: f64, tol: f64) -> Self {
        Self {
            name,
            value: defect,
            passed: defect <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub gamma_hermitian: Check,
    /// max(−λ_min(γ), λ_max(γ) − 1)
    pub gamma_in_unit_interval: Check,
    pub k_unitary: Check,
    /// max|B + Bᵀ|
    pub pairing_antisymmetric: Check,
    /// max(−λ_min(Γ), λ_max(Γ) − 1)
    pub block_in_unit_interval: Check,
    /// −λ_min(γ − γ² − αα*)
    pub gamma_alpha_inequality: Check,
    pub gamma_eigen_range: (f64, f64),
    pub block_eigen_range: (f64, f64),
}

impl ValidationReport {
    pub fn checks(&self) -> [Check; 6] {
        [
            self.gamma_hermitian,
            self.gamma_in_unit_interval,
            self.k_unitary,
            self.pairing_antisymmetric,
            self.block_in_unit_interval,
            self.gamma_alpha_inequality,
        ]
    }

    pub fn valid(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<Check> {
        self.checks().into_iter().find(|c| !c.passed)
    }
}

pub fn validate(spec: &QuasiFreeSpec, tol: &Tolerances) -> ValidationReport {
    let n = spec.n_modes();
    let t = tol.identity;
    let gw = linalg::eigvalsh(&spec.gamma);
    let g_range = (gw.first().copied().unwrap_or(0.0), gw.last().copied().unwrap_or(0.0));
    let block = spec.gamma_block();
    let bw = linalg::eigvalsh(&block);
    let b_range = (bw.first().copied().unwrap_or(0.0), bw.last().copied().unwrap_or(0.0));
    let b = spec.pairing_form();
    let a = spec.alpha.clone().unwrap_or_else(|| CMatrix::zeros(n, n));
    let ineq = &spec.gamma - &spec.gamma * &spec.gamma - &a * a.adjoint();
    let ineq_min = linalg::eigvalsh(&ineq).first().copied().unwrap_or(0.0);
    ValidationReport {
        gamma_hermitian: Check::at_most("gamma hermitian", linalg::hermiticity_defect(&spec.gamma), t),
        gamma_in_unit_interval: Check::at_most("0 <= gamma <= 1", (-g_range.0).max(g_range.1 - 1.0), t),
        k_unitary: Check::at_most("K unitary", linalg::unitarity_defect(&spec.j_unitary), t),
        pairing_antisymmetric: Check::at_most("alpha J antisymmetric", linalg::max_abs(&(&b + b.transpose())), t),
        block_in_unit_interval: Check::at_most("0 <= Gamma <= 1", (-b_range.0).max(b_range.1 - 1.0), t),
        gamma_alpha_inequality: Check::at_most("gamma^2 + alpha alpha* <= gamma", -ineq_min, t),
        gamma_eigen_range: g_range,
        block_eigen_range: b_range,
    }
}

/// JSON form of a spec; `alpha` and `j_unitary` are optional (absent K means J = conj).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecJson {
    pub gamma: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_unitary: Option<MatrixJson>,
}

impl From<&QuasiFreeSpec> for SpecJson {
    fn from(s: &QuasiFreeSpec) -> Self {
        SpecJson {
            gamma: MatrixJson::from(&s.gamma),
            alpha: s.alpha.as_ref().map(MatrixJson::from),
            j_unitary: Some(MatrixJson::from(&s.j_unitary)),
        }
    }
}

impl TryFrom<&SpecJson> for QuasiFreeSpec {
    type Error = Error;
    fn try_from(js: &SpecJson) -> Result<Self> {
        let gamma = CMatrix::try_from(&js.gamma)?;
        let n = gamma.nrows();
        let alpha = js.alpha.as_ref().map(CMatrix::try_from).transpose()?;
        let k = match &js.j_unitary {
            Some(k) => CMatrix::try_from(k)?,
            None => identity(n),
        };
        QuasiFreeSpec::new(gamma, alpha, k)
    }
}
