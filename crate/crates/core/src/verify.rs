//! Randomized comparison of the closed forms against the Fock-space oracle.
//!
//! Every suite draws its instances from a ChaCha8 stream seeded with
//! `seed ^ salt(suite)`, consumed in trial order, so a (suite, dim, trials,
//! seed) tuple always replays the same instances.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bdf_rep::{self, Branch};
use crate::constants;
use crate::error::{Error, Result};
use crate::fock_oracle::{
    bogoliubov_vacuum, exp_number, number_operator, quasi_free_oracle_state_with, FockBasis, OracleState, MODE_CAP,
};
use crate::linalg;
use crate::quasifree::{
    bls_diagonalize, filled_modes, hf_generating_function, hf_sector_distribution, interpolated_vacuum_bound,
    mixed_vacuum_bound, pure_hfb_generating_function, pure_hfb_k0_parity, sector_tail_bounds, QuasiFreeSpec, TailKind,
};
use crate::sampling::{self, SuiteRng};
use crate::tolerances::Tolerances;
use crate::wick::{enumerate_pairings, wick_expectation, wick_recursive, FieldSymbol};

pub const BETAS: [f64; 3] = [0.1, 1.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Hf,
    Pure,
    Mixed,
    Wick,
    Bdf,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Hf, Suite::Pure, Suite::Mixed, Suite::Wick, Suite::Bdf];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hf => "hf",
            Suite::Pure => "pure",
            Suite::Mixed => "mixed",
            Suite::Wick => "wick",
            Suite::Bdf => "bdf",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Suite::Hf => 0x11,
            Suite::Pure => 0x22,
            Suite::Mixed => 0x33,
            Suite::Wick => 0x44,
            Suite::Bdf => 0x55,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?} (expected hf, pure, mixed, wick, bdf or all)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Largest number of modes per instance.
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl VerifyOptions {
    pub fn new(dim: usize, trials: usize, seed: u64) -> Self {
        Self { dim, trials, seed, tol: Tolerances::default() }
    }

    pub fn check(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MODE_CAP {
            return Err(Error::DimensionCap { requested: self.dim, cap: MODE_CAP });
        }
        Ok(())
    }
}

/// Worst value of one check over all trials; the check holds when worst ≤ tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckStat {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub evaluations: usize,
}

impl CheckStat {
    /// tolerance − worst.
    pub fn margin(&self) -> f64 {
        self.tolerance - self.worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub check: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub instance: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckStat>,
    /// First failing instance, serialized for replay.
    pub failure: Option<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckStat> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tracker {
    checks: Vec<CheckStat>,
    failure: Option<Failure>,
    trial: usize,
}

impl Tracker {
    fn new() -> Self {
        Self { checks: Vec::new(), failure: None, trial: 0 }
    }

    fn record(&mut self, name: &'static str, value: f64, tolerance: f64, instance: impl FnOnce() -> Value) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckStat { name, worst: f64::NEG_INFINITY, tolerance, passed: true, evaluations: 0 });
                self.checks.len() - 1
            }
        };
        let stat = &mut self.checks[idx];
        stat.evaluations += 1;
        // NaN counts as a failure.
        let ok = value <= tolerance;
        if !ok || value > stat.worst || value.is_nan() {
            stat.worst = if value.is_nan() { f64::NAN } else { value.max(stat.worst) };
        }
        if !ok {
            stat.passed = false;
            if self.failure.is_none() {
                self.failure = Some(Failure { trial: self.trial, check: name, value, tolerance, instance: instance() });
            }
        }
    }

    fn error(&mut self, name: &'static str, err: &Error, instance: impl FnOnce() -> Value) {
        let msg = err.to_string();
        self.record(name, f64::INFINITY, 0.0, || json!({ "error": msg, "instance": instance() }));
    }

    fn finish(self, suite: Suite, opts: &VerifyOptions) -> SuiteReport {
        SuiteReport { suite, dim: opts.dim, trials: opts.trials, seed: opts.seed, checks: self.checks, failure: self.failure }
    }
}

fn spec_value(spec: &QuasiFreeSpec) -> Value {
    serde_json::from_str(&spec.to_json()).unwrap_or(Value::Null)
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    opts.check()?;
    let mut rng = sampling::rng(opts.seed ^ suite.salt());
    let mut t = Tracker::new();
    for trial in 0..opts.trials {
        t.trial = trial;
        match suite {
            Suite::Hf => hf_trial(&mut rng, opts, &mut t),
            Suite::Pure => pure_trial(&mut rng, opts, &mut t),
            Suite::Mixed => mixed_trial(&mut rng, opts, &mut t),
            Suite::Wick => wick_trial(&mut rng, opts, &mut t),
            Suite::Bdf => bdf_trial(&mut rng, opts, &mut t),
        }
    }
    if suite == Suite::Wick {
        for p in 1..=6 {
            let want: usize = (1..=p).map(|j| 2 * j - 1).product();
            let got = enumerate_pairings(p).map(|v| v.len()).unwrap_or(0);
            t.record("pairing count (2p-1)!!", (got as f64 - want as f64).abs(), 0.0, || json!({ "p": p }));
        }
    }
    Ok(t.finish(suite, opts))
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|&s| run_suite(s, opts)).collect()
}

fn oracle_generating(state: &OracleState, beta: f64) -> f64 {
    state.expectation(&exp_number(state.basis(), beta)).map(|z| z.re).unwrap_or(f64::NAN)
}

fn hf_trial(rng: &mut SuiteRng, opts: &VerifyOptions, t: &mut Tracker) {
    let n = rng.random_range(1..=opts.dim);
    let gamma = sampling::random_hf_gamma(rng, n);
    let spec = QuasiFreeSpec::hf(gamma.clone());
    let inst = || spec_value(&spec);
    let state = match quasi_free_oracle_state_with(&spec, &opts.tol) {
        Ok(s) => s,
        Err(e) => return t.error("oracle state", &e, inst),
    };
    for beta in BETAS {
        match hf_generating_function(&gamma, beta) {
            Ok(v) => t.record("generating function", (v - oracle_generating(&state, beta)).abs(), 1e-10, inst),
            Err(e) => t.error("generating function", &e, inst),
        }
    }
    let oracle = state.sector_distribution();
    let dist = match hf_sector_distribution(&gamma) {
        Ok(d) => d,
        Err(e) => return t.error("sector distribution", &e, inst),
    };
    let diff = dist.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    t.record("sector distribution", diff, 1e-10, inst);
    let k0 = filled_modes(&gamma, &opts.tol);
    let tr = linalg::trace_re(&gamma).max(0.0);
    let mut excess: f64 = 0.0;
    for (k, &p) in oracle.iter().enumerate() {
        let bound = if k < k0 { 0.0 } else { sector_tail_bounds(tr, k0, k, TailKind::Hf).unwrap_or(f64::NAN) };
        excess = excess.max(p - bound);
    }
    t.record("sector bound", excess, 1e-12, inst);
}

/// One Bogoliubov vacuum from the explicit pair formula and one random pure
/// quasi-free state per trial.
fn pure_trial(rng: &mut SuiteRng, opts: &VerifyOptions, t: &mut Tracker) {
    let l = rng.random_range(0..=4.min(opts.dim / 2));
    let free = opts.dim - 2 * l;
    let np = rng.random_range(0..=free);
    let na = rng.random_range(0..=free - np);
    let n = rng.random_range((2 * l + np + na).max(1)..=opts.dim);
    let lambdas: Vec<f64> = (0..l).map(|_| rng.random_range(0.05..3.0)).collect();
    let inst = json!({ "lambdas": lambdas, "particles": np, "antiparticles": na, "modes": n });
    let formula = FockBasis::new(n)
        .and_then(|basis| bogoliubov_vacuum(&lambdas, np, na, &basis).and_then(|(v, _)| OracleState::pure(basis, &v)));
    match formula {
        Ok(state) => pure_checks(&state, &inst, opts, t),
        Err(e) => t.error("oracle state", &e, || inst.clone()),
    }

    let n = rng.random_range(1..=opts.dim);
    let spec = sampling::random_pure_spec(rng, n);
    let inst = spec_value(&spec);
    match quasi_free_oracle_state_with(&spec, &opts.tol) {
        Ok(state) => pure_checks(&state, &inst, opts, t),
        Err(e) => t.error("oracle state", &e, || inst.clone()),
    }
}

fn pure_checks(state: &OracleState, inst: &Value, opts: &VerifyOptions, t: &mut Tracker) {
    let i = || inst.clone();
    // The closed forms only see (γ, B), read off the state itself.
    let spec = match QuasiFreeSpec::with_pairing_form(state.one_pdm(), state.pairing_form()) {
        Ok(s) => s,
        Err(e) => return t.error("pure spec", &e, i),
    };
    t.record("purity of measured Gamma", spec.purity_defect(), opts.tol.purity, i);
    for beta in BETAS {
        match pure_hfb_generating_function(&spec, beta) {
            Ok(v) => t.record("generating function", (v - oracle_generating(state, beta)).abs(), 1e-10, i),
            Err(e) => t.error("generating function", &e, i),
        }
    }
    let sectors = state.sector_distribution();
    match pure_hfb_k0_parity(&spec) {
        Ok(par) => {
            let worst = par.forbidden.iter().map(|&k| sectors[k]).fold(0.0, f64::max);
            t.record("forbidden sectors", worst, 1e-12, i);
            let tr = linalg::trace_re(&spec.gamma).max(0.0);
            let mut excess: f64 = 0.0;
            for (k, &p) in sectors.iter().enumerate() {
                excess = excess.max(p - sector_tail_bounds(tr, par.k0, k, TailKind::PureHfb).unwrap_or(f64::NAN));
            }
            t.record("sector bound", excess, 1e-12, i);
        }
        Err(e) => t.error("forbidden sectors", &e, i),
    }
}

fn mixed_trial(rng: &mut SuiteRng, opts: &VerifyOptions, t: &mut Tracker) {
    let n = rng.random_range(1..=opts.dim);
    let mut spec = sampling::random_mixed_spec(rng, n);
    if rng.random_bool(0.5) {
        spec = sampling::with_random_j(rng, &spec);
    }
    let inst = || spec_value(&spec);
    let state = match quasi_free_oracle_state_with(&spec, &opts.tol) {
        Ok(s) => s,
        Err(e) => return t.error("oracle state", &e, inst),
    };
    let overlap = state.vacuum_overlap();
    let tr = linalg::trace_re(&spec.gamma).max(0.0);
    match mixed_vacuum_bound(tr) {
        Ok(b) => t.record("overlap <= exp(-a tr gamma)", overlap - b, 1e-12, inst),
        Err(e) => t.error("overlap <= exp(-a tr gamma)", &e, inst),
    }
    let diag = match bls_diagonalize(&spec) {
        Ok(d) => d,
        Err(e) => return t.error("BLS diagonalization", &e, inst),
    };
    let k = constants::constants();
    match interpolated_vacuum_bound(diag.tr_d().max(0.0), diag.tr_vv, k.beta_star, k.theta_star) {
        Ok(b) => t.record("overlap <= interpolated bound", overlap - b, 1e-12, inst),
        Err(e) => t.error("overlap <= interpolated bound", &e, inst),
    }
    t.record("V Gamma V* = Gamma(D, 0)", diag.conjugation_defect(&spec), 1e-8, inst);
    t.record("Bogoliubov map unitary", diag.unitarity_defect(), 1e-8, inst);
    t.record("D <= 1/2", diag.d.iter().map(|d| d - 0.5).fold(f64::NEG_INFINITY, f64::max), 1e-9, inst);
    t.record("tr V*V + tr D >= tr gamma", tr - diag.tr_vv - diag.tr_d(), 1e-8, inst);
}

fn random_symbol(rng: &mut SuiteRng, n: usize) -> FieldSymbol {
    let v = sampling::random_vector(rng, n);
    if rng.random_bool(0.5) {
        FieldSymbol::creator(v)
    } else {
        FieldSymbol::annihilator(v)
    }
}

fn symbols_value(spec: &QuasiFreeSpec, syms: &[FieldSymbol]) -> Value {
    let s: Vec<Value> = syms
        .iter()
        .map(|e| {
            json!({
                "kind": format!("{:?}", e.kind),
                "vector": e.vector.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "spec": spec_value(spec), "symbols": s })
}

fn wick_trial(rng: &mut SuiteRng, opts: &VerifyOptions, t: &mut Tracker) {
    let n = rng.random_range(1..=opts.dim);
    let mut spec = if rng.random_bool(0.2) {
        QuasiFreeSpec::hf(sampling::random_hf_gamma(rng, n))
    } else {
        sampling::random_mixed_spec(rng, n)
    };
    if rng.random_bool(0.5) {
        spec = sampling::with_random_j(rng, &spec);
    }
    let state = match quasi_free_oracle_state_with(&spec, &opts.tol) {
        Ok(s) => s,
        Err(e) => return t.error("oracle state", &e, || spec_value(&spec)),
    };
    for len in [2usize, 4, 6] {
        let syms: Vec<FieldSymbol> = (0..len).map(|_| random_symbol(rng, n)).collect();
        let inst = || symbols_value(&spec, &syms);
        let (direct, recursive) = match (wick_expectation(&spec, &syms), wick_recursive(&spec, &syms)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return t.error("wick evaluation", &e, inst),
        };
        let ops: Vec<_> = syms.iter().map(FieldSymbol::to_operator).collect();
        let oracle = state.expectation_of_product(&ops);
        let scale = oracle.norm().max(1.0);
        t.record("direct vs recursive", (direct - recursive).norm() / scale, 1e-12, inst);
        let name = match len {
            2 => "oracle 2-point",
            4 => "oracle 4-point",
            _ => "oracle 6-point",
        };
        t.record(name, (direct - oracle).norm() / scale, 1e-9, inst);
    }
    // Odd products vanish.
    let syms: Vec<FieldSymbol> = (0..3).map(|_| random_symbol(rng, n)).collect();
    let ops: Vec<_> = syms.iter().map(FieldSymbol::to_operator).collect();
    t.record("odd 3-point vanishes", state.expectation_of_product(&ops).norm(), 1e-12, || symbols_value(&spec, &syms));
}

fn bdf_trial(rng: &mut SuiteRng, opts: &VerifyOptions, t: &mut Tracker) {
    let n = rng.random_range(1..=opts.dim);
    let branch = if n % 2 == 0 && rng.random_bool(0.5) { Branch::Complements } else { Branch::Preserves };
    let frame = match bdf_rep::random_frame(rng, n, branch) {
        Ok(f) => f,
        Err(e) => return t.error("frame", &e, || json!({ "n": n })),
    };
    let spec = if rng.random_bool(0.25) { bdf_rep::random_hf_spec(rng, &frame) } else { bdf_rep::random_spec(rng, &frame) };
    let spec = match spec {
        Ok(s) => s,
        Err(e) => return t.error("spec", &e, || json!({ "n": n })),
    };
    let inst = || serde_json::from_str(&spec.to_json()).unwrap_or(Value::Null);

    // CAR on the dense representation.
    let f = sampling::random_vector(rng, n);
    let g = sampling::random_vector(rng, n);
    match (bdf_rep::field_operator(&frame, &f), bdf_rep::field_operator(&frame, &g)) {
        (Ok(sf), Ok(sg)) => {
            let id = crate::fock_oracle::DenseOperator::identity(sf.dim());
            let mixed = sf.adjoint().anticommutator(&sg).distance(&id.scale(f.dotc(&g)));
            let same = linalg::max_abs(sf.anticommutator(&sg).matrix());
            t.record("CAR", mixed.max(same), 1e-12, inst);
        }
        (Err(e), _) | (_, Err(e)) => return t.error("CAR", &e, inst),
    }

    let report = spec.validate(&opts.tol);
    match report.first_failure() {
        None => t.record("spec invariants", 0.0, 0.0, inst),
        Some(c) => t.record("spec invariants", c.value, 0.0, inst),
    }
    t.record("Q++ - Q-- >= Q^2", report.number_inequality.value, opts.tol.identity, inst);

    let state = match bdf_rep::bdf_state_build_with(&spec, &opts.tol) {
        Ok(s) => s,
        Err(e) => return t.error("state build", &e, inst),
    };
    let no = match bdf_rep::normal_ordered_pdm(&state, &frame) {
        Ok(x) => x,
        Err(e) => return t.error("normal ordered pdm", &e, inst),
    };
    let rt = linalg::max_abs(&(&no.q - &spec.q)).max(linalg::max_abs(&(&no.p - &spec.p)));
    t.record("(Q, p) round trip", rt, 1e-8, inst);
    let number = state.expectation(&number_operator(state.basis())).map(|z| z.re).unwrap_or(f64::NAN);
    let sector_sum: f64 = state.sector_distribution().iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let trq = spec.relative_number();
    let spread = (number - trq).abs().max((sector_sum - trq).abs()).max((no.n_avg - trq).abs());
    t.record("omega(N) = tr(Q++ - Q--)", spread, 1e-9, inst);
    match bdf_rep::bdf_vacuum_bound(&spec) {
        Ok(b) => t.record("overlap <= exp(-a tr(Q++ - Q--))", state.vacuum_overlap() - b, 1e-12, inst),
        Err(e) => t.error("overlap <= exp(-a tr(Q++ - Q--))", &e, inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_small() {
        let opts = VerifyOptions::new(4, 12, 7);
        for r in run_all(&opts).unwrap() {
            assert!(r.passed(), "{}: {:?}", r.suite, r.failure);
            assert!(!r.checks.is_empty());
        }
    }

    #[test]
    fn deterministic() {
        let opts = VerifyOptions::new(3, 5, 42);
        let a = run_suite(Suite::Wick, &opts).unwrap();
        let b = run_suite(Suite::Wick, &opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn cap_guard() {
        assert!(matches!(run_suite(Suite::Hf, &VerifyOptions::new(20, 1, 0)), Err(Error::DimensionCap { .. })));
        assert_eq!("bdf".parse::<Suite>().unwrap(), Suite::Bdf);
        assert!("nope".parse::<Suite>().is_err());
    }
}
