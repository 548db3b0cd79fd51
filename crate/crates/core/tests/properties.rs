//! Invariants as proptest properties. Instances come from the library's seeded
//! generators; proptest drives the seed and the small integer parameters.

use proptest::prelude::*;
use quasifree::bdf_rep::{self, bdf_state_build, normal_ordered_pdm, Branch};
use quasifree::fock_oracle::{
    exp_number, mode_operators, number_operator, quasi_free_oracle_state, FockBasis, OracleState,
};
use quasifree::linalg::{self, c, CVector, C64};
use quasifree::quasifree::{
    bls_diagonalize, filled_modes, hf_generating_function, hf_sector_distribution, mixed_vacuum_bound,
    sector_tail_bounds, QuasiFreeSpec, TailKind,
};
use quasifree::sampling;
use quasifree::wick::{wick_expectation, wick_recursive, FieldSymbol};
use quasifree::Tolerances;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn max_abs(m: &quasifree::CMatrix) -> f64 {
    linalg::max_abs(m)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn car_for_mode_operators(n in 1usize..=5) {
        let basis = FockBasis::new(n).unwrap();
        let ops: Vec<_> = (0..n).map(|i| mode_operators(&basis, i).unwrap()).collect();
        let id = quasifree::CMatrix::identity(basis.dim(), basis.dim());
        for i in 0..n {
            for j in 0..n {
                let (ci, ai) = &ops[i];
                let (cj, aj) = &ops[j];
                let delta = if i == j { 1.0 } else { 0.0 };
                let mixed = ai.anticommutator(cj).into_matrix() - &id * c(delta, 0.0);
                prop_assert!(max_abs(&mixed) <= 1e-12);
                prop_assert!(max_abs(ai.anticommutator(aj).matrix()) <= 1e-12);
                prop_assert!(max_abs(ci.anticommutator(cj).matrix()) <= 1e-12);
            }
        }
    }

    #[test]
    fn oracle_state_round_trip(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sampling::rng(seed);
        let spec = sampling::random_mixed_spec(&mut rng, n);
        let state = quasi_free_oracle_state(&spec).unwrap();
        let d = state.defects();
        prop_assert!(d.hermiticity <= 1e-12 && d.trace <= 1e-12 && d.min_eigenvalue >= -1e-12);
        prop_assert!(max_abs(&(state.one_pdm() - &spec.gamma)) <= 1e-9);
        prop_assert!(max_abs(&(state.pairing_form() - spec.pairing_form())) <= 1e-9);
        let sectors = state.sector_distribution();
        let total: f64 = sectors.iter().sum();
        let mean: f64 = sectors.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!((mean - linalg::trace_re(&spec.gamma)).abs() <= 1e-9);
    }

    #[test]
    fn wick_adjacent_swap(seed in any::<u64>(), n in 1usize..=4, p in 1usize..=3, pos in 0usize..5) {
        let mut rng = sampling::rng(seed);
        let spec = sampling::random_mixed_spec(&mut rng, n);
        let symbols: Vec<FieldSymbol> = (0..2 * p)
            .map(|_| {
                let v = sampling::random_vector(&mut rng, n);
                if rand::Rng::random_bool(&mut rng, 0.5) { FieldSymbol::creator(v) } else { FieldSymbol::annihilator(v) }
            })
            .collect();
        let i = pos % (2 * p - 1);
        let mut swapped = symbols.clone();
        swapped.swap(i, i + 1);
        let mut rest = symbols.clone();
        rest.drain(i..i + 2);
        // e_i e_{i+1} = −e_{i+1} e_i + {e_i, e_{i+1}}, with a scalar anticommutator.
        let rest_value = if rest.is_empty() { C64::new(1.0, 0.0) } else { wick_expectation(&spec, &rest).unwrap() };
        let lhs = wick_expectation(&spec, &symbols).unwrap() + wick_expectation(&spec, &swapped).unwrap();
        let rhs = symbols[i].anticommutator(&symbols[i + 1]) * rest_value;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        let direct = wick_expectation(&spec, &symbols).unwrap();
        prop_assert!((direct - wick_recursive(&spec, &symbols).unwrap()).norm() <= 1e-12 * (1.0 + direct.norm()));
    }

    #[test]
    fn hf_generating_is_sector_transform(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = sampling::rng(seed);
        let gamma = sampling::random_hf_gamma(&mut rng, n);
        let sectors = hf_sector_distribution(&gamma).unwrap();
        let mut prev = f64::INFINITY;
        for beta in [0.1, 1.0, 3.0] {
            let g = hf_generating_function(&gamma, beta).unwrap();
            let s: f64 = sectors.iter().enumerate().map(|(k, p)| (-beta * k as f64).exp() * p).sum();
            prop_assert!((g - s).abs() <= 1e-12);
            if linalg::trace_re(&gamma) > 1e-9 {
                prop_assert!(g < prev);
            }
            prev = g;
        }
        let k0 = filled_modes(&gamma, &Tolerances::default());
        let tr = linalg::trace_re(&gamma);
        for (k, &pk) in sectors.iter().enumerate().skip(k0) {
            prop_assert!(pk <= sector_tail_bounds(tr, k0, k, TailKind::Hf).unwrap() + 1e-12);
        }
    }

    #[test]
    fn bls_and_overlap(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = sampling::rng(seed);
        let spec = sampling::random_mixed_spec(&mut rng, n);
        let spec = sampling::with_random_j(&mut rng, &spec);
        let d = bls_diagonalize(&spec).unwrap();
        prop_assert!(d.unitarity_defect() <= 1e-8);
        prop_assert!(d.conjugation_defect(&spec) <= 1e-8);
        prop_assert!(d.d.iter().all(|&x| x <= 0.5 + 1e-12));
        let tr = linalg::trace_re(&spec.gamma);
        prop_assert!(d.tr_vv + d.tr_d() >= tr - 1e-8);
        let state = quasi_free_oracle_state(&spec).unwrap();
        prop_assert!(state.vacuum_overlap() <= mixed_vacuum_bound(tr).unwrap() + 1e-12);
    }

    #[test]
    fn bdf_invariants(seed in any::<u64>(), n in 2usize..=6, complements in any::<bool>()) {
        let mut rng = sampling::rng(seed);
        let branch = if complements && n % 2 == 0 { Branch::Complements } else { Branch::Preserves };
        let frame = bdf_rep::random_frame(&mut rng, n, branch).unwrap();
        let spec = bdf_rep::random_spec(&mut rng, &frame).unwrap();
        let state = bdf_state_build(&spec).unwrap();
        let back = normal_ordered_pdm(&state, &frame).unwrap();
        prop_assert!(max_abs(&(&back.q - &spec.q)) <= 1e-8);
        prop_assert!(max_abs(&(&back.p - &spec.p)) <= 1e-8);

        let (qpp, qmm) = frame.diagonal_blocks(&spec.q);
        let gap = qpp - qmm - &spec.q * &spec.q;
        prop_assert!(linalg::eigvalsh(&linalg::hermitian_part(&gap))[0] >= -1e-10);

        let n_op = number_operator(state.basis());
        let from_oracle = state.expectation(&n_op).unwrap().re;
        let from_sectors: f64 = state.sector_distribution().iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        prop_assert!((from_oracle - back.n_avg).abs() <= 1e-9);
        prop_assert!((from_sectors - back.n_avg).abs() <= 1e-9);
        prop_assert!(state.vacuum_overlap() <= bdf_rep::bdf_vacuum_bound(&spec).unwrap() + 1e-12);
    }

    #[test]
    fn bdf_field_car(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = sampling::rng(seed);
        let frame = bdf_rep::random_frame(&mut rng, n, Branch::Preserves).unwrap();
        let f = sampling::random_vector(&mut rng, n);
        let g = sampling::random_vector(&mut rng, n);
        let basis = frame.fock_basis().unwrap();
        let psf = frame.psi_star(&f).unwrap().to_dense(&basis);
        let psg = frame.psi(&g).unwrap().to_dense(&basis);
        let psg_star = frame.psi_star(&g).unwrap().to_dense(&basis);
        let id = quasifree::CMatrix::identity(basis.dim(), basis.dim());
        prop_assert!(max_abs(&(psg.anticommutator(&psf).into_matrix() - &id * g.dotc(&f))) <= 1e-12 * (1.0 + f.norm() * g.norm()));
        prop_assert!(max_abs(psf.anticommutator(&psg_star).matrix()) <= 1e-12 * (1.0 + f.norm() * g.norm()));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn pure_vacuum_generating_function(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sampling::rng(seed);
        let spec = sampling::random_pure_spec(&mut rng, n);
        let state = quasi_free_oracle_state(&spec).unwrap();
        let measured = QuasiFreeSpec::with_pairing_form(state.one_pdm(), state.pairing_form()).unwrap();
        for beta in [0.1, 1.0, 3.0] {
            let want = state.expectation(&exp_number(state.basis(), beta)).unwrap().re;
            let got = quasifree::quasifree::pure_hfb_generating_function(&measured, beta).unwrap();
            prop_assert!((got - want).abs() <= 1e-10);
        }
        let parity = quasifree::quasifree::pure_hfb_k0_parity(&measured).unwrap();
        let sectors = state.sector_distribution();
        for k in parity.forbidden {
            prop_assert!(sectors[k] <= 1e-12);
        }
    }
}

#[test]
fn vacuum_state_is_sharp() {
    let state = OracleState::vacuum(FockBasis::new(3).unwrap());
    assert_eq!(state.vacuum_overlap(), 1.0);
    let mut v = CVector::zeros(3);
    v[0] = c(1.0, 0.0);
    assert_eq!(state.expectation_of_product(&[quasifree::fock_oracle::FieldOperator::annihilator(&v)]), C64::new(0.0, 0.0));
}
