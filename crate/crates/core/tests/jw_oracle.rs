use majorana_chain::ed::{ed_expectation, ed_ground, EdOperator, ParitySector};
use majorana_chain::jw::{
    jw_fermion_to_pauli, jw_pauli_to_fermion, FermionMonomial, FermionOp, Parity, Pauli, PauliString, SiteWindow,
};
use majorana_chain::observables::wick_expectation;
use majorana_chain::quasifree::{build_model, ground_covariance, pauli_terms, params, Boundary, MODEL_NAMES};
use majorana_chain::random::{even_monomial, quadratic_hamiltonian};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SITES: usize = 6;

fn window() -> SiteWindow {
    SiteWindow::new(0, SITES as i64 - 1)
}

fn pauli_letter() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

/// Canonical key of a Pauli sum: letters as text with summed weights.
fn normalized(terms: &[PauliString]) -> Vec<(String, Complex64)> {
    let mut out: Vec<(String, Complex64)> = Vec::new();
    for t in terms {
        let key: String = t.letters().iter().map(|l| l.letter()).collect();
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, w)) => *w += t.weight(),
            None => out.push((key, t.weight())),
        }
    }
    out.retain(|(_, w)| w.norm() > 1e-14);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn same_sum(a: &[PauliString], b: &[PauliString]) -> bool {
    let (a, b) = (normalized(a), normalized(b));
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.0 == y.0 && (x.1 - y.1).norm() < 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_round_trip_is_exact(letters in proptest::collection::vec(pauli_letter(), SITES)) {
        let p = PauliString::new(0, letters);
        prop_assume!(p.is_even());
        let m = jw_pauli_to_fermion(&p);
        prop_assert_eq!(m.parity(), Parity::Even);
        let img = jw_fermion_to_pauli(&m, window()).unwrap();
        prop_assert!(img.tail.is_none());
        let back = img.single().expect("a Majorana monomial maps to one string");
        prop_assert!(back.same_letters(&p));
        prop_assert_eq!(back.weight(), p.weight());
    }

    #[test]
    fn jw_is_multiplicative_on_even_monomials(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = even_monomial(SITES, 6, &mut rng);
        let b = even_monomial(SITES, 6, &mut rng);
        let ab = jw_fermion_to_pauli(&(&a * &b), window()).unwrap();
        let prod = jw_fermion_to_pauli(&a, window()).unwrap().product(&jw_fermion_to_pauli(&b, window()).unwrap());
        prop_assert!(same_sum(&ab.terms, &prod.terms));
    }

    #[test]
    fn odd_pairs_cancel_their_tails(i in 0i64..SITES as i64, j in 0i64..SITES as i64) {
        let a = jw_fermion_to_pauli(&FermionMonomial::c(i), window()).unwrap();
        let b = jw_fermion_to_pauli(&FermionMonomial::cdag(j), window()).unwrap();
        prop_assert!(a.tail.is_some() && b.tail.is_some());
        let ab = a.product(&b);
        prop_assert!(ab.tail.is_none());
        let direct = jw_fermion_to_pauli(&(&FermionMonomial::c(i) * &FermionMonomial::cdag(j)), window()).unwrap();
        prop_assert!(same_sum(&ab.terms, &direct.terms));
    }

    #[test]
    fn even_expectations_agree_through_the_map(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = quadratic_hamiltonian(SITES, &mut rng);
        let op = EdOperator::from_hamiltonian(&h).unwrap();
        prop_assert!(op.conserves_parity());
        let st = ed_ground(&op).unwrap();
        for _ in 0..8 {
            let m = even_monomial(SITES, 6, &mut rng);
            let img = jw_fermion_to_pauli(&m, window()).unwrap();
            let f = ed_expectation(&st, &m).unwrap();
            let p = ed_expectation(&st, &img.terms).unwrap();
            prop_assert!((f - p).norm() < 1e-12);
        }
    }

    #[test]
    fn wick_matches_ed(sites in 2usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = quadratic_hamiltonian(sites, &mut rng);
        let Ok(g) = ground_covariance(&h) else { return Ok(()) };
        let st = ed_ground(&EdOperator::from_hamiltonian(&h).unwrap()).unwrap();
        prop_assume!(st.parity_sector != ParitySector::Mixed);
        for _ in 0..8 {
            let m = even_monomial(sites, 6, &mut rng);
            let w = wick_expectation(&g, &m).unwrap();
            let e = ed_expectation(&st, &m).unwrap();
            prop_assert!((w - e).norm() < 1e-10, "{m}: wick {w} ed {e}");
        }
        // odd monomials vanish on both sides
        let odd = &even_monomial(sites, 4, &mut rng) * &FermionMonomial::majorana_odd(0);
        prop_assert_eq!(wick_expectation(&g, &odd).unwrap(), Complex64::new(0.0, 0.0));
        prop_assert!(ed_expectation(&st, &odd).unwrap().norm() < 1e-10);
    }
}

#[test]
fn catalog_hamiltonians_conserve_parity() {
    let p = params([("J", 1.0), ("lambda", 0.5), ("gamma", 0.25), ("mu", 1.0)]);
    for name in ["kitaev", "xy", "trivial"] {
        let allowed: Vec<&str> = match name {
            "kitaev" => vec!["J", "lambda"],
            "xy" => vec!["gamma", "lambda"],
            _ => vec!["mu"],
        };
        let p = p.iter().filter(|(k, _)| allowed.contains(&k.as_str())).map(|(k, v)| (k.clone(), *v)).collect();
        for boundary in [Boundary::Open, Boundary::Ring] {
            let h = build_model(name, 6, &p, boundary).unwrap();
            let op = EdOperator::from_hamiltonian(&h).unwrap();
            assert!(op.conserves_parity() && op.is_hermitian(), "{name} {boundary:?}");
            let spin = EdOperator::from_pauli(6, &pauli_terms(name, 6, &p, boundary).unwrap().unwrap()).unwrap();
            assert!(spin.conserves_parity() && spin.is_hermitian());
        }
    }
    assert!(MODEL_NAMES.contains(&"custom"));
}

#[test]
fn kitaev_bond_pairings_are_saturated() {
    // the open chain has an exact edge zero mode, so use the ring
    let h = build_model("kitaev", 8, &params([("J", 1.0), ("lambda", 0.0)]), Boundary::Ring).unwrap();
    let g = ground_covariance(&h).unwrap();
    let st = ed_ground(&EdOperator::from_hamiltonian(&h).unwrap()).unwrap();
    assert_ne!(st.parity_sector, ParitySector::Mixed);
    for j in 0..7i64 {
        let bond = FermionMonomial::new(vec![(j, FermionOp::MajoranaOdd), (j + 1, FermionOp::MajoranaEven)])
            .with_coeff(Complex64::new(0.0, -1.0));
        let e = ed_expectation(&st, &bond).unwrap();
        let w = wick_expectation(&g, &bond).unwrap();
        assert!((e - 1.0).norm() < 1e-10 && (w - 1.0).norm() < 1e-10, "bond {j}: ed {e} wick {w}");
    }
}

#[test]
fn spin_ring_ground_pair_is_flagged() {
    let terms = pauli_terms("kitaev", 8, &params([("J", 1.0), ("lambda", 0.0)]), Boundary::Ring)
        .unwrap()
        .unwrap();
    let st = ed_ground(&EdOperator::from_pauli(8, &terms).unwrap()).unwrap();
    assert_eq!(st.parity_sector, ParitySector::Mixed);
    assert!((st.energy + 8.0).abs() < 1e-10);
}
