//! Property tests over random small algebras and the corpus: closure
//! operators, identity persistence under products, and the relation
//! calculus laws the other modules lean on.

use proptest::prelude::*;

use cdspec::{
    admissible_closure, all_congruences, congruence_generate, direct_product, eval_term,
    holds_identity, parse_algebra, serialize_algebra, subalgebra_generate, tolerance_generate,
    BinRel, FiniteAlgebra, Signature, Term,
};

fn corpus(name: &str) -> FiniteAlgebra {
    let path = format!("{}/../../corpus/{name}.alg", env!("CARGO_MANIFEST_DIR"));
    parse_algebra(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn corpus_all() -> Vec<FiniteAlgebra> {
    ["lattice2", "implication2", "majmin2", "baker2", "trivial1"]
        .iter()
        .map(|n| corpus(n))
        .collect()
}

/// Random algebra: size 2..=4, one binary and one unary operation.
fn arb_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let binary = proptest::collection::vec(0..n, n * n);
            let unary = proptest::collection::vec(0..n, n);
            (Just(n), binary, unary)
        })
        .prop_map(|(n, binary, unary)| {
            let sig = Signature::new(vec![("f".into(), 2), ("u".into(), 1)]).unwrap();
            FiniteAlgebra::new("random", n, sig, vec![binary, unary]).unwrap()
        })
}

fn arb_pairs(n: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    proptest::collection::vec((0..n, 0..n), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_operators_behave((a, seed) in arb_algebra().prop_flat_map(|a| {
        let n = a.size();
        (Just(a), arb_pairs(n))
    })) {
        let base = admissible_closure(&a, &seed);
        // extensive
        for &(x, y) in &seed {
            prop_assert!(base.get(x, y));
        }
        prop_assert!(base.is_reflexive());
        prop_assert!(base.is_admissible_for(&a));
        // idempotent
        prop_assert_eq!(admissible_closure(&a, &base.pairs()), base.clone());
        // monotone: closing a subset stays below
        if !seed.is_empty() {
            let sub = admissible_closure(&a, &seed[1..]);
            prop_assert!(sub.is_subset(&base).unwrap());
        }
        // tolerance and congruence dominate pointwise
        let tol = tolerance_generate(&a, &seed);
        let con = congruence_generate(&a, &seed).as_binrel();
        prop_assert!(base.is_subset(&tol).unwrap());
        prop_assert!(tol.is_subset(&con).unwrap());
        prop_assert!(tol.is_symmetric());
        prop_assert!(con.is_admissible_for(&a));
        prop_assert!(tol.is_admissible_for(&a));
        // congruence generation is idempotent
        let again = congruence_generate(&a, &con.pairs());
        prop_assert_eq!(again.as_binrel(), con);
    }

    #[test]
    fn subalgebra_generation_idempotent(a in arb_algebra(), s in 0usize..4) {
        let seed = s % a.size();
        let g = subalgebra_generate(&a, &[seed]);
        let again = subalgebra_generate(&a, &g.elements);
        prop_assert_eq!(
            g.elements.iter().copied().collect::<std::collections::BTreeSet<_>>(),
            again.elements.iter().copied().collect::<std::collections::BTreeSet<_>>()
        );
    }

    #[test]
    fn serialize_parse_round_trip(a in arb_algebra()) {
        let text = serialize_algebra(&a);
        let b = parse_algebra(&text).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(serialize_algebra(&b), text);
    }

    #[test]
    fn identities_persist_in_products(a in arb_algebra(), b in arb_algebra()) {
        // f(x, u(y)) = f(y, u(x)) may or may not hold; products must agree
        // with the conjunction of the factors
        prop_assume!(a.size() >= 2 && b.size() >= 2);
        let lhs = Term::op("f", vec![Term::Var(0), Term::op("u", vec![Term::Var(1)])]);
        let rhs = Term::op("f", vec![Term::Var(1), Term::op("u", vec![Term::Var(0)])]);
        let in_a = holds_identity(std::slice::from_ref(&a), &lhs, &rhs).unwrap();
        let in_b = holds_identity(std::slice::from_ref(&b), &lhs, &rhs).unwrap();
        let p = direct_product(&a, &b).unwrap();
        let in_p = holds_identity(std::slice::from_ref(&p), &lhs, &rhs).unwrap();
        prop_assert_eq!(in_p, in_a && in_b);
        let both = holds_identity(&[a, b], &lhs, &rhs).unwrap();
        prop_assert_eq!(both, in_a && in_b);
    }

    #[test]
    fn eval_matches_tables(a in arb_algebra(), x in 0usize..4, y in 0usize..4) {
        let (x, y) = (x % a.size(), y % a.size());
        let t = Term::op("f", vec![Term::Var(0), Term::Var(1)]);
        prop_assert_eq!(eval_term(&a, &t, &[x, y]).unwrap(), a.apply(0, &[x, y]));
    }
}

#[test]
fn compose_alt_increases_and_stabilizes_at_join() {
    for a in corpus_all() {
        let square = direct_product(&a, &a).unwrap();
        for alg in [&a, &square] {
            let cons = all_congruences(alg, 64).unwrap();
            for beta in &cons {
                for gamma in &cons {
                    let b = beta.as_binrel();
                    let g = gamma.as_binrel();
                    let mut prev = BinRel::compose_alt(&b, &g, 1).unwrap();
                    let mut join = prev.clone();
                    for m in 2..=alg.size() * alg.size() + 2 {
                        let cur = BinRel::compose_alt(&b, &g, m).unwrap();
                        assert!(prev.is_subset(&cur).unwrap(), "increasing in m");
                        join = cur.clone();
                        prev = cur;
                    }
                    // the limit is the join: an admissible equivalence
                    assert!(join.is_symmetric() && join.is_transitive());
                    assert!(join.is_admissible_for(alg));
                    assert!(b.is_subset(&join).unwrap() && g.is_subset(&join).unwrap());
                }
            }
        }
    }
}

#[test]
fn congruence_meets_are_congruences() {
    for a in corpus_all() {
        let square = direct_product(&a, &a).unwrap();
        let cons = all_congruences(&square, 64).unwrap();
        for x in &cons {
            for y in &cons {
                let m = x.meet(y);
                assert!(m.is_congruence_of(&square));
            }
        }
    }
}

#[test]
fn majority_gives_two_distributivity_on_members() {
    // on every corpus algebra whose variety has a majority term:
    // α(β∘γ) ⊆ αβ ∘ αγ ∘ αβ over all congruence triples
    use cdspec::conditions::{find_terms, TermScheme};
    for a in corpus_all() {
        let chain = find_terms(
            std::slice::from_ref(&a),
            TermScheme::Jonsson,
            3,
            &cdspec::FreeCap::default(),
        )
        .unwrap();
        let has_majority = chain.chain.map_or(false, |c| c.len() <= 3);
        if !has_majority {
            continue;
        }
        let square = direct_product(&a, &a).unwrap();
        for alg in [&a, &square] {
            let cons = all_congruences(alg, 64).unwrap();
            for alpha in &cons {
                for beta in &cons {
                    for gamma in &cons {
                        let al = alpha.as_binrel();
                        let b = beta.as_binrel();
                        let g = gamma.as_binrel();
                        let lhs = al.meet(&b.compose(&g).unwrap()).unwrap();
                        let ab = al.meet(&b).unwrap();
                        let ag = al.meet(&g).unwrap();
                        let rhs = ab.compose(&ag).unwrap().compose(&ab).unwrap();
                        assert!(lhs.is_subset(&rhs).unwrap(), "{} majority triple", alg.name());
                    }
                }
            }
        }
    }
}

#[test]
fn budget_stream_matches_exhaustive_at_full_budget() {
    use cdspec::enumerate_reflexive_admissible;
    for a in corpus_all() {
        if a.size() > 4 {
            continue;
        }
        let exhaustive = enumerate_reflexive_admissible(&a, 0, 4);
        let budgeted = enumerate_reflexive_admissible(&a, a.size() * a.size(), 0);
        assert_eq!(exhaustive.len(), budgeted.len(), "{}", a.name());
        for r in &exhaustive {
            assert!(budgeted.contains(r));
        }
    }
}
