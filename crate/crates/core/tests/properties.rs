//! Property tests over the built-in semigroups and random inverse
//! subsemigroups of `I3`.

use proptest::prelude::*;

use prexp::actions::{self, filter_closure, is_filter_base, PartialBijection};
use prexp::catalog;
use prexp::expansion::{self, canonical_gen, exp_inverse, exp_product, exp_product_via_union};
use prexp::rewriter::{self, Factor, Term, Word, DEFAULT_STEP_LIMIT};
use prexp::{build_expansion, ElemSet, InverseSemigroup};

/// Suite members small enough for exhaustive word tests (`|G| ≤ 7`).
fn small_suite() -> Vec<InverseSemigroup> {
    catalog::standard_suite().into_iter().map(|(_, g)| g).filter(|g| g.len() <= 7).collect()
}

fn suite_member() -> impl Strategy<Value = InverseSemigroup> {
    let gs = small_suite();
    (0..gs.len()).prop_map(move |i| gs[i].clone())
}

/// `G` with a word of length `1..=5` over it.
fn word_over_suite() -> impl Strategy<Value = (InverseSemigroup, Vec<usize>)> {
    suite_member().prop_flat_map(|g| {
        let n = g.len();
        (Just(g), prop::collection::vec(0..n, 1..=5))
    })
}

/// Closure of a set of elements of `I3` under products and inverses.
fn generated(i3: &InverseSemigroup, gens: &[usize]) -> InverseSemigroup {
    let mut set = ElemSet::from_iter(i3.len(), gens.iter().copied());
    loop {
        let members: Vec<usize> = set.iter().collect();
        let mut next = set.clone();
        for &a in &members {
            next.insert(i3.inverse(a));
            for &b in &members {
                next.insert(i3.product(a, b));
            }
        }
        if next == set {
            return i3.subsemigroup(&set).unwrap();
        }
        set = next;
    }
}

fn random_subsemigroup() -> impl Strategy<Value = InverseSemigroup> {
    let i3 = catalog::symmetric_inverse_monoid(3).unwrap();
    let n = i3.len();
    prop::collection::vec(0..n, 1..=3).prop_map(move |gens| generated(&i3, &gens))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rewriting_matches_both_product_routes((g, letters) in word_over_suite()) {
        let w = Word::new(&g, letters.clone()).unwrap();
        let (rewritten, trace) = rewriter::rewrite_steps(&g, &w, DEFAULT_STEP_LIMIT).unwrap();
        prop_assert!(rewritten.is_normal(&g));
        let gens: Vec<_> = letters.iter().map(|&a| canonical_gen(&g, a)).collect();
        let pair = gens[1..].iter().fold(gens[0].clone(), |acc, x| exp_product(&g, &acc, x).unwrap());
        let union = gens[1..].iter().fold(gens[0].clone(), |acc, x| exp_product_via_union(&g, &acc, x).unwrap());
        prop_assert_eq!(&rewritten, &pair);
        prop_assert_eq!(&pair, &union);
        // every step rewrites the previous term
        for pair in trace.steps.windows(2) {
            prop_assert_eq!(&pair[0].after, &pair[1].before);
        }
    }

    #[test]
    fn eps_factors_commute(
        g in suite_member(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..=4),
        t in any::<prop::sample::Index>(),
        seed in any::<u64>(),
    ) {
        let n = g.len();
        let mut eps: Vec<usize> = picks.iter().map(|i| i.index(n)).collect();
        let t = t.index(n);
        let term = |eps: &[usize]| {
            let mut factors: Vec<Factor> = eps.iter().map(|&a| Factor::Eps(a)).collect();
            factors.push(Factor::Br { s: t, absorbed: false });
            Term { factors }
        };
        let (a, _) = rewriter::rewrite_term(&g, term(&eps), DEFAULT_STEP_LIMIT).unwrap();
        let k = (seed as usize) % eps.len();
        eps.rotate_left(k);
        if seed & 1 == 1 {
            eps.reverse();
        }
        let (b, _) = rewriter::rewrite_term(&g, term(&eps), DEFAULT_STEP_LIMIT).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bijections_form_an_inverse_semigroup(
        a in prop::collection::vec(prop::option::of(0u32..6), 6),
        b in prop::collection::vec(prop::option::of(0u32..6), 6),
        c in prop::collection::vec(prop::option::of(0u32..6), 6),
    ) {
        let (Some(a), Some(b), Some(c)) = (PartialBijection::new(a), PartialBijection::new(b), PartialBijection::new(c)) else {
            return Ok(());
        };
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
        prop_assert_eq!(a.compose(&a.inverse()).compose(&a), a.clone());
        prop_assert!(a.compose(&a.inverse()).is_partial_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn counting_formula_on_random_subsemigroups(g in random_subsemigroup()) {
        let t = build_expansion(&g).unwrap();
        let c = expansion::predicted_count(&g).unwrap();
        prop_assert_eq!(t.len() as u128, c.total);
        prop_assert_eq!(t.base().idempotents().len() as u128, c.idempotent);
        prop_assert_eq!(t.source().is_e_unitary(), t.base().is_e_unitary());
    }

    #[test]
    fn expansion_is_an_inverse_semigroup_with_homomorphic_degree(g in random_subsemigroup(), seed in any::<u64>()) {
        let t = build_expansion(&g).unwrap();
        let m = t.len();
        let h = t.base();
        let mut k = seed as usize;
        for _ in 0..64 {
            let (x, y) = (k % m, (k / m) % m);
            k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) >> 1;
            let (ex, ey) = (t.elem(x), t.elem(y));
            let xy = exp_product(&g, ex, ey).unwrap();
            prop_assert_eq!(t.id_of(&xy), Some(h.product(x, y)));
            prop_assert_eq!(xy.degree(), g.product(ex.degree(), ey.degree()));
            let xi = exp_inverse(&g, ex).unwrap();
            let back = exp_product(&g, &exp_product(&g, ex, &xi).unwrap(), ex).unwrap();
            prop_assert_eq!(&back, ex);
            prop_assert_eq!(t.id_of(&xi), Some(h.inverse(x)));
        }
    }

    #[test]
    fn canonical_action_lifts_and_separates(g in random_subsemigroup()) {
        let t = build_expansion(&g).unwrap();
        let canon = actions::canonical_partial_action(&g).unwrap();
        prop_assert!(actions::is_partial_action(&g, &canon.action).unwrap().passed());
        let (lift, report) = actions::lift_action(&t, &canon.action).unwrap();
        prop_assert!(report.passed());
        prop_assert_eq!(&lift, &actions::lift_maps_by_domain(&t, &canon.action));
        prop_assert!(actions::separation_check(&t).unwrap().separated);
    }

    #[test]
    fn canonical_map_does_not_depend_on_the_base(g in random_subsemigroup(), mask in any::<u64>()) {
        let n = g.len();
        for xi in actions::enumerate_filters(&g).unwrap() {
            // a sub-base of ξ: keep the masked elements plus the minimal ones
            let members: Vec<usize> = xi.iter().collect();
            let eta = ElemSet::from_iter(n, members.iter().copied().filter(|&s| {
                mask >> (s % 64) & 1 == 1 || !members.iter().any(|&r| r != s && g.natural_leq(r, s).unwrap())
            }));
            if !is_filter_base(&g, &eta) || filter_closure(&g, &eta).unwrap() != xi {
                continue;
            }
            for t in g.elements().filter(|&t| xi.contains(g.inverse(t))) {
                let via_xi = filter_closure(&g, &xi.map(n, |s| g.product(t, s))).unwrap();
                let via_eta = filter_closure(&g, &eta.map(n, |s| g.product(t, s)));
                if let Ok(via_eta) = via_eta {
                    prop_assert_eq!(via_eta, via_xi);
                }
            }
        }
    }
}
