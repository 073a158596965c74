use super::*;
use crate::catalog;
use crate::expansion::build_expansion;
use crate::report::Outcome;

fn e(i: usize, j: usize) -> CMatrix {
    unit(2, i, j)
}

fn span(mats: &[CMatrix]) -> MatrixSubspace {
    MatrixSubspace::from_matrices(2, mats, DEFAULT_TOL).unwrap()
}

#[test]
fn five_element_bundle_passes() {
    let m = models::five_element();
    let r = check_concrete_fell_bundle(&m.semigroup, &m.bundle);
    assert!(r.passed(), "{r}");
    assert!(matches!(r.outcome("positivity"), Some(Outcome::Info(_))));
    assert!(saturation_witness(&m.semigroup, &m.bundle).is_none());
}

#[test]
fn z2_bundle_is_saturated() {
    let m = models::z2_graded();
    assert!(check_concrete_fell_bundle(&m.semigroup, &m.bundle).passed());
    assert!(saturation_witness(&m.semigroup, &m.bundle).is_none());
}

#[test]
fn corrupt_bundle_fails_product_inclusion() {
    let m = models::five_element_corrupt();
    let r = check_concrete_fell_bundle(&m.semigroup, &m.bundle);
    assert!(r.is_fail("product-inclusion"), "{r}");
}

#[test]
fn generated_algebra_of_idempotent_fibers_is_diagonal() {
    let m = models::five_element();
    let idem: Vec<MatrixSubspace> = [0, 1, 2].iter().map(|&s| m.bundle.fiber(s).clone()).collect();
    let alg = generated_star_algebra(2, &idem, DEFAULT_TOL);
    assert!(alg.equals(&span(&[e(0, 0), e(1, 1)])));
}

#[test]
fn five_element_expansion_fibers() {
    let m = models::five_element();
    let table = build_expansion(&m.semigroup).unwrap();
    let hat = expand_bundle(&table, &m.bundle).unwrap();
    let h = table.base();
    let eps_s = h.find("eps{e,s}").unwrap();
    assert!(hat.fiber(eps_s).equals(&span(&[e(0, 0)])));
    let s = m.semigroup.find("s").unwrap();
    assert!(hat.fiber(table.iota(s)).equals(m.bundle.fiber(s)));
    let r = check_span_refinement(&table, &m.bundle, &hat);
    assert!(r.passed(), "{r}");
}

#[test]
fn z2_expansion_idempotent_fibers_are_diagonal() {
    let m = models::z2_graded();
    let table = build_expansion(&m.semigroup).unwrap();
    let hat = expand_bundle(&table, &m.bundle).unwrap();
    let diag = span(&[e(0, 0), e(1, 1)]);
    let idem: Vec<usize> = table.base().idempotents().iter().collect();
    assert_eq!(idem.len(), 2);
    for x in idem {
        assert!(hat.fiber(x).equals(&diag));
    }
    assert!(check_span_refinement(&table, &m.bundle, &hat).passed());
}

#[test]
fn trivial_expansion_is_identity() {
    let m = models::trivial();
    let table = build_expansion(&m.semigroup).unwrap();
    let hat = expand_bundle(&table, &m.bundle).unwrap();
    assert_eq!(hat.fibers().len(), 1);
    assert!(hat.fiber(0).equals(m.bundle.fiber(0)));
}

#[test]
fn regularity_examples() {
    for m in [models::five_element(), models::z2_graded(), models::trivial(), models::five_element_twisted()] {
        let r = check_regularity(&m.semigroup, &m.bundle, m.u.as_ref().unwrap()).unwrap();
        assert!(r.passed(), "{r}");
    }
    let m = models::five_element();
    let zero = RegularityData { u: vec![CMatrix::zeros(2, 2); 5] };
    let r = check_regularity(&m.semigroup, &m.bundle, &zero).unwrap();
    assert!(r.is_fail("u-coisometry"));
    assert!(matches!(twisted_from_regular(&m.semigroup, &m.bundle, &zero), Err(crate::Error::RegularityFailure(_))));
}

#[test]
fn five_element_twisted_action() {
    let m = models::five_element();
    let g = &m.semigroup;
    let tpa = twisted_from_regular(g, &m.bundle, m.u.as_ref().unwrap()).unwrap();
    let (s, t) = (g.find("s").unwrap(), g.find("t").unwrap());
    assert!((tpa.omega(s, t) - e(0, 0)).norm() < 1e-12);
    let r = check_twisted_partial_action(g, &tpa);
    assert!(r.passed(), "{r}");
    for ax in ["axiom-i", "axiom-ii", "axiom-iii", "axiom-iv", "axiom-v"] {
        assert!(r.is_pass(ax), "{ax}");
    }
}

#[test]
fn twisted_variant_has_phase() {
    let m = models::five_element_twisted();
    let g = &m.semigroup;
    let tpa = twisted_from_regular(g, &m.bundle, m.u.as_ref().unwrap()).unwrap();
    let (s, t) = (g.find("s").unwrap(), g.find("t").unwrap());
    let expected = e(1, 1) * num_complex::Complex64::i();
    assert!((tpa.omega(t, s) - expected).norm() < 1e-12);
    assert!(check_twisted_partial_action(g, &tpa).passed());
}

#[test]
fn group_action_is_global_and_untwisted() {
    let m = models::z2_graded();
    let g = &m.semigroup;
    let tpa = twisted_from_regular(g, &m.bundle, m.u.as_ref().unwrap()).unwrap();
    for s in g.elements() {
        assert!(tpa.domain(s).equals(tpa.algebra()));
        for t in g.elements() {
            assert!((tpa.omega(s, t) - CMatrix::identity(2, 2)).norm() < 1e-12);
        }
    }
    assert!(check_twisted_partial_action(g, &tpa).passed());
}

#[test]
fn phase_perturbations_are_detected() {
    let m = models::five_element();
    let g = &m.semigroup;
    let tpa = twisted_from_regular(g, &m.bundle, m.u.as_ref().unwrap()).unwrap();
    let (s, t, f) = (g.find("s").unwrap(), g.find("t").unwrap(), g.find("f").unwrap());
    // ω(s, s*s)
    let r = check_twisted_partial_action(g, &tpa.with_omega_phase(s, f, 0.1));
    assert!(r.is_fail("axiom-iv"), "{r}");
    // ω(s,t) only enters the cocycle identity
    let r = check_twisted_partial_action(g, &tpa.with_omega_phase(s, t, 0.1));
    assert!(r.is_fail("axiom-iii"), "{r}");
    assert!(r.is_pass("axiom-iv"));
}

#[test]
fn global_twisted_action_and_restriction() {
    for m in [models::five_element(), models::five_element_twisted(), models::z2_graded(), models::trivial()] {
        let g = &m.semigroup;
        let tpa = twisted_from_regular(g, &m.bundle, m.u.as_ref().unwrap()).unwrap();
        let table = build_expansion(g).unwrap();
        let (global, r) = twisted_global_from_partial(&table, &tpa).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(global.len(), table.len());
    }
    let m = models::five_element();
    let tpa = twisted_from_regular(&m.semigroup, &m.bundle, m.u.as_ref().unwrap()).unwrap();
    let table = build_expansion(&m.semigroup).unwrap();
    let (global, _) = twisted_global_from_partial(&table, &tpa).unwrap();
    let h = table.base();
    let eps_s = h.find("eps{e,s}").unwrap();
    let s = table.iota(m.semigroup.find("s").unwrap());
    assert!(global.domain(eps_s).equals(&span(&[e(0, 0)])));
    assert!(global.domain(s).equals(&span(&[e(0, 0)])));
}

#[test]
fn round_trips() {
    for m in [models::five_element(), models::five_element_twisted(), models::z2_graded()] {
        let dev = twisted_round_trip_deviation(&m.semigroup, &m.bundle, m.u.as_ref().unwrap()).unwrap();
        assert!(dev < 1e-8, "{dev}");
    }
}

#[test]
fn io_round_trip() {
    for name in models::BUILTIN_NAMES {
        let m = models::builtin(name).unwrap();
        let text = io::to_doc_string(&m);
        let back = io::parse_bundle(&text, m.semigroup.clone(), DEFAULT_TOL).unwrap();
        for s in m.semigroup.elements() {
            assert!(back.bundle.fiber(s).equals(m.bundle.fiber(s)), "{name}");
        }
        assert_eq!(back.u.is_some(), m.u.is_some());
        if let (Some(a), Some(b)) = (&m.u, &back.u) {
            for (x, y) in a.u.iter().zip(&b.u) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn io_parses_complex_entries_and_rejects_bad_input() {
    let g = catalog::five_element();
    let text = "size 2\n# comment\nfiber s\n0 1\n0 0\n\n0 i\n0 0\nu s\n0 1-2i\n0 0\n";
    let m = io::parse_bundle(text, g.clone(), DEFAULT_TOL).unwrap();
    assert_eq!(m.bundle.fiber(3).dim(), 1);
    let u = m.u.unwrap();
    assert_eq!(u.u[3][(0, 1)], num_complex::Complex64::new(1.0, -2.0));
    assert!(u.u[0].iter().all(|z| z.norm() == 0.0));
    for bad in ["fiber s\n1 0\n0 0\n", "size 2\nfiber q\n", "size 2\nfiber s\n1 0\n", "size 2\n1 0\n0 1\n", "size 2\nfiber s\n1 x\n0 0\n"] {
        assert!(io::parse_bundle(bad, g.clone(), DEFAULT_TOL).is_err(), "{bad}");
    }
}
