use super::*;
use crate::complement::{complement_from_kraus, minimal_complement};
use crate::matcore::{c, re, ONE, ZERO};
use crate::zoo::{
    basis, phi_lambda, pinching, random_psd, schur_complement_from_vectors, schur_complement_holevo,
    schur_complement_map, schur_map, werner_holevo, werner_holevo_cp,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn ex44_vectors() -> Vec<Vec<C64>> {
    let h = re(0.5f64.sqrt());
    vec![vec![ONE, ZERO], vec![ZERO, h], vec![ZERO, h]]
}

fn ex44() -> KrausRep {
    schur_complement_from_vectors(&ex44_vectors()).unwrap()
}

fn identity(d: usize) -> KrausRep {
    KrausRep::from_ops(vec![ComplexMatrix::identity(d)]).unwrap()
}

fn qubit_schur(cc: C64) -> KrausRep {
    schur_map(&ComplexMatrix::from_rows(&[vec![ONE, cc], vec![cc.conj(), ONE]]).unwrap(), &tol()).unwrap()
}

#[test]
fn ppt_examples() {
    let rho = ComplexMatrix::from_real(&[&[0.25, 0.0], &[0.0, 0.75]]);
    let trace_map =
        HolevoForm::from_pairs(vec![(ComplexMatrix::identity(2), rho)], &tol()).unwrap().to_kraus(&tol()).unwrap();
    assert!(is_ppt(&trace_map, &tol()).verdict.is_true());
    let id = is_ppt(&identity(2), &tol());
    assert!(id.verdict.is_false());
    assert!(matches!(id.witness, Some(Witness::MinEigenvalue { value, .. }) if (value + 1.0).abs() < 1e-12));
    assert!(is_ppt(&qubit_schur(c(0.3, 0.2)), &tol()).verdict.is_false());
    assert!(is_ppt(&qubit_schur(ZERO), &tol()).verdict.is_true());
}

#[test]
fn eb_examples() {
    let h = schur_complement_holevo(&ex44_vectors(), &tol()).unwrap();
    assert!(eb_certificate(&h, &tol()).verdict.is_true());
    assert!(eb_certificate(&identity(2), &tol()).verdict.is_false());
    let w = werner_holevo(2, 0.5, &tol()).unwrap();
    let cert = eb_certificate(&w, &tol());
    assert!(cert.verdict.is_true());
    assert_eq!(cert.provenance, vec!["external:low-dimension-ppt".to_string()]);
    // d_in·d_out = 9: PPT but not certified by any implemented criterion
    let w3 = werner_holevo(3, 1.0 / 3.0, &tol()).unwrap();
    assert_eq!(eb_certificate(&w3, &tol()).verdict, Verdict::Indeterminate);
}

#[test]
fn seb_test_example_4_4() {
    let h = schur_complement_holevo(&ex44_vectors(), &tol()).unwrap();
    let cert = degradable_seb_test(&h, &tol()).unwrap();
    assert!(cert.verdict.is_false());
    match cert.witness {
        Some(Witness::ViolatingPair { i, j, overlap, .. }) => {
            assert_eq!((i, j), (1, 2));
            assert!((overlap - 0.5).abs() < 1e-12);
        }
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn seb_test_small_cases() {
    let u = vec![ONE, ZERO];
    let v = vec![c(0.6, 0.0), c(0.0, 0.8)];
    let single =
        HolevoForm::from_pairs(vec![(ComplexMatrix::outer(&u, &u), ComplexMatrix::outer(&v, &v))], &tol()).unwrap();
    assert!(degradable_seb_test(&single, &tol()).unwrap().verdict.is_true());
    let (w, res) = self_complement_witness(&single, &tol()).unwrap();
    assert!(w.approx_eq(&ComplexMatrix::column_vector(&crate::matcore::fix_phase_first(v.clone())), 1e-12));
    assert!(res <= 1e-8);

    // u = (e1, 2e1, e2): first two merge; v3 orthogonal to both
    let e = |i| basis(3, i);
    let two_e1: Vec<C64> = e(0).iter().map(|z| z * 2.0).collect();
    let a = vec![ONE, ONE, ZERO].into_iter().map(|z| z / 2f64.sqrt()).collect::<Vec<_>>();
    let b = vec![ONE, -ONE, ZERO].into_iter().map(|z| z / 2f64.sqrt()).collect::<Vec<_>>();
    let pairs = vec![
        (ComplexMatrix::outer(&e(0), &e(0)), ComplexMatrix::outer(&a, &a)),
        (ComplexMatrix::outer(&two_e1, &two_e1), ComplexMatrix::outer(&b, &b)),
        (ComplexMatrix::outer(&e(1), &e(1)), ComplexMatrix::outer(&e(2), &e(2))),
    ];
    let h = HolevoForm::from_pairs(pairs, &tol()).unwrap();
    let g = group_holevo(&h, &tol()).unwrap();
    assert_eq!(g.classes.len(), 2);
    assert_eq!(g.classes[0].members, vec![0, 1]);
    let cert = degradable_seb_test(&h, &tol()).unwrap();
    assert!(cert.verdict.is_true());
    let back = g.to_holevo(&tol()).unwrap();
    let t = crate::zoo::random_psd(3, 2, false);
    assert!(back.apply(&t).unwrap().approx_eq(&h.apply(&t).unwrap(), 1e-12));

    let mut bad = h.pairs().to_vec();
    bad[0].f = ComplexMatrix::identity(3);
    let bad = HolevoForm::new(bad, &tol()).unwrap();
    assert!(matches!(degradable_seb_test(&bad, &tol()), Err(crate::Error::NotRankOne { index: 0, rank: 3 })));
}

#[test]
fn self_complement_inclusions() {
    let pairs = (0..3).map(|j| (ComplexMatrix::unit(3, j, j), ComplexMatrix::unit(3, j, j))).collect();
    let h = HolevoForm::from_pairs(pairs, &tol()).unwrap();
    let (w, res) = self_complement_witness(&h, &tol()).unwrap();
    assert!(w.approx_eq(&ComplexMatrix::identity(3), 1e-12));
    assert!(res <= 1e-8);

    let r = ComplexMatrix::from_real(&[&[0.5, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.0]]);
    let u = vec![ONE, c(0.0, 1.0)];
    let h = HolevoForm::from_pairs(vec![(ComplexMatrix::outer(&u, &u), r)], &tol()).unwrap();
    let (w, res) = self_complement_witness(&h, &tol()).unwrap();
    assert_eq!(w.dims(), (3, 2));
    assert!((&w.adjoint() * &w).approx_eq(&ComplexMatrix::identity(2), 1e-12));
    assert!(res <= 1e-8);

    let ex = schur_complement_holevo(&ex44_vectors(), &tol()).unwrap();
    assert!(matches!(self_complement_witness(&ex, &tol()), Err(crate::Error::Precondition(_))));
}

#[test]
fn antidegrading_maps() {
    let h = schur_complement_holevo(&ex44_vectors(), &tol()).unwrap();
    let g = seb_antidegrading_map(&h, &tol()).unwrap();
    let phi = h.to_kraus(&tol()).unwrap();
    let comp = complement_from_kraus(&phi);
    assert!(g.is_trace_preserving(&tol()));
    assert!(g.compose(&comp).unwrap().choi().mat().distance(phi.choi().mat()) <= 1e-9);

    let pairs = (0..3).map(|j| (ComplexMatrix::unit(3, j, j), ComplexMatrix::unit(3, j, j))).collect();
    let p = HolevoForm::from_pairs(pairs, &tol()).unwrap();
    let g = seb_antidegrading_map(&p, &tol()).unwrap();
    for (j, b) in g.ops().iter().enumerate() {
        assert!(b.approx_eq(&ComplexMatrix::unit(3, j, j), 1e-12));
    }
}

#[test]
fn degradability_examples() {
    let a = ComplexMatrix::from_rows(&[vec![ONE, c(0.5, 0.5)], vec![ZERO, re(2.0)]]).unwrap();
    let cert = degradability_via_inverse(&KrausRep::from_ops(vec![a]).unwrap(), &tol());
    assert!(cert.verdict.is_true());
    match &cert.witness {
        Some(Witness::Channel { kraus, .. }) => assert_eq!(kraus.d_out(), 1),
        other => panic!("unexpected witness {other:?}"),
    }
    assert!(degradability_via_inverse(&identity(3), &tol()).verdict.is_true());
    assert!(degradability_via_inverse(&ex44(), &tol()).verdict.is_false());
    for lambda in [-1.0, -0.5, 0.0, 0.25] {
        let w = werner_holevo(3, lambda, &tol()).unwrap();
        assert!(degradability_via_inverse(&w, &tol()).verdict.is_false(), "lambda {lambda}");
    }
    for lambda in [-1.0 / 3.0, 0.0, 0.5, 1.0] {
        let p = phi_lambda(2, lambda, &tol()).unwrap();
        assert!(degradability_via_inverse(&p, &tol()).verdict.is_false(), "lambda {lambda}");
    }
    assert!(degradability_via_inverse(&pinching(3).unwrap(), &tol()).verdict.is_true());
}

#[test]
fn antidegradability_examples() {
    let h = schur_complement_holevo(&ex44_vectors(), &tol()).unwrap();
    assert!(antidegradable_test(&h.to_kraus(&tol()).unwrap(), &tol()).verdict.is_true());
    let id = antidegradable_test(&identity(2), &tol());
    assert!(id.verdict.is_false());
    assert_eq!(id.provenance[0], "complement-route");
    assert!(antidegradable_test(&pinching(3).unwrap(), &tol()).verdict.is_true());
    // Ad_A is degradable; its complement (a scalar map) is not
    let a = ComplexMatrix::from_real(&[&[1.0, 0.3], &[0.0, 0.8]]);
    let k = KrausRep::from_ops(vec![a]).unwrap();
    assert!(antidegradable_test(&minimal_complement(&k, &tol()), &tol()).verdict.is_true());
}

#[test]
fn cstar_extreme_examples() {
    assert!(cstar_extreme_test(&ex44().dual(), &tol()).verdict.is_true());
    assert!(cstar_extreme_test(&ex44(), &tol()).verdict.is_false());
    for d in 2..=4 {
        let cert = cstar_extreme_test(&pinching(d).unwrap(), &tol());
        assert!(cert.verdict.is_true());
        assert!(matches!(cert.witness, Some(Witness::CanonicalForm { .. })));
    }
    assert!(cstar_extreme_test(&werner_holevo(2, 0.5, &tol()).unwrap(), &tol()).verdict.is_false());
}

#[test]
fn diagonal_forms_recover_structure() {
    let k = ex44().dual();
    let f = output_orthogonal_form(&k, &tol()).unwrap();
    assert_eq!(f.len(), 3);
    assert!(f.to_kraus(2, 3).same_channel(&k, 1e-12));
    assert!(output_orthogonal_form(&identity(2), &tol()).is_none());
    let f = input_orthogonal_form(&ex44(), &tol()).unwrap();
    assert_eq!(f.len(), 3);
}

#[test]
fn projection_bundle_schur_complement() {
    for seed in 0..4 {
        let a = random_psd(3, seed, true);
        let k = schur_complement_map(&a, &tol()).unwrap();
        let b = choi_projection_equivalences(&k, &tol()).unwrap();
        assert!(b.preconditions_met);
        assert!(b.agree(), "{b:#?}");
        assert_eq!(b.verdict("i"), Some(Verdict::True));
        assert!(b.factorization_residual.unwrap() <= 1e-8);
        let cond = b.conditions.iter().find(|c| c.label == "v").unwrap();
        match &cond.certificate.witness {
            Some(Witness::Factorization { u, a: aa }) => {
                assert!(u.approx_eq(&ComplexMatrix::identity(3), 1e-8));
                // A is fixed up to conjugation by a diagonal unitary (phases of v_k)
                for i in 0..3 {
                    for j in 0..3 {
                        assert!((aa.get(i, j).norm() - a.get(i, j).norm()).abs() < 1e-8);
                    }
                }
                let pair = crate::complement::is_complementary_pair(&schur_map(aa, &tol()).unwrap(), &k, &tol());
                assert!(pair.verdict.is_true());
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }
}

#[test]
fn projection_bundle_negative_cases() {
    let w1 = werner_holevo_cp(2, 1.0, &tol()).unwrap();
    let b = choi_projection_equivalences(&w1, &tol()).unwrap();
    assert!(!b.preconditions_met);
    // tr(X)I − Xᵀ = σ_y X σ_y on M₂: a unitary conjugation, hence degradable
    for label in ["i", "ii", "iii", "iv", "v"] {
        assert_eq!(b.verdict(label), Some(Verdict::False), "{label}");
    }
    assert_eq!(b.verdict("vi"), Some(Verdict::True));
    assert!(!b.is_violation());
    let p = phi_lambda(2, 0.5, &tol()).unwrap();
    let b = choi_projection_equivalences(&p, &tol()).unwrap();
    assert!(b.preconditions_met);
    assert!(b.conditions.iter().all(|c| c.certificate.verdict.is_false()), "{b:#?}");
    let w = werner_holevo(3, 1.0 / 3.0, &tol()).unwrap();
    let b = choi_projection_equivalences(&w, &tol()).unwrap();
    assert!(b.agree() && b.verdict("vi") == Some(Verdict::False), "{b:#?}");
    // not trace-preserving
    assert!(choi_projection_equivalences(&ex44(), &tol()).is_err());
}

#[test]
fn schur_characterization_examples() {
    let s = schur_characterization(&ComplexMatrix::diag_real(&[1.0, 2.0, 3.0]), &tol()).unwrap();
    assert!(s.seb.verdict.is_true() && s.is_diagonal(&tol()));
    assert!(s.complement_seb.verdict.is_true());
    assert!(s.complement_degradable.verdict.is_true());
    let ones = ComplexMatrix::from_fn(2, 2, |_, _| ONE);
    let s = schur_characterization(&ones, &tol()).unwrap();
    assert!(s.seb.verdict.is_false());
    assert!(s.complement_degradable.verdict.is_false());
    assert!(schur_characterization(&ComplexMatrix::diag_real(&[1.0, -1.0]), &tol()).is_err());
}
