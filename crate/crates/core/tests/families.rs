use cone_morse::examples::models::{exterior_torus, truncated_polynomial};
use cone_morse::examples::{
    cho_synthetic, minimal_model, projective_space, synthetic_from_ranks, torus, truncated_identity,
    unstable_pairing_torus, ExampleError, Pairing, TorusConvention,
};
use cone_morse::inequalities::{cone_report, machon_check, morse_bott_bounds, q_polynomial};
use cone_morse::morse::{betti, cone_morse_complex, morse_complex, product, stabilize, validate_datum};
use cone_morse::ratlinalg::{int, RationalMatrix};
use cone_morse::{DatumError, MorseDatum};

fn t(n: usize) -> MorseDatum {
    torus(TorusConvention::adjacent(n)).unwrap()
}

fn cone_dims(d: &MorseDatum) -> Vec<usize> {
    cone_morse_complex(d).unwrap().cohomology().unwrap().dims()
}

fn point() -> MorseDatum {
    let mut d = MorseDatum::new("pt", 0, 0);
    d.add_point("o", 0);
    d
}

#[test]
fn four_torus_table() {
    let d = t(2);
    validate_datum(&d).unwrap();
    assert_eq!(betti(&d).unwrap(), vec![1, 4, 6, 4, 1]);
    let cone = cone_morse_complex(&d).unwrap();
    assert_eq!(cone.dims(), &[1, 5, 10, 10, 5, 1]);
    assert_eq!(cone.cohomology().unwrap().dims(), vec![1, 4, 5, 5, 4, 1]);
    let r = morse_complex(&d).unwrap().induced_map_ranks().unwrap();
    assert_eq!(r, vec![1, 4, 1, 0, 0]);
}

#[test]
fn four_torus_primitive_class_is_killed_by_omega() {
    // c(ω)(q12 − q34) = q1234 − q1234 = 0.
    let d = t(2);
    let phi = morse_complex(&d).unwrap();
    let ids = &d.generators_by_index()[2];
    let mut v = RationalMatrix::zeros(ids.len(), 1);
    v[(ids.iter().position(|s| s == "q12").unwrap(), 0)] = int(1);
    v[(ids.iter().position(|s| s == "q34").unwrap(), 0)] = int(-1);
    assert!(phi.map_at(2).mul(&v).is_zero());
}

#[test]
fn negated_coefficient_still_validates() {
    let mut d = t(2);
    let e = d.cone_map.iter_mut().find(|e| e.from == "q0" && e.to == "q12").unwrap();
    e.coeff = -e.coeff.clone();
    validate_datum(&d).unwrap();
}

#[test]
fn stabilized_torus_with_broken_cone_map() {
    // Add a pair (a ∈ index 2, b ∈ index 3, ∂a = b) and let c(q0) hit a.
    let d = stabilize(&t(2), 2, "s").unwrap();
    validate_datum(&d).unwrap();
    let mut bad = d.clone();
    bad.add_cone("q0", "s_a", int(1));
    match validate_datum(&bad) {
        Err(DatumError::NotCommuting { degree: 0, witness }) => assert_eq!(witness, "q0"),
        other => panic!("expected a commuting violation, got {other:?}"),
    }
}

#[test]
fn morse_complex_examples() {
    let cp3 = projective_space(3, 0).unwrap();
    let phi = morse_complex(&cp3).unwrap();
    assert_eq!(phi.source().dims(), &[1, 0, 1, 0, 1, 0, 1]);
    assert!((0..6).all(|k| phi.source().differential(k).is_zero()));
    assert_eq!(morse_complex(&t(1)).unwrap().source().dims(), &[1, 2, 1]);
    assert_eq!(betti(&cp3).unwrap(), vec![1, 0, 1, 0, 1, 0, 1]);
}

#[test]
fn projective_space_cones() {
    assert_eq!(cone_dims(&projective_space(2, 0).unwrap()), vec![1, 0, 0, 0, 0, 1]);
    assert_eq!(cone_dims(&projective_space(1, 0).unwrap()), vec![1, 0, 0, 1]);
    let cp3p1 = projective_space(3, 1).unwrap();
    let phi = morse_complex(&cp3p1).unwrap();
    assert_eq!(phi.cone_cohomology_by_decomposition().unwrap(), cone_dims(&cp3p1));
    assert_eq!(cone_dims(&cp3p1), vec![1, 0, 1, 0, 0, 0, 0, 1, 0, 1]);
}

#[test]
fn projective_space_hard_lefschetz() {
    for n in 1..=4 {
        let phi = morse_complex(&projective_space(n, 0).unwrap()).unwrap();
        for k in (0..=n).step_by(2) {
            let mut power = RationalMatrix::identity(1);
            for j in 0..n - k {
                power = phi.map_at((k + 2 * j) as i32).mul(&power);
            }
            assert_eq!(power.shape(), (1, 1));
            assert!(!power.is_zero(), "n={n} k={k}");
        }
    }
}

#[test]
fn stabilization_examples() {
    let s = stabilize(&t(1), 0, "s").unwrap();
    assert_eq!(s.critical_counts(), vec![2, 3, 1]);
    assert_eq!(betti(&s).unwrap(), vec![1, 2, 1]);
    let ss = stabilize(&stabilize(&t(2), 1, "a").unwrap(), 1, "b").unwrap();
    assert_eq!(ss.critical_counts()[1], 6);
    assert_eq!(betti(&ss).unwrap(), vec![1, 4, 6, 4, 1]);
    assert_eq!(cone_dims(&ss), cone_dims(&t(2)));
    assert!(matches!(stabilize(&t(1), 2, "x"), Err(DatumError::StabilizeDegree { .. })));
}

#[test]
fn products() {
    let tt = product(&t(1), &t(1)).unwrap();
    assert_eq!(cone_dims(&tt), vec![1, 4, 5, 5, 4, 1]);
    let direct = cone_report(&t(2)).unwrap();
    let built = cone_report(&tt).unwrap();
    assert_eq!((built.m, built.v, built.b_omega), (direct.m, direct.v, direct.b_omega));

    let d = projective_space(2, 0).unwrap();
    let dp = product(&d, &point()).unwrap();
    assert_eq!(dp.critical_counts(), d.critical_counts());
    assert_eq!(cone_dims(&dp), cone_dims(&d));

    let cp1 = projective_space(1, 0).unwrap();
    let pp = product(&cp1, &cp1).unwrap();
    let phi = morse_complex(&pp).unwrap();
    assert_eq!(betti(&pp).unwrap(), vec![1, 0, 2, 0, 1]);
    assert_eq!(phi.induced_map_ranks().unwrap(), vec![1, 0, 1, 0, 0]);
    assert_eq!(cone_dims(&pp), vec![1, 0, 1, 1, 0, 1]);

    // Associativity up to dimensions.
    let left = product(&product(&t(1), &cp1).unwrap(), &t(1)).unwrap();
    let right = product(&t(1), &product(&cp1, &t(1)).unwrap()).unwrap();
    assert_eq!(cone_dims(&left), cone_dims(&right));
    assert!(matches!(product(&t(1), &projective_space(2, 1).unwrap()), Err(DatumError::PowerMismatch(0, 1))));
}

#[test]
fn products_of_circles_match_tori() {
    for n in 2..=3 {
        let mut d = t(1);
        for _ in 1..n {
            d = product(&d, &t(1)).unwrap();
        }
        let a = cone_report(&d).unwrap();
        let b = cone_report(&t(n)).unwrap();
        assert_eq!((a.m, a.v, a.b_omega), (b.m, b.v, b.b_omega), "n={n}");
    }
}

#[test]
fn pairing_conventions_agree() {
    for n in 1..=3 {
        let adj = torus(TorusConvention::new(n, Pairing::Adjacent)).unwrap();
        let split = torus(TorusConvention::new(n, Pairing::Split)).unwrap();
        assert_eq!(cone_dims(&adj), cone_dims(&split));
    }
}

#[test]
fn torus_cone_map_is_omega_wedge_under_pairing() {
    for n in 1..=3 {
        for pairing in [Pairing::Adjacent, Pairing::Split] {
            let conv = TorusConvention::new(n, pairing);
            let morse = morse_complex(&torus(conv).unwrap()).unwrap();
            let forms = exterior_torus(conv, 0);
            let p = unstable_pairing_torus(conv);
            assert_eq!(p, RationalMatrix::identity(1 << (2 * n)));
            // P is block diagonal by degree; with P = I the blocks are identities.
            for k in 0..=2 * n as i32 {
                assert_eq!(morse.map_at(k).into_owned(), forms.map_at(k).into_owned(), "n={n} {pairing} k={k}");
            }
        }
    }
}

#[test]
fn unstable_pairing_sizes() {
    assert_eq!(unstable_pairing_torus(TorusConvention::adjacent(1)).shape(), (4, 4));
    assert_eq!(unstable_pairing_torus(TorusConvention::adjacent(2)).shape(), (16, 16));
}

/// The cone of the forms model and the cone of stabilised Morse data have the
/// same cohomology.
#[test]
fn model_comparison_after_stabilization() {
    let cases: Vec<(MorseDatum, cone_morse::DegreeChainMap)> = vec![
        (t(2), exterior_torus(TorusConvention::adjacent(2), 0)),
        (projective_space(2, 0).unwrap(), truncated_polynomial(&[2], 0)),
        (projective_space(3, 1).unwrap(), truncated_polynomial(&[3], 1)),
        (
            product(&projective_space(1, 0).unwrap(), &projective_space(2, 0).unwrap()).unwrap(),
            truncated_polynomial(&[1, 2], 0),
        ),
    ];
    for (d, model) in cases {
        let model_dims = model.mapping_cone().unwrap().cohomology().unwrap().dims();
        let s = stabilize(&stabilize(&d, 1, "u").unwrap(), 2, "w").unwrap();
        assert_eq!(cone_dims(&s), model_dims, "{}", d.name);
        assert_eq!(minimal_model(&d).unwrap().mapping_cone().unwrap().cohomology().unwrap().dims(), model_dims);
        assert!(matches!(minimal_model(&s), Err(ExampleError::NotPerfect { .. })));
    }
}

#[test]
fn minimal_model_examples() {
    assert_eq!(minimal_model(&t(2)).unwrap().source().dims(), &[1, 4, 6, 4, 1]);
    assert_eq!(minimal_model(&projective_space(2, 0).unwrap()).unwrap().source().dims(), &[1, 0, 1, 0, 1]);
}

#[test]
fn reports_for_perfect_families() {
    let rep = cone_report(&t(2)).unwrap();
    assert!(rep.perfect);
    assert!(rep.weak_slack.iter().chain(&rep.strong_slack).all(|&x| x == 0));
    assert_eq!(rep.q, Some(vec![]));
    assert_eq!(rep.v, rep.r);

    let rep = cone_report(&projective_space(3, 0).unwrap()).unwrap();
    assert_eq!(rep.b_omega, vec![1, 0, 0, 0, 0, 0, 0, 1]);
    assert!(rep.weak_slack.iter().chain(&rep.strong_slack).all(|&x| x == 0));

    let rep = cone_report(&projective_space(3, 1).unwrap()).unwrap();
    assert!(rep.q.is_none());
    assert!(rep.weak_slack.iter().chain(&rep.strong_slack).all(|&x| x == 0));
}

#[test]
fn stabilized_four_torus_report() {
    let rep = cone_report(&stabilize(&t(2), 1, "s").unwrap()).unwrap();
    assert_eq!(rep.m, vec![1, 5, 7, 4, 1]);
    assert_eq!(rep.v, vec![1, 4, 1, 0, 0]);
    assert_eq!(rep.b_omega, vec![1, 4, 5, 5, 4, 1]);
    assert_eq!(rep.weak_slack, vec![0, 1, 2, 1, 0, 0]);
    assert_eq!(rep.strong_slack, vec![0, 1, 1, 0, 0, 0]);
    assert_eq!(rep.q, Some(vec![0, 1, 1]));
    assert!(!rep.perfect);
}

#[test]
fn q_polynomial_edge_cases() {
    assert_eq!(q_polynomial(&[1, 4, 6, 4, 1], &[1, 4, 1, 0, 0], &[1, 4, 5, 5, 4, 1], 0).unwrap(), Vec::<i64>::new());
    assert_eq!(q_polynomial(&[0; 5], &[0; 5], &[0; 6], 0).unwrap(), Vec::<i64>::new());
}

#[test]
fn morse_bott_comparison() {
    let rep = cone_report(&t(2)).unwrap();
    let mb = rep.morse_bott.unwrap();
    assert_eq!(mb.weak[2], 5);
    assert_eq!(rep.weak_slack[2], 0);
    let rep = cone_report(&projective_space(2, 0).unwrap()).unwrap();
    assert_eq!(rep.morse_bott.unwrap().weak[2], 1);
    let zero = morse_bott_bounds(&[0; 3], &[0; 4]);
    assert!(zero.weak.iter().chain(&zero.strong).all(|&x| x == 0));
}

#[test]
fn machon_examples() {
    assert!(machon_check(&t(2)).unwrap().is_empty());
    assert!(machon_check(&projective_space(3, 0).unwrap()).unwrap().is_empty());
    let cho = cho_synthetic(22).unwrap();
    let rep = cone_report(&cho).unwrap();
    assert_eq!(rep.b_omega, vec![1, 0, 22, 1, 1, 22, 0, 1]);
    assert_eq!(rep.r, vec![1, 0, 22, 0, 1, 0, 0]);
    assert_eq!(machon_check(&cho).unwrap(), vec![4]);
    assert!(machon_check(&cho_synthetic(23).unwrap()).unwrap().is_empty());
}

#[test]
fn synthetic_examples() {
    let pt = synthetic_from_ranks(&[1], &[], 0).unwrap();
    assert_eq!(cone_dims(&pt), vec![1, 1]);
    // CP³ pattern with invertible blocks gives b_k − b_{k−2}.
    let one = truncated_identity(1, 1, 1);
    let none = RationalMatrix::zeros(0, 0);
    let maps = [one.clone(), none.clone(), one.clone(), none, one];
    let hl = synthetic_from_ranks(&[1, 0, 1, 0, 1, 0, 1], &maps, 0).unwrap();
    let rep = cone_report(&hl).unwrap();
    assert_eq!(rep.b_omega, vec![1, 0, 0, 0, 0, 0, 0, 1]);
}
