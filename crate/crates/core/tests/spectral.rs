use cone_morse::spectral::{
    assemble_quadratic_form, cluster_counts, fit_gap, low_spectrum, max_asymmetry, quasimode, quasimode_flipped_iz,
    report, spectrum, QuasimodeKind, SpectralError, SpectralProblem, TorusCritical,
};

const PSD_FLOOR: f64 = -1e-8;
const DUAL_RTOL: f64 = 1e-6;
const DUAL_ATOL: f64 = 1e-10;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= DUAL_ATOL + DUAL_RTOL * a.abs().max(b.abs())
}

#[test]
fn low_spectra_at_t20() {
    let p = SpectralProblem::new(20.0, 14, 1);
    let v = low_spectrum(&p, 4).unwrap();
    assert!(v[..3].iter().all(|&x| x < 1.0), "{v:?}");
    assert!(v[3] > 10.0, "{v:?}");
    for k in [0, 3] {
        let v = low_spectrum(&p.with_degree(k), 2).unwrap();
        assert!(v[0] < 1.0 && v[1] > 10.0, "k={k}: {v:?}");
    }
    assert!(low_spectrum(&p, p.size() + 1).is_err());
}

#[test]
fn counts_match_critical_points() {
    assert_eq!(cluster_counts(20.0, 14, 1.0).unwrap(), [1, 3, 3, 1]);
    assert_eq!(cluster_counts(10.0, 10, 1.0).unwrap(), [1, 3, 3, 1]);
}

#[test]
fn unresolved_cluster_is_reported() {
    match cluster_counts(80.0, 6, 1.0) {
        Err(SpectralError::Adequacy { t, cutoff, suggested, .. }) => {
            assert_eq!((t, cutoff), (80.0, 6));
            assert!(suggested > 6);
        }
        other => panic!("expected an adequacy error, got {other:?}"),
    }
}

#[test]
fn form_is_symmetric_and_nonnegative() {
    for (t, n) in [(1.0, 4), (10.0, 6), (20.0, 8)] {
        for k in 0..4 {
            let p = SpectralProblem::new(t, n, k);
            let g = assemble_quadratic_form(&p).unwrap();
            assert!(max_asymmetry(&g, p.size()) < 1e-12);
            let v = spectrum(&p).unwrap();
            assert_eq!(v.len(), p.size());
            assert!(v[0] >= PSD_FLOOR, "t={t} N={n} k={k}: {}", v[0]);
        }
    }
}

#[test]
fn matrix_sizes() {
    assert_eq!(SpectralProblem::new(1.0, 14, 1).size(), 3 * 29 * 29);
    assert_eq!(SpectralProblem::new(1.0, 14, 0).size(), 29 * 29);
    assert_eq!(SpectralProblem::new(1.0, 14, 3).size(), 29 * 29);
}

#[test]
fn reversal_duality() {
    for (t, n) in [(5.0, 6), (20.0, 10)] {
        for k in 0..4 {
            let p = SpectralProblem::new(t, n, k);
            let a = spectrum(&p).unwrap();
            let b = spectrum(&p.reversed().with_degree(3 - k)).unwrap();
            assert_eq!(a.len(), b.len());
            for (i, (x, y)) in a.iter().zip(&b).enumerate() {
                assert!(close(*x, *y), "t={t} k={k} i={i}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn refinement_lowers_the_cluster() {
    for k in 0..4 {
        let coarse = report(&SpectralProblem::new(20.0, 12, k)).unwrap();
        let fine = report(&SpectralProblem::new(20.0, 14, k)).unwrap();
        assert_eq!(coarse.checked_count().unwrap(), fine.checked_count().unwrap());
        for (c, f) in coarse.eigenvalues.iter().zip(&fine.eigenvalues).take(coarse.low_count + 1) {
            assert!(*f <= c * (1.0 + 1e-9) + 1e-12, "k={k}: {f} > {c}");
        }
    }
}

#[test]
fn quasimodes_are_nearly_harmonic() {
    let base = SpectralProblem::new(20.0, 14, 0);
    for point in TorusCritical::ALL {
        for kind in [QuasimodeKind::First, QuasimodeKind::Second] {
            let k = point.index() + usize::from(kind == QuasimodeKind::Second);
            let q = quasimode(&base.with_degree(k), point, kind).unwrap();
            let norm: f64 = q.coefficients.iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-9);
            assert!(q.rayleigh < 0.1, "{} kind {}: {}", point.name(), kind.number(), q.rayleigh);
        }
    }
    let flipped = quasimode_flipped_iz(&base.with_degree(2)).unwrap();
    assert!(flipped.rayleigh > 1.0, "{}", flipped.rayleigh);
}

#[test]
fn quasimode_degree_mismatch() {
    let p = SpectralProblem::new(20.0, 6, 1);
    assert!(matches!(
        quasimode(&p, TorusCritical::Min, QuasimodeKind::First),
        Err(SpectralError::DegreeMismatch { kind: 1, index: 0, expected: 0, found: 1 })
    ));
    assert!(matches!(
        quasimode(&p.with_degree(2), TorusCritical::Max, QuasimodeKind::Second),
        Err(SpectralError::DegreeMismatch { kind: 2, index: 2, expected: 3, found: 2 })
    ));
}

#[test]
fn gap_fit_preconditions() {
    assert!(matches!(fit_gap(vec![(1.0, 2.0)]), Err(SpectralError::TooFewPoints(1))));
    let fit = fit_gap(vec![(10.0, 5.0), (10.0, 5.0), (10.0, 5.0)]).unwrap();
    assert!(fit.degenerate);
    assert_eq!(fit.slope, 0.0);
    let fit = fit_gap(vec![(1.0, 3.0), (2.0, 5.0), (3.0, 7.0)]).unwrap();
    assert!(!fit.degenerate);
    assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 1.0).abs() < 1e-12);
}

#[test]
fn invalid_problems() {
    assert!(spectrum(&SpectralProblem::new(-1.0, 6, 0)).is_err());
    assert!(spectrum(&SpectralProblem::new(1.0, 1, 0)).is_err());
    assert!(spectrum(&SpectralProblem::new(1.0, 6, 4)).is_err());
}
