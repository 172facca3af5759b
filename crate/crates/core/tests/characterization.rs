use num_complex::Complex64;
use virtlink::characterization::{gram_psd, kernel_battery, nondegeneracy_probe, GramBasis};
use virtlink::random::{random_model, rng};
use virtlink::{enumerate_tangles, Tangle, VertexModel};

#[test]
fn zero_model_gram_vanishes_off_the_matching_block() {
    let report = gram_psd(&VertexModel::zero(2), 1).unwrap();
    for (i, a) in report.basis.iter().enumerate() {
        for (j, b) in report.basis.iter().enumerate() {
            if a.num_vertices() + b.num_vertices() > 0 {
                assert_eq!(report.gram[i][j], 0.0);
            }
        }
    }
    assert!(report.min_eigenvalue.abs() < 1e-12);
    assert!(report.is_psd());
}

#[test]
fn gram_is_exactly_symmetric_and_real() {
    let basis = GramBasis::new(1).unwrap();
    let mut r = rng(4);
    for _ in 0..5 {
        let report = basis.report(&random_model(&mut r, 2, true)).unwrap();
        assert_eq!(report.hermiticity_residual, 0.0);
        assert_eq!(report.max_imag, 0.0);
        assert!(report.is_psd());
    }
}

#[test]
fn kernel_control_is_not_vacuous() {
    let mut r = rng(5);
    for n in [1, 2] {
        let model = random_model(&mut r, n, false);
        let report = kernel_battery(&model, 40, 2, 6).unwrap();
        assert!(report.passes(1e-8));
        assert!(report.negative_control > 1e-3);
    }
}

#[test]
fn enumeration_is_sorted_and_loop_free() {
    let list = enumerate_tangles(4, 1).unwrap();
    let keys: Vec<_> = list.iter().map(|t| t.canonical_form().0).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert!(list
        .iter()
        .all(|t: &Tangle| t.loop_count() == 0 && t.arity() == 4));
}

#[test]
fn strand_model_probe_is_reported() {
    let i = Complex64::new(0.0, 1.0);
    let a = nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(2.0, 0.0), i, i, Complex64::new(0.0, 0.0)],
    );
    let model = VertexModel::from_strand_matrix(&a).unwrap();
    // outcome is recorded, not asserted
    let p = nondegeneracy_probe(&model, 2, 1).unwrap();
    assert!(p.gram_rank <= p.span_rank);
}
