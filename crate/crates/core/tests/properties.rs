use num_complex::Complex64;
use proptest::prelude::*;
use virtlink::algebra::approx_eq;
use virtlink::characterization::nondegeneracy_probe;
use virtlink::random::{
    cayley_orthogonal, random_model, random_real_orthogonal, random_tangle, rng,
};
use virtlink::reidemeister::{apply_move_tracked, enumerate_move_sites, MoveKind};
use virtlink::{
    det_tangle, glue, pair, partition_function, tangle_tensor, QuantumTangle, Tangle, VertexModel,
};

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_key_ignores_labels(seed in any::<u64>(), v in 0usize..5, k in 0usize..3) {
        let mut r = rng(seed);
        let t = random_tangle(&mut r, v, 2 * k);
        let perm: Vec<usize> = (0..v).rev().collect();
        let mut u = t.relabel_vertices(&perm).unwrap();
        for w in 0..v {
            u = u.rotate_vertex(w, 2);
        }
        prop_assert_eq!(t.canonical_form().0, u.canonical_form().0);
        let (key, form) = t.canonical_form();
        prop_assert_eq!(form.canonical_form().0, key);
    }

    #[test]
    fn rotation_by_two_gives_identical_values(seed in any::<u64>(), n in 1usize..4, v in 1usize..5) {
        let mut r = rng(seed);
        let model = random_model(&mut r, n, false);
        let g = random_tangle(&mut r, v, 0);
        let h = g.rotate_vertex(v - 1, 2);
        prop_assert_eq!(partition_function(&model, &g).unwrap(), partition_function(&model, &h).unwrap());
    }

    #[test]
    fn multiplicativity(seed in any::<u64>(), n in 1usize..4, a in 0usize..4, b in 0usize..4) {
        let mut r = rng(seed);
        let model = random_model(&mut r, n, false);
        let g = random_tangle(&mut r, a, 0);
        let h = random_tangle(&mut r, b, 0);
        let fg = partition_function(&model, &g).unwrap();
        let fh = partition_function(&model, &h).unwrap();
        let fgh = partition_function(&model, &g.disjoint_union(&h).unwrap()).unwrap();
        prop_assert!((fgh - fg * fh).norm() <= 1e-9 * (1.0 + (fg * fh).norm()));
    }

    #[test]
    fn pairing_identity(seed in any::<u64>(), n in 1usize..4, k in 1usize..3, a in 0usize..3, b in 0usize..3) {
        let mut r = rng(seed);
        let model = random_model(&mut r, n, false);
        let t = random_tangle(&mut r, a, 2 * k);
        let u = random_tangle(&mut r, b, 2 * k);
        let lhs = pair(&tangle_tensor(&model, &t), &tangle_tensor(&model, &u));
        let rhs = partition_function(&model, &glue(&t, &u).unwrap()).unwrap();
        prop_assert!(close(lhs, rhs, 1e-9));
    }

    #[test]
    fn orthogonal_invariance(seed in any::<u64>(), n in 2usize..4, v in 0usize..5, complex in any::<bool>()) {
        let mut r = rng(seed);
        let model = random_model(&mut r, n, false);
        let u = if complex { cayley_orthogonal(&mut r, n, false) } else { random_real_orthogonal(&mut r, n) };
        let moved = model.apply_orthogonal(&u).unwrap();
        let g = random_tangle(&mut r, v, 0);
        let before = partition_function(&model, &g).unwrap();
        let after = partition_function(&moved, &g).unwrap();
        prop_assert!(close(before, after, 1e-8));
    }

    #[test]
    fn glue_is_symmetric_up_to_isomorphism(seed in any::<u64>(), k in 0usize..3, a in 0usize..3, b in 0usize..3) {
        let mut r = rng(seed);
        let t = random_tangle(&mut r, a, 2 * k);
        let u = random_tangle(&mut r, b, 2 * k);
        let tu = glue(&t, &u).unwrap();
        let ut = glue(&u, &t).unwrap();
        prop_assert!(tu.is_isomorphic(&ut));
        prop_assert_eq!(tu.num_vertices(), a + b);
    }

    #[test]
    fn moves_invert(seed in any::<u64>(), v in 1usize..4, pick in any::<usize>()) {
        let mut r = rng(seed);
        let g = random_tangle(&mut r, v, 0);
        for kind in MoveKind::ALL {
            let sites = enumerate_move_sites(&g, kind);
            if sites.is_empty() {
                continue;
            }
            let site = &sites[pick % sites.len()];
            let (h, inverse) = apply_move_tracked(&g, site).unwrap();
            prop_assert_eq!(h.num_vertices() as isize, v as isize + kind.vertex_delta());
            if let Some(inv) = inverse {
                let (back, _) = apply_move_tracked(&h, &inv).unwrap();
                prop_assert_eq!(back.canonical_form().0, g.canonical_form().0);
            }
        }
    }

    #[test]
    fn knot_components_survive_moves(seed in any::<u64>(), v in 0usize..4, pick in any::<usize>()) {
        let mut r = rng(seed);
        let g = random_tangle(&mut r, v, 0).with_extra_loops(1);
        for kind in [MoveKind::R1Plus, MoveKind::R1Minus, MoveKind::R3] {
            let sites = enumerate_move_sites(&g, kind);
            if let Some(site) = sites.get(pick % sites.len().max(1)) {
                let (h, _) = apply_move_tracked(&g, site).unwrap();
                prop_assert_eq!(h.knot_components(), g.knot_components());
            }
        }
    }
}

#[test]
fn det_is_alternating_in_the_top_legs() {
    for m in 2..=4 {
        let det = det_tangle(m).unwrap();
        for i in 1..m {
            let mut perm: Vec<usize> = (1..=2 * m).collect();
            perm.swap(i - 1, i);
            let swapped = det.relabel_legs(&perm).unwrap();
            assert!(approx_eq(
                &swapped,
                &det.scale(Complex64::new(-1.0, 0.0)),
                1e-14
            ));
        }
        let factorial: usize = (1..=m).product();
        assert_eq!(det.len(), factorial);
    }
}

#[test]
fn empty_diagram_is_exactly_one() {
    let mut r = rng(1);
    for n in 1..4 {
        let model = random_model(&mut r, n, false);
        assert_eq!(
            partition_function(&model, &Tangle::empty()).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }
}

#[test]
fn probe_ranks_are_ordered() {
    let mut r = rng(2);
    for n in 1..3 {
        for real in [true, false] {
            let model = random_model(&mut r, n, real);
            for k in [2, 4] {
                let p = nondegeneracy_probe(&model, k, 1).unwrap();
                assert!(p.gram_rank <= p.span_rank);
                if real {
                    assert!(p.passes());
                }
            }
        }
    }
}

#[test]
fn quantum_gluing_is_bilinear() {
    let mut r = rng(3);
    let model: VertexModel = random_model(&mut r, 2, false);
    let t1 = random_tangle(&mut r, 1, 4);
    let t2 = random_tangle(&mut r, 0, 4);
    let u = random_tangle(&mut r, 1, 4);
    let c = Complex64::new(0.3, -1.2);
    let q = QuantumTangle::from_terms([(Complex64::new(1.0, 0.0), t1.clone()), (c, t2.clone())]);
    let glued = q.glue(&QuantumTangle::from_tangle(&u));
    let direct = partition_function(&model, &glue(&t1, &u).unwrap()).unwrap()
        + c * partition_function(&model, &glue(&t2, &u).unwrap()).unwrap();
    let via = virtlink::qt_evaluate(&model, &glued)
        .unwrap()
        .as_scalar()
        .unwrap();
    assert!(close(via, direct, 1e-12));
}
