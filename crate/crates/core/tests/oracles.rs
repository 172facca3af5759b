//! Library results against independent brute-force computations.

use num_complex::Complex64;
use virtlink::algebra::{matching_tangle, signed_permutations};
use virtlink::contraction::naive_tangle_tensor;
use virtlink::random::{random_model, random_tangle, rng};
use virtlink::reidemeister::{check_algebraic, move_tangle, MoveFamily};
use virtlink::{
    enumerate_tangles, glue, qt_evaluate, tangle_tensor, Endpoint, Tangle, VertexModel,
};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    signed_permutations(n).into_iter().map(|(p, _)| p).collect()
}

/// Isomorphism by trying every vertex bijection and every rotation in {0, 2}.
fn brute_isomorphic(a: &Tangle, b: &Tangle) -> bool {
    if (a.num_vertices(), a.arity(), a.loop_count())
        != (b.num_vertices(), b.arity(), b.loop_count())
    {
        return false;
    }
    let v = a.num_vertices();
    for perm in permutations(v) {
        for mask in 0..(1u32 << v) {
            let map = |e: Endpoint| match e {
                Endpoint::Slot { vertex, slot } => {
                    let rot = if mask >> vertex & 1 == 1 { 2 } else { 0 };
                    Endpoint::Slot {
                        vertex: perm[vertex],
                        slot: (slot + rot) % 4,
                    }
                }
                leg => leg,
            };
            if a.edges().iter().all(|&(x, y)| b.mate_of(map(x)) == map(y)) {
                return true;
            }
        }
    }
    false
}

/// Sum over all edge colorings, written directly from the definition.
fn brute_value(model: &VertexModel, g: &Tangle) -> Complex64 {
    let n = model.n();
    let edges = g.edges();
    let edge_of = |e: Endpoint| {
        edges
            .iter()
            .position(|&(x, y)| x == e || y == e)
            .expect("every slot is on an edge")
    };
    let at: Vec<[usize; 4]> = (0..g.num_vertices())
        .map(|v| {
            std::array::from_fn(|s| {
                edge_of(Endpoint::Slot {
                    vertex: v,
                    slot: s as u8,
                })
            })
        })
        .collect();
    let mut colors = vec![0usize; edges.len()];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let mut w = Complex64::new(1.0, 0.0);
        for e in &at {
            w *= model.get(colors[e[0]], colors[e[1]], colors[e[2]], colors[e[3]]);
        }
        total += w;
        let mut i = 0;
        while i < colors.len() {
            colors[i] += 1;
            if colors[i] < n {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
        if i == colors.len() {
            break;
        }
    }
    total * (n as f64).powi(g.loop_count() as i32)
}

#[test]
fn canonical_key_agrees_with_brute_force_isomorphism() {
    let mut r = rng(100);
    for v in 0..=3 {
        for k in [0, 2, 4] {
            let sample: Vec<Tangle> = (0..12).map(|_| random_tangle(&mut r, v, k)).collect();
            for a in &sample {
                for b in &sample {
                    assert_eq!(a.is_isomorphic(b), brute_isomorphic(a, b), "{a:?} vs {b:?}");
                }
                // random relabeling and rotation produce an isomorphic copy
                let perm = &permutations(v)[(v * 7) % permutations(v).len().max(1)];
                let mut c = a.relabel_vertices(perm).unwrap();
                for w in 0..v {
                    c = c.rotate_vertex(w, 2 * (w % 2));
                }
                assert!(a.is_isomorphic(&c));
                assert!(brute_isomorphic(a, &c));
            }
        }
    }
}

#[test]
fn enumeration_matches_brute_force_classes() {
    for (k, max_v) in [(2, 1), (4, 1), (0, 2), (2, 2)] {
        // every wiring, grouped by the brute-force oracle
        let mut classes: Vec<Tangle> = Vec::new();
        for v in 0..=max_v {
            for t in all_wirings(v, k) {
                if !classes.iter().any(|c| brute_isomorphic(c, &t)) {
                    classes.push(t);
                }
            }
        }
        let listed = enumerate_tangles(k, max_v).unwrap();
        assert_eq!(listed.len(), classes.len(), "k = {k}, max_v = {max_v}");
    }
}

fn all_wirings(v: usize, k: usize) -> Vec<Tangle> {
    let ports: Vec<Endpoint> = (0..v)
        .flat_map(|vertex| (0..4).map(move |slot| Endpoint::Slot { vertex, slot }))
        .chain((1..=k).map(Endpoint::Leg))
        .collect();
    let mut out = Vec::new();
    fn rec(
        rest: &[Endpoint],
        acc: &mut Vec<(Endpoint, Endpoint)>,
        v: usize,
        k: usize,
        out: &mut Vec<Tangle>,
    ) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(Tangle::from_edges(v, k, acc, 0).unwrap());
            return;
        };
        for i in 0..tail.len() {
            let mut remaining = tail.to_vec();
            let partner = remaining.remove(i);
            acc.push((first, partner));
            rec(&remaining, acc, v, k, out);
            acc.pop();
        }
    }
    rec(&ports, &mut Vec::new(), v, k, &mut out);
    out
}

fn cycles(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for s in 0..p.len() {
        if !seen[s] {
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
            }
        }
    }
    count
}

#[test]
fn gluing_matchings_counts_cycles() {
    for m in 1..=4 {
        let perms = permutations(m);
        for pi in &perms {
            for sigma in &perms {
                let g = glue(
                    &matching_tangle(pi).unwrap(),
                    &matching_tangle(sigma).unwrap(),
                )
                .unwrap();
                let mut inv = vec![0; m];
                for (i, &s) in sigma.iter().enumerate() {
                    inv[s] = i;
                }
                let composed: Vec<usize> = pi.iter().map(|&x| inv[x]).collect();
                assert_eq!(g.num_vertices(), 0);
                assert_eq!(g.loop_count(), cycles(&composed));
            }
        }
    }
}

#[test]
fn evaluation_matches_direct_coloring_sum() {
    let mut r = rng(7);
    for n in 1..=3 {
        let model = random_model(&mut r, n, false);
        for v in 0..=4 {
            let mut g = random_tangle(&mut r, v, 0);
            if v % 2 == 1 {
                g = g.with_extra_loops(1);
            }
            let fast = tangle_tensor(&model, &g).as_scalar().unwrap();
            let slow = brute_value(&model, &g);
            assert!((fast - slow).norm() <= 1e-10 * (1.0 + slow.norm()));
            let naive = naive_tangle_tensor(&model, &g).as_scalar().unwrap();
            assert!((naive - slow).norm() <= 1e-10 * (1.0 + slow.norm()));
        }
    }
}

#[test]
fn move_tangles_evaluate_to_condition_residuals() {
    let mut r = rng(8);
    for n in 1..=3 {
        for real in [true, false] {
            let model = random_model(&mut r, n, real);
            let report = check_algebraic(&model, 1e-10);
            let residuals = [report.residual_r1, report.residual_r2, report.residual_r3];
            for (family, expected) in MoveFamily::ALL.into_iter().zip(residuals) {
                let got = qt_evaluate(&model, &move_tangle(family))
                    .unwrap()
                    .frobenius_norm();
                assert!(
                    (got - expected).abs() <= 1e-10 * (1.0 + expected),
                    "{family:?}: {got} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn strand_model_counts_components() {
    let i = Complex64::new(0.0, 1.0);
    let a = nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(2.0, 0.0), i, i, Complex64::new(0.0, 0.0)],
    );
    let model = VertexModel::from_strand_matrix(&a).unwrap();
    let mut r = rng(9);
    for v in 0..=5 {
        for _ in 0..4 {
            let g = random_tangle(&mut r, v, 0);
            let expected = 2f64.powi(g.knot_components() as i32);
            let got = tangle_tensor(&model, &g).as_scalar().unwrap();
            assert!(
                (got - expected).norm() <= 1e-9 * expected,
                "{got} vs {expected}"
            );
        }
    }
}
