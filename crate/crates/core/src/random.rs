//! Seeded samplers for tangles, models and orthogonal matrices.
//!
//! All randomness flows from [`rng`], a ChaCha8 generator seeded with
//! `seed_from_u64`, so a seed reproduces every sample across platforms.
//!
//! * Tangles: the `4|V| + k` ports are shuffled with Fisher–Yates
//!   (`SliceRandom::shuffle`) and consecutive ports are joined. This is the
//!   uniform distribution over wirings and always yields a valid tangle, so no
//!   repair pass is needed.
//! * Models: raw entries are independent uniform draws from `[-1, 1)` (real
//!   part, then imaginary part for complex models), in index order, followed by
//!   S2 symmetrization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::Tangle;
use crate::model::VertexModel;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random wiring of `vertices` 4-valent vertices and `arity` legs.
pub fn random_tangle<R: Rng + ?Sized>(rng: &mut R, vertices: usize, arity: usize) -> Tangle {
    assert!(arity.is_multiple_of(2), "arity must be even");
    let ports = 4 * vertices + arity;
    let mut order: Vec<usize> = (0..ports).collect();
    order.shuffle(rng);
    let mut mate = vec![0usize; ports];
    for pair in order.chunks(2) {
        mate[pair[0]] = pair[1];
        mate[pair[1]] = pair[0];
    }
    Tangle::from_mates(vertices, arity, mate, 0).expect("a perfect matching is a valid wiring")
}

pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, vertices: usize) -> Tangle {
    random_tangle(rng, vertices, 0)
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, real: bool) -> Complex64 {
    let re = rng.gen_range(-1.0..1.0);
    let im = if real { 0.0 } else { rng.gen_range(-1.0..1.0) };
    Complex64::new(re, im)
}

pub fn random_model<R: Rng + ?Sized>(rng: &mut R, n: usize, real: bool) -> VertexModel {
    let raw = (0..n.pow(4)).map(|_| uniform(rng, real)).collect();
    VertexModel::symmetrize(n, raw).expect("n^4 entries")
}

/// Random real orthogonal matrix (Q factor of a uniform random matrix).
pub fn random_real_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let m = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    m.qr().q().map(|x| Complex64::new(x, 0.0))
}

/// Half-width of the entries of `K` in [`cayley_orthogonal`]. Wider draws
/// reach matrices with `‖U‖` in the tens, where `f_{R^U}` is evaluated by
/// cancelling terms many orders of magnitude larger than the result.
pub const CAYLEY_SCALE: f64 = 0.25;

/// Cayley transform `(I - K)^{-1}(I + K)` of a random antisymmetric `K` with
/// entries uniform in `[-CAYLEY_SCALE, CAYLEY_SCALE)` (complex when `real` is
/// false). The result satisfies `U^T U = I`.
pub fn cayley_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize, real: bool) -> DMatrix<Complex64> {
    let mut k = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let z = uniform(rng, real) * CAYLEY_SCALE;
            k[(i, j)] = z;
            k[(j, i)] = -z;
        }
    }
    let id = DMatrix::<Complex64>::identity(n, n);
    let inv = (&id - &k)
        .try_inverse()
        .expect("I - K is invertible when K is small");
    inv * (&id + &k)
}

/// `R[i,j,k,l] = δ_ik δ_jl w(i,j)` with `w(i,i) = 1` and `w(i,j) = ±1`.
/// As an operator on `V ⊗ V` it is a diagonal involution, so every
/// Reidemeister condition holds.
pub fn sign_model<R: Rng + ?Sized>(rng: &mut R, n: usize) -> VertexModel {
    let mut raw = vec![Complex64::new(0.0, 0.0); n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            let w = if i == j || rng.gen_bool(0.5) {
                1.0
            } else {
                -1.0
            };
            raw[((i * n + j) * n + i) * n + j] = Complex64::new(w, 0.0);
        }
    }
    VertexModel::symmetrize(n, raw).expect("n^4 entries")
}

/// A dense real model satisfying the Reidemeister conditions: a random sign
/// model conjugated by a random real orthogonal matrix.
pub fn random_invariant_model<R: Rng + ?Sized>(rng: &mut R, n: usize) -> VertexModel {
    let base = sign_model(rng, n);
    let u = random_real_orthogonal(rng, n);
    base.apply_orthogonal(&u).expect("Q factor is orthogonal")
}

/// `count` random diagrams with at most `max_vertices` vertices whose knot
/// count lies in `components` (inclusive range).
pub fn diagram_corpus(
    seed: u64,
    count: usize,
    max_vertices: usize,
    components: std::ops::RangeInclusive<usize>,
) -> Vec<Tangle> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    let mut v = 1;
    while out.len() < count {
        let g = random_diagram(&mut rng, v);
        if components.contains(&g.knot_components()) {
            out.push(g);
        }
        v = v % max_vertices.max(1) + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::orthogonality_residual;

    #[test]
    fn same_seed_same_tangle() {
        let a = random_tangle(&mut rng(7), 3, 4);
        let b = random_tangle(&mut rng(7), 3, 4);
        assert_eq!(a, b);
        assert_eq!(a.arity(), 4);
        assert_eq!(a.num_vertices(), 3);
    }

    #[test]
    fn orthogonal_samplers() {
        let mut r = rng(1);
        for n in 1..5 {
            assert!(orthogonality_residual(&random_real_orthogonal(&mut r, n)) < 1e-12);
            assert!(orthogonality_residual(&cayley_orthogonal(&mut r, n, true)) < 1e-10);
            assert!(orthogonality_residual(&cayley_orthogonal(&mut r, n, false)) < 1e-12);
        }
    }

    #[test]
    fn real_models_are_real() {
        let m = random_model(&mut rng(3), 3, true);
        assert!(m.is_real(0.0));
        let m = random_model(&mut rng(3), 3, false);
        assert!(!m.is_real(1e-3));
    }

    #[test]
    fn corpus_respects_filters() {
        let corpus = diagram_corpus(5, 12, 4, 1..=3);
        assert_eq!(corpus.len(), 12);
        for g in &corpus {
            assert!(g.num_vertices() <= 4);
            assert!((1..=3).contains(&g.knot_components()));
        }
    }
}
