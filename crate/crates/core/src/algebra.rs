//! Quantum tangles and the gluing product.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::diagram::{CanonicalKey, Endpoint, Tangle};
use crate::error::{Error, Result};

/// Coefficients at or below this magnitude are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Largest `m` accepted by [`det_tangle`] (720 terms).
pub const DEFAULT_DET_BOUND: usize = 6;

/// Glues two k-tangles along equally labeled legs into a diagram.
///
/// Chains of leg-to-leg edges are followed through; a chain that closes up
/// without meeting a vertex becomes a vertexless loop. The vertices of `t`
/// keep their indices and those of `u` follow them.
pub fn glue(t: &Tangle, u: &Tangle) -> Result<Tangle> {
    let k = t.arity();
    if k != u.arity() {
        return Err(Error::ArityMismatch {
            left: k,
            right: u.arity(),
        });
    }
    let (vt, vu) = (t.num_vertices(), u.num_vertices());
    let slots = 4 * (vt + vu);
    let map_t = |p: usize| if p < 4 * vt { p } else { slots + (p - 4 * vt) };
    let map_u = |p: usize| {
        if p < 4 * vu {
            4 * vt + p
        } else {
            slots + k + (p - 4 * vu)
        }
    };
    let total = slots + 2 * k;
    let mut mate = vec![0usize; total];
    for p in 0..t.num_ports() {
        mate[map_t(p)] = map_t(t.mate_port(p));
    }
    for p in 0..u.num_ports() {
        mate[map_u(p)] = map_u(u.mate_port(p));
    }
    // leg i of t is identified with leg i of u
    let link = |q: usize| if q < slots + k { q + k } else { q - k };

    let mut visited = vec![false; total];
    let mut result = vec![0usize; slots];
    for p in 0..slots {
        let mut q = mate[p];
        while q >= slots {
            visited[q] = true;
            let r = link(q);
            visited[r] = true;
            q = mate[r];
        }
        result[p] = q;
    }
    let mut cycles = 0;
    for start in slots..total {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut q = start;
        while !visited[q] {
            visited[q] = true;
            let r = link(q);
            visited[r] = true;
            q = mate[r];
        }
    }
    Tangle::from_mates(vt + vu, 0, result, t.loop_count() + u.loop_count() + cycles)
}

/// The vertex-free `2m`-tangle with edges `{i, m + perm(i)}` (legs 1-based,
/// `perm` a 0-based permutation of `0..m`).
pub fn matching_tangle(perm: &[usize]) -> Result<Tangle> {
    let m = perm.len();
    let mut seen = vec![false; m];
    for &p in perm {
        if p >= m || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Usage(format!("{perm:?} is not a permutation")));
        }
    }
    let edges: Vec<_> = perm
        .iter()
        .enumerate()
        .map(|(i, &p)| (Endpoint::Leg(i + 1), Endpoint::Leg(m + p + 1)))
        .collect();
    Tangle::from_edges(0, 2 * m, &edges, 0)
}

/// All permutations of `0..m` with their signs.
pub fn signed_permutations(m: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i32)>) {
        let m = used.len();
        if prefix.len() == m {
            let inversions = (0..m)
                .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                .filter(|&(i, j)| prefix[i] > prefix[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            out.push((prefix.clone(), sign));
            return;
        }
        for x in 0..m {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// `det_m = Σ_{π ∈ S_m} sgn(π) T_π`.
pub fn det_tangle(m: usize) -> Result<QuantumTangle> {
    det_tangle_bounded(m, DEFAULT_DET_BOUND)
}

pub fn det_tangle_bounded(m: usize, bound: usize) -> Result<QuantumTangle> {
    if m == 0 {
        return Err(Error::Usage("det_tangle needs m >= 1".into()));
    }
    if m > bound {
        return Err(Error::BoundExceeded {
            what: "determinant tangle size m",
            value: m,
            bound,
            hint: " (the tangle has m! terms)",
        });
    }
    let mut q = QuantumTangle::zero();
    for (perm, sign) in signed_permutations(m) {
        q.add_term(Complex64::from(sign as f64), matching_tangle(&perm)?);
    }
    Ok(q)
}

/// The derivative quantum 4-tangle `dG`.
///
/// For each vertex `v`, the vertex is cut out and its four slot edges become
/// legs; the two labelings `(1,2,3,4)` and `(3,4,1,2)` of slots `0..3` each
/// enter with weight one half.
pub fn tangle_derivative(g: &Tangle) -> Result<QuantumTangle> {
    if !g.is_diagram() {
        return Err(Error::NotADiagram { arity: g.arity() });
    }
    let mut q = QuantumTangle::zero();
    for v in 0..g.num_vertices() {
        for shift in [0, 2] {
            q.add_term(Complex64::new(0.5, 0.0), cut_vertex(g, v, shift));
        }
    }
    Ok(q)
}

/// `g` with vertex `v` removed; slot `s` of `v` becomes leg `(s + shift) % 4 + 1`.
fn cut_vertex(g: &Tangle, v: usize, shift: usize) -> Tangle {
    let nv = g.num_vertices() - 1;
    let map = |p: usize| {
        let w = p / 4;
        if w == v {
            4 * nv + (p % 4 + shift) % 4
        } else if w > v {
            p - 4
        } else {
            p
        }
    };
    let mut mate = vec![0usize; 4 * nv + 4];
    for p in 0..g.num_ports() {
        mate[map(p)] = map(g.mate_port(p));
    }
    Tangle::from_mates(nv, 4, mate, g.loop_count())
        .expect("cutting a vertex keeps the wiring valid")
}

#[derive(Clone, Debug)]
pub struct Term {
    pub tangle: Tangle,
    pub coeff: Complex64,
}

/// A finite formal complex combination of tangles, keyed by canonical form.
#[derive(Clone, Debug, Default)]
pub struct QuantumTangle {
    terms: BTreeMap<CanonicalKey, Term>,
}

impl QuantumTangle {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_tangle(t: &Tangle) -> Self {
        let mut q = Self::zero();
        q.add_term(Complex64::new(1.0, 0.0), t.clone());
        q
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Complex64, Tangle)>) -> Self {
        let mut q = Self::zero();
        for (c, t) in terms {
            q.add_term(c, t);
        }
        q
    }

    /// Adds `c · t`, merging with an isomorphic term if present.
    pub fn add_term(&mut self, c: Complex64, t: Tangle) {
        let (key, form) = t.canonical_form();
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().coeff += c;
                if e.get().coeff.norm() <= PRUNE_THRESHOLD {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                if c.norm() > PRUNE_THRESHOLD {
                    e.insert(Term {
                        tangle: form,
                        coeff: c,
                    });
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &Term)> {
        self.terms.iter()
    }

    /// Coefficient of the isomorphism class of `t` (zero when absent).
    pub fn coefficient(&self, t: &Tangle) -> Complex64 {
        self.terms
            .get(&t.canonical_form().0)
            .map_or(Complex64::new(0.0, 0.0), |term| term.coeff)
    }

    pub fn arities(&self) -> BTreeSet<usize> {
        self.terms.values().map(|t| t.tangle.arity()).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.values().map(|t| (c * t.coeff, t.tangle.clone())))
    }

    /// Bilinear gluing product; pairs of terms with different arities give 0.
    pub fn glue(&self, other: &QuantumTangle) -> QuantumTangle {
        let mut q = QuantumTangle::zero();
        for a in self.terms.values() {
            for b in other.terms.values() {
                if a.tangle.arity() == b.tangle.arity() {
                    let g = glue(&a.tangle, &b.tangle).expect("arities checked");
                    q.add_term(a.coeff * b.coeff, g);
                }
            }
        }
        q
    }

    /// Renames leg `i` to `perm[i - 1]` in every term.
    pub fn relabel_legs(&self, perm: &[usize]) -> Result<QuantumTangle> {
        let mut q = QuantumTangle::zero();
        for t in self.terms.values() {
            q.add_term(t.coeff, t.tangle.relabel_legs(perm)?);
        }
        Ok(q)
    }
}

impl Add for &QuantumTangle {
    type Output = QuantumTangle;

    fn add(self, rhs: &QuantumTangle) -> QuantumTangle {
        let mut q = self.clone();
        for t in rhs.terms.values() {
            q.add_term(t.coeff, t.tangle.clone());
        }
        q
    }
}

impl Sub for &QuantumTangle {
    type Output = QuantumTangle;

    fn sub(self, rhs: &QuantumTangle) -> QuantumTangle {
        self + &(-rhs)
    }
}

impl Neg for &QuantumTangle {
    type Output = QuantumTangle;

    fn neg(self) -> QuantumTangle {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Equality of term maps up to a coefficient tolerance.
pub fn approx_eq(a: &QuantumTangle, b: &QuantumTangle, tol: f64) -> bool {
    let keys: BTreeSet<&CanonicalKey> = a.terms.keys().chain(b.terms.keys()).collect();
    keys.into_iter().all(|k| {
        let ca = a.terms.get(k).map_or(Complex64::new(0.0, 0.0), |t| t.coeff);
        let cb = b.terms.get(k).map_or(Complex64::new(0.0, 0.0), |t| t.coeff);
        (ca - cb).norm() <= tol
    })
}
