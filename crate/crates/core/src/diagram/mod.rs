//! Virtual link diagrams and k-tangles as abstract 4-valent graphs.
//!
//! A [`Tangle`] stores its wiring as a fixed-point-free involution on
//! *ports*. Vertex `v` owns ports `4v..4v+4` (its slots in clockwise order,
//! slots 0 and 2 being the over-going pair), and leg `i` (1-based) is port
//! `4|V| + i - 1`. Every edge is a pair of mated ports. Vertexless loops
//! carry no ports and are kept as a plain count.

mod canonical;
mod vld;

pub use canonical::{canonical_key, canonical_key_bounded, CanonicalKey, DEFAULT_CANONICAL_BOUND};
pub use vld::{parse_tangle, read_tangle};

use serde::Serialize;

use crate::error::{Error, Result};

/// One end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Endpoint {
    Slot {
        vertex: usize,
        slot: u8,
    },
    /// Leg label, 1-based.
    Leg(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tangle {
    vertices: usize,
    arity: usize,
    mate: Vec<usize>,
    loops: usize,
}

impl Tangle {
    /// The empty diagram K_0.
    pub fn empty() -> Self {
        Tangle {
            vertices: 0,
            arity: 0,
            mate: Vec::new(),
            loops: 0,
        }
    }

    /// `m` vertexless loops and nothing else (`O` for `m = 1`).
    pub fn loops(m: usize) -> Self {
        Tangle {
            loops: m,
            ..Tangle::empty()
        }
    }

    /// `v ≥ 1` vertices in a row, slots 2 and 3 of each joined to slots 0 and
    /// 1 of the next; the two ends are closed by self-loops. It has `2v`
    /// edges and a single knot component.
    pub fn chain(v: usize) -> Self {
        assert!(v >= 1, "a chain needs a vertex");
        let slot = |vertex: usize, slot: u8| Endpoint::Slot { vertex, slot };
        let mut edges = vec![(slot(0, 0), slot(0, 1)), (slot(v - 1, 2), slot(v - 1, 3))];
        for i in 0..v - 1 {
            edges.push((slot(i, 2), slot(i + 1, 0)));
            edges.push((slot(i, 3), slot(i + 1, 1)));
        }
        Self::from_edges(v, 0, &edges, 0).expect("chain wiring is complete")
    }

    /// Builds a tangle from an explicit edge list. Every slot of every vertex
    /// and every leg `1..=arity` must occur in exactly one edge.
    pub fn from_edges(
        vertices: usize,
        arity: usize,
        edges: &[(Endpoint, Endpoint)],
        loops: usize,
    ) -> Result<Self> {
        let ports = 4 * vertices + arity;
        let mut mate = vec![usize::MAX; ports];
        let port = |e: Endpoint| -> Result<usize> {
            match e {
                Endpoint::Slot { vertex, slot } if vertex < vertices && slot < 4 => {
                    Ok(4 * vertex + slot as usize)
                }
                Endpoint::Leg(label) if (1..=arity).contains(&label) => {
                    Ok(4 * vertices + label - 1)
                }
                _ => Err(Error::InvalidTangle(format!("endpoint {e:?} out of range"))),
            }
        };
        for &(a, b) in edges {
            let (pa, pb) = (port(a)?, port(b)?);
            if pa == pb {
                return Err(Error::InvalidTangle(format!("edge joins {a:?} to itself")));
            }
            for (p, e) in [(pa, a), (pb, b)] {
                if mate[p] != usize::MAX {
                    return Err(Error::InvalidTangle(format!("{e:?} used by two edges")));
                }
            }
            mate[pa] = pb;
            mate[pb] = pa;
        }
        Self::from_mates(vertices, arity, mate, loops)
    }

    /// Builds a tangle from a raw port involution.
    pub(crate) fn from_mates(
        vertices: usize,
        arity: usize,
        mate: Vec<usize>,
        loops: usize,
    ) -> Result<Self> {
        let t = Tangle {
            vertices,
            arity,
            mate,
            loops,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if !self.arity.is_multiple_of(2) {
            return Err(Error::InvalidTangle(format!("arity {} is odd", self.arity)));
        }
        if self.mate.len() != 4 * self.vertices + self.arity {
            return Err(Error::InvalidTangle(
                "port table has the wrong length".into(),
            ));
        }
        for (p, &m) in self.mate.iter().enumerate() {
            if m == usize::MAX {
                return Err(Error::InvalidTangle(format!(
                    "{:?} is not attached to any edge",
                    self.endpoint(p)
                )));
            }
            if m >= self.mate.len() || m == p || self.mate[m] != p {
                return Err(Error::InvalidTangle(format!(
                    "{:?} has an inconsistent mate",
                    self.endpoint(p)
                )));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn loop_count(&self) -> usize {
        self.loops
    }

    pub fn is_diagram(&self) -> bool {
        self.arity == 0
    }

    pub fn num_edges(&self) -> usize {
        self.mate.len() / 2
    }

    pub(crate) fn num_ports(&self) -> usize {
        self.mate.len()
    }

    pub(crate) fn mate_port(&self, p: usize) -> usize {
        self.mate[p]
    }

    pub(crate) fn slot_port(&self, vertex: usize, slot: usize) -> usize {
        4 * vertex + slot
    }

    pub(crate) fn leg_port(&self, label: usize) -> usize {
        4 * self.vertices + label - 1
    }

    pub fn endpoint(&self, port: usize) -> Endpoint {
        if port < 4 * self.vertices {
            Endpoint::Slot {
                vertex: port / 4,
                slot: (port % 4) as u8,
            }
        } else {
            Endpoint::Leg(port - 4 * self.vertices + 1)
        }
    }

    pub fn mate_of(&self, e: Endpoint) -> Endpoint {
        let p = match e {
            Endpoint::Slot { vertex, slot } => self.slot_port(vertex, slot as usize),
            Endpoint::Leg(label) => self.leg_port(label),
        };
        self.endpoint(self.mate[p])
    }

    /// Edges as port pairs `(p, q)` with `p < q`, ordered by `p`. The index of
    /// an edge in this list is its edge id.
    pub(crate) fn edge_ports(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(p, &q)| p < q)
            .map(|(p, &q)| (p, q))
            .collect()
    }

    /// Edge id of every port (both ends of an edge share one id).
    pub(crate) fn edge_index(&self) -> Vec<usize> {
        let mut index = vec![0; self.mate.len()];
        for (id, (p, q)) in self.edge_ports().into_iter().enumerate() {
            index[p] = id;
            index[q] = id;
        }
        index
    }

    pub fn edges(&self) -> Vec<(Endpoint, Endpoint)> {
        self.edge_ports()
            .into_iter()
            .map(|(p, q)| (self.endpoint(p), self.endpoint(q)))
            .collect()
    }

    /// Disjoint union `GH` of two diagrams.
    pub fn disjoint_union(&self, other: &Tangle) -> Result<Tangle> {
        if self.arity != 0 || other.arity != 0 {
            return Err(Error::Usage(format!(
                "disjoint union is defined on diagrams, got arities {} and {}",
                self.arity, other.arity
            )));
        }
        let offset = 4 * self.vertices;
        let mut mate = self.mate.clone();
        mate.extend(other.mate.iter().map(|&m| m + offset));
        Tangle::from_mates(
            self.vertices + other.vertices,
            0,
            mate,
            self.loops + other.loops,
        )
    }

    /// Number of strands: components of the edge graph in which two edges are
    /// adjacent when they sit opposite each other at a vertex, plus one per
    /// vertexless loop. For diagrams these are the knots.
    pub fn knot_components(&self) -> usize {
        let index = self.edge_index();
        let mut uf = UnionFind::new(self.num_edges());
        for v in 0..self.vertices {
            uf.union(index[4 * v], index[4 * v + 2]);
            uf.union(index[4 * v + 1], index[4 * v + 3]);
        }
        uf.count() + self.loops
    }

    /// Same tangle with slot order reversed at every vertex (the mirror image).
    pub fn mirror(&self) -> Tangle {
        let map = |p: usize| {
            if p < 4 * self.vertices {
                4 * (p / 4) + (4 - p % 4) % 4
            } else {
                p
            }
        };
        let mut mate = vec![0; self.mate.len()];
        for (p, &q) in self.mate.iter().enumerate() {
            mate[map(p)] = map(q);
        }
        Tangle {
            mate,
            ..self.clone()
        }
    }

    /// Rotates the slots of `vertex` by `by` positions (slot `s` becomes slot
    /// `s + by`). Rotation by two is a symmetry of every vertex.
    pub fn rotate_vertex(&self, vertex: usize, by: usize) -> Tangle {
        let map = |p: usize| {
            if p / 4 == vertex && p < 4 * self.vertices {
                4 * vertex + (p % 4 + by) % 4
            } else {
                p
            }
        };
        let mut mate = vec![0; self.mate.len()];
        for (p, &q) in self.mate.iter().enumerate() {
            mate[map(p)] = map(q);
        }
        Tangle {
            mate,
            ..self.clone()
        }
    }

    /// Renames vertices: old vertex `v` becomes `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[usize]) -> Result<Tangle> {
        if perm.len() != self.vertices {
            return Err(Error::Usage("permutation has the wrong length".into()));
        }
        let map = |p: usize| {
            if p < 4 * self.vertices {
                4 * perm[p / 4] + p % 4
            } else {
                p
            }
        };
        let mut mate = vec![usize::MAX; self.mate.len()];
        for (p, &q) in self.mate.iter().enumerate() {
            mate[map(p)] = map(q);
        }
        Tangle::from_mates(self.vertices, self.arity, mate, self.loops)
    }

    /// Renames leg `i` to `perm[i - 1]`; `perm` must be a permutation of `1..=k`.
    pub fn relabel_legs(&self, perm: &[usize]) -> Result<Tangle> {
        let k = self.arity;
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if perm.len() != k || sorted.iter().enumerate().any(|(i, &l)| l != i + 1) {
            return Err(Error::Usage(format!(
                "{perm:?} is not a permutation of the leg labels 1..={k}"
            )));
        }
        let base = 4 * self.vertices;
        let map = |p: usize| {
            if p < base {
                p
            } else {
                base + perm[p - base] - 1
            }
        };
        let mut mate = vec![0; self.mate.len()];
        for (p, &q) in self.mate.iter().enumerate() {
            mate[map(p)] = map(q);
        }
        Tangle::from_mates(self.vertices, k, mate, self.loops)
    }

    /// Tangle with `extra` more vertexless loops.
    pub fn with_extra_loops(&self, extra: usize) -> Tangle {
        Tangle {
            loops: self.loops + extra,
            ..self.clone()
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn count(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&x| self.find(x) == x)
            .count()
    }
}
