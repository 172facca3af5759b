//! Canonical forms of tangles up to isomorphism.
//!
//! Isomorphisms may rename vertices and rotate any vertex by two slots
//! (swapping the members of both opposite pairs); they keep the clockwise
//! order, so mirror images stay distinct, and they fix leg labels.
//!
//! Reaching a vertex through a slot `s` pins its rotation: the rotation is
//! chosen so that `s` lands in canonical slot 0 or 1. A breadth-first walk
//! from a fixed start therefore determines a unique relabeling of the whole
//! connected component, and the lexicographically smallest walk code over all
//! starts is a complete invariant. Components holding legs start at their
//! smallest leg, so only vertex-only components need to try every start.

use std::fmt;

use super::{Tangle, UnionFind};
use crate::error::{Error, Result};

pub const DEFAULT_CANONICAL_BOUND: usize = 10;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

/// Canonical key with the default vertex bound.
pub fn canonical_key(t: &Tangle) -> Result<CanonicalKey> {
    canonical_key_bounded(t, Some(DEFAULT_CANONICAL_BOUND))
}

/// Canonical key; `None` disables the vertex bound.
pub fn canonical_key_bounded(t: &Tangle, bound: Option<usize>) -> Result<CanonicalKey> {
    if let Some(bound) = bound {
        if t.num_vertices() > bound {
            return Err(Error::BoundExceeded {
                what: "vertex count for canonicalization",
                value: t.num_vertices(),
                bound,
                hint: "; pass a larger bound (or None) to canonical_key_bounded, \
                       or compare tangles by structural hash only",
            });
        }
    }
    Ok(t.canonical_form().0)
}

const TAG_LEG: u32 = 0;
const TAG_SLOT: u32 = 1;

struct Walk {
    code: Vec<u32>,
    /// Visited vertices in discovery order with their rotation (0 or 2).
    order: Vec<(usize, usize)>,
}

#[derive(Clone, Copy)]
enum Start {
    Leg(usize),
    Vertex(usize, usize),
}

/// Canonical slot of original slot `s` under rotation `r`.
fn canon_slot(s: usize, r: usize) -> usize {
    (s + 4 - r) % 4
}

fn rotation_for_arrival(s: usize) -> usize {
    if s < 2 {
        0
    } else {
        2
    }
}

struct Walker<'a> {
    t: &'a Tangle,
    id: Vec<Option<usize>>,
    rot: Vec<usize>,
    order: Vec<(usize, usize)>,
    code: Vec<u32>,
}

impl<'a> Walker<'a> {
    fn new(t: &'a Tangle) -> Self {
        let nv = t.num_vertices();
        Walker {
            t,
            id: vec![None; nv],
            rot: vec![0; nv],
            order: Vec::new(),
            code: Vec::new(),
        }
    }

    fn visit(&mut self, v: usize, r: usize) {
        self.id[v] = Some(self.order.len());
        self.rot[v] = r;
        self.order.push((v, r));
    }

    fn emit(&mut self, port: usize) {
        let nv = self.t.num_vertices();
        if port >= 4 * nv {
            self.code.extend([TAG_LEG, (port - 4 * nv + 1) as u32]);
            return;
        }
        let (w, s) = (port / 4, port % 4);
        if self.id[w].is_none() {
            self.visit(w, rotation_for_arrival(s));
        }
        let id = self.id[w].expect("visited") as u32;
        self.code
            .extend([TAG_SLOT, id, canon_slot(s, self.rot[w]) as u32]);
    }

    fn run(&mut self, start: Start) -> Walk {
        for (v, _) in self.order.drain(..) {
            self.id[v] = None;
        }
        self.code.clear();
        match start {
            Start::Leg(label) => {
                self.code.extend([TAG_LEG, label as u32]);
                self.emit(self.t.mate_port(self.t.leg_port(label)));
            }
            Start::Vertex(v, r) => self.visit(v, r),
        }
        let mut head = 0;
        while head < self.order.len() {
            let (v, r) = self.order[head];
            head += 1;
            for c in 0..4 {
                self.emit(self.t.mate_port(4 * v + (c + r) % 4));
            }
        }
        Walk {
            code: self.code.clone(),
            order: self.order.clone(),
        }
    }
}

impl Tangle {
    /// Canonical key together with the canonically relabeled tangle. Tangles
    /// with equal keys have identical canonical forms.
    pub fn canonical_form(&self) -> (CanonicalKey, Tangle) {
        let nv = self.num_vertices();
        let nports = self.num_ports();

        // Components over ports; vertex ports are merged per vertex.
        let mut uf = UnionFind::new(nports);
        for v in 0..nv {
            for s in 1..4 {
                uf.union(4 * v, 4 * v + s);
            }
        }
        for p in 0..nports {
            uf.union(p, self.mate_port(p));
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut min_leg: Vec<Option<usize>> = vec![None; nports];
        for label in 1..=self.arity() {
            let root = uf.find(self.leg_port(label));
            if min_leg[root].is_none() {
                min_leg[root] = Some(label);
            }
        }
        for v in 0..nv {
            let root = uf.find(4 * v);
            if !roots.contains(&root) {
                roots.push(root);
            }
        }
        for label in 1..=self.arity() {
            let root = uf.find(self.leg_port(label));
            if !roots.contains(&root) {
                roots.push(root);
            }
        }

        let mut walker = Walker::new(self);
        let mut components: Vec<Walk> = Vec::new();
        for &root in &roots {
            let best = match min_leg[root] {
                Some(label) => walker.run(Start::Leg(label)),
                None => {
                    let members: Vec<usize> = (0..nv).filter(|&v| uf.find(4 * v) == root).collect();
                    let mut best: Option<Walk> = None;
                    for &v in &members {
                        for r in [0, 2] {
                            let w = walker.run(Start::Vertex(v, r));
                            if best.as_ref().is_none_or(|b| w.code < b.code) {
                                best = Some(w);
                            }
                        }
                    }
                    best.expect("component has a vertex")
                }
            };
            components.push(best);
        }
        components.sort_by(|a, b| a.code.cmp(&b.code));

        // Key bytes: header, then each component code prefixed by its length.
        let mut words: Vec<u32> = vec![self.arity() as u32, nv as u32, self.loop_count() as u32];
        for c in &components {
            words.push(c.code.len() as u32);
            words.extend(&c.code);
        }
        let mut bytes = Vec::with_capacity(words.len() * 2);
        for w in words {
            if w < 0x8000 {
                bytes.extend((w as u16).to_be_bytes());
            } else {
                bytes.extend((0x8000_0000u32 | w).to_be_bytes());
            }
        }

        // Relabeled tangle: vertices numbered by component order, then walk order.
        let mut new_id = vec![0usize; nv];
        let mut rotation = vec![0usize; nv];
        let mut next = 0;
        for c in &components {
            for &(v, r) in &c.order {
                new_id[v] = next;
                rotation[v] = r;
                next += 1;
            }
        }
        let map = |p: usize| {
            if p < 4 * nv {
                let (v, s) = (p / 4, p % 4);
                4 * new_id[v] + canon_slot(s, rotation[v])
            } else {
                p
            }
        };
        let mut mate = vec![0usize; nports];
        for p in 0..nports {
            mate[map(p)] = map(self.mate_port(p));
        }
        let form = Tangle {
            vertices: nv,
            arity: self.arity(),
            mate,
            loops: self.loop_count(),
        };
        (CanonicalKey(bytes), form)
    }

    pub fn is_isomorphic(&self, other: &Tangle) -> bool {
        self.canonical_form().0 == other.canonical_form().0
    }
}
