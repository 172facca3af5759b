//! Reidemeister moves as local rewrites of abstract diagrams.
//!
//! Each family has a pattern pair `(lhs, rhs)` of tangles with equal arity.
//! Leg labels are chosen so that `f_R(lhs) - f_R(rhs)`, flattened with leg 1
//! most significant, is exactly the residual matrix of the matching
//! condition (no leg permutation is needed):
//!
//! | family | lhs | rhs | `f_R(lhs) - f_R(rhs)` |
//! |--------|-----|-----|------------------------|
//! | R1 | kink `(1, k, k, 2)` | edge `1-2` | `C(R) - I` |
//! | R2 | `(1, 2, b, d)`, `(b, 4, 3, d)` | edges `1-3`, `2-4` | `R D(R) - I ⊗ I` |
//! | R3 | `E12 E13 E23` triangle | `E23 E13 E12` triangle | YBE difference |
//!
//! For R3 legs `1, 2, 3` are the row indices and `4, 5, 6` the column
//! indices of the three factors. Every family also has a mirrored variant,
//! obtained by reversing the cyclic order at each vertex.
//!
//! A move is applied by cutting the matched pattern out of the diagram,
//! which leaves a context tangle whose legs sit where the pattern's legs
//! were, and gluing the replacement into it. Insertions (R1+, R2+) cut
//! chosen edges (or a vertexless loop, for R1+) instead.

use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::{glue, QuantumTangle};
use crate::diagram::{parse_tangle, Endpoint, Tangle};
use crate::error::{Error, Result};

const R1_LHS: &str = "x u e1 k k e2\nleg 1 e1\nleg 2 e2\n";
const R1_RHS: &str = "leg 1 e\nleg 2 e\n";
const R2_LHS: &str = "x u l1 l2 b d\nx w b l4 l3 d\nleg 1 l1\nleg 2 l2\nleg 3 l3\nleg 4 l4\n";
const R2_RHS: &str = "leg 1 a\nleg 3 a\nleg 2 b\nleg 4 b\n";
const R3_LHS: &str = "\
x X l1 l2 a b
x Y a l3 l4 c
x Z b c l5 l6
leg 1 l1
leg 2 l2
leg 3 l3
leg 4 l4
leg 5 l5
leg 6 l6
";
const R3_RHS: &str = "\
x P l2 l3 p q
x Q l1 q t l6
x S t p l4 l5
leg 1 l1
leg 2 l2
leg 3 l3
leg 4 l4
leg 5 l5
leg 6 l6
";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveFamily {
    R1,
    R2,
    R3,
}

impl MoveFamily {
    pub const ALL: [MoveFamily; 3] = [MoveFamily::R1, MoveFamily::R2, MoveFamily::R3];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    R1Plus,
    R1Minus,
    R2Plus,
    R2Minus,
    R3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::R1Plus,
        MoveKind::R1Minus,
        MoveKind::R2Plus,
        MoveKind::R2Minus,
        MoveKind::R3,
    ];

    pub fn family(self) -> MoveFamily {
        match self {
            MoveKind::R1Plus | MoveKind::R1Minus => MoveFamily::R1,
            MoveKind::R2Plus | MoveKind::R2Minus => MoveFamily::R2,
            MoveKind::R3 => MoveFamily::R3,
        }
    }

    /// Change in vertex count.
    pub fn vertex_delta(self) -> isize {
        match self {
            MoveKind::R1Plus => 1,
            MoveKind::R1Minus => -1,
            MoveKind::R2Plus => 2,
            MoveKind::R2Minus => -2,
            MoveKind::R3 => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Plus => "R1+",
            MoveKind::R1Minus => "R1-",
            MoveKind::R2Plus => "R2+",
            MoveKind::R2Minus => "R2-",
            MoveKind::R3 => "R3",
        }
    }
}

/// One strand cut open by an insertion move.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Strand {
    /// The edge between two vertex slots; the first end is attached to the
    /// lower-numbered pattern leg.
    Edge(Endpoint, Endpoint),
    /// A vertexless loop.
    Loop,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Anchor {
    /// Image of each pattern vertex with the rotation (0 or 2) applied to it.
    Vertices(Vec<(usize, u8)>),
    /// Strands to cut, one per replacement edge.
    Strands(Vec<Strand>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MoveSite {
    pub kind: MoveKind,
    pub mirrored: bool,
    /// For R3: replace the right-hand triangle by the left-hand one.
    pub reversed: bool,
    pub anchor: Anchor,
}

struct Pattern {
    lhs: Tangle,
    rhs: Tangle,
}

fn patterns() -> &'static [[Pattern; 2]; 3] {
    static PATTERNS: OnceLock<[[Pattern; 2]; 3]> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        let build = |lhs: &str, rhs: &str| {
            let lhs = parse_tangle(lhs).expect("built-in pattern");
            let rhs = parse_tangle(rhs).expect("built-in pattern");
            [
                Pattern {
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                },
                Pattern {
                    lhs: lhs.mirror(),
                    rhs: rhs.mirror(),
                },
            ]
        };
        [
            build(R1_LHS, R1_RHS),
            build(R2_LHS, R2_RHS),
            build(R3_LHS, R3_RHS),
        ]
    })
}

fn pattern(family: MoveFamily, mirrored: bool) -> &'static Pattern {
    &patterns()[family.index()][mirrored as usize]
}

/// The two sides of a move as tangles, mirrored or not.
pub fn move_pattern(family: MoveFamily, mirrored: bool) -> (Tangle, Tangle) {
    let p = pattern(family, mirrored);
    (p.lhs.clone(), p.rhs.clone())
}

/// `M_i = lhs - rhs`.
pub fn move_tangle(family: MoveFamily) -> QuantumTangle {
    let p = pattern(family, false);
    &QuantumTangle::from_tangle(&p.lhs) - &QuantumTangle::from_tangle(&p.rhs)
}

/// Source and replacement tangles of a site.
fn sides(site: &MoveSite) -> (&'static Tangle, &'static Tangle) {
    let p = pattern(site.kind.family(), site.mirrored);
    match site.kind {
        MoveKind::R1Plus | MoveKind::R2Plus => (&p.rhs, &p.lhs),
        MoveKind::R1Minus | MoveKind::R2Minus => (&p.lhs, &p.rhs),
        MoveKind::R3 if site.reversed => (&p.rhs, &p.lhs),
        MoveKind::R3 => (&p.lhs, &p.rhs),
    }
}

/// Leg pairs joined by the vertex-free side of an R1/R2 pattern.
fn strand_legs(rhs: &Tangle) -> Vec<(usize, usize)> {
    rhs.edges()
        .into_iter()
        .map(|(a, b)| match (a, b) {
            (Endpoint::Leg(x), Endpoint::Leg(y)) => (x.min(y), x.max(y)),
            _ => unreachable!("vertex-free pattern"),
        })
        .collect()
}

/// All embeddings of the vertex pattern `p` into `g`, as (vertex, rotation).
fn embeddings(g: &Tangle, p: &Tangle) -> Vec<Vec<(usize, u8)>> {
    let internal: Vec<(usize, usize)> = (0..4 * p.num_vertices())
        .filter_map(|port| {
            let m = p.mate_port(port);
            (m < 4 * p.num_vertices() && port < m).then_some((port, m))
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(p.num_vertices());
    extend(g, p, &internal, &mut chosen, &mut out);
    out
}

fn image_port(chosen: &[(usize, u8)], port: usize) -> usize {
    let (gv, rot) = chosen[port / 4];
    4 * gv + (port % 4 + rot as usize) % 4
}

fn extend(
    g: &Tangle,
    p: &Tangle,
    internal: &[(usize, usize)],
    chosen: &mut Vec<(usize, u8)>,
    out: &mut Vec<Vec<(usize, u8)>>,
) {
    let depth = chosen.len();
    if depth == p.num_vertices() {
        out.push(chosen.clone());
        return;
    }
    for gv in 0..g.num_vertices() {
        if chosen.iter().any(|&(w, _)| w == gv) {
            continue;
        }
        for rot in [0u8, 2] {
            chosen.push((gv, rot));
            let ok = internal.iter().all(|&(a, b)| {
                let (va, vb) = (a / 4, b / 4);
                if va.max(vb) != depth {
                    return true;
                }
                g.mate_port(image_port(chosen, a)) == image_port(chosen, b)
            });
            if ok {
                extend(g, p, internal, chosen, out);
            }
            chosen.pop();
        }
    }
}

/// Every site of `kind` in the diagram `g`; non-diagrams have none.
///
/// R2+ sites are ordered pairs of distinct edges, with the second edge taken
/// in both directions so that both relative strand orientations occur.
pub fn enumerate_move_sites(g: &Tangle, kind: MoveKind) -> Vec<MoveSite> {
    if !g.is_diagram() {
        return Vec::new();
    }
    let mut sites = Vec::new();
    for mirrored in [false, true] {
        match kind {
            MoveKind::R1Minus | MoveKind::R2Minus => {
                let src = &pattern(kind.family(), mirrored).lhs;
                for emb in embeddings(g, src) {
                    sites.push(MoveSite {
                        kind,
                        mirrored,
                        reversed: false,
                        anchor: Anchor::Vertices(emb),
                    });
                }
            }
            MoveKind::R3 => {
                for reversed in [false, true] {
                    let p = pattern(MoveFamily::R3, mirrored);
                    let src = if reversed { &p.rhs } else { &p.lhs };
                    for emb in embeddings(g, src) {
                        sites.push(MoveSite {
                            kind,
                            mirrored,
                            reversed,
                            anchor: Anchor::Vertices(emb),
                        });
                    }
                }
            }
            MoveKind::R1Plus => {
                let mut push = |strand| {
                    sites.push(MoveSite {
                        kind,
                        mirrored,
                        reversed: false,
                        anchor: Anchor::Strands(vec![strand]),
                    })
                };
                for (a, b) in g.edges() {
                    push(Strand::Edge(a, b));
                    push(Strand::Edge(b, a));
                }
                if g.loop_count() > 0 {
                    push(Strand::Loop);
                }
            }
            MoveKind::R2Plus => {
                let edges = g.edges();
                for (i, &(a, b)) in edges.iter().enumerate() {
                    for (j, &(c, d)) in edges.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        for second in [Strand::Edge(c, d), Strand::Edge(d, c)] {
                            sites.push(MoveSite {
                                kind,
                                mirrored,
                                reversed: false,
                                anchor: Anchor::Strands(vec![Strand::Edge(a, b), second]),
                            });
                        }
                    }
                }
            }
        }
    }
    sites
}

fn stale(site: &MoveSite, why: impl std::fmt::Display) -> Error {
    Error::StaleSite(format!(
        "{} site {:?}: {why}",
        site.kind.name(),
        site.anchor
    ))
}

/// Applies a move; see [`apply_move_tracked`].
pub fn apply_move(g: &Tangle, site: &MoveSite) -> Result<Tangle> {
    apply_move_tracked(g, site).map(|(t, _)| t)
}

/// Applies a move and returns the new diagram together with the site of the
/// inverse move in it, when that inverse is expressible as a site.
///
/// Vertices created by the move come first in the result (with rotation 0)
/// and the untouched vertices follow in their original order.
pub fn apply_move_tracked(g: &Tangle, site: &MoveSite) -> Result<(Tangle, Option<MoveSite>)> {
    if !g.is_diagram() {
        return Err(Error::NotADiagram { arity: g.arity() });
    }
    let (source, replacement) = sides(site);
    let context = match &site.anchor {
        Anchor::Vertices(emb) => excise(g, source, emb, site)?,
        Anchor::Strands(strands) => cut(g, source, strands, site)?,
    };
    let result = glue(replacement, &context)?;
    let inverse = inverse_site(site, replacement, &context);
    Ok((result, inverse))
}

/// Removes the image of the vertex pattern `p`, leaving a tangle whose leg
/// `i` is attached where leg `i` of `p` was.
fn excise(g: &Tangle, p: &Tangle, emb: &[(usize, u8)], site: &MoveSite) -> Result<Tangle> {
    if emb.len() != p.num_vertices() {
        return Err(stale(site, "wrong number of vertices"));
    }
    let nv = g.num_vertices();
    let mut owner = vec![usize::MAX; nv];
    for (pv, &(gv, rot)) in emb.iter().enumerate() {
        if gv >= nv || rot % 2 != 0 || rot > 2 {
            return Err(stale(site, "vertex or rotation out of range"));
        }
        if owner[gv] != usize::MAX {
            return Err(stale(site, "vertex used twice"));
        }
        owner[gv] = pv;
    }
    for port in 0..4 * p.num_vertices() {
        let m = p.mate_port(port);
        if m < 4 * p.num_vertices() && g.mate_port(image_port(emb, port)) != image_port(emb, m) {
            return Err(stale(site, "pattern edge missing"));
        }
    }

    let mut new_index = vec![usize::MAX; nv];
    let mut kept = 0;
    for v in 0..nv {
        if owner[v] == usize::MAX {
            new_index[v] = kept;
            kept += 1;
        }
    }
    let k = p.arity();
    let leg_port = |label: usize| 4 * kept + label - 1;
    // context port for a port of g that is not inside the pattern interior
    let translate = |gp: usize| -> usize {
        let v = gp / 4;
        if owner[v] == usize::MAX {
            return 4 * new_index[v] + gp % 4;
        }
        let (_, rot) = emb[owner[v]];
        let pport = 4 * owner[v] + (gp % 4 + 4 - rot as usize) % 4;
        match p.endpoint(p.mate_port(pport)) {
            Endpoint::Leg(label) => leg_port(label),
            Endpoint::Slot { .. } => unreachable!("interior ports are never translated"),
        }
    };

    let mut mate = vec![usize::MAX; 4 * kept + k];
    for v in 0..nv {
        if owner[v] != usize::MAX {
            continue;
        }
        for s in 0..4 {
            let gp = 4 * v + s;
            mate[translate(gp)] = translate(g.mate_port(gp));
        }
    }
    for label in 1..=k {
        let Endpoint::Slot { vertex, slot } = p.mate_of(Endpoint::Leg(label)) else {
            unreachable!("pattern legs attach to vertices");
        };
        let gp = image_port(emb, 4 * vertex + slot as usize);
        mate[leg_port(label)] = translate(g.mate_port(gp));
    }
    Tangle::from_mates(kept, k, mate, g.loop_count())
}

/// Cuts the given strands open; strand `i` becomes the leg pair of the
/// `i`-th edge of the vertex-free side `rhs`.
fn cut(g: &Tangle, rhs: &Tangle, strands: &[Strand], site: &MoveSite) -> Result<Tangle> {
    let legs = strand_legs(rhs);
    if strands.len() != legs.len() {
        return Err(stale(site, "wrong number of strands"));
    }
    let nv = g.num_vertices();
    let k = rhs.arity();
    let mut mate: Vec<usize> = (0..4 * nv).map(|p| g.mate_port(p)).collect();
    mate.resize(4 * nv + k, usize::MAX);
    let mut loops = g.loop_count();
    let slot_port = |e: Endpoint| match e {
        Endpoint::Slot { vertex, slot } if vertex < nv && slot < 4 => {
            Some(4 * vertex + slot as usize)
        }
        _ => None,
    };
    for (strand, &(a, b)) in strands.iter().zip(&legs) {
        let (la, lb) = (4 * nv + a - 1, 4 * nv + b - 1);
        match *strand {
            Strand::Edge(x, y) => {
                let (Some(px), Some(py)) = (slot_port(x), slot_port(y)) else {
                    return Err(stale(site, "endpoint out of range"));
                };
                if mate[px] != py {
                    return Err(stale(site, "no such edge"));
                }
                mate[px] = la;
                mate[la] = px;
                mate[py] = lb;
                mate[lb] = py;
            }
            Strand::Loop => {
                if loops == 0 {
                    return Err(stale(site, "no vertexless loop left"));
                }
                loops -= 1;
                mate[la] = lb;
                mate[lb] = la;
            }
        }
    }
    Tangle::from_mates(nv, k, mate, loops)
}

fn inverse_site(site: &MoveSite, replacement: &Tangle, context: &Tangle) -> Option<MoveSite> {
    let created = |kind, reversed| MoveSite {
        kind,
        mirrored: site.mirrored,
        reversed,
        anchor: Anchor::Vertices((0..replacement.num_vertices()).map(|v| (v, 0)).collect()),
    };
    match site.kind {
        MoveKind::R1Plus => Some(created(MoveKind::R1Minus, false)),
        MoveKind::R2Plus => Some(created(MoveKind::R2Minus, false)),
        MoveKind::R3 => Some(created(MoveKind::R3, !site.reversed)),
        MoveKind::R1Minus | MoveKind::R2Minus => {
            // the replacement is vertex-free, so context vertices keep their indices
            let mut strands = Vec::new();
            for (a, b) in strand_legs(replacement) {
                let x = context.mate_of(Endpoint::Leg(a));
                let y = context.mate_of(Endpoint::Leg(b));
                match (x, y) {
                    (Endpoint::Slot { .. }, Endpoint::Slot { .. }) => {
                        strands.push(Strand::Edge(x, y))
                    }
                    (Endpoint::Leg(c), _) if c == b && site.kind == MoveKind::R1Minus => {
                        strands.push(Strand::Loop)
                    }
                    _ => return None,
                }
            }
            Some(MoveSite {
                kind: if site.kind == MoveKind::R1Minus {
                    MoveKind::R1Plus
                } else {
                    MoveKind::R2Plus
                },
                mirrored: site.mirrored,
                reversed: false,
                anchor: Anchor::Strands(strands),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kink() -> Tangle {
        parse_tangle("x v a b b a\n").unwrap()
    }

    #[test]
    fn term_counts() {
        assert_eq!(move_tangle(MoveFamily::R1).len(), 2);
        assert_eq!(move_tangle(MoveFamily::R2).len(), 2);
        assert_eq!(move_tangle(MoveFamily::R3).len(), 2);
    }

    #[test]
    fn no_removal_sites_on_a_loop() {
        assert!(enumerate_move_sites(&Tangle::loops(1), MoveKind::R1Minus).is_empty());
        assert_eq!(
            enumerate_move_sites(&Tangle::loops(1), MoveKind::R1Plus).len(),
            2
        );
    }

    #[test]
    fn kink_removal_sites_sit_on_the_kink() {
        let sites = enumerate_move_sites(&kink(), MoveKind::R1Minus);
        assert!(!sites.is_empty());
        for s in &sites {
            assert_eq!(s.anchor, Anchor::Vertices(vec![(0, s.anchor_rotation())]));
        }
    }

    impl MoveSite {
        fn anchor_rotation(&self) -> u8 {
            match &self.anchor {
                Anchor::Vertices(v) => v[0].1,
                Anchor::Strands(_) => unreachable!(),
            }
        }
    }

    #[test]
    fn r1_on_a_loop_and_back() {
        let o = Tangle::loops(1);
        for site in enumerate_move_sites(&o, MoveKind::R1Plus) {
            let (k, inv) = apply_move_tracked(&o, &site).unwrap();
            assert_eq!(k.num_vertices(), 1);
            assert_eq!(k.loop_count(), 0);
            assert_eq!(k.knot_components(), 1);
            let back = apply_move(&k, &inv.unwrap()).unwrap();
            assert!(back.is_isomorphic(&o));
        }
    }

    #[test]
    fn every_move_on_a_small_diagram_inverts() {
        let g = parse_tangle("x p a b c d\nx q c d a b\n").unwrap();
        for kind in MoveKind::ALL {
            for site in enumerate_move_sites(&g, kind) {
                let (h, inv) = apply_move_tracked(&g, &site).unwrap();
                let delta = h.num_vertices() as isize - g.num_vertices() as isize;
                assert_eq!(delta, kind.vertex_delta());
                if let Some(inv) = inv {
                    let back = apply_move(&h, &inv).unwrap();
                    assert_eq!(back.canonical_form().0, g.canonical_form().0, "{site:?}");
                }
            }
        }
    }

    #[test]
    fn stale_sites_are_rejected() {
        let site = MoveSite {
            kind: MoveKind::R1Minus,
            mirrored: false,
            reversed: false,
            anchor: Anchor::Vertices(vec![(0, 0)]),
        };
        let g = parse_tangle("x p a b c d\nx q c d a b\n").unwrap();
        assert!(matches!(apply_move(&g, &site), Err(Error::StaleSite(_))));
        let site = MoveSite {
            anchor: Anchor::Strands(vec![Strand::Loop]),
            kind: MoveKind::R1Plus,
            ..site
        };
        assert!(matches!(apply_move(&g, &site), Err(Error::StaleSite(_))));
    }

    #[test]
    fn r3_sites_on_a_closed_triangle() {
        let (lhs, _) = move_pattern(MoveFamily::R3, false);
        let closure =
            parse_tangle("leg 1 a\nleg 4 a\nleg 2 b\nleg 5 b\nleg 3 c\nleg 6 c\n").unwrap();
        let g = glue(&lhs, &closure).unwrap();
        let sites = enumerate_move_sites(&g, MoveKind::R3);
        assert!(sites.iter().any(|s| !s.mirrored && !s.reversed));
        for s in &sites {
            let (h, inv) = apply_move_tracked(&g, s).unwrap();
            assert_eq!(h.num_vertices(), 3);
            let back = apply_move(&h, &inv.unwrap()).unwrap();
            assert_eq!(back.canonical_form().0, g.canonical_form().0);
        }
    }
}
