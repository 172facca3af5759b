//! The line-oriented `.vld` diagram format.
//!
//! ```text
//! # comment
//! loops <m>
//! x <vertex-id> <e0> <e1> <e2> <e3>
//! leg <label> <edge-id>
//! ```
//!
//! Edge ids at a vertex are listed for slots 0..3 in clockwise order, slots 0
//! and 2 being over-going. Each edge id occurs exactly twice over all slot and
//! leg positions; leg labels must be exactly `1..=k`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{Endpoint, Tangle};
use crate::error::{Error, Result};

pub fn parse_tangle(text: &str) -> Result<Tangle> {
    let mut vertex_ids: HashMap<String, usize> = HashMap::new();
    // edge id -> (first endpoint, line), second endpoint
    let mut edges: HashMap<String, (Vec<(Endpoint, usize)>, usize)> = HashMap::new();
    let mut edge_order: Vec<String> = Vec::new();
    let mut legs: HashMap<usize, usize> = HashMap::new();
    let mut loops: Option<usize> = None;
    let mut vertices = 0;
    let mut last_leg_line = 0;

    let mut attach = |edge: &str, e: Endpoint, line: usize| -> Result<()> {
        let entry = edges.entry(edge.to_string()).or_insert_with(|| {
            edge_order.push(edge.to_string());
            (Vec::new(), line)
        });
        if entry.0.len() == 2 {
            return Err(Error::parse(
                line,
                format!("edge `{edge}` used more than twice"),
            ));
        }
        entry.0.push((e, line));
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "loops" => {
                if fields.len() != 2 {
                    return Err(Error::parse(line, "expected `loops <m>`"));
                }
                if loops.is_some() {
                    return Err(Error::parse(line, "duplicate `loops` line"));
                }
                let m = fields[1]
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line, format!("bad loop count `{}`", fields[1])))?;
                loops = Some(m);
            }
            "x" => {
                if fields.len() != 6 {
                    return Err(Error::parse(
                        line,
                        format!(
                            "a vertex needs an id and exactly four slot edges, got {} fields",
                            fields.len() - 1
                        ),
                    ));
                }
                let id = fields[1].to_string();
                if vertex_ids.contains_key(&id) {
                    return Err(Error::parse(line, format!("duplicate vertex `{id}`")));
                }
                vertex_ids.insert(id, vertices);
                for (slot, edge) in fields[2..].iter().enumerate() {
                    attach(
                        edge,
                        Endpoint::Slot {
                            vertex: vertices,
                            slot: slot as u8,
                        },
                        line,
                    )?;
                }
                vertices += 1;
            }
            "leg" => {
                if fields.len() != 3 {
                    return Err(Error::parse(line, "expected `leg <label> <edge-id>`"));
                }
                let label = fields[1]
                    .parse::<usize>()
                    .ok()
                    .filter(|&l| l >= 1)
                    .ok_or_else(|| {
                        Error::parse(
                            line,
                            format!("leg label `{}` is not a positive integer", fields[1]),
                        )
                    })?;
                if legs.insert(label, line).is_some() {
                    return Err(Error::parse(line, format!("duplicate leg label {label}")));
                }
                attach(fields[2], Endpoint::Leg(label), line)?;
                last_leg_line = last_leg_line.max(line);
            }
            other => {
                return Err(Error::parse(line, format!("unknown directive `{other}`")));
            }
        }
    }

    let arity = legs.len();
    if let Some(missing) = (1..=arity).find(|l| !legs.contains_key(l)) {
        let max = legs.keys().max().copied().unwrap_or(0);
        return Err(Error::parse(
            legs[&max],
            format!("leg labels must be 1..{arity}; label {missing} is missing"),
        ));
    }
    if !arity.is_multiple_of(2) {
        return Err(Error::parse(
            last_leg_line,
            format!("odd number of legs ({arity})"),
        ));
    }

    let mut pairs = Vec::with_capacity(edge_order.len());
    for name in &edge_order {
        let (ends, first_line) = &edges[name];
        if ends.len() != 2 {
            return Err(Error::parse(
                *first_line,
                format!("edge `{name}` has only one endpoint"),
            ));
        }
        pairs.push((ends[0].0, ends[1].0));
    }
    Tangle::from_edges(vertices, arity, &pairs, loops.unwrap_or(0))
}

pub fn read_tangle(path: impl AsRef<Path>) -> Result<Tangle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_tangle(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::ParseFile {
            path: path.display().to_string(),
            line,
            message,
        },
        other => other,
    })
}

impl Tangle {
    /// Serializes to `.vld` with vertices `v1..` and edges `e1..`.
    pub fn to_vld(&self) -> String {
        let index = self.edge_index();
        let mut out = String::new();
        if self.loop_count() > 0 {
            let _ = writeln!(out, "loops {}", self.loop_count());
        }
        for v in 0..self.num_vertices() {
            let _ = write!(out, "x v{}", v + 1);
            for s in 0..4 {
                let _ = write!(out, " e{}", index[4 * v + s] + 1);
            }
            out.push('\n');
        }
        for label in 1..=self.arity() {
            let _ = writeln!(out, "leg {label} e{}", index[self.leg_port(label)] + 1);
        }
        out
    }
}
