//! Random move walks and the search for a move that changes `f_R`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::moves::{
    apply_move, enumerate_move_sites, move_pattern, MoveFamily, MoveKind, MoveSite,
};
use crate::algebra::glue;
use crate::diagram::Tangle;
use crate::error::{Error, Result};
use crate::eval::partition_function;
use crate::model::VertexModel;
use crate::par;
use crate::random;

/// Steps taken from one corpus diagram before the walk restarts.
const WALK_LENGTH: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct MoveTrial {
    pub site: MoveSite,
    pub before: Tangle,
    pub after: Tangle,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvaluatedTrial {
    pub trial: MoveTrial,
    pub f_before: Complex64,
    pub f_after: Complex64,
}

impl EvaluatedTrial {
    pub fn delta(&self) -> f64 {
        (self.f_after - self.f_before).norm()
    }

    /// `|Δf| / (1 + |f_before|)`.
    pub fn relative_delta(&self) -> f64 {
        self.delta() / (1.0 + self.f_before.norm())
    }
}

/// A seeded random walk of `count` moves over the corpus.
///
/// Each step picks a move kind uniformly among those with at least one site
/// (insertions are skipped once they would exceed `max_vertices`), then a
/// site uniformly. The walk restarts from a random corpus diagram every few
/// steps.
pub fn random_move_trials(
    corpus: &[Tangle],
    count: usize,
    seed: u64,
    max_vertices: usize,
) -> Result<Vec<MoveTrial>> {
    if corpus
        .iter()
        .all(|g| !g.is_diagram() || g.num_vertices() + g.loop_count() == 0)
    {
        return Err(Error::Usage(
            "the corpus has no diagram a move applies to".into(),
        ));
    }
    let mut rng = random::rng(seed);
    let mut trials = Vec::with_capacity(count);
    let mut current: Option<Tangle> = None;
    let mut since_restart = 0;
    while trials.len() < count {
        if current.is_none() || since_restart == WALK_LENGTH {
            current = Some(corpus[rng.gen_range(0..corpus.len())].clone());
            since_restart = 0;
        }
        let g = current.take().unwrap();
        let mut choices: Vec<Vec<MoveSite>> = MoveKind::ALL
            .iter()
            .filter(|k| g.num_vertices() as isize + k.vertex_delta() <= max_vertices as isize)
            .map(|&k| enumerate_move_sites(&g, k))
            .filter(|s| !s.is_empty())
            .collect();
        if choices.is_empty() {
            since_restart = WALK_LENGTH;
            continue;
        }
        let mut sites = choices.swap_remove(rng.gen_range(0..choices.len()));
        let site = sites.swap_remove(rng.gen_range(0..sites.len()));
        let after = apply_move(&g, &site)?;
        trials.push(MoveTrial {
            site,
            before: g,
            after: after.clone(),
        });
        current = Some(after);
        since_restart += 1;
    }
    Ok(trials)
}

pub fn evaluate_trials(model: &VertexModel, trials: Vec<MoveTrial>) -> Result<Vec<EvaluatedTrial>> {
    let values = par::map(&trials, |t| -> Result<(Complex64, Complex64)> {
        Ok((
            partition_function(model, &t.before)?,
            partition_function(model, &t.after)?,
        ))
    });
    trials
        .into_iter()
        .zip(values)
        .map(|(trial, v)| {
            let (f_before, f_after) = v?;
            Ok(EvaluatedTrial {
                trial,
                f_before,
                f_after,
            })
        })
        .collect()
}

/// Largest `|Δf_R|` over a seeded walk of `count` moves.
pub fn max_move_delta(
    model: &VertexModel,
    corpus: &[Tangle],
    count: usize,
    seed: u64,
    max_vertices: usize,
) -> Result<f64> {
    let trials = evaluate_trials(
        model,
        random_move_trials(corpus, count, seed, max_vertices)?,
    )?;
    Ok(trials.iter().map(EvaluatedTrial::delta).fold(0.0, f64::max))
}

/// Small diagrams on which every move family has sites: a loop, a
/// two-vertex diagram, and closures of both R3 triangles (plain and mirrored)
/// by every perfect matching of their six legs.
pub fn witness_corpus() -> Vec<Tangle> {
    let mut out = vec![
        Tangle::loops(1),
        crate::parse_tangle("x p a b c d\nx q c d a b\n").expect("literal"),
    ];
    let closures = crate::characterization::enumerate_tangles(6, 0).expect("within budget");
    for mirrored in [false, true] {
        let (lhs, rhs) = move_pattern(MoveFamily::R3, mirrored);
        for c in &closures {
            out.push(glue(&lhs, c).expect("equal arity"));
            out.push(glue(&rhs, c).expect("equal arity"));
        }
    }
    out
}

/// Searches the corpus, in order, for a single move with `|Δf_R| > threshold`.
/// Diagrams are examined in parallel; the first hit by corpus position wins.
pub fn find_move_witness(
    model: &VertexModel,
    corpus: &[Tangle],
    threshold: f64,
) -> Result<Option<EvaluatedTrial>> {
    let hits = par::map(corpus, |g| -> Result<Option<EvaluatedTrial>> {
        if !g.is_diagram() {
            return Ok(None);
        }
        let f_before = partition_function(model, g)?;
        for kind in MoveKind::ALL {
            for site in enumerate_move_sites(g, kind) {
                let after = apply_move(g, &site)?;
                let f_after = partition_function(model, &after)?;
                if (f_after - f_before).norm() > threshold {
                    return Ok(Some(EvaluatedTrial {
                        trial: MoveTrial {
                            site,
                            before: g.clone(),
                            after,
                        },
                        f_before,
                        f_after,
                    }));
                }
            }
        }
        Ok(None)
    });
    for hit in hits {
        if let Some(w) = hit? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_is_deterministic_and_bounded() {
        let corpus = random::diagram_corpus(2, 6, 3, 1..=3);
        let a = random_move_trials(&corpus, 30, 9, 6).unwrap();
        let b = random_move_trials(&corpus, 30, 9, 6).unwrap();
        assert_eq!(a.len(), 30);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.after, y.after);
            assert!(x.after.num_vertices() <= 6);
        }
    }

    #[test]
    fn transmission_is_move_invariant() {
        let corpus = random::diagram_corpus(4, 8, 4, 1..=3);
        for n in 1..4 {
            let d = max_move_delta(&VertexModel::transmission(n), &corpus, 60, 1, 6).unwrap();
            assert!(d <= 1e-10, "n = {n}: {d}");
        }
    }

    #[test]
    fn generic_model_has_a_witness() {
        let m = random::random_model(&mut random::rng(5), 2, true);
        let w = find_move_witness(&m, &witness_corpus(), 1e-6).unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn empty_corpus_is_a_usage_error() {
        assert!(random_move_trials(&[Tangle::empty()], 3, 0, 4).is_err());
    }
}
