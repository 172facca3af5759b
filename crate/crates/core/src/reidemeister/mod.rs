//! Reidemeister invariance: the algebraic conditions on `R` and the moves
//! themselves as diagram rewrites.

mod battery;
mod conditions;
mod moves;

pub use battery::{
    evaluate_trials, find_move_witness, max_move_delta, random_move_trials, witness_corpus,
    EvaluatedTrial, MoveTrial,
};
pub use conditions::{
    check_algebraic, d_operator, kink_matrix, mirror_kink_matrix, operator, yang_baxter_sides,
    ConditionReport,
};
pub use moves::{
    apply_move, apply_move_tracked, enumerate_move_sites, move_pattern, move_tangle, Anchor,
    MoveFamily, MoveKind, MoveSite, Strand,
};
