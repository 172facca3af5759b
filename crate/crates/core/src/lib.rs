//! Vertex-model partition functions of virtual link diagrams and tangles.

pub mod algebra;
pub mod characterization;
pub mod contraction;
pub mod diagram;
pub mod error;
pub mod eval;
pub mod model;
mod par;
pub mod random;
pub mod reidemeister;
pub mod tensor;

pub use algebra::{det_tangle, glue, tangle_derivative, QuantumTangle};
pub use characterization::{
    enumerate_tangles, fd_check, gram_psd, kernel_residual, nondegeneracy_probe,
};
pub use diagram::{canonical_key, parse_tangle, CanonicalKey, Endpoint, Tangle};
pub use error::{Error, Result};
pub use eval::{partition_function, qt_evaluate, tangle_tensor};
pub use model::VertexModel;
pub use reidemeister::{
    apply_move, check_algebraic, enumerate_move_sites, move_tangle, ConditionReport, MoveKind,
    MoveSite,
};
pub use tensor::{pair, TangleTensor};
