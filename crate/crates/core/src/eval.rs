//! Partition functions `f_R` on diagrams, tangles and quantum tangles.

use num_complex::Complex64;

use crate::algebra::QuantumTangle;
use crate::contraction::{execute_plan, plan_contraction};
use crate::diagram::Tangle;
use crate::error::{Error, Result};
use crate::model::VertexModel;
use crate::par;
use crate::tensor::TangleTensor;

/// `f_R(T) ∈ V^{⊗k}`, indexed by the colors of legs `1..=k`.
///
/// The tangle is brought to canonical form before planning, so isomorphic
/// inputs produce bitwise identical results.
pub fn tangle_tensor(model: &VertexModel, t: &Tangle) -> TangleTensor {
    let (_, form) = t.canonical_form();
    let plan = plan_contraction(&form);
    execute_plan(&plan, &form, model)
}

/// `f_R(G) = Σ_φ Π_v R_{φ(δ(v))}` for a diagram `G`.
pub fn partition_function(model: &VertexModel, g: &Tangle) -> Result<Complex64> {
    if !g.is_diagram() {
        return Err(Error::NotADiagram { arity: g.arity() });
    }
    Ok(tangle_tensor(model, g).as_scalar().expect("arity 0"))
}

/// Evaluates many diagrams, in parallel when enabled; output order follows input.
pub fn partition_functions(model: &VertexModel, diagrams: &[Tangle]) -> Result<Vec<Complex64>> {
    par::map(diagrams, |g| partition_function(model, g))
        .into_iter()
        .collect()
}

/// Linear extension of `f_R` to a quantum tangle whose terms share one arity.
/// The zero quantum tangle evaluates to the scalar 0.
pub fn qt_evaluate(model: &VertexModel, q: &QuantumTangle) -> Result<TangleTensor> {
    let arities = q.arities();
    if arities.len() > 1 {
        return Err(Error::MixedArity(arities.into_iter().collect()));
    }
    let arity = arities.into_iter().next().unwrap_or(0);
    let terms: Vec<_> = q.terms().map(|(_, t)| t).collect();
    let parts = par::map(&terms, |term| tangle_tensor(model, &term.tangle));
    let mut acc = TangleTensor::zeros(arity, model.n());
    for (term, part) in terms.iter().zip(&parts) {
        acc.add_scaled(part, term.coeff);
    }
    Ok(acc)
}
