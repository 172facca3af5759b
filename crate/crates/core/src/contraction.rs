//! Contraction planning and execution for tangle tensors, plus the naive
//! coloring sum used as a reference.
//!
//! Every vertex contributes a copy of `R` whose indices are the edge ids at
//! its slots. Self-loops are traced first, then the planner greedily merges
//! the pair of tensors whose result has the fewest open indices (ties go to
//! the lexicographically smallest pair of tensor ids). Tensors that share no
//! index are merged last as outer products.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::diagram::Tangle;
use crate::model::VertexModel;
use crate::tensor::TangleTensor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanStep {
    /// Sums the diagonal over `labels`, each of which occurs twice in `tensor`.
    Trace { tensor: usize, labels: Vec<usize> },
    /// Contracts `left` with `right` over `contracted` into the new tensor `result`.
    Merge {
        left: usize,
        right: usize,
        contracted: Vec<usize>,
        result: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ContractionPlan {
    /// Edge labels of each vertex tensor, slots 0..3.
    inputs: Vec<[usize; 4]>,
    steps: Vec<PlanStep>,
    /// Tensor holding the result and its labels (open edges), if any vertex exists.
    output: Option<(usize, Vec<usize>)>,
    peak_arity: usize,
}

impl ContractionPlan {
    pub fn steps(&self) -> &[PlanStep] {
        &self.steps
    }

    /// Largest number of indices carried by any tensor during execution.
    pub fn peak_arity(&self) -> usize {
        self.peak_arity
    }

    /// Largest intermediate size in entries for `n` states.
    pub fn peak_size(&self, n: usize) -> usize {
        n.pow(self.peak_arity as u32)
    }
}

fn remove_pairs(labels: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut once = Vec::new();
    let mut twice = Vec::new();
    for &l in labels {
        match labels.iter().filter(|&&x| x == l).count() {
            1 => once.push(l),
            _ if !twice.contains(&l) => twice.push(l),
            _ => {}
        }
    }
    (once, twice)
}

pub fn plan_contraction(t: &Tangle) -> ContractionPlan {
    let edge = t.edge_index();
    let nv = t.num_vertices();
    let inputs: Vec<[usize; 4]> = (0..nv)
        .map(|v| {
            [
                edge[4 * v],
                edge[4 * v + 1],
                edge[4 * v + 2],
                edge[4 * v + 3],
            ]
        })
        .collect();

    let mut steps = Vec::new();
    let mut active: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut peak = 0;
    for (v, labels) in inputs.iter().enumerate() {
        peak = peak.max(4);
        let (once, twice) = remove_pairs(labels);
        if !twice.is_empty() {
            steps.push(PlanStep::Trace {
                tensor: v,
                labels: twice,
            });
        }
        active.insert(v, once);
    }

    let mut next_id = nv;
    while active.len() > 1 {
        let ids: Vec<usize> = active.keys().copied().collect();
        let mut best: Option<(usize, usize, usize)> = None;
        for (x, &a) in ids.iter().enumerate() {
            for &b in &ids[x + 1..] {
                let (la, lb) = (&active[&a], &active[&b]);
                let shared = la.iter().filter(|l| lb.contains(l)).count();
                if shared == 0 {
                    continue;
                }
                let arity = la.len() + lb.len() - 2 * shared;
                if best.is_none_or(|(ar, _, _)| arity < ar) {
                    best = Some((arity, a, b));
                }
            }
        }
        let (a, b) = match best {
            Some((_, a, b)) => (a, b),
            None => (ids[0], ids[1]),
        };
        let la = active.remove(&a).expect("active");
        let lb = active.remove(&b).expect("active");
        let contracted: Vec<usize> = la.iter().copied().filter(|l| lb.contains(l)).collect();
        let mut result: Vec<usize> = la
            .iter()
            .copied()
            .filter(|l| !contracted.contains(l))
            .collect();
        result.extend(lb.iter().copied().filter(|l| !contracted.contains(l)));
        peak = peak.max(result.len());
        steps.push(PlanStep::Merge {
            left: a,
            right: b,
            contracted,
            result: next_id,
        });
        active.insert(next_id, result);
        next_id += 1;
    }

    ContractionPlan {
        inputs,
        steps,
        output: active.into_iter().next(),
        peak_arity: peak,
    }
}

/// Tensor over labeled indices, row-major in `labels` order.
#[derive(Clone, Debug)]
struct LabeledTensor {
    labels: Vec<usize>,
    data: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl LabeledTensor {
    fn trace(&self, n: usize) -> LabeledTensor {
        let (once, _) = remove_pairs(&self.labels);
        let rank = self.labels.len();
        let out_pos: Vec<usize> = once
            .iter()
            .map(|l| self.labels.iter().position(|x| x == l).expect("label"))
            .collect();
        let mut out = vec![zero(); n.pow(once.len() as u32)];
        let mut digits = vec![0usize; rank];
        for value in &self.data {
            let consistent = (0..rank).all(|p| {
                let first = self
                    .labels
                    .iter()
                    .position(|&x| x == self.labels[p])
                    .expect("label");
                digits[first] == digits[p]
            });
            if consistent {
                let o = out_pos.iter().fold(0, |acc, &p| acc * n + digits[p]);
                out[o] += value;
            }
            for d in (0..rank).rev() {
                digits[d] += 1;
                if digits[d] < n {
                    break;
                }
                digits[d] = 0;
            }
        }
        LabeledTensor {
            labels: once,
            data: out,
        }
    }

    /// Reorders axes so that axis `i` of the result is axis `order[i]` of `self`.
    fn permute(&self, order: &[usize], n: usize) -> Vec<Complex64> {
        let rank = self.labels.len();
        if order.iter().enumerate().all(|(i, &p)| i == p) {
            return self.data.clone();
        }
        let mut strides = vec![1usize; rank];
        for d in (0..rank.saturating_sub(1)).rev() {
            strides[d] = strides[d + 1] * n;
        }
        let src_strides: Vec<usize> = order.iter().map(|&p| strides[p]).collect();
        let mut out = Vec::with_capacity(self.data.len());
        let mut digits = vec![0usize; rank];
        let mut offset = 0usize;
        for _ in 0..self.data.len() {
            out.push(self.data[offset]);
            for d in (0..rank).rev() {
                digits[d] += 1;
                offset += src_strides[d];
                if digits[d] < n {
                    break;
                }
                offset -= src_strides[d] * n;
                digits[d] = 0;
            }
        }
        out
    }

    fn contract(&self, other: &LabeledTensor, shared: &[usize], n: usize) -> LabeledTensor {
        let pos =
            |t: &LabeledTensor, l: usize| t.labels.iter().position(|&x| x == l).expect("label");
        let a_free: Vec<usize> = self
            .labels
            .iter()
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();
        let b_free: Vec<usize> = other
            .labels
            .iter()
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();

        let a_order: Vec<usize> = a_free.iter().chain(shared).map(|&l| pos(self, l)).collect();
        let b_order: Vec<usize> = shared
            .iter()
            .chain(&b_free)
            .map(|&l| pos(other, l))
            .collect();
        let a = self.permute(&a_order, n);
        let b = other.permute(&b_order, n);

        let rows = n.pow(a_free.len() as u32);
        let inner = n.pow(shared.len() as u32);
        let cols = n.pow(b_free.len() as u32);
        let mut out = vec![zero(); rows * cols];
        for r in 0..rows {
            let arow = &a[r * inner..(r + 1) * inner];
            let orow = &mut out[r * cols..(r + 1) * cols];
            for (s, &av) in arow.iter().enumerate() {
                if av == zero() {
                    continue;
                }
                let brow = &b[s * cols..(s + 1) * cols];
                for (o, &bv) in orow.iter_mut().zip(brow) {
                    *o += av * bv;
                }
            }
        }
        let mut labels = a_free;
        labels.extend(b_free);
        LabeledTensor { labels, data: out }
    }
}

/// Runs `plan` (made by [`plan_contraction`] for `t`) against `model`.
pub fn execute_plan(plan: &ContractionPlan, t: &Tangle, model: &VertexModel) -> TangleTensor {
    let n = model.n();
    let mut tensors: BTreeMap<usize, LabeledTensor> = plan
        .inputs
        .iter()
        .enumerate()
        .map(|(v, labels)| {
            (
                v,
                LabeledTensor {
                    labels: labels.to_vec(),
                    data: model.entries().to_vec(),
                },
            )
        })
        .collect();
    for step in &plan.steps {
        match step {
            PlanStep::Trace { tensor, .. } => {
                let traced = tensors[tensor].trace(n);
                tensors.insert(*tensor, traced);
            }
            PlanStep::Merge {
                left,
                right,
                contracted,
                result,
            } => {
                let a = tensors.remove(left).expect("plan order");
                let b = tensors.remove(right).expect("plan order");
                tensors.insert(*result, a.contract(&b, contracted, n));
            }
        }
    }
    let core = match &plan.output {
        Some((id, _)) => tensors.remove(id).expect("output tensor"),
        None => LabeledTensor {
            labels: Vec::new(),
            data: vec![Complex64::new(1.0, 0.0)],
        },
    };
    assemble_output(t, n, &core)
}

/// Spreads a tensor over open edges into leg order, adding deltas for
/// leg-to-leg edges and `n` per vertexless loop.
fn assemble_output(t: &Tangle, n: usize, core: &LabeledTensor) -> TangleTensor {
    let k = t.arity();
    let edge = t.edge_index();
    let loop_factor = Complex64::new((n as f64).powi(t.loop_count() as i32), 0.0);
    // for each core axis, the leg carrying that edge
    let axis_leg: Vec<usize> = core
        .labels
        .iter()
        .map(|&l| {
            (1..=k)
                .find(|&leg| edge[t.leg_port(leg)] == l)
                .expect("open edge ends at a leg")
        })
        .collect();
    // leg-to-leg edges as (leg, partner leg) with leg < partner
    let leg_pairs: Vec<(usize, usize)> = (1..=k)
        .filter_map(|leg| {
            let m = t.mate_port(t.leg_port(leg));
            let base = 4 * t.num_vertices();
            (m >= base && m - base + 1 > leg).then(|| (leg, m - base + 1))
        })
        .collect();

    let size = n.pow(k as u32);
    let mut colors = vec![0usize; k + 1];
    let mut data = vec![zero(); size];
    for (idx, slot) in data.iter_mut().enumerate() {
        let mut rem = idx;
        for leg in (1..=k).rev() {
            colors[leg] = rem % n;
            rem /= n;
        }
        if leg_pairs.iter().any(|&(a, b)| colors[a] != colors[b]) {
            continue;
        }
        let offset = axis_leg.iter().fold(0, |acc, &leg| acc * n + colors[leg]);
        *slot = core.data[offset] * loop_factor;
    }
    TangleTensor::new(k, n, data)
}

/// Reference evaluation: sums over all `n^{|E|}` edge colorings.
pub fn naive_tangle_tensor(model: &VertexModel, t: &Tangle) -> TangleTensor {
    naive_partial(model, t, &[])
}

/// Naive sum restricted to colorings whose first edges (by edge id) take the
/// colors in `prefix`. Summing over every prefix of a fixed length gives
/// [`naive_tangle_tensor`].
pub fn naive_partial(model: &VertexModel, t: &Tangle, prefix: &[usize]) -> TangleTensor {
    let n = model.n();
    let k = t.arity();
    let edge = t.edge_index();
    let ne = t.num_edges();
    let fixed = prefix.len().min(ne);
    let vertex_edges: Vec<[usize; 4]> = (0..t.num_vertices())
        .map(|v| {
            [
                edge[4 * v],
                edge[4 * v + 1],
                edge[4 * v + 2],
                edge[4 * v + 3],
            ]
        })
        .collect();
    let leg_edges: Vec<usize> = (1..=k).map(|leg| edge[t.leg_port(leg)]).collect();
    let loop_factor = (n as f64).powi(t.loop_count() as i32);
    let entries = model.entries();

    let mut out = vec![zero(); n.pow(k as u32)];
    let mut colors = vec![0usize; ne];
    colors[..fixed].copy_from_slice(&prefix[..fixed]);
    loop {
        let mut w = Complex64::new(loop_factor, 0.0);
        for e in &vertex_edges {
            w *= entries[((colors[e[0]] * n + colors[e[1]]) * n + colors[e[2]]) * n + colors[e[3]]];
        }
        let o = leg_edges.iter().fold(0, |acc, &e| acc * n + colors[e]);
        out[o] += w;

        let mut d = ne;
        loop {
            if d == fixed {
                return TangleTensor::new(k, n, out);
            }
            d -= 1;
            colors[d] += 1;
            if colors[d] < n {
                break;
            }
            colors[d] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_tangle;

    fn model(n: usize) -> VertexModel {
        let raw = (0..n.pow(4))
            .map(|x| Complex64::new((x as f64 * 0.71).sin(), (x as f64 * 0.23).cos()))
            .collect();
        VertexModel::symmetrize(n, raw).unwrap()
    }

    fn close(a: &TangleTensor, b: &TangleTensor) -> bool {
        let scale = 1.0 + a.max_abs().max(b.max_abs());
        a.max_abs_diff(b) <= 1e-12 * scale
    }

    #[test]
    fn single_vertex_is_one_step() {
        let t = parse_tangle("x v a a b b\n").unwrap();
        let plan = plan_contraction(&t);
        assert_eq!(plan.steps().len(), 1);
        assert!(matches!(plan.steps()[0], PlanStep::Trace { .. }));
    }

    #[test]
    fn vertex_with_four_legs_is_r() {
        let r = model(2);
        let t = parse_tangle("x v a b c d\nleg 1 a\nleg 2 b\nleg 3 c\nleg 4 d\n").unwrap();
        let f = execute_plan(&plan_contraction(&t), &t, &r);
        assert_eq!(f.data(), r.entries());
    }

    #[test]
    fn single_edge_tangle_is_identity_matching() {
        let t = parse_tangle("leg 1 a\nleg 2 a\n").unwrap();
        let f = execute_plan(&plan_contraction(&t), &t, &model(3));
        assert_eq!(f, TangleTensor::identity_matching(3));
        assert_eq!(
            naive_tangle_tensor(&model(3), &t),
            TangleTensor::identity_matching(3)
        );
    }

    #[test]
    fn planned_matches_naive_on_mixed_tangle() {
        let r = model(3);
        let t = parse_tangle(
            "loops 1\nx u a b c d\nx w c e e f\nleg 1 a\nleg 2 f\nleg 3 g\nleg 4 g\nleg 5 b\nleg 6 d\n",
        )
        .unwrap();
        let planned = execute_plan(&plan_contraction(&t), &t, &r);
        assert!(close(&planned, &naive_tangle_tensor(&r, &t)));
    }

    #[test]
    fn chain_peak_arity_stays_small() {
        for v in 2..9 {
            let t = Tangle::chain(v);
            assert!(plan_contraction(&t).peak_arity() <= 4, "v = {v}");
        }
    }

    #[test]
    fn naive_prefixes_partition_the_sum() {
        let r = model(2);
        let t = parse_tangle("x u a b c d\nx w c d a b\n").unwrap();
        let full = naive_tangle_tensor(&r, &t);
        let mut acc = TangleTensor::zeros(0, 2);
        for c0 in 0..2 {
            for c1 in 0..2 {
                acc.add_scaled(&naive_partial(&r, &t, &[c0, c1]), Complex64::new(1.0, 0.0));
            }
        }
        assert!(close(&acc, &full));
    }
}
