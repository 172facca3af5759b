//! Finite checks that characterize invariant models: the determinant kernel,
//! Gram positivity for real models, the nondegeneracy probe and the
//! derivative identity.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{
    det_tangle_bounded, glue, tangle_derivative, QuantumTangle, DEFAULT_DET_BOUND,
};
use crate::contraction::{execute_plan, plan_contraction, ContractionPlan};
use crate::diagram::{CanonicalKey, Tangle};
use crate::error::{Error, Result};
use crate::eval::{partition_function, qt_evaluate, tangle_tensor};
use crate::model::VertexModel;
use crate::par;
use crate::random;
use crate::tensor::{pair, TangleTensor};

/// Largest `k + 4·max_vertices` accepted by [`enumerate_tangles`].
pub const ENDPOINT_BUDGET: usize = 16;

/// Singular values below this fraction of the largest do not count toward rank.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Every isomorphism class of loop-free `k`-tangles with at most
/// `max_vertices` vertices, one canonical representative each, sorted by key.
pub fn enumerate_tangles(k: usize, max_vertices: usize) -> Result<Vec<Tangle>> {
    if !k.is_multiple_of(2) {
        return Err(Error::InvalidTangle(format!("arity {k} is odd")));
    }
    let endpoints = k + 4 * max_vertices;
    if endpoints > ENDPOINT_BUDGET {
        return Err(Error::BoundExceeded {
            what: "endpoints (k + 4·max_vertices)",
            value: endpoints,
            bound: ENDPOINT_BUDGET,
            hint: "; lower the arity or the vertex count",
        });
    }
    let mut classes: HashMap<CanonicalKey, Tangle> = HashMap::new();
    for v in 0..=max_vertices {
        let ports = 4 * v + k;
        if ports == 0 {
            classes.insert(Tangle::empty().canonical_form().0, Tangle::empty());
            continue;
        }
        // split the work on the partner of port 0
        let partners: Vec<usize> = (1..ports).collect();
        let parts = par::map(&partners, |&first| {
            let mut mate = vec![usize::MAX; ports];
            mate[0] = first;
            mate[first] = 0;
            let mut found = HashMap::new();
            matchings(&mut mate, &mut |m| {
                let t = Tangle::from_mates(v, k, m.to_vec(), 0).expect("perfect matching");
                let (key, form) = t.canonical_form();
                found.entry(key).or_insert(form);
            });
            found
        });
        for part in parts {
            for (key, t) in part {
                classes.entry(key).or_insert(t);
            }
        }
    }
    let mut out: Vec<(CanonicalKey, Tangle)> = classes.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, t)| t).collect())
}

fn matchings(mate: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let Some(p) = mate.iter().position(|&m| m == usize::MAX) else {
        visit(mate);
        return;
    };
    for q in p + 1..mate.len() {
        if mate[q] == usize::MAX {
            mate[p] = q;
            mate[q] = p;
            matchings(mate, visit);
            mate[p] = usize::MAX;
            mate[q] = usize::MAX;
        }
    }
}

fn scalar(model: &VertexModel, q: &QuantumTangle) -> Result<Complex64> {
    let t = qt_evaluate(model, q)?;
    Ok(t.as_scalar().unwrap_or_default())
}

/// `|f_R(det_{n+1} · T)|` for a `2(n+1)`-tangle `T`.
pub fn kernel_residual(model: &VertexModel, t: &Tangle) -> Result<f64> {
    let m = model.n() + 1;
    if t.arity() != 2 * m {
        return Err(Error::ArityMismatch {
            left: 2 * m,
            right: t.arity(),
        });
    }
    let det = det_tangle_bounded(m, DEFAULT_DET_BOUND)?;
    Ok(scalar(model, &det.glue(&QuantumTangle::from_tangle(t)))?.norm())
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelSample {
    pub tangle: Tangle,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub n: usize,
    pub samples: Vec<KernelSample>,
    pub max_residual: f64,
    /// Largest `|f_R(det_n · T₀)|` over random `2n`-tangles `T₀`.
    pub negative_control: f64,
    pub model_norm: f64,
}

impl KernelReport {
    /// Every sample satisfies `residual ≤ tol · (1 + ‖R‖^v)`, `v` its vertex count.
    pub fn passes(&self, tol: f64) -> bool {
        self.samples.iter().all(|s| {
            let bound = tol * (1.0 + self.model_norm.powi(s.tangle.num_vertices() as i32));
            s.residual <= bound
        })
    }
}

/// Kernel residuals on `samples` random `2(n+1)`-tangles with at most
/// `max_vertices` vertices, plus the `det_n` control on as many `2n`-tangles.
/// Vertex counts are drawn uniformly from `0..=max_vertices`.
pub fn kernel_battery(
    model: &VertexModel,
    samples: usize,
    max_vertices: usize,
    seed: u64,
) -> Result<KernelReport> {
    let n = model.n();
    let mut rng = random::rng(seed);
    let mut draw = |arity| {
        let v = rng.gen_range(0..=max_vertices);
        random::random_tangle(&mut rng, v, arity)
    };
    let tangles: Vec<Tangle> = (0..samples).map(|_| draw(2 * (n + 1))).collect();
    let controls: Vec<Tangle> = (0..samples).map(|_| draw(2 * n)).collect();

    let residuals: Vec<f64> = par::map(&tangles, |t| kernel_residual(model, t))
        .into_iter()
        .collect::<Result<_>>()?;
    let det_n = det_tangle_bounded(n, DEFAULT_DET_BOUND)?;
    let control: Vec<f64> = par::map(&controls, |t| {
        scalar(model, &det_n.glue(&QuantumTangle::from_tangle(t))).map(|z| z.norm())
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(KernelReport {
        n,
        samples: tangles
            .into_iter()
            .zip(residuals)
            .map(|(tangle, residual)| KernelSample { tangle, residual })
            .collect(),
        max_residual,
        negative_control: control.into_iter().fold(0.0, f64::max),
        model_norm: model.frobenius_norm(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub basis: Vec<Tangle>,
    /// Real parts of `f_R(T · T′)`, row-major.
    pub gram: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
    /// `max |gram[i][j] - gram[j][i]|`.
    pub hermiticity_residual: f64,
    /// Largest imaginary part encountered.
    pub max_imag: f64,
    pub frobenius_norm: f64,
}

impl GramReport {
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue >= -1e-8 * (1.0 + self.frobenius_norm)
    }
}

/// The model-independent part of a Gram computation: the basis, every
/// distinct glued diagram `T_i · T_j` (by canonical key) with its contraction
/// plan, and which of them sits at each matrix position.
pub struct GramBasis {
    basis: Vec<Tangle>,
    glued: Vec<(Tangle, ContractionPlan)>,
    position: Vec<usize>,
}

impl GramBasis {
    /// Basis of enumerated 4-tangles with at most `max_vertices` vertices.
    pub fn new(max_vertices: usize) -> Result<Self> {
        Self::from_basis(enumerate_tangles(4, max_vertices)?)
    }

    pub fn from_basis(basis: Vec<Tangle>) -> Result<Self> {
        let size = basis.len();
        let pairs: Vec<(usize, usize)> = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .collect();
        let forms = par::map(&pairs, |&(i, j)| {
            glue(&basis[i], &basis[j]).map(|g| g.canonical_form())
        });
        let mut index: HashMap<CanonicalKey, usize> = HashMap::new();
        let mut distinct = Vec::new();
        let mut position = Vec::with_capacity(pairs.len());
        for form in forms {
            let (key, g) = form?;
            let next = distinct.len();
            let id = *index.entry(key).or_insert(next);
            if id == next {
                distinct.push(g);
            }
            position.push(id);
        }
        let plans = par::map(&distinct, plan_contraction);
        Ok(GramBasis {
            basis,
            glued: distinct.into_iter().zip(plans).collect(),
            position,
        })
    }

    pub fn basis(&self) -> &[Tangle] {
        &self.basis
    }

    /// Number of distinct glued diagrams.
    pub fn distinct_diagrams(&self) -> usize {
        self.glued.len()
    }

    /// `f_R(T_i · T_j)` for every ordered pair, each distinct diagram evaluated once.
    pub fn values(&self, model: &VertexModel) -> Vec<Vec<Complex64>> {
        let values = par::map(&self.glued, |(g, plan)| {
            execute_plan(plan, g, model)
                .as_scalar()
                .expect("glued tangles are diagrams")
        });
        let size = self.basis.len();
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| values[self.position[i * size + j]])
                    .collect()
            })
            .collect()
    }

    /// Gram report for a real model.
    pub fn report(&self, model: &VertexModel) -> Result<GramReport> {
        if !model.is_real(1e-12) {
            return Err(Error::NotReal {
                max_imag: model.max_imag(),
            });
        }
        let values = self.values(model);
        let size = self.basis.len();
        let gram: Vec<Vec<f64>> = values
            .iter()
            .map(|row| row.iter().map(|z| z.re).collect())
            .collect();
        let max_imag = values
            .iter()
            .flatten()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        let mut hermiticity_residual: f64 = 0.0;
        for i in 0..size {
            for j in 0..i {
                hermiticity_residual = hermiticity_residual.max((gram[i][j] - gram[j][i]).abs());
            }
        }
        let matrix = DMatrix::from_fn(size, size, |i, j| gram[i][j]);
        let min_eigenvalue = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Ok(GramReport {
            basis: self.basis.clone(),
            gram,
            min_eigenvalue: if size == 0 { 0.0 } else { min_eigenvalue },
            hermiticity_residual,
            max_imag,
            frobenius_norm: matrix.norm(),
        })
    }
}

/// Gram matrix `(f_R(T · T′))` over the enumerated 4-tangles and its smallest
/// eigenvalue. Glued diagrams are deduplicated by canonical key before
/// evaluation, so the matrix is exactly symmetric. For many models over one
/// basis, build a [`GramBasis`] once instead.
pub fn gram_psd(model: &VertexModel, max_vertices: usize) -> Result<GramReport> {
    if !model.is_real(1e-12) {
        return Err(Error::NotReal {
            max_imag: model.max_imag(),
        });
    }
    GramBasis::new(max_vertices)?.report(model)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub gram_rank: usize,
    pub span_rank: usize,
    pub basis_size: usize,
}

impl ProbeReport {
    pub fn passes(&self) -> bool {
        self.gram_rank == self.span_rank
    }
}

/// Numerical ranks of the pairing matrix `(pair(f_R(T), f_R(T′)))` and of the
/// matrix `F` whose rows are the tensors `f_R(T)`, over enumerated `k`-tangles.
/// By the pairing identity the first matrix equals `(f_R(T · T′))`.
///
/// The pairing matrix is `F Fᵀ`. Writing `F = A W` with `W` the rows of `V*`
/// from the SVD of `F` that pass the rank threshold, `A` has full column rank,
/// so `rank(F Fᵀ) = rank(W Wᵀ)`; the probe ranks that `r × r` matrix instead
/// of the full basis-sized one.
pub fn nondegeneracy_probe(
    model: &VertexModel,
    k: usize,
    max_vertices: usize,
) -> Result<ProbeReport> {
    let basis = enumerate_tangles(k, max_vertices)?;
    let tensors = par::map(&basis, |t| tangle_tensor(model, t));
    let cols = model.n().pow(k as u32);
    let f = DMatrix::from_fn(basis.len(), cols, |i, c| tensors[i].data()[c]);
    let (span_rank, w) = row_space(f);
    let gram_rank = if span_rank == 0 {
        0
    } else {
        row_space(&w * w.transpose()).0
    };
    Ok(ProbeReport {
        gram_rank,
        span_rank,
        basis_size: basis.len(),
    })
}

/// Numerical rank and an orthonormal basis (as rows) of the row space.
fn row_space(m: DMatrix<Complex64>) -> (usize, DMatrix<Complex64>) {
    let cols = m.ncols();
    if m.is_empty() {
        return (0, DMatrix::zeros(0, cols));
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let largest = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| largest > 0.0 && svd.singular_values[i] >= RANK_THRESHOLD * largest)
        .collect();
    let rows = DMatrix::from_fn(keep.len(), cols, |r, c| v_t[(keep[r], c)]);
    (keep.len(), rows)
}

/// `|(f_{R+hS}(G) - f_{R-hS}(G)) / 2h - pair(f_R(dG), S)|`.
pub fn fd_check(model: &VertexModel, g: &Tangle, direction: &VertexModel, h: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::Usage(format!("step {h} is outside [1e-7, 1e-3]")));
    }
    if direction.n() != model.n() {
        return Err(Error::InvalidModel(
            "direction and model differ in n".into(),
        ));
    }
    let plus = partition_function(&model.add_scaled(direction, h)?, g)?;
    let minus = partition_function(&model.add_scaled(direction, -h)?, g)?;
    let numeric = (plus - minus) / (2.0 * h);
    let dg = qt_evaluate(model, &tangle_derivative(g)?)?;
    let s = TangleTensor::new(4, model.n(), direction.entries().to_vec());
    Ok((numeric - pair(&dg, &s)).norm())
}
