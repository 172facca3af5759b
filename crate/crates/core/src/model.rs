//! Vertex models: S2-invariant tensors `R ∈ (C^n)^{⊗4}`.
//!
//! Index positions 1..4 of `R[i,j,k,l]` follow the clockwise slots 0..3 of a
//! vertex, so `(i,k)` is the over-going pair. S2 acts by
//! `R[i,j,k,l] -> R[k,l,i,j]`.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|U^T U - I|` accepted by [`VertexModel::apply_orthogonal`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// How the JSON loader treats a tensor that is not S2-invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryPolicy {
    /// Reject inputs whose S2 deviation exceeds `1e-12 · (1 + max|R|)`.
    Validate,
    /// Project onto the invariant part.
    Symmetrize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexModel {
    n: usize,
    entries: Vec<Complex64>,
}

fn swap_index(n: usize, idx: usize) -> usize {
    let (ij, kl) = (idx / (n * n), idx % (n * n));
    kl * n * n + ij
}

impl VertexModel {
    /// Reynolds projection `½(raw + raw∘swap)`; the result is exactly invariant.
    pub fn symmetrize(n: usize, raw: Vec<Complex64>) -> Result<Self> {
        if n == 0 || raw.len() != n.pow(4) {
            return Err(Error::InvalidModel(format!(
                "expected {} entries for n = {n}, got {}",
                n.pow(4),
                raw.len()
            )));
        }
        let mut entries = raw.clone();
        for (idx, e) in entries.iter_mut().enumerate() {
            *e = (raw[idx] + raw[swap_index(n, idx)]) * 0.5;
        }
        Ok(VertexModel { n, entries })
    }

    /// Accepts `raw` only if it is S2-invariant up to `tol · (1 + max|raw|)`.
    pub fn validated(n: usize, raw: Vec<Complex64>, tol: f64) -> Result<Self> {
        if n == 0 || raw.len() != n.pow(4) {
            return Err(Error::InvalidModel(format!(
                "expected {} entries for n = {n}, got {}",
                n.pow(4),
                raw.len()
            )));
        }
        let scale = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let deviation = (0..raw.len())
            .map(|idx| (raw[idx] - raw[swap_index(n, idx)]).norm())
            .fold(0.0, f64::max);
        if deviation > tol * (1.0 + scale) {
            return Err(Error::NotSymmetric { deviation });
        }
        Self::symmetrize(n, raw)
    }

    pub fn zero(n: usize) -> Self {
        VertexModel {
            n,
            entries: vec![Complex64::new(0.0, 0.0); n.pow(4)],
        }
    }

    /// `R[i,j,k,l] = δ_ik δ_jl`: strands pass straight through, so
    /// `f_R(G) = n^{#knots}`.
    pub fn transmission(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let idx = m.index(i, j, i, j);
                m.entries[idx] = Complex64::new(1.0, 0.0);
            }
        }
        m
    }

    /// `R[i,j,k,l] = A[i,k] · A[j,l]`: each strand through a vertex picks up
    /// one factor of `A`. Requires `A` symmetric.
    pub fn from_strand_matrix(a: &DMatrix<Complex64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || n == 0 {
            return Err(Error::InvalidModel("strand matrix must be square".into()));
        }
        let mut raw = vec![Complex64::new(0.0, 0.0); n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        raw[((i * n + j) * n + k) * n + l] = a[(i, k)] * a[(j, l)];
                    }
                }
            }
        }
        Self::validated(n, raw, 1e-12)
    }

    /// The two-state model `A ⊗ A` with `A = [[2, i], [i, 0]]`, whose partition
    /// function is `2^{#knots}` although `C(R) = A² ≠ I`.
    pub fn knot_counting() -> Self {
        let i = Complex64::new(0.0, 1.0);
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(2.0, 0.0), i, i, Complex64::new(0.0, 0.0)],
        );
        Self::from_strand_matrix(&a).expect("A is symmetric")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.entries[self.index(i, j, k, l)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// `self + h · other`.
    pub fn add_scaled(&self, other: &VertexModel, h: f64) -> Result<VertexModel> {
        if self.n != other.n {
            return Err(Error::InvalidModel(format!(
                "state counts differ: {} vs {}",
                self.n, other.n
            )));
        }
        let raw = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b * h)
            .collect();
        Self::symmetrize(self.n, raw)
    }

    /// `R^U[a,b,c,d] = Σ U[a,i] U[b,j] U[c,k] U[d,l] R[i,j,k,l]` for a complex
    /// orthogonal `U` (`U^T U = I`, no conjugation).
    pub fn apply_orthogonal(&self, u: &DMatrix<Complex64>) -> Result<VertexModel> {
        let n = self.n;
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::Usage(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let residual = orthogonality_residual(u);
        if residual > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { residual });
        }
        let mut data = self.entries.clone();
        for axis in 0..4 {
            data = mode_product(&data, n, u, axis);
        }
        Self::symmetrize(n, data)
    }

    pub fn from_json(text: &str, policy: SymmetryPolicy) -> Result<VertexModel> {
        let file: ModelFile = serde_json::from_str(text)?;
        let n = file.n;
        if n == 0 {
            return Err(Error::InvalidModel("n must be positive".into()));
        }
        let mut raw = vec![Complex64::new(0.0, 0.0); n.pow(4)];
        let mut set = vec![false; n.pow(4)];
        for e in &file.entries {
            let ids = [e.i, e.j, e.k, e.l];
            if ids.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::InvalidModel(format!(
                    "entry ({}, {}, {}, {}) out of range 1..={n}",
                    e.i, e.j, e.k, e.l
                )));
            }
            let idx = ((ids[0] - 1) * n + ids[1] - 1) * n * n + (ids[2] - 1) * n + ids[3] - 1;
            if std::mem::replace(&mut set[idx], true) {
                return Err(Error::InvalidModel(format!(
                    "entry ({}, {}, {}, {}) given twice",
                    e.i, e.j, e.k, e.l
                )));
            }
            raw[idx] = Complex64::new(e.re, e.im);
        }
        match policy {
            SymmetryPolicy::Validate => Self::validated(n, raw, 1e-12),
            SymmetryPolicy::Symmetrize => Self::symmetrize(n, raw),
        }
    }

    pub fn read_json(path: impl AsRef<Path>, policy: SymmetryPolicy) -> Result<VertexModel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, policy)
    }

    /// JSON with 1-based indices; zero entries are omitted.
    pub fn to_json(&self) -> String {
        let n = self.n;
        let mut entries = Vec::new();
        for (idx, z) in self.entries.iter().enumerate() {
            if *z == Complex64::new(0.0, 0.0) {
                continue;
            }
            entries.push(EntryJson {
                i: idx / (n * n * n) + 1,
                j: idx / (n * n) % n + 1,
                k: idx / n % n + 1,
                l: idx % n + 1,
                re: z.re,
                im: z.im,
            });
        }
        serde_json::to_string_pretty(&ModelFile { n, entries }).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    n: usize,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// Frobenius norm of `U^T U - I`.
pub fn orthogonality_residual(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u.transpose() * u;
    (prod - DMatrix::<Complex64>::identity(n, n)).norm()
}

/// Applies `u` along one axis of an `n^4` tensor.
fn mode_product(
    data: &[Complex64],
    n: usize,
    u: &DMatrix<Complex64>,
    axis: usize,
) -> Vec<Complex64> {
    let stride = n.pow(3 - axis as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let a = idx / stride % n;
        let base = idx - a * stride;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            acc += u[(a, i)] * data[base + i * stride];
        }
        *o = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize) -> Vec<Complex64> {
        (0..n.pow(4))
            .map(|x| c((x as f64 * 0.37).sin(), (x as f64 * 0.11).cos()))
            .collect()
    }

    #[test]
    fn symmetrize_fixes_invariant_input() {
        let r = VertexModel::symmetrize(2, sample(2)).unwrap();
        let again = VertexModel::symmetrize(2, r.entries().to_vec()).unwrap();
        assert_eq!(again, r);
        for idx in 0..16 {
            assert_eq!(r.entries()[idx], r.entries()[swap_index(2, idx)]);
        }
    }

    #[test]
    fn symmetrize_kills_antisymmetric_part() {
        let raw = sample(3);
        let anti: Vec<Complex64> = (0..81)
            .map(|idx| raw[idx] - raw[swap_index(3, idx)])
            .collect();
        let r = VertexModel::symmetrize(3, anti).unwrap();
        assert!(r.entries().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn validate_rejects_asymmetric() {
        let err = VertexModel::validated(2, sample(2), 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
    }

    #[test]
    fn knot_counting_model_entries() {
        let r = VertexModel::knot_counting();
        // R[1,1,1,1] = A[1,1]^2 = 4, R[1,2,2,1] = A[1,2] A[2,1] = -1
        assert_eq!(r.get(0, 0, 0, 0), c(4.0, 0.0));
        assert_eq!(r.get(0, 1, 1, 0), c(-1.0, 0.0));
        assert_eq!(r.get(1, 1, 1, 1), c(0.0, 0.0));
    }

    #[test]
    fn orthogonal_identity_and_minus_identity() {
        let r = VertexModel::symmetrize(2, sample(2)).unwrap();
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert_eq!(r.apply_orthogonal(&id).unwrap(), r);
        let minus = -id;
        let rm = r.apply_orthogonal(&minus).unwrap();
        for (a, b) in rm.entries().iter().zip(r.entries()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn permutation_matrix_permutes_indices() {
        let n = 3;
        let r = VertexModel::symmetrize(n, sample(n)).unwrap();
        let perm = [2usize, 0, 1];
        let mut u = DMatrix::<Complex64>::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            u[(p, i)] = c(1.0, 0.0);
        }
        let ru = r.apply_orthogonal(&u).unwrap();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        assert_eq!(
                            ru.get(perm[i], perm[j], perm[k], perm[l]),
                            r.get(i, j, k, l)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn non_orthogonal_rejected() {
        let r = VertexModel::transmission(2);
        let u =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        match r.apply_orthogonal(&u) {
            Err(Error::NotOrthogonal { residual }) => assert!(residual > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let r = VertexModel::knot_counting();
        let back = VertexModel::from_json(&r.to_json(), SymmetryPolicy::Validate).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn json_policies() {
        let text = r#"{"n": 2, "entries": [{"i":1,"j":2,"k":1,"l":1,"re":1.0}]}"#;
        assert!(VertexModel::from_json(text, SymmetryPolicy::Validate).is_err());
        let r = VertexModel::from_json(text, SymmetryPolicy::Symmetrize).unwrap();
        assert_eq!(r.get(0, 1, 0, 0), c(0.5, 0.0));
        assert_eq!(r.get(0, 0, 0, 1), c(0.5, 0.0));
        let bad = r#"{"n": 2, "entries": [{"i":3,"j":1,"k":1,"l":1,"re":1.0}]}"#;
        assert!(VertexModel::from_json(bad, SymmetryPolicy::Symmetrize).is_err());
    }
}
