//! Dense tensors `f_R(T) ∈ V^{⊗k}` and the bilinear pairing between them.

use num_complex::Complex64;

/// Dense complex tensor with `n^arity` entries, leg 1 being the most
/// significant index.
#[derive(Clone, Debug, PartialEq)]
pub struct TangleTensor {
    arity: usize,
    n: usize,
    data: Vec<Complex64>,
}

impl TangleTensor {
    pub fn new(arity: usize, n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(
            data.len(),
            n.pow(arity as u32),
            "tensor length must be n^arity"
        );
        TangleTensor { arity, n, data }
    }

    pub fn zeros(arity: usize, n: usize) -> Self {
        Self::new(
            arity,
            n,
            vec![Complex64::new(0.0, 0.0); n.pow(arity as u32)],
        )
    }

    pub fn scalar(n: usize, value: Complex64) -> Self {
        Self::new(0, n, vec![value])
    }

    /// `Σ_c e_c ⊗ e_c`.
    pub fn identity_matching(n: usize) -> Self {
        let mut t = Self::zeros(2, n);
        for c in 0..n {
            t.data[c * n + c] = Complex64::new(1.0, 0.0);
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn offset(&self, colors: &[usize]) -> usize {
        assert_eq!(colors.len(), self.arity);
        colors.iter().fold(0, |acc, &c| acc * self.n + c)
    }

    pub fn get(&self, colors: &[usize]) -> Complex64 {
        self.data[self.offset(colors)]
    }

    /// Value of an arity-0 tensor.
    pub fn as_scalar(&self) -> Option<Complex64> {
        (self.arity == 0).then(|| self.data[0])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn add_scaled(&mut self, other: &TangleTensor, c: Complex64) {
        assert_eq!((self.arity, self.n), (other.arity, other.n));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &TangleTensor) -> f64 {
        assert_eq!((self.arity, self.n), (other.arity, other.n));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Bilinear (unconjugated) pairing `Σ x_c y_c`; zero when arities or state
/// counts differ.
pub fn pair(x: &TangleTensor, y: &TangleTensor) -> Complex64 {
    if x.arity != y.arity || x.n != y.n {
        return Complex64::new(0.0, 0.0);
    }
    x.data.iter().zip(&y.data).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matchings_pair_to_n() {
        for n in 1..5 {
            let id = TangleTensor::identity_matching(n);
            assert_eq!(pair(&id, &id), Complex64::new(n as f64, 0.0));
        }
    }

    #[test]
    fn mismatched_arity_pairs_to_zero() {
        let a = TangleTensor::identity_matching(2);
        let b = TangleTensor::zeros(4, 2);
        assert_eq!(pair(&a, &b), Complex64::new(0.0, 0.0));
        let c = TangleTensor::identity_matching(3);
        assert_eq!(pair(&a, &c), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pairing_does_not_conjugate() {
        let i = Complex64::new(0.0, 1.0);
        let x = TangleTensor::new(2, 1, vec![i]);
        assert_eq!(pair(&x, &x), Complex64::new(-1.0, 0.0));
    }
}
