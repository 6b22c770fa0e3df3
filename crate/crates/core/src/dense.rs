//! Small dense real matrices for checking operator identities on tiny
//! instances.

use std::ops::Mul;

use crate::embedding::OracleSet;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    /// `I − 2|axis⟩⟨axis|`.
    pub fn reflection(axis: &[f64]) -> Self {
        let mut m = Self::identity(axis.len());
        let dim = m.dim;
        for (r, &x) in axis.iter().enumerate() {
            for (c, &y) in axis.iter().enumerate() {
                m.data[r * dim + c] -= 2.0 * x * y;
            }
        }
        m
    }

    /// Diagonal `(−1)^{F_{j+1}}`, the matrix of `I_j`.
    pub fn phase_oracle(oracle: &OracleSet, j: u32) -> Self {
        let dim = oracle.embedding().extended_size() as usize;
        let mut m = Self::identity(dim);
        for i in 0..dim {
            if oracle.marked(i as u64, j + 1) {
                m.data[i * dim + i] = -1.0;
            }
        }
        m
    }

    pub fn scale(mut self, k: f64) -> Self {
        for x in &mut self.data {
            *x *= k;
        }
        self
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        DenseMatrix { dim: n, data }
    }
}
