//! Dense complex matrices, just enough linear algebra for the trace
//! computations in this crate.

use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        let chunk_rows: Vec<(usize, &mut [Complex64])> =
            out.data.chunks_mut(d).enumerate().collect();
        let body = |(i, row): (usize, &mut [Complex64])| {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let orow = &other.data[k * d..(k + 1) * d];
                for (r, &o) in row.iter_mut().zip(orow) {
                    *r += a * o;
                }
            }
        };
        if d >= 96 {
            chunk_rows.into_par_iter().for_each(body);
        } else {
            chunk_rows.into_iter().for_each(body);
        }
        out
    }

    /// Plain matrix trace (unnormalized).
    pub fn matrix_trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev = 0.0f64;
        for i in 0..d {
            for j in i..d {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.matmul(&self.adjoint());
        prod.max_abs_diff(&CMatrix::identity(self.dim)) <= tol
    }

    /// Applies a column scaling `M <- M * diag(phases)`.
    pub fn scale_columns(&mut self, phases: &[Complex64]) {
        assert_eq!(phases.len(), self.dim);
        for row in self.data.chunks_mut(self.dim) {
            for (entry, phase) in row.iter_mut().zip(phases) {
                *entry *= phase;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    pub fn random_matrix(d: usize, rng: &mut CounterRng) -> CMatrix {
        CMatrix::from_fn(d, |_, _| {
            Complex64::new(rng.unit() * 2.0 - 1.0, rng.unit() * 2.0 - 1.0)
        })
    }

    #[test]
    fn identity_multiplication() {
        let mut rng = CounterRng::new(1);
        let a = random_matrix(5, &mut rng);
        let i = CMatrix::identity(5);
        assert!(a.matmul(&i).max_abs_diff(&a) < 1e-14);
        assert!(i.matmul(&a).max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn adjoint_of_product() {
        let mut rng = CounterRng::new(2);
        let a = random_matrix(6, &mut rng);
        let b = random_matrix(6, &mut rng);
        let lhs = a.matmul(&b).adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn parallel_matmul_matches_serial() {
        let mut rng = CounterRng::new(3);
        let a = random_matrix(100, &mut rng);
        let b = random_matrix(100, &mut rng);
        let prod = a.matmul(&b);
        // direct triple loop
        let mut expect = CMatrix::zeros(100);
        for i in 0..100 {
            for j in 0..100 {
                let mut s = Complex64::ZERO;
                for k in 0..100 {
                    s += a[(i, k)] * b[(k, j)];
                }
                expect[(i, j)] = s;
            }
        }
        assert!(prod.max_abs_diff(&expect) < 1e-10);
    }

    #[test]
    fn hermitian_deviation_detects() {
        let mut m = CMatrix::identity(3);
        assert_eq!(m.hermitian_deviation(), 0.0);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(m.hermitian_deviation() > 0.5);
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        assert_eq!(m.hermitian_deviation(), 0.0);
    }
}
