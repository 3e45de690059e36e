//! Dense matrices and a cyclic Jacobi eigensolver for small symmetric problems.
//!
//! Mode-space dimensions in this crate stay in the tens, so storage is plain
//! row-major `Vec<f64>` and the eigensolver favors determinism and accuracy
//! over asymptotic speed. The decomposition contract:
//!
//! - eigenvalues ascending; exact ties keep the order the sweep produced,
//! - each eigenvector's first component of largest magnitude is nonnegative,
//! - identical input bits give identical output bits.

use std::ops::{Index, IndexMut};

use crate::error::Error;

/// Dense row-major matrix, indexed as `m[(row, col)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row `i` as a contiguous slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j`, copied out.
    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Real symmetric matrix. All writes go through [`SymmetricMatrix::set_sym`]
/// or whole-matrix updates, so storage symmetry is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        SymmetricMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets entry `(i, j)` and its mirror `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    /// `self += c * other`
    pub fn scaled_add(&mut self, c: f64, other: &SymmetricMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// `self += c * I`
    pub fn shift_diagonal(&mut self, c: f64) {
        for i in 0..self.dim {
            self.data[i * self.dim + i] += c;
        }
    }

    /// Matrix-vector product `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Quadratic form `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub(crate) fn data(&self) -> &[f64] {
        &self.data
    }
}

impl Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

/// Result of [`eigh`]: eigenvalues ascending, eigenvectors as matching columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

const MAX_SWEEPS: usize = 50;

/// Full eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Errors only if the sweep budget is exhausted, which for the
/// dimensions used here indicates a defect rather than hard numerics.
pub fn eigh(a: &SymmetricMatrix) -> Result<EigenDecomposition, Error> {
    let n = a.dim();
    let mut m = a.data().to_vec();
    let mut v = Matrix::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..MAX_SWEEPS {
        // Only the strict upper triangle is referenced from here on.
        let mut sm = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                sm += m[p * n + q].abs();
            }
        }
        if sm == 0.0 {
            return Ok(sort_and_gauge(n, &d, &v));
        }

        let thresh = if sweep < 3 { 0.2 * sm / (n * n) as f64 } else { 0.0 };

        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = 100.0 * m[p * n + q].abs();
                // Entries that can no longer move the diagonal are flushed to
                // exact zero, which is what lets `sm` reach 0.0 above.
                if sweep > 3
                    && d[p].abs() + g == d[p].abs()
                    && d[q].abs() + g == d[q].abs()
                {
                    m[p * n + q] = 0.0;
                    continue;
                }
                if m[p * n + q].abs() <= thresh {
                    continue;
                }

                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    m[p * n + q] / h
                } else {
                    let theta = 0.5 * h / m[p * n + q];
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * m[p * n + q];

                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                m[p * n + q] = 0.0;
                for j in 0..p {
                    rotate(&mut m, n, (j, p), (j, q), s, tau);
                }
                for j in p + 1..q {
                    rotate(&mut m, n, (p, j), (j, q), s, tau);
                }
                for j in q + 1..n {
                    rotate(&mut m, n, (p, j), (q, j), s, tau);
                }
                for j in 0..n {
                    let vp = v[(j, p)];
                    let vq = v[(j, q)];
                    v[(j, p)] = vp - s * (vq + tau * vp);
                    v[(j, q)] = vq + s * (vp - tau * vq);
                }
            }
        }

        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }

    Err(Error::EigenNoConvergence { sweeps: MAX_SWEEPS })
}

fn rotate(
    m: &mut [f64],
    n: usize,
    (i, j): (usize, usize),
    (k, l): (usize, usize),
    s: f64,
    tau: f64,
) {
    let g = m[i * n + j];
    let h = m[k * n + l];
    m[i * n + j] = g - s * (h + tau * g);
    m[k * n + l] = h + s * (g - tau * h);
}

fn sort_and_gauge(n: usize, d: &[f64], v: &Matrix) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    // sort_by is stable, so exact ties keep the order the sweep produced
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        eigenvalues.push(d[old_col]);
        let mut pivot = 0;
        for i in 1..n {
            if v[(i, old_col)].abs() > v[(pivot, old_col)].abs() {
                pivot = i;
            }
        }
        let flip = if v[(pivot, old_col)] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, new_col)] = flip * v[(i, old_col)];
        }
    }
    EigenDecomposition { eigenvalues, eigenvectors }
}

/// Euclidean norm.
pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
