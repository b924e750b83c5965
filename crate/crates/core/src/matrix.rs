//! Dense complex/real matrix arithmetic with Hermitian and symmetric
//! eigensolvers, Kronecker products and partial traces.
//!
//! The eigensolver is a cyclic Jacobi rotation scheme: unconditionally stable,
//! dependency-free, and more than fast enough for the dimensions this crate
//! works at (well under 200x200). Hermitian problems are reduced to a real
//! symmetric problem twice the size via the standard `[[Re A, -Im A], [Im A,
//! Re A]]` embedding.

use std::ops::{Add, Index, Mul, Sub};

pub use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Dense complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Build from nested row slices; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Outer product |u><v| (conjugating v).
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * a).collect(),
        }
    }

    pub fn scale_re(&self, a: f64) -> Self {
        self.scale(Complex64::new(a, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max_ij |A[i][j] - conj(A[j][i])|.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: &Tolerances) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol.hermiticity * self.max_abs()
    }

    /// The exactly-Hermitian average (A + A^dagger)/2.
    pub fn hermitized(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Dense real matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RealMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RealMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn trace(&self) -> f64 {
        debug_assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, a: f64) -> Self {
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * a).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// max_ij |A[i][j] - A[j][i]|, infinite for non-square input.
    pub fn asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        dev
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &RealMatrix {
    type Output = RealMatrix;
    fn add(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &RealMatrix {
    type Output = RealMatrix;
    fn sub(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &RealMatrix {
    type Output = RealMatrix;
    fn mul(self, rhs: &RealMatrix) -> RealMatrix {
        self.matmul(rhs)
    }
}

/// Real symmetric matrix; symmetry is validated at construction.
#[derive(Clone, Debug)]
pub struct RealSymMatrix {
    mat: RealMatrix,
}

impl RealSymMatrix {
    pub fn new(mat: RealMatrix) -> Result<Self> {
        Self::with_tol(mat, &Tolerances::default())
    }

    pub fn with_tol(mat: RealMatrix, tol: &Tolerances) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.asymmetry();
        if dev > tol.symmetry * mat.max_abs() {
            return Err(Error::NotSymmetric(dev));
        }
        Ok(RealSymMatrix { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &RealMatrix {
        &self.mat
    }
}

/// Spectral decomposition of a real symmetric matrix.
///
/// Eigenvalues sorted non-increasing (counting multiplicity); `eigenvectors`
/// holds the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: RealMatrix,
}

/// Spectral decomposition of a Hermitian matrix: real eigenvalues sorted
/// non-increasing, complex orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

fn off_diagonal_norm(a: &RealMatrix) -> f64 {
    let d = a.rows();
    let mut s = 0.0;
    for p in 0..d {
        for q in (p + 1)..d {
            let v = a.get(p, q);
            s += 2.0 * v * v;
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi sweeps on a copy of `a`, accumulating rotations into the
/// eigenvector matrix. Converges when the off-diagonal Frobenius norm drops
/// below `jacobi_off_rel` times the initial Frobenius norm of the matrix.
fn jacobi(a: &RealMatrix, tol: &Tolerances) -> Result<(Vec<f64>, RealMatrix)> {
    let d = a.rows();
    let mut m = a.clone();
    let mut v = RealMatrix::identity(d);
    let threshold = tol.jacobi_off_rel * m.frobenius_norm();

    let mut converged = d < 2 || off_diagonal_norm(&m) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= tol.jacobi_max_sweeps {
            return Err(Error::Internal(format!(
                "jacobi eigensolver did not converge in {} sweeps (off-diagonal norm {:.3e}, target {:.3e})",
                tol.jacobi_max_sweeps,
                off_diagonal_norm(&m),
                threshold
            )));
        }
        for p in 0..(d - 1) {
            for q in (p + 1)..d {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                // Rotation annihilating m[p][q], Golub & Van Loan sym. Schur 2x2.
                let tau = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // m <- J^t m J, applied as column then row updates.
                for r in 0..d {
                    let mrp = m.get(r, p);
                    let mrq = m.get(r, q);
                    m.set(r, p, c * mrp - s * mrq);
                    m.set(r, q, s * mrp + c * mrq);
                }
                for r in 0..d {
                    let mpr = m.get(p, r);
                    let mqr = m.get(q, r);
                    m.set(p, r, c * mpr - s * mqr);
                    m.set(q, r, s * mpr + c * mqr);
                }
                // v <- v J
                for r in 0..d {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, c * vrp - s * vrq);
                    v.set(r, q, s * vrp + c * vrq);
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&m) <= threshold;
    }

    let eigenvalues: Vec<f64> = (0..d).map(|i| m.get(i, i)).collect();
    Ok((eigenvalues, v))
}

/// Full spectral decomposition of a real symmetric matrix. Eigenvalues come
/// out sorted non-increasing; ties keep the pre-sort (diagonal) order so the
/// result is deterministic for identical input.
pub fn sym_eigen(a: &RealSymMatrix) -> Result<EigenDecomposition> {
    sym_eigen_with(a, &Tolerances::default())
}

pub fn sym_eigen_with(a: &RealSymMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    let (vals, vecs) = jacobi(a.mat(), tol)?;
    let d = vals.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        vals[j]
            .partial_cmp(&vals[i])
            .expect("non-finite eigenvalue")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let eigenvectors = RealMatrix::from_fn(d, d, |i, j| vecs.get(i, order[j]));
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Spectral decomposition of a Hermitian matrix via the real symmetric
/// embedding `[[Re A, -Im A], [Im A, Re A]]`. Every eigenvalue of the
/// embedding appears twice; pairs are de-duplicated by orthogonalising the
/// candidate complex eigenvectors and keeping one representative per pair.
pub fn herm_eigen(a: &ComplexMatrix) -> Result<HermEigenDecomposition> {
    herm_eigen_with(a, &Tolerances::default())
}

pub fn herm_eigen_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<HermEigenDecomposition> {
    if !a.is_square() {
        return Err(Error::DimMismatch(format!(
            "hermitian eigensolver needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let dev = a.hermiticity_deviation();
    if dev > tol.hermiticity * a.max_abs() {
        return Err(Error::NotHermitian(dev));
    }
    let d = a.rows();
    // Hermitize first so the embedding is exactly symmetric in floating point.
    let h = a.hermitized();
    let embedded = RealMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let (bi, ri) = (i / d, i % d);
        let (bj, rj) = (j / d, j % d);
        match (bi, bj) {
            (0, 0) | (1, 1) => h.get(ri, rj).re,
            (0, 1) => -h.get(ri, rj).im,
            _ => h.get(ri, rj).im,
        }
    });
    let sym = sym_eigen_with(&RealSymMatrix::with_tol(embedded, tol)?, tol)?;

    // Group the 2d sorted eigenvalues into clusters; each true complex
    // eigenpair contributes an exactly-duplicated value, so clusters always
    // have even size once near-equal values are merged.
    let vals = &sym.eigenvalues;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cluster_tol = 1e-10 * (1.0 + scale);
    let mut boundaries = vec![0usize];
    for i in 1..vals.len() {
        if vals[i - 1] - vals[i] > cluster_tol {
            boundaries.push(i);
        }
    }
    boundaries.push(vals.len());
    let mut clusters: Vec<(usize, usize)> = boundaries.windows(2).map(|w| (w[0], w[1])).collect();
    // Merge forward any odd-sized cluster (can only arise from borderline
    // gaps straddling the tolerance).
    let mut i = 0;
    while i < clusters.len() {
        if (clusters[i].1 - clusters[i].0) % 2 == 1 {
            if i + 1 >= clusters.len() {
                return Err(Error::Internal(
                    "hermitian embedding produced an unpaired eigenvalue".into(),
                ));
            }
            clusters[i].1 = clusters[i + 1].1;
            clusters.remove(i + 1);
        } else {
            i += 1;
        }
    }

    let mut eigenvalues = Vec::with_capacity(d);
    let mut accepted: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for &(start, end) in &clusters {
        let k = (end - start) / 2;
        let candidates: Vec<Vec<Complex64>> = (start..end)
            .map(|col| {
                (0..d)
                    .map(|r| {
                        Complex64::new(
                            sym.eigenvectors.get(r, col),
                            sym.eigenvectors.get(r + d, col),
                        )
                    })
                    .collect()
            })
            .collect();
        for pick in 0..k {
            // Orthogonalise every remaining candidate against all accepted
            // vectors and keep the one with the largest residual.
            let mut best: Option<(f64, Vec<Complex64>)> = None;
            for cand in &candidates {
                let r = orthogonalized(cand, &accepted);
                let norm = vec_norm(&r);
                if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                    best = Some((norm, r));
                }
            }
            let (norm, mut vec) = best.expect("cluster with no candidates");
            if norm < 1e-6 {
                return Err(Error::Internal(format!(
                    "eigenvector extraction failed: residual {norm:.3e} in a degenerate cluster"
                )));
            }
            for z in &mut vec {
                *z /= norm;
            }
            // Second orthogonalisation pass for a machine-precision Gram matrix.
            let mut vec = orthogonalized(&vec, &accepted);
            let n2 = vec_norm(&vec);
            for z in &mut vec {
                *z /= n2;
            }
            accepted.push(vec);
            eigenvalues.push((vals[start + 2 * pick] + vals[start + 2 * pick + 1]) * 0.5);
        }
    }
    debug_assert_eq!(accepted.len(), d);

    let eigenvectors = ComplexMatrix::from_fn(d, d, |i, j| accepted[j][i]);
    Ok(HermEigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalized(v: &[Complex64], basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut out = v.to_vec();
    for b in basis {
        let coef: Complex64 = b.iter().zip(out.iter()).map(|(x, y)| x.conj() * y).sum();
        for (o, x) in out.iter_mut().zip(b.iter()) {
            *o -= coef * x;
        }
    }
    out
}

/// Kronecker product A (x) B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a.get(i / br, j / bc) * b.get(i % br, j % bc)
    })
}

/// Which subsystem a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of an (m*n)x(m*n) matrix over the discarded subsystem.
pub fn partial_trace(
    rho: &ComplexMatrix,
    m: usize,
    n: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if rho.rows() != m * n || rho.cols() != m * n {
        return Err(Error::DimMismatch(format!(
            "partial trace expects a {}x{} matrix for dims ({m},{n}), got {}x{}",
            m * n,
            m * n,
            rho.rows(),
            rho.cols()
        )));
    }
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(m, m, |a, c| {
            (0..n).map(|b| rho.get(a * n + b, c * n + b)).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(n, n, |b, e| {
            (0..m).map(|a| rho.get(a * n + b, a * n + e)).sum()
        }),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(entries: &[f64]) -> RealSymMatrix {
        let d = entries.len();
        RealSymMatrix::new(RealMatrix::from_fn(d, d, |i, j| {
            if i == j {
                entries[i]
            } else {
                0.0
            }
        }))
        .unwrap()
    }

    #[test]
    fn sym_eigen_identity() {
        let eig = sym_eigen(&diag(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn sym_eigen_diagonal_sorted() {
        let eig = sym_eigen(&diag(&[1.0, 3.0, 2.0])).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 2.0, 1.0]);
        // eigenvector of the top eigenvalue is e_1
        assert!((eig.eigenvectors.get(1, 0).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sym_eigen_rejects_asymmetric() {
        let m = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0]]);
        match RealSymMatrix::new(m) {
            Err(Error::NotSymmetric(dev)) => assert!((dev - 1.5).abs() < 1e-15),
            other => panic!("expected NotSymmetric, got {other:?}"),
        }
    }

    #[test]
    fn sym_eigen_random_residuals_and_trace() {
        // Fixed 8x8 symmetric matrix; checks residual and trace identity.
        let d = 8;
        let mut seed = 88u64;
        let mut next = || {
            // xorshift: deterministic, good enough for a test matrix
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = RealMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = next();
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let trace = m.trace();
        let sym = RealSymMatrix::new(m.clone()).unwrap();
        let eig = sym_eigen(&sym).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        assert!((sum - trace).abs() < 1e-10);
        for k in 0..d {
            let v = eig.eigenvectors.column(k);
            let av = m.mul_vec(&v);
            let res: f64 = av
                .iter()
                .zip(v.iter())
                .map(|(a, x)| (a - eig.eigenvalues[k] * x).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(
                res <= 1e-9 * (1.0 + eig.eigenvalues[k].abs()),
                "residual {res}"
            );
        }
    }

    #[test]
    fn herm_eigen_pauli_z() {
        let sz = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ]);
        let eig = herm_eigen(&sz).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn herm_eigen_pauli_y() {
        let sy = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        let eig = herm_eigen(&sy).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
        // residual check with complex eigenvectors
        for k in 0..2 {
            let v = eig.eigenvectors.column(k);
            let av = sy.mul_vec(&v);
            let res: f64 = av
                .iter()
                .zip(v.iter())
                .map(|(a, x)| (a - eig.eigenvalues[k] * x).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-10);
        }
    }

    #[test]
    fn herm_eigen_bell_projector() {
        // |Phi+><Phi+| has spectrum (1, 0, 0, 0).
        let s = 1.0 / 2.0f64.sqrt();
        let phi = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let proj = ComplexMatrix::outer(&phi, &phi);
        let eig = herm_eigen(&proj).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        for k in 1..4 {
            assert!(eig.eigenvalues[k].abs() < 1e-12);
        }
    }

    #[test]
    fn herm_eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(matches!(herm_eigen(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(kron(&i2, &i3), ComplexMatrix::identity(6));

        let sz = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ]);
        let zz = kron(&sz, &sz);
        for i in 0..4 {
            let expect = if i == 0 || i == 3 { 1.0 } else { -1.0 };
            assert!((zz.get(i, i) - c(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_bell_marginal() {
        let s = 1.0 / 2.0f64.sqrt();
        let phi = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let proj = ComplexMatrix::outer(&phi, &phi);
        let ra = partial_trace(&proj, 2, 2, Subsystem::A).unwrap();
        let half_id = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(ra.max_abs_diff(&half_id) < 1e-12);
    }

    #[test]
    fn partial_trace_dim_mismatch() {
        let m = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&m, 2, 3, Subsystem::A),
            Err(Error::DimMismatch(_))
        ));
    }
}
