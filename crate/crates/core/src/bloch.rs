//! Generator bases of SU(d), the Bloch representation of bipartite states and
//! the coefficient matrix C in the orthonormal product operator basis.
//!
//! Conventions: generators are the generalized Gell-Mann matrices normalised
//! to tr(g_i g_j) = 2 delta_ij, ordered symmetric family first (lexicographic
//! (j,k), j < k), then antisymmetric, then diagonal. Every derived quantity
//! downstream (bounds, spectra) is invariant under reordering; tests pin that.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{partial_trace, ComplexMatrix, RealMatrix, Subsystem};
use crate::states::DensityMatrix;

/// Orthonormal generator basis of SU(d): d^2 - 1 Hermitian traceless matrices
/// with tr(g_i g_j) = 2 delta_ij.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "generator basis needs dimension >= 2, got {d}"
            )));
        }
        let mut gens = Vec::with_capacity(d * d - 1);
        // symmetric: E_jk + E_kj
        for j in 0..d {
            for k in (j + 1)..d {
                let mut g = ComplexMatrix::zeros(d, d);
                g.set(j, k, Complex64::new(1.0, 0.0));
                g.set(k, j, Complex64::new(1.0, 0.0));
                gens.push(g);
            }
        }
        // antisymmetric: -i E_jk + i E_kj
        for j in 0..d {
            for k in (j + 1)..d {
                let mut g = ComplexMatrix::zeros(d, d);
                g.set(j, k, Complex64::new(0.0, -1.0));
                g.set(k, j, Complex64::new(0.0, 1.0));
                gens.push(g);
            }
        }
        // diagonal: sqrt(2/(l(l+1))) (sum_{r<l} E_rr - l E_ll)
        for l in 1..d {
            let w = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
            let mut g = ComplexMatrix::zeros(d, d);
            for r in 0..l {
                g.set(r, r, Complex64::new(w, 0.0));
            }
            g.set(l, l, Complex64::new(-w * l as f64, 0.0));
            gens.push(g);
        }
        debug_assert!(gens.iter().all(|g| g.trace().norm() < 1e-14));
        Ok(GeneratorBasis {
            dim: d,
            generators: gens,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, i: usize) -> &ComplexMatrix {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    /// Same generators in a permuted order (for order-invariance checks).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.generators.len() {
            return Err(Error::InvalidParameter(
                "permutation length does not match basis size".to_string(),
            ));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidParameter("not a permutation".to_string()));
            }
            seen[p] = true;
        }
        Ok(GeneratorBasis {
            dim: self.dim,
            generators: perm.iter().map(|&p| self.generators[p].clone()).collect(),
        })
    }
}

/// Convenience alias for the default construction.
pub fn build_generator_basis(d: usize) -> Result<GeneratorBasis> {
    GeneratorBasis::new(d)
}

/// Bloch representation of a bipartite state: coherence vectors x (length
/// m^2-1) and y (length n^2-1) plus the correlation matrix T.
#[derive(Clone, Debug)]
pub struct BlochRep {
    pub m: usize,
    pub n: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: RealMatrix,
}

impl BlochRep {
    pub fn x_norm_sq(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum()
    }

    pub fn y_norm_sq(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum()
    }

    pub fn t_norm_sq(&self) -> f64 {
        let f = self.t.frobenius_norm();
        f * f
    }
}

/// tr(rho (A (x) B)) without materialising the Kronecker product.
fn trace_rho_kron(
    rho: &ComplexMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    n: usize,
) -> Complex64 {
    let m = a.rows();
    let mut s = Complex64::new(0.0, 0.0);
    for ia in 0..m {
        for ic in 0..m {
            let aval = a.get(ic, ia);
            if aval == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for ib in 0..n {
                for ie in 0..n {
                    let bval = b.get(ie, ib);
                    if bval == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    inner += rho.get(ia * n + ib, ic * n + ie) * bval;
                }
            }
            s += aval * inner;
        }
    }
    s
}

fn trace_rho_kron_left(rho: &ComplexMatrix, a: &ComplexMatrix, n: usize) -> Complex64 {
    // tr(rho (A (x) I_n))
    let m = a.rows();
    let mut s = Complex64::new(0.0, 0.0);
    for ia in 0..m {
        for ic in 0..m {
            let aval = a.get(ic, ia);
            if aval == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for ib in 0..n {
                inner += rho.get(ia * n + ib, ic * n + ib);
            }
            s += aval * inner;
        }
    }
    s
}

fn trace_rho_kron_right(rho: &ComplexMatrix, b: &ComplexMatrix, m: usize) -> Complex64 {
    // tr(rho (I_m (x) B))
    let n = b.rows();
    let mut s = Complex64::new(0.0, 0.0);
    for ib in 0..n {
        for ie in 0..n {
            let bval = b.get(ie, ib);
            if bval == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for ia in 0..m {
                inner += rho.get(ia * n + ib, ia * n + ie);
            }
            s += bval * inner;
        }
    }
    s
}

/// Bloch decomposition with the crate's fixed generator ordering.
pub fn decompose(rho: &DensityMatrix, m: usize, n: usize) -> Result<BlochRep> {
    let ga = GeneratorBasis::new(m)?;
    let gb = GeneratorBasis::new(n)?;
    decompose_with(rho, &ga, &gb)
}

/// Bloch decomposition in explicitly supplied generator bases.
pub fn decompose_with(
    rho: &DensityMatrix,
    basis_a: &GeneratorBasis,
    basis_b: &GeneratorBasis,
) -> Result<BlochRep> {
    let (m, n) = (basis_a.dim(), basis_b.dim());
    if rho.dim() != m * n {
        return Err(Error::DimMismatch(format!(
            "state dimension {} does not factor as {m}x{n}",
            rho.dim()
        )));
    }
    let mat = rho.matrix();
    let x: Vec<f64> = basis_a
        .generators()
        .iter()
        .map(|g| (m as f64 / 2.0) * trace_rho_kron_left(mat, g, n).re)
        .collect();
    let y: Vec<f64> = basis_b
        .generators()
        .iter()
        .map(|g| (n as f64 / 2.0) * trace_rho_kron_right(mat, g, m).re)
        .collect();
    let scale = (m * n) as f64 / 4.0;
    let t = RealMatrix::from_fn(m * m - 1, n * n - 1, |i, j| {
        scale * trace_rho_kron(mat, basis_a.generator(i), basis_b.generator(j), n).re
    });
    Ok(BlochRep { m, n, x, y, t })
}

/// Reassemble a matrix from a Bloch representation. The result is Hermitian
/// with unit trace by construction, but positivity is not guaranteed: not
/// every (x, y, T) tuple corresponds to a physical state. Callers wanting a
/// validated state should feed the output through `DensityMatrix::new`.
pub fn reconstruct(b: &BlochRep) -> Result<ComplexMatrix> {
    reconstruct_with(b, &GeneratorBasis::new(b.m)?, &GeneratorBasis::new(b.n)?)
}

pub fn reconstruct_with(
    b: &BlochRep,
    basis_a: &GeneratorBasis,
    basis_b: &GeneratorBasis,
) -> Result<ComplexMatrix> {
    let (m, n) = (b.m, b.n);
    if basis_a.dim() != m || basis_b.dim() != n {
        return Err(Error::DimMismatch(
            "generator bases do not match the Bloch dimensions".to_string(),
        ));
    }
    if b.x.len() != m * m - 1 || b.y.len() != n * n - 1 {
        return Err(Error::DimMismatch(format!(
            "coherence vector lengths ({}, {}) do not match dims ({m},{n})",
            b.x.len(),
            b.y.len()
        )));
    }
    if b.t.rows() != m * m - 1 || b.t.cols() != n * n - 1 {
        return Err(Error::DimMismatch(format!(
            "correlation matrix is {}x{}, expected {}x{}",
            b.t.rows(),
            b.t.cols(),
            m * m - 1,
            n * n - 1
        )));
    }
    let d = m * n;
    let mut out = ComplexMatrix::identity(d);
    let id_b = ComplexMatrix::identity(n);
    let id_a = ComplexMatrix::identity(m);
    for (i, g) in basis_a.generators().iter().enumerate() {
        if b.x[i] != 0.0 {
            out = &out + &crate::matrix::kron(g, &id_b).scale_re(b.x[i]);
        }
    }
    for (j, g) in basis_b.generators().iter().enumerate() {
        if b.y[j] != 0.0 {
            out = &out + &crate::matrix::kron(&id_a, g).scale_re(b.y[j]);
        }
    }
    for i in 0..(m * m - 1) {
        for j in 0..(n * n - 1) {
            let t = b.t.get(i, j);
            if t != 0.0 {
                out = &out
                    + &crate::matrix::kron(basis_a.generator(i), basis_b.generator(j)).scale_re(t);
            }
        }
    }
    Ok(out.scale_re(1.0 / d as f64))
}

/// The m^2 x n^2 coefficient matrix C of the state in the orthonormal product
/// basis X_1 = I/sqrt(m), X_i = g_{i-1}/sqrt(2) (and likewise for Y), laid out
/// in blocks from the Bloch data.
#[derive(Clone, Debug)]
pub struct CMatrix {
    pub m: usize,
    pub n: usize,
    mat: RealMatrix,
}

impl CMatrix {
    pub fn mat(&self) -> &RealMatrix {
        &self.mat
    }

    /// tr(C C^t), the squared Frobenius norm of C. Equals tr(rho^2) when C
    /// came from a state (Parseval in the orthonormal product basis).
    pub fn tr_cct(&self) -> f64 {
        let f = self.mat.frobenius_norm();
        f * f
    }

    /// The m^2 x m^2 Gram matrix C C^t.
    pub fn cct(&self) -> RealMatrix {
        self.mat.matmul(&self.mat.transpose())
    }
}

/// Assemble C from a Bloch representation:
/// top-left 1/sqrt(mn), top row sqrt(2)/(n sqrt(m)) y^t,
/// left column sqrt(2)/(m sqrt(n)) x, bulk (2/mn) T.
pub fn build_c_matrix(b: &BlochRep) -> CMatrix {
    let (m, n) = (b.m, b.n);
    let (mf, nf) = (m as f64, n as f64);
    let mut mat = RealMatrix::zeros(m * m, n * n);
    mat.set(0, 0, 1.0 / (mf * nf).sqrt());
    let wy = 2.0f64.sqrt() / (nf * mf.sqrt());
    for j in 0..(n * n - 1) {
        mat.set(0, j + 1, wy * b.y[j]);
    }
    let wx = 2.0f64.sqrt() / (mf * nf.sqrt());
    for i in 0..(m * m - 1) {
        mat.set(i + 1, 0, wx * b.x[i]);
    }
    let wt = 2.0 / (mf * nf);
    for i in 0..(m * m - 1) {
        for j in 0..(n * n - 1) {
            mat.set(i + 1, j + 1, wt * b.t.get(i, j));
        }
    }
    CMatrix { m, n, mat }
}

/// Marginal coherence vector computed through the partial trace, used as an
/// independent cross-check of `decompose`.
pub fn marginal_coherence(
    rho: &DensityMatrix,
    m: usize,
    n: usize,
    keep: Subsystem,
) -> Result<Vec<f64>> {
    let reduced = partial_trace(rho.matrix(), m, n, keep)?;
    let d = match keep {
        Subsystem::A => m,
        Subsystem::B => n,
    };
    let basis = GeneratorBasis::new(d)?;
    Ok(basis
        .generators()
        .iter()
        .map(|g| {
            let prod = reduced.matmul(g);
            (d as f64 / 2.0) * prod.trace().re
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, random_bipartite_state};
    use crate::tol::Tolerances;

    #[test]
    fn su2_basis_is_pauli() {
        let basis = GeneratorBasis::new(2).unwrap();
        assert_eq!(basis.len(), 3);
        let sx = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ]);
        let sy = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ]);
        let sz = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ]);
        assert!(basis.generator(0).max_abs_diff(&sx) < 1e-15);
        assert!(basis.generator(1).max_abs_diff(&sy) < 1e-15);
        assert!(basis.generator(2).max_abs_diff(&sz) < 1e-15);
    }

    #[test]
    fn basis_rejects_dim_one() {
        assert!(GeneratorBasis::new(1).is_err());
    }

    #[test]
    fn basis_orthonormality_and_tracelessness() {
        for d in 2..=9usize {
            let basis = GeneratorBasis::new(d).unwrap();
            assert_eq!(basis.len(), d * d - 1);
            for (i, gi) in basis.generators().iter().enumerate() {
                assert!(
                    gi.trace().norm() <= 1e-12,
                    "trace of generator {i} in d={d}"
                );
                assert!(gi.hermiticity_deviation() <= 1e-12);
                for (j, gj) in basis.generators().iter().enumerate() {
                    let prod = gi.matmul(gj);
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!(
                        (prod.trace().re - expect).abs() <= 1e-12,
                        "gram ({i},{j}) in d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn maximally_mixed_decomposes_to_zero() {
        let rho = crate::states::DensityMatrix::new(ComplexMatrix::identity(6).scale_re(1.0 / 6.0))
            .unwrap()
            .with_bipartition(2, 3)
            .unwrap();
        let b = decompose(&rho, 2, 3).unwrap();
        assert!(b.x.iter().all(|v| v.abs() < 1e-14));
        assert!(b.y.iter().all(|v| v.abs() < 1e-14));
        assert!(b.t.max_abs() < 1e-14);
    }

    #[test]
    fn bell_bloch_rep_is_diagonal() {
        let b = decompose(&bell_state(), 2, 2).unwrap();
        assert!(b.x.iter().all(|v| v.abs() < 1e-14));
        assert!(b.y.iter().all(|v| v.abs() < 1e-14));
        let expect = RealMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert!(b.t.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn round_trip_reproduces_state() {
        for (m, n, seed) in [(2, 2, 1u64), (2, 3, 2), (3, 3, 3)] {
            let rho = random_bipartite_state(m, n, m * n, seed).unwrap();
            let b = decompose(&rho, m, n).unwrap();
            let back = reconstruct(&b).unwrap();
            assert!(back.max_abs_diff(rho.matrix()) < 1e-10);
        }
    }

    #[test]
    fn reconstruct_zero_bloch_is_maximally_mixed() {
        let b = BlochRep {
            m: 2,
            n: 2,
            x: vec![0.0; 3],
            y: vec![0.0; 3],
            t: RealMatrix::zeros(3, 3),
        };
        let rho = reconstruct(&b).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::identity(4).scale_re(0.25)) < 1e-15);
    }

    #[test]
    fn reconstruct_rejects_mismatched_dims() {
        let b = BlochRep {
            m: 2,
            n: 2,
            x: vec![0.0; 8],
            y: vec![0.0; 3],
            t: RealMatrix::zeros(3, 3),
        };
        assert!(reconstruct(&b).is_err());
    }

    #[test]
    fn bell_reconstruction_spectrum() {
        let b = decompose(&bell_state(), 2, 2).unwrap();
        let back = reconstruct(&b).unwrap();
        let eig = crate::matrix::herm_eigen_with(&back, &Tolerances::default()).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-9);
        for v in &eig.eigenvalues[1..] {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn c_matrix_maximally_mixed() {
        let rho = crate::states::DensityMatrix::new(ComplexMatrix::identity(4).scale_re(0.25))
            .unwrap()
            .with_bipartition(2, 2)
            .unwrap();
        let c = build_c_matrix(&decompose(&rho, 2, 2).unwrap());
        assert!((c.mat().get(0, 0) - 0.5).abs() < 1e-15);
        let mut rest = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) != (0, 0) {
                    rest = rest.max(c.mat().get(i, j).abs());
                }
            }
        }
        assert!(rest < 1e-14);
    }

    #[test]
    fn c_matrix_entries_match_product_basis_traces() {
        let (m, n) = (2, 3);
        let rho = random_bipartite_state(m, n, 4, 5).unwrap();
        let b = decompose(&rho, m, n).unwrap();
        let c = build_c_matrix(&b);
        let ga = GeneratorBasis::new(m).unwrap();
        let gb = GeneratorBasis::new(n).unwrap();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        let xs: Vec<ComplexMatrix> =
            std::iter::once(ComplexMatrix::identity(m).scale_re(1.0 / (m as f64).sqrt()))
                .chain(ga.generators().iter().map(|g| g.scale_re(inv_sqrt2)))
                .collect();
        let ys: Vec<ComplexMatrix> =
            std::iter::once(ComplexMatrix::identity(n).scale_re(1.0 / (n as f64).sqrt()))
                .chain(gb.generators().iter().map(|g| g.scale_re(inv_sqrt2)))
                .collect();
        for (i, xi) in xs.iter().enumerate() {
            for (j, yj) in ys.iter().enumerate() {
                let direct = trace_rho_kron(rho.matrix(), xi, yj, n).re;
                assert!(
                    (c.mat().get(i, j) - direct).abs() < 1e-10,
                    "C[{i}][{j}] mismatch"
                );
            }
        }
    }

    #[test]
    fn bell_tr_cct_is_one() {
        let c = build_c_matrix(&decompose(&bell_state(), 2, 2).unwrap());
        assert!((c.tr_cct() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn purity_bridge_and_eq19() {
        for (m, n, seed) in [(2, 2, 21u64), (2, 3, 22), (3, 3, 23), (3, 4, 24)] {
            let rho = random_bipartite_state(m, n, 2, seed).unwrap();
            let b = decompose(&rho, m, n).unwrap();
            let c = build_c_matrix(&b);
            let (mf, nf) = (m as f64, n as f64);
            let eq19 = 1.0 / (mf * nf)
                + 2.0 * b.y_norm_sq() / (nf * nf * mf)
                + 2.0 * b.x_norm_sq() / (mf * mf * nf)
                + 4.0 * b.t_norm_sq() / (mf * mf * nf * nf);
            assert!((c.tr_cct() - eq19).abs() < 1e-10);
            assert!((c.tr_cct() - rho.purity()).abs() < 1e-10);
        }
    }

    #[test]
    fn marginal_consistency() {
        let (m, n) = (3, 2);
        let rho = random_bipartite_state(m, n, 3, 17).unwrap();
        let b = decompose(&rho, m, n).unwrap();
        let xa = marginal_coherence(&rho, m, n, Subsystem::A).unwrap();
        let yb = marginal_coherence(&rho, m, n, Subsystem::B).unwrap();
        for (u, v) in b.x.iter().zip(xa.iter()) {
            assert!((u - v).abs() < 1e-10);
        }
        for (u, v) in b.y.iter().zip(yb.iter()) {
            assert!((u - v).abs() < 1e-10);
        }
    }
}
