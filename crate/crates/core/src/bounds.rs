//! Lower bounds on the geometric measure of quantum discord.
//!
//! Two computable bounds are provided for a bipartite state with Bloch data
//! (x, y, T):
//!
//! * the tight spectral bound (2/m^2 n) (||x||^2 + (2/n)||T||^2 - sum of the
//!   m-1 largest eigenvalues of G), where G = x x^t + (2/n) T T^t, and
//! * the Luo-Fu bound tr(C C^t) minus the m largest eigenvalues of C C^t.
//!
//! The first always dominates the second; the machinery behind that claim
//! (the relaxed optimal isometry, its expansion coefficients, the closed form
//! of the maximum, and the eigenvalue interlacing of the bordered C C^t) is
//! implemented here as verifiable operations rather than trusted lemmas.

use crate::bloch::{BlochRep, CMatrix};
use crate::error::{Error, Result};
use crate::matrix::{sym_eigen, RealMatrix, RealSymMatrix};
use crate::tol::Tolerances;

/// G = x x^t + (2/n) T T^t with its spectral decomposition. G is positive
/// semidefinite by construction; eta is sorted non-increasing.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub g: RealSymMatrix,
    pub eta: Vec<f64>,
    /// Orthonormal eigenvectors of G as columns, ordered like `eta`.
    pub f: RealMatrix,
}

/// Everything the bound computation produces for one state.
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub m: usize,
    pub n: usize,
    /// Raw value of the tight bound (reported unclamped for diagnostics).
    pub tight_raw: f64,
    /// max(tight_raw, 0); geometric discord is nonnegative.
    pub tight: f64,
    pub luo_fu: f64,
    pub tr_cct: f64,
    /// Spectrum of G, non-increasing.
    pub eta: Vec<f64>,
    /// Spectrum of C C^t, non-increasing.
    pub lambda: Vec<f64>,
    /// tight_raw >= luo_fu - dominance tolerance.
    pub dominance_ok: bool,
}

/// Build G from a Bloch representation and diagonalise it.
pub fn gram_matrix(b: &BlochRep) -> Result<GramMatrix> {
    let dim = b.m * b.m - 1;
    let ttt = b.t.matmul(&b.t.transpose());
    let w = 2.0 / b.n as f64;
    let g = RealMatrix::from_fn(dim, dim, |i, j| b.x[i] * b.x[j] + w * ttt.get(i, j));
    let g = RealSymMatrix::new(g)?;
    let eig = sym_eigen(&g)?;
    Ok(GramMatrix {
        g,
        eta: eig.eigenvalues,
        f: eig.eigenvectors,
    })
}

/// Raw and clamped values of the tight bound.
#[derive(Clone, Copy, Debug)]
pub struct TightBound {
    pub raw: f64,
    pub clamped: f64,
}

/// The tight lower bound: (2/m^2 n) (||x||^2 + (2/n)||T||^2 - sum of the m-1
/// largest eta).
pub fn tight_bound(b: &BlochRep) -> Result<TightBound> {
    if b.m < 2 {
        return Err(Error::InvalidParameter(format!(
            "tight bound needs subsystem dimension m >= 2, got {}",
            b.m
        )));
    }
    let gram = gram_matrix(b)?;
    Ok(tight_bound_from_gram(b, &gram))
}

fn tight_bound_from_gram(b: &BlochRep, gram: &GramMatrix) -> TightBound {
    let (mf, nf) = (b.m as f64, b.n as f64);
    let top: f64 = gram.eta.iter().take(b.m - 1).sum();
    let raw = (2.0 / (mf * mf * nf)) * (b.x_norm_sq() + (2.0 / nf) * b.t_norm_sq() - top);
    TightBound {
        raw,
        clamped: raw.max(0.0),
    }
}

/// The Luo-Fu lower bound: tr(C C^t) - sum of the m largest eigenvalues of
/// C C^t.
pub fn luo_fu_bound(c: &CMatrix) -> Result<f64> {
    let lambda = cct_spectrum(c)?;
    let top: f64 = lambda.iter().take(c.m).sum();
    Ok(c.tr_cct() - top)
}

/// Non-increasing spectrum of C C^t.
pub fn cct_spectrum(c: &CMatrix) -> Result<Vec<f64>> {
    // C C^t is symmetric up to round-off from the matmul; symmetrize exactly.
    let cct = c.cct();
    let sym = RealSymMatrix::new(RealMatrix::from_fn(cct.rows(), cct.cols(), |i, j| {
        0.5 * (cct.get(i, j) + cct.get(j, i))
    }))?;
    Ok(sym_eigen(&sym)?.eigenvalues)
}

/// Full report for a state: both bounds, both spectra, dominance flag.
pub fn bounds_report(b: &BlochRep) -> Result<BoundsReport> {
    bounds_report_with(b, &Tolerances::default())
}

pub fn bounds_report_with(b: &BlochRep, tol: &Tolerances) -> Result<BoundsReport> {
    let gram = gram_matrix(b)?;
    let tight = tight_bound_from_gram(b, &gram);
    let c = crate::bloch::build_c_matrix(b);
    let lambda = cct_spectrum(&c)?;
    let top: f64 = lambda.iter().take(b.m).sum();
    let luo_fu = c.tr_cct() - top;
    Ok(BoundsReport {
        m: b.m,
        n: b.n,
        tight_raw: tight.raw,
        tight: tight.clamped,
        luo_fu,
        tr_cct: c.tr_cct(),
        eta: gram.eta,
        lambda,
        dominance_ok: tight.raw >= luo_fu - tol.dominance,
    })
}

/// The relaxed optimal isometry built from the eigenvectors of G, together
/// with the unit vectors e_k and the triangular coefficient table eps used to
/// expand them.
///
/// This is a bound certificate, not a measurement: for m > 2 the rows of A
/// need not be coherence vectors of any orthonormal basis of states, which is
/// exactly the relaxation that makes the bound computable.
#[derive(Clone, Debug)]
pub struct IsometryConstruction {
    pub m: usize,
    /// m - 1 unit vectors e_k in R^(m^2-1) as rows (the m-th is minus their
    /// sum and is folded into `a`).
    pub e: RealMatrix,
    /// eps[(j-1, k-1)] = coefficient of f_k in e_j; lower triangular.
    pub eps: RealMatrix,
    /// The m x m^2 relaxed isometry, rows (1/sqrt m)(1, sqrt(m-1) e_k).
    pub a: RealMatrix,
}

/// Coefficient table entries. Diagonal: eps_jj^2 = (m/(m-1)) (m-j)/(m-j+1),
/// positive branch; below-diagonal (i < j): the negative branch
/// -sqrt(m) / sqrt((m-1)(m-i+1)(m-i)). The first expansion vector is f_1
/// itself, so row one is (1, 0, ..., 0).
fn eps_entry(m: usize, j: usize, i: usize) -> f64 {
    debug_assert!(i <= j);
    let mf = m as f64;
    if j == 1 {
        return 1.0;
    }
    if i == j {
        let jf = j as f64;
        ((mf / (mf - 1.0)) * ((mf - jf) / (mf - jf + 1.0))).sqrt()
    } else {
        let fi = i as f64;
        -mf.sqrt() / ((mf - 1.0) * (mf - fi + 1.0) * (mf - fi)).sqrt()
    }
}

/// Build the relaxed optimal isometry for subsystem dimension m from the
/// first m - 1 eigenvectors of G (columns of `f`).
pub fn build_optimal_isometry(m: usize, f: &RealMatrix) -> Result<IsometryConstruction> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "isometry construction needs m >= 2, got {m}"
        )));
    }
    let dim = m * m - 1;
    if f.rows() != dim || f.cols() < m - 1 {
        return Err(Error::DimMismatch(format!(
            "need at least {} eigenvectors of length {dim}, got a {}x{} matrix",
            m - 1,
            f.rows(),
            f.cols()
        )));
    }
    let mut eps = RealMatrix::zeros(m - 1, m - 1);
    for j in 1..m {
        for i in 1..=j {
            eps.set(j - 1, i - 1, eps_entry(m, j, i));
        }
    }
    // e_j = sum_{k<=j} eps_jk f_k, as rows.
    let mut e = RealMatrix::zeros(m - 1, dim);
    for j in 0..(m - 1) {
        for k in 0..=j {
            let w = eps.get(j, k);
            if w == 0.0 {
                continue;
            }
            for r in 0..dim {
                e.set(j, r, e.get(j, r) + w * f.get(r, k));
            }
        }
    }
    // rows of A: (1/sqrt m)(1, sqrt(m-1) e_k) for k < m, and the closing row
    // (1/sqrt m)(1, -sqrt(m-1) sum_k e_k).
    let inv_sqrt_m = 1.0 / (m as f64).sqrt();
    let w = (m as f64 - 1.0).sqrt();
    let mut a = RealMatrix::zeros(m, m * m);
    for k in 0..m {
        a.set(k, 0, inv_sqrt_m);
        for r in 0..dim {
            let val = if k < m - 1 {
                e.get(k, r)
            } else {
                -(0..(m - 1)).map(|j| e.get(j, r)).sum::<f64>()
            };
            a.set(k, r + 1, inv_sqrt_m * w * val);
        }
    }
    Ok(IsometryConstruction { m, e, eps, a })
}

impl IsometryConstruction {
    /// Largest deviation of A A^t from the identity.
    pub fn isometry_deviation(&self) -> f64 {
        let aat = self.a.matmul(&self.a.transpose());
        aat.max_abs_diff(&RealMatrix::identity(self.m))
    }

    /// Left side of the closed-form coefficient identity for a given k
    /// (2 <= k <= m-1):
    /// sum_{j=k}^{m-1} eps_jk^2 + sum_{i=k}^{m-2} sum_{j>i}^{m-1} eps_ik eps_jk.
    /// Equals m / (2(m-1)) for every admissible k.
    pub fn coefficient_identity_lhs(&self, k: usize) -> f64 {
        let m = self.m;
        assert!((2..m).contains(&k), "k must lie in 2..=m-1");
        let mut s = 0.0;
        for j in k..m {
            let v = self.eps.get(j - 1, k - 1);
            s += v * v;
        }
        for i in k..(m - 1) {
            for j in (i + 1)..m {
                s += self.eps.get(i - 1, k - 1) * self.eps.get(j - 1, k - 1);
            }
        }
        s
    }
}

/// Evaluate the maximum of tr(A C C^t A^t) both ways: directly with the
/// constructed optimal A, and through the closed form
/// 1/mn + (2/n^2 m)||y||^2 + (2/m^2 n) sum_{j<m} eta_j.
/// The two must agree to tight tolerance; both are returned.
pub fn verify_closed_form_maximum(b: &BlochRep) -> Result<(f64, f64)> {
    let gram = gram_matrix(b)?;
    let iso = build_optimal_isometry(b.m, &gram.f)?;
    let c = crate::bloch::build_c_matrix(b);
    let ac = iso.a.matmul(c.mat());
    let direct = {
        let f = ac.frobenius_norm();
        f * f
    };
    let (mf, nf) = (b.m as f64, b.n as f64);
    let top: f64 = gram.eta.iter().take(b.m - 1).sum();
    let closed =
        1.0 / (mf * nf) + (2.0 / (nf * nf * mf)) * b.y_norm_sq() + (2.0 / (mf * mf * nf)) * top;
    Ok((direct, closed))
}

/// Check the Cauchy interlacing chain between the spectrum of C C^t and the
/// spectrum of its trailing principal block (2/m^2 n) G:
/// lam^up_1 <= eta'^up_1 <= lam^up_2 <= ... <= eta'^up_(m^2-1) <= lam^up_(m^2).
pub fn verify_interlacing(c: &CMatrix) -> Result<bool> {
    verify_interlacing_with(c, &Tolerances::default())
}

pub fn verify_interlacing_with(c: &CMatrix, tol: &Tolerances) -> Result<bool> {
    let lambda = cct_spectrum(c)?; // non-increasing, length m^2
                                   // The bordered form of C C^t has the scaled Gram matrix as its trailing
                                   // principal block; extract it directly rather than rebuilding from (x, T).
    let cct = c.cct();
    let dim = cct.rows() - 1;
    let block = RealSymMatrix::new(RealMatrix::from_fn(dim, dim, |i, j| {
        0.5 * (cct.get(i + 1, j + 1) + cct.get(j + 1, i + 1))
    }))?;
    let eta_prime = sym_eigen(&block)?.eigenvalues; // non-increasing, length m^2-1

    let mut lam_up = lambda.clone();
    lam_up.reverse();
    let mut eta_up = eta_prime.clone();
    eta_up.reverse();

    let t = tol.interlacing;
    for i in 0..eta_up.len() {
        if lam_up[i] > eta_up[i] + t {
            return Ok(false);
        }
        if eta_up[i] > lam_up[i + 1] + t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The border scalar a = 1/mn + (2/n^2 m)||y||^2 of the bordered C C^t form,
/// used in the trace bookkeeping identity
/// a + (2/m^2 n) sum_all eta_j = tr(C C^t) = sum_all lambda_i.
pub fn border_scalar(b: &BlochRep) -> f64 {
    let (mf, nf) = (b.m as f64, b.n as f64);
    1.0 / (mf * nf) + (2.0 / (nf * nf * mf)) * b.y_norm_sq()
}
