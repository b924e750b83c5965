//! Independent verification oracles for the bounds: direct minimisation of
//! the measurement-dephasing distance over von Neumann measurements, the
//! Dakic closed form for two qubits, Monte-Carlo upper bounds for larger
//! subsystems, and zero-discord (classical-quantum) state construction.

use num_complex::Complex64;

use crate::bloch::BlochRep;
use crate::error::{Error, Result};
use crate::matrix::{kron, sym_eigen, ComplexMatrix, RealMatrix, RealSymMatrix};
use crate::rng::SeededRng;
use crate::states::DensityMatrix;
use crate::tol::Tolerances;

/// Default sphere-grid resolution for the qubit measurement search.
pub const DEFAULT_GRID: usize = 2000;
/// Default number of golden-section refinement rounds per angle.
pub const DEFAULT_REFINE: usize = 40;

/// An orthonormal basis of subsystem A defining a von Neumann measurement
/// (rank-one projectors summing to the identity).
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    m: usize,
    kets: Vec<Vec<Complex64>>,
}

impl MeasurementBasis {
    pub fn new(kets: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::with_tol(kets, &Tolerances::default())
    }

    pub fn with_tol(kets: Vec<Vec<Complex64>>, tol: &Tolerances) -> Result<Self> {
        let m = kets.len();
        if m == 0 || kets.iter().any(|k| k.len() != m) {
            return Err(Error::DimMismatch(
                "measurement basis needs m kets of length m".to_string(),
            ));
        }
        let mut dev: f64 = 0.0;
        for (i, ki) in kets.iter().enumerate() {
            for (j, kj) in kets.iter().enumerate() {
                let g: Complex64 = ki.iter().zip(kj.iter()).map(|(a, b)| a.conj() * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g - Complex64::new(expect, 0.0)).norm());
            }
        }
        if dev > tol.basis_gram {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(MeasurementBasis { m, kets })
    }

    /// The computational basis of dimension m.
    pub fn computational(m: usize) -> Self {
        let kets = (0..m)
            .map(|k| {
                let mut v = vec![Complex64::new(0.0, 0.0); m];
                v[k] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        MeasurementBasis { m, kets }
    }

    /// Qubit basis of the projectors (I +/- n.sigma)/2 for the Bloch
    /// direction (theta, phi).
    pub fn qubit_direction(theta: f64, phi: f64) -> Self {
        let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let phase = Complex64::new(phi.cos(), phi.sin());
        let up = vec![Complex64::new(ct, 0.0), phase * st];
        let down = vec![Complex64::new(st, 0.0), -phase * ct];
        MeasurementBasis {
            m: 2,
            kets: vec![up, down],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kets(&self) -> &[Vec<Complex64>] {
        &self.kets
    }

    fn projectors(&self) -> Vec<ComplexMatrix> {
        self.kets
            .iter()
            .map(|k| ComplexMatrix::outer(k, k))
            .collect()
    }
}

/// Dephase rho with the measurement: sum_k (P_k (x) I) rho (P_k (x) I).
/// The result is again a valid density matrix and the map is idempotent.
pub fn apply_measurement(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    let (m, n) = rho.bipartition()?;
    if basis.m() != m {
        return Err(Error::DimMismatch(format!(
            "measurement on a {}-dimensional subsystem, state has m = {m}",
            basis.m()
        )));
    }
    let out = dephased(rho.matrix(), basis, n);
    DensityMatrix::new(out.hermitized())?.with_bipartition(m, n)
}

fn dephased(rho: &ComplexMatrix, basis: &MeasurementBasis, n: usize) -> ComplexMatrix {
    let d = rho.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    let id_b = ComplexMatrix::identity(n);
    for p in basis.projectors() {
        let q = kron(&p, &id_b);
        out = &out + &q.matmul(rho).matmul(&q);
    }
    out
}

/// Squared Hilbert-Schmidt distance tr((rho - Pi(rho))^2) between the state
/// and its dephased image. Zero exactly when rho is classical-quantum in the
/// given basis.
pub fn distance_after_measurement(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    let (m, n) = rho.bipartition()?;
    if basis.m() != m {
        return Err(Error::DimMismatch(format!(
            "measurement on a {}-dimensional subsystem, state has m = {m}",
            basis.m()
        )));
    }
    Ok(distance_raw(rho.matrix(), basis, n))
}

fn distance_raw(rho: &ComplexMatrix, basis: &MeasurementBasis, n: usize) -> f64 {
    let chi = dephased(rho, basis, n);
    let diff = rho - &chi;
    let f = diff.frobenius_norm();
    f * f
}

/// Result of a measurement-space search.
#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Minimised squared distance.
    pub value: f64,
    /// The measurement achieving it.
    pub argmin: MeasurementBasis,
    /// Objective evaluations spent.
    pub evaluations: usize,
}

/// Exhaustive search over qubit von Neumann measurements: a Fibonacci sphere
/// grid of at least `grid` directions followed by `refine` rounds of
/// golden-section refinement in the spherical coordinates of the best grid
/// point. Only meaningful when subsystem A is a qubit; for a 2 x d state the
/// result equals the geometric discord.
pub fn minimize_qubit_measurement(
    rho: &DensityMatrix,
    grid: usize,
    refine: usize,
) -> Result<OracleResult> {
    let (m, n) = rho.bipartition()?;
    if m != 2 {
        return Err(Error::InvalidParameter(format!(
            "qubit measurement search needs m = 2, got m = {m}"
        )));
    }
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must be positive".into()));
    }
    let mat = rho.matrix();
    let mut evals = 0usize;
    let mut eval = |theta: f64, phi: f64| -> f64 {
        evals += 1;
        distance_raw(mat, &MeasurementBasis::qubit_direction(theta, phi), n)
    };

    // Fibonacci sphere: z uniform, azimuth stepping by the golden angle.
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let mut best = (f64::INFINITY, 0.0f64, 0.0f64);
    for i in 0..grid {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / grid as f64;
        let theta = z.acos();
        let phi = golden_angle * i as f64;
        let v = eval(theta, phi);
        if v < best.0 {
            best = (v, theta, phi);
        }
    }

    // Local refinement: alternate golden-section contraction steps on the
    // theta and phi intervals around the best grid point.
    let spacing = (4.0 * std::f64::consts::PI / grid as f64).sqrt();
    let (mut t_lo, mut t_hi) = (best.1 - 2.0 * spacing, best.1 + 2.0 * spacing);
    let (mut p_lo, mut p_hi) = (best.2 - 2.0 * spacing, best.2 + 2.0 * spacing);
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..refine {
        // theta step
        let c = t_hi - inv_phi * (t_hi - t_lo);
        let d = t_lo + inv_phi * (t_hi - t_lo);
        let fc = eval(c, best.2);
        let fd = eval(d, best.2);
        if fc < fd {
            t_hi = d;
            if fc < best.0 {
                best = (fc, c, best.2);
            }
        } else {
            t_lo = c;
            if fd < best.0 {
                best = (fd, d, best.2);
            }
        }
        // phi step
        let c = p_hi - inv_phi * (p_hi - p_lo);
        let d = p_lo + inv_phi * (p_hi - p_lo);
        let fc = eval(best.1, c);
        let fd = eval(best.1, d);
        if fc < fd {
            p_hi = d;
            if fc < best.0 {
                best = (fc, best.1, c);
            }
        } else {
            p_lo = c;
            if fd < best.0 {
                best = (fd, best.1, d);
            }
        }
    }

    Ok(OracleResult {
        value: best.0,
        argmin: MeasurementBasis::qubit_direction(best.1, best.2),
        evaluations: evals,
    })
}

/// Haar-random orthonormal columns for other modules (unitary sampling).
pub(crate) fn haar_basis_cols(m: usize, rng: &mut SeededRng) -> Vec<Vec<Complex64>> {
    haar_basis(m, rng)
}

/// Haar-random orthonormal basis: complex Gaussian matrix, orthonormalised
/// columns (modified Gram-Schmidt).
fn haar_basis(m: usize, rng: &mut SeededRng) -> Vec<Vec<Complex64>> {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.complex_normal()).collect())
            .collect();
        let mut ok = true;
        for i in 0..m {
            for j in 0..i {
                let (head, tail) = cols.split_at_mut(i);
                let coef: Complex64 = head[j]
                    .iter()
                    .zip(tail[0].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (t, h) in tail[0].iter_mut().zip(head[j].iter()) {
                    *t -= coef * h;
                }
            }
            let norm = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for z in &mut cols[i] {
                *z /= norm;
            }
        }
        if ok {
            return cols;
        }
        // resample in the (measure-zero) degenerate case
    }
}

/// Monte-Carlo upper bound on the geometric discord: the minimum dephasing
/// distance over `samples` Haar-random measurement bases. Deterministic for a
/// fixed seed (one ChaCha stream per sample index), so parallel and serial
/// evaluation orders agree. For m >= 3 this is an upper bound only; no exact
/// optimiser is attempted there.
pub fn sample_measurement_upper_bound(
    rho: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<OracleResult> {
    let (m, n) = rho.bipartition()?;
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "need at least one measurement sample".to_string(),
        ));
    }
    let mat = rho.matrix();
    let mut best: Option<(f64, MeasurementBasis)> = None;
    for i in 0..samples {
        let mut rng = SeededRng::stream(seed, i as u64);
        let basis = MeasurementBasis {
            m,
            kets: haar_basis(m, &mut rng),
        };
        let v = distance_raw(mat, &basis, n);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, basis));
        }
    }
    let (value, argmin) = best.unwrap();
    Ok(OracleResult {
        value,
        argmin,
        evaluations: samples,
    })
}

/// Exact two-qubit geometric discord, computed independently of the bounds
/// module: (1/4)(||x||^2 + ||T||^2 - k_max) with k_max the top eigenvalue of
/// K = x x^t + T T^t.
pub fn dakic_two_qubit(b: &BlochRep) -> Result<f64> {
    if b.m != 2 || b.n != 2 {
        return Err(Error::InvalidParameter(format!(
            "closed form applies to two qubits, got dims ({},{})",
            b.m, b.n
        )));
    }
    let ttt = b.t.matmul(&b.t.transpose());
    let k = RealSymMatrix::new(RealMatrix::from_fn(3, 3, |i, j| {
        b.x[i] * b.x[j] + ttt.get(i, j)
    }))?;
    let k_max = sym_eigen(&k)?.eigenvalues[0];
    Ok(0.25 * (b.x_norm_sq() + b.t_norm_sq() - k_max))
}

/// Build the classical-quantum (zero discord) state
/// chi = sum_k p_k |k><k| (x) rho_k from a probability vector, a measurement
/// basis on A and one B-state per term.
pub fn make_classical_quantum(
    p: &[f64],
    basis: &MeasurementBasis,
    rhos: &[DensityMatrix],
) -> Result<DensityMatrix> {
    let tol = Tolerances::default();
    if p.len() != rhos.len() || p.is_empty() || p.len() > basis.m() {
        return Err(Error::InvalidParameter(format!(
            "need matching probabilities and B-states (got {} and {}), at most m = {}",
            p.len(),
            rhos.len(),
            basis.m()
        )));
    }
    if p.iter().any(|&w| w < -tol.probability) {
        return Err(Error::InvalidParameter(
            "probabilities must be nonnegative".to_string(),
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol.probability {
        return Err(Error::InvalidParameter(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    let n = rhos[0].dim();
    if rhos.iter().any(|r| r.dim() != n) {
        return Err(Error::DimMismatch(
            "all B-states must share one dimension".to_string(),
        ));
    }
    let m = basis.m();
    let mut out = ComplexMatrix::zeros(m * n, m * n);
    for ((w, ket), rho_b) in p.iter().zip(basis.kets()).zip(rhos.iter()) {
        let proj = ComplexMatrix::outer(ket, ket);
        out = &out + &kron(&proj, rho_b.matrix()).scale_re(*w);
    }
    DensityMatrix::new(out.hermitized())?.with_bipartition(m, n)
}
