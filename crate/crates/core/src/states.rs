//! Density matrices, the worked two-qutrit example families, random test
//! ensembles and state file I/O.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{herm_eigen_with, ComplexMatrix};
use crate::rng::SeededRng;
use crate::tol::Tolerances;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// (all within the configured tolerances). Validation happens once, at
/// construction; operations downstream may assume a well-formed state.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    bipartition: Option<(usize, usize)>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tol(mat, &Tolerances::default())
    }

    pub fn with_tol(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimMismatch(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.hermiticity_deviation();
        if dev > tol.hermiticity * mat.max_abs() {
            return Err(Error::NotHermitian(dev));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.unit_trace || tr.im.abs() > tol.unit_trace {
            return Err(Error::TraceNotOne(tr.re));
        }
        let eig = herm_eigen_with(&mat, tol)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol.negativity {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(DensityMatrix {
            mat,
            bipartition: None,
        })
    }

    /// Declare how the Hilbert space factors into subsystems A and B.
    pub fn with_bipartition(mut self, m: usize, n: usize) -> Result<Self> {
        if m * n != self.dim() {
            return Err(Error::DimMismatch(format!(
                "bipartition {m}x{n} does not match dimension {}",
                self.dim()
            )));
        }
        if m < 2 || n < 2 {
            return Err(Error::InvalidParameter(format!(
                "bipartition requires both subsystem dimensions >= 2, got ({m},{n})"
            )));
        }
        self.bipartition = Some((m, n));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn bipartition(&self) -> Result<(usize, usize)> {
        self.bipartition
            .ok_or_else(|| Error::InvalidParameter("state has no declared bipartition".to_string()))
    }

    /// tr(rho^2).
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += (self.mat.get(i, j) * self.mat.get(j, i)).re;
            }
        }
        s
    }
}

/// A ket as a plain coefficient vector.
fn projector(ket: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::outer(ket, ket)
}

fn mix(parts: &[(f64, ComplexMatrix)]) -> ComplexMatrix {
    let (r, c) = (parts[0].1.rows(), parts[0].1.cols());
    let mut out = ComplexMatrix::zeros(r, c);
    for (w, m) in parts {
        out = &out + &m.scale_re(*w);
    }
    out
}

fn check_unit_interval(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "mixing parameter p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// The first two-qutrit example family: p |e><e| + (1-p) I/9, where |e> is the
/// uniform superposition of |11>, |22>, |10>, |01>, |02>, |20> (zero-indexed).
pub fn eq52_state(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let e = qutrit_pair_ket();
    let mixed = mix(&[
        (p, projector(&e)),
        ((1.0 - p) / 9.0, ComplexMatrix::identity(9)),
    ]);
    DensityMatrix::new(mixed)?.with_bipartition(3, 3)
}

/// The second two-qutrit example family: p |e1><e1| + (1-p) |e2><e2| with
/// |e1> = (1/2)|00> + (1/2)|11> + (1/sqrt2)|22> and |e2> the ket of
/// [`eq52_state`]. Rank <= 2 for every p.
pub fn eq53_state(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let mut e1 = vec![Complex64::new(0.0, 0.0); 9];
    e1[0] = Complex64::new(0.5, 0.0);
    e1[4] = Complex64::new(0.5, 0.0);
    e1[8] = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let e2 = qutrit_pair_ket();
    let mixed = mix(&[(p, projector(&e1)), (1.0 - p, projector(&e2))]);
    DensityMatrix::new(mixed)?.with_bipartition(3, 3)
}

fn qutrit_pair_ket() -> Vec<Complex64> {
    let w = Complex64::new(1.0 / 6.0f64.sqrt(), 0.0);
    let mut e = vec![Complex64::new(0.0, 0.0); 9];
    // |11> + |22> + |10> + |01> + |02> + |20>, index (a,b) -> 3a + b
    for idx in [4, 8, 3, 1, 2, 6] {
        e[idx] = w;
    }
    e
}

/// Two-qubit Werner-type mixture p |Phi+><Phi+| + (1-p) I/4.
pub fn werner_qubit(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let bell = bell_ket();
    let mixed = mix(&[
        (p, projector(&bell)),
        ((1.0 - p) / 4.0, ComplexMatrix::identity(4)),
    ]);
    DensityMatrix::new(mixed)?.with_bipartition(2, 2)
}

/// The maximally entangled two-qubit state |Phi+><Phi+|.
pub fn bell_state() -> DensityMatrix {
    let bell = bell_ket();
    DensityMatrix::new(projector(&bell))
        .and_then(|d| d.with_bipartition(2, 2))
        .expect("bell state is a valid density matrix")
}

fn bell_ket() -> Vec<Complex64> {
    let s = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    vec![s, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), s]
}

/// Product state rho_a (x) rho_b.
pub fn product_state(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let prod = crate::matrix::kron(a.matrix(), b.matrix());
    DensityMatrix::new(prod)?.with_bipartition(a.dim(), b.dim())
}

/// Random mixed state of the given rank: rho = W W^dagger / tr(W W^dagger)
/// with W a dim x rank standard complex Gaussian matrix. Deterministic per
/// seed. No bipartition is attached; use [`random_bipartite_state`] or
/// [`DensityMatrix::with_bipartition`].
pub fn random_state(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidParameter(format!(
            "rank must satisfy 1 <= rank <= dim, got rank {rank} for dim {dim}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let w = ComplexMatrix::from_fn(dim, rank, |_, _| rng.complex_normal());
    let ww = w.matmul(&w.adjoint());
    let tr = ww.trace().re;
    // tr > 0 almost surely; a zero trace would mean W itself was zero.
    if tr <= 0.0 {
        return Err(Error::Internal("degenerate Wishart sample".into()));
    }
    // Hermitize to kill round-off asymmetry from the matmul.
    DensityMatrix::new(ww.scale_re(1.0 / tr).hermitized())
}

/// Random bipartite state on an (m*n)-dimensional space with declared split.
pub fn random_bipartite_state(m: usize, n: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_state(m * n, rank, seed)?.with_bipartition(m, n)
}

/// Named single-parameter state families surfaced by the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Eq52,
    Eq53,
    Werner,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "eq52" => Ok(Family::Eq52),
            "eq53" => Ok(Family::Eq53),
            "werner" => Ok(Family::Werner),
            other => Err(Error::InvalidParameter(format!(
                "unknown family '{other}' (expected eq52, eq53 or werner)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Eq52 => "eq52",
            Family::Eq53 => "eq53",
            Family::Werner => "werner",
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Family::Eq52 | Family::Eq53 => (3, 3),
            Family::Werner => (2, 2),
        }
    }

    pub fn state(&self, p: f64) -> Result<DensityMatrix> {
        match self {
            Family::Eq52 => eq52_state(p),
            Family::Eq53 => eq53_state(p),
            Family::Werner => werner_qubit(p),
        }
    }
}

/// Serialise a state to the plain-text format: a header line `m n`, then
/// (m*n)^2 lines `i j re im` in row-major order. `#` starts a comment. Floats
/// are written with shortest-round-trip precision, so read(write(rho))
/// reproduces rho exactly.
pub fn write_state(rho: &DensityMatrix, path: &Path) -> Result<()> {
    let (m, n) = rho.bipartition()?;
    let d = rho.dim();
    let mut out = String::new();
    let _ = writeln!(out, "# gdiscord state file: dims {m}x{n}");
    let _ = writeln!(out, "{m} {n}");
    for i in 0..d {
        for j in 0..d {
            let z = rho.matrix().get(i, j);
            let _ = writeln!(out, "{i} {j} {:?} {:?}", z.re, z.im);
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Parse a state file written by [`write_state`] (or by hand). The matrix is
/// validated like any other density matrix; the named violation is reported.
pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)?;
    parse_state(&text)
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let mut header: Option<(usize, usize)> = None;
    let mut mat: Option<ComplexMatrix> = None;
    let mut filled = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if header.is_none() {
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected header 'm n', got '{content}'"),
                });
            }
            let m: usize = fields[0].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad subsystem dimension '{}'", fields[0]),
            })?;
            let n: usize = fields[1].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad subsystem dimension '{}'", fields[1]),
            })?;
            if m < 2 || n < 2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("subsystem dimensions must be >= 2, got {m} {n}"),
                });
            }
            header = Some((m, n));
            mat = Some(ComplexMatrix::zeros(m * n, m * n));
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 'i j re im', got '{content}'"),
            });
        }
        let (m, n) = header.unwrap();
        let d = m * n;
        let i: usize = fields[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad row index '{}'", fields[0]),
        })?;
        let j: usize = fields[1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad column index '{}'", fields[1]),
        })?;
        if i >= d || j >= d {
            return Err(Error::Parse {
                line,
                msg: format!("index ({i},{j}) out of range for dimension {d}"),
            });
        }
        let re: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad real part '{}'", fields[2]),
        })?;
        let im: f64 = fields[3].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad imaginary part '{}'", fields[3]),
        })?;
        mat.as_mut().unwrap().set(i, j, Complex64::new(re, im));
        filled += 1;
    }
    let (m, n) = header.ok_or(Error::Parse {
        line: 0,
        msg: "file contains no header line".to_string(),
    })?;
    let d = m * n;
    if filled != d * d {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {} entries, found {filled}", d * d),
        });
    }
    DensityMatrix::new(mat.unwrap())?.with_bipartition(m, n)
}
