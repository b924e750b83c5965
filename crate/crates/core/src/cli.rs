//! Command-line surface: single-state reports, parameter sweeps written as
//! CSV, the self-check suite and Bloch decomposition dumps.
//!
//! Everything here is a pure function from inputs to strings/rows so the
//! binary stays a thin argument-parsing shell and tests can pin outputs
//! byte-for-byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::bloch::{build_c_matrix, decompose, reconstruct};
use crate::bounds::{
    border_scalar, bounds_report, build_optimal_isometry, gram_matrix, verify_closed_form_maximum,
    verify_interlacing, BoundsReport,
};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::oracle::{
    minimize_qubit_measurement, sample_measurement_upper_bound, DEFAULT_GRID, DEFAULT_REFINE,
};
use crate::rng::SeededRng;
use crate::states::{random_bipartite_state, read_state, DensityMatrix, Family};
use crate::tol::Tolerances;

/// Monte-Carlo samples used for the optional oracle column when subsystem A
/// is not a qubit (qubit families get the exact sphere search instead).
pub const SWEEP_ORACLE_SAMPLES: usize = 200;

/// All supported random-test bipartitions.
pub const SUPPORTED_DIMS: [(usize, usize); 5] = [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4)];

/// 17 significant digits, enough to reproduce an f64 exactly.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// What `bounds` and `decompose` operate on.
pub enum StateInput<'a> {
    Family { family: Family, p: f64 },
    File(&'a Path),
}

impl StateInput<'_> {
    pub fn load(&self) -> Result<(DensityMatrix, String)> {
        match self {
            StateInput::Family { family, p } => {
                Ok((family.state(*p)?, format!("{}(p={})", family.name(), p)))
            }
            StateInput::File(path) => Ok((read_state(path)?, path.display().to_string())),
        }
    }
}

/// Compute the full bounds report for a state.
pub fn state_report(rho: &DensityMatrix) -> Result<BoundsReport> {
    let (m, n) = rho.bipartition()?;
    bounds_report(&decompose(rho, m, n)?)
}

/// Human-readable single-state report.
pub fn run_bounds(input: &StateInput) -> Result<String> {
    let (rho, label) = input.load()?;
    let report = state_report(&rho)?;
    let mut out = String::new();
    let _ = writeln!(out, "state:                {label}");
    let _ = writeln!(out, "dims:                 {}x{}", report.m, report.n);
    let _ = writeln!(out, "tight bound (raw):    {}", fmt17(report.tight_raw));
    let _ = writeln!(out, "tight bound:          {}", fmt17(report.tight));
    let _ = writeln!(out, "luo-fu bound:         {}", fmt17(report.luo_fu));
    let _ = writeln!(out, "tr(CC^t):             {}", fmt17(report.tr_cct));
    let _ = writeln!(out, "eta (G spectrum):     {}", join17(&report.eta));
    let _ = writeln!(out, "lambda (CC^t):        {}", join17(&report.lambda));
    let _ = writeln!(out, "dominance ok:         {}", report.dominance_ok);
    Ok(out)
}

fn join17(vals: &[f64]) -> String {
    vals.iter().map(|v| fmt17(*v)).collect::<Vec<_>>().join(" ")
}

/// Bloch decomposition dump: x, y, T and the G spectrum.
pub fn run_decompose(input: &StateInput) -> Result<String> {
    let (rho, label) = input.load()?;
    let (m, n) = rho.bipartition()?;
    let b = decompose(&rho, m, n)?;
    let gram = gram_matrix(&b)?;
    let mut out = String::new();
    let _ = writeln!(out, "state:  {label}");
    let _ = writeln!(out, "dims:   {m}x{n}");
    let _ = writeln!(out, "x:      {}", join17(&b.x));
    let _ = writeln!(out, "y:      {}", join17(&b.y));
    let _ = writeln!(out, "T:");
    for i in 0..b.t.rows() {
        let row: Vec<f64> = (0..b.t.cols()).map(|j| b.t.get(i, j)).collect();
        let _ = writeln!(out, "  {}", join17(&row));
    }
    let _ = writeln!(out, "eta:    {}", join17(&gram.eta));
    Ok(out)
}

/// A single-parameter sweep over one of the named families.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub family: Family,
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub include_oracle: bool,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_min)
            || !(0.0..=1.0).contains(&self.p_max)
            || self.p_min > self.p_max
        {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= p_min <= p_max <= 1, got [{}, {}]",
                self.p_min, self.p_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 sweep steps, got {}",
                self.steps
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.p_max
                } else {
                    self.p_min + (self.p_max - self.p_min) * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub p: f64,
    pub tight_raw: f64,
    pub tight: f64,
    pub luo_fu: f64,
    pub oracle_upper: Option<f64>,
}

/// Evaluate the sweep. Rows are ordered by p and each row matches what a
/// single-point `bounds` run at that p reports.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let (m, _) = spec.family.dims();
    let mut rows = Vec::with_capacity(spec.steps);
    for p in spec.grid() {
        let rho = spec.family.state(p)?;
        let report = state_report(&rho)?;
        let oracle_upper = if spec.include_oracle {
            Some(if m == 2 {
                minimize_qubit_measurement(&rho, DEFAULT_GRID, DEFAULT_REFINE)?.value
            } else {
                sample_measurement_upper_bound(&rho, SWEEP_ORACLE_SAMPLES, spec.seed)?.value
            })
        } else {
            None
        };
        rows.push(SweepRow {
            p,
            tight_raw: report.tight_raw,
            tight: report.tight,
            luo_fu: report.luo_fu,
            oracle_upper,
        });
    }
    Ok(rows)
}

/// Render sweep rows as CSV: header, 17-significant-digit values, LF line
/// endings. Identical spec and seed give byte-identical output.
pub fn sweep_csv(spec: &SweepSpec) -> Result<String> {
    let rows = sweep_rows(spec)?;
    let mut out = String::new();
    if spec.include_oracle {
        out.push_str("p,tight_raw,tight,luo_fu,oracle_upper\n");
    } else {
        out.push_str("p,tight_raw,tight,luo_fu\n");
    }
    for r in rows {
        out.push_str(&fmt17(r.p));
        out.push(',');
        out.push_str(&fmt17(r.tight_raw));
        out.push(',');
        out.push_str(&fmt17(r.tight));
        out.push(',');
        out.push_str(&fmt17(r.luo_fu));
        if let Some(o) = r.oracle_upper {
            out.push(',');
            out.push_str(&fmt17(o));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Run the sweep and write the CSV file.
pub fn run_sweep(spec: &SweepSpec, out_path: &Path) -> Result<()> {
    let csv = sweep_csv(spec)?;
    fs::write(out_path, csv)?;
    Ok(())
}

/// One named check aggregated over all verify instances.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub worst: f64,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult {
            name,
            passed: 0,
            total: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, deviation: f64, bound: f64) {
        self.total += 1;
        if deviation <= bound {
            self.passed += 1;
        }
        if deviation > self.worst {
            self.worst = deviation;
        }
    }

    fn record_flag(&mut self, ok: bool) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.worst = 1.0;
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub dims: Vec<(usize, usize)>,
    pub instances: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let dims: Vec<String> = self.dims.iter().map(|(m, n)| format!("{m}x{n}")).collect();
        let _ = writeln!(
            out,
            "verify: dims [{}], {} instances per dim, seed {}",
            dims.join(", "),
            self.instances,
            self.seed
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:<24} {:>4}/{:<4}  worst {:.3e}  [{}]",
                c.name,
                c.passed,
                c.total,
                c.worst,
                if c.ok() { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "result: {}", if self.ok() { "OK" } else { "FAILED" });
        out
    }
}

fn dims_supported(dims: &[(usize, usize)]) -> Result<()> {
    for d in dims {
        if !SUPPORTED_DIMS.contains(d) {
            return Err(Error::InvalidParameter(format!(
                "unsupported dims {}x{} (supported: 2x2, 2x3, 3x2, 3x3, 3x4)",
                d.0, d.1
            )));
        }
    }
    if dims.is_empty() {
        return Err(Error::InvalidParameter("no dims requested".to_string()));
    }
    Ok(())
}

/// The whole invariant suite over seeded random states: decomposition
/// self-consistency, the coefficient and closed-form identities, isometry
/// validity, bound dominance, eigenvalue interlacing, trace bookkeeping,
/// local-unitary covariance and the oracle sandwich.
pub fn run_verify(dims: &[(usize, usize)], instances: usize, seed: u64) -> Result<VerifyReport> {
    dims_supported(dims)?;
    if instances == 0 {
        return Err(Error::InvalidParameter("need at least one instance".into()));
    }
    let tol = Tolerances::default();

    let mut round_trip = CheckResult::new("bloch_round_trip");
    let mut eq_purity = CheckResult::new("purity_bridge");
    let mut eq_norms = CheckResult::new("norm_identity");
    let mut coeff = CheckResult::new("coefficient_identity");
    let mut closed = CheckResult::new("closed_form_maximum");
    let mut isometry = CheckResult::new("isometry");
    let mut dominance = CheckResult::new("dominance");
    let mut interlacing = CheckResult::new("interlacing");
    let mut bookkeeping = CheckResult::new("trace_bookkeeping");
    let mut covariance = CheckResult::new("local_unitary_covariance");
    let mut sandwich = CheckResult::new("oracle_sandwich");

    for (di, &(m, n)) in dims.iter().enumerate() {
        // The coefficient identity only depends on m.
        if m >= 3 {
            let iso = build_optimal_isometry(m, &crate::matrix::RealMatrix::identity(m * m - 1))?;
            let expect = m as f64 / (2.0 * (m as f64 - 1.0));
            for k in 2..m {
                coeff.record(
                    (iso.coefficient_identity_lhs(k) - expect).abs(),
                    tol.coefficient_identity,
                );
            }
        }

        for inst in 0..instances {
            let state_seed = seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add((di * 100_000 + inst) as u64);
            let rank = 1 + inst % (m * n);
            let rho = random_bipartite_state(m, n, rank, state_seed)?;
            let b = decompose(&rho, m, n)?;

            let back = reconstruct(&b)?;
            round_trip.record(back.max_abs_diff(rho.matrix()), tol.round_trip);

            let c = build_c_matrix(&b);
            eq_purity.record((c.tr_cct() - rho.purity()).abs(), tol.round_trip);
            let (mf, nf) = (m as f64, n as f64);
            let eq19 = 1.0 / (mf * nf)
                + 2.0 * b.y_norm_sq() / (nf * nf * mf)
                + 2.0 * b.x_norm_sq() / (mf * mf * nf)
                + 4.0 * b.t_norm_sq() / (mf * mf * nf * nf);
            eq_norms.record((c.tr_cct() - eq19).abs(), tol.round_trip);

            let gram = gram_matrix(&b)?;
            let iso = build_optimal_isometry(m, &gram.f)?;
            isometry.record(iso.isometry_deviation(), tol.identity_check);

            let (direct, closed_val) = verify_closed_form_maximum(&b)?;
            closed.record((direct - closed_val).abs(), tol.identity_check);

            let report = bounds_report(&b)?;
            dominance.record_flag(report.tight_raw >= report.luo_fu - tol.dominance);
            interlacing.record_flag(verify_interlacing(&c)?);

            let a = border_scalar(&b);
            let eta_sum: f64 = report.eta.iter().sum();
            let lam_sum: f64 = report.lambda.iter().sum();
            let book_dev = (a + (2.0 / (mf * mf * nf)) * eta_sum - report.tr_cct)
                .abs()
                .max((lam_sum - report.tr_cct).abs());
            bookkeeping.record(book_dev, tol.identity_check);

            // Local-unitary covariance: conjugating by U_A (x) U_B moves
            // neither bound.
            let mut rng = SeededRng::stream(state_seed, 7);
            let ua = haar_unitary(m, &mut rng);
            let ub = haar_unitary(n, &mut rng);
            let u = crate::matrix::kron(&ua, &ub);
            let rotated = u.matmul(rho.matrix()).matmul(&u.adjoint()).hermitized();
            let rho_rot = DensityMatrix::new(rotated)?.with_bipartition(m, n)?;
            let report_rot = bounds_report(&decompose(&rho_rot, m, n)?)?;
            let cov_dev = (report.tight_raw - report_rot.tight_raw)
                .abs()
                .max((report.luo_fu - report_rot.luo_fu).abs());
            covariance.record(cov_dev, 1e-8);

            // Sandwich: the tight bound may not exceed any measured distance.
            let upper = if m == 2 {
                minimize_qubit_measurement(&rho, 600, 30)?.value
            } else {
                sample_measurement_upper_bound(&rho, 100, state_seed)?.value
            };
            sandwich.record_flag(report.tight <= upper + 1e-6);
        }
    }

    Ok(VerifyReport {
        dims: dims.to_vec(),
        instances,
        seed,
        checks: vec![
            round_trip,
            eq_purity,
            eq_norms,
            coeff,
            closed,
            isometry,
            dominance,
            interlacing,
            bookkeeping,
            covariance,
            sandwich,
        ],
    })
}

fn haar_unitary(d: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let cols = crate::oracle::haar_basis_cols(d, rng);
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Parse a dims list like "2x2,3x3".
pub fn parse_dims(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(|part| {
            let mut it = part.trim().split('x');
            let m = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("bad dims '{part}'")))?;
            let n = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("bad dims '{part}'")))?;
            if it.next().is_some() {
                return Err(Error::InvalidParameter(format!("bad dims '{part}'")));
            }
            Ok((m, n))
        })
        .collect()
}
