//! Acceptance suite: one test per exit criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them). Tolerances are pinned
//! in the assertions.

use std::time::Instant;

use gdiscord::bloch::{build_c_matrix, decompose, reconstruct};
use gdiscord::bounds::{
    border_scalar, bounds_report, build_optimal_isometry, gram_matrix, tight_bound,
    verify_closed_form_maximum, verify_interlacing,
};
use gdiscord::cli::{run_verify, sweep_csv, sweep_rows, SweepSpec, SUPPORTED_DIMS};
use gdiscord::matrix::RealMatrix;
use gdiscord::oracle::{
    dakic_two_qubit, distance_after_measurement, make_classical_quantum,
    minimize_qubit_measurement, MeasurementBasis, DEFAULT_GRID, DEFAULT_REFINE,
};
use gdiscord::states::{bell_state, random_bipartite_state, random_state, werner_qubit, Family};

fn report(criterion: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS");
    } else {
        println!(
            "criterion {criterion}: FAIL ({} violations)",
            failures.len()
        );
        for f in failures.iter().take(5) {
            println!("    {f}");
        }
    }
    assert!(
        failures.is_empty(),
        "criterion {criterion} failed: {failures:?}"
    );
}

#[test]
fn criterion_1_eq52_sweep_dominance_and_gap_onset() {
    let start = Instant::now();
    let spec = SweepSpec {
        family: Family::Eq52,
        p_min: 0.0,
        p_max: 1.0,
        steps: 101,
        include_oracle: false,
        seed: 0,
    };
    let rows = sweep_rows(&spec).unwrap();
    let elapsed = start.elapsed();

    let mut failures = Vec::new();
    for r in &rows {
        if r.tight_raw < r.luo_fu - 1e-10 {
            failures.push(format!(
                "dominance violated at p={}: tight {} < luo_fu {}",
                r.p, r.tight_raw, r.luo_fu
            ));
        }
    }
    let onset = rows
        .iter()
        .find(|r| r.tight_raw - r.luo_fu > 1e-6)
        .map(|r| r.p);
    match onset {
        Some(p) if (0.15..=0.25).contains(&p) => {}
        Some(p) => failures.push(format!(
            "strict-gap onset at p={p}, outside the expected window [0.15, 0.25]"
        )),
        None => failures.push("no strict gap found on the sweep".to_string()),
    }
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("sweep took {elapsed:?}, budget 5 s"));
    }
    report("1 (eq52 sweep)", &failures);
}

#[test]
fn criterion_2_eq53_sweep_dominance() {
    let start = Instant::now();
    let spec = SweepSpec {
        family: Family::Eq53,
        p_min: 0.0,
        p_max: 1.0,
        steps: 101,
        include_oracle: false,
        seed: 0,
    };
    let rows = sweep_rows(&spec).unwrap();
    let elapsed = start.elapsed();

    let mut failures = Vec::new();
    for r in &rows {
        if r.tight_raw < r.luo_fu - 1e-10 {
            failures.push(format!(
                "dominance violated at p={}: tight {} < luo_fu {}",
                r.p, r.tight_raw, r.luo_fu
            ));
        }
    }
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("sweep took {elapsed:?}, budget 5 s"));
    }
    report("2 (eq53 sweep)", &failures);
}

#[test]
fn criterion_3_two_by_d_exactness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, base_seed) in [(2usize, 3000u64), (3, 4000)] {
        for i in 0..50u64 {
            let rank = 1 + (i as usize) % (2 * n);
            let rho = random_bipartite_state(2, n, rank, base_seed + i).unwrap();
            let tb = tight_bound(&decompose(&rho, 2, n).unwrap()).unwrap();
            let oracle = minimize_qubit_measurement(&rho, DEFAULT_GRID, DEFAULT_REFINE).unwrap();
            let dev = (oracle.value - tb.clamped).abs();
            if dev > 1e-5 {
                failures.push(format!(
                    "2x{n} seed {}: |oracle - tight| = {dev:.3e}",
                    base_seed + i
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        failures.push(format!("exactness scan took {elapsed:?}, budget 60 s"));
    }
    report("3 (2xd exactness)", &failures);
}

#[test]
fn criterion_4_two_qubit_oracle_equivalence() {
    let mut failures = Vec::new();
    for i in 0..100u64 {
        let rank = 1 + (i as usize) % 4;
        let rho = random_bipartite_state(2, 2, rank, 5000 + i).unwrap();
        let b = decompose(&rho, 2, 2).unwrap();
        let exact = dakic_two_qubit(&b).unwrap();
        let swept = minimize_qubit_measurement(&rho, DEFAULT_GRID, DEFAULT_REFINE)
            .unwrap()
            .value;
        if (exact - swept).abs() > 1e-5 {
            failures.push(format!("seed {}: dakic {exact} vs sweep {swept}", 5000 + i));
        }
    }

    let bell = bell_state();
    let bell_bloch = decompose(&bell, 2, 2).unwrap();
    let d_closed = dakic_two_qubit(&bell_bloch).unwrap();
    let d_swept = minimize_qubit_measurement(&bell, DEFAULT_GRID, DEFAULT_REFINE)
        .unwrap()
        .value;
    if (d_closed - 0.5).abs() > 1e-9 {
        failures.push(format!("bell closed form {d_closed} != 1/2"));
    }
    if (d_swept - 0.5).abs() > 1e-9 {
        failures.push(format!("bell sweep {d_swept} != 1/2"));
    }

    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = werner_qubit(p).unwrap();
        let b = decompose(&rho, 2, 2).unwrap();
        let expect = p * p / 2.0;
        let closed = dakic_two_qubit(&b).unwrap();
        let swept = minimize_qubit_measurement(&rho, DEFAULT_GRID, DEFAULT_REFINE)
            .unwrap()
            .value;
        if (closed - expect).abs() > 1e-9 {
            failures.push(format!("werner({p}) closed {closed} != {expect}"));
        }
        if (swept - expect).abs() > 1e-9 {
            failures.push(format!("werner({p}) sweep {swept} != {expect}"));
        }
    }
    report("4 (two-qubit oracle equivalence)", &failures);
}

#[test]
fn criterion_5_proof_machinery_identities() {
    let mut failures = Vec::new();

    for m in 3..=5usize {
        let iso = build_optimal_isometry(m, &RealMatrix::identity(m * m - 1)).unwrap();
        let expect = m as f64 / (2.0 * (m as f64 - 1.0));
        for k in 2..m {
            let dev = (iso.coefficient_identity_lhs(k) - expect).abs();
            if dev > 1e-12 {
                failures.push(format!("coefficient identity m={m} k={k}: dev {dev:.3e}"));
            }
        }
    }

    for (m, n, base_seed) in [(2usize, 2usize, 6000u64), (3, 3, 7000), (3, 4, 8000)] {
        for i in 0..20u64 {
            let rank = 1 + (i as usize) % (m * n);
            let rho = random_bipartite_state(m, n, rank, base_seed + i).unwrap();
            let b = decompose(&rho, m, n).unwrap();
            let (direct, closed) = verify_closed_form_maximum(&b).unwrap();
            if (direct - closed).abs() > 1e-10 {
                failures.push(format!(
                    "closed form ({m},{n}) seed {}: |{direct} - {closed}|",
                    base_seed + i
                ));
            }
            let gram = gram_matrix(&b).unwrap();
            let iso = build_optimal_isometry(m, &gram.f).unwrap();
            let dev = iso.isometry_deviation();
            if dev > 1e-10 {
                failures.push(format!(
                    "isometry deviation {dev:.3e} for ({m},{n}) seed {}",
                    base_seed + i
                ));
            }
        }
    }
    report("5 (proof machinery)", &failures);
}

#[test]
fn criterion_6_dominance_interlacing_bookkeeping() {
    let mut failures = Vec::new();
    let mut count = 0usize;
    for (di, &(m, n)) in SUPPORTED_DIMS.iter().enumerate() {
        for i in 0..40u64 {
            let seed = 9000 + di as u64 * 1000 + i;
            let rank = 1 + (i as usize) % (m * n);
            let rho = random_bipartite_state(m, n, rank, seed).unwrap();
            let b = decompose(&rho, m, n).unwrap();
            let rep = bounds_report(&b).unwrap();
            count += 1;
            if rep.tight_raw < rep.luo_fu - 1e-10 {
                failures.push(format!("dominance ({m},{n}) seed {seed}"));
            }
            let c = build_c_matrix(&b);
            if !verify_interlacing(&c).unwrap() {
                failures.push(format!("interlacing ({m},{n}) seed {seed}"));
            }
            let a = border_scalar(&b);
            let (mf, nf) = (m as f64, n as f64);
            let eta_sum: f64 = rep.eta.iter().sum();
            let lam_sum: f64 = rep.lambda.iter().sum();
            let dev = (a + (2.0 / (mf * mf * nf)) * eta_sum - rep.tr_cct)
                .abs()
                .max((lam_sum - rep.tr_cct).abs());
            if dev > 1e-10 {
                failures.push(format!("bookkeeping ({m},{n}) seed {seed}: dev {dev:.3e}"));
            }
        }
    }
    assert!(count >= 200);
    report("6 (dominance and interlacing)", &failures);
}

#[test]
fn criterion_7_decomposition_self_consistency() {
    let mut failures = Vec::new();
    for (di, &(m, n)) in SUPPORTED_DIMS.iter().enumerate() {
        for i in 0..10u64 {
            let seed = 11_000 + di as u64 * 100 + i;
            let rank = 1 + (i as usize) % (m * n);
            let rho = random_bipartite_state(m, n, rank, seed).unwrap();
            let b = decompose(&rho, m, n).unwrap();
            let c = build_c_matrix(&b);
            let (mf, nf) = (m as f64, n as f64);
            let eq19 = 1.0 / (mf * nf)
                + 2.0 * b.y_norm_sq() / (nf * nf * mf)
                + 2.0 * b.x_norm_sq() / (mf * mf * nf)
                + 4.0 * b.t_norm_sq() / (mf * mf * nf * nf);
            if (c.tr_cct() - eq19).abs() > 1e-10 {
                failures.push(format!("norm identity ({m},{n}) seed {seed}"));
            }
            if (c.tr_cct() - rho.purity()).abs() > 1e-10 {
                failures.push(format!("purity bridge ({m},{n}) seed {seed}"));
            }
            let back = reconstruct(&b).unwrap();
            if back.max_abs_diff(rho.matrix()) > 1e-10 {
                failures.push(format!("round trip ({m},{n}) seed {seed}"));
            }
        }
    }
    report("7 (decomposition self-consistency)", &failures);
}

#[test]
fn criterion_8_zero_discord_soundness() {
    let mut failures = Vec::new();
    for m in [2usize, 3] {
        for trial in 0..5u64 {
            let n = 3;
            let basis = MeasurementBasis::computational(m);
            let rhos: Vec<_> = (0..m)
                .map(|k| {
                    random_state(
                        n,
                        1 + (k + trial as usize) % n,
                        12_000 + trial * 10 + k as u64,
                    )
                    .unwrap()
                })
                .collect();
            let raw: Vec<f64> = (1..=m).map(|k| k as f64).collect();
            let total: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let chi = make_classical_quantum(&p, &basis, &rhos).unwrap();

            let tb = tight_bound(&decompose(&chi, m, n).unwrap()).unwrap();
            if tb.clamped > 1e-10 {
                failures.push(format!(
                    "m={m} trial {trial}: clamped tight bound {} on a zero-discord state",
                    tb.clamped
                ));
            }
            if (distance_after_measurement(&chi, &basis).unwrap()).abs() > 1e-10 {
                failures.push(format!("m={m} trial {trial}: not a fixed point"));
            }
            if m == 2 {
                let oracle = minimize_qubit_measurement(&chi, DEFAULT_GRID, DEFAULT_REFINE)
                    .unwrap()
                    .value;
                if oracle > 1e-8 {
                    failures.push(format!("m=2 trial {trial}: oracle residual {oracle:.3e}"));
                }
            }
        }
    }
    report("8 (zero-discord soundness)", &failures);
}

#[test]
fn criterion_9_determinism() {
    let mut failures = Vec::new();

    let sweep = SweepSpec {
        family: Family::Werner,
        p_min: 0.0,
        p_max: 1.0,
        steps: 11,
        include_oracle: true,
        seed: 31,
    };
    let csv_a = sweep_csv(&sweep).unwrap();
    let csv_b = sweep_csv(&sweep).unwrap();
    if csv_a != csv_b {
        failures.push("werner sweep CSV differs between runs".to_string());
    }

    let sweep_q = SweepSpec {
        family: Family::Eq52,
        p_min: 0.0,
        p_max: 1.0,
        steps: 5,
        include_oracle: true,
        seed: 31,
    };
    let q_a = sweep_csv(&sweep_q).unwrap();
    let q_b = sweep_csv(&sweep_q).unwrap();
    if q_a != q_b {
        failures.push("eq52 sweep CSV differs between runs".to_string());
    }

    let dims = [(2, 2), (2, 3), (3, 3)];
    let v_a = run_verify(&dims, 5, 123).unwrap().render();
    let v_b = run_verify(&dims, 5, 123).unwrap().render();
    if v_a != v_b {
        failures.push("verify report differs between runs".to_string());
    }

    report("9 (determinism)", &failures);
}

/// Werner sweep with the oracle column: the measured upper bound coincides
/// with the tight bound at every grid point (2xd exactness seen through the
/// CSV surface).
#[test]
fn werner_sweep_oracle_matches_tight_bound() {
    let spec = SweepSpec {
        family: Family::Werner,
        p_min: 0.0,
        p_max: 1.0,
        steps: 11,
        include_oracle: true,
        seed: 2,
    };
    let mut failures = Vec::new();
    for row in sweep_rows(&spec).unwrap() {
        let oracle = row.oracle_upper.unwrap();
        if (oracle - row.tight).abs() > 1e-5 {
            failures.push(format!(
                "p={}: oracle {} vs tight {}",
                row.p, oracle, row.tight
            ));
        }
    }
    report("werner sweep oracle", &failures);
}
