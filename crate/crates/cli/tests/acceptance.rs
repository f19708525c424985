//! Acceptance suite: one test per release criterion, each asserting
//! exact equality (or the stated tolerance) over the full stated range,
//! with hard wall-clock budgets where one is stated. Every test prints
//! its own `PASS criterion N` line on success, so a `--nocapture` run
//! reads as a checklist.

use std::collections::BTreeMap;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use rencontres::bounds::{
    bell_asymptotics, check_adell, check_berend_tal, check_lambda_sandwich, lambert_w, log_of_nat,
};
use rencontres::combinat::{bell, factorial, nat_pow, rencontres_row, stirling1_signed};
use rencontres::identities::{
    schlomilch_stirling1, vassilev_power, verify_identity, worpitzky_power, EvalMode, IdentityId,
};
use rencontres::oracle::{
    power_by_coefficient_extraction, closed_form_row, enumerate_statistic, EnumLimits, StatisticId,
};
use rencontres::{params_from, Nat};

fn assert_exact(id: IdentityId, mode: EvalMode, pairs: &[(&str, i64)]) {
    let report = verify_identity(id, mode, &params_from(pairs))
        .unwrap_or_else(|e| panic!("{id} at {pairs:?} errored: {e}"));
    assert_eq!(
        report.equal,
        Some(true),
        "{id} {mode} at {pairs:?}: lhs = {}, rhs = {}",
        report.lhs.render(),
        report.rhs.render()
    );
}

#[test]
fn criterion_01_stirling_moment_sum_rule() {
    let started = Instant::now();
    let mut checks = 0;
    for n in 1..=12i64 {
        for order in 0..=n {
            assert_exact(
                IdentityId::MainSumRule,
                EvalMode::Corrected,
                &[("n", n), ("r", order - 1)],
            );
            checks += 1;
        }
    }
    assert_eq!(checks, 90, "1 <= n <= 12 with 0 <= r+1 <= n is 90 points");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}, budget 5 s");
    println!("PASS criterion 1: sum rule over Stirling-weighted moments, {checks} exact checks in {elapsed:?}");
}

#[test]
fn criterion_02_moment_identity_with_printed_multipliers() {
    for n in 0..=12i64 {
        for q in 0..=n {
            assert_exact(IdentityId::MomentBell, EvalMode::Corrected, &[("n", n), ("q", q)]);
        }
    }
    let multipliers = [1u32, 2, 5, 15, 52];
    for (q, mult) in (1..=5u64).zip(multipliers) {
        assert_eq!(bell(q), Nat::from(mult), "moment multiplier at q = {q}");
    }
    println!("PASS criterion 2: moments equal B_q * n! for q <= n <= 12; multipliers 1, 2, 5, 15, 52");
}

#[test]
fn criterion_03_oracle_equivalence_at_desk_scale() {
    let started = Instant::now();
    let limits = EnumLimits::default();
    for stat in [StatisticId::FixedPoints, StatisticId::Cycles, StatisticId::Ascents] {
        for n in 0..=8u64 {
            let observed = enumerate_statistic(stat, n, None, &limits).unwrap();
            let expected = closed_form_row(stat, n, None).unwrap();
            assert_eq!(observed.counts, expected, "{stat} histogram at n = {n}");
        }
    }
    for n in 0..=10u64 {
        let observed = enumerate_statistic(StatisticId::PartitionBlocks, n, None, &limits).unwrap();
        let expected = closed_form_row(StatisticId::PartitionBlocks, n, None).unwrap();
        assert_eq!(observed.counts, expected, "partition histogram at n = {n}");
        assert_eq!(observed.counts.iter().sum::<Nat>(), bell(n), "partition total at n = {n}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}, budget 30 s");
    println!("PASS criterion 3: brute-force histograms equal closed forms in {elapsed:?}");
}

#[test]
fn criterion_04_power_identities() {
    for k in 1..=10u64 {
        for i in 0..=10u64 {
            let expected = nat_pow(&Nat::from(k), i);
            assert_eq!(vassilev_power(k, i).unwrap(), expected, "vassilev ({k}, {i})");
            assert_eq!(
                worpitzky_power(k, i, EvalMode::Corrected),
                expected,
                "worpitzky ({k}, {i})"
            );
        }
    }
    for k in 1..=6u64 {
        for i in 0..=5u64 {
            assert_eq!(
                power_by_coefficient_extraction(k, i).unwrap(),
                nat_pow(&Nat::from(k), i),
                "coefficient extraction ({k}, {i})"
            );
        }
    }
    println!("PASS criterion 4: binomial, Eulerian and coefficient-extraction power identities are exact");
}

#[test]
fn criterion_05_schlomilch_equals_recurrence() {
    for q in 0..=12u64 {
        for i in 0..=q {
            assert_eq!(
                schlomilch_stirling1(q, i),
                stirling1_signed(q, i),
                "Schlomilch vs recurrence at ({q}, {i})"
            );
        }
    }
    println!("PASS criterion 5: Schlomilch double sum equals recurrence Stirling-1 for q <= 12");
}

#[test]
fn criterion_06_nested_binomial_identities() {
    let started = Instant::now();
    for n in 1..=8i64 {
        for order in 0..=n {
            let r = order - 1;
            assert_exact(IdentityId::BinomialSumRule, EvalMode::Corrected, &[("n", n), ("r", r)]);
            assert_exact(IdentityId::NestedSchlomilch, EvalMode::Corrected, &[("n", n), ("r", r)]);
            assert_exact(IdentityId::NormalizedNested, EvalMode::Corrected, &[("n", n), ("r", r)]);
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}, budget 60 s");
    println!("PASS criterion 6: nested binomial sums evaluate to n! (and 1 normalized) in {elapsed:?}");
}

#[test]
fn criterion_07_errata_are_asserted_as_failures() {
    // The printed Bell double sum really fails at q = 2, with 5/2.
    let report = verify_identity(
        IdentityId::BellDouble,
        EvalMode::AsWritten,
        &params_from(&[("q", 2)]),
    )
    .unwrap();
    assert_eq!(report.equal, Some(false), "the printed form must fail");
    assert_eq!(report.lhs.render(), "5/2");
    assert!(!report.passed());

    for q in 0..=12i64 {
        assert_exact(IdentityId::BellDouble, EvalMode::Corrected, &[("q", q)]);
    }

    // The printed Worpitzky binomial really under-counts at (3, 2).
    assert_eq!(worpitzky_power(3, 2, EvalMode::AsWritten), Nat::from(5u32));
    assert_ne!(
        worpitzky_power(3, 2, EvalMode::AsWritten),
        worpitzky_power(3, 2, EvalMode::Corrected)
    );
    println!("PASS criterion 7: both printed-formula errata reproduce as failures, corrected forms pass");
}

#[test]
fn criterion_08_magnitude_bounds() {
    for n in 2..=60u64 {
        for m in 0..=n {
            let report = check_adell(n, m).unwrap();
            assert!(report.satisfied, "adell at n = {n}, m = {m}");
        }
    }
    for r in 2..=6u64 {
        for n in (r + 1)..=20 {
            let report = check_lambda_sandwich(n, r).unwrap();
            assert!(report.satisfied, "sandwich at n = {n}, r = {r}");
        }
    }
    for n in 1..=200u64 {
        let report = check_berend_tal(n).unwrap();
        assert!(report.satisfied, "berend-tal at n = {n}");
    }
    // Resolution probe for the log-domain comparisons: a relative
    // perturbation of 2^-60 must still be visible, i.e. the working
    // precision carries over 60 significant bits.
    let base = Nat::from(1u32) << 200;
    let bumped = &base + (Nat::from(1u32) << 140);
    assert!(
        log_of_nat(&bumped).unwrap().bigfloat() > log_of_nat(&base).unwrap().bigfloat(),
        "log-domain comparison must resolve a 2^-60 relative difference"
    );
    println!("PASS criterion 8: Adell, lambda-sandwich and Berend-Tal bounds hold with >= 60-bit log comparisons");
}

#[test]
fn criterion_09_asymptotics_and_lambert_w() {
    let rows: Vec<_> = [10u64, 50, 100, 200]
        .into_iter()
        .map(|n| bell_asymptotics(n).unwrap())
        .collect();
    for pair in rows.windows(2) {
        assert!(
            pair[1].rel_err_debruijn < pair[0].rel_err_debruijn,
            "de Bruijn log error must shrink from n = {} to n = {}",
            pair[0].n,
            pair[1].n
        );
        assert!(
            pair[1].rel_err_odlyzko < pair[0].rel_err_odlyzko,
            "Odlyzko log error must shrink from n = {} to n = {}",
            pair[0].n,
            pair[1].n
        );
    }
    for x in [0.5, 1.0, std::f64::consts::E, 10.0, 100.0, 1e6] {
        let w = lambert_w(x).unwrap();
        let residual = (w * w.exp() - x).abs();
        assert!(
            residual <= 1e-12 * x.max(1.0),
            "lambert_w residual {residual} at x = {x}"
        );
    }
    println!("PASS criterion 9: both Lambert-W asymptotic forms sharpen monotonically; W residuals within 1e-12");
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct WireIdentityReport {
    identity: String,
    mode: String,
    params: BTreeMap<String, i64>,
    lhs: String,
    rhs: String,
    equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    residual: Option<f64>,
    elapsed_ms: u64,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct WireSummary {
    total: u64,
    passes: u64,
    failures: u64,
    first_failure: Option<String>,
    wall_ms: u64,
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rencontres"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_10_cli_contract() {
    // Exit codes 0 / 1 / 2 / 3.
    assert_eq!(
        run_cli(&["verify", "EULER_RECURRENCE", "--range", "n=2..20"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run_cli(&["verify", "BELL_DOUBLE", "--mode", "as-written", "--range", "q=2..2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run_cli(&["verify", "BELL_DOUBLE", "--range", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run_cli(&["oracle", "PARTITION_BLOCKS", "--n", "13"]).status.code(),
        Some(3)
    );

    // JSON report lines survive a parse/serialize cycle byte for byte.
    let out = run_cli(&["verify", "MOMENT_BELL", "--range", "q=0..5,n=5..8", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines() {
        if let Ok(report) = serde_json::from_str::<WireIdentityReport>(line) {
            assert_eq!(serde_json::to_string(&report).unwrap(), line);
        } else {
            let summary: WireSummary = serde_json::from_str(line).unwrap();
            assert_eq!(serde_json::to_string(&summary).unwrap(), line);
        }
    }

    // Serial and parallel sweeps agree once timing jitter is masked.
    let args = ["verify", "FALLING_MOMENT", "--range", "n=1..9,r=-1..n-1", "--format", "json"];
    let serial = run_cli(&args);
    let mut par_args = args.to_vec();
    par_args.extend(["--parallel", "3"]);
    let parallel = run_cli(&par_args);
    let normalize = |raw: Vec<u8>| -> Vec<String> {
        String::from_utf8(raw)
            .unwrap()
            .lines()
            .map(|line| {
                if let Ok(mut r) = serde_json::from_str::<WireIdentityReport>(line) {
                    r.elapsed_ms = 0;
                    serde_json::to_string(&r).unwrap()
                } else {
                    let mut s: WireSummary = serde_json::from_str(line).unwrap();
                    s.wall_ms = 0;
                    serde_json::to_string(&s).unwrap()
                }
            })
            .collect()
    };
    assert_eq!(normalize(serial.stdout), normalize(parallel.stdout));

    // A single corrupted b-file entry is caught.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b000166.txt");
    std::fs::write(&path, "0 1\n1 0\n2 1\n3 2\n4 9\n").unwrap();
    assert_eq!(
        run_cli(&["ingest-bfile", path.to_str().unwrap(), "--seq", "derangement", "--check"])
            .status
            .code(),
        Some(0)
    );
    std::fs::write(&path, "0 1\n1 0\n2 1\n3 2\n4 10\n").unwrap();
    let corrupted = run_cli(&["ingest-bfile", path.to_str().unwrap(), "--seq", "derangement", "--check"]);
    assert_eq!(corrupted.status.code(), Some(1));
    assert!(String::from_utf8(corrupted.stdout).unwrap().contains("index=4"));

    println!("PASS criterion 10: exit codes, JSON byte-stability, sweep equivalence and corruption detection hold");
}

/// Cross-check of the moment identity against the exhaustive
/// marked-tuple count, tying criteria 2 and 3 together at small sizes.
#[test]
fn moment_identity_agrees_with_marked_tuple_enumeration() {
    let limits = EnumLimits::default();
    for n in 0..=7u64 {
        for q in 0..=n {
            let counted = enumerate_statistic(StatisticId::MarkedTuples, n, Some(q), &limits)
                .unwrap()
                .counts[0]
                .clone();
            let moment: Nat = rencontres_row(n)
                .into_iter()
                .enumerate()
                .map(|(k, p)| nat_pow(&Nat::from(k), q) * p)
                .sum();
            assert_eq!(counted, moment, "n = {n}, q = {q}");
            assert_eq!(counted, bell(q) * factorial(n), "n = {n}, q = {q}");
        }
    }
}
