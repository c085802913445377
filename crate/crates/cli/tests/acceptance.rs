//! End-to-end acceptance gates, one per shipped claim, run in order by a
//! single test so the PASS/FAIL lines come out sequentially. Run with
//! `cargo test -p normtrace-cli --test acceptance -- --nocapture` to see
//! every line; on failure the captured lines are printed by the harness.
//!
//! Tolerances and time budgets are pinned here, next to the checks.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use normtrace_core::code::{EvalCode, Message};
use normtrace_core::curve::NormTraceCurve;
use normtrace_core::fields::{split_prime_power, Felt, Tower, DEFAULT_FIELD_CAP};
use normtrace_core::minimal::{self, ClassLabel, Method};
use normtrace_core::unipoly::UniPoly;
use normtrace_core::variety::{self, VarietySpec};
use normtrace_core::{linalg, DEFAULT_ENUM_CAP};

const SECOND_MS: u128 = 1_000;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn record(&mut self, idx: u32, name: &str, ok: bool, detail: String) {
        if ok {
            println!("PASS criterion {idx}: {name} ({detail})");
        } else {
            println!("FAIL criterion {idx}: {name} ({detail})");
            self.failures.push(format!("criterion {idx}: {name} ({detail})"));
        }
    }
}

fn tower(q: u32, r: u32) -> Arc<Tower> {
    let (p, m) = split_prime_power(q).unwrap();
    Arc::new(Tower::build(p, m, r, DEFAULT_FIELD_CAP).unwrap())
}

fn curve(q: u32, r: u32) -> Arc<NormTraceCurve> {
    Arc::new(NormTraceCurve::enumerate_affine(tower(q, r), DEFAULT_ENUM_CAP).unwrap())
}

fn code(q: u32, r: u32, k: u32) -> EvalCode {
    EvalCode::build(curve(q, r), k).unwrap()
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let exit = normtrace_cli::execute(args.iter().copied(), &mut out, &mut err);
    assert!(
        exit != 2,
        "invalid CLI invocation {:?}: {}",
        args,
        String::from_utf8_lossy(&err)
    );
    (exit, out)
}

fn parse(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("CLI emits valid JSON")
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };

    criterion_1_curve_counts(&mut gate);
    criterion_2_hermitian_coincidence(&mut gate);
    criterion_3_b_zero_weight_law(&mut gate);
    criterion_4_dimension_audit(&mut gate);
    let draws = seeded_draws();
    criterion_5_correspondence(&mut gate, &draws);
    criterion_6_orbit_identity(&mut gate, &draws);
    criterion_7_bound_windows(&mut gate);
    criterion_8_oracle_equivalence(&mut gate);
    criterion_9_classification_spot_checks(&mut gate);
    criterion_10_conic_catalogs(&mut gate);
    let c11_snapshot = criterion_11_prop53_validation(&mut gate);
    criterion_12_determinism(&mut gate, c11_snapshot);

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}

fn criterion_1_curve_counts(gate: &mut Gate) {
    let expected = [
        (2u32, 2u32, 8usize),
        (3, 2, 27),
        (4, 2, 64),
        (5, 2, 125),
        (2, 3, 32),
        (3, 3, 243),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, r, want) in expected {
        let started = Instant::now();
        let curve = curve(q, r);
        let elapsed = started.elapsed().as_millis();
        let good = curve.len() == want && elapsed < SECOND_MS;
        ok &= good;
        detail.push(format!("({q},{r})→{} in {elapsed}ms", curve.len()));
    }
    gate.record(1, "affine curve counts", ok, detail.join(", "));
}

fn criterion_2_hermitian_coincidence(gate: &mut Gate) {
    let mut ok = true;
    let mut detail = Vec::new();
    for q in [2u32, 3, 4, 5] {
        let curve = curve(q, 2);
        let ext = curve.tower().ext();
        let mut mismatches = 0u64;
        for x in ext.elements() {
            let lhs = ext.pow(x, (q + 1) as u64);
            for y in ext.elements() {
                let rhs = ext.add(ext.pow(y, q as u64), y);
                if curve.contains(x, y) != (lhs == rhs) {
                    mismatches += 1;
                }
            }
        }
        ok &= mismatches == 0;
        detail.push(format!("q={q}: {mismatches} mismatches"));
    }
    gate.record(2, "norm-trace matches the Hermitian equation at r = 2", ok, detail.join(", "));
}

fn criterion_3_b_zero_weight_law(gate: &mut Gate) {
    let code = code(3, 2, 2);
    let ext = code.curve().tower().ext();
    let order = ext.order();
    let mut checked = 0u64;
    let mut exceptions = 0u64;
    for idx in 1..order.pow(3) {
        let mut v = idx;
        let mut a = Vec::with_capacity(3);
        for _ in 0..3 {
            a.push(Felt(v % order));
            v /= order;
        }
        let s = UniPoly::new(a.clone())
            .distinct_roots_in_field(ext)
            .unwrap()
            .roots
            .len() as u64;
        let msg = Message { b: Felt::ZERO, a };
        let weight = code.encode(&msg).weight();
        checked += 1;
        if weight != 27 - 3 * s {
            exceptions += 1;
        }
    }
    gate.record(
        3,
        "b = 0 weights follow 27 − 3·roots at (3,2,2)",
        exceptions == 0,
        format!("{checked} codewords, {exceptions} exceptions"),
    );
}

fn criterion_4_dimension_audit(gate: &mut Gate) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, r, k) in [(2u32, 2u32, 1u32), (3, 2, 2), (2, 3, 3)] {
        let code = code(q, r, k);
        let audit = code.dimension_audit();
        // Independent rank route: rank is transposition-invariant.
        let ext = code.curve().tower().ext();
        let cols = code.rows()[0].len();
        let transposed: Vec<Vec<Felt>> = (0..cols)
            .map(|j| code.rows().iter().map(|row| row[j]).collect())
            .collect();
        let oracle = linalg::rank(ext, transposed);
        let good = audit.measured == oracle
            && audit.measured == k as usize + 2
            && audit.delta == audit.measured as i64 - (k as i64 + 1);
        ok &= good;
        detail.push(format!(
            "({q},{r},{k}): measured {} vs oracle {oracle}, delta {:+}",
            audit.measured, audit.delta
        ));
    }
    gate.record(4, "dimension audit matches the rank oracle", ok, detail.join("; "));
}

struct DrawSet {
    q: u32,
    r: u32,
    k: u32,
    polys: Vec<Vec<Felt>>,
}

fn seeded_draws() -> Vec<DrawSet> {
    let sets = [(2u32, 2u32, 1u32, 0xC5_01u64), (3, 2, 2, 0xC5_02), (2, 3, 2, 0xC5_03), (3, 3, 2, 0xC5_04)];
    sets.iter()
        .map(|&(q, r, k, seed)| {
            let order = tower(q, r).ext().order();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let polys = (0..100)
                .map(|_| (0..=k).map(|_| Felt(rng.gen_range(0..order))).collect())
                .collect();
            DrawSet { q, r, k, polys }
        })
        .collect()
}

fn criterion_5_correspondence(gate: &mut Gate, draws: &[DrawSet]) {
    let started = Instant::now();
    let mut failures = 0u64;
    let mut checked = 0u64;
    for set in draws {
        let code = code(set.q, set.r, set.k);
        let curve = code.curve().clone();
        let tower = curve.tower().clone();
        let n = code.n() as u64;
        for a in &set.polys {
            let spec = VarietySpec::new(tower.clone(), UniPoly::new(a.clone()));
            let eq = variety::equivalence_check(&spec, &curve).unwrap();
            let msg = Message { b: Felt::ONE, a: a.clone() };
            let weight = code.encode(&msg).weight();
            checked += 1;
            let good = eq.pass
                && n - weight == eq.s_count
                && weight == code.weight_of(&msg);
            if !good {
                failures += 1;
            }
        }
    }
    let elapsed = started.elapsed().as_millis();
    gate.record(
        5,
        "S-count = intersections = length − weight on seeded polynomials",
        failures == 0 && elapsed < 30 * SECOND_MS,
        format!("{checked} trials, {failures} failures, {elapsed}ms"),
    );
}

fn criterion_6_orbit_identity(gate: &mut Gate, draws: &[DrawSet]) {
    let mut failures = 0u64;
    let mut m_row_ok = true;
    for set in draws {
        let tower = tower(set.q, set.r);
        let ext = tower.ext();
        m_row_ok &= tower.m_row_identity_check().pass;
        for a in &set.polys {
            let f = UniPoly::new(a.clone());
            let spec = VarietySpec::new(tower.clone(), f.clone());
            for x in ext.elements() {
                let lhs = spec.vkr_evaluate(&spec.orbit(x)).unwrap();
                let rhs = ext.sub(tower.trace_ext(f.evaluate(ext, x)), tower.norm_ext(x));
                if lhs != rhs {
                    failures += 1;
                }
            }
        }
    }
    gate.record(
        6,
        "orbit evaluation equals T(f(x)) − N(x) and the matrix row identity holds",
        failures == 0 && m_row_ok,
        format!("{failures} value mismatches, row identity {}", if m_row_ok { "pass" } else { "fail" }),
    );
}

fn criterion_7_bound_windows(gate: &mut Gate) {
    let started = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, r, k, seed) in [(17u32, 2u32, 1u32, 701u64), (37, 2, 3, 703)] {
        let (exit, bytes) = run_cli(&[
            "normtrace", "bounds", "--q", &q.to_string(), "--r", &r.to_string(),
            "--k", &k.to_string(), "--theorem", "cm", "--trials", "100",
            "--seed", &seed.to_string(),
        ]);
        let report = parse(&bytes);
        let all_hold = report["results"]["all_hold"].as_bool().unwrap_or(false);
        let hypothesis_met = report["results"]["rows"]
            .as_array()
            .map(|rows| {
                rows.iter()
                    .all(|row| row["report"]["hypothesis_met"].as_bool() == Some(true))
            })
            .unwrap_or(false);
        let good = exit == 0 && all_hold && hypothesis_met;
        ok &= good;
        detail.push(format!("({q},{r},{k}): all_hold {all_hold}, hypothesis {hypothesis_met}"));
    }
    let elapsed = started.elapsed().as_millis();
    ok &= elapsed < 5 * SECOND_MS;
    detail.push(format!("{elapsed}ms"));
    gate.record(7, "exact counts sit inside the explicit windows", ok, detail.join("; "));
}

fn criterion_8_oracle_equivalence(gate: &mut Gate) {
    let started = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, r, k, classes) in [(2u32, 2u32, 1u32, 21u64), (3, 2, 2, 820)] {
        let code = code(q, r, k);
        assert_eq!(code.class_count(), classes as u128);
        let mut disagreements = 0u64;
        for idx in 0..classes {
            let msg = code.class_rep_at(idx as u128);
            let cw = code.encode(&msg);
            let kernel = minimal::is_minimal(&code, &cw, Method::Kernel).unwrap();
            let scan = minimal::is_minimal(&code, &cw, Method::Scan).unwrap();
            if kernel.minimal != scan.minimal {
                disagreements += 1;
            }
        }
        ok &= disagreements == 0;
        detail.push(format!("({q},{r},{k}): {classes} classes, {disagreements} disagreements"));
    }
    let elapsed = started.elapsed().as_millis();
    ok &= elapsed < 10 * SECOND_MS;
    detail.push(format!("{elapsed}ms"));
    gate.record(8, "kernel and scan oracles agree on every class", ok, detail.join("; "));
}

fn criterion_9_classification_spot_checks(gate: &mut Gate) {
    let started = Instant::now();
    let code = code(5, 2, 4);
    let ext = code.curve().tower().ext();
    let order = ext.order();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    let oracle_minimal = |msg: &Message| {
        let cw = code.encode(msg);
        minimal::is_minimal(&code, &cw, Method::Kernel).unwrap().minimal
    };

    // Constant shape: b·y − a_0, predicted class (iii). The gate demands every
    // draw be minimal; draws with T(a_0/b) = 0 are not, because the fiber
    // y = a_0/b collapses to the single point (0, a_0/b) and the x row's
    // support sits strictly inside the codeword's. The tally cross-checks that
    // the trace of the shift decides the verdict exactly.
    let tower = code.curve().tower();
    let mut class3_bad = 0u64;
    let mut class3_law_breaks = 0u64;
    for _ in 0..1000 {
        let mut a = vec![Felt::ZERO; 5];
        a[0] = Felt(rng.gen_range(0..order));
        let msg = Message { b: Felt(rng.gen_range(1..order)), a };
        let predicted = minimal::predicted_class(&code, &msg).unwrap();
        assert_eq!(predicted.label, ClassLabel::ClassIII);
        let shift = ext.div(msg.a[0], msg.b);
        let degenerate_fiber = tower.trace(shift) == Felt::ZERO;
        let minimal = oracle_minimal(&msg);
        class3_bad += !minimal as u64;
        class3_law_breaks += (minimal == degenerate_fiber) as u64;
    }

    // Split shape: b = 0, degree 4 with 4 distinct roots, class (ii).
    let mut class2_bad = 0u64;
    for _ in 0..1000 {
        let a = loop {
            let mut a: Vec<Felt> = (0..4).map(|_| Felt(rng.gen_range(0..order))).collect();
            a.push(Felt(rng.gen_range(1..order)));
            let scan = UniPoly::new(a.clone()).distinct_roots_in_field(ext).unwrap();
            if scan.roots.len() == 4 {
                break a;
            }
        };
        let msg = Message { b: Felt::ZERO, a };
        let predicted = minimal::predicted_class(&code, &msg).unwrap();
        assert_eq!(predicted.label, ClassLabel::ClassII);
        if !oracle_minimal(&msg) {
            class2_bad += 1;
        }
    }

    // Class-(i) shape: b ≠ 0, deg f ≥ 1, side conditions met. At q = 5 the
    // deciding inequality fails, so the predictor claims non-minimal;
    // agreement is tallied and reported, never gated.
    let (p, r) = (5u32, 2u32);
    let mut shape1_minimal = 0u64;
    let mut shape1_agree = 0u64;
    for _ in 0..1000 {
        let msg = loop {
            let a: Vec<Felt> = (0..5).map(|_| Felt(rng.gen_range(0..order))).collect();
            let Some(kb) = UniPoly::new(a.clone()).degree().map(|d| d as u32) else {
                continue;
            };
            let side = (kb > r && kb % p != 0) || (kb == r && r >= 4) || (0 < kb && kb < r);
            if side {
                break Message { b: Felt(rng.gen_range(1..order)), a };
            }
        };
        let predicted = minimal::predicted_class(&code, &msg).unwrap();
        let claim = match predicted.label {
            ClassLabel::ClassI => Some(true),
            ClassLabel::PredictedNonminimal => Some(false),
            _ => None,
        };
        let minimal = oracle_minimal(&msg);
        shape1_minimal += minimal as u64;
        if claim == Some(minimal) {
            shape1_agree += 1;
        }
    }

    let elapsed = started.elapsed().as_millis();
    gate.record(
        9,
        "classified shapes verified by the kernel oracle at (5,2,4)",
        class3_bad == 0 && class2_bad == 0 && elapsed < 300 * SECOND_MS,
        format!(
            "class-iii {}/1000 kernel-minimal ({class3_bad} non-minimal, trace of shift decides \
every verdict: {}), class-ii {}/1000 kernel-minimal; class-i shape: {shape1_minimal}/1000 \
oracle-minimal, predictor agreed {shape1_agree}/1000 (reported, not gated); {elapsed}ms",
            1000 - class3_bad,
            class3_law_breaks == 0,
            1000 - class2_bad
        ),
    );
}

fn criterion_10_conic_catalogs(gate: &mut Gate) {
    let mut ok = true;
    let mut detail = Vec::new();
    for q in [3u32, 5] {
        let started = Instant::now();
        let (exit, bytes) = run_cli(&[
            "normtrace", "--workers", "4", "conics", "survey", "--q", &q.to_string(),
        ]);
        let report = parse(&bytes);
        let violations = report["violations"].as_array().map_or(usize::MAX, |v| v.len());
        let checked = report["results"]["checked"].as_u64().unwrap_or(0);
        let elapsed = started.elapsed().as_millis();
        let good = exit == 0 && violations == 0 && (q != 5 || elapsed < 120 * SECOND_MS);
        ok &= good;
        detail.push(format!("q={q}: {checked} classes, {violations} violations, {elapsed}ms"));
    }
    gate.record(10, "exhaustive conic surveys are violation-free", ok, detail.join("; "));
}

struct SurveySnapshot {
    exit: i32,
    bytes: Vec<u8>,
}

const C11_ARGS: [&str; 10] = [
    "conics", "survey", "--q", "9", "--mode", "sampled", "--samples", "100000",
    "--seed", "1109",
];

fn criterion_11_prop53_validation(gate: &mut Gate) -> SurveySnapshot {
    let started = Instant::now();
    let mut args = vec!["normtrace", "--workers", "4"];
    args.extend_from_slice(&C11_ARGS);
    args.push("--validate-prop53");
    let (exit, bytes) = run_cli(&args);
    let report = parse(&bytes);
    let checked = report["results"]["prop53"]["checked"].as_u64().unwrap_or(0);
    let agreements = report["results"]["prop53"]["agreements"].as_u64().unwrap_or(0);
    let ratio = agreements as f64 / checked.max(1) as f64;
    let empty = Vec::new();
    let violations = report["violations"].as_array().unwrap_or(&empty);
    let dumps_complete = violations.iter().all(|v| {
        v["data"]["coeffs"].as_array().map_or(false, |c| c.len() == 6)
    });
    let catalog_violations = violations
        .iter()
        .filter(|v| v["check"] == "pattern-catalog")
        .count();
    let disagreement_count = violations.iter().filter(|v| v["check"] == "prop53").count();
    let elapsed = started.elapsed().as_millis();
    let ok = checked == 100_000 && ratio >= 0.999 && dumps_complete && elapsed < 600 * SECOND_MS;
    gate.record(
        11,
        "minimality predicate matches the kernel oracle on 10⁵ sampled conics",
        ok,
        format!(
            "agreement {agreements}/{checked} ({:.4}%), {disagreement_count} disagreements dumped, \
{catalog_violations} catalog-gap sizes reported, {elapsed}ms",
            ratio * 100.0
        ),
    );
    SurveySnapshot { exit, bytes }
}

fn criterion_12_determinism(gate: &mut Gate, c11: SurveySnapshot) {
    let mut ok = true;
    let mut detail = Vec::new();

    let mut c11_args = vec!["normtrace", "--workers", "1"];
    c11_args.extend_from_slice(&C11_ARGS);
    c11_args.push("--validate-prop53");
    let (exit, bytes) = run_cli(&c11_args);
    let same = exit == c11.exit && bytes == c11.bytes;
    ok &= same;
    detail.push(format!("conic survey workers 1 vs 4: {}", if same { "identical" } else { "DIFFER" }));

    let reruns: [&[&str]; 2] = [
        &["variety", "verify", "--q", "3", "--r", "2", "--k", "2", "--trials", "100", "--seed", "1205"],
        &["minimal", "compare", "--q", "5", "--r", "2", "--k", "4", "--samples", "1000", "--seed", "1209"],
    ];
    for args in reruns {
        let mut one = vec!["normtrace", "--workers", "1"];
        one.extend_from_slice(args);
        let mut four = vec!["normtrace", "--workers", "4"];
        four.extend_from_slice(args);
        let (exit1, bytes1) = run_cli(&one);
        let (exit4, bytes4) = run_cli(&four);
        let same = exit1 == exit4 && bytes1 == bytes4;
        ok &= same;
        detail.push(format!(
            "{} {} workers 1 vs 4: {}",
            args[0],
            args[1],
            if same { "identical" } else { "DIFFER" }
        ));
    }
    gate.record(12, "reports are byte-identical across worker counts", ok, detail.join("; "));
}
