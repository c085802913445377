//! Both minimality oracles over every projective class of a 27-position
//! code, witness validity for each negative verdict, and the structural
//! contract of the classification report.

use std::sync::Arc;

use normtrace_core::minimal::{
    self, classification_report, covers, enumerate_minimal, is_minimal, ClassLabel, Method,
};
use normtrace_core::{
    EvalCode, Felt, NormTraceCurve, SpectrumMode, Tower, DEFAULT_ENUM_CAP, DEFAULT_FIELD_CAP,
};

fn code(p: u32, m: u32, r: u32, k: u32) -> EvalCode {
    let tower = Arc::new(Tower::build(p, m, r, DEFAULT_FIELD_CAP).unwrap());
    let curve = Arc::new(NormTraceCurve::enumerate_affine(tower, DEFAULT_ENUM_CAP).unwrap());
    EvalCode::build(curve, k).unwrap()
}

#[test]
fn oracles_agree_and_witnesses_hold_on_every_class_over_f9() {
    let c = code(3, 1, 2, 2);
    assert_eq!(c.class_count(), 820);
    let mut minimal_reps = Vec::new();
    for rep in c.class_representatives() {
        let cw = c.encode(&rep);
        let kernel = is_minimal(&c, &cw, Method::Kernel).unwrap();
        let scan = is_minimal(&c, &cw, Method::Scan).unwrap();
        assert_eq!(kernel.minimal, scan.minimal, "rep {rep:?}");
        if kernel.minimal {
            minimal_reps.push(rep);
            continue;
        }
        // Each negative verdict carries a combo that encodes to a nonzero,
        // non-proportional codeword supported inside the original.
        for verdict in [kernel, scan] {
            let combo = verdict.covering_combo.unwrap();
            let witness_msg = c.message_from_row_combo(&combo);
            assert!(!witness_msg.is_zero());
            let witness = c.encode(&witness_msg);
            assert!(witness.weight() > 0);
            assert!(covers(&cw.values, &witness.values));
            assert_ne!(c.canonicalize(&witness_msg), c.canonicalize(&rep));
        }
    }
    let listing = enumerate_minimal(&c, DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(listing.classes_checked, 820);
    assert_eq!(listing.minimal, minimal_reps);
}

#[test]
fn sampled_classification_report_is_structurally_consistent() {
    let c = code(5, 1, 2, 4);
    let mode = SpectrumMode::Sampled {
        samples: 300,
        seed: 7,
    };
    let report = classification_report(&c, &mode, DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(report.checked, 300);
    assert_eq!(report.rows.len(), 300);
    let total: u64 = report.tallies.values().map(|t| t.total).sum();
    assert_eq!(total, 300);
    let mut disagreements = 0;
    for row in &report.rows {
        let expect = match row.predicted.label {
            ClassLabel::ClassI | ClassLabel::ClassII | ClassLabel::ClassIII => row.oracle_minimal,
            ClassLabel::PredictedNonminimal => !row.oracle_minimal,
            ClassLabel::OutsideHypotheses => true,
        };
        assert_eq!(row.agree, expect);
        if !row.agree {
            disagreements += 1;
        }
        // k = 4 > 3: every draw gets a real prediction.
        assert_ne!(row.predicted.label, ClassLabel::OutsideHypotheses);
    }
    assert_eq!(report.disagreements, disagreements);
    let rerun = classification_report(&c, &mode, DEFAULT_ENUM_CAP).unwrap();
    let msgs: Vec<_> = report.rows.iter().map(|r| r.message.clone()).collect();
    let rmsgs: Vec<_> = rerun.rows.iter().map(|r| r.message.clone()).collect();
    assert_eq!(msgs, rmsgs, "sampling must be seed-deterministic");
}

#[test]
fn small_k_codes_are_exempt_from_prediction_claims() {
    let c = code(2, 1, 3, 3);
    let report =
        classification_report(&c, &SpectrumMode::Exhaustive, DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(report.disagreements, 0);
    assert_eq!(report.tallies.len(), 1);
    let tally = report.tallies[ClassLabel::OutsideHypotheses.name()];
    assert_eq!(tally.total, report.checked);
    assert_eq!(
        report.checked as u128,
        c.class_count(),
        "exhaustive mode walks every projective class"
    );
    let _ = minimal::predicted_class(&c, &c.class_rep_at(0)).unwrap();
}
