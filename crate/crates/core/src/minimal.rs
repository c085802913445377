//! Minimal codewords: a nonzero codeword is minimal when every codeword
//! supported inside its support is a scalar multiple of it.
//!
//! Two independent deciders are kept side by side. The kernel method
//! restricts the generator rows to the zero set Z(c) and reads the
//! dimension of the subcode vanishing there: that subcode always contains
//! the line through c, so c is minimal exactly when the dimension is 1.
//! The scan method enumerates every scalar class of codewords and looks
//! for a covering witness directly. The scan is exponentially slower and
//! exists to check the kernel method on small codes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{Codeword, EvalCode, Message, SpectrumMode};
use crate::error::{Error, Result};
use crate::fields::{Felt, FieldSpec};
use crate::linalg;
use crate::unipoly::UniPoly;

/// Supp(inner) ⊆ Supp(outer), position by position.
pub fn covers(outer: &[Felt], inner: &[Felt]) -> bool {
    outer
        .iter()
        .zip(inner)
        .all(|(o, i)| i.is_zero() || !o.is_zero())
}

fn proportional(field: &FieldSpec, a: &[Felt], b: &[Felt]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    for j in 0..a.len() {
        if a[j].is_zero() != b[j].is_zero() {
            return false;
        }
        if !a[j].is_zero() {
            let lambda = field.div(b[j], a[j]);
            return a
                .iter()
                .zip(b)
                .all(|(&x, &y)| field.mul(lambda, x) == y);
        }
    }
    true
}

fn combo_codeword(field: &FieldSpec, rows: &[Vec<Felt>], combo: &[Felt]) -> Vec<Felt> {
    let n = rows[0].len();
    let mut out = vec![Felt::ZERO; n];
    for (mu, row) in combo.iter().zip(rows) {
        if mu.is_zero() {
            continue;
        }
        for (slot, &v) in out.iter_mut().zip(row) {
            *slot = field.add(*slot, field.mul(*mu, v));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Kernel,
    Scan,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityVerdict {
    pub minimal: bool,
    /// Dimension of the subcode vanishing on Z(c); kernel method only.
    pub kernel_dim: Option<usize>,
    /// Row combination whose codeword is nonzero, not proportional to c,
    /// and supported inside Supp(c). Present exactly when not minimal.
    pub covering_combo: Option<Vec<Felt>>,
}

/// Boolean-only kernel decider over precomputed zero positions, for bulk
/// callers that do not need a witness.
pub fn kernel_minimal_at(
    field: &FieldSpec,
    rows: &[Vec<Felt>],
    measured_dim: usize,
    zero_positions: &[usize],
) -> bool {
    let constraints: Vec<Vec<Felt>> = zero_positions
        .iter()
        .map(|&z| rows.iter().map(|row| row[z]).collect())
        .collect();
    measured_dim - linalg::rank(field, constraints) == 1
}

/// Kernel decider on raw rows: c is minimal iff the codewords vanishing
/// on Z(c) form a line. The subcode dimension is measured_dim minus the
/// rank of the rows restricted to Z(c).
pub fn kernel_verdict(
    field: &FieldSpec,
    rows: &[Vec<Felt>],
    measured_dim: usize,
    values: &[Felt],
) -> Result<MinimalityVerdict> {
    if values.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroCodeword);
    }
    let arity = rows.len();
    let constraints: Vec<Vec<Felt>> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(z, _)| rows.iter().map(|row| row[z]).collect())
        .collect();
    let restricted_rank = linalg::rank(field, constraints.clone());
    let kernel_dim = measured_dim - restricted_rank;
    debug_assert!(kernel_dim >= 1, "c itself vanishes on Z(c)");
    if kernel_dim == 1 {
        return Ok(MinimalityVerdict {
            minimal: true,
            kernel_dim: Some(1),
            covering_combo: None,
        });
    }
    let basis = linalg::nullspace(field, &constraints, arity);
    let mut candidates: Vec<Vec<Felt>> = basis.clone();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let sum: Vec<Felt> = basis[i]
                .iter()
                .zip(&basis[j])
                .map(|(&x, &y)| field.add(x, y))
                .collect();
            candidates.push(sum);
        }
    }
    let witness = candidates
        .into_iter()
        .find(|combo| {
            let cw = combo_codeword(field, rows, combo);
            !cw.iter().all(|v| v.is_zero()) && !proportional(field, values, &cw)
        })
        .expect("a subcode of dimension ≥ 2 contains a non-proportional codeword");
    Ok(MinimalityVerdict {
        minimal: false,
        kernel_dim: Some(kernel_dim),
        covering_combo: Some(witness),
    })
}

fn projective_combos(order: u32, arity: usize) -> impl Iterator<Item = Vec<Felt>> {
    let order = order as u64;
    (0..arity).flat_map(move |pos| {
        let count = order.pow((arity - pos - 1) as u32);
        (0..count).map(move |mut v| {
            let mut combo = vec![Felt::ZERO; arity];
            combo[pos] = Felt::ONE;
            for slot in combo.iter_mut().skip(pos + 1) {
                *slot = Felt((v % order) as u32);
                v /= order;
            }
            combo
        })
    })
}

/// Exhaustive decider: walk every scalar class of row combinations and
/// look for a covering witness. Exponential in the arity; oracle use only.
pub fn scan_verdict(
    field: &FieldSpec,
    rows: &[Vec<Felt>],
    values: &[Felt],
) -> Result<MinimalityVerdict> {
    if values.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroCodeword);
    }
    let zero_positions: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(z, _)| z)
        .collect();
    for combo in projective_combos(field.order(), rows.len()) {
        let vanishes_on_z = zero_positions.iter().all(|&z| {
            let mut acc = Felt::ZERO;
            for (mu, row) in combo.iter().zip(rows) {
                acc = field.add(acc, field.mul(*mu, row[z]));
            }
            acc.is_zero()
        });
        if !vanishes_on_z {
            continue;
        }
        let cw = combo_codeword(field, rows, &combo);
        if cw.iter().all(|v| v.is_zero()) || proportional(field, values, &cw) {
            continue;
        }
        debug_assert!(covers(values, &cw));
        return Ok(MinimalityVerdict {
            minimal: false,
            kernel_dim: None,
            covering_combo: Some(combo),
        });
    }
    Ok(MinimalityVerdict {
        minimal: true,
        kernel_dim: None,
        covering_combo: None,
    })
}

pub fn is_minimal(code: &EvalCode, cw: &Codeword, method: Method) -> Result<MinimalityVerdict> {
    let field = code.curve().tower().ext();
    match method {
        Method::Kernel => {
            kernel_verdict(field, code.rows(), code.measured_dimension(), &cw.values)
        }
        Method::Scan => scan_verdict(field, code.rows(), &cw.values),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalEnumeration {
    pub classes_checked: u64,
    pub minimal: Vec<Message>,
}

/// Kernel-decide every scalar class of nonzero messages and collect the
/// minimal ones, in the canonical representative order.
pub fn enumerate_minimal(code: &EvalCode, cap: u64) -> Result<MinimalEnumeration> {
    let count = code.class_count();
    if count > cap as u128 {
        return Err(Error::EnumerationCapExceeded { count, cap });
    }
    let count = count as u64;
    let minimal: Vec<Message> = (0..count)
        .into_par_iter()
        .filter_map(|idx| {
            let msg = code.class_rep_at(idx as u128);
            let cw = code.encode(&msg);
            let verdict = is_minimal(code, &cw, Method::Kernel).expect("reps are nonzero");
            verdict.minimal.then_some(msg)
        })
        .collect();
    Ok(MinimalEnumeration {
        classes_checked: count,
        minimal,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassLabel {
    /// b ≠ 0, deg f ≥ 1, side conditions and the weight inequality hold.
    ClassI,
    /// b = 0 and f has degree k with k distinct roots.
    ClassII,
    /// b ≠ 0 and f is constant.
    ClassIII,
    PredictedNonminimal,
    /// k ≤ 3: the classification makes no claim.
    OutsideHypotheses,
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::ClassI => "class-i",
            ClassLabel::ClassII => "class-ii",
            ClassLabel::ClassIII => "class-iii",
            ClassLabel::PredictedNonminimal => "predicted-nonminimal",
            ClassLabel::OutsideHypotheses => "outside-hypotheses",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    pub label: ClassLabel,
    /// Degree of the polynomial part, when f is nonzero.
    pub kbar: Option<u32>,
    pub side_conditions_met: Option<bool>,
    /// Weight inequality with the +5D^(13/3) term as published.
    pub ineq_printed: Option<bool>,
    /// Same inequality with the term subtracted; this one decides the label.
    pub ineq_corrected: Option<bool>,
}

/// Predict minimality from the shape of the message alone.
///
/// For b ≠ 0 and deg f ≥ 1 the side conditions are
/// (k̄ > r and p ∤ k̄) or (k̄ = r ≥ 4) or (0 < k̄ < r),
/// and the deciding inequality with D = max(k̄, r) is
/// q^(r-1) − (D−1)(D−2)·q^(r-3/2) − 5D^(13/3)·q^(r-2) > k.
/// The published form adds the 5D^(13/3) term instead; both readings are
/// recorded and the subtracted one decides.
pub fn predicted_class(code: &EvalCode, msg: &Message) -> Result<Prediction> {
    if msg.is_zero() {
        return Err(Error::ZeroCodeword);
    }
    let tower = code.curve().tower();
    let q = tower.q() as f64;
    let r = tower.r();
    let p = tower.p();
    let k = code.k();
    let f = UniPoly::new(msg.a.clone());
    let kbar = f.degree().map(|d| d as u32);

    let mut side_conditions_met = None;
    let mut ineq_printed = None;
    let mut ineq_corrected = None;
    let raw_label = if msg.b.is_zero() {
        let ext = tower.ext();
        let full_degree = kbar == Some(k);
        let split = full_degree && f.distinct_roots_in_field(ext)?.all_distinct;
        if split {
            ClassLabel::ClassII
        } else {
            ClassLabel::PredictedNonminimal
        }
    } else {
        match kbar {
            None | Some(0) => ClassLabel::ClassIII,
            Some(kb) => {
                let side = (kb > r && kb % p != 0) || (kb == r && r >= 4) || kb < r;
                let d = kb.max(r) as f64;
                let base = q.powi(r as i32 - 1) - (d - 1.0) * (d - 2.0) * q.powf(r as f64 - 1.5);
                let tail = 5.0 * d.powf(13.0 / 3.0) * q.powi(r as i32 - 2);
                let printed = base + tail > k as f64;
                let corrected = base - tail > k as f64;
                side_conditions_met = Some(side);
                ineq_printed = Some(printed);
                ineq_corrected = Some(corrected);
                if side && corrected {
                    ClassLabel::ClassI
                } else {
                    ClassLabel::PredictedNonminimal
                }
            }
        }
    };
    let label = if k <= 3 {
        ClassLabel::OutsideHypotheses
    } else {
        raw_label
    };
    Ok(Prediction {
        label,
        kbar,
        side_conditions_met,
        ineq_printed,
        ineq_corrected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRow {
    pub message: Message,
    pub predicted: Prediction,
    pub oracle_minimal: bool,
    pub agree: bool,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct AgreementTally {
    pub total: u64,
    pub agreements: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub checked: u64,
    pub disagreements: u64,
    pub tallies: BTreeMap<&'static str, AgreementTally>,
    pub rows: Vec<ClassificationRow>,
}

/// Predict every traversed message and compare against the kernel oracle.
/// Class labels claim minimal, the nonminimal label claims not minimal,
/// and the out-of-hypotheses label claims nothing (counted as agreement).
pub fn classification_report(
    code: &EvalCode,
    mode: &SpectrumMode,
    cap: u64,
) -> Result<ClassificationReport> {
    let messages: Vec<Message> = match *mode {
        SpectrumMode::Exhaustive => {
            let count = code.class_count();
            if count > cap as u128 {
                return Err(Error::EnumerationCapExceeded { count, cap });
            }
            (0..count as u64).map(|i| code.class_rep_at(i as u128)).collect()
        }
        SpectrumMode::Sampled { samples, seed } => {
            let order = code.curve().tower().ext().order();
            let arity = code.arity();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(samples as usize);
            while out.len() < samples as usize {
                let coords: Vec<Felt> =
                    (0..arity).map(|_| Felt(rng.gen_range(0..order))).collect();
                let msg = Message::from_coords(&coords);
                if !msg.is_zero() {
                    out.push(msg);
                }
            }
            out
        }
    };
    let rows: Vec<ClassificationRow> = messages
        .into_par_iter()
        .map(|msg| {
            let predicted = predicted_class(code, &msg).expect("messages are nonzero");
            let cw = code.encode(&msg);
            let oracle = is_minimal(code, &cw, Method::Kernel)
                .expect("messages are nonzero")
                .minimal;
            let agree = match predicted.label {
                ClassLabel::ClassI | ClassLabel::ClassII | ClassLabel::ClassIII => oracle,
                ClassLabel::PredictedNonminimal => !oracle,
                ClassLabel::OutsideHypotheses => true,
            };
            ClassificationRow {
                message: msg,
                predicted,
                oracle_minimal: oracle,
                agree,
            }
        })
        .collect();
    let mut tallies: BTreeMap<&'static str, AgreementTally> = BTreeMap::new();
    let mut disagreements = 0;
    for row in &rows {
        let slot = tallies.entry(row.predicted.label.name()).or_default();
        slot.total += 1;
        if row.agree {
            slot.agreements += 1;
        } else {
            disagreements += 1;
        }
    }
    Ok(ClassificationReport {
        checked: rows.len() as u64,
        disagreements,
        tallies,
        rows,
    })
}
