//! The evaluation code on the affine curve points: codewords are the
//! evaluations of b·y − f(x) with deg f ≤ k, i.e. the row space of the
//! functions (y, 1, x, x², …, x^k).
//!
//! Weights are computed per abscissa: for b ≠ 0 the fiber of x contains
//! exactly one candidate zero y = f(x)/b, present iff T(f(x)/b) = N(x);
//! for b = 0 a root x of f wipes out its whole fiber of q^(r-1) points.
//! The evaluation route (encode, then count zeros) is kept as the slow
//! cross-check and the two are tested against each other.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::NormTraceCurve;
use crate::error::{Error, Result};
use crate::fields::Felt;
use crate::linalg;

/// A message (b, a_0, …, a_k): the codeword is the evaluation of
/// b·y − (a_0 + a_1 x + … + a_k x^k) over the curve points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub b: Felt,
    pub a: Vec<Felt>,
}

impl Message {
    /// Coordinates in the fixed order (b, a_0, …, a_k).
    pub fn coords(&self) -> Vec<Felt> {
        let mut out = Vec::with_capacity(self.a.len() + 1);
        out.push(self.b);
        out.extend_from_slice(&self.a);
        out
    }

    pub fn from_coords(coords: &[Felt]) -> Message {
        Message {
            b: coords[0],
            a: coords[1..].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero() && self.a.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct Codeword {
    pub values: Vec<Felt>,
    pub source: Message,
}

impl Codeword {
    pub fn weight(&self) -> u64 {
        self.values.iter().filter(|v| !v.is_zero()).count() as u64
    }
}

/// How to traverse the message space for a weight spectrum.
#[derive(Clone, Debug, Serialize)]
pub enum SpectrumMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Measured generator rank next to the advertised dimension of the
/// family (k + 1). The two disagree; reports always carry both.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionAudit {
    pub measured: usize,
    #[serde(rename = "paper_claim")]
    pub claimed: usize,
    pub delta: i64,
}

pub struct EvalCode {
    curve: Arc<NormTraceCurve>,
    k: u32,
    rows: Vec<Vec<Felt>>,
    measured_dimension: usize,
    /// xpows[x][u] = x^u for u ≤ k, indexed by extension element.
    xpows: Vec<Vec<Felt>>,
    norm_base: Vec<u32>,
    trace_base: Vec<u32>,
}

impl EvalCode {
    /// Build the code for 1 ≤ k < q^(r-1). The generator rows are the
    /// evaluations of (y, 1, x, …, x^k) in curve order; their measured
    /// rank is recorded at construction.
    pub fn build(curve: Arc<NormTraceCurve>, k: u32) -> Result<EvalCode> {
        let tower = curve.tower();
        let q = tower.q() as u64;
        let fiber = q.pow(tower.r() - 1);
        if k == 0 || (k as u64) >= fiber {
            return Err(Error::InvalidParameter(format!(
                "k must satisfy 1 ≤ k < q^(r-1) = {fiber}, got {k}"
            )));
        }
        let ext = tower.ext();
        let xpows: Vec<Vec<Felt>> = ext
            .elements()
            .map(|x| {
                let mut pows = Vec::with_capacity(k as usize + 1);
                let mut acc = Felt::ONE;
                for _ in 0..=k {
                    pows.push(acc);
                    acc = ext.mul(acc, x);
                }
                pows
            })
            .collect();

        let points = curve.points();
        let mut rows = Vec::with_capacity(k as usize + 2);
        rows.push(points.iter().map(|&(_, y)| y).collect::<Vec<_>>());
        for u in 0..=k as usize {
            rows.push(points.iter().map(|&(x, _)| xpows[x.0 as usize][u]).collect());
        }
        let measured_dimension = linalg::rank(ext, rows.clone());

        Ok(EvalCode {
            norm_base: tower.norm_base_table(),
            trace_base: tower.trace_base_table(),
            curve,
            k,
            rows,
            measured_dimension,
            xpows,
        })
    }

    pub fn curve(&self) -> &Arc<NormTraceCurve> {
        &self.curve
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.curve.len()
    }

    /// Generator rows in the fixed order (y, 1, x, …, x^k).
    pub fn rows(&self) -> &[Vec<Felt>] {
        &self.rows
    }

    pub fn measured_dimension(&self) -> usize {
        self.measured_dimension
    }

    pub fn dimension_audit(&self) -> DimensionAudit {
        let claimed = self.k as usize + 1;
        DimensionAudit {
            measured: self.measured_dimension,
            claimed,
            delta: self.measured_dimension as i64 - claimed as i64,
        }
    }

    /// Number of generator-row coordinates, k + 2.
    pub fn arity(&self) -> usize {
        self.k as usize + 2
    }

    pub fn checked_message(&self, coords: &[Felt]) -> Result<Message> {
        if coords.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: coords.len(),
            });
        }
        let order = self.curve.tower().ext().order();
        if let Some(c) = coords.iter().find(|c| c.0 >= order) {
            return Err(Error::InvalidParameter(format!(
                "coefficient index {} out of range for field of order {order}",
                c.0
            )));
        }
        Ok(Message::from_coords(coords))
    }

    fn f_at(&self, a: &[Felt], x: u32) -> Felt {
        let ext = self.curve.tower().ext();
        let pows = &self.xpows[x as usize];
        let mut acc = Felt::ZERO;
        for (&au, &xp) in a.iter().zip(pows) {
            acc = ext.add(acc, ext.mul(au, xp));
        }
        acc
    }

    /// Evaluate b·y − f(x) at every curve point.
    pub fn encode(&self, msg: &Message) -> Codeword {
        assert_eq!(msg.a.len(), self.k as usize + 1, "message arity is k+1");
        let ext = self.curve.tower().ext();
        let values = self
            .curve
            .points()
            .iter()
            .map(|&(x, y)| ext.sub(ext.mul(msg.b, y), self.f_at(&msg.a, x.0)))
            .collect();
        Codeword {
            values,
            source: msg.clone(),
        }
    }

    /// Codeword weight without materializing the codeword, by walking the
    /// q^r abscissas instead of the q^(2r-1) points.
    pub fn weight_of(&self, msg: &Message) -> u64 {
        let tower = self.curve.tower();
        let ext = tower.ext();
        let order = ext.order();
        let fiber = (tower.q() as u64).pow(tower.r() - 1);
        let n = self.n() as u64;
        let zeros: u64 = if msg.b.is_zero() {
            (0..order)
                .filter(|&x| self.f_at(&msg.a, x).is_zero())
                .count() as u64
                * fiber
        } else {
            let inv_b = ext.inv(msg.b);
            (0..order)
                .filter(|&x| {
                    let v = ext.mul(self.f_at(&msg.a, x), inv_b);
                    self.trace_base[v.0 as usize] == self.norm_base[x as usize]
                })
                .count() as u64
        };
        n - zeros
    }

    /// Total number of messages, (q^r)^(k+2).
    pub fn message_count(&self) -> u128 {
        (self.curve.tower().ext().order() as u128).pow(self.k + 2)
    }

    /// Number of scalar classes of nonzero messages.
    pub fn class_count(&self) -> u128 {
        let order = self.curve.tower().ext().order() as u128;
        (self.message_count() - 1) / (order - 1)
    }

    /// Message at a flat index: coordinates are the base-order digits in
    /// the order (a_0, …, a_k, b) from least significant to most, so
    /// consecutive index ranges share their leading coefficients.
    pub fn message_at(&self, idx: u128) -> Message {
        let order = self.curve.tower().ext().order() as u128;
        let mut v = idx;
        let mut a = Vec::with_capacity(self.k as usize + 1);
        for _ in 0..=self.k {
            a.push(Felt((v % order) as u32));
            v /= order;
        }
        let b = Felt((v % order) as u32);
        Message { b, a }
    }

    /// One representative per scalar class of nonzero messages: the first
    /// nonzero coordinate of (b, a_0, …, a_k) is normalized to 1.
    /// Representatives are emitted in a fixed order.
    pub fn class_representatives(&self) -> impl Iterator<Item = Message> + '_ {
        let order = self.curve.tower().ext().order() as u64;
        let arity = self.arity();
        (0..arity).flat_map(move |pos| {
            let tail = arity - pos - 1;
            let count = order.pow(tail as u32);
            (0..count).map(move |mut v| {
                let mut coords = vec![Felt::ZERO; arity];
                coords[pos] = Felt::ONE;
                for slot in coords.iter_mut().skip(pos + 1) {
                    *slot = Felt((v % order) as u32);
                    v /= order;
                }
                Message::from_coords(&coords)
            })
        })
    }

    /// Representative at a flat position in the `class_representatives`
    /// order, without materializing the whole sequence.
    pub fn class_rep_at(&self, idx: u128) -> Message {
        let order = self.curve.tower().ext().order() as u128;
        let arity = self.arity();
        let mut pos = 0;
        let mut offset = idx;
        loop {
            let count = order.pow((arity - pos - 1) as u32);
            if offset < count {
                break;
            }
            offset -= count;
            pos += 1;
            assert!(pos < arity, "class index out of range");
        }
        let mut coords = vec![Felt::ZERO; arity];
        coords[pos] = Felt::ONE;
        let mut v = offset;
        for slot in coords.iter_mut().skip(pos + 1) {
            *slot = Felt((v % order) as u32);
            v /= order;
        }
        Message::from_coords(&coords)
    }

    /// Scale a nonzero message so its first nonzero coordinate is 1.
    pub fn canonicalize(&self, msg: &Message) -> Message {
        let ext = self.curve.tower().ext();
        let coords = msg.coords();
        let Some(first) = coords.iter().find(|c| !c.is_zero()) else {
            return msg.clone();
        };
        let inv = ext.inv(*first);
        let scaled: Vec<Felt> = coords.iter().map(|&c| ext.mul(c, inv)).collect();
        Message::from_coords(&scaled)
    }

    /// Translate a combination of the generator rows (y, 1, x, …, x^k)
    /// into the message whose codeword it is: b = μ_0, a_u = −μ_(u+1).
    pub fn message_from_row_combo(&self, combo: &[Felt]) -> Message {
        assert_eq!(combo.len(), self.arity());
        let ext = self.curve.tower().ext();
        Message {
            b: combo[0],
            a: combo[1..].iter().map(|&c| ext.neg(c)).collect(),
        }
    }

    /// Weight histogram over the message space. Exhaustive mode walks all
    /// (q^r)^(k+2) messages (capped); sampled mode draws uniformly with a
    /// seeded generator. Work is split across the thread pool in flat
    /// index ranges and merged additively, so the histogram is identical
    /// for every worker count.
    pub fn weight_spectrum(&self, mode: &SpectrumMode, cap: u64) -> Result<BTreeMap<u64, u64>> {
        match *mode {
            SpectrumMode::Exhaustive => {
                let total = self.message_count();
                if total > cap as u128 {
                    return Err(Error::EnumerationCapExceeded { count: total, cap });
                }
                let total = total as u64;
                let hist = (0..total)
                    .into_par_iter()
                    .fold(BTreeMap::new, |mut map: BTreeMap<u64, u64>, idx| {
                        let msg = self.message_at(idx as u128);
                        *map.entry(self.weight_of(&msg)).or_insert(0) += 1;
                        map
                    })
                    .reduce(BTreeMap::new, merge_hist);
                Ok(hist)
            }
            SpectrumMode::Sampled { samples, seed } => {
                let order = self.curve.tower().ext().order();
                let arity = self.arity();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let messages: Vec<Message> = (0..samples)
                    .map(|_| {
                        let coords: Vec<Felt> =
                            (0..arity).map(|_| Felt(rng.gen_range(0..order))).collect();
                        Message::from_coords(&coords)
                    })
                    .collect();
                let hist = messages
                    .par_iter()
                    .fold(BTreeMap::new, |mut map: BTreeMap<u64, u64>, msg| {
                        *map.entry(self.weight_of(msg)).or_insert(0) += 1;
                        map
                    })
                    .reduce(BTreeMap::new, merge_hist);
                Ok(hist)
            }
        }
    }
}

fn merge_hist(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (w, c) in b {
        *a.entry(w).or_insert(0) += c;
    }
    a
}

/// Closed-form lower bounds on the weight of nonzero codewords.
#[derive(Clone, Copy, Debug, Serialize)]
pub enum ClassicalBound {
    /// Weight ≥ q^(2r-1) − s·(q^r−1)/(q−1) for a codeword whose f has s
    /// distinct roots (s ≤ k). Exact integer arithmetic.
    Bezout { s: u32 },
    /// The correction-capacity bound in its published form:
    /// q^(2r-1) − q^r − 5d^(13/3)·q^(r-1) − (k−1)(k−2)·q^((r-1)/2).
    CorollaryIiAsPrinted,
    /// The same bound re-derived from the point-count window:
    /// q^(2r-1) − q^(r-1) − (d−1)(d−2)·q^(r-3/2) − 5d^(13/3)·q^(r-2).
    CorollaryIiCmDerived,
}

/// Evaluate a classical bound; fractional-power variants are floored and
/// clamped at zero (they go vacuous at small q).
pub fn classical_bound(q: u32, r: u32, k: u32, bound: ClassicalBound) -> Result<u64> {
    let qf = q as f64;
    let d = k.max(r) as f64;
    match bound {
        ClassicalBound::Bezout { s } => {
            if s > k {
                return Err(Error::InvalidParameter(format!(
                    "Bézout bound needs s ≤ k, got s = {s}, k = {k}"
                )));
            }
            let n = (q as i128).pow(2 * r - 1);
            let classes = ((q as i128).pow(r) - 1) / (q as i128 - 1);
            let value = n - s as i128 * classes;
            Ok(value.max(0) as u64)
        }
        ClassicalBound::CorollaryIiAsPrinted => {
            let value = qf.powi(2 * r as i32 - 1)
                - qf.powi(r as i32)
                - 5.0 * d.powf(13.0 / 3.0) * qf.powi(r as i32 - 1)
                - (k as f64 - 1.0) * (k as f64 - 2.0) * qf.powf((r as f64 - 1.0) / 2.0);
            Ok(value.floor().max(0.0) as u64)
        }
        ClassicalBound::CorollaryIiCmDerived => {
            let value = qf.powi(2 * r as i32 - 1)
                - qf.powi(r as i32 - 1)
                - (d - 1.0) * (d - 2.0) * qf.powf(r as f64 - 1.5)
                - 5.0 * d.powf(13.0 / 3.0) * qf.powi(r as i32 - 2);
            Ok(value.floor().max(0.0) as u64)
        }
    }
}
