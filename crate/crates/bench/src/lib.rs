//! Shared fixtures for the criterion benches: the standard tower, code,
//! and conic plane the benchmarks exercise.

use std::sync::Arc;

use normtrace_core::conics::HermitianPlane;
use normtrace_core::{EvalCode, NormTraceCurve, Tower, DEFAULT_ENUM_CAP, DEFAULT_FIELD_CAP};

pub fn tower(p: u32, m: u32, r: u32) -> Arc<Tower> {
    Arc::new(Tower::build(p, m, r, DEFAULT_FIELD_CAP).unwrap())
}

pub fn code(p: u32, m: u32, r: u32, k: u32) -> EvalCode {
    let curve =
        Arc::new(NormTraceCurve::enumerate_affine(tower(p, m, r), DEFAULT_ENUM_CAP).unwrap());
    EvalCode::build(curve, k).unwrap()
}

pub fn plane(q: u32) -> HermitianPlane {
    let (p, m) = normtrace_core::split_prime_power(q).unwrap();
    HermitianPlane::build(tower(p, m, 2), DEFAULT_ENUM_CAP).unwrap()
}
