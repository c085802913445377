//! Computational workbench for norm-trace curves over F_{q^r}, the
//! evaluation codes built on them, and the plane-conic intersection
//! surveys used to study minimal codewords.
//!
//! The crate is organized bottom-up:
//!
//! * [`fields`]: exact arithmetic in F_p, F_q, F_{q^r}; subfield
//!   embedding, Frobenius, norm, trace, and a normal basis with its
//!   coordinate map Φ_B.
//! * [`curve`]: affine point enumeration of the curve N(x) = T(y) and the
//!   projective Hermitian point set for r = 2.
//! * [`unipoly`]: univariate polynomials over the extension field with
//!   exhaustive root scans.
//! * [`code`]: the evaluation code spanned by (y, 1, x, …, x^k) on the
//!   curve points, weight spectra, and classical weight bounds.
//! * [`minimal`]: support covering, two independent minimality oracles,
//!   and the shape-class prediction with agreement reports.
//! * [`variety`]: the coordinate-space point count of the support variety,
//!   its equivalence with curve intersections, and bound windows.
//! * [`conics`]: conic classification over F_{q²}, intersection patterns
//!   against the Hermitian curve, and survey/validation drivers.

pub mod code;
pub mod conics;
pub mod curve;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod minimal;
pub mod unipoly;
pub mod variety;

pub use code::{ClassicalBound, DimensionAudit, EvalCode, Message, SpectrumMode};
pub use curve::NormTraceCurve;
pub use error::{Error, Result};
pub use fields::{split_prime_power, Felt, FieldSpec, Tower, DEFAULT_FIELD_CAP};
pub use unipoly::UniPoly;

/// Default cap on exhaustive enumerations (messages, projective classes).
pub const DEFAULT_ENUM_CAP: u64 = 1 << 28;
