//! Univariate polynomials over a finite field, with the exhaustive root
//! scan used to grade codeword weights.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Felt, FieldSpec};

/// Little-endian dense coefficients; the vector length is the arity the
/// caller chose (trailing zeros are allowed and do not affect the degree).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniPoly {
    coeffs: Vec<Felt>,
}

/// Result of scanning the whole field for roots.
#[derive(Clone, Debug, Serialize)]
pub struct RootScan {
    /// Distinct roots, ascending in the element enumeration.
    pub roots: Vec<Felt>,
    /// True iff the number of distinct roots equals the degree, i.e. the
    /// polynomial splits into distinct linear factors over this field.
    pub all_distinct: bool,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Felt>) -> UniPoly {
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Horner evaluation.
    pub fn evaluate(&self, field: &FieldSpec, x: Felt) -> Felt {
        field.eval_poly(&self.coeffs, x)
    }

    /// Scan every field element for roots. The zero polynomial vanishes
    /// everywhere and is rejected.
    pub fn distinct_roots_in_field(&self, field: &FieldSpec) -> Result<RootScan> {
        let Some(degree) = self.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        let roots: Vec<Felt> = field
            .elements()
            .filter(|&x| self.evaluate(field, x).is_zero())
            .collect();
        debug_assert!(roots.len() <= degree, "a nonzero polynomial has at most deg roots");
        Ok(RootScan {
            all_distinct: roots.len() == degree,
            roots,
        })
    }
}
