//! Plane conics over F_(q²), q odd, measured against the Hermitian curve.
//!
//! A conic is a nonzero coefficient vector (a, b, c, d, e, f) for
//! aX² + bY² + cZ² + dXY + eXZ + fYZ. Since the characteristic is odd the
//! Gram matrix determines the shape: rank 3 is an irreducible conic,
//! rank 2 a pair of distinct lines through a vertex, rank 1 a repeated
//! line. A rank-2 pair is rational or conjugate according to whether the
//! restriction to a coordinate line missing the vertex has a square
//! discriminant.
//!
//! Intersection sizes are matched against the catalog of admissible
//! patterns; sizes no pattern admits are recorded as violations, never
//! suppressed. Conjugate pairs sit outside the catalog and are tracked as
//! their own pattern with sizes {0, 1}. The minimality predicate for the
//! associated degree-two codeword is validated against the kernel oracle.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::SpectrumMode;
use crate::curve::NormTraceCurve;
use crate::error::{Error, Result};
use crate::fields::{Felt, FieldSpec, Tower};
use crate::linalg;
use crate::minimal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicKind {
    Irreducible,
    RepeatedLine,
    TwoRationalLines,
    TwoConjugateLines,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Components {
    Repeated { line: [Felt; 3] },
    Pair { first: [Felt; 3], second: [Felt; 3] },
    Conjugate { vertex: [Felt; 3] },
}

#[derive(Clone, Debug, Serialize)]
pub struct Conic {
    pub coeffs: [Felt; 6],
    pub gram: [[Felt; 3]; 3],
    pub kind: ConicKind,
    pub components: Option<Components>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineType {
    Tangent,
    Secant,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntersectionSizes {
    pub projective: u64,
    pub affine: u64,
}

/// Catalog verdict for one conic: every pattern whose (kind, size) data
/// admits the observation, with `violation` set exactly when none does.
#[derive(Clone, Debug, Serialize)]
pub struct PatternReport {
    pub projective_size: u64,
    pub affine_size: u64,
    pub compatible_patterns: Vec<&'static str>,
    pub violation: bool,
    /// Types of the rational component lines, when there are any.
    pub line_types: Option<Vec<LineType>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub coeffs: [u32; 6],
    pub kind: ConicKind,
    pub projective_size: u64,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramRow {
    pub kind: ConicKind,
    #[serde(rename = "size")]
    pub projective_size: u64,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop53Disagreement {
    pub coeffs: [u32; 6],
    pub kind: ConicKind,
    pub projective_size: u64,
    pub predicted_minimal: bool,
    pub oracle_minimal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop53Report {
    pub checked: u64,
    pub agreements: u64,
    pub disagreements: Vec<Prop53Disagreement>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveyReport {
    pub checked: u64,
    pub histogram: Vec<HistogramRow>,
    pub violations: Vec<Violation>,
    pub prop53: Option<Prop53Report>,
}

fn canonical3(field: &FieldSpec, p: [Felt; 3]) -> [Felt; 3] {
    let Some(first) = p.iter().find(|c| !c.is_zero()) else {
        return p;
    };
    let inv = field.inv(*first);
    [
        field.mul(p[0], inv),
        field.mul(p[1], inv),
        field.mul(p[2], inv),
    ]
}

fn cross(field: &FieldSpec, a: [Felt; 3], b: [Felt; 3]) -> [Felt; 3] {
    [
        field.sub(field.mul(a[1], b[2]), field.mul(a[2], b[1])),
        field.sub(field.mul(a[2], b[0]), field.mul(a[0], b[2])),
        field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0])),
    ]
}

fn dot3(field: &FieldSpec, a: [Felt; 3], b: [Felt; 3]) -> Felt {
    let mut acc = Felt::ZERO;
    for i in 0..3 {
        acc = field.add(acc, field.mul(a[i], b[i]));
    }
    acc
}

/// The plane over F_(q²) with the Hermitian curve points, the per-point
/// conic monomials, and the degree-two evaluation code on the affine
/// points. Requires an odd quadratic tower.
pub struct HermitianPlane {
    tower: Arc<Tower>,
    /// Projective curve points, affine (x:y:1) first, (0:1:0) last.
    points: Vec<[Felt; 3]>,
    /// monomials[i] = (X², Y², Z², XY, XZ, YZ) at points[i].
    monomials: Vec<[Felt; 6]>,
    point_set: HashSet<[u32; 3]>,
    /// Evaluations of (1, x, y, x², xy, y²) at the affine points.
    rows: Vec<Vec<Felt>>,
    measured_dimension: usize,
}

impl HermitianPlane {
    pub fn build(tower: Arc<Tower>, cap: u64) -> Result<HermitianPlane> {
        if tower.r() != 2 {
            return Err(Error::RequiresQuadraticTower(tower.r()));
        }
        if tower.p() == 2 {
            return Err(Error::RequiresOddQ(tower.q()));
        }
        let curve = NormTraceCurve::enumerate_affine(tower.clone(), cap)?;
        let points = curve.hermitian_projective_points()?;
        let ext = tower.ext();
        let monomials: Vec<[Felt; 6]> = points
            .iter()
            .map(|&[x, y, z]| {
                [
                    ext.mul(x, x),
                    ext.mul(y, y),
                    ext.mul(z, z),
                    ext.mul(x, y),
                    ext.mul(x, z),
                    ext.mul(y, z),
                ]
            })
            .collect();
        let point_set = points
            .iter()
            .map(|&p| {
                let c = canonical3(ext, p);
                [c[0].0, c[1].0, c[2].0]
            })
            .collect();
        let affine = &points[..points.len() - 1];
        let mut rows = Vec::with_capacity(6);
        rows.push(vec![Felt::ONE; affine.len()]);
        rows.push(affine.iter().map(|p| p[0]).collect());
        rows.push(affine.iter().map(|p| p[1]).collect());
        rows.push(affine.iter().map(|p| ext.mul(p[0], p[0])).collect());
        rows.push(affine.iter().map(|p| ext.mul(p[0], p[1])).collect());
        rows.push(affine.iter().map(|p| ext.mul(p[1], p[1])).collect());
        let measured_dimension = linalg::rank(ext, rows.clone());
        Ok(HermitianPlane {
            tower,
            points,
            monomials,
            point_set,
            rows,
            measured_dimension,
        })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    /// Base subfield order q; the plane is coordinatized over F_(q²).
    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn field(&self) -> &FieldSpec {
        self.tower.ext()
    }

    pub fn points(&self) -> &[[Felt; 3]] {
        &self.points
    }

    pub fn affine_len(&self) -> usize {
        self.points.len() - 1
    }

    /// Rows of the degree-two evaluation code, (1, x, y, x², xy, y²).
    pub fn validation_rows(&self) -> &[Vec<Felt>] {
        &self.rows
    }

    pub fn measured_dimension(&self) -> usize {
        self.measured_dimension
    }

    pub fn is_on_hermitian(&self, p: [Felt; 3]) -> bool {
        let c = canonical3(self.field(), p);
        self.point_set.contains(&[c[0].0, c[1].0, c[2].0])
    }

    /// Message coordinates of the affine restriction Q(x, y, 1) in the
    /// row order (1, x, y, x², xy, y²).
    pub fn affine_message(coeffs: &[Felt; 6]) -> [Felt; 6] {
        let [a, b, c, d, e, f] = *coeffs;
        [c, e, f, a, d, b]
    }

    /// The degree-two codeword: Q(x, y, 1) at every affine point.
    pub fn conic_values(&self, coeffs: &[Felt; 6]) -> Vec<Felt> {
        let ext = self.field();
        self.monomials[..self.affine_len()]
            .iter()
            .map(|mon| {
                let mut acc = Felt::ZERO;
                for t in 0..6 {
                    acc = ext.add(acc, ext.mul(coeffs[t], mon[t]));
                }
                acc
            })
            .collect()
    }

    /// Affine zero positions and the projective intersection size.
    fn eval_zeros(&self, coeffs: &[Felt; 6]) -> (Vec<usize>, u64) {
        let ext = self.field();
        let affine_len = self.affine_len();
        let mut zeros = Vec::new();
        let mut projective = 0u64;
        for (i, mon) in self.monomials.iter().enumerate() {
            let mut acc = Felt::ZERO;
            for t in 0..6 {
                acc = ext.add(acc, ext.mul(coeffs[t], mon[t]));
            }
            if acc.is_zero() {
                projective += 1;
                if i < affine_len {
                    zeros.push(i);
                }
            }
        }
        (zeros, projective)
    }

    pub fn intersection_sizes(&self, coeffs: &[Felt; 6]) -> IntersectionSizes {
        let (zeros, projective) = self.eval_zeros(coeffs);
        debug_assert!(projective - zeros.len() as u64 <= 1);
        IntersectionSizes {
            projective,
            affine: zeros.len() as u64,
        }
    }

    /// Hermitian points on a line: 1 (tangent) or q + 1 (secant). Any
    /// other count is an invariant failure, not an input error.
    pub fn line_type(&self, line: [Felt; 3]) -> Result<LineType> {
        let ext = self.field();
        let count = self
            .points
            .iter()
            .filter(|&&p| dot3(ext, line, p).is_zero())
            .count() as u64;
        if count == 1 {
            Ok(LineType::Tangent)
        } else if count == self.q() as u64 + 1 {
            Ok(LineType::Secant)
        } else {
            Err(Error::UnexpectedLineIntersection { count })
        }
    }

    /// Gram-matrix classification. The vertex of a rank-2 conic is the
    /// cross product of two independent Gram rows; the pair of lines is
    /// recovered from the roots of the restriction to a coordinate line
    /// missing the vertex.
    pub fn classify_conic(&self, coeffs: [Felt; 6]) -> Result<Conic> {
        let ext = self.field();
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidParameter("zero conic".into()));
        }
        let [a, b, c, d, e, f] = coeffs;
        let half = ext.inv(Felt(2));
        let d2 = ext.mul(d, half);
        let e2 = ext.mul(e, half);
        let f2 = ext.mul(f, half);
        let gram: [[Felt; 3]; 3] = [[a, d2, e2], [d2, b, f2], [e2, f2, c]];

        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            ext.sub(
                ext.mul(gram[r0][c0], gram[r1][c1]),
                ext.mul(gram[r0][c1], gram[r1][c0]),
            )
        };
        let det = {
            let mut acc = ext.mul(gram[0][0], minor(1, 2, 1, 2));
            acc = ext.sub(acc, ext.mul(gram[0][1], minor(1, 2, 0, 2)));
            ext.add(acc, ext.mul(gram[0][2], minor(1, 2, 0, 1)))
        };
        if !det.is_zero() {
            return Ok(Conic {
                coeffs,
                gram,
                kind: ConicKind::Irreducible,
                components: None,
            });
        }

        let pivot = (0..3)
            .find(|&i| gram[i].iter().any(|v| !v.is_zero()))
            .expect("nonzero conic has a nonzero Gram row in odd characteristic");
        let vertex = (0..3)
            .filter(|&j| j != pivot)
            .map(|j| cross(ext, gram[pivot], gram[j]))
            .find(|v| v.iter().any(|c| !c.is_zero()));
        let Some(vertex) = vertex else {
            // All rows proportional: Q is a scalar times a squared line,
            // and the repeated line reads off any nonzero Gram row.
            let line = canonical3(ext, gram[pivot]);
            return Ok(Conic {
                coeffs,
                gram,
                kind: ConicKind::RepeatedLine,
                components: Some(Components::Repeated { line }),
            });
        };
        let vertex = canonical3(ext, vertex);

        // Restrict to the coordinate line X_j = 0 for some j with
        // vertex_j ≠ 0; the restriction αU² + βUW + γW² is nondegenerate.
        let j = (0..3).find(|&j| !vertex[j].is_zero()).unwrap();
        let (alpha, beta, gamma) = match j {
            0 => (b, f, c),
            1 => (a, e, c),
            _ => (a, d, b),
        };
        let four = ext.add(Felt(2), Felt(2));
        let disc = ext.sub(
            ext.mul(beta, beta),
            ext.mul(four, ext.mul(alpha, gamma)),
        );
        debug_assert!(!disc.is_zero(), "rank-2 restriction off the vertex splits");
        if !ext.is_square(disc) {
            return Ok(Conic {
                coeffs,
                gram,
                kind: ConicKind::TwoConjugateLines,
                components: Some(Components::Conjugate { vertex }),
            });
        }

        let lift = |u: Felt, w: Felt| -> [Felt; 3] {
            match j {
                0 => [Felt::ZERO, u, w],
                1 => [u, Felt::ZERO, w],
                _ => [u, w, Felt::ZERO],
            }
        };
        let (p1, p2) = if alpha.is_zero() {
            // W·(βU + γW): roots (1:0) and (−γ:β).
            (lift(Felt::ONE, Felt::ZERO), lift(ext.neg(gamma), beta))
        } else {
            let s = ext.sqrt(disc).expect("square discriminant");
            let inv2a = ext.inv(ext.mul(Felt(2), alpha));
            let u1 = ext.mul(ext.add(ext.neg(beta), s), inv2a);
            let u2 = ext.mul(ext.sub(ext.neg(beta), s), inv2a);
            (lift(u1, Felt::ONE), lift(u2, Felt::ONE))
        };
        let mut first = canonical3(ext, cross(ext, vertex, p1));
        let mut second = canonical3(ext, cross(ext, vertex, p2));
        if second < first {
            std::mem::swap(&mut first, &mut second);
        }
        debug_assert!(dot3(ext, first, vertex).is_zero());
        debug_assert!(dot3(ext, second, vertex).is_zero());
        Ok(Conic {
            coeffs,
            gram,
            kind: ConicKind::TwoRationalLines,
            components: Some(Components::Pair { first, second }),
        })
    }

    /// Match an observation against the catalog. Irreducible conics may
    /// realize 0, 1, 2, q+1, q..q+2, 2q..2q+2, or the window
    /// ⌈q−2√q+2⌉..⌊q+2√q+2⌋; a repeated line realizes 1 (tangent) or q+1
    /// (secant); rational pairs realize 2 (two tangents), q+1..q+2
    /// (tangent and secant), or 2q+1..2q+2 (two secants); conjugate pairs
    /// sit outside the catalog and realize 0 or 1. Sizes admitted by no
    /// pattern are violations.
    pub fn pattern_match(&self, conic: &Conic, sizes: IntersectionSizes) -> Result<PatternReport> {
        let q = self.q() as u64;
        let size = sizes.projective;
        let (compatible, line_types) = match conic.kind {
            ConicKind::Irreducible => {
                let t = (4 * q).isqrt();
                let mut compatible = Vec::new();
                if size == 0 {
                    compatible.push("i");
                }
                if size == 1 {
                    compatible.push("ii");
                }
                if size == 2 {
                    compatible.push("iii");
                }
                if size == q + 1 {
                    compatible.push("iv");
                }
                if (2 * q..=2 * q + 2).contains(&size) {
                    compatible.push("v");
                }
                if (q..=q + 2).contains(&size) {
                    compatible.push("vi");
                }
                if q + 2 - t <= size && size <= q + 2 + t {
                    compatible.push("vii");
                }
                (compatible, None)
            }
            ConicKind::RepeatedLine => {
                let Some(Components::Repeated { line }) = &conic.components else {
                    unreachable!("repeated kind carries its line");
                };
                let ty = self.line_type(*line)?;
                let fits = match ty {
                    LineType::Tangent => size == 1,
                    LineType::Secant => size == q + 1,
                };
                (
                    if fits { vec!["viii"] } else { Vec::new() },
                    Some(vec![ty]),
                )
            }
            ConicKind::TwoRationalLines => {
                let Some(Components::Pair { first, second }) = &conic.components else {
                    unreachable!("rational pair carries its lines");
                };
                let t1 = self.line_type(*first)?;
                let t2 = self.line_type(*second)?;
                let compatible = match (t1, t2) {
                    (LineType::Tangent, LineType::Tangent) if size == 2 => vec!["ix"],
                    (LineType::Secant, LineType::Secant)
                        if (2 * q + 1..=2 * q + 2).contains(&size) =>
                    {
                        vec!["xi"]
                    }
                    (LineType::Tangent, LineType::Secant)
                    | (LineType::Secant, LineType::Tangent)
                        if (q + 1..=q + 2).contains(&size) =>
                    {
                        vec!["x"]
                    }
                    _ => Vec::new(),
                };
                (compatible, Some(vec![t1, t2]))
            }
            ConicKind::TwoConjugateLines => (
                if size <= 1 {
                    vec!["conjugate-pair"]
                } else {
                    Vec::new()
                },
                None,
            ),
        };
        Ok(PatternReport {
            projective_size: sizes.projective,
            affine_size: sizes.affine,
            violation: compatible.is_empty(),
            compatible_patterns: compatible,
            line_types,
        })
    }

    /// Gate for the minimality predicate: stated for odd q > 7.
    pub fn prop53_supported(&self) -> Result<()> {
        if self.q() <= 7 {
            return Err(Error::QTooSmall(self.q()));
        }
        Ok(())
    }

    /// Predicted minimality of the degree-two codeword: an irreducible
    /// conic meeting the curve in more than 4 points, or a rational pair
    /// of two secants.
    pub fn prop53_minimality_predicate(
        &self,
        conic: &Conic,
        sizes: IntersectionSizes,
    ) -> Result<bool> {
        self.prop53_supported()?;
        let line_types = match (&conic.kind, &conic.components) {
            (ConicKind::TwoRationalLines, Some(Components::Pair { first, second })) => {
                Some(vec![self.line_type(*first)?, self.line_type(*second)?])
            }
            _ => None,
        };
        Ok(prop53_from_parts(conic.kind, sizes.projective, &line_types))
    }

    fn rep_at(&self, idx: u128) -> [Felt; 6] {
        let order = self.field().order() as u128;
        let mut pos = 0;
        let mut offset = idx;
        loop {
            let count = order.pow(5 - pos as u32);
            if offset < count {
                break;
            }
            offset -= count;
            pos += 1;
            assert!(pos < 6, "conic class index out of range");
        }
        let mut coeffs = [Felt::ZERO; 6];
        coeffs[pos] = Felt::ONE;
        let mut v = offset;
        for slot in coeffs.iter_mut().skip(pos + 1) {
            *slot = Felt((v % order) as u32);
            v /= order;
        }
        coeffs
    }

    pub fn class_count(&self) -> u128 {
        let order = self.field().order() as u128;
        (order.pow(6) - 1) / (order - 1)
    }

    fn survey_one(&self, coeffs: [Felt; 6], validate: bool) -> SurveyOutcome {
        let conic = self
            .classify_conic(coeffs)
            .expect("survey conics are nonzero");
        let (zeros, projective) = self.eval_zeros(&coeffs);
        let sizes = IntersectionSizes {
            projective,
            affine: zeros.len() as u64,
        };
        let raw = [
            coeffs[0].0, coeffs[1].0, coeffs[2].0, coeffs[3].0, coeffs[4].0, coeffs[5].0,
        ];
        let (violation, line_types) = match self.pattern_match(&conic, sizes) {
            Ok(report) => {
                let violation = report.violation.then(|| Violation {
                    coeffs: raw,
                    kind: conic.kind,
                    projective_size: projective,
                    message: format!(
                        "no {:?} pattern admits projective size {projective}",
                        conic.kind
                    ),
                });
                (violation, report.line_types)
            }
            Err(e) => (
                Some(Violation {
                    coeffs: raw,
                    kind: conic.kind,
                    projective_size: projective,
                    message: e.to_string(),
                }),
                None,
            ),
        };
        let prop53 = validate.then(|| {
            let predicted = prop53_from_parts(conic.kind, projective, &line_types);
            let oracle = minimal::kernel_minimal_at(
                self.field(),
                &self.rows,
                self.measured_dimension,
                &zeros,
            );
            (predicted, oracle)
        });
        SurveyOutcome {
            kind: conic.kind,
            projective_size: projective,
            violation,
            prop53,
            coeffs: raw,
        }
    }

    /// Classify and size-check conics across the projective coefficient
    /// classes (exhaustive, capped) or a seeded uniform sample. Partial
    /// results merge additively in enumeration order, so the report does
    /// not depend on the worker count.
    pub fn survey(
        &self,
        mode: &SpectrumMode,
        validate_prop53: bool,
        cap: u64,
    ) -> Result<SurveyReport> {
        if validate_prop53 {
            self.prop53_supported()?;
        }
        let accum = match *mode {
            SpectrumMode::Exhaustive => {
                let count = self.class_count();
                if count > cap as u128 {
                    return Err(Error::EnumerationCapExceeded { count, cap });
                }
                (0..count as u64)
                    .into_par_iter()
                    .fold(SurveyAccum::default, |mut acc, idx| {
                        acc.absorb(self.survey_one(self.rep_at(idx as u128), validate_prop53));
                        acc
                    })
                    .reduce(SurveyAccum::default, SurveyAccum::merge)
            }
            SpectrumMode::Sampled { samples, seed } => {
                let ext = self.field();
                let order = ext.order();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut list = Vec::with_capacity(samples as usize);
                while list.len() < samples as usize {
                    let mut coeffs = [Felt::ZERO; 6];
                    for c in coeffs.iter_mut() {
                        *c = Felt(rng.gen_range(0..order));
                    }
                    if coeffs.iter().all(|c| c.is_zero()) {
                        continue;
                    }
                    let inv = ext.inv(*coeffs.iter().find(|c| !c.is_zero()).unwrap());
                    for c in coeffs.iter_mut() {
                        *c = ext.mul(*c, inv);
                    }
                    list.push(coeffs);
                }
                list.into_par_iter()
                    .fold(SurveyAccum::default, |mut acc, coeffs| {
                        acc.absorb(self.survey_one(coeffs, validate_prop53));
                        acc
                    })
                    .reduce(SurveyAccum::default, SurveyAccum::merge)
            }
        };
        let histogram = accum
            .hist
            .into_iter()
            .map(|((kind, projective_size), count)| HistogramRow {
                kind,
                projective_size,
                count,
            })
            .collect();
        let prop53 = validate_prop53.then(|| Prop53Report {
            checked: accum.p53_checked,
            agreements: accum.p53_agreements,
            disagreements: accum.p53_disagreements,
        });
        Ok(SurveyReport {
            checked: accum.checked,
            histogram,
            violations: accum.violations,
            prop53,
        })
    }
}

fn prop53_from_parts(
    kind: ConicKind,
    projective_size: u64,
    line_types: &Option<Vec<LineType>>,
) -> bool {
    match kind {
        ConicKind::Irreducible => projective_size > 4,
        ConicKind::TwoRationalLines => line_types
            .as_ref()
            .map_or(false, |ts| ts.iter().all(|&t| t == LineType::Secant)),
        _ => false,
    }
}

struct SurveyOutcome {
    kind: ConicKind,
    projective_size: u64,
    violation: Option<Violation>,
    prop53: Option<(bool, bool)>,
    coeffs: [u32; 6],
}

#[derive(Default)]
struct SurveyAccum {
    checked: u64,
    hist: BTreeMap<(ConicKind, u64), u64>,
    violations: Vec<Violation>,
    p53_checked: u64,
    p53_agreements: u64,
    p53_disagreements: Vec<Prop53Disagreement>,
}

impl SurveyAccum {
    fn absorb(&mut self, out: SurveyOutcome) {
        self.checked += 1;
        *self.hist.entry((out.kind, out.projective_size)).or_insert(0) += 1;
        if let Some(v) = out.violation {
            self.violations.push(v);
        }
        if let Some((predicted, oracle)) = out.prop53 {
            self.p53_checked += 1;
            if predicted == oracle {
                self.p53_agreements += 1;
            } else {
                self.p53_disagreements.push(Prop53Disagreement {
                    coeffs: out.coeffs,
                    kind: out.kind,
                    projective_size: out.projective_size,
                    predicted_minimal: predicted,
                    oracle_minimal: oracle,
                });
            }
        }
    }

    fn merge(mut self, other: SurveyAccum) -> SurveyAccum {
        self.checked += other.checked;
        for (key, count) in other.hist {
            *self.hist.entry(key).or_insert(0) += count;
        }
        self.violations.extend(other.violations);
        self.p53_checked += other.p53_checked;
        self.p53_agreements += other.p53_agreements;
        self.p53_disagreements.extend(other.p53_disagreements);
        self
    }
}
