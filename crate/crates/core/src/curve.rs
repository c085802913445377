//! Affine points of the curve N(x) = T(y) in A²(F_{q^r}), where N and T
//! are the norm and trace down to F_q. For r = 2 the curve is the
//! Hermitian curve x^(q+1) = y^q + y, and the one extra projective point
//! (0 : 1 : 0) completes it to q³ + 1 points in P².

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{Felt, Tower};

pub struct NormTraceCurve {
    tower: Arc<Tower>,
    points: Vec<(Felt, Felt)>,
    index: HashMap<(u32, u32), usize>,
}

impl NormTraceCurve {
    /// Enumerate every affine point, ascending in x then in y. The count
    /// is always q^(2r-1): each of the q^r abscissas contributes the full
    /// trace fiber of its norm, of size q^(r-1).
    pub fn enumerate_affine(tower: Arc<Tower>, cap: u64) -> Result<NormTraceCurve> {
        let q = tower.q() as u64;
        let expected = q
            .checked_pow(2 * tower.r() - 1)
            .ok_or_else(|| Error::InvalidParameter("q^(2r-1) overflows".into()))?;
        if expected > cap {
            return Err(Error::EnumerationCapExceeded {
                count: expected as u128,
                cap,
            });
        }
        let fibers = tower.trace_fibers();
        let mut points = Vec::with_capacity(expected as usize);
        for x in tower.ext().elements() {
            let c = tower.norm(x);
            for &y in &fibers[c.0 as usize] {
                points.push((x, y));
            }
        }
        assert_eq!(points.len() as u64, expected, "point count is q^(2r-1)");
        let index = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| ((x.0, y.0), i))
            .collect();
        Ok(NormTraceCurve {
            tower,
            points,
            index,
        })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(Felt, Felt)] {
        &self.points
    }

    /// Membership test straight from the defining equation.
    pub fn contains(&self, x: Felt, y: Felt) -> bool {
        self.tower.norm(x) == self.tower.trace(y)
    }

    /// Position of (x, y) in the canonical enumeration.
    pub fn position(&self, x: Felt, y: Felt) -> Option<usize> {
        self.index.get(&(x.0, y.0)).copied()
    }

    /// For r = 2: the q³ + 1 projective points of the Hermitian curve,
    /// affine points first (curve order, embedded as (x : y : 1)), then
    /// the single point at infinity (0 : 1 : 0).
    pub fn hermitian_projective_points(&self) -> Result<Vec<[Felt; 3]>> {
        if self.tower.r() != 2 {
            return Err(Error::RequiresQuadraticTower(self.tower.r()));
        }
        let mut out: Vec<[Felt; 3]> = self
            .points
            .iter()
            .map(|&(x, y)| [x, y, Felt::ONE])
            .collect();
        out.push([Felt::ZERO, Felt::ONE, Felt::ZERO]);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::DEFAULT_FIELD_CAP;
    use crate::DEFAULT_ENUM_CAP;

    fn curve(p: u32, m: u32, r: u32) -> NormTraceCurve {
        let tower = Arc::new(Tower::build(p, m, r, DEFAULT_FIELD_CAP).unwrap());
        NormTraceCurve::enumerate_affine(tower, DEFAULT_ENUM_CAP).unwrap()
    }

    #[test]
    fn affine_point_counts_are_q_to_the_2r_minus_1() {
        for (p, m, r, expected) in [
            (2, 1, 2, 8usize),
            (3, 1, 2, 27),
            (2, 2, 2, 64),
            (5, 1, 2, 125),
            (2, 1, 3, 32),
            (3, 1, 3, 243),
        ] {
            assert_eq!(curve(p, m, r).len(), expected, "({p},{m},{r})");
        }
    }

    #[test]
    fn f4_curve_has_the_expected_ordered_points() {
        let c = curve(2, 1, 2);
        let got: Vec<(u32, u32)> = c.points().iter().map(|&(x, y)| (x.0, y.0)).collect();
        assert_eq!(
            got,
            vec![
                (0, 0),
                (0, 1),
                (1, 2),
                (1, 3),
                (2, 2),
                (2, 3),
                (3, 2),
                (3, 3)
            ]
        );
    }

    #[test]
    fn membership_matches_the_examples() {
        let c = curve(2, 1, 2);
        assert!(c.contains(Felt(0), Felt(0)));
        assert!(c.contains(Felt(1), Felt(2)), "(1, ω) lies on the curve");
        assert!(!c.contains(Felt(1), Felt(0)));
    }

    #[test]
    fn every_abscissa_carries_a_full_fiber() {
        for (p, m, r) in [(2, 1, 2), (3, 1, 2), (2, 1, 3)] {
            let c = curve(p, m, r);
            let q = c.tower().q() as usize;
            let fiber = q.pow(r - 1);
            let mut per_x: HashMap<u32, usize> = HashMap::new();
            for &(x, _) in c.points() {
                *per_x.entry(x.0).or_default() += 1;
            }
            assert_eq!(per_x.len(), c.tower().ext().order() as usize);
            assert!(per_x.values().all(|&n| n == fiber));
        }
    }

    #[test]
    fn position_inverts_the_enumeration() {
        let c = curve(3, 1, 2);
        for (i, &(x, y)) in c.points().iter().enumerate() {
            assert_eq!(c.position(x, y), Some(i));
        }
        assert_eq!(c.position(Felt(1), Felt(0)), None);
    }

    #[test]
    fn hermitian_coincidence_for_r_2() {
        // For r = 2 the defining equation coincides with the Hermitian
        // one: N(x) = T(y) iff x^(q+1) = y^q + y, checked pointwise on
        // all of F_{q²} × F_{q²}.
        for (p, m) in [(2, 1), (3, 1), (2, 2)] {
            let c = curve(p, m, 2);
            let t = c.tower();
            let ext = t.ext();
            let q = t.q() as u64;
            for x in ext.elements() {
                for y in ext.elements() {
                    let lhs = ext.pow(x, q + 1);
                    let rhs = ext.add(ext.pow(y, q), y);
                    assert_eq!(c.contains(x, y), lhs == rhs, "x={} y={}", x.0, y.0);
                }
            }
        }
    }

    #[test]
    fn projective_closure_adds_one_point_at_infinity() {
        for (p, m) in [(2, 1), (3, 1)] {
            let c = curve(p, m, 2);
            let q = c.tower().q() as usize;
            let proj = c.hermitian_projective_points().unwrap();
            assert_eq!(proj.len(), q * q * q + 1);
            assert_eq!(proj[proj.len() - 1], [Felt(0), Felt(1), Felt(0)]);
        }
        let cubic = curve(2, 1, 3);
        assert!(cubic.hermitian_projective_points().is_err());
    }
}
