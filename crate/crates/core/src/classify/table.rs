//! Closed-form table of canonical `ξ₀` and its regeneration by orbit
//! enumeration.

use std::collections::BTreeSet;

use crate::classify::lattice::{check_compatible, xi_string, FundamentalPoint, PointClass, Xi};
use crate::classify::oracle::orbit_partition;
use crate::error::{OscError, Result};
use crate::scalar::{rat, AngleSymbol, Rational};

/// One canonical representative with the size of its class in the
/// admissible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub xi0: Xi,
    pub class_size: usize,
}

fn p(n1: i64, d1: i64, n2: i64, d2: i64) -> Xi {
    [rat(n1, d1), rat(n2, d2)]
}

/// Row test for `λ ≡ 0 mod 2π` on `(k/r, l/r)`, `0 ≤ k, l < r`.
pub fn full_turn_member(class: PointClass, r: i64, k: i64, l: i64) -> bool {
    // the band 0 < k < r/2 < l < r
    let band = 0 < k && 2 * k < r && r < 2 * l && l < r;
    match class {
        PointClass::Interior => (2 * k <= r && 2 * l <= r) || band,
        PointClass::ImaginaryAxis => 2 * k <= r && 2 * l <= r,
        PointClass::HalfLine => {
            (2 * k <= l && 2 * l <= r) || (l == 0 && 2 * k <= r) || (band && 2 * k <= l)
        }
        PointClass::Arc => (k <= l && 2 * l <= r) || (band && k + l <= r),
        PointClass::Square => k <= l && 2 * l <= r,
        PointClass::Hexagonal => 2 * k <= l && 2 * l <= k + r,
    }
}

/// The canonical representatives listed for `(λ mod 2π, point class, r)`,
/// sorted lexicographically.
pub fn closed_form(lambda: AngleSymbol, class: PointClass, r: u64) -> Vec<Xi> {
    let ri = r as i64;
    let even = r % 2 == 0;
    let three = r % 3 == 0;
    let (rr, h) = ((1, ri), (1, 2 * ri));
    let zero = (0, 1);
    let pt = |a: (i64, i64), b: (i64, i64)| p(a.0, a.1, b.0, b.1);
    let mut out: Vec<Xi> = match lambda.sixths_mod12() {
        // π/3
        2 => vec![if even { pt(zero, zero) } else { pt(h, zero) }],
        // 5π/3
        10 => vec![if even { pt(zero, zero) } else { pt(zero, h) }],
        // π/2, 3π/2
        3 | 9 => {
            if even {
                vec![pt(zero, zero), pt(zero, rr)]
            } else {
                vec![pt(zero, zero)]
            }
        }
        // 2π/3, 4π/3
        4 | 8 if even => {
            if three {
                vec![pt(zero, zero), pt(rr, zero)]
            } else {
                vec![pt(zero, zero)]
            }
        }
        4 => {
            if three {
                vec![pt(zero, h), pt(rr, h)]
            } else {
                vec![pt(zero, h)]
            }
        }
        8 => {
            let first = pt(h, zero);
            if three {
                vec![
                    first,
                    [
                        rat(1, 2 * ri) + rat(1, ri),
                        Rational::from_integer(0.into()),
                    ],
                ]
            } else {
                vec![first]
            }
        }
        // π
        6 => {
            if !even {
                vec![pt(zero, zero)]
            } else {
                match class {
                    PointClass::Interior | PointClass::ImaginaryAxis => {
                        vec![pt(zero, zero), pt(rr, zero), pt(zero, rr), pt(rr, rr)]
                    }
                    PointClass::HalfLine | PointClass::Arc | PointClass::Square => {
                        vec![pt(zero, zero), pt(rr, zero), pt(rr, rr)]
                    }
                    PointClass::Hexagonal => vec![pt(zero, zero), pt(rr, rr)],
                }
            }
        }
        // 2π
        0 => {
            let mut v = Vec::new();
            for k in 0..ri {
                for l in 0..ri {
                    if full_turn_member(class, ri, k, l) {
                        v.push(p(k, ri, l, ri));
                    }
                }
            }
            v
        }
        _ => unreachable!("admissible angles are multiples of pi/6 in {{0,2,3,4,6,8,9,10}}"),
    };
    out.sort();
    out.dedup();
    out
}

/// Signature of a closed-form source, so that the regeneration check can be
/// run against a deliberately corrupted table.
pub type ClosedForm = dyn Fn(AngleSymbol, PointClass, u64) -> Vec<Xi> + Sync;

/// The table cell for `(λ, point, r)`, checked against the orbit
/// decomposition of the admissible set.
pub fn canonical_table(
    lambda: AngleSymbol,
    point: &FundamentalPoint,
    r: u64,
) -> Result<Vec<TableEntry>> {
    canonical_table_with(&closed_form, lambda, point, r)
}

pub fn canonical_table_with(
    closed: &ClosedForm,
    lambda: AngleSymbol,
    point: &FundamentalPoint,
    r: u64,
) -> Result<Vec<TableEntry>> {
    check_compatible(lambda, point)?;
    let structure = point.structure(lambda)?;
    let part = orbit_partition(r, &structure)?;
    let reps = closed(lambda, point.class(), r);
    let mismatch = |why: String| {
        OscError::Internal(format!(
            "table mismatch at lambda={lambda} point={point} r={r}: {why}"
        ))
    };
    let mut hit = BTreeSet::new();
    let mut out = Vec::new();
    for xi in &reps {
        let class = part
            .class_of(xi)
            .ok_or_else(|| mismatch(format!("{} is not admissible", xi_string(xi))))?;
        if !hit.insert(class) {
            return Err(mismatch(format!(
                "{} shares its orbit with another listed representative",
                xi_string(xi)
            )));
        }
        out.push(TableEntry {
            xi0: xi.clone(),
            class_size: part.classes[class].len(),
        });
    }
    if hit.len() != part.classes.len() {
        return Err(mismatch(format!(
            "{} orbits but {} listed representatives",
            part.classes.len(),
            reps.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::AngleBase;

    fn ang(base: AngleBase, k: u64) -> AngleSymbol {
        AngleSymbol::new(base, k)
    }

    #[test]
    fn anchors() {
        for r in [2u64, 4, 6] {
            assert_eq!(
                closed_form(ang(AngleBase::PiHalf, 0), PointClass::Square, r),
                vec![p(0, 1, 0, 1), p(0, 1, 1, r as i64)]
            );
        }
        assert_eq!(
            closed_form(ang(AngleBase::PiThird, 0), PointClass::Hexagonal, 3),
            vec![p(1, 6, 0, 1)]
        );
        assert_eq!(
            closed_form(ang(AngleBase::TwoPiThird, 0), PointClass::Hexagonal, 6),
            vec![p(0, 1, 0, 1), p(1, 6, 0, 1)]
        );
        assert_eq!(
            closed_form(ang(AngleBase::Pi, 0), PointClass::Interior, 4).len(),
            4
        );
        assert_eq!(
            closed_form(ang(AngleBase::Pi, 1), PointClass::Square, 4).len(),
            6
        );
        assert_eq!(
            closed_form(ang(AngleBase::Pi, 1), PointClass::Square, 2),
            vec![p(0, 1, 0, 1), p(0, 1, 1, 2), p(1, 2, 1, 2)]
        );
    }

    #[test]
    fn four_pi_thirds_odd_r() {
        assert_eq!(
            closed_form(ang(AngleBase::PiThird, 1), PointClass::Hexagonal, 3),
            vec![p(1, 6, 0, 1), p(1, 2, 0, 1)]
        );
    }

    #[test]
    fn regenerated_small_cells() {
        let sq = FundamentalPoint::square();
        let t = canonical_table(ang(AngleBase::Pi, 1), &sq, 4).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.iter().map(|e| e.class_size).sum::<usize>(), 16);
        let t = canonical_table(
            ang(AngleBase::TwoPiThird, 0),
            &FundamentalPoint::hexagonal(),
            2,
        )
        .unwrap();
        assert_eq!(t.len(), 1);
        assert!(
            canonical_table(ang(AngleBase::PiHalf, 0), &FundamentalPoint::hexagonal(), 2).is_err()
        );
    }

    #[test]
    fn corrupted_rows_are_caught() {
        let bad = |l: AngleSymbol, c: PointClass, r: u64| {
            let mut v = closed_form(l, c, r);
            v.pop();
            v
        };
        let sq = FundamentalPoint::square();
        assert!(canonical_table_with(&bad, ang(AngleBase::PiHalf, 0), &sq, 2).is_err());
    }
}
