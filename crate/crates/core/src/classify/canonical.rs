//! Constructive choice of the canonical `ξ₀` and an explicit automorphism
//! realizing it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::automorphism::{gamma_coset_base, integer_s_set, Automorphism, Isomorphism};
use crate::classify::lattice::{
    lattice_condition, reduce_mod1, xi_string, FundamentalPoint, LatticeSpec, Xi,
};
use crate::classify::table::{closed_form, full_turn_member};
use crate::error::{OscError, Result};
use crate::group::{gamma_member, vec_rational, GroupElement, IntMat2};
use crate::scalar::{rat, AngleSymbol, ExactScalar, Rational};

fn big(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

fn scaled(xi: &Xi, r: u64) -> [Rational; 2] {
    let rq = Rational::from_integer(BigInt::from(r));
    [&xi[0] * &rq, &xi[1] * &rq]
}

fn not_admissible(xi: &Xi, r: u64) -> OscError {
    OscError::NotAdmissible(format!(
        "xi0 = {} is not admissible for r = {r}",
        xi_string(xi)
    ))
}

/// Applies the integer matrix to `ξ` and reduces mod Z².
fn act(m: &IntMat2, xi: &Xi) -> Xi {
    let q = |v: &BigInt| Rational::from_integer(v.clone());
    reduce_mod1(&[
        q(&m.m[0][0]) * &xi[0] + q(&m.m[0][1]) * &xi[1],
        q(&m.m[1][0]) * &xi[0] + q(&m.m[1][1]) * &xi[1],
    ])
}

/// The canonical representative of the class of an admissible `ξ`.
///
/// Residue tests pick the representative directly for every angle except
/// full turns, where the orbit `{det(S)·Sξ}` is small and is intersected with
/// the listed set.
pub fn canonical_xi_constructive(
    xi: &Xi,
    r: u64,
    lambda: AngleSymbol,
    point: &FundamentalPoint,
) -> Result<Xi> {
    let structure = point.structure(lambda)?;
    let e = structure.exp_integer().ok_or_else(|| {
        OscError::Incompatible(format!(
            "angle {lambda} and point {point} give non-integer e^B"
        ))
    })?;
    let xi = reduce_mod1(xi);
    lattice_condition(r, &e, &xi).map_err(|_| not_admissible(&xi, r))?;
    let reps = closed_form(lambda, point.class(), r);
    let rx = scaled(&xi, r);
    let even = r % 2 == 0;
    let pick = |i: usize| Ok(reps[i].clone());
    match lambda.sixths_mod12() {
        2 | 10 => pick(0),
        3 | 9 => {
            if !even {
                return pick(0);
            }
            let d = big(&(&rx[0] - &rx[1])).ok_or_else(|| not_admissible(&xi, r))?;
            // (0,0) when rξ₁ − rξ₂ is even, (0, 1/r) otherwise
            pick(d.rem_euclid(2) as usize)
        }
        4 | 8 => {
            if r % 3 != 0 {
                return pick(0);
            }
            let mut s = &rx[0] + &rx[1];
            if !even {
                s -= rat(1, 2);
            }
            let s = big(&s).ok_or_else(|| not_admissible(&xi, r))?.rem_euclid(3);
            if even {
                pick(usize::from(s != 0))
            } else {
                pick(usize::from(s == 1))
            }
        }
        6 => {
            if !even {
                return pick(0);
            }
            let eta = [
                big(&rx[0])
                    .ok_or_else(|| not_admissible(&xi, r))?
                    .rem_euclid(2),
                big(&rx[1])
                    .ok_or_else(|| not_admissible(&xi, r))?
                    .rem_euclid(2),
            ];
            use crate::classify::lattice::PointClass as C;
            let eta = match (point.class(), eta) {
                (C::HalfLine, [0, 1]) => [1, 1],
                (C::Arc | C::Square, [0, 1]) => [1, 0],
                (C::Hexagonal, [0, 0]) => [0, 0],
                (C::Hexagonal, _) => [1, 1],
                (_, v) => v,
            };
            Ok([rat(eta[0], r as i64), rat(eta[1], r as i64)])
        }
        0 => {
            let mut found: Vec<Xi> = Vec::new();
            for (s, mu) in integer_s_set(&structure) {
                let m = if mu == 1 { s } else { s.neg() };
                let cand = act(&m, &xi);
                let sc = scaled(&cand, r);
                let (Some(k), Some(l)) = (big(&sc[0]), big(&sc[1])) else {
                    return Err(not_admissible(&xi, r));
                };
                if full_turn_member(point.class(), r as i64, k, l) && !found.contains(&cand) {
                    found.push(cand);
                }
            }
            match found.as_slice() {
                [one] => Ok(one.clone()),
                _ => Err(OscError::Internal(format!(
                    "orbit of {} meets the listed set in {} points",
                    xi_string(&xi),
                    found.len()
                ))),
            }
        }
        j => Err(OscError::Internal(format!(
            "angle of {j} sixths of pi is not admissible"
        ))),
    }
}

/// Solves `(E − I)b ≡ c (mod Z²)` with `b ∈ base + (1/r)Z²`.
fn solve_shift(e: &IntMat2, c: &Xi, base: &[Rational; 2], r: u64) -> Option<[Rational; 2]> {
    let one = BigInt::from(1);
    let a = [
        [&e.m[0][0] - &one, e.m[0][1].clone()],
        [e.m[1][0].clone(), &e.m[1][1] - &one],
    ];
    if a.iter().flatten().all(Zero::is_zero) {
        let ok = c.iter().all(|v| v.is_integer());
        return ok.then(|| base.clone());
    }
    let q = |v: &BigInt| Rational::from_integer(v.clone());
    let rq = Rational::from_integer(BigInt::from(r));
    // w = r·(c − A·base) must be integral
    let ab = [
        q(&a[0][0]) * &base[0] + q(&a[0][1]) * &base[1],
        q(&a[1][0]) * &base[0] + q(&a[1][1]) * &base[1],
    ];
    let w = [(&c[0] - &ab[0]) * &rq, (&c[1] - &ab[1]) * &rq];
    if !w.iter().all(|v| v.is_integer()) {
        return None;
    }
    let w = [w[0].to_integer(), w[1].to_integer()];
    let d = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    let adj = [
        [a[1][1].clone(), -a[0][1].clone()],
        [-a[1][0].clone(), a[0][0].clone()],
    ];
    let rb = BigInt::from(r);
    let dn = d.abs().to_i64()?;
    for n1 in 0..dn {
        for n2 in 0..dn {
            let t = [&w[0] + &rb * n1, &w[1] + &rb * n2];
            let v = [
                &adj[0][0] * &t[0] + &adj[0][1] * &t[1],
                &adj[1][0] * &t[0] + &adj[1][1] * &t[1],
            ];
            if v.iter().all(|x| x.is_multiple_of(&d)) {
                let beta = [&v[0] / &d, &v[1] / &d];
                return Some([
                    &base[0] + Rational::new(beta[0].clone(), rb.clone()),
                    &base[1] + Rational::new(beta[1].clone(), rb.clone()),
                ]);
            }
        }
    }
    None
}

/// A Γ_r-preserving automorphism of the group of `spec` mapping the lattice
/// of `spec` onto `L(target)`. Fails when `target` is not in the class.
pub fn canonical_witness(spec: &LatticeSpec, target: &Xi) -> Result<Automorphism> {
    let r = spec.r;
    let group = spec.group();
    let e = spec.validate()?;
    let target = reduce_mod1(target);
    let target_spec = LatticeSpec::new(
        r,
        spec.structure.clone(),
        target.clone(),
        ExactScalar::zero(),
    );
    let target_delta = target_spec.delta();
    for (s, mu) in integer_s_set(&spec.structure) {
        let m = if mu == 1 { s.clone() } else { e.mul(&s).neg() };
        let mx = act(&m, &spec.xi0);
        let c = [&target[0] - &mx[0], &target[1] - &mx[1]];
        let base = gamma_coset_base(&s, r);
        let Some(b) = solve_shift(&e, &c, &base, r) else {
            continue;
        };
        let b = [
            ExactScalar::from_rational(b[0].clone()),
            ExactScalar::from_rational(b[1].clone()),
        ];
        let a = ExactScalar::from_int(mu as i64);
        let build = |m: ExactScalar| {
            Isomorphism::automorphism(&group, mu, a.clone(), m, b.clone(), s.to_mat2())
        };
        let phi = build(ExactScalar::zero())?;
        let mut d = phi.apply(&spec.delta());
        if d.t == -1 {
            d = group.invert(&d);
        }
        let w = group.multiply(&d, &group.invert(&target_delta));
        let n = vec_rational(&w.xi).ok_or_else(|| OscError::Internal("irrational xi".into()))?;
        if w.t != 0 || !n.iter().all(|v| v.is_integer()) {
            return Err(OscError::Internal(format!(
                "shift solution for {} misses the target",
                xi_string(&spec.xi0)
            )));
        }
        let half_r = ExactScalar::from_rational(Rational::new(BigInt::from(r), BigInt::from(2)));
        let excess = &w.z - half_r * &w.xi[0] * &w.xi[1];
        let excess = &excess - ExactScalar::from_bigint(excess.floor());
        // m enters φ(δ) with the sign of μ after passing back to t = 1
        let m_val = if mu == 1 { -excess } else { excess };
        let phi = build(m_val)?;
        let img = phi.apply(&spec.delta());
        let ok = target_spec.contains(&img)
            && crate::automorphism::gamma_generators()
                .iter()
                .all(|g| gamma_member(&phi.apply(g), r));
        if !ok {
            return Err(OscError::Internal(format!(
                "witness for {} -> {} does not map the lattice onto its target",
                xi_string(&spec.xi0),
                xi_string(&target)
            )));
        }
        return Ok(phi);
    }
    Err(OscError::NotAdmissible(format!(
        "{} and {} are not in the same class",
        xi_string(&spec.xi0),
        xi_string(&target)
    )))
}

/// `GroupElement` version of `(0, ξ, 1)`.
pub fn xi_element(xi: &Xi) -> GroupElement {
    GroupElement::new(
        ExactScalar::zero(),
        [
            ExactScalar::from_rational(xi[0].clone()),
            ExactScalar::from_rational(xi[1].clone()),
        ],
        1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::lattice::PointClass;
    use crate::classify::oracle::admissible_xi;
    use crate::scalar::AngleBase;

    fn ang(base: AngleBase, k: u64) -> AngleSymbol {
        AngleSymbol::new(base, k)
    }

    #[test]
    fn examples() {
        let sq = FundamentalPoint::square();
        assert_eq!(
            canonical_xi_constructive(&[rat(1, 2), rat(0, 1)], 2, ang(AngleBase::PiHalf, 0), &sq)
                .unwrap(),
            [rat(0, 1), rat(1, 2)]
        );
        assert_eq!(
            canonical_xi_constructive(&[rat(1, 2), rat(0, 1)], 2, ang(AngleBase::Pi, 1), &sq)
                .unwrap(),
            [rat(0, 1), rat(1, 2)]
        );
        let hex = FundamentalPoint::hexagonal();
        let e = hex
            .structure(ang(AngleBase::PiThird, 0))
            .unwrap()
            .exp_integer()
            .unwrap();
        for xi in admissible_xi(4, &e) {
            assert_eq!(
                canonical_xi_constructive(&xi, 4, ang(AngleBase::PiThird, 0), &hex).unwrap(),
                [rat(0, 1), rat(0, 1)]
            );
        }
        assert!(canonical_xi_constructive(
            &[rat(1, 4), rat(0, 1)],
            2,
            ang(AngleBase::PiHalf, 0),
            &sq
        )
        .is_err());
    }

    #[test]
    fn witnesses_exist_for_every_admissible_point() {
        for class in PointClass::ALL {
            let point = class.sample();
            for base in AngleBase::ALL {
                for k in 0..2 {
                    let lambda = ang(base, k);
                    if crate::classify::lattice::check_compatible(lambda, &point).is_err() {
                        continue;
                    }
                    let structure = point.structure(lambda).unwrap();
                    let e = structure.exp_integer().unwrap();
                    for r in 1..=4 {
                        for xi in admissible_xi(r, &e) {
                            let rep = canonical_xi_constructive(&xi, r, lambda, &point).unwrap();
                            let spec = LatticeSpec::new(
                                r,
                                structure.clone(),
                                xi.clone(),
                                ExactScalar::frac(1, 3),
                            );
                            canonical_witness(&spec, &rep).unwrap_or_else(|err| {
                                panic!("{lambda} {class} r={r} {}: {err}", xi_string(&xi))
                            });
                        }
                    }
                }
            }
        }
    }
}
