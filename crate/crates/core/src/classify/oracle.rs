//! Brute-force orbit enumeration of the admissible `ξ₀` under the
//! Γ_r-preserving automorphisms. Used as an independent check of the
//! closed-form table and of the constructive canonicalization.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::automorphism::{gamma_preserving_generators, Automorphism};
use crate::classify::lattice::{lattice_condition, reduce_mod1, Xi};
use crate::error::{OscError, Result};
use crate::group::{vec_rational, GroupElement, IntMat2, Osc, StructureMatrix};
use crate::scalar::{ExactScalar, Rational};

/// The admissible `ξ₀` of a cell, sorted, and their orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub r: u64,
    pub points: Vec<Xi>,
    /// Orbit index of each point.
    pub class: Vec<usize>,
    /// Point indices of each orbit, sorted; orbits ordered by their minimum.
    pub classes: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn index_of(&self, xi: &Xi) -> Option<usize> {
        self.points.binary_search(&reduce_mod1(xi)).ok()
    }

    pub fn class_of(&self, xi: &Xi) -> Option<usize> {
        self.index_of(xi).map(|i| self.class[i])
    }

    /// Lexicographically smallest member of the orbit of `ξ`.
    pub fn representative(&self, xi: &Xi) -> Option<&Xi> {
        self.class_of(xi).map(|c| &self.points[self.classes[c][0]])
    }

    pub fn representatives(&self) -> Vec<Xi> {
        self.classes
            .iter()
            .map(|c| self.points[c[0]].clone())
            .collect()
    }
}

/// All `ξ ∈ [0,1)²` with `(ω_r(ξ, e^B eᵢ), e^B eᵢ, 0) ∈ Γ_r`, sorted.
///
/// Every solution lies in `(1/2r)Z²`, so the grid is searched exhaustively.
pub fn admissible_xi(r: u64, e: &IntMat2) -> Vec<Xi> {
    let n = 2 * r as i64;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let xi = [
                Rational::new(i.into(), n.into()),
                Rational::new(j.into(), n.into()),
            ];
            if lattice_condition(r, e, &xi).is_ok() {
                out.push(xi);
            }
        }
    }
    out.sort();
    out
}

/// `ξ ↦ Mξ + v` on `(1/2r)Z² / Z²`, stored on the numerators.
#[derive(Debug, Clone)]
struct GridMap {
    m: [[i64; 2]; 2],
    v: [i64; 2],
}

fn xi_part(group: &Osc, phi: &Automorphism, xi: &Xi) -> Result<Xi> {
    let g = GroupElement::new(
        ExactScalar::zero(),
        [
            ExactScalar::from_rational(xi[0].clone()),
            ExactScalar::from_rational(xi[1].clone()),
        ],
        1,
    );
    let mut img = phi.apply(&g);
    if img.t == -1 {
        img = group.invert(&img);
    }
    if img.t != 1 {
        return Err(OscError::Internal("generator changed |t|".into()));
    }
    vec_rational(&img.xi).ok_or_else(|| OscError::Internal("irrational xi image".into()))
}

fn to_grid(q: &Rational, n: i64) -> Result<i64> {
    let v = q * Rational::from_integer(BigInt::from(n));
    if !v.is_integer() {
        return Err(OscError::Internal(format!("{q} is off the 1/{n} grid")));
    }
    let v = v.to_integer().mod_floor(&BigInt::from(n));
    v.to_i64()
        .ok_or_else(|| OscError::Internal("grid coordinate overflow".into()))
}

fn grid_maps(group: &Osc, r: u64) -> Result<Vec<GridMap>> {
    let n = 2 * r as i64;
    let gens = gamma_preserving_generators(&group.structure, r);
    let zero = Rational::zero;
    let one = || Rational::from_integer(1.into());
    let mut out = Vec::with_capacity(gens.len());
    let mut linear: HashMap<(Vec<String>, i8), [[i64; 2]; 2]> = HashMap::new();
    for phi in &gens {
        let f0 = xi_part(group, phi, &[zero(), zero()])?;
        // The linear part only depends on (S, μ).
        let key = (
            phi.s.m.iter().flatten().map(|v| v.to_string()).collect(),
            phi.mu,
        );
        let m = match linear.get(&key) {
            Some(m) => *m,
            None => {
                let f1 = xi_part(group, phi, &[one(), zero()])?;
                let f2 = xi_part(group, phi, &[zero(), one()])?;
                let mut m = [[0i64; 2]; 2];
                for row in 0..2 {
                    for (col, f) in [&f1, &f2].into_iter().enumerate() {
                        let d = &f[row] - &f0[row];
                        if !d.is_integer() {
                            return Err(OscError::Internal("non-integer linear part".into()));
                        }
                        m[row][col] = d
                            .to_integer()
                            .to_i64()
                            .ok_or_else(|| OscError::Internal("matrix overflow".into()))?;
                    }
                }
                linear.insert(key, m);
                m
            }
        };
        out.push(GridMap {
            m,
            v: [to_grid(&f0[0], n)?, to_grid(&f0[1], n)?],
        });
    }
    Ok(out)
}

fn partition_uncached(r: u64, structure: &StructureMatrix) -> Result<OrbitPartition> {
    let e = structure.exp_integer().ok_or_else(|| {
        OscError::NonLattice(format!(
            "e^B = {} is not an integer matrix",
            structure.exp(1)
        ))
    })?;
    let group = Osc::standard(r, structure.clone());
    let points = admissible_xi(r, &e);
    let n = 2 * r as i64;
    let maps = grid_maps(&group, r)?;
    let mut index = HashMap::new();
    for (i, xi) in points.iter().enumerate() {
        index.insert([to_grid(&xi[0], n)?, to_grid(&xi[1], n)?], i);
    }
    let bound = (r * r) as usize;
    let mut class = vec![usize::MAX; points.len()];
    let mut classes = Vec::new();
    for start in 0..points.len() {
        if class[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![start];
        class[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let x = [to_grid(&points[i][0], n)?, to_grid(&points[i][1], n)?];
            for g in &maps {
                let y = [
                    (g.m[0][0] * x[0] + g.m[0][1] * x[1] + g.v[0]).rem_euclid(n),
                    (g.m[1][0] * x[0] + g.m[1][1] * x[1] + g.v[1]).rem_euclid(n),
                ];
                let &j = index.get(&y).ok_or_else(|| {
                    OscError::Internal(format!(
                        "generator leaves the admissible set at ({}, {})",
                        points[i][0], points[i][1]
                    ))
                })?;
                if class[j] == usize::MAX {
                    class[j] = id;
                    members.push(j);
                    queue.push_back(j);
                } else if class[j] != id {
                    return Err(OscError::Internal("orbits overlap".into()));
                }
            }
        }
        if members.len() > bound {
            return Err(OscError::Internal(format!(
                "orbit of size {} exceeds r^2 = {bound}",
                members.len()
            )));
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(OrbitPartition {
        r,
        points,
        class,
        classes,
    })
}

type CacheKey = (u64, u8, ExactScalar, ExactScalar);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<OrbitPartition>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<OrbitPartition>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The orbit partition for `(r, B)`. Results are memoized per
/// `(r, λ mod 2π, x, y)`, which is all the partition depends on.
pub fn orbit_partition(r: u64, structure: &StructureMatrix) -> Result<Arc<OrbitPartition>> {
    if r == 0 {
        return Err(OscError::InvalidStructure("r must be positive".into()));
    }
    let key = (
        r,
        structure.lambda().sixths_mod12(),
        structure.x().clone(),
        structure.y().clone(),
    );
    if let Some(p) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(p.clone());
    }
    let part = Arc::new(partition_uncached(r, structure)?);
    cache()
        .lock()
        .expect("cache poisoned")
        .insert(key, part.clone());
    Ok(part)
}

/// Lexicographically smallest member of the orbit of `ξ`.
pub fn canonical_xi_oracle(xi: &Xi, r: u64, structure: &StructureMatrix) -> Result<Xi> {
    let part = orbit_partition(r, structure)?;
    part.representative(xi).cloned().ok_or_else(|| {
        OscError::NotAdmissible(format!(
            "xi0 = ({}, {}) is not admissible for r = {r}",
            xi[0], xi[1]
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::lattice::FundamentalPoint;
    use crate::scalar::{rat, AngleBase, AngleSymbol};

    fn quarter() -> StructureMatrix {
        FundamentalPoint::square()
            .structure(AngleSymbol::new(AngleBase::PiHalf, 0))
            .unwrap()
    }

    #[test]
    fn admissible_sets() {
        let e = IntMat2::from_i64(0, -1, 1, 0);
        assert_eq!(admissible_xi(2, &e).len(), 4);
        let hex = FundamentalPoint::hexagonal()
            .structure(AngleSymbol::new(AngleBase::PiThird, 0))
            .unwrap();
        assert_eq!(
            admissible_xi(1, &hex.exp_integer().unwrap()),
            vec![[rat(1, 2), rat(0, 1)]]
        );
        assert_eq!(admissible_xi(3, &IntMat2::identity()).len(), 9);
        for r in 1..6 {
            assert_eq!(admissible_xi(r, &e).len() as u64, r * r);
        }
    }

    #[test]
    fn quarter_turn_partition() {
        let part = orbit_partition(2, &quarter()).unwrap();
        assert_eq!(part.classes.len(), 2);
        assert_eq!(
            canonical_xi_oracle(&[rat(0, 1), rat(0, 1)], 2, &quarter()).unwrap(),
            [rat(0, 1), rat(0, 1)]
        );
        assert_eq!(
            canonical_xi_oracle(&[rat(1, 2), rat(0, 1)], 2, &quarter()).unwrap(),
            [rat(0, 1), rat(1, 2)]
        );
    }

    #[test]
    fn full_turn_square_r4() {
        let s = FundamentalPoint::square()
            .structure(AngleSymbol::new(AngleBase::Pi, 1))
            .unwrap();
        let part = orbit_partition(4, &s).unwrap();
        assert_eq!(part.points.len(), 16);
        assert_eq!(part.classes.len(), 6);
    }
}
