//! Isomorphisms between oscillator groups of the shape
//! `(z,ξ,t) ↦ (az + ½ω(Sξ, e^{tμB}b + b) + mt + ½ω(e^{tμB}b, b), Sξ + e^{tμB}b − b, μt)`,
//! the Γ_r-preserving automorphisms and the integer conjugation isomorphisms.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{OscError, Result};
use crate::group::{
    gamma_member, vadd, vneg, vsub, zero_vec, GroupElement, IntMat2, Mat2, Osc, StructureMatrix,
    Vec2,
};
use crate::scalar::{rat, ExactScalar, Rational};

/// The data `(μ, a, m, b, S)` together with source and target groups.
///
/// All formulas use the target's form and structure matrix, so the map is a
/// homomorphism `source → target` whenever `S*ω_target = a·ω_source` and
/// `S·B_source = μ·B_target·S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub mu: i8,
    pub a: ExactScalar,
    pub m: ExactScalar,
    pub b: Vec2,
    pub s: Mat2,
    source: Osc,
    target: Osc,
}

/// An isomorphism whose source and target coincide.
pub type Automorphism = Isomorphism;

impl Isomorphism {
    pub fn new(
        source: Osc,
        target: Osc,
        mu: i8,
        a: ExactScalar,
        m: ExactScalar,
        b: Vec2,
        s: Mat2,
    ) -> Result<Isomorphism> {
        if mu != 1 && mu != -1 {
            return Err(OscError::InvalidAutomorphism(format!(
                "mu = {mu} is not ±1"
            )));
        }
        if a.is_zero() {
            return Err(OscError::InvalidAutomorphism("a = 0".into()));
        }
        if source.structure.lambda() != target.structure.lambda() {
            return Err(OscError::InvalidAutomorphism(format!(
                "angles differ: {} vs {}",
                source.structure.lambda(),
                target.structure.lambda()
            )));
        }
        let pulled = s.det().scale(target.form.scale());
        if pulled != a.scale(source.form.scale()) {
            return Err(OscError::InvalidAutomorphism(format!(
                "S*omega != a*omega (det S = {}, a = {a})",
                s.det()
            )));
        }
        let lhs = s.mul(source.structure.bxy());
        let rhs = target
            .structure
            .bxy()
            .mul(&s)
            .scale(&ExactScalar::from_int(mu as i64));
        if lhs != rhs {
            return Err(OscError::InvalidAutomorphism(format!(
                "S B != mu B S for S = {s}, mu = {mu}"
            )));
        }
        Ok(Isomorphism {
            mu,
            a,
            m,
            b,
            s,
            source,
            target,
        })
    }

    pub fn automorphism(
        group: &Osc,
        mu: i8,
        a: ExactScalar,
        m: ExactScalar,
        b: Vec2,
        s: Mat2,
    ) -> Result<Automorphism> {
        Isomorphism::new(group.clone(), group.clone(), mu, a, m, b, s)
    }

    pub fn identity(group: &Osc) -> Automorphism {
        Isomorphism::automorphism(
            group,
            1,
            ExactScalar::one(),
            ExactScalar::zero(),
            zero_vec(),
            Mat2::identity(),
        )
        .expect("identity is valid")
    }

    /// `(z,ξ,t) ↦ (z + mt, ξ, t)`.
    pub fn m_shift(group: &Osc, m: ExactScalar) -> Automorphism {
        Isomorphism::automorphism(
            group,
            1,
            ExactScalar::one(),
            m,
            zero_vec(),
            Mat2::identity(),
        )
        .expect("m-shift is valid")
    }

    /// `(z,ξ,t) ↦ (z, ξ, −t)` from Osc(ω, B) to Osc(ω, −B).
    pub fn time_reversal(group: &Osc) -> Isomorphism {
        let target = Osc::new(group.form.clone(), group.structure.negated());
        Isomorphism::new(
            group.clone(),
            target,
            -1,
            ExactScalar::one(),
            ExactScalar::zero(),
            zero_vec(),
            Mat2::identity(),
        )
        .expect("time reversal is valid")
    }

    pub fn source(&self) -> &Osc {
        &self.source
    }

    pub fn target(&self) -> &Osc {
        &self.target
    }

    pub fn is_automorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        let t = g.t;
        let eb = self.target.structure.exp(self.mu as i64 * t).apply(&self.b);
        let sxi = self.s.apply(&g.xi);
        let half = ExactScalar::frac(1, 2);
        let z = &self.a * &g.z
            + &half * self.target.omega(&sxi, &vadd(&eb, &self.b))
            + &self.m * ExactScalar::from_int(t)
            + &half * self.target.omega(&eb, &self.b);
        let xi = vsub(&vadd(&sxi, &eb), &self.b);
        GroupElement::new(z, xi, self.mu as i64 * t)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isomorphism) -> Result<Isomorphism> {
        if other.target != self.source {
            return Err(OscError::MismatchedGroups(
                "target of the inner map differs from the source of the outer map".into(),
            ));
        }
        let b = vadd(&self.s.apply(&other.b), &self.b);
        let mut out = Isomorphism::new(
            other.source.clone(),
            self.target.clone(),
            self.mu * other.mu,
            &self.a * &other.a,
            ExactScalar::zero(),
            b,
            self.s.mul(&other.s),
        )?;
        let probe = GroupElement::new(ExactScalar::zero(), zero_vec(), 1);
        let want = self.apply(&other.apply(&probe));
        let have = out.apply(&probe);
        out.m = &want.z - &have.z;
        if out.apply(&probe) != want {
            return Err(OscError::Internal("composition mismatch".into()));
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Isomorphism> {
        let s_inv = self.s.inverse()?;
        let b = vneg(&s_inv.apply(&self.b));
        let mut inv = Isomorphism::new(
            self.target.clone(),
            self.source.clone(),
            self.mu,
            self.a.checked_recip()?,
            ExactScalar::zero(),
            b,
            s_inv,
        )?;
        let c = self.compose(&inv)?;
        if c.s != Mat2::identity() || c.b.iter().any(|v| !v.is_zero()) || !c.a.is_one() || c.mu != 1
        {
            return Err(OscError::Internal("inverse does not cancel".into()));
        }
        inv.m = -(&c.m / &self.a);
        Ok(inv)
    }

    /// The integer matrix S, when it is one.
    pub fn s_integer(&self) -> Option<IntMat2> {
        self.s.to_int()
    }
}

/// All integer matrices in `{e^{tB}} ∪ {e^{tB}[[1,−2x],[0,−1]]}` for
/// `B = B_{x,y}`, with `μ = det S`.
pub fn integer_s_set(b: &StructureMatrix) -> Vec<(IntMat2, i8)> {
    let x = b.x();
    let y = b.y();
    let y2 = y * y;
    let xy2 = x * x + &y2;
    let bound = y.abs().recip().floor();
    let bound = bound.to_i64().expect("bound fits i64");
    let mut out = BTreeSet::new();
    for n in -bound..=bound {
        let nn = ExactScalar::from_int(n);
        let nx = &nn * x;
        let lo = (&nx - ExactScalar::one()).floor();
        let hi = (&nx + ExactScalar::one()).floor();
        let mut p = lo;
        while p <= hi {
            let c = ExactScalar::from_bigint(p.clone()) - &nx;
            if (&c * &c + &nn * &nn * &y2).is_one() {
                let first = Mat2::new(&c + &nx, -(&nn * &xy2), nn.clone(), &c - &nx);
                let second = Mat2::new(
                    &c + &nx,
                    ExactScalar::from_int(-2) * x * &c + &nn * (&y2 - x * x),
                    nn.clone(),
                    -(&c) - &nx,
                );
                for m in [first, second] {
                    if let Some(im) = m.to_int() {
                        out.insert(im);
                    }
                }
            }
            p += 1;
        }
    }
    out.into_iter()
        .map(|m| {
            let mu = if m.det().is_positive() { 1 } else { -1 };
            (m, mu)
        })
        .collect()
}

fn is_even(v: &BigInt) -> bool {
    v.is_even()
}

/// The base point of the admissible `b` coset of a Γ_r-preserving
/// automorphism with integer matrix `S`.
pub fn gamma_coset_base(s: &IntMat2, r: u64) -> [Rational; 2] {
    let zero = Rational::zero;
    if r % 2 == 0 {
        return [zero(), zero()];
    }
    let h = rat(1, 2 * r as i64);
    let e12 = is_even(&(&s.m[0][0] * &s.m[0][1]));
    let e34 = is_even(&(&s.m[1][0] * &s.m[1][1]));
    match (e12, e34) {
        (true, false) => [zero(), h],
        (false, true) => [h, zero()],
        _ => [zero(), zero()],
    }
}

/// The `b` of the integer conjugation isomorphism for `S`.
pub fn conjugation_shift(s: &IntMat2) -> [Rational; 2] {
    let e12 = is_even(&(&s.m[0][0] * &s.m[0][1]));
    let e34 = is_even(&(&s.m[1][0] * &s.m[1][1]));
    match (e12, e34) {
        (true, false) => [Rational::zero(), rat(1, 2)],
        (false, true) => [rat(1, 2), Rational::zero()],
        _ => [Rational::zero(), Rational::zero()],
    }
}

fn in_coset(b: &Vec2, base: &[Rational; 2], r: u64) -> bool {
    let rr = Rational::from_integer(BigInt::from(r));
    b.iter().zip(base).all(|(bi, ci)| match bi.as_rational() {
        Some(q) => ((q - ci) * &rr).is_integer(),
        None => false,
    })
}

/// True when `φ` is an automorphism of Osc₁(ω_r, B) of the Γ_r-preserving
/// shape: integer `S` from [`integer_s_set`], `a = μ = det S`, and `b` in the
/// coset prescribed by the parities of `s₁s₂` and `s₃s₄`.
pub fn is_gamma_preserving(phi: &Automorphism, r: u64) -> bool {
    if !phi.is_automorphism() || phi.source.form.r() != Some(r) {
        return false;
    }
    let Some(s) = phi.s_integer() else {
        return false;
    };
    let det = s.det();
    let mu = BigInt::from(phi.mu);
    if det != mu || phi.a != ExactScalar::from_int(phi.mu as i64) {
        return false;
    }
    if !integer_s_set(&phi.source.structure)
        .iter()
        .any(|(m, _)| *m == s)
    {
        return false;
    }
    in_coset(&phi.b, &gamma_coset_base(&s, r), r)
}

/// Every integer `S` paired with every coset representative `b ∈ [0,1)²`,
/// `m = 0`.
pub fn gamma_preserving_generators(b: &StructureMatrix, r: u64) -> Vec<Automorphism> {
    let group = Osc::standard(r, b.clone());
    let mut out = Vec::new();
    for (s, mu) in integer_s_set(b) {
        let base = gamma_coset_base(&s, r);
        for i in 0..r as i64 {
            for j in 0..r as i64 {
                let bv = [
                    ExactScalar::from_rational(&base[0] + rat(i, r as i64)),
                    ExactScalar::from_rational(&base[1] + rat(j, r as i64)),
                ];
                let phi = Isomorphism::automorphism(
                    &group,
                    mu,
                    ExactScalar::from_int(mu as i64),
                    ExactScalar::zero(),
                    bv,
                    s.to_mat2(),
                )
                .expect("S-set members give automorphisms");
                out.push(phi);
            }
        }
    }
    out
}

/// The isomorphism `Osc₁(ω_r, B) → Osc₁(ω_r, SBS⁻¹)` for a unimodular integer
/// `S`, mapping Γ_r onto Γ_r and `(0,0,1)` to an element with `t = 1`.
pub fn conjugating_iso(s: &IntMat2, r: u64, b: &StructureMatrix) -> Result<Isomorphism> {
    let det = s.det();
    if !(det.is_one() || (-&det).is_one()) {
        return Err(OscError::InvalidAutomorphism(format!(
            "conjugator {s} is not unimodular"
        )));
    }
    let sm = s.to_mat2();
    let conj = sm.mul(b.bxy()).mul(&sm.inverse()?);
    let target_b = StructureMatrix::from_bxy_matrix(b.lambda(), &conj)?;
    let shift = conjugation_shift(s);
    Isomorphism::new(
        Osc::standard(r, b.clone()),
        Osc::standard(r, target_b),
        1,
        ExactScalar::from_bigint(det),
        ExactScalar::zero(),
        [
            ExactScalar::from_rational(shift[0].clone()),
            ExactScalar::from_rational(shift[1].clone()),
        ],
        sm,
    )
}

/// Images of the generators of Γ_r under `φ`, and of their preimages.
pub fn maps_gamma_onto_gamma(phi: &Isomorphism, r: u64) -> Result<bool> {
    let gens = gamma_generators();
    let inv = phi.inverse()?;
    Ok(gens
        .iter()
        .all(|g| gamma_member(&phi.apply(g), r) && gamma_member(&inv.apply(g), r)))
}

/// `(1,0,0), (0,e₁,0), (0,e₂,0)`.
pub fn gamma_generators() -> [GroupElement; 3] {
    [
        GroupElement::central(ExactScalar::one()),
        GroupElement::new(ExactScalar::zero(), crate::group::e1(), 0),
        GroupElement::new(ExactScalar::zero(), crate::group::e2(), 0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{AngleBase, AngleSymbol};

    fn s(x: &str) -> ExactScalar {
        x.parse().unwrap()
    }

    fn structure(base: AngleBase, x: &str, y: &str) -> StructureMatrix {
        StructureMatrix::new(AngleSymbol::new(base, 0), s(x), s(y)).unwrap()
    }

    fn el(z: &str, x1: &str, x2: &str, t: i64) -> GroupElement {
        GroupElement::new(s(z), [s(x1), s(x2)], t)
    }

    #[test]
    fn identity_and_m_shift() {
        let g = Osc::standard(2, structure(AngleBase::PiHalf, "0", "1"));
        let x = el("3/5", "1/3", "-2", 3);
        assert_eq!(Isomorphism::identity(&g).apply(&x), x);
        let sh = Isomorphism::m_shift(&g, ExactScalar::from_int(5));
        assert_eq!(sh.apply(&el("0", "0", "0", 1)), el("5", "0", "0", 1));
        assert_eq!(
            sh.inverse().unwrap(),
            Isomorphism::m_shift(&g, ExactScalar::from_int(-5))
        );
    }

    #[test]
    fn half_shift_at_quarter_turn() {
        // e^B b = (0, 1/2); ½ω₂((0,1/2), (1/2,0)) = ½·2·(−1/4) = −1/4.
        let g = Osc::standard(2, structure(AngleBase::PiHalf, "0", "1"));
        let phi = Isomorphism::automorphism(
            &g,
            1,
            ExactScalar::one(),
            ExactScalar::zero(),
            [s("1/2"), s("0")],
            Mat2::identity(),
        )
        .unwrap();
        let img = phi.apply(&el("0", "0", "0", 1));
        assert_eq!(img, el("-1/4", "-1/2", "1/2", 1));
        // Conjugation by (0, −b, 0) gives the same element.
        let c = GroupElement::new(ExactScalar::zero(), [s("-1/2"), s("0")], 0);
        assert_eq!(g.conjugate(&c, &el("0", "0", "0", 1)), img);
    }

    #[test]
    fn compose_with_identity_and_translations() {
        let g = Osc::standard(3, structure(AngleBase::PiHalf, "0", "1"));
        let id = Isomorphism::identity(&g);
        let phi = Isomorphism::automorphism(
            &g,
            -1,
            ExactScalar::from_int(-1),
            s("2/3"),
            [s("1/3"), s("1/6")],
            Mat2::from_ints(1, 0, 0, -1),
        )
        .unwrap();
        assert_eq!(id.compose(&phi).unwrap(), phi);
        let t1 = Isomorphism::automorphism(
            &g,
            1,
            ExactScalar::one(),
            ExactScalar::zero(),
            [s("1/3"), s("0")],
            Mat2::identity(),
        )
        .unwrap();
        let t2 = Isomorphism::automorphism(
            &g,
            1,
            ExactScalar::one(),
            ExactScalar::zero(),
            [s("0"), s("2/3")],
            Mat2::identity(),
        )
        .unwrap();
        let c = t1.compose(&t2).unwrap();
        assert_eq!(c.b, [s("1/3"), s("2/3")]);
        for x in [
            el("1", "1/2", "1/3", 2),
            el("-2", "0", "5", -1),
            el("0", "0", "0", 1),
        ] {
            assert_eq!(c.apply(&x), t1.apply(&t2.apply(&x)));
        }
    }

    #[test]
    fn s_sets() {
        assert_eq!(
            integer_s_set(&structure(AngleBase::PiHalf, "0", "1")).len(),
            8
        );
        let hex = integer_s_set(&structure(AngleBase::PiThird, "1/2", "1/2*sqrt(3)"));
        assert_eq!(hex.len(), 12);
        assert!(hex
            .iter()
            .any(|(m, mu)| *m == IntMat2::from_i64(1, -1, 0, -1) && *mu == -1));
        assert!(hex
            .iter()
            .any(|(m, mu)| *m == IntMat2::from_i64(0, -1, 1, -1) && *mu == 1));
        let generic = integer_s_set(&structure(AngleBase::Pi, "1/4", "2"));
        let mats: Vec<_> = generic.into_iter().map(|(m, _)| m).collect();
        assert_eq!(
            mats,
            vec![IntMat2::from_i64(-1, 0, 0, -1), IntMat2::identity()]
        );
    }

    #[test]
    fn s_set_matches_brute_force() {
        for (x, y) in [
            ("0", "1"),
            ("1/2", "1/2*sqrt(3)"),
            ("1/4", "2"),
            ("0", "2"),
            ("1/2", "1"),
        ] {
            let b = structure(AngleBase::Pi, x, y);
            let set: BTreeSet<IntMat2> = integer_s_set(&b).into_iter().map(|(m, _)| m).collect();
            let mut brute = BTreeSet::new();
            for a in -3..=3 {
                for bb in -3..=3 {
                    for c in -3..=3 {
                        for d in -3..=3 {
                            let m = IntMat2::from_i64(a, bb, c, d);
                            let det = m.det();
                            if !(det.is_one() || (-&det).is_one()) {
                                continue;
                            }
                            let mm = m.to_mat2();
                            let lhs = mm.mul(b.bxy());
                            let rhs = b.bxy().mul(&mm).scale(&ExactScalar::from_bigint(det));
                            if lhs == rhs {
                                brute.insert(m);
                            }
                        }
                    }
                }
            }
            assert_eq!(set, brute, "point ({x}, {y})");
        }
    }

    #[test]
    fn gamma_preserving_examples() {
        let b = structure(AngleBase::PiHalf, "0", "1");
        let g2 = Osc::standard(2, b.clone());
        let g1 = Osc::standard(1, b.clone());
        assert!(is_gamma_preserving(&Isomorphism::identity(&g2), 2));
        let shift = |g: &Osc| {
            Isomorphism::automorphism(
                g,
                1,
                ExactScalar::one(),
                ExactScalar::zero(),
                [s("1/2"), s("0")],
                Mat2::identity(),
            )
            .unwrap()
        };
        assert!(is_gamma_preserving(&shift(&g2), 2));
        assert!(!is_gamma_preserving(&shift(&g1), 1));
    }

    #[test]
    fn generator_counts() {
        let b = structure(AngleBase::PiHalf, "0", "1");
        assert_eq!(gamma_preserving_generators(&b, 1).len(), 8);
        let b = structure(AngleBase::Pi, "1/4", "2");
        let gens = gamma_preserving_generators(&b, 2);
        assert_eq!(gens.len(), 8);
        let g = Osc::standard(2, b);
        assert!(gens.contains(&Isomorphism::identity(&g)));
        assert!(gens.iter().all(|p| is_gamma_preserving(p, 2)));
    }

    #[test]
    fn conjugation_shifts() {
        assert_eq!(
            conjugation_shift(&IntMat2::identity()),
            [rat(0, 1), rat(0, 1)]
        );
        assert_eq!(
            conjugation_shift(&IntMat2::from_i64(0, -1, 1, 0)),
            [rat(0, 1), rat(0, 1)]
        );
        assert_eq!(
            conjugation_shift(&IntMat2::from_i64(1, 0, 1, 1)),
            [rat(0, 1), rat(1, 2)]
        );
        let b = structure(AngleBase::Pi, "1/4", "2");
        for r in 1..=4 {
            let phi = conjugating_iso(&IntMat2::from_i64(1, 0, 1, 1), r, &b).unwrap();
            assert!(maps_gamma_onto_gamma(&phi, r).unwrap());
            assert_eq!(phi.apply(&el("0", "0", "0", 1)).t, 1);
        }
        assert!(conjugating_iso(&IntMat2::from_i64(2, 0, 0, 1), 1, &b).is_err());
    }
}
