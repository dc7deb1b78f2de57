//! Normalization of an arbitrary lattice presentation to the standard shape
//! `⟨Γ_r ∪ {(z₀, ξ₀, 1)}⟩` in Osc₁(ω_r, λ'B_{x',y'}).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::automorphism::Isomorphism;
use crate::classify::lattice::LatticeSpec;
use crate::error::{OscError, Result};
use crate::group::{
    gamma_member, vec_rational, GroupElement, Mat2, Osc, StructureMatrix, SymplecticForm, Vec2,
};
use crate::intlin::row_hnf;
use crate::scalar::{AngleSymbol, ExactScalar, Rational};

/// One generator `(z, ξ, t)` of a presentation. `t` may be any rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawElement {
    pub z: ExactScalar,
    pub xi: [Rational; 2],
    pub t: Rational,
}

impl RawElement {
    pub fn new(z: ExactScalar, xi: [Rational; 2], t: Rational) -> RawElement {
        RawElement { z, xi, t }
    }
}

/// `B = λ·B_{x,y}` with `λ` given as a rational multiple of π.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawStructure {
    pub lambda_over_pi: Rational,
    pub x: ExactScalar,
    pub y: ExactScalar,
}

/// Generators of a subgroup of Osc₁(κω₁, B).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLatticeInput {
    pub generators: Vec<RawElement>,
    pub form_scale: Rational,
    pub structure: RawStructure,
}

/// Basis data of `L ∩ H`: `ξ`-basis `(u, v)` with lifts `(z_u, u)`, `(z_v, v)`
/// and the generator `c` of the central part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergReduction {
    pub r: u64,
    pub u: [Rational; 2],
    pub v: [Rational; 2],
    pub z_u: ExactScalar,
    pub z_v: ExactScalar,
    pub center: ExactScalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationResult {
    pub r: u64,
    /// Change of basis on ξ: sends the basis `(u, v)` to `(e₁, e₂)`.
    pub s: Mat2,
    pub a: ExactScalar,
    pub b_vec: Vec2,
    /// Generator of the time projection of the input.
    pub t0: Rational,
    /// The angle after rescaling time by `1/t0`.
    pub lambda: AngleSymbol,
    /// z-coordinate of the image of the distinguished element before the
    /// final shift.
    pub z0: ExactScalar,
    pub xi0: [Rational; 2],
}

/// The normalized lattice together with the map that produced it.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub result: NormalizationResult,
    pub spec: LatticeSpec,
    /// Group of the input after time rescaling.
    pub rescaled: Osc,
    /// Isomorphism from `rescaled` onto the group of `spec`.
    pub map: Isomorphism,
}

impl Normalized {
    /// Image of an element of the original presentation.
    pub fn map_raw(&self, g: &RawElement) -> Result<GroupElement> {
        Ok(self.map.apply(&rescale(g, &self.result.t0)?))
    }
}

/// The element `(z, ξ, t/t0)` of the time-rescaled group.
pub fn rescale(g: &RawElement, t0: &Rational) -> Result<GroupElement> {
    let t = rational_to_i64(&(&g.t / t0)).ok_or_else(|| {
        OscError::NonLattice(format!("time value {} is not a multiple of t0 = {t0}", g.t))
    })?;
    Ok(GroupElement::new(
        g.z.clone(),
        [
            ExactScalar::from_rational(g.xi[0].clone()),
            ExactScalar::from_rational(g.xi[1].clone()),
        ],
        t,
    ))
}

fn rational_to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Positive generator of the additive group spanned by nonzero rationals.
pub fn rational_gcd(values: &[Rational]) -> Option<Rational> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut any = false;
    for v in values.iter().filter(|v| !v.is_zero()) {
        any = true;
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if any {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

/// Positive generator of the group spanned by `values`, which must lie on a
/// common rational line.
fn scalar_gcd(values: &[ExactScalar]) -> Result<Option<ExactScalar>> {
    let Some(v0) = values.iter().find(|v| !v.is_zero()) else {
        return Ok(None);
    };
    let mut ratios = Vec::new();
    for v in values {
        let q = v.checked_div(v0)?;
        match q.as_rational() {
            Some(q) => ratios.push(q.clone()),
            None => {
                return Err(OscError::NonLattice(
                    "central subgroup is not discrete".into(),
                ))
            }
        }
    }
    let g = rational_gcd(&ratios).expect("v0 itself is nonzero");
    Ok(Some(v0.scale(&g).abs()))
}

type HeisElement = (ExactScalar, [Rational; 2]);

fn heis_mul(form: &SymplecticForm, g: &HeisElement, h: &HeisElement) -> HeisElement {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let w = (&g.1[0] * &h.1[1] - &g.1[1] * &h.1[0]) * form.scale() * half;
    (
        &g.0 + &h.0 + ExactScalar::from_rational(w),
        [&g.1[0] + &h.1[0], &g.1[1] + &h.1[1]],
    )
}

fn heis_pow(g: &HeisElement, k: &BigInt) -> HeisElement {
    let kq = Rational::from_integer(k.clone());
    (g.0.scale(&kq), [&g.1[0] * &kq, &g.1[1] * &kq])
}

fn eval_word(form: &SymplecticForm, elems: &[HeisElement], word: &[BigInt]) -> HeisElement {
    let mut acc: HeisElement = (ExactScalar::zero(), [Rational::zero(), Rational::zero()]);
    for (e, k) in elems.iter().zip(word) {
        if !k.is_zero() {
            acc = heis_mul(form, &acc, &heis_pow(e, k));
        }
    }
    acc
}

/// Computes `r` and a normalized basis for the subgroup of `H₁(κω₁)`
/// generated by `elems`.
///
/// The ξ-projection is put into Hermite form over Z; the central part is
/// generated by the words of the kernel of the projection together with the
/// commutator of the two basis lifts.
pub fn reduce_heisenberg(
    form: &SymplecticForm,
    elems: &[HeisElement],
) -> Result<HeisenbergReduction> {
    if elems.is_empty() {
        return Err(OscError::NonLattice("no Heisenberg generators".into()));
    }
    let den = elems.iter().fold(BigInt::one(), |acc, e| {
        acc.lcm(e.1[0].denom()).lcm(e.1[1].denom())
    });
    let denq = Rational::from_integer(den.clone());
    let rows: Vec<Vec<BigInt>> = elems
        .iter()
        .map(|e| e.1.iter().map(|c| (c * &denq).to_integer()).collect())
        .collect();
    let hnf = row_hnf(&rows);
    if hnf.rank < 2 {
        return Err(OscError::NonLattice(
            "projection of the Heisenberg part has rank < 2".into(),
        ));
    }
    let lift = |j: usize| eval_word(form, elems, &hnf.transform[j]);
    let (mut z_u, mut u) = lift(0);
    let (mut z_v, mut v) = lift(1);
    let det = &u[0] * &v[1] - &u[1] * &v[0];
    if det.is_negative() {
        std::mem::swap(&mut u, &mut v);
        std::mem::swap(&mut z_u, &mut z_v);
    }
    let mut central = Vec::new();
    for word in hnf.kernel_rows() {
        let (z, xi) = eval_word(form, elems, word);
        if !xi.iter().all(Zero::is_zero) {
            return Err(OscError::Internal("kernel word has nonzero xi".into()));
        }
        central.push(z);
    }
    let uv = (&u[0] * &v[1] - &u[1] * &v[0]) * form.scale();
    central.push(ExactScalar::from_rational(uv.clone()));
    let c = scalar_gcd(&central)?.expect("commutator is nonzero");
    let r = ExactScalar::from_rational(uv.abs()).checked_div(&c)?;
    let r = r
        .to_integer()
        .and_then(|r| r.to_u64())
        .filter(|&r| r >= 1)
        .ok_or_else(|| {
            OscError::Internal(format!("|omega(u,v)|/c = {r} is not a positive integer"))
        })?;
    Ok(HeisenbergReduction {
        r,
        u,
        v,
        z_u,
        z_v,
        center: c,
    })
}

/// The Heisenberg invariant `r` of the group generated by `gens`, all of
/// which must have `t = 0`.
pub fn heisenberg_invariant(form_scale: &Rational, gens: &[RawElement]) -> Result<u64> {
    if gens.iter().any(|g| !g.t.is_zero()) {
        return Err(OscError::InvalidStructure(
            "Heisenberg generators must have t = 0".into(),
        ));
    }
    let form = SymplecticForm::scaled(form_scale.clone())?;
    let elems: Vec<HeisElement> = gens.iter().map(|g| (g.z.clone(), g.xi.clone())).collect();
    Ok(reduce_heisenberg(&form, &elems)?.r)
}

/// Integer coefficients `c` with `Σ cᵢ tᵢ = gcd(t)`.
fn bezout(ts: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut coeffs = vec![0i64; ts.len()];
    for (i, &t) in ts.iter().enumerate() {
        if t == 0 {
            continue;
        }
        // g' = x·g + y·t
        let (gg, x, y) = ext_gcd(g, t);
        for c in coeffs.iter_mut().take(i) {
            *c *= x;
        }
        coeffs[i] = y;
        g = gg;
    }
    if g < 0 {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -*c;
        }
    }
    (g, coeffs)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

fn to_heis(g: &GroupElement) -> Result<HeisElement> {
    let xi = vec_rational(&g.xi)
        .ok_or_else(|| OscError::NonLattice("e^B does not preserve a rational lattice".into()))?;
    Ok((g.z.clone(), xi))
}

/// Normalizes a presentation to the standard shape.
pub fn normalize(input: &RawLatticeInput) -> Result<Normalized> {
    if input.generators.is_empty() {
        return Err(OscError::NonLattice("no generators".into()));
    }
    let form = SymplecticForm::scaled(input.form_scale.clone())?;
    let ts: Vec<Rational> = input.generators.iter().map(|g| g.t.clone()).collect();
    let t0 = rational_gcd(&ts)
        .ok_or_else(|| OscError::NonLattice("time projection is trivial".into()))?;

    let mut lambda_q = &input.structure.lambda_over_pi * &t0;
    let mut y = input.structure.y.clone();
    if lambda_q.is_negative() {
        lambda_q = -lambda_q;
        y = -y;
    }
    let lambda = AngleSymbol::from_pi_multiple(&lambda_q).ok_or_else(|| {
        OscError::NonLattice(format!(
            "trace constraint: t0*lambda = {lambda_q}*pi is not in {{pi/3, pi/2, 2pi/3, pi}} + k*pi, \
             so tr(e^B) is not an integer"
        ))
    })?;
    let structure = StructureMatrix::new(lambda, input.structure.x.clone(), y)?;
    let group = Osc::new(form.clone(), structure.clone());

    let gens: Vec<GroupElement> = input
        .generators
        .iter()
        .map(|g| {
            let t = rational_to_i64(&(&g.t / &t0)).expect("t0 divides every t");
            GroupElement::new(
                g.z.clone(),
                [
                    ExactScalar::from_rational(g.xi[0].clone()),
                    ExactScalar::from_rational(g.xi[1].clone()),
                ],
                t,
            )
        })
        .collect();
    let tints: Vec<i64> = gens.iter().map(|g| g.t).collect();
    let (g1, coeffs) = bezout(&tints);
    debug_assert_eq!(g1, 1);
    let mut delta = GroupElement::identity();
    for (g, &c) in gens.iter().zip(&coeffs) {
        if c != 0 {
            delta = group.multiply(&delta, &group.pow(g, c));
        }
    }
    if delta.t != 1 {
        return Err(OscError::Internal("Bezout word does not have t = 1".into()));
    }

    let order = (1..=12)
        .find(|&k| structure.exp(k) == Mat2::identity())
        .expect("admissible angles have finite order");
    let hs: Vec<GroupElement> = gens
        .iter()
        .map(|g| group.multiply(g, &group.pow(&delta, -g.t)))
        .collect();
    let mut heis = Vec::new();
    for h in &hs {
        let mut conj = h.clone();
        for _ in 0..order {
            heis.push(to_heis(&conj)?);
            conj = group.conjugate(&delta, &conj);
        }
        heis.push(to_heis(&group.multiply(&conj, &group.invert(h)))?);
    }
    heis.retain(|e| !(e.0.is_zero() && e.1.iter().all(Zero::is_zero)));
    let red = reduce_heisenberg(&form, &heis)?;
    let r = red.r;

    let basis = Mat2::from_columns(
        &[
            ExactScalar::from_rational(red.u[0].clone()),
            ExactScalar::from_rational(red.u[1].clone()),
        ],
        &[
            ExactScalar::from_rational(red.v[0].clone()),
            ExactScalar::from_rational(red.v[1].clone()),
        ],
    );
    let s = basis.inverse()?;
    let rq = ExactScalar::from_int(r as i64);
    let a = (&rq * s.det()).checked_div(&ExactScalar::from_rational(form.scale().clone()))?;
    // Only the fractional part of a·z has to be absorbed; integers are in Γ_r.
    let frac = |z: &ExactScalar| {
        let az = &a * z;
        &az - ExactScalar::from_bigint(az.floor())
    };
    let w = [-frac(&red.z_u), -frac(&red.z_v)];
    let dvec = s.transpose().apply(&w);
    let n = Mat2::new(
        ExactScalar::zero(),
        rq.clone(),
        -rq.clone(),
        ExactScalar::zero(),
    );
    let b = s.transpose().mul(&n).inverse()?.apply(&dvec);

    let target_bxy = s.mul(structure.bxy()).mul(&basis);
    let target_structure = StructureMatrix::from_bxy_matrix(lambda, &target_bxy)?;
    let target = Osc::standard(r, target_structure.clone());
    let phi = Isomorphism::new(
        group.clone(),
        target.clone(),
        1,
        a.clone(),
        ExactScalar::zero(),
        b.clone(),
        s.clone(),
    )?;

    let lift = |z: &ExactScalar, xi: &[Rational; 2]| {
        GroupElement::new(
            z.clone(),
            [
                ExactScalar::from_rational(xi[0].clone()),
                ExactScalar::from_rational(xi[1].clone()),
            ],
            0,
        )
    };
    let images = [
        (phi.apply(&lift(&red.z_u, &red.u)).xi, crate::group::e1()),
        (phi.apply(&lift(&red.z_v, &red.v)).xi, crate::group::e2()),
    ];
    let center_image = phi.apply(&GroupElement::central(red.center.clone()));
    if images.iter().any(|(have, want)| have != want)
        || center_image != GroupElement::central(ExactScalar::one())
        || !gamma_member(&phi.apply(&lift(&red.z_u, &red.u)), r)
        || !gamma_member(&phi.apply(&lift(&red.z_v, &red.v)), r)
    {
        return Err(OscError::Internal(
            "normalization does not send L ∩ H onto Γ_r".into(),
        ));
    }

    let image = phi.apply(&delta);
    let z0 = image.z.clone();
    let xi0 = vec_rational(&image.xi)
        .ok_or_else(|| OscError::NonLattice("normalized xi0 is irrational".into()))?;
    let map = Isomorphism::m_shift(&target, -z0.clone()).compose(&phi)?;

    let nvec: [BigInt; 2] = [xi0[0].floor().to_integer(), xi0[1].floor().to_integer()];
    let frac = [
        &xi0[0] - Rational::from_integer(nvec[0].clone()),
        &xi0[1] - Rational::from_integer(nvec[1].clone()),
    ];
    let nv = [
        ExactScalar::from_bigint(nvec[0].clone()),
        ExactScalar::from_bigint(nvec[1].clone()),
    ];
    let xi0v = [
        ExactScalar::from_rational(xi0[0].clone()),
        ExactScalar::from_rational(xi0[1].clone()),
    ];
    let half_r = ExactScalar::frac(r as i64, 2);
    let z_spec = -(&half_r * &nv[0] * &nv[1]) - ExactScalar::frac(1, 2) * target.omega(&nv, &xi0v);
    let spec = LatticeSpec::new(r, target_structure, frac, z_spec);

    for g in gens.iter().chain(std::iter::once(&delta)) {
        if !spec.contains(&map.apply(g)) {
            return Err(OscError::Internal(format!(
                "normalized image of generator {g} is not in the standard lattice"
            )));
        }
    }

    Ok(Normalized {
        result: NormalizationResult {
            r,
            s,
            a,
            b_vec: b,
            t0,
            lambda,
            z0,
            xi0: spec.xi0.clone(),
        },
        spec,
        rescaled: group,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn el(z: ExactScalar, x1: Rational, x2: Rational, t: Rational) -> RawElement {
        RawElement::new(z, [x1, x2], t)
    }

    fn gamma_gens() -> Vec<RawElement> {
        vec![
            el(ExactScalar::one(), rat_int(0), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(1), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(0), rat_int(1), rat_int(0)),
        ]
    }

    fn quarter(lambda_over_pi: Rational) -> RawStructure {
        RawStructure {
            lambda_over_pi,
            x: ExactScalar::zero(),
            y: ExactScalar::one(),
        }
    }

    #[test]
    fn invariant_of_standard_lattices() {
        assert_eq!(heisenberg_invariant(&rat_int(1), &gamma_gens()).unwrap(), 1);
        assert_eq!(heisenberg_invariant(&rat_int(2), &gamma_gens()).unwrap(), 2);
        // Unimodular substitution ξ ↦ [[1,1],[0,1]]ξ.
        let gens = vec![
            el(ExactScalar::one(), rat_int(0), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(1), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(1), rat_int(1), rat_int(0)),
        ];
        assert_eq!(heisenberg_invariant(&rat_int(2), &gens).unwrap(), 2);
    }

    #[test]
    fn invariant_without_explicit_center() {
        // The commutator of the two ξ-generators alone gives the center.
        let gens = vec![
            el(ExactScalar::zero(), rat_int(1), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(0), rat_int(1), rat_int(0)),
        ];
        assert_eq!(heisenberg_invariant(&rat_int(3), &gens).unwrap(), 1);
        let gens = vec![
            el(ExactScalar::frac(1, 2), rat_int(0), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(1), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(0), rat_int(1), rat_int(0)),
        ];
        assert_eq!(heisenberg_invariant(&rat_int(3), &gens).unwrap(), 6);
    }

    #[test]
    fn rank_deficiency_is_rejected() {
        let gens = vec![
            el(ExactScalar::one(), rat_int(0), rat_int(0), rat_int(0)),
            el(ExactScalar::zero(), rat_int(1), rat_int(2), rat_int(0)),
        ];
        assert!(heisenberg_invariant(&rat_int(1), &gens)
            .unwrap_err()
            .is_rejection());
    }

    #[test]
    fn identity_normalization() {
        let mut gens = gamma_gens();
        gens.push(el(ExactScalar::zero(), rat_int(0), rat_int(0), rat_int(1)));
        let input = RawLatticeInput {
            generators: gens,
            form_scale: rat_int(2),
            structure: quarter(rat(1, 2)),
        };
        let n = normalize(&input).unwrap();
        assert_eq!(n.result.r, 2);
        assert_eq!(n.result.t0, rat_int(1));
        assert_eq!(n.result.s, Mat2::identity());
        assert_eq!(n.spec.xi0, [rat_int(0), rat_int(0)]);
        assert!(n.spec.z0.is_zero());
    }

    #[test]
    fn time_rescaling_and_z_shift() {
        let mut gens = gamma_gens();
        gens.push(el(
            ExactScalar::from_int(5),
            rat_int(0),
            rat(1, 2),
            rat_int(2),
        ));
        let input = RawLatticeInput {
            generators: gens,
            form_scale: rat_int(2),
            structure: quarter(rat(1, 4)),
        };
        let n = normalize(&input).unwrap();
        assert_eq!(n.result.t0, rat_int(2));
        assert_eq!(n.result.lambda, AngleSymbol::parse("pi/2").unwrap());
        assert_eq!(n.spec.xi0, [rat_int(0), rat(1, 2)]);
        assert_eq!(n.result.z0, ExactScalar::from_int(5));
        assert!(n.result.b_vec.iter().all(ExactScalar::is_zero));
        let img = n.map_raw(&input.generators[3]).unwrap();
        assert_eq!(img.z, ExactScalar::zero());
    }

    #[test]
    fn fractional_time_generator() {
        let mut gens = gamma_gens();
        gens.push(el(ExactScalar::zero(), rat_int(0), rat_int(0), rat(1, 3)));
        let input = RawLatticeInput {
            generators: gens,
            form_scale: rat_int(1),
            structure: quarter(rat(3, 2)),
        };
        let n = normalize(&input).unwrap();
        assert_eq!(n.result.t0, rat(1, 3));
        assert_eq!(n.result.lambda, AngleSymbol::parse("pi/2").unwrap());
    }

    #[test]
    fn inadmissible_angle_is_rejected() {
        let mut gens = gamma_gens();
        gens.push(el(ExactScalar::zero(), rat_int(0), rat_int(0), rat_int(1)));
        let input = RawLatticeInput {
            generators: gens,
            form_scale: rat_int(1),
            structure: quarter(rat(1, 4)),
        };
        let err = normalize(&input).unwrap_err();
        assert!(err.is_rejection());
        assert!(err.to_string().contains("trace constraint"));
    }

    #[test]
    fn bezout_coefficients() {
        let (g, c) = bezout(&[6, 10, 15]);
        assert_eq!(g, 1);
        assert_eq!(6 * c[0] + 10 * c[1] + 15 * c[2], 1);
        let (g, c) = bezout(&[0, -4, 6]);
        assert_eq!(g, 2);
        assert_eq!(-4 * c[1] + 6 * c[2], 2);
    }
}
