//! The oscillator group Osc₁(ω, λB_{x,y}): forms, structure matrices and
//! element arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{OscError, Result};
use crate::scalar::{AngleSymbol, ExactScalar, Rational, Sign};

pub type Vec2 = [ExactScalar; 2];

pub fn vec2(x: ExactScalar, y: ExactScalar) -> Vec2 {
    [x, y]
}

pub fn vec2_rat(x: &Rational, y: &Rational) -> Vec2 {
    [
        ExactScalar::from_rational(x.clone()),
        ExactScalar::from_rational(y.clone()),
    ]
}

pub fn zero_vec() -> Vec2 {
    [ExactScalar::zero(), ExactScalar::zero()]
}

pub fn e1() -> Vec2 {
    [ExactScalar::one(), ExactScalar::zero()]
}

pub fn e2() -> Vec2 {
    [ExactScalar::zero(), ExactScalar::one()]
}

pub fn vadd(u: &Vec2, v: &Vec2) -> Vec2 {
    [&u[0] + &v[0], &u[1] + &v[1]]
}

pub fn vsub(u: &Vec2, v: &Vec2) -> Vec2 {
    [&u[0] - &v[0], &u[1] - &v[1]]
}

pub fn vneg(u: &Vec2) -> Vec2 {
    [-&u[0], -&u[1]]
}

pub fn vscale(c: &ExactScalar, u: &Vec2) -> Vec2 {
    [c * &u[0], c * &u[1]]
}

/// `ξ₁η₂ − ξ₂η₁`.
pub fn det2(u: &Vec2, v: &Vec2) -> ExactScalar {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Both coordinates as rationals, if they are.
pub fn vec_rational(v: &Vec2) -> Option<[Rational; 2]> {
    Some([v[0].as_rational()?.clone(), v[1].as_rational()?.clone()])
}

/// A 2×2 matrix over the exact scalars, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub m: [[ExactScalar; 2]; 2],
}

impl Mat2 {
    pub fn new(a: ExactScalar, b: ExactScalar, c: ExactScalar, d: ExactScalar) -> Mat2 {
        Mat2 {
            m: [[a, b], [c, d]],
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Mat2 {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn zero() -> Mat2 {
        Mat2::from_ints(0, 0, 0, 0)
    }

    pub fn scalar(c: ExactScalar) -> Mat2 {
        Mat2::new(c.clone(), ExactScalar::zero(), ExactScalar::zero(), c)
    }

    pub fn from_columns(u: &Vec2, v: &Vec2) -> Mat2 {
        Mat2::new(u[0].clone(), v[0].clone(), u[1].clone(), v[1].clone())
    }

    pub fn column(&self, j: usize) -> Vec2 {
        [self.m[0][j].clone(), self.m[1][j].clone()]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        [
            &self.m[0][0] * &v[0] + &self.m[0][1] * &v[1],
            &self.m[1][0] * &v[0] + &self.m[1][1] * &v[1],
        ]
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.m[i][j] + &o.m[i][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.m[i][j] - &o.m[i][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, c: &ExactScalar) -> Mat2 {
        let e = |i: usize, j: usize| c * &self.m[i][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn neg(&self) -> Mat2 {
        self.scale(&ExactScalar::from_int(-1))
    }

    pub fn det(&self) -> ExactScalar {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn trace(&self) -> ExactScalar {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(
            self.m[0][0].clone(),
            self.m[1][0].clone(),
            self.m[0][1].clone(),
            self.m[1][1].clone(),
        )
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(OscError::DivisionByZero);
        }
        let inv = det.recip();
        Ok(Mat2::new(
            &self.m[1][1] * &inv,
            -(&self.m[0][1] * &inv),
            -(&self.m[1][0] * &inv),
            &self.m[0][0] * &inv,
        ))
    }

    pub fn is_integer(&self) -> bool {
        self.m.iter().flatten().all(ExactScalar::is_integer)
    }

    pub fn to_int(&self) -> Option<IntMat2> {
        let e = |i: usize, j: usize| self.m[i][j].to_integer();
        Some(IntMat2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

/// A 2×2 integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat2 {
    pub m: [[BigInt; 2]; 2],
}

impl IntMat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> IntMat2 {
        IntMat2 {
            m: [[a, b], [c, d]],
        }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> IntMat2 {
        IntMat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> IntMat2 {
        IntMat2::from_i64(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn mul(&self, o: &IntMat2) -> IntMat2 {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        IntMat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<IntMat2> {
        let d = self.det();
        if !(d.is_one() || (-&d).is_one()) {
            return None;
        }
        Some(IntMat2::new(
            &self.m[1][1] * &d,
            -&self.m[0][1] * &d,
            -&self.m[1][0] * &d,
            &self.m[0][0] * &d,
        ))
    }

    pub fn to_mat2(&self) -> Mat2 {
        let e = |i: usize, j: usize| ExactScalar::from_bigint(self.m[i][j].clone());
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn neg(&self) -> IntMat2 {
        let e = |i: usize, j: usize| -&self.m[i][j];
        IntMat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMat2::identity()
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

/// The form `κ·(ξ₁η₂ − ξ₂η₁)`; `κ = r` gives the standard form ω_r.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymplecticForm {
    scale: Rational,
}

impl SymplecticForm {
    pub fn standard(r: u64) -> SymplecticForm {
        assert!(r >= 1, "the standard form needs r >= 1");
        SymplecticForm {
            scale: Rational::from_integer(BigInt::from(r)),
        }
    }

    pub fn scaled(scale: Rational) -> Result<SymplecticForm> {
        if !scale.is_positive() {
            return Err(OscError::InvalidStructure(format!(
                "form scale {scale} must be positive"
            )));
        }
        Ok(SymplecticForm { scale })
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// `r` when the scale is a positive integer.
    pub fn r(&self) -> Option<u64> {
        use num_traits::ToPrimitive;
        if self.scale.is_integer() {
            self.scale.to_integer().to_u64()
        } else {
            None
        }
    }

    pub fn eval(&self, u: &Vec2, v: &Vec2) -> ExactScalar {
        det2(u, v).scale(&self.scale)
    }
}

/// `ω_r(ξ, η) = r(ξ₁η₂ − ξ₂η₁)`.
pub fn omega(form: &SymplecticForm, u: &Vec2, v: &Vec2) -> ExactScalar {
    form.eval(u, v)
}

/// `B_{x,y} = (1/y)[[x, −(x²+y²)], [1, −x]]` for `y ≠ 0`.
pub fn bxy_matrix(x: &ExactScalar, y: &ExactScalar) -> Result<Mat2> {
    if y.is_zero() {
        return Err(OscError::InvalidStructure("y must be nonzero".into()));
    }
    let iy = y.checked_recip()?;
    let n = x.checked_mul(x)?.checked_add(&y.checked_mul(y)?)?;
    Ok(Mat2::new(
        x.checked_mul(&iy)?,
        -n.checked_mul(&iy)?,
        iy.clone(),
        -x.checked_mul(&iy)?,
    ))
}

/// The matrix `λ·B_{x,y}`. A negative `y` encodes `−λB_{x,|y|}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureMatrix {
    lambda: AngleSymbol,
    x: ExactScalar,
    y: ExactScalar,
    bxy: Mat2,
}

impl StructureMatrix {
    pub fn new(lambda: AngleSymbol, x: ExactScalar, y: ExactScalar) -> Result<StructureMatrix> {
        let bxy = bxy_matrix(&x, &y)?;
        if !bxy.det().is_one() || !bxy.trace().is_zero() {
            return Err(OscError::Internal("B_{x,y} lost det 1 / trace 0".into()));
        }
        if bxy.mul(&bxy) != Mat2::identity().neg() {
            return Err(OscError::Internal("B_{x,y}^2 != -I".into()));
        }
        Ok(StructureMatrix { lambda, x, y, bxy })
    }

    /// Recovers `(x, y)` from a matrix of the form `B_{x,y}`.
    pub fn from_bxy_matrix(lambda: AngleSymbol, m: &Mat2) -> Result<StructureMatrix> {
        let c = &m.m[1][0];
        if c.is_zero() {
            return Err(OscError::InvalidStructure(format!(
                "{m} is not of the form B_(x,y)"
            )));
        }
        let y = c.checked_recip()?;
        let x = m.m[0][0].checked_mul(&y)?;
        let s = StructureMatrix::new(lambda, x, y)?;
        if s.bxy != *m {
            return Err(OscError::InvalidStructure(format!(
                "{m} is not of the form B_(x,y)"
            )));
        }
        Ok(s)
    }

    pub fn lambda(&self) -> AngleSymbol {
        self.lambda
    }

    pub fn x(&self) -> &ExactScalar {
        &self.x
    }

    pub fn y(&self) -> &ExactScalar {
        &self.y
    }

    /// `B_{x,y}` without the angle factor.
    pub fn bxy(&self) -> &Mat2 {
        &self.bxy
    }

    /// The structure matrix of the opposite sign, `−λB_{x,y} = λB_{x,−y}`.
    pub fn negated(&self) -> StructureMatrix {
        StructureMatrix::new(self.lambda, self.x.clone(), -&self.y)
            .expect("negation keeps validity")
    }

    /// `e^{tλB_{x,y}} = cos(tλ)I + sin(tλ)B_{x,y}`.
    pub fn exp(&self, t: i64) -> Mat2 {
        let (c, s) = self.lambda.trig_multiple(t);
        Mat2::scalar(c).add(&self.bxy.scale(&s))
    }

    /// `e^{λB}` as an integer matrix, if it is one.
    pub fn exp_integer(&self) -> Option<IntMat2> {
        self.exp(1).to_int()
    }
}

impl fmt::Display for StructureMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*B({}, {})", self.lambda, self.x, self.y)
    }
}

pub fn exp_tb(b: &StructureMatrix, t: i64) -> Mat2 {
    b.exp(t)
}

/// Verifies `ω(Bξ,η) = −ω(ξ,Bη)` on basis pairs and returns the constant
/// sign of `ω(Bξ,ξ)` over a spread of test vectors.
pub fn definiteness_check(form: &SymplecticForm, b: &StructureMatrix) -> Result<Sign> {
    let bm = b.bxy();
    let basis = [e1(), e2()];
    for u in &basis {
        for v in &basis {
            let lhs = form.eval(&bm.apply(u), v);
            let rhs = -form.eval(u, &bm.apply(v));
            if lhs != rhs {
                return Err(OscError::InvalidStructure(
                    "omega(B., .) is not antisymmetric".into(),
                ));
            }
        }
    }
    let probes = [e1(), e2(), vadd(&e1(), &e2()), vsub(&e1(), &e2())];
    let mut sign = None;
    for p in &probes {
        let s = form.eval(&bm.apply(p), p).sign();
        if s == Sign::Zero || sign.is_some_and(|prev| prev != s) {
            return Err(OscError::InvalidStructure(
                "omega(B., .) is not definite".into(),
            ));
        }
        sign = Some(s);
    }
    // λ > 0 scales without changing the sign.
    Ok(sign.expect("probes nonempty"))
}

/// The group Osc₁(ω, B).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Osc {
    pub form: SymplecticForm,
    pub structure: StructureMatrix,
}

/// `(z, ξ, t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub z: ExactScalar,
    pub xi: Vec2,
    pub t: i64,
}

impl GroupElement {
    pub fn new(z: ExactScalar, xi: Vec2, t: i64) -> GroupElement {
        GroupElement { z, xi, t }
    }

    pub fn identity() -> GroupElement {
        GroupElement::new(ExactScalar::zero(), zero_vec(), 0)
    }

    pub fn central(z: ExactScalar) -> GroupElement {
        GroupElement::new(z, zero_vec(), 0)
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_zero() && self.xi.iter().all(ExactScalar::is_zero) && self.t == 0
    }

    /// The projection onto the time coordinate.
    pub fn pi(&self) -> i64 {
        self.t
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, ({}, {}), {})",
            self.z, self.xi[0], self.xi[1], self.t
        )
    }
}

impl Osc {
    pub fn new(form: SymplecticForm, structure: StructureMatrix) -> Osc {
        Osc { form, structure }
    }

    pub fn standard(r: u64, structure: StructureMatrix) -> Osc {
        Osc::new(SymplecticForm::standard(r), structure)
    }

    pub fn omega(&self, u: &Vec2, v: &Vec2) -> ExactScalar {
        self.form.eval(u, v)
    }

    /// `(z+v+½ω(ξ,e^{tB}η), ξ+e^{tB}η, t+s)`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let rot = self.structure.exp(g.t).apply(&h.xi);
        let half = ExactScalar::frac(1, 2);
        let z = &g.z + &h.z + &half * self.omega(&g.xi, &rot);
        GroupElement::new(z, vadd(&g.xi, &rot), g.t + h.t)
    }

    /// `(−z, −e^{−tB}ξ, −t)`.
    pub fn invert(&self, g: &GroupElement) -> GroupElement {
        let xi = vneg(&self.structure.exp(-g.t).apply(&g.xi));
        GroupElement::new(-&g.z, xi, -g.t)
    }

    pub fn pow(&self, g: &GroupElement, n: i64) -> GroupElement {
        let mut base = if n < 0 { self.invert(g) } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut out = GroupElement::identity();
        while e > 0 {
            if e & 1 == 1 {
                out = self.multiply(&out, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base);
            }
        }
        out
    }

    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.multiply(&self.multiply(g, h), &self.invert(g))
    }

    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let gh = self.multiply(g, h);
        let gi = self.invert(g);
        let hi = self.invert(h);
        self.multiply(&self.multiply(&gh, &gi), &hi)
    }

    /// `g·h·g⁻¹` for `h` in the Heisenberg subgroup, checked against the
    /// closed form `(v + ω(ξ, e^{tB}η), e^{tB}η, 0)`.
    pub fn conjugate_heisenberg(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        if h.t != 0 {
            return Err(OscError::InvalidStructure(
                "conjugated element must have t = 0".into(),
            ));
        }
        let direct = self.conjugate(g, h);
        let rot = self.structure.exp(g.t).apply(&h.xi);
        let closed = GroupElement::new(&h.z + self.omega(&g.xi, &rot), rot, 0);
        if direct != closed {
            return Err(OscError::Internal(format!(
                "conjugation mismatch: {direct} vs {closed}"
            )));
        }
        Ok(closed)
    }
}

/// Membership in Γ_r: `t = 0`, `ξ ∈ Z²` and `z − (r/2)ξ₁ξ₂ ∈ Z`.
pub fn gamma_member(g: &GroupElement, r: u64) -> bool {
    if g.t != 0 || !g.xi[0].is_integer() || !g.xi[1].is_integer() {
        return false;
    }
    let half_r = ExactScalar::from_rational(Rational::new(BigInt::from(r), BigInt::from(2)));
    (&g.z - half_r * &g.xi[0] * &g.xi[1]).is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::AngleBase;

    fn s(x: &str) -> ExactScalar {
        x.parse().unwrap()
    }

    fn quarter_turn() -> StructureMatrix {
        StructureMatrix::new(
            AngleSymbol::new(AngleBase::PiHalf, 0),
            ExactScalar::zero(),
            ExactScalar::one(),
        )
        .unwrap()
    }

    fn hexagonal(base: AngleBase) -> StructureMatrix {
        StructureMatrix::new(AngleSymbol::new(base, 0), s("1/2"), s("1/2*sqrt(3)")).unwrap()
    }

    #[test]
    fn omega_values() {
        let f1 = SymplecticForm::standard(1);
        assert_eq!(omega(&f1, &e1(), &e2()), ExactScalar::one());
        assert_eq!(omega(&f1, &e1(), &e1()), ExactScalar::zero());
        let f3 = SymplecticForm::standard(3);
        let v = [ExactScalar::zero(), ExactScalar::from_int(2)];
        assert_eq!(omega(&f3, &e1(), &v), ExactScalar::from_int(6));
    }

    #[test]
    fn exponentials() {
        assert_eq!(quarter_turn().exp(1), Mat2::from_ints(0, -1, 1, 0));
        assert_eq!(quarter_turn().exp(0), Mat2::identity());
        assert_eq!(
            hexagonal(AngleBase::TwoPiThird).exp(1),
            Mat2::from_ints(0, -1, 1, -1)
        );
        assert_eq!(
            hexagonal(AngleBase::PiThird).exp(1),
            Mat2::from_ints(1, -1, 1, 0)
        );
    }

    #[test]
    fn multiplication_examples() {
        let g = Osc::standard(1, quarter_turn());
        let a = GroupElement::new(ExactScalar::zero(), e1(), 0);
        let b = GroupElement::new(ExactScalar::zero(), e2(), 0);
        assert_eq!(
            g.multiply(&a, &b),
            GroupElement::new(s("1/2"), [ExactScalar::one(), ExactScalar::one()], 0)
        );
        let d = GroupElement::new(ExactScalar::zero(), zero_vec(), 1);
        assert_eq!(
            g.multiply(&d, &a),
            GroupElement::new(ExactScalar::zero(), e2(), 1)
        );
        assert_eq!(g.multiply(&a, &GroupElement::identity()), a);
    }

    #[test]
    fn inversion_examples() {
        let g = Osc::standard(1, quarter_turn());
        assert!(g.invert(&GroupElement::identity()).is_identity());
        assert_eq!(
            g.invert(&GroupElement::central(ExactScalar::one())),
            GroupElement::central(ExactScalar::from_int(-1))
        );
        let x = GroupElement::new(ExactScalar::zero(), e1(), 1);
        assert_eq!(
            g.invert(&x),
            GroupElement::new(ExactScalar::zero(), e2(), -1)
        );
    }

    #[test]
    fn heisenberg_conjugation_examples() {
        let g = Osc::standard(2, quarter_turn());
        let h = GroupElement::new(ExactScalar::zero(), e1(), 0);
        let d = GroupElement::new(ExactScalar::zero(), zero_vec(), 1);
        assert_eq!(
            g.conjugate_heisenberg(&d, &h).unwrap(),
            GroupElement::new(ExactScalar::zero(), e2(), 0)
        );
        let d = GroupElement::new(ExactScalar::zero(), [s("1/2"), ExactScalar::zero()], 1);
        assert_eq!(
            g.conjugate_heisenberg(&d, &h).unwrap(),
            GroupElement::new(ExactScalar::one(), e2(), 0)
        );
        assert_eq!(
            g.conjugate_heisenberg(&GroupElement::identity(), &h)
                .unwrap(),
            h
        );
        assert!(g.conjugate_heisenberg(&h, &d).is_err());
    }

    #[test]
    fn gamma_membership() {
        let half_diag = GroupElement::new(s("1/2"), [ExactScalar::one(), ExactScalar::one()], 0);
        assert!(gamma_member(&GroupElement::central(ExactScalar::one()), 5));
        assert!(gamma_member(&half_diag, 1));
        assert!(!gamma_member(&half_diag, 2));
        assert!(!gamma_member(
            &GroupElement::new(ExactScalar::zero(), zero_vec(), 1),
            2
        ));
    }

    #[test]
    fn definiteness() {
        let b = quarter_turn();
        assert_eq!(
            definiteness_check(&SymplecticForm::standard(1), &b).unwrap(),
            Sign::Neg
        );
        assert_eq!(
            definiteness_check(&SymplecticForm::standard(1), &b.negated()).unwrap(),
            Sign::Pos
        );
        assert_eq!(
            definiteness_check(&SymplecticForm::standard(2), &b).unwrap(),
            Sign::Neg
        );
    }

    #[test]
    fn structure_from_matrix() {
        let b = hexagonal(AngleBase::PiThird);
        let back = StructureMatrix::from_bxy_matrix(b.lambda(), b.bxy()).unwrap();
        assert_eq!(back, b);
        assert!(StructureMatrix::from_bxy_matrix(b.lambda(), &Mat2::identity()).is_err());
    }
}
