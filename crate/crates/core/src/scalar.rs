//! Exact arithmetic over Q and a real quadratic field Q(√D), and symbolic
//! angles with exact trigonometric values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{OscError, Result};

/// Arbitrary precision rational number, always stored in lowest terms with
/// a positive denominator.
pub type Rational = BigRational;

/// Discriminant used when none is configured.
pub const DEFAULT_DISCRIMINANT: u32 = 3;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns true when `d > 1` and no square larger than one divides it.
pub fn is_square_free(d: u32) -> bool {
    if d <= 1 {
        return false;
    }
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= d as u64 {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Splits `n` as `s² · f` with `f` square-free (or 1).
fn square_part(mut n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_rational(q: &Rational) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "neg",
            Sign::Zero => "zero",
            Sign::Pos => "pos",
        })
    }
}

/// The real number `a + b·√d`.
///
/// Rational values are stored with `b = 0` and `d = 0`, which makes the
/// representation unique and lets rationals mix freely with any field.
/// Two irrational operands must share their discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    a: Rational,
    b: Rational,
    d: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field operation with error reporting instead of panics.
pub fn scalar_arith(x: &ExactScalar, y: &ExactScalar, op: ArithOp) -> Result<ExactScalar> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

pub fn scalar_sign(x: &ExactScalar) -> Sign {
    x.sign()
}

impl ExactScalar {
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<ExactScalar> {
        if b.is_zero() {
            return Ok(ExactScalar::from_rational(a));
        }
        if !is_square_free(d) {
            return Err(OscError::InvalidDiscriminant(d));
        }
        Ok(ExactScalar { a, b, d })
    }

    pub fn zero() -> ExactScalar {
        ExactScalar::from_rational(Rational::zero())
    }

    pub fn one() -> ExactScalar {
        ExactScalar::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> ExactScalar {
        ExactScalar::from_rational(rat_int(n))
    }

    pub fn from_bigint(n: BigInt) -> ExactScalar {
        ExactScalar::from_rational(Rational::from_integer(n))
    }

    pub fn frac(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_rational(rat(n, d))
    }

    pub fn from_rational(a: Rational) -> ExactScalar {
        ExactScalar {
            a,
            b: Rational::zero(),
            d: 0,
        }
    }

    /// `√d` for square-free `d`.
    pub fn sqrt_of(d: u32) -> Result<ExactScalar> {
        ExactScalar::new(Rational::zero(), Rational::one(), d)
    }

    /// `√q` when it lies in Q or in Q(√d); `None` otherwise.
    pub fn sqrt_rational(q: &Rational, d: u32) -> Option<ExactScalar> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(ExactScalar::zero());
        }
        // √(p/q) = √(p q) / q
        let pq = q.numer() * q.denom();
        let root = pq.sqrt();
        if &root * &root == pq {
            return Some(ExactScalar::from_rational(Rational::new(
                root,
                q.denom().clone(),
            )));
        }
        if d == 0 {
            return None;
        }
        let dq = BigInt::from(d);
        let (quot, rem) = pq.div_rem(&dq);
        if !rem.is_zero() {
            return None;
        }
        let root = quot.sqrt();
        if &root * &root != quot {
            return None;
        }
        ExactScalar::new(Rational::zero(), Rational::new(root, q.denom().clone()), d).ok()
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// The discriminant, or `None` for a rational value.
    pub fn discriminant(&self) -> Option<u32> {
        if self.d == 0 {
            None
        } else {
            Some(self.d)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.a.to_integer())
        } else {
            None
        }
    }

    fn common_d(&self, other: &ExactScalar) -> Result<u32> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d, e) if d == e => Ok(d),
            (d, e) => Err(OscError::DiscriminantMismatch(d, e)),
        }
    }

    fn build(a: Rational, b: Rational, d: u32) -> ExactScalar {
        if b.is_zero() {
            ExactScalar::from_rational(a)
        } else {
            ExactScalar { a, b, d }
        }
    }

    pub fn checked_add(&self, o: &ExactScalar) -> Result<ExactScalar> {
        let d = self.common_d(o)?;
        Ok(ExactScalar::build(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn checked_sub(&self, o: &ExactScalar) -> Result<ExactScalar> {
        let d = self.common_d(o)?;
        Ok(ExactScalar::build(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn checked_mul(&self, o: &ExactScalar) -> Result<ExactScalar> {
        let d = self.common_d(o)?;
        let dr = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &o.a + &self.b * &o.b * dr;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(ExactScalar::build(a, b, d))
    }

    pub fn checked_div(&self, o: &ExactScalar) -> Result<ExactScalar> {
        self.common_d(o)?;
        self.checked_mul(&o.checked_recip()?)
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> ExactScalar {
        ExactScalar::build(self.a.clone(), -&self.b, self.d)
    }

    /// Field norm `a² − d b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn checked_recip(&self) -> Result<ExactScalar> {
        if self.is_zero() {
            return Err(OscError::DivisionByZero);
        }
        let n = self.norm();
        Ok(ExactScalar::build(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn recip(&self) -> ExactScalar {
        self.checked_recip().expect("reciprocal of zero")
    }

    pub fn scale(&self, q: &Rational) -> ExactScalar {
        ExactScalar::build(&self.a * q, &self.b * q, self.d)
    }

    pub fn sign(&self) -> Sign {
        let sa = Sign::of_rational(&self.a);
        let sb = Sign::of_rational(&self.b);
        if sb == Sign::Zero {
            return sa;
        }
        if sa == Sign::Zero || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Pos
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Neg
    }

    pub fn abs(&self) -> ExactScalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_cmp(&self, o: &ExactScalar) -> Result<Ordering> {
        Ok(match self.checked_sub(o)?.sign() {
            Sign::Neg => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Pos => Ordering::Greater,
        })
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // Approximate b√d by isqrt(p² d)/q, which is within 1/q ≤ 1 of it,
        // then correct with exact comparisons.
        let p = self.b.numer();
        let q = self.b.denom();
        let root = (p * p * BigInt::from(self.d)).sqrt();
        let approx = if p.is_negative() { -root } else { root };
        let mut n = (&self.a + Rational::new(approx, q.clone()))
            .floor()
            .to_integer();
        loop {
            let nn = ExactScalar::from_bigint(n.clone());
            if self.checked_sub(&nn).unwrap().is_negative() {
                n -= 1;
                continue;
            }
            let next = ExactScalar::from_bigint(&n + 1);
            if !self.checked_sub(&next).unwrap().is_negative() {
                n += 1;
                continue;
            }
            return n;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Parses a literal, normalizing `sqrt(n)` for non-square-free `n`.
    pub fn parse(s: &str) -> Result<ExactScalar> {
        parse_scalar(s)
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        ExactScalar::from_rational(q)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_cmp(other).ok()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::build(-&self.a, -&self.b, self.d)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                f.write_str("+")?;
            }
        }
        if self.b.is_one() {
            write!(f, "sqrt({})", self.d)
        } else if (-&self.b).is_one() {
            write!(f, "-sqrt({})", self.d)
        } else {
            write!(f, "{}*sqrt({})", self.b, self.d)
        }
    }
}

impl FromStr for ExactScalar {
    type Err = OscError;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}

/// Parses `p`, `p/q` with an optional sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || OscError::Parse(format!("invalid rational literal {s:?}"));
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = num.strip_prefix('+').unwrap_or(num);
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(OscError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

fn parse_sqrt_term(s: &str) -> Result<ExactScalar> {
    let bad = || OscError::Parse(format!("invalid sqrt term {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (coef, rad) = match body.split_once('*') {
        Some((c, r)) => (parse_rational(c)?, r),
        None => (Rational::one(), body),
    };
    let inner = rad
        .strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let n: u64 = inner.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Ok(ExactScalar::zero());
    }
    let (sq, free) = square_part(n);
    let coef = coef * Rational::from_integer(BigInt::from(sq));
    let coef = if neg { -coef } else { coef };
    if free == 1 {
        return Ok(ExactScalar::from_rational(coef));
    }
    let d = u32::try_from(free).map_err(|_| bad())?;
    ExactScalar::new(Rational::zero(), coef, d)
}

/// Parses `p/q`, `p/q+r/s*sqrt(D)`, `r/s*sqrt(D)` and `sqrt(D)` with
/// optional signs.
pub fn parse_scalar(s: &str) -> Result<ExactScalar> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(OscError::Parse("empty scalar literal".into()));
    }
    if !s.contains("sqrt") {
        return parse_rational(&s).map(ExactScalar::from_rational);
    }
    let split = s
        .char_indices()
        .skip(1)
        .find(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i);
    match split {
        Some(i) => {
            let (left, right) = s.split_at(i);
            if left.contains("sqrt") {
                let rational = parse_rational(right)?;
                Ok(parse_sqrt_term(left)? + ExactScalar::from_rational(rational))
            } else {
                let rational = parse_rational(left)?;
                Ok(ExactScalar::from_rational(rational) + parse_sqrt_term(right)?)
            }
        }
        None => parse_sqrt_term(&s),
    }
}

/// Symbolic base angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleBase {
    PiThird,
    PiHalf,
    TwoPiThird,
    Pi,
}

impl AngleBase {
    pub const ALL: [AngleBase; 4] = [
        AngleBase::PiThird,
        AngleBase::PiHalf,
        AngleBase::TwoPiThird,
        AngleBase::Pi,
    ];

    /// The base angle in units of π/6.
    pub fn sixths(self) -> u64 {
        match self {
            AngleBase::PiThird => 2,
            AngleBase::PiHalf => 3,
            AngleBase::TwoPiThird => 4,
            AngleBase::Pi => 6,
        }
    }

    pub fn literal(self) -> &'static str {
        match self {
            AngleBase::PiThird => "pi/3",
            AngleBase::PiHalf => "pi/2",
            AngleBase::TwoPiThird => "2pi/3",
            AngleBase::Pi => "pi",
        }
    }

    pub fn parse(s: &str) -> Result<AngleBase> {
        match s.trim() {
            "pi/3" => Ok(AngleBase::PiThird),
            "pi/2" => Ok(AngleBase::PiHalf),
            "2pi/3" => Ok(AngleBase::TwoPiThird),
            "pi" => Ok(AngleBase::Pi),
            other => Err(OscError::Parse(format!(
                "unknown angle base {other:?}; expected pi/3, pi/2, 2pi/3 or pi"
            ))),
        }
    }
}

/// `λ = base + kπ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleSymbol {
    pub base: AngleBase,
    pub k: u64,
}

impl AngleSymbol {
    pub fn new(base: AngleBase, k: u64) -> AngleSymbol {
        AngleSymbol { base, k }
    }

    /// λ in units of π/6.
    pub fn sixths(&self) -> u128 {
        self.base.sixths() as u128 + 6 * self.k as u128
    }

    /// λ mod 2π in units of π/6, in `0..12`.
    pub fn sixths_mod12(&self) -> u8 {
        (self.sixths() % 12) as u8
    }

    /// λ/π.
    pub fn pi_multiple(&self) -> Rational {
        Rational::new(BigInt::from(self.sixths()), BigInt::from(6))
    }

    /// The symbol for `q·π`, if that angle is admissible.
    pub fn from_pi_multiple(q: &Rational) -> Option<AngleSymbol> {
        if !q.is_positive() {
            return None;
        }
        let six = q * rat_int(6);
        if !six.is_integer() {
            return None;
        }
        let n = six.to_integer().to_u128()?;
        let (base, rest) = match n % 6 {
            2 => (AngleBase::PiThird, n - 2),
            3 => (AngleBase::PiHalf, n - 3),
            4 => (AngleBase::TwoPiThird, n - 4),
            0 => (AngleBase::Pi, n - 6),
            _ => return None,
        };
        Some(AngleSymbol::new(base, u64::try_from(rest / 6).ok()?))
    }

    /// Exact `(cos λ, sin λ)`.
    pub fn trig(&self) -> (ExactScalar, ExactScalar) {
        trig_sixths(self.sixths_mod12() as i64)
    }

    /// Exact `(cos tλ, sin tλ)` for an integer `t`.
    pub fn trig_multiple(&self, t: i64) -> (ExactScalar, ExactScalar) {
        let j = (self.sixths_mod12() as i64 * t.rem_euclid(12)).rem_euclid(12);
        trig_sixths(j)
    }

    /// Parses an angle written as a rational multiple of π such as `pi/3`,
    /// `5pi/3`, `3/2*pi` or `pi/3+2pi`.
    pub fn parse(s: &str) -> Result<AngleSymbol> {
        let q = parse_pi_multiple(s)?;
        AngleSymbol::from_pi_multiple(&q).ok_or_else(|| {
            OscError::NonLattice(format!(
                "trace constraint: angle {s} is not in {{pi/3, pi/2, 2pi/3, pi}} + k*pi"
            ))
        })
    }
}

impl fmt::Display for AngleSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.literal())?;
        if self.k > 0 {
            write!(f, "+{}pi", self.k)?;
        }
        Ok(())
    }
}

/// Exact `(cos λ, sin λ)`.
pub fn angle_trig(lambda: &AngleSymbol) -> (ExactScalar, ExactScalar) {
    lambda.trig()
}

/// `(cos, sin)` of `j·π/6`.
pub fn trig_sixths(j: i64) -> (ExactScalar, ExactScalar) {
    let half = || ExactScalar::frac(1, 2);
    let r3h = || ExactScalar::new(Rational::zero(), rat(1, 2), 3).unwrap();
    let z = ExactScalar::zero;
    let o = ExactScalar::one;
    match j.rem_euclid(12) {
        0 => (o(), z()),
        1 => (r3h(), half()),
        2 => (half(), r3h()),
        3 => (z(), o()),
        4 => (-half(), r3h()),
        5 => (-r3h(), half()),
        6 => (-o(), z()),
        7 => (-r3h(), -half()),
        8 => (-half(), -r3h()),
        9 => (z(), -o()),
        10 => (half(), -r3h()),
        _ => (r3h(), -half()),
    }
}

/// Parses a sum of terms such as `pi`, `2pi`, `pi/3`, `5*pi/3`, `3/2*pi`
/// or a bare rational (interpreted in units of π when it carries `pi`).
pub fn parse_pi_multiple(s: &str) -> Result<Rational> {
    let bad = || OscError::Parse(format!("invalid angle literal {s:?}"));
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if i > 0 && (c == '+' || c == '-') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut total = Rational::zero();
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let Some(pos) = body.find("pi") else {
            return Err(bad());
        };
        let before = body[..pos].trim_end_matches('*');
        let after = &body[pos + 2..];
        let coef = if before.is_empty() {
            Rational::one()
        } else {
            parse_rational(before)?
        };
        let div = match after {
            "" => Rational::one(),
            _ => {
                let d = after.strip_prefix('/').ok_or_else(bad)?;
                parse_rational(d)?
            }
        };
        if div.is_zero() {
            return Err(bad());
        }
        let v = coef / div;
        total += if neg { -v } else { v };
    }
    Ok(total)
}
