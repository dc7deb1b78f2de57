use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{OscError, Result};
use crate::group::{gamma_member, vec2_rat, GroupElement, IntMat2, Osc, StructureMatrix};
use crate::scalar::{rat, AngleBase, AngleSymbol, ExactScalar, Rational, Sign};

pub type Xi = [Rational; 2];

/// `ξ mod Z²` in `[0,1)²`.
pub fn reduce_mod1(xi: &Xi) -> Xi {
    [&xi[0] - xi[0].floor(), &xi[1] - xi[1].floor()]
}

pub fn xi_string(xi: &Xi) -> String {
    format!("({}, {})", xi[0], xi[1])
}

/// A point of the half fundamental domain: `0 ≤ x ≤ 1/2`, `y > 0`,
/// `x² + y² ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalPoint {
    x: ExactScalar,
    y: ExactScalar,
}

/// The boundary strata of the half fundamental domain, which determine the
/// shape of the table of canonical `ξ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointClass {
    /// `x² + y² > 1`, `0 < x < 1/2`.
    Interior,
    /// `x = 0`, `y > 1`.
    ImaginaryAxis,
    /// `x = 1/2`, `x² + y² > 1`.
    HalfLine,
    /// `x² + y² = 1`, `0 < x < 1/2`.
    Arc,
    /// `(0, 1)`.
    Square,
    /// `(1/2, √3/2)`.
    Hexagonal,
}

impl PointClass {
    pub const ALL: [PointClass; 6] = [
        PointClass::Interior,
        PointClass::ImaginaryAxis,
        PointClass::HalfLine,
        PointClass::Arc,
        PointClass::Square,
        PointClass::Hexagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PointClass::Interior => "interior",
            PointClass::ImaginaryAxis => "imaginary-axis",
            PointClass::HalfLine => "half-line",
            PointClass::Arc => "arc",
            PointClass::Square => "square",
            PointClass::Hexagonal => "hexagonal",
        }
    }

    /// A fixed point of this class.
    pub fn sample(self) -> FundamentalPoint {
        let (x, y) = match self {
            PointClass::Interior => (ExactScalar::frac(1, 4), ExactScalar::from_int(2)),
            PointClass::ImaginaryAxis => (ExactScalar::zero(), ExactScalar::from_int(2)),
            PointClass::HalfLine => (ExactScalar::frac(1, 2), ExactScalar::one()),
            PointClass::Arc => (ExactScalar::frac(5, 13), ExactScalar::frac(12, 13)),
            PointClass::Square => return FundamentalPoint::square(),
            PointClass::Hexagonal => return FundamentalPoint::hexagonal(),
        };
        FundamentalPoint::new(x, y).expect("sample points lie in the domain")
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FundamentalPoint {
    pub fn new(x: ExactScalar, y: ExactScalar) -> Result<FundamentalPoint> {
        let half = ExactScalar::frac(1, 2);
        let r2 = &x * &x + &y * &y;
        let ok = x.sign() != Sign::Neg
            && (&half - &x).sign() != Sign::Neg
            && y.sign() == Sign::Pos
            && (&r2 - ExactScalar::one()).sign() != Sign::Neg;
        if !ok {
            return Err(OscError::InvalidStructure(format!(
                "({x}, {y}) is not in the half fundamental domain"
            )));
        }
        Ok(FundamentalPoint { x, y })
    }

    pub fn square() -> FundamentalPoint {
        FundamentalPoint {
            x: ExactScalar::zero(),
            y: ExactScalar::one(),
        }
    }

    pub fn hexagonal() -> FundamentalPoint {
        FundamentalPoint {
            x: ExactScalar::frac(1, 2),
            y: ExactScalar::new(Rational::zero(), rat(1, 2), 3).expect("3 is square-free"),
        }
    }

    pub fn x(&self) -> &ExactScalar {
        &self.x
    }

    pub fn y(&self) -> &ExactScalar {
        &self.y
    }

    pub fn class(&self) -> PointClass {
        if *self == FundamentalPoint::hexagonal() {
            return PointClass::Hexagonal;
        }
        if *self == FundamentalPoint::square() {
            return PointClass::Square;
        }
        let on_arc = (&self.x * &self.x + &self.y * &self.y).is_one();
        if on_arc {
            return PointClass::Arc;
        }
        if self.x.is_zero() {
            return PointClass::ImaginaryAxis;
        }
        if self.x == ExactScalar::frac(1, 2) {
            return PointClass::HalfLine;
        }
        PointClass::Interior
    }

    pub fn structure(&self, lambda: AngleSymbol) -> Result<StructureMatrix> {
        StructureMatrix::new(lambda, self.x.clone(), self.y.clone())
    }
}

impl fmt::Display for FundamentalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The lattice `⟨Γ_r ∪ {(z₀, ξ₀, 1)}⟩` of Osc₁(ω_r, B).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    pub r: u64,
    pub structure: StructureMatrix,
    pub xi0: Xi,
    pub z0: ExactScalar,
}

impl LatticeSpec {
    pub fn new(r: u64, structure: StructureMatrix, xi0: Xi, z0: ExactScalar) -> LatticeSpec {
        LatticeSpec {
            r,
            structure,
            xi0,
            z0,
        }
    }

    pub fn group(&self) -> Osc {
        Osc::standard(self.r, self.structure.clone())
    }

    /// The distinguished element `(z₀, ξ₀, 1)`.
    pub fn delta(&self) -> GroupElement {
        GroupElement::new(self.z0.clone(), vec2_rat(&self.xi0[0], &self.xi0[1]), 1)
    }

    /// `e^B`, which has to be an integer matrix.
    pub fn exp_integer(&self) -> Result<IntMat2> {
        self.structure.exp_integer().ok_or_else(|| {
            OscError::NonLattice(format!(
                "e^B = {} is not an integer matrix (point constraint: the angle and the point ({}, {}) are incompatible)",
                self.structure.exp(1),
                self.structure.x(),
                self.structure.y()
            ))
        })
    }

    /// Checks that `e^B` is integral and that δ normalizes Γ_r.
    pub fn validate(&self) -> Result<IntMat2> {
        if self.r == 0 {
            return Err(OscError::InvalidStructure("r must be positive".into()));
        }
        let e = self.exp_integer()?;
        lattice_condition(self.r, &e, &self.xi0)?;
        Ok(e)
    }

    /// Membership test: `g·δ^{−t} ∈ Γ_r`.
    pub fn contains(&self, g: &GroupElement) -> bool {
        let group = self.group();
        let stripped = group.multiply(g, &group.pow(&self.delta(), -g.t));
        gamma_member(&stripped, self.r)
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} B={} xi0={} z0={}",
            self.r,
            self.structure,
            xi_string(&self.xi0),
            self.z0
        )
    }
}

/// `(ω_r(ξ, Eeᵢ), Eeᵢ, 0) ∈ Γ_r` for `i = 1, 2`.
pub fn lattice_condition(r: u64, e: &IntMat2, xi: &Xi) -> Result<()> {
    for i in 0..2 {
        let u = [e.m[0][i].clone(), e.m[1][i].clone()];
        let uq = [Rational::from(u[0].clone()), Rational::from(u[1].clone())];
        let rq = Rational::from(BigInt::from(r));
        let z = &rq * (&xi[0] * &uq[1] - &xi[1] * &uq[0]);
        let g = GroupElement::new(ExactScalar::from_rational(z), vec2_rat(&uq[0], &uq[1]), 0);
        if !gamma_member(&g, r) {
            return Err(OscError::NonLattice(format!(
                "lattice condition fails for i={}: (omega_r(xi0, e^B e_{}), e^B e_{}, 0) is not in Gamma_{}",
                i + 1,
                i + 1,
                i + 1,
                r
            )));
        }
    }
    Ok(())
}

/// The canonical invariant of a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeData {
    pub r: u64,
    pub lambda: AngleSymbol,
    pub point: FundamentalPoint,
    pub xi0: Xi,
}

impl LatticeData {
    /// The standard lattice `L(ξ₀)` carrying this data.
    pub fn to_spec(&self) -> Result<LatticeSpec> {
        Ok(LatticeSpec::new(
            self.r,
            self.point.structure(self.lambda)?,
            self.xi0.clone(),
            ExactScalar::zero(),
        ))
    }
}

impl fmt::Display for LatticeData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(r={}, lambda={}, point={}, xi0={})",
            self.r,
            self.lambda,
            self.point,
            xi_string(&self.xi0)
        )
    }
}

/// The point required by the angle, if any: hexagonal for base π/3 and
/// 2π/3, square for π/2, free for π.
pub fn required_point(lambda: AngleSymbol) -> Option<FundamentalPoint> {
    match lambda.base {
        AngleBase::PiThird | AngleBase::TwoPiThird => Some(FundamentalPoint::hexagonal()),
        AngleBase::PiHalf => Some(FundamentalPoint::square()),
        AngleBase::Pi => None,
    }
}

pub fn check_compatible(lambda: AngleSymbol, point: &FundamentalPoint) -> Result<()> {
    match required_point(lambda) {
        Some(p) if p != *point => Err(OscError::Incompatible(format!(
            "angle {lambda} requires the point {p} (e^B must lie in SL(2,Z)), got {point}"
        ))),
        _ => Ok(()),
    }
}

/// One (angle, point, r) combination of the table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub lambda: AngleSymbol,
    pub class: PointClass,
    pub point: FundamentalPoint,
    pub r: u64,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lambda={} point={} ({}) r={}",
            self.lambda, self.point, self.class, self.r
        )
    }
}

/// Every compatible `(base + kπ, point class, r)` with `k ∈ {0, 1}` and
/// `1 ≤ r ≤ r_max`, in a fixed order.
pub fn all_cells(r_max: u64) -> Vec<Cell> {
    let mut out = Vec::new();
    for base in AngleBase::ALL {
        for k in 0..2 {
            let lambda = AngleSymbol::new(base, k);
            let classes: Vec<PointClass> = match required_point(lambda) {
                Some(p) => vec![p.class()],
                None => PointClass::ALL.to_vec(),
            };
            for class in classes {
                for r in 1..=r_max {
                    out.push(Cell {
                        lambda,
                        class,
                        point: class.sample(),
                        r,
                    });
                }
            }
        }
    }
    out
}
