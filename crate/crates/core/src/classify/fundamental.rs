use crate::classify::lattice::FundamentalPoint;
use crate::error::{OscError, Result};
use crate::group::{bxy_matrix, IntMat2};
use crate::scalar::ExactScalar;
use num_bigint::BigInt;
use num_traits::Zero;

/// Outcome of [`reduce_fundamental`]:
/// `conjugator · B_{x,y} · conjugator⁻¹ = (flip ? −1 : 1) · B_{point}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub point: FundamentalPoint,
    pub conjugator: IntMat2,
    pub flip: bool,
}

/// Möbius action on the upper half plane: `A·B_τ·A⁻¹ = B_{A·τ}`.
pub fn mobius(m: &IntMat2, x: &ExactScalar, y: &ExactScalar) -> (ExactScalar, ExactScalar) {
    let [[a, b], [c, d]] = &m.m;
    let (a, b, c, d) = (
        ExactScalar::from_bigint(a.clone()),
        ExactScalar::from_bigint(b.clone()),
        ExactScalar::from_bigint(c.clone()),
        ExactScalar::from_bigint(d.clone()),
    );
    // (aτ+b)/(cτ+d) with τ = x + iy
    let den = (&c * x + &d) * (&c * x + &d) + &c * &c * y * y;
    let num_re = (&a * x + &b) * (&c * x + &d) + &a * &c * y * y;
    let num_im = (&a * &d - &b * &c) * y;
    (num_re / &den, num_im / &den)
}

/// Brings `x + iy` (with `y ≠ 0`) into the half fundamental domain by
/// `τ ↦ τ + n`, `τ ↦ −1/τ`, the sign change `y ↦ −y` and the fold
/// `x ↦ −x`, tracking the integer conjugator and the resulting sign of `B`.
pub fn reduce_fundamental(x0: &ExactScalar, y0: &ExactScalar) -> Result<Reduction> {
    if y0.is_zero() {
        return Err(OscError::InvalidStructure("y must be nonzero".into()));
    }
    let mut flip = false;
    let (mut x, mut y) = (x0.clone(), y0.clone());
    if y.is_negative() {
        // B_{x,−y} = −B_{x,y}
        y = -y;
        flip = true;
    }
    let mut conj = IntMat2::identity();
    let half = ExactScalar::frac(1, 2);
    let one = ExactScalar::one();
    loop {
        // x − n ∈ (−1/2, 1/2]
        let n = -(&half - &x).floor();
        if !n.is_zero() {
            let t = IntMat2::new(
                BigInt::from(1),
                -n.clone(),
                BigInt::from(0),
                BigInt::from(1),
            );
            x = &x - ExactScalar::from_bigint(n);
            conj = t.mul(&conj);
        }
        if (&x * &x + &y * &y) < one {
            let s = IntMat2::from_i64(0, -1, 1, 0);
            let (nx, ny) = mobius(&s, &x, &y);
            x = nx;
            y = ny;
            conj = s.mul(&conj);
        } else {
            break;
        }
    }
    if x.is_negative() {
        // F B_{x,y} F = −B_{−x,y} with F = diag(1, −1)
        x = -x;
        conj = IntMat2::from_i64(1, 0, 0, -1).mul(&conj);
        flip = !flip;
    }
    let point = FundamentalPoint::new(x, y)?;
    let red = Reduction {
        point,
        conjugator: conj,
        flip,
    };
    if !check_reduction(x0, y0, &red)? {
        return Err(OscError::Internal(
            "fundamental reduction does not conjugate B".into(),
        ));
    }
    Ok(red)
}

/// Checks `C·B_{x,y}·C⁻¹ = ±B_{point}` for the original input.
pub fn check_reduction(x: &ExactScalar, y: &ExactScalar, red: &Reduction) -> Result<bool> {
    let input = bxy_matrix(x, y)?;
    let target = bxy_matrix(red.point.x(), red.point.y())?;
    let c = red.conjugator.to_mat2();
    let lhs = c.mul(&input).mul(&c.inverse()?);
    let sign = ExactScalar::from_int(if red.flip { -1 } else { 1 });
    Ok(lhs == target.scale(&sign))
}
