use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Significant bits kept in radii; radii only need to be tight upper bounds.
const RAD_BITS: u32 = 30;

pub(crate) fn mag_up(x: &Dyadic) -> Dyadic {
    x.abs().round(RAD_BITS, Round::Ceil)
}

pub(crate) fn mag_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
    a.add_round(b, RAD_BITS, Round::Ceil)
}

pub(crate) fn mag_mul(a: &Dyadic, b: &Dyadic) -> Dyadic {
    a.mul(b).round(RAD_BITS, Round::Ceil)
}

fn err_mag(e: Option<i64>) -> Dyadic {
    e.map_or_else(Dyadic::zero, Dyadic::pow2)
}

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// The precision travels with the value: binary operations work at the
/// larger of the two operand precisions.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e} ± {:.3e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

impl CertifiedReal {
    /// Ball around `mid`; `mid` is kept exactly.
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        CertifiedReal {
            mid,
            rad: mag_up(&rad),
            prec: prec.max(2),
        }
    }

    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        CertifiedReal::new(mid, Dyadic::zero(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        CertifiedReal::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        CertifiedReal::exact(Dyadic::one(), prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        CertifiedReal::exact(Dyadic::from_int(n), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        CertifiedReal::exact(Dyadic::from_f64(x), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        CertifiedReal::from_ratio(q.numer(), q.denom(), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let (mid, exact) = Dyadic::from_ratio(num, den, prec + 2, Round::Floor);
        if exact {
            return CertifiedReal::exact(mid, prec);
        }
        let ulp = Dyadic::pow2(mid.exp().min(mid.top() - prec as i64 - 2));
        CertifiedReal::new(mid, ulp, prec)
    }

    /// Smallest ball containing `[lo, hi]`, rounded to `prec` bits.
    pub fn from_interval(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        let width = hi.add_round(&lo.neg(), RAD_BITS, Round::Ceil);
        let (mid, err) = lo.add_approx(hi, prec + 1);
        let mid = mid.mul_pow2(-1);
        let err = err_mag(err.map(|e| e - 1));
        let rad = mag_add(&width.mul_pow2(-1), &err);
        CertifiedReal::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec.max(2);
        self
    }

    /// Round the midpoint to the current precision, absorbing the error.
    pub fn trimmed(&self) -> Self {
        let (mid, err) = self.mid.round_with_err(self.prec, Round::Floor);
        CertifiedReal {
            mid,
            rad: mag_add(&self.rad, &err_mag(err)),
            prec: self.prec,
        }
    }

    fn endpoint_prec(&self) -> u32 {
        (self.prec as u64).max(self.mid.bits()).min(u32::MAX as u64 / 2) as u32 + 64
    }

    /// A lower bound for every point of the ball.
    pub fn lo(&self) -> Dyadic {
        if self.rad.is_zero() {
            return self.mid.clone();
        }
        self.mid.add_round(&self.rad.neg(), self.endpoint_prec(), Round::Floor)
    }

    /// An upper bound for every point of the ball.
    pub fn hi(&self) -> Dyadic {
        if self.rad.is_zero() {
            return self.mid.clone();
        }
        self.mid.add_round(&self.rad, self.endpoint_prec(), Round::Ceil)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo().is_positive() && !self.hi().is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo() <= x && x <= &self.hi()
    }

    pub fn contains_int(&self, n: &BigInt) -> bool {
        self.contains(&Dyadic::from_int(n.clone()))
    }

    /// Does the ball contain every point of `other`?
    pub fn encloses(&self, other: &CertifiedReal) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    pub fn is_positive(&self) -> bool {
        self.lo().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi().is_negative()
    }

    /// The only integer in the ball, if there is exactly one.
    pub fn unique_integer(&self) -> Option<BigInt> {
        let c = self.lo().ceil_int();
        let f = self.hi().floor_int();
        (c == f).then_some(c)
    }

    pub fn width(&self) -> Dyadic {
        self.rad.mul_pow2(1)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    fn work_prec(&self, other: &CertifiedReal) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add_ball(&self, other: &CertifiedReal) -> CertifiedReal {
        let p = self.work_prec(other);
        let (mid, err) = self.mid.add_approx(&other.mid, p);
        let rad = mag_add(&mag_add(&self.rad, &other.rad), &err_mag(err));
        CertifiedReal { mid, rad, prec: p }
    }

    pub fn sub_ball(&self, other: &CertifiedReal) -> CertifiedReal {
        self.add_ball(&other.neg_ball())
    }

    pub fn neg_ball(&self) -> CertifiedReal {
        CertifiedReal {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn mul_ball(&self, other: &CertifiedReal) -> CertifiedReal {
        let p = self.work_prec(other);
        let exact = self.mid.mul(&other.mid);
        let (mid, err) = exact.round_with_err(p, Round::Floor);
        let mut rad = err_mag(err);
        if !other.rad.is_zero() {
            rad = mag_add(&rad, &mag_mul(&mag_up(&self.mid), &other.rad));
        }
        if !self.rad.is_zero() {
            rad = mag_add(&rad, &mag_mul(&mag_up(&other.mid), &self.rad));
            rad = mag_add(&rad, &mag_mul(&self.rad, &other.rad));
        }
        CertifiedReal { mid, rad, prec: p }
    }

    pub fn sqr(&self) -> CertifiedReal {
        let r = self.mul_ball(self);
        // x^2 >= 0: clip the part of the ball below zero.
        if r.lo().is_negative() {
            return CertifiedReal::from_zero_to(&r.hi(), r.prec);
        }
        r
    }

    /// Exact scaling by a power of two.
    pub fn mul_pow2(&self, k: i64) -> CertifiedReal {
        CertifiedReal {
            mid: self.mid.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> CertifiedReal {
        self.mul_ball(&CertifiedReal::from_int(n.clone(), self.prec))
    }

    pub fn recip(&self) -> Result<CertifiedReal> {
        let p = self.prec;
        let abs_mid = self.mid.abs();
        let gap = abs_mid.add_round(&self.rad.neg(), RAD_BITS, Round::Floor);
        if !gap.is_positive() {
            return Err(Error::DivisionByZero);
        }
        let (q, exact) = Dyadic::from_ratio(
            &BigInt::from(1),
            self.mid.mant(),
            p + 2,
            Round::Floor,
        );
        let mid = q.mul_pow2(-self.mid.exp());
        let mut rad = if exact {
            Dyadic::zero()
        } else {
            Dyadic::pow2(mid.exp().min(mid.top() - p as i64 - 2))
        };
        if !self.rad.is_zero() {
            // |1/x - 1/m| <= r / (|m| (|m| - r)) for |x - m| <= r < |m|.
            let denom = abs_mid.round(RAD_BITS, Round::Floor).mul(&gap);
            let prop = self.rad.div_round(&denom, RAD_BITS, Round::Ceil);
            rad = mag_add(&rad, &prop);
        }
        Ok(CertifiedReal::new(mid, rad, p))
    }

    pub fn div_ball(&self, other: &CertifiedReal) -> Result<CertifiedReal> {
        let p = self.work_prec(other);
        Ok(self.mul_ball(&other.clone().with_prec(p).recip()?))
    }

    pub fn pow_u(&self, n: u64) -> CertifiedReal {
        let mut result = CertifiedReal::one(self.prec);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ball(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn powi(&self, n: i64) -> Result<CertifiedReal> {
        let p = self.pow_u(n.unsigned_abs());
        if n < 0 {
            p.recip()
        } else {
            Ok(p)
        }
    }

    pub fn abs(&self) -> CertifiedReal {
        if self.is_negative() {
            return self.neg_ball();
        }
        if self.is_positive() {
            return self.clone();
        }
        let m = self.lo().abs().max(self.hi().abs());
        CertifiedReal::from_zero_to(&m, self.prec)
    }

    /// A ball covering `[0, m]` whose lower endpoint is exactly zero.
    fn from_zero_to(m: &Dyadic, prec: u32) -> CertifiedReal {
        let half = m.mul_pow2(-1).round(RAD_BITS, Round::Ceil);
        CertifiedReal {
            mid: half.clone(),
            rad: half,
            prec,
        }
    }

    /// Enclosure of `max(x, y)` over all pairs of points.
    pub fn max(&self, other: &CertifiedReal) -> CertifiedReal {
        let p = self.work_prec(other);
        if self.lo() >= other.hi() {
            return self.clone().with_prec(p);
        }
        if other.lo() >= self.hi() {
            return other.clone().with_prec(p);
        }
        let lo = self.lo().max(other.lo());
        let hi = self.hi().max(other.hi());
        CertifiedReal::from_interval(&lo, &hi, p)
    }

    pub fn min(&self, other: &CertifiedReal) -> CertifiedReal {
        self.neg_ball().max(&other.neg_ball()).neg_ball()
    }

    /// Intersection with another enclosure of the same quantity.
    pub fn intersect(&self, other: &CertifiedReal) -> Option<CertifiedReal> {
        let lo = self.lo().max(other.lo());
        let hi = self.hi().min(other.hi());
        (lo <= hi).then(|| CertifiedReal::from_interval(&lo, &hi, self.work_prec(other)))
    }

    /// Certified ordering, `None` when the balls overlap.
    pub fn certified_cmp(&self, other: &CertifiedReal) -> Option<Ordering> {
        if self.hi() < other.lo() {
            Some(Ordering::Less)
        } else if self.lo() > other.hi() {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Radius relative to the magnitude, as a rough `log2` measure.
    pub fn accuracy_bits(&self) -> i64 {
        if self.rad.is_zero() {
            return i64::MAX;
        }
        if self.mid.is_zero() {
            return -self.rad.top();
        }
        self.mid.top() - self.rad.top()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&CertifiedReal> for &CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: &CertifiedReal) -> CertifiedReal {
                self.$inner(rhs)
            }
        }
        impl $tr<CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: CertifiedReal) -> CertifiedReal {
                self.$inner(&rhs)
            }
        }
        impl $tr<&CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: &CertifiedReal) -> CertifiedReal {
                self.$inner(rhs)
            }
        }
        impl $tr<CertifiedReal> for &CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: CertifiedReal) -> CertifiedReal {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ball);
forward_binop!(Sub, sub, sub_ball);
forward_binop!(Mul, mul, mul_ball);

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        self.neg_ball()
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        self.neg_ball()
    }
}

impl Zero for CertifiedReal {
    fn zero() -> Self {
        CertifiedReal::zero(64)
    }
    fn is_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(x: f64, r: f64) -> CertifiedReal {
        CertifiedReal::new(Dyadic::from_f64(x), Dyadic::from_f64(r), 64)
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let third = CertifiedReal::from_ratio(&BigInt::from(1), &BigInt::from(3), 100);
        let three = CertifiedReal::from_int(3, 100);
        let one = &third * &three;
        assert!(one.contains(&Dyadic::one()));
        assert!(one.accuracy_bits() > 95);
        let q = CertifiedReal::one(100).div_ball(&three).unwrap();
        assert!(q.overlaps(&third));
    }

    #[test]
    fn recip_of_ball_straddling_zero_fails() {
        assert_eq!(ball(0.1, 0.2).recip().unwrap_err(), Error::DivisionByZero);
        let r = ball(2.0, 0.5).recip().unwrap();
        assert!(r.contains(&Dyadic::from_f64(1.0 / 1.5)));
        assert!(r.contains(&Dyadic::from_f64(1.0 / 2.5)));
    }

    #[test]
    fn unique_integer_requires_a_narrow_ball() {
        assert_eq!(ball(3.0, 0.1).unique_integer(), Some(BigInt::from(3)));
        assert_eq!(ball(3.2, 0.1).unique_integer(), None);
        assert_eq!(ball(3.5, 0.6).unique_integer(), None);
        assert_eq!(ball(3.5, 0.1).unique_integer(), None);
    }

    #[test]
    fn abs_and_max_are_interval_sound() {
        let a = ball(-0.1, 0.3).abs();
        assert!(a.contains(&Dyadic::zero()));
        assert!(a.contains(&Dyadic::from_f64(0.4)));
        assert!(!a.lo().is_negative());
        let m = ball(1.0, 0.5).max(&ball(1.2, 0.1));
        assert!(m.contains(&Dyadic::from_f64(1.5)) && m.contains(&Dyadic::from_f64(1.1)));
    }

    #[test]
    fn powers_match_repeated_products() {
        let x = CertifiedReal::from_ratio(&BigInt::from(7), &BigInt::from(5), 128);
        let p = x.pow_u(13);
        let mut q = CertifiedReal::one(128);
        for _ in 0..13 {
            q = q * &x;
        }
        assert!(p.overlaps(&q));
        let exact = BigRational::new(BigInt::from(7), BigInt::from(5));
        let e13 = num_traits::pow(exact, 13);
        assert!(p.overlaps(&CertifiedReal::from_rational(&e13, 128)));
    }
}
