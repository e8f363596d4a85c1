use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

/// Rounding direction for directed operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
}

impl Round {
    pub fn flip(self) -> Self {
        match self {
            Round::Floor => Round::Ceil,
            Round::Ceil => Round::Floor,
        }
    }
}

/// An exact binary fraction `mant * 2^exp`.
///
/// Normalized so that the mantissa is odd (or zero with `exp == 0`), which
/// makes structural equality coincide with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic::default()
    }

    pub fn one() -> Self {
        Dyadic::new(BigInt::one(), 0)
    }

    pub fn pow2(exp: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64 cannot be a dyadic");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let (m, e, s) = x.integer_decode();
        let mant = BigInt::from(m) * i64::from(s);
        Dyadic::new(mant, i64::from(e))
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Smallest `t` with `|self| < 2^t`; `i64::MIN` for zero.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.bits() as i64
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    /// Exact sum. Cost grows with the exponent gap; use [`Dyadic::add_round`]
    /// when the operands can be far apart in magnitude.
    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        self.round_with_err(prec, dir).0
    }

    /// Round toward `dir`; also returns `Some(e)` when the result is inexact,
    /// in which case the rounding error is strictly below `2^e`.
    pub fn round_with_err(&self, prec: u32, dir: Round) -> (Self, Option<i64>) {
        let prec = prec.max(2) as u64;
        let bits = self.bits();
        if bits <= prec {
            return (self.clone(), None);
        }
        let shift = bits - prec;
        let m = match dir {
            Round::Floor => &self.mant >> shift as usize,
            Round::Ceil => -((-&self.mant) >> shift as usize),
        };
        let err_exp = self.exp + shift as i64;
        (Dyadic::new(m, err_exp), Some(err_exp))
    }

    /// Directed-rounded sum with `prec` significant bits. Safe for operands
    /// of wildly different magnitude.
    pub fn add_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Self {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        let floor_exp = big.top() - prec as i64 - 4;
        if small.top() < floor_exp {
            // |small| < 2^floor_exp: replace it by a nearby bound on the safe side.
            let nudge = match (dir, small.is_negative()) {
                (Round::Floor, true) => Dyadic::pow2(floor_exp).neg(),
                (Round::Ceil, false) => Dyadic::pow2(floor_exp),
                _ => Dyadic::zero(),
            };
            return big.add(&nudge).round(prec, dir);
        }
        self.add(other).round(prec, dir)
    }

    /// Approximate sum rounded to `prec` bits together with an error
    /// exponent: `|result - exact| < 2^e` when `Some(e)`.
    pub fn add_approx(&self, other: &Dyadic, prec: u32) -> (Self, Option<i64>) {
        if self.is_zero() {
            return other.round_with_err(prec, Round::Floor);
        }
        if other.is_zero() {
            return self.round_with_err(prec, Round::Floor);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        let floor_exp = big.top() - prec as i64 - 4;
        if small.top() < floor_exp {
            let (r, e) = big.round_with_err(prec, Round::Floor);
            let e = e.map_or(small.top(), |e| e.max(small.top()) + 1);
            return (r, Some(e));
        }
        self.add(other).round_with_err(prec, Round::Floor)
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            &self.mant >> (-self.exp) as usize
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -self.neg().floor_int()
    }

    /// Directed rounding of `num/den` to `prec` bits; `den` must be nonzero.
    /// The flag reports whether the result is exact.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> (Self, bool) {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return (Dyadic::zero(), true);
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let k = prec as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let (n, d) = if k >= 0 {
            (num << k as usize, den)
        } else {
            (num, den << (-k) as usize)
        };
        let (q, r) = n.div_mod_floor(&d);
        let exact = r.is_zero();
        let q = if !exact && dir == Round::Ceil { q + 1 } else { q };
        (Dyadic::new(q, -k), exact)
    }

    /// Directed-rounded quotient of two dyadics.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Self {
        let (q, _) = Dyadic::from_ratio(&self.mant, &other.mant, prec, dir);
        q.mul_pow2(self.exp - other.exp)
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> num_rational::BigRational {
        if self.exp >= 0 {
            num_rational::BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            num_rational::BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (m, e) = if bits > 62 {
            let s = bits - 62;
            (&self.mant >> s as usize, self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        ldexp(m, e)
    }
}

pub(crate) fn ldexp(x: f64, e: i64) -> f64 {
    if e > 2200 {
        return x * f64::INFINITY;
    }
    if e < -2200 {
        return x * 0.0;
    }
    let e = e as i32;
    let half = e / 2;
    x * 2f64.powi(half) * 2f64.powi(e - half)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            let by_mag = ta.cmp(&tb);
            return if sa == Sign::Plus { by_mag } else { by_mag.reverse() };
        }
        self.sub(other).mant.sign().cmp(&Sign::NoSign)
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Self {
        Dyadic::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_makes_equality_numeric() {
        assert_eq!(Dyadic::new(BigInt::from(12), 0), Dyadic::new(BigInt::from(3), 2));
        assert_eq!(Dyadic::new(BigInt::from(0), 17), Dyadic::zero());
    }

    #[test]
    fn rounding_is_directed() {
        let x = Dyadic::new(BigInt::from(0b1011_0111), 0);
        let lo = x.round(4, Round::Floor);
        let hi = x.round(4, Round::Ceil);
        assert!(lo <= x && x <= hi);
        assert_eq!(lo, Dyadic::from_int(0b1011_0000));
        assert_eq!(hi, Dyadic::from_int(0b1100_0000));
        let n = x.neg();
        assert!(n.round(4, Round::Floor) <= n);
        assert!(n.round(4, Round::Ceil) >= n);
    }

    #[test]
    fn far_apart_sums_stay_cheap_and_sound() {
        let big = Dyadic::one();
        let tiny = Dyadic::pow2(-1_000_000_000_000);
        let up = big.add_round(&tiny, 53, Round::Ceil);
        let down = big.add_round(&tiny, 53, Round::Floor);
        assert!(up > big);
        assert_eq!(down, big);
        let (approx, err) = big.add_approx(&tiny.neg(), 53);
        assert_eq!(approx, big);
        assert!(err.is_some());
    }

    #[test]
    fn ratio_brackets_the_quotient() {
        let (lo, e1) = Dyadic::from_ratio(&BigInt::from(1), &BigInt::from(3), 20, Round::Floor);
        let (hi, e2) = Dyadic::from_ratio(&BigInt::from(1), &BigInt::from(3), 20, Round::Ceil);
        assert!(!e1 && !e2);
        assert!(lo.mul(&Dyadic::from_int(3)) < Dyadic::one());
        assert!(hi.mul(&Dyadic::from_int(3)) > Dyadic::one());
        let (exact, ok) = Dyadic::from_ratio(&BigInt::from(-6), &BigInt::from(4), 20, Round::Floor);
        assert!(ok);
        assert_eq!(exact, Dyadic::new(BigInt::from(-3), -1));
    }

    #[test]
    fn floor_and_ceil_of_negative_fractions() {
        let x = Dyadic::new(BigInt::from(-5), -1); // -2.5
        assert_eq!(x.floor_int(), BigInt::from(-3));
        assert_eq!(x.ceil_int(), BigInt::from(-2));
    }

    #[test]
    fn f64_roundtrip() {
        for &v in &[1.0, -0.1, 3.5e300, 2.2e-300, 7.0f64.cbrt()] {
            assert_eq!(Dyadic::from_f64(v).to_f64(), v);
        }
    }
}
