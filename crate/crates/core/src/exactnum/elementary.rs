//! Square root, exponential, logarithm and arctangent on balls.
//!
//! Transcendental functions are evaluated with ball arithmetic itself: the
//! truncated series runs on balls, so rounding errors and the input radius are
//! tracked automatically, and an explicit tail bound is added at the end.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use parking_lot::RwLock;

use super::dyadic::Dyadic;
use super::real::CertifiedReal;
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 24;

/// Floor and ceiling of `sqrt(x)` on a grid of roughly `prec` bits.
fn sqrt_bounds(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    debug_assert!(!x.is_negative());
    if x.is_zero() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let m = x.mant();
    let e = x.exp();
    let mut t = 2 * prec as i64 + 2 - m.bits() as i64;
    if (t - e).rem_euclid(2) != 0 {
        t += 1;
    }
    let j = (t - e) / 2;
    let (n, exact) = if t >= 0 {
        (m << t as usize, true)
    } else {
        let n: BigInt = m >> (-t) as usize;
        let exact = (&n << (-t) as usize) == *m;
        (n, exact)
    };
    let s = n.sqrt();
    let lo = Dyadic::new(s.clone(), -j);
    let hi = if exact && &s * &s == n {
        lo.clone()
    } else {
        Dyadic::new(s + 1, -j)
    };
    (lo, hi)
}

fn const_cache() -> &'static RwLock<HashMap<(u8, u32), CertifiedReal>> {
    static CACHE: OnceLock<RwLock<HashMap<(u8, u32), CertifiedReal>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached_const(tag: u8, prec: u32, compute: fn(u32) -> CertifiedReal) -> CertifiedReal {
    let key_prec = prec.div_ceil(64) * 64;
    if let Some(v) = const_cache().read().get(&(tag, key_prec)) {
        return v.clone().with_prec(prec);
    }
    let v = compute(key_prec);
    const_cache().write().insert((tag, key_prec), v.clone());
    v.with_prec(prec)
}

/// `sum_{i>=0} z^(2i+1)/(2i+1)` for `|z| <= 1/2`.
fn atanh_series(z: &CertifiedReal, w: u32) -> CertifiedReal {
    let z = z.clone().with_prec(w);
    let z2 = z.sqr();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let stop = -(w as i64) - 4;
    let mut i: u64 = 1;
    loop {
        pow = pow.mul_ball(&z2);
        let denom = CertifiedReal::from_int(2 * i + 1, w);
        let term = pow.div_ball(&denom).expect("nonzero odd denominator");
        sum = sum.add_ball(&term);
        i += 1;
        if pow.abs().hi().top() < stop {
            break;
        }
    }
    // Remaining terms are bounded by |pow| * z^2 / (1 - z^2) <= |pow| / 3.
    let tail = pow.abs().hi();
    sum.add_ball(&CertifiedReal::new(Dyadic::zero(), tail, w))
}

/// `sum_{i>=0} (-1)^i z^(2i+1)/(2i+1)` for `|z| <= 1/2`.
fn atan_series(z: &CertifiedReal, w: u32) -> CertifiedReal {
    let z = z.clone().with_prec(w);
    let z2 = z.sqr();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let stop = -(w as i64) - 4;
    let mut i: u64 = 1;
    loop {
        pow = pow.mul_ball(&z2).neg_ball();
        let denom = CertifiedReal::from_int(2 * i + 1, w);
        let term = pow.div_ball(&denom).expect("nonzero odd denominator");
        sum = sum.add_ball(&term);
        i += 1;
        if pow.abs().hi().top() < stop {
            break;
        }
    }
    let tail = pow.abs().hi();
    sum.add_ball(&CertifiedReal::new(Dyadic::zero(), tail, w))
}

fn compute_ln2(w: u32) -> CertifiedReal {
    let third = CertifiedReal::from_ratio(&BigInt::from(1), &BigInt::from(3), w + 8);
    atanh_series(&third, w + 8).mul_pow2(1).with_prec(w)
}

fn compute_pi(w: u32) -> CertifiedReal {
    let wp = w + 8;
    let a = atan_series(&CertifiedReal::from_ratio(&1.into(), &5.into(), wp), wp);
    let b = atan_series(&CertifiedReal::from_ratio(&1.into(), &239.into(), wp), wp);
    (a.mul_pow2(4) - b.mul_pow2(2)).with_prec(w)
}

/// `log 2` to `prec` bits.
pub fn ln2(prec: u32) -> CertifiedReal {
    cached_const(0, prec, compute_ln2)
}

/// `pi` to `prec` bits.
pub fn pi(prec: u32) -> CertifiedReal {
    cached_const(1, prec, compute_pi)
}

impl CertifiedReal {
    /// Square root of an enclosure of a non-negative quantity. Points of the
    /// ball below zero are discarded; a ball entirely below zero is an error.
    pub fn sqrt(&self) -> Result<CertifiedReal> {
        let hi = self.hi();
        if hi.is_negative() {
            return Err(Error::domain("sqrt of a negative enclosure"));
        }
        let lo = self.lo();
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        let p = self.prec();
        let (l, _) = sqrt_bounds(&lo, p + 8);
        let (_, h) = sqrt_bounds(&hi, p + 8);
        Ok(CertifiedReal::from_interval(&l, &h, p).trimmed())
    }

    pub fn exp(&self) -> Result<CertifiedReal> {
        if self.is_exact() && self.mid().is_zero() {
            return Ok(CertifiedReal::one(self.prec()));
        }
        let approx = self.mid().to_f64();
        if !(approx.abs() < 4.0e15) || self.rad().top() > 40 {
            return Err(Error::domain("exp argument out of range"));
        }
        let p = self.prec();
        let k = (approx / std::f64::consts::LN_2).round() as i64;
        let kbits = 64 - k.unsigned_abs().leading_zeros();
        let w = p + GUARD_BITS + kbits;
        let t = self.clone().with_prec(w) - ln2(w + kbits).mul_int(&BigInt::from(k));
        const HALVINGS: i64 = 12;
        let u = t.mul_pow2(-HALVINGS);
        let u_abs = u.abs().hi();
        if u_abs.top() > -2 {
            return Err(Error::domain("exp argument radius too large"));
        }
        let mut sum = CertifiedReal::one(w);
        let mut term = CertifiedReal::one(w);
        let stop = -(w as i64) - 4;
        let mut i: u64 = 1;
        loop {
            term = term.mul_ball(&u).div_ball(&CertifiedReal::from_int(i, w))?;
            sum = sum.add_ball(&term);
            i += 1;
            if term.abs().hi().top() < stop {
                break;
            }
        }
        // Tail: sum_{j>i} |u|^j/j! <= 2 |term| |u| since |u| < 1/4.
        let tail = term.abs().hi().mul(&u_abs).mul_pow2(1);
        sum = sum.add_ball(&CertifiedReal::new(Dyadic::zero(), tail, w));
        for _ in 0..HALVINGS {
            sum = sum.sqr();
        }
        Ok(sum.mul_pow2(k).with_prec(p).trimmed())
    }

    /// Natural logarithm; the ball must be certified positive.
    pub fn log(&self) -> Result<CertifiedReal> {
        if !self.is_positive() {
            return Err(Error::domain("log of an enclosure not certified positive"));
        }
        let p = self.prec();
        let w = p + GUARD_BITS;
        let k = self.mid().top() - 1;
        let y = self.mul_pow2(-k).with_prec(w);
        let one = CertifiedReal::one(w);
        let z = (&y - &one).div_ball(&(&y + &one))?;
        if z.abs().hi() > Dyadic::pow2(-1) {
            // Wide ball: log is monotone, so bound it through the endpoints.
            let lo = CertifiedReal::exact(self.lo(), p).log()?.lo();
            let hi = CertifiedReal::exact(self.hi(), p).log()?.hi();
            return Ok(CertifiedReal::from_interval(&lo, &hi, p));
        }
        let mut result = atanh_series(&z, w).mul_pow2(1);
        if k != 0 {
            let kb = BigInt::from(k);
            let extra = kb.bits() as u32;
            result = result + ln2(w + extra).mul_int(&kb);
        }
        Ok(result.with_prec(p).trimmed())
    }

    /// `max(0, log x)`, defined for any enclosure of a non-negative quantity.
    pub fn log_plus(&self) -> Result<CertifiedReal> {
        let p = self.prec();
        let one = Dyadic::one();
        if self.hi() <= one {
            return Ok(CertifiedReal::zero(p));
        }
        if self.lo() >= one {
            return self.log();
        }
        let upper = CertifiedReal::exact(self.hi(), p).log()?.hi();
        Ok(CertifiedReal::from_interval(&Dyadic::zero(), &upper, p))
    }

    pub fn atan(&self) -> Result<CertifiedReal> {
        if self.is_exact() && self.mid().is_zero() {
            return Ok(CertifiedReal::zero(self.prec()));
        }
        let p = self.prec();
        let w = p + GUARD_BITS;
        let one = CertifiedReal::one(w);
        // atan x = 2 atan(x / (1 + sqrt(1 + x^2))), valid on all of R.
        const HALVINGS: i64 = 4;
        let mut x = self.clone().with_prec(w);
        for _ in 0..HALVINGS {
            let s = (&one + x.sqr()).sqrt()?;
            x = x.div_ball(&(&one + s))?;
        }
        if x.abs().hi() > Dyadic::pow2(-1) {
            return Err(Error::domain("atan argument enclosure too wide"));
        }
        Ok(atan_series(&x, w).mul_pow2(HALVINGS).with_prec(p).trimmed())
    }

    /// `self^y` for a positive base, via `exp(y log self)`.
    pub fn pow_real(&self, y: &CertifiedReal) -> Result<CertifiedReal> {
        self.log()?.mul_ball(y).exp()
    }

}
