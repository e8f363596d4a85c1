use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::complex::CertifiedComplex;
use super::dyadic::{Dyadic, Round};
use super::real::CertifiedReal;
use crate::error::{Error, Result};

/// Significant digits used for report endpoints.
pub const REPORT_DIGITS: u32 = 17;

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), n as usize)
}

/// `|x|` as `s * 10^(k - digits + 1)` with `10^(digits-1) <= s < 10^digits`,
/// rounded in direction `dir`.
fn decimal_parts(x: &Dyadic, digits: u32, dir: Round) -> (BigInt, i64, bool) {
    debug_assert!(x.is_positive());
    if x.exp().unsigned_abs() > HUGE_EXP {
        if let Some(parts) = decimal_parts_log(x, digits, dir) {
            return parts;
        }
    }
    let lo = pow10(digits - 1);
    let hi = pow10(digits);
    let mut k = ((x.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        let j = digits as i64 - 1 - k;
        let mut num = x.mant().clone();
        let mut den = BigInt::one();
        if x.exp() >= 0 {
            num <<= x.exp() as usize;
        } else {
            den <<= (-x.exp()) as usize;
        }
        if j >= 0 {
            num *= pow10(j as u32);
        } else {
            den *= pow10((-j) as u32);
        }
        let (q, r) = num.div_rem(&den);
        let s = if dir == Round::Ceil && !r.is_zero() { q + 1 } else { q };
        if s >= hi {
            k += 1;
        } else if s < lo {
            k -= 1;
        } else {
            return (s, k, r.is_zero());
        }
    }
}

/// Above this binary exponent the exact scaling would need enormous integers.
const HUGE_EXP: u64 = 1 << 16;

/// Same contract as `decimal_parts`, through a certified `log10 x`. The
/// flag is always `false`.
fn decimal_parts_log(x: &Dyadic, digits: u32, dir: Round) -> Option<(BigInt, i64, bool)> {
    let prec = 4 * digits + 96 + 64 - x.exp().unsigned_abs().leading_zeros();
    let ln10 = CertifiedReal::from_int(10, prec).log().ok()?;
    let ln_x = CertifiedReal::from_int(x.mant().clone(), prec)
        .log()
        .ok()?
        .add_ball(&super::elementary::ln2(prec).mul_int(&BigInt::from(x.exp())));
    let t = ln_x.div_ball(&ln10).ok()?;
    let lo = pow10(digits - 1);
    let hi = pow10(digits);
    let mut k = t.mid().to_rational().floor().to_integer();
    for _ in 0..8 {
        // x * 10^(digits - 1 - k)
        let shift = BigInt::from(digits - 1) - &k;
        let y = ln_x.add_ball(&ln10.mul_int(&shift)).exp().ok()?;
        let s = match dir {
            Round::Floor => y.lo().to_rational().floor().to_integer(),
            _ => y.hi().to_rational().ceil().to_integer(),
        };
        if s >= hi {
            k += 1;
        } else if s < lo {
            k -= 1;
        } else {
            return Some((s, i64::try_from(&k).ok()?, false));
        }
    }
    None
}

fn format_parts(negative: bool, s: &BigInt, k: i64) -> String {
    let digits = s.to_string();
    let (head, tail) = digits.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{k}")
    } else {
        format!("{sign}{head}.{tail}e{k}")
    }
}

/// Scientific notation with `digits` significant digits, rounded toward
/// `dir` so the printed number bounds `x` on the requested side.
pub fn dyadic_to_decimal(x: &Dyadic, digits: u32, dir: Round) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    let dir = if negative { dir.flip() } else { dir };
    let (s, k, _) = decimal_parts(&x.abs(), digits.max(1), dir);
    format_parts(negative, &s, k)
}

/// Outward-rounded `[lo, hi]`.
pub fn render_interval(x: &CertifiedReal, digits: u32) -> String {
    let (lo, hi) = interval_strings(x, digits);
    format!("[{lo}, {hi}]")
}

/// Outward-rounded endpoints as separate strings.
pub fn interval_strings(x: &CertifiedReal, digits: u32) -> (String, String) {
    (
        dyadic_to_decimal(&x.lo(), digits, Round::Floor),
        dyadic_to_decimal(&x.hi(), digits, Round::Ceil),
    )
}

/// `c ± r`, where `r` also covers the rounding of `c` to `digits` digits.
pub fn render_center_radius(x: &CertifiedReal, digits: u32) -> String {
    let mid = x.mid();
    if mid.is_zero() {
        return format!("0 ± {}", dyadic_to_decimal(x.rad(), 3, Round::Ceil));
    }
    let negative = mid.is_negative();
    let (s, k, exact) = decimal_parts(&mid.abs(), digits.max(1), Round::Floor);
    if exact {
        return format!(
            "{} ± {}",
            format_parts(negative, &s, k),
            dyadic_to_decimal(x.rad(), 3, Round::Ceil)
        );
    }
    let ulp_exp = k - digits.max(1) as i64 + 1;
    let ulp = if ulp_exp >= 0 {
        Dyadic::from_int(pow10(ulp_exp as u32))
    } else {
        Dyadic::from_ratio(&BigInt::one(), &pow10((-ulp_exp) as u32), 64, Round::Ceil).0
    };
    let r = x.rad().add_round(&ulp, 64, Round::Ceil);
    format!(
        "{} ± {}",
        format_parts(negative, &s, k),
        dyadic_to_decimal(&r, 3, Round::Ceil)
    )
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map_or(REPORT_DIGITS, |p| p as u32);
        f.write_str(&render_center_radius(self, digits))
    }
}

impl fmt::Display for CertifiedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map_or(REPORT_DIGITS, |p| p as u32);
        if self.is_real() {
            return f.write_str(&render_center_radius(&self.re, digits));
        }
        write!(
            f,
            "({}) + ({})i",
            render_center_radius(&self.re, digits),
            render_center_radius(&self.im, digits)
        )
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Accepts `"p"`, `"p/q"` and exact decimals such as `"-0.05"` or `"1.5e-3"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if !s.contains('/') && s.contains(['.', 'e', 'E']) {
        return parse_decimal(s).ok_or_else(bad);
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let q = BigRational::new(n, d);
    debug_assert!(q.denom().is_positive());
    Ok(q)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.contains(['+', '-']) || (int.trim_start_matches(['+', '-']).is_empty() && frac.is_empty()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - i32::try_from(frac.len()).ok()?;
    let ten = BigInt::from(10);
    Some(if shift >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-shift) as usize))
    })
}
