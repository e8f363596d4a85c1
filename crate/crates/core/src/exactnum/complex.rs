use std::fmt;

use num_bigint::BigInt;

use super::dyadic::Dyadic;
use super::elementary::pi;
use super::real::CertifiedReal;
use crate::error::{Error, Result};

/// A complex number enclosed component-wise.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedComplex {
    pub re: CertifiedReal,
    pub im: CertifiedReal,
}

impl fmt::Debug for CertifiedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}

impl CertifiedComplex {
    pub fn new(re: CertifiedReal, im: CertifiedReal) -> Self {
        CertifiedComplex { re, im }
    }

    pub fn from_real(re: CertifiedReal) -> Self {
        let p = re.prec();
        CertifiedComplex {
            re,
            im: CertifiedReal::zero(p),
        }
    }

    pub fn zero(prec: u32) -> Self {
        CertifiedComplex::from_real(CertifiedReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        CertifiedComplex::from_real(CertifiedReal::one(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(self, prec: u32) -> Self {
        CertifiedComplex {
            re: self.re.with_prec(prec),
            im: self.im.with_prec(prec),
        }
    }

    /// Is the imaginary part exactly zero?
    pub fn is_real(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, other: &CertifiedComplex) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn conj(&self) -> Self {
        CertifiedComplex {
            re: self.re.clone(),
            im: self.im.neg_ball(),
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedComplex {
            re: self.re.neg_ball(),
            im: self.im.neg_ball(),
        }
    }

    pub fn add(&self, other: &CertifiedComplex) -> Self {
        CertifiedComplex {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &CertifiedComplex) -> Self {
        CertifiedComplex {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn mul(&self, other: &CertifiedComplex) -> Self {
        if self.is_real() && other.is_real() {
            let re = &self.re * &other.re;
            let p = re.prec();
            return CertifiedComplex {
                re,
                im: CertifiedReal::zero(p),
            };
        }
        CertifiedComplex {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn scale(&self, k: &CertifiedReal) -> Self {
        CertifiedComplex {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn add_real(&self, k: &CertifiedReal) -> Self {
        CertifiedComplex {
            re: &self.re + k,
            im: self.im.clone(),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        CertifiedComplex {
            re: self.re.mul_int(n),
            im: self.im.mul_int(n),
        }
    }

    /// `|z|^2`, never negative.
    pub fn norm_sqr(&self) -> CertifiedReal {
        if self.is_real() {
            return self.re.sqr();
        }
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> CertifiedReal {
        if self.is_real() {
            return self.re.abs();
        }
        self.norm_sqr()
            .sqrt()
            .expect("norm_sqr is never certified negative")
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_real() {
            return Ok(CertifiedComplex::from_real(self.re.recip()?));
        }
        let n = self.norm_sqr().recip()?;
        Ok(self.conj().scale(&n))
    }

    pub fn div(&self, other: &CertifiedComplex) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow_u(&self, n: u64) -> Self {
        let mut result = CertifiedComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `log |z|` computed as `log(|z|^2) / 2`.
    pub fn log_abs(&self) -> Result<CertifiedReal> {
        if self.is_real() {
            return self.re.abs().log();
        }
        Ok(self.norm_sqr().log()?.mul_pow2(-1))
    }

    /// Principal argument in `(-pi, pi]`. Fails when the enclosure touches
    /// zero or straddles the negative real axis.
    pub fn arg(&self) -> Result<CertifiedReal> {
        let p = self.prec();
        if self.re.is_positive() {
            if self.is_real() {
                return Ok(CertifiedReal::zero(p));
            }
            return self.im.div_ball(&self.re)?.atan();
        }
        let half_pi = pi(p + 8).mul_pow2(-1).with_prec(p);
        if self.im.is_positive() {
            return Ok(half_pi - self.re.div_ball(&self.im)?.atan()?);
        }
        if self.im.is_negative() {
            return Ok(half_pi.neg_ball() - self.re.div_ball(&self.im)?.atan()?);
        }
        if self.re.is_negative() {
            if self.is_real() {
                return Ok(pi(p + 8).with_prec(p));
            }
            return Err(Error::domain("argument straddles the branch cut"));
        }
        Err(Error::domain("argument of an enclosure containing zero"))
    }

    /// Principal logarithm.
    pub fn log(&self) -> Result<CertifiedComplex> {
        Ok(CertifiedComplex {
            re: self.log_abs()?,
            im: self.arg()?,
        })
    }

    /// The real point `x` is inside the enclosure.
    pub fn contains_real(&self, x: &Dyadic) -> bool {
        self.re.contains(x) && self.im.contains(&Dyadic::zero())
    }
}
