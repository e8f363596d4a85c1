//! Dense univariate polynomials with rational coefficients, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{CertifiedComplex, CertifiedReal};

pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// `None` for the zero polynomial.
pub fn degree(p: &QPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// From integer coefficients given highest degree first.
pub fn from_desc(coeffs: &[BigInt]) -> QPoly {
    let mut p: QPoly = coeffs
        .iter()
        .rev()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    trim(&mut p);
    p
}

pub fn derivative(p: &QPoly) -> QPoly {
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division; panics on a zero divisor.
pub fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = a.clone();
    trim(&mut r);
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Monic greatest common divisor.
pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&x)
}

pub fn make_monic(p: &QPoly) -> QPoly {
    match degree(p) {
        None => Vec::new(),
        Some(d) => {
            let lead = p[d].clone();
            p[..=d].iter().map(|c| c / &lead).collect()
        }
    }
}

pub fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Scale to coprime integers with a positive leading coefficient.
pub fn primitive_integer(p: &QPoly) -> Vec<BigInt> {
    let Some(d) = degree(p) else {
        return Vec::new();
    };
    let den = p[..=d]
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p[..=d]
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in ints.iter_mut() {
            *c /= &g;
        }
    }
    if ints[d].is_negative() {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

/// Horner evaluation of integer coefficients (highest degree first).
pub fn eval_int_desc(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Horner over a ball, integer coefficients highest degree first.
pub fn eval_ball_desc(coeffs: &[BigInt], x: &CertifiedComplex) -> CertifiedComplex {
    let p = x.prec();
    let mut acc = CertifiedComplex::zero(p);
    for c in coeffs {
        acc = acc.mul(x).add_real(&CertifiedReal::from_int(c.clone(), p));
    }
    acc
}

/// Horner over a real ball, integer coefficients highest degree first.
pub fn eval_real_ball_desc(coeffs: &[BigInt], x: &CertifiedReal) -> CertifiedReal {
    let p = x.prec();
    let mut acc = CertifiedReal::zero(p);
    for c in coeffs {
        acc = acc * x + CertifiedReal::from_int(c.clone(), p);
    }
    acc
}
