use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::AlgebraicField;
use super::poly::{self, QPoly};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, CertifiedComplex, CertifiedReal};

/// `sum_i c_i alpha^i` with exact rational coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: AlgebraicField,
    coords: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement[{}]", self.to_strings().join(", "))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coef = format_rational(c);
            let term = match (i, c.is_one()) {
                (0, _) => coef,
                (1, true) => "a".to_string(),
                (1, false) => format!("{coef}*a"),
                (_, true) => format!("a^{i}"),
                (_, false) => format!("{coef}*a^{i}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + ").replace("+ -", "- "))
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldElement {
    /// Coordinates in the power basis; shorter lists are padded with zeros.
    pub fn new(field: &AlgebraicField, coords: Vec<BigRational>) -> Result<Self> {
        let d = field.degree();
        if coords.len() > d {
            return Err(Error::invalid(format!(
                "{} coordinates for a field of degree {d}",
                coords.len()
            )));
        }
        let mut coords = coords;
        coords.resize(d, BigRational::zero());
        Ok(FieldElement {
            field: field.clone(),
            coords,
        })
    }

    pub fn from_i64_coords(field: &AlgebraicField, coords: &[i64]) -> Result<Self> {
        FieldElement::new(field, coords.iter().map(|&c| rat(c)).collect())
    }

    /// Reduce an arbitrary polynomial in `alpha` (lowest degree first).
    pub fn from_poly(field: &AlgebraicField, p: &[BigRational]) -> Self {
        let mut acc = FieldElement::zero(field);
        for c in p.iter().rev() {
            acc = acc.mul_by_alpha();
            acc.coords[0] += c;
        }
        acc
    }

    pub fn from_rational(field: &AlgebraicField, q: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = q;
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_int(field: &AlgebraicField, n: impl Into<BigInt>) -> Self {
        FieldElement::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &AlgebraicField) -> Self {
        FieldElement::from_int(field, 0)
    }

    pub fn one(field: &AlgebraicField) -> Self {
        FieldElement::from_int(field, 1)
    }

    /// The generator `alpha`.
    pub fn generator(field: &AlgebraicField) -> Self {
        if field.degree() == 1 {
            let c = field.coeffs();
            return FieldElement::from_rational(field, BigRational::new(-c[1].clone(), c[0].clone()));
        }
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[1] = BigRational::one();
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_strings(field: &AlgebraicField, items: &[impl AsRef<str>]) -> Result<Self> {
        let coords = items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        FieldElement::new(field, coords)
    }

    /// Coordinates as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }

    pub fn field(&self) -> &AlgebraicField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coords[0].clone())
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    fn mul_by_alpha(&self) -> FieldElement {
        let d = self.coords.len();
        if d == 1 {
            return self.scale(&self.field.relation()[0]);
        }
        let top = self.coords[d - 1].clone();
        let mut coords = Vec::with_capacity(d);
        coords.push(BigRational::zero());
        coords.extend_from_slice(&self.coords[..d - 1]);
        if !top.is_zero() {
            for (c, r) in coords.iter_mut().zip(self.field.relation()) {
                *c += &top * r;
            }
        }
        FieldElement {
            field: self.field.clone(),
            coords,
        }
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let d = self.coords.len();
        let mut acc = vec![BigRational::zero(); d];
        let mut power = self.clone();
        for (k, y) in other.coords.iter().enumerate() {
            if !y.is_zero() {
                for (a, p) in acc.iter_mut().zip(&power.coords) {
                    *a += p * y;
                }
            }
            if k + 1 < d {
                power = power.mul_by_alpha();
            }
        }
        Ok(FieldElement {
            field: self.field.clone(),
            coords: acc,
        })
    }

    /// Column `k` holds the coordinates of `x alpha^k`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.coords.len();
        let mut cols = Vec::with_capacity(d);
        let mut power = self.clone();
        for k in 0..d {
            cols.push(power.coords.clone());
            if k + 1 < d {
                power = power.mul_by_alpha();
            }
        }
        (0..d).map(|i| (0..d).map(|k| cols[k][i].clone()).collect()).collect()
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.coords.len();
        let mut rhs = vec![BigRational::zero(); d];
        rhs[0] = BigRational::one();
        let sol = solve(self.multiplication_matrix(), rhs).ok_or(Error::DivisionByZero)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coords: sol,
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        self.mul(&other.inverse()?)
    }

    pub fn pow_u(&self, n: u64) -> FieldElement {
        let mut result = FieldElement::one(&self.field);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        result
    }

    pub fn pow(&self, n: i64) -> Result<FieldElement> {
        if n >= 0 {
            Ok(self.pow_u(n as u64))
        } else {
            Ok(self.inverse()?.pow_u(n.unsigned_abs()))
        }
    }

    pub fn trace(&self) -> BigRational {
        let m = self.multiplication_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    pub fn norm(&self) -> BigRational {
        let cp = self.charpoly();
        if cp.len() % 2 == 0 {
            -cp[0].clone()
        } else {
            cp[0].clone()
        }
    }

    /// Monic `det(X I - M_x)`, lowest degree first (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> QPoly {
        let a = self.multiplication_matrix();
        let d = a.len();
        let mut c = vec![BigRational::zero(); d + 1];
        c[d] = BigRational::one();
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for k in 1..=d {
            // M_k = A M_{k-1} + c_{d-k+1} I
            let mut next = matmul(&a, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &c[d - k + 1];
            }
            m = next;
            let am = matmul(&a, &m);
            let tr: BigRational = (0..d).map(|i| am[i][i].clone()).sum();
            c[d - k] = -tr / rat(k as i64);
        }
        c
    }

    /// Monic minimal polynomial over Q, lowest degree first.
    pub fn minpoly(&self) -> QPoly {
        let cp = self.charpoly();
        let g = poly::gcd(&cp, &poly::derivative(&cp));
        let (q, _) = poly::divrem(&cp, &g);
        poly::make_monic(&q)
    }

    /// Degree of the minimal polynomial, `[Q(x) : Q]`.
    pub fn degree(&self) -> usize {
        poly::degree(&self.minpoly()).unwrap_or(0)
    }

    /// Primitive integer minimal polynomial, highest degree first.
    pub fn minpoly_integer(&self) -> Vec<BigInt> {
        let mut v = poly::primitive_integer(&self.minpoly());
        v.reverse();
        v
    }

    /// Leading coefficient of the primitive integer minimal polynomial.
    pub fn minpoly_leading(&self) -> BigInt {
        self.minpoly_integer()[0].clone()
    }

    /// Primitive integer characteristic polynomial of `x` (highest degree
    /// first); only defined when `x` generates the field.
    pub fn charpoly_scaled(&self) -> Result<Vec<BigInt>> {
        let d = self.field.degree();
        let deg = self.degree();
        if deg < d {
            return Err(Error::DegenerateElement {
                degree: deg,
                field_degree: d,
            });
        }
        let mut v = poly::primitive_integer(&self.charpoly());
        v.reverse();
        Ok(v)
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.charpoly().iter().all(|c| c.is_integer())
    }

    /// Algebraic integer of norm `+-1`.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.is_algebraic_integer() && self.norm().abs().is_one()
    }

    /// Extra working bits so that evaluating the coordinates does not
    /// swamp the requested precision.
    fn guard_bits(&self) -> u32 {
        let coord_bits = self
            .coords
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0);
        let root_bits = self
            .field
            .coeffs()
            .iter()
            .map(|c| c.bits())
            .max()
            .unwrap_or(0);
        (coord_bits + root_bits * self.coords.len() as u64 + 16).min(1 << 20) as u32
    }

    fn eval_at(&self, root: &CertifiedComplex, real: bool, wp: u32) -> CertifiedComplex {
        if real {
            let x = &root.re;
            let mut acc = CertifiedReal::zero(wp);
            for c in self.coords.iter().rev() {
                acc = acc * x + CertifiedReal::from_rational(c, wp);
            }
            return CertifiedComplex::from_real(acc);
        }
        let mut acc = CertifiedComplex::zero(wp);
        for c in self.coords.iter().rev() {
            acc = acc.mul(root).add_real(&CertifiedReal::from_rational(c, wp));
        }
        acc
    }

    /// Images under all embeddings, in the field's canonical order.
    pub fn conjugates(&self, prec: u32) -> Result<Vec<CertifiedComplex>> {
        let wp = (prec + self.guard_bits()).div_ceil(64) * 64;
        let roots = self.field.embeddings(wp)?;
        Ok(roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                self.eval_at(r, self.field.is_real_embedding(i), wp)
                    .with_prec(prec.max(64))
            })
            .collect())
    }

    /// Image under embedding `i`.
    pub fn embed(&self, i: usize, prec: u32) -> Result<CertifiedComplex> {
        let wp = (prec + self.guard_bits()).div_ceil(64) * 64;
        let roots = self.field.embeddings(wp)?;
        let r = roots
            .get(i)
            .ok_or_else(|| Error::invalid(format!("embedding index {i} out of range")))?;
        Ok(self
            .eval_at(r, self.field.is_real_embedding(i), wp)
            .with_prec(prec.max(64)))
    }

    /// Image under the identity embedding.
    pub fn identity_value(&self, prec: u32) -> Result<CertifiedComplex> {
        self.embed(self.field.identity_index(), prec)
    }

    /// Identity image as a real number; fails if it is not certifiably real.
    pub fn identity_real(&self, prec: u32) -> Result<CertifiedReal> {
        let v = self.identity_value(prec)?;
        if v.is_real() {
            return Ok(v.re);
        }
        if self.as_rational().is_some() {
            return Ok(v.re);
        }
        Err(Error::domain("identity embedding of the element is not real"))
    }

    /// Largest modulus of a conjugate; `house(0) = 0`.
    pub fn house(&self, prec: u32) -> Result<CertifiedReal> {
        if let Some(q) = self.as_rational() {
            return Ok(CertifiedReal::from_rational(&q.abs(), prec));
        }
        let conj = self.conjugates(prec)?;
        let mut best = conj[0].abs();
        for c in &conj[1..] {
            best = best.max(&c.abs());
        }
        Ok(best)
    }

    /// `sum_sigma log+ |sigma x|` over the embeddings of the field.
    fn sum_log_plus(&self, prec: u32) -> Result<CertifiedReal> {
        let conj = self.conjugates(prec)?;
        let mut s = CertifiedReal::zero(prec);
        for c in &conj {
            s = s + c.abs().log_plus()?;
        }
        Ok(s)
    }

    /// Absolute logarithmic height, normalized by the degree so that it does
    /// not depend on the field: `(log a_0(x) + sum over the conjugates of x
    /// of log+ |x'|) / [Q(x):Q]`. `h(0) = 0`.
    pub fn height(&self, prec: u32) -> Result<CertifiedReal> {
        if self.is_zero() {
            return Ok(CertifiedReal::zero(prec));
        }
        let delta = self.degree() as i64;
        let d = self.field.degree() as i64;
        let a0 = CertifiedReal::from_int(self.minpoly_leading(), prec + 8).log()?;
        let s = self.sum_log_plus(prec + 8)?;
        let h = a0.div_ball(&CertifiedReal::from_int(delta, prec + 8))?
            + s.div_ball(&CertifiedReal::from_int(d, prec + 8))?;
        Ok(h.with_prec(prec))
    }

    /// Logarithmic Mahler measure of the minimal polynomial, `deg(x) h(x)`.
    pub fn log_mahler_measure(&self, prec: u32) -> Result<CertifiedReal> {
        let delta = self.degree() as i64;
        Ok(self.height(prec + 8)?.mul_int(&BigInt::from(delta)).with_prec(prec))
    }
}

fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Exact Gaussian elimination; `None` for a singular matrix.
pub(crate) fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = BigRational::one() / &m[col][col];
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
            let t = &f * &rhs[col];
            rhs[r] -= t;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}
