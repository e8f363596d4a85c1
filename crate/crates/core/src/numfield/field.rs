use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use super::poly;
use super::roots::{self, Isolation};
use crate::error::{Error, Result};
use crate::exactnum::{CertifiedComplex, CertifiedReal, PrecisionPolicy};

/// On-disk description of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDef {
    #[serde(with = "int_list")]
    pub coeffs: Vec<BigInt>,
    #[serde(default)]
    pub attest_irreducible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_embedding: Option<usize>,
}

impl FieldDef {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        FieldDef {
            coeffs,
            attest_irreducible: false,
            identity_embedding: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("field definition: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("field definitions always serialize")
    }
}

/// Integers as JSON numbers when they fit in `i64`, strings otherwise.
pub(crate) mod int_list {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<Repr> = v
            .iter()
            .map(|x| match x.to_i64() {
                Some(i) => Repr::Small(i),
                None => Repr::Big(x.to_string()),
            })
            .collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let reprs = Vec::<Repr>::deserialize(d)?;
        reprs
            .into_iter()
            .map(|r| match r {
                Repr::Small(i) => Ok(BigInt::from(i)),
                Repr::Big(s) => s.trim().parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

struct FieldData {
    /// `a_0, ..., a_d`, highest degree first, primitive with `a_0 > 0`.
    coeffs: Vec<BigInt>,
    degree: usize,
    r1: usize,
    r2: usize,
    identity: usize,
    attested: bool,
    /// `alpha^d = sum_i relation[i] alpha^i`.
    relation: Vec<BigRational>,
    base: Option<Isolation>,
    policy: PrecisionPolicy,
    cache: RwLock<HashMap<u32, Arc<Vec<CertifiedComplex>>>>,
}

/// `Q(alpha)` for a root `alpha` of an irreducible integer polynomial.
///
/// Cloning is cheap; clones share the embedding cache.
#[derive(Clone)]
pub struct AlgebraicField {
    inner: Arc<FieldData>,
}

impl fmt::Debug for AlgebraicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicField({})", self.polynomial_string())
    }
}

impl PartialEq for AlgebraicField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.coeffs == other.inner.coeffs && self.inner.identity == other.inner.identity)
    }
}

impl Eq for AlgebraicField {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FieldOptions {
    pub attest_irreducible: bool,
    pub identity_embedding: Option<usize>,
    pub policy: Option<PrecisionPolicy>,
}

impl AlgebraicField {
    pub fn new(coeffs: &[BigInt]) -> Result<Self> {
        AlgebraicField::with_options(coeffs, FieldOptions::default())
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        AlgebraicField::new(&c)
    }

    pub fn from_def(def: &FieldDef) -> Result<Self> {
        AlgebraicField::with_options(
            &def.coeffs,
            FieldOptions {
                attest_irreducible: def.attest_irreducible,
                identity_embedding: def.identity_embedding,
                policy: None,
            },
        )
    }

    pub fn to_def(&self) -> FieldDef {
        FieldDef {
            coeffs: self.inner.coeffs.clone(),
            attest_irreducible: self.inner.attested,
            identity_embedding: Some(self.inner.identity),
        }
    }

    pub fn with_options(coeffs: &[BigInt], opts: FieldOptions) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("empty coefficient list"));
        }
        if coeffs[0].is_zero() {
            return Err(Error::LeadingZero);
        }
        if coeffs.len() < 2 {
            return Err(Error::invalid("polynomial must have degree at least 1"));
        }
        let g = coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut coeffs: Vec<BigInt> = coeffs.iter().map(|c| c / &g).collect();
        if coeffs[0].is_negative() {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
        }
        let d = coeffs.len() - 1;
        let f = poly::from_desc(&coeffs);
        if poly::degree(&poly::gcd(&f, &poly::derivative(&f))) != Some(0) {
            return Err(Error::NotSquarefree);
        }
        let policy = opts.policy.unwrap_or_else(PrecisionPolicy::from_env);
        let a0 = BigRational::from_integer(coeffs[0].clone());
        let relation: Vec<BigRational> = (0..d)
            .map(|i| -BigRational::from_integer(coeffs[d - i].clone()) / &a0)
            .collect();
        let (base, r1, r2) = if d == 1 {
            (None, 1, 0)
        } else {
            let iso = roots::isolate(&coeffs, &policy.ladder())
                .ok_or_else(|| Error::exhausted(policy.max_bits, "root isolation"))?;
            let (r1, r2) = (iso.r1, iso.r2);
            (Some(iso), r1, r2)
        };
        let identity = match opts.identity_embedding {
            Some(i) if i >= d => {
                return Err(Error::invalid(format!("identity embedding {i} out of range 0..{d}")))
            }
            Some(i) => i,
            None if r1 > 0 => 0,
            None => r1,
        };
        let field = AlgebraicField {
            inner: Arc::new(FieldData {
                coeffs,
                degree: d,
                r1,
                r2,
                identity,
                attested: opts.attest_irreducible,
                relation,
                base,
                policy,
                cache: RwLock::new(HashMap::new()),
            }),
        };
        field.validate_irreducible()?;
        Ok(field)
    }

    fn validate_irreducible(&self) -> Result<()> {
        let d = self.degree();
        if d == 1 {
            return Ok(());
        }
        self.rational_root_test()?;
        if d == 4 {
            self.quadratic_factor_test()?;
        }
        if d > 4 && !self.inner.attested {
            return Err(Error::ReduciblePolynomial(format!(
                "irreducibility of a degree {d} polynomial is not checked; it must be attested"
            )));
        }
        Ok(())
    }

    /// Integers inside a real enclosure, or `None` if there are too many.
    fn integers_in(x: &CertifiedReal, limit: usize) -> Option<Vec<BigInt>> {
        let lo = x.lo().ceil_int();
        let hi = x.hi().floor_int();
        if hi < lo {
            return Some(Vec::new());
        }
        let count = &hi - &lo + 1;
        if count > BigInt::from(limit) {
            return None;
        }
        let mut out = Vec::new();
        let mut m = lo;
        while m <= hi {
            out.push(m.clone());
            m += 1;
        }
        Some(out)
    }

    /// A rational root `r` has `a_0 r` integral, so only integers near
    /// `a_0` times each real root need to be tried.
    fn rational_root_test(&self) -> Result<()> {
        let f = poly::from_desc(&self.inner.coeffs);
        let a0 = self.inner.coeffs[0].clone();
        let ladder = self.inner.policy.ladder();
        for i in 0..self.inner.r1 {
            let mut done = false;
            for &bits in &ladder {
                let root = &self.embeddings(bits)?[i];
                let scaled = root.re.mul_int(&a0);
                if let Some(cands) = Self::integers_in(&scaled, 16) {
                    for m in cands {
                        let r = BigRational::new(m.clone(), a0.clone());
                        if poly::eval(&f, &r).is_zero() {
                            return Err(Error::ReduciblePolynomial(format!(
                                "rational root {}",
                                crate::exactnum::format_rational(&r)
                            )));
                        }
                    }
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::exhausted(self.inner.policy.max_bits, "rational root test"));
            }
        }
        Ok(())
    }

    /// Quartic case: a factor `a_0 x^2 - S x + T` over Q has `S = a_0(r_i + r_j)`
    /// and `T = a_0 r_i r_j` integral for a pair of roots closed under conjugation.
    fn quadratic_factor_test(&self) -> Result<()> {
        let f = poly::from_desc(&self.inner.coeffs);
        let a0 = self.inner.coeffs[0].clone();
        let (r1, r2) = (self.inner.r1, self.inner.r2);
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..r1 {
            for j in (i + 1)..r1 {
                pairs.push((i, j));
            }
        }
        for k in 0..r2 {
            pairs.push((r1 + k, r1 + r2 + k));
        }
        for (i, j) in pairs {
            let mut done = false;
            for &bits in &self.inner.policy.ladder() {
                let e = self.embeddings(bits)?;
                let s = e[i].add(&e[j]).re.mul_int(&a0);
                let t = e[i].mul(&e[j]).re.mul_int(&a0);
                let (Some(ss), Some(ts)) = (Self::integers_in(&s, 8), Self::integers_in(&t, 8)) else {
                    continue;
                };
                for sv in &ss {
                    for tv in &ts {
                        let g = poly::from_desc(&[a0.clone(), -sv.clone(), tv.clone()]);
                        let (_, r) = poly::divrem(&f, &g);
                        if r.is_empty() {
                            return Err(Error::ReduciblePolynomial(format!(
                                "quadratic factor {a0}x^2 + {}x + {tv}",
                                -sv
                            )));
                        }
                    }
                }
                done = true;
                break;
            }
            if !done {
                return Err(Error::exhausted(self.inner.policy.max_bits, "quadratic factor test"));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    /// `(r1, r2)`.
    pub fn signature(&self) -> (usize, usize) {
        (self.inner.r1, self.inner.r2)
    }

    /// Rank of the unit group, `r1 + r2 - 1`.
    pub fn unit_rank(&self) -> usize {
        self.inner.r1 + self.inner.r2 - 1
    }

    /// Defining polynomial, highest degree first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.inner.coeffs
    }

    pub fn leading_coeff(&self) -> &BigInt {
        &self.inner.coeffs[0]
    }

    pub fn identity_index(&self) -> usize {
        self.inner.identity
    }

    pub fn is_attested(&self) -> bool {
        self.inner.attested
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.inner.policy
    }

    pub(crate) fn relation(&self) -> &[BigRational] {
        &self.inner.relation
    }

    /// Is embedding `i` real?
    pub fn is_real_embedding(&self, i: usize) -> bool {
        i < self.inner.r1
    }

    /// Index of the complex conjugate embedding.
    pub fn conjugate_index(&self, i: usize) -> usize {
        let (r1, r2) = (self.inner.r1, self.inner.r2);
        if i < r1 {
            i
        } else if i < r1 + r2 {
            i + r2
        } else {
            i - r2
        }
    }

    /// Certified images of `alpha`, in the canonical order: real roots
    /// descending, then upper half-plane roots by decreasing modulus, then
    /// their conjugates. Memoized per precision.
    pub fn embeddings(&self, prec: u32) -> Result<Arc<Vec<CertifiedComplex>>> {
        let prec = prec.max(2);
        if let Some(v) = self.inner.cache.read().get(&prec) {
            return Ok(v.clone());
        }
        let computed = Arc::new(self.compute_embeddings(prec)?);
        let mut cache = self.inner.cache.write();
        Ok(cache.entry(prec).or_insert(computed).clone())
    }

    fn compute_embeddings(&self, prec: u32) -> Result<Vec<CertifiedComplex>> {
        let c = &self.inner.coeffs;
        let Some(base) = &self.inner.base else {
            let r = BigRational::new(-c[1].clone(), c[0].clone());
            return Ok(vec![CertifiedComplex::from_real(CertifiedReal::from_rational(&r, prec))]);
        };
        if prec <= base.prec {
            return Ok(base.boxes.clone());
        }
        let ceiling = self.inner.policy.max_bits.max(prec.saturating_mul(4));
        let mut wp = prec;
        loop {
            if let Some(iso) = roots::refine_isolation(c, base, wp) {
                return Ok(iso.boxes);
            }
            if wp >= ceiling {
                return Err(Error::exhausted(wp, "root refinement"));
            }
            wp = wp.saturating_mul(2).min(ceiling);
        }
    }

    /// The image of `alpha` under the identity embedding.
    pub fn identity_root(&self, prec: u32) -> Result<CertifiedComplex> {
        Ok(self.embeddings(prec)?[self.inner.identity].clone())
    }

    /// Like `"X^3 - 7"`.
    pub fn polynomial_string(&self) -> String {
        format_poly_desc(&self.inner.coeffs, "X")
    }
}

/// Human-readable polynomial, highest degree first.
pub fn format_poly_desc(coeffs: &[BigInt], var: &str) -> String {
    let d = coeffs.len().saturating_sub(1);
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let pow = d - k;
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match pow {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{pow}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Binary form `c_0 X^d + c_1 X^{d-1} Y + ... + c_d Y^d` as text.
pub fn format_form(coeffs: &[BigInt]) -> String {
    let d = coeffs.len().saturating_sub(1);
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let px = d - k;
        let mut mono = String::new();
        match px {
            0 => {}
            1 => mono.push('X'),
            _ => mono.push_str(&format!("X^{px}")),
        }
        match k {
            0 => {}
            1 => mono.push('Y'),
            _ => mono.push_str(&format!("Y^{k}")),
        }
        if mono.is_empty() || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        let q2 = AlgebraicField::from_i64(&[1, 0, -2]).unwrap();
        assert_eq!(q2.signature(), (2, 0));
        let c7 = AlgebraicField::from_i64(&[1, 0, 0, -7]).unwrap();
        assert_eq!(c7.signature(), (1, 1));
        assert_eq!(c7.identity_index(), 0);
        let i = AlgebraicField::from_i64(&[1, 0, 1]).unwrap();
        assert_eq!(i.signature(), (0, 1));
        assert_eq!(i.identity_index(), 0);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(AlgebraicField::from_i64(&[1, 0, -4, 0, 4]).unwrap_err(), Error::NotSquarefree);
        assert_eq!(AlgebraicField::from_i64(&[0, 1, 2]).unwrap_err(), Error::LeadingZero);
        assert!(matches!(
            AlgebraicField::from_i64(&[2, -1, -1]).unwrap_err(),
            Error::ReduciblePolynomial(_)
        ));
        // (x^2 + 1)(x^2 - 3): no rational root.
        assert!(matches!(
            AlgebraicField::from_i64(&[1, 0, -2, 0, -3]).unwrap_err(),
            Error::ReduciblePolynomial(_)
        ));
        // (x^2 - x - 1)(x^2 + x + 3)
        assert!(matches!(
            AlgebraicField::from_i64(&[1, 0, 1, -4, -3]).unwrap_err(),
            Error::ReduciblePolynomial(_)
        ));
        assert!(AlgebraicField::from_i64(&[1, 0, 0, 0, -15]).is_ok());
        assert!(matches!(
            AlgebraicField::from_i64(&[1, 0, 0, 0, 0, -2]).unwrap_err(),
            Error::ReduciblePolynomial(_)
        ));
        let attested = AlgebraicField::with_options(
            &[1, 0, 0, 0, 0, -2].map(BigInt::from),
            FieldOptions {
                attest_irreducible: true,
                ..Default::default()
            },
        );
        assert_eq!(attested.unwrap().signature(), (1, 2));
    }

    #[test]
    fn normalization() {
        let f = AlgebraicField::from_i64(&[-2, 0, 4]).unwrap();
        assert_eq!(f.coeffs(), &[1, 0, -2].map(BigInt::from));
    }

    #[test]
    fn linear_field_is_exact() {
        let f = AlgebraicField::from_i64(&[1, -5]).unwrap();
        let e = f.embeddings(64).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].re.is_exact());
        assert_eq!(e[0].re.to_f64(), 5.0);
    }

    #[test]
    fn embeddings_sqrt2_and_cube_root_7() {
        let q2 = AlgebraicField::from_i64(&[1, 0, -2]).unwrap();
        let e = q2.embeddings(128).unwrap();
        assert!((e[0].re.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!((e[1].re.to_f64() + 2f64.sqrt()).abs() < 1e-15);
        assert!(e[0].re.rad() < &crate::exactnum::Dyadic::pow2(-100));
        let c7 = AlgebraicField::from_i64(&[1, 0, 0, -7]).unwrap();
        let e = c7.embeddings(256).unwrap();
        assert!((e[0].re.to_f64() - 1.912931182772389).abs() < 1e-15);
        assert!((e[1].re.to_f64() + 0.9564655913861946).abs() < 1e-15);
        assert!((e[1].im.to_f64() - 1.656647).abs() < 1e-6);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(e[i].overlaps(&e[j]), i == j);
            }
        }
    }

    #[test]
    fn def_json_roundtrip() {
        let text = r#"{"coeffs": [1, 0, 0, "-7"], "attest_irreducible": false}"#;
        let def = FieldDef::from_json(text).unwrap();
        assert_eq!(def.coeffs, [1, 0, 0, -7].map(BigInt::from).to_vec());
        let back = FieldDef::from_json(&def.to_json()).unwrap();
        assert_eq!(back, def);
        let f = AlgebraicField::from_def(&def).unwrap();
        assert_eq!(f.polynomial_string(), "X^3 - 7");
        assert_eq!(format_form(&[1, -21, -21, -7].map(BigInt::from)), "X^3 - 21X^2Y - 21XY^2 - 7Y^3");
    }
}
