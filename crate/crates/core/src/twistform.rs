//! Binary forms twisted by a unit: `F_e(X, Y) = Y^d f_e(X / Y)` with
//! `f_e = a_0 prod (X - sigma(e alpha))`, and bounded-box enumeration of
//! `F_e(x, y) = k`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::UnitEntry;
use crate::error::{Error, Result};
use crate::exactnum::{CertifiedComplex, CertifiedReal, Dyadic, Verdict};
use crate::numfield::{format_form, AlgebraicField, FieldElement};

#[derive(Clone, Debug)]
pub struct TwistedForm {
    pub field: AlgebraicField,
    pub unit: String,
    /// `e alpha`, a root of `F_e(X, 1)`.
    pub value: FieldElement,
    /// `c_0 .. c_d`, coefficient of `X^(d-i) Y^i` at index `i`.
    pub coeffs: Vec<BigInt>,
}

/// The exact form of `e alpha`, from its scaled characteristic polynomial.
/// Target width of [`TwistedForm::fpq_certified`], as a power of two.
pub const FPQ_WIDTH_LOG2: i64 = -20;

pub fn twist_form(alpha: &FieldElement, eps: &FieldElement, unit: &str) -> Result<TwistedForm> {
    if alpha.field() != eps.field() {
        return Err(Error::FieldMismatch);
    }
    if !eps.is_unit() {
        return Err(Error::NotAUnit);
    }
    let value = eps.mul(alpha)?;
    let coeffs = value.charpoly_scaled()?;
    Ok(TwistedForm {
        field: alpha.field().clone(),
        unit: unit.to_string(),
        value,
        coeffs,
    })
}

impl TwistedForm {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for _ in 0..self.coeffs.len() {
            terms.push(ypow.clone());
            ypow *= y;
        }
        // Horner in x with the y powers attached.
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc * x + c * &terms[i];
        }
        acc
    }

    /// `a_0 q^d prod_sigma |sigma(e alpha) - p/q|`, which must enclose
    /// `|F_e(p, q)|`.
    pub fn fpq_product(&self, p: &BigInt, q: &BigInt, prec: u32) -> Result<CertifiedReal> {
        let d = self.degree();
        let conj = self.value.conjugates(prec)?;
        let pq = CertifiedComplex::from_real(CertifiedReal::from_ratio(p, q, prec));
        let mut prod = CertifiedReal::from_int(self.coeffs[0].clone(), prec)
            * CertifiedReal::from_int(q.pow(d as u32), prec);
        for c in conj.iter() {
            prod = prod * c.sub(&pq).abs();
        }
        Ok(prod)
    }

    /// `fpq_product` refined along the field's precision ladder until the
    /// enclosure is at most `2^-20` wide.
    pub fn fpq_certified(&self, p: &BigInt, q: &BigInt) -> Result<CertifiedReal> {
        let target = Dyadic::pow2(FPQ_WIDTH_LOG2);
        // Room for the magnitude of |F(p, q)|.
        let c_bits = self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0);
        let extra = (c_bits + self.degree() as u64 * p.bits().max(q.bits()) + 8) as u32;
        self.field.policy().run("F(p, q) product", |bits| {
            let f = self.fpq_product(p, q, bits + extra)?;
            Ok((f.width() <= target).then_some(f))
        })
    }

    /// Coefficients of `a_0 prod (X - sigma(e alpha))` from the conjugates,
    /// highest degree first.
    pub fn conjugate_product_coefficients(&self, prec: u32) -> Result<Vec<CertifiedComplex>> {
        let conj = self.value.conjugates(prec)?;
        let mut poly = vec![CertifiedComplex::from_real(CertifiedReal::from_int(
            self.coeffs[0].clone(),
            prec,
        ))];
        for r in conj.iter() {
            let mut next = vec![CertifiedComplex::zero(prec); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] = next[i].add(c);
                next[i + 1] = next[i + 1].sub(&c.mul(r));
            }
            poly = next;
        }
        Ok(poly)
    }

    pub fn to_form_string(&self) -> String {
        format_form(&self.coeffs)
    }
}

impl std::fmt::Display for TwistedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_form_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityCheck {
    pub value: BigInt,
    pub verdict: Verdict,
    /// Set when `F_e(p, q) = 0`, meaning `e alpha = p/q`.
    pub diagnosis: Option<String>,
}

/// `|F_e(p, q)| >= 1`, by exact evaluation.
pub fn nonzero_integrality_check(form: &TwistedForm, p: &BigInt, q: &BigInt) -> IntegralityCheck {
    let value = form.eval(p, q);
    if value.is_zero() {
        return IntegralityCheck {
            value,
            verdict: Verdict::Fails,
            diagnosis: Some(format!("e*alpha = {p}/{q}")),
        };
    }
    IntegralityCheck {
        value,
        verdict: Verdict::Holds,
        diagnosis: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    pub x: i64,
    pub y: i64,
    /// `xy = 0`, outside the finiteness statement.
    pub xy_zero: bool,
}

/// Integer polynomial in one variable, lowest degree first, with an `i128`
/// shadow for fast evaluation.
#[derive(Clone, Debug)]
struct IntPoly {
    big: Vec<BigInt>,
    small: Option<Vec<i128>>,
}

impl IntPoly {
    fn new(mut big: Vec<BigInt>) -> Self {
        while big.len() > 1 && big.last().is_some_and(Zero::is_zero) {
            big.pop();
        }
        let small = big.iter().map(|c| c.to_i128()).collect();
        IntPoly { big, small }
    }

    fn degree(&self) -> usize {
        self.big.len().saturating_sub(1)
    }

    /// Sign of `h(x) - target`.
    fn cmp_at(&self, x: i64, target: &BigInt) -> Ordering {
        if let (Some(s), Some(t)) = (&self.small, target.to_i128()) {
            let xi = x as i128;
            let mut acc: Option<i128> = Some(0);
            for c in s.iter().rev() {
                acc = acc.and_then(|a| a.checked_mul(xi)).and_then(|a| a.checked_add(*c));
            }
            if let Some(v) = acc {
                return v.cmp(&t);
            }
        }
        let xb = BigInt::from(x);
        let v = self.big.iter().rev().fold(BigInt::zero(), |acc, c| acc * &xb + c);
        v.cmp(target)
    }

    /// `h(x + 1) - h(x)`.
    fn forward_difference(&self) -> IntPoly {
        let n = self.big.len();
        let mut out = vec![BigInt::zero(); n.max(1)];
        for (i, a) in self.big.iter().enumerate() {
            // (x + 1)^i - x^i = sum_{j < i} C(i, j) x^j
            let mut binom = BigInt::one();
            for j in 0..i {
                out[j] += a * &binom;
                binom = binom * (i - j) / (j + 1);
            }
        }
        if n > 1 {
            out.pop();
        }
        IntPoly::new(out)
    }
}

/// Positions `t` in `[lo, hi]` with `h(t) = target`, or `t < hi` and
/// `h(t) - target`, `h(t + 1) - target` of strictly opposite signs.
fn crossings(h: &IntPoly, lo: i64, hi: i64, target: &BigInt) -> Vec<i64> {
    let mut out = Vec::new();
    for (u, v) in monotone_pieces(h, lo, hi) {
        crossings_monotone(h, u, v, target, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn crossings_monotone(h: &IntPoly, u: i64, v: i64, target: &BigInt, out: &mut Vec<i64>) {
    let su = h.cmp_at(u, target);
    let collect_zeros = |mut t: i64, out: &mut Vec<i64>| {
        while t <= v && h.cmp_at(t, target) == Ordering::Equal {
            out.push(t);
            t += 1;
        }
    };
    if su == Ordering::Equal {
        collect_zeros(u, out);
        return;
    }
    let sv = h.cmp_at(v, target);
    if sv == su {
        return;
    }
    // First t in (u, v] where the sign leaves su.
    let (mut a, mut b) = (u, v);
    while b - a > 1 {
        let m = a + (b - a) / 2;
        if h.cmp_at(m, target) == su {
            a = m;
        } else {
            b = m;
        }
    }
    if h.cmp_at(b, target) == Ordering::Equal {
        collect_zeros(b, out);
    } else {
        out.push(a);
    }
}

/// Split `[lo, hi]` into runs on which `h` restricted to the integers is
/// monotone, using the sign changes of the forward difference.
fn monotone_pieces(h: &IntPoly, lo: i64, hi: i64) -> Vec<(i64, i64)> {
    if lo >= hi || h.degree() <= 1 {
        return vec![(lo, hi)];
    }
    let diff = h.forward_difference();
    let changes = crossings(&diff, lo, hi - 1, &BigInt::zero());
    let mut cuts = vec![lo, hi];
    for c in changes {
        cuts.push(c);
        cuts.push(c + 1);
    }
    cuts.retain(|&c| (lo..=hi).contains(&c));
    cuts.sort_unstable();
    cuts.dedup();
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `F(x, y)` as a polynomial in `x`, lowest degree first.
fn strip_poly(form: &TwistedForm, y: i64) -> IntPoly {
    let d = form.degree();
    let yb = BigInt::from(y);
    let mut ypow = BigInt::one();
    let mut asc = vec![BigInt::zero(); d + 1];
    for (i, c) in form.coeffs.iter().enumerate() {
        asc[d - i] = c * &ypow;
        ypow *= &yb;
    }
    IntPoly::new(asc)
}

/// Solutions of `F(x, y) = k` for every `k` in `ks`, `|x|, |y| <= bound`,
/// sorted by `(y, x)`.
pub fn enum_solutions_multi(form: &TwistedForm, ks: &[i64], bound: u64) -> Vec<Vec<Solution>> {
    let b = bound.min(i64::MAX as u64 / 4) as i64;
    let strips: Vec<Vec<Vec<Solution>>> = (-b..=b)
        .into_par_iter()
        .map(|y| {
            let h = strip_poly(form, y);
            let pieces = monotone_pieces(&h, -b, b);
            ks.iter()
                .map(|&k| {
                    let target = BigInt::from(k);
                    let mut xs = Vec::new();
                    for &(u, v) in &pieces {
                        crossings_monotone(&h, u, v, &target, &mut xs);
                    }
                    xs.sort_unstable();
                    xs.dedup();
                    xs.into_iter()
                        .filter(|&x| h.cmp_at(x, &target) == Ordering::Equal)
                        .map(|x| Solution {
                            x,
                            y,
                            xy_zero: x == 0 || y == 0,
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut out: Vec<Vec<Solution>> = vec![Vec::new(); ks.len()];
    for strip in strips {
        for (i, mut sols) in strip.into_iter().enumerate() {
            out[i].append(&mut sols);
        }
    }
    out
}

/// All `(x, y)` with `|x|, |y| <= bound` and `F(x, y) = k`.
pub fn enum_solutions(form: &TwistedForm, k: i64, bound: u64) -> Result<Vec<Solution>> {
    if k == 0 {
        return Err(Error::invalid("k must be nonzero"));
    }
    Ok(enum_solutions_multi(form, &[k], bound).pop().unwrap_or_default())
}

/// Solutions of one `(unit, k)` cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyCell {
    pub unit: String,
    pub k: i64,
    pub solutions: Vec<Solution>,
    /// Solutions with `xy != 0`.
    pub count_nonzero: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyReport {
    pub bound: u64,
    pub forms: Vec<(String, String)>,
    pub cells: Vec<FamilyCell>,
}

/// Enumerate `F_e(x, y) = k` for every unit and every `k`.
pub fn family_enum(alpha: &FieldElement, units: &[UnitEntry], ks: &[i64], bound: u64) -> Result<FamilyReport> {
    let mut forms = Vec::new();
    let mut cells = Vec::new();
    let valid: Vec<i64> = ks.iter().copied().filter(|&k| k != 0).collect();
    for u in units {
        let form = twist_form(alpha, &u.element, &u.label)?;
        forms.push((u.label.clone(), form.to_form_string()));
        let mut sols = enum_solutions_multi(&form, &valid, bound).into_iter();
        for &k in ks {
            if k == 0 {
                cells.push(FamilyCell {
                    unit: u.label.clone(),
                    k,
                    solutions: Vec::new(),
                    count_nonzero: 0,
                    error: Some("k must be nonzero".into()),
                });
                continue;
            }
            let s = sols.next().unwrap_or_default();
            cells.push(FamilyCell {
                unit: u.label.clone(),
                k,
                count_nonzero: s.iter().filter(|s| !s.xy_zero).count(),
                solutions: s,
                error: None,
            });
        }
    }
    Ok(FamilyReport { bound, forms, cells })
}

/// `gcd(p, q) = 1` and `q >= 1`.
pub fn is_reduced(p: &BigInt, q: &BigInt) -> bool {
    q.is_positive() && p.gcd(q).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitgrp::cubic_family;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn cube_root(n: i64) -> FieldElement {
        let f = AlgebraicField::from_i64(&[1, 0, 0, -n]).unwrap();
        FieldElement::generator(&f)
    }

    #[test]
    fn form_examples() {
        let w = cube_root(7);
        let one = FieldElement::one(w.field());
        assert_eq!(twist_form(&w, &one, "1").unwrap().coeffs, big(&[1, 0, 0, -7]));
        let c = cubic_family(2).unwrap();
        let f = twist_form(&c.omega(), &c.eps0, "e0").unwrap();
        assert_eq!(f.coeffs, big(&[1, -21, -21, -7]));
        assert_eq!(f.to_form_string(), "X^3 - 21X^2Y - 21XY^2 - 7Y^3");
        let t = cube_root(2);
        let f2 = twist_form(&t, &FieldElement::one(t.field()), "1").unwrap();
        assert_eq!(f2.coeffs, big(&[1, 0, 0, -2]));
    }

    #[test]
    fn eval_and_integrality() {
        let c = cubic_family(2).unwrap();
        let f = twist_form(&c.omega(), &c.eps0, "e0").unwrap();
        assert_eq!(f.eval(&22.into(), &1.into()), BigInt::from(15));
        assert_eq!(f.eval(&0.into(), &0.into()), BigInt::zero());
        let prod = f.fpq_product(&22.into(), &1.into(), 128).unwrap();
        assert!(prod.contains_int(&15.into()));
        let t = cube_root(2);
        let f2 = twist_form(&t, &FieldElement::one(t.field()), "1").unwrap();
        assert_eq!(f2.eval(&1.into(), &1.into()), BigInt::from(-1));
        let w = cube_root(7);
        let f7 = twist_form(&w, &FieldElement::one(w.field()), "1").unwrap();
        assert_eq!(nonzero_integrality_check(&f7, &2.into(), &1.into()).verdict, Verdict::Holds);
        assert_eq!(nonzero_integrality_check(&f, &22.into(), &1.into()).value, BigInt::from(15));
        let q = AlgebraicField::from_i64(&[1, -5]).unwrap();
        let five = FieldElement::generator(&q);
        let lin = twist_form(&five, &FieldElement::one(&q), "1").unwrap();
        assert_eq!(lin.coeffs, big(&[1, -5]));
        let chk = nonzero_integrality_check(&lin, &5.into(), &1.into());
        assert_eq!(chk.verdict, Verdict::Fails);
        assert!(chk.diagnosis.is_some());
    }

    #[test]
    fn enumeration_examples() {
        let t = cube_root(2);
        let f = twist_form(&t, &FieldElement::one(t.field()), "1").unwrap();
        let m1 = enum_solutions(&f, -1, 1000).unwrap();
        assert_eq!(
            m1,
            vec![
                Solution { x: -1, y: 0, xy_zero: true },
                Solution { x: 1, y: 1, xy_zero: false },
            ]
        );
        let p1 = enum_solutions(&f, 1, 1000).unwrap();
        assert_eq!(
            p1,
            vec![
                Solution { x: -1, y: -1, xy_zero: false },
                Solution { x: 1, y: 0, xy_zero: true },
            ]
        );
        assert!(enum_solutions(&f, 5, 0).unwrap().is_empty());
        assert!(enum_solutions(&f, 0, 10).is_err());
    }

    #[test]
    fn enumeration_matches_double_loop() {
        let c = cubic_family(2).unwrap();
        let f = twist_form(&c.omega(), &c.eps0, "e0").unwrap();
        let bound = 60i64;
        for k in [-15i64, -7, 1, 15, 22] {
            let got = enum_solutions(&f, k, bound as u64).unwrap();
            let mut naive = Vec::new();
            for y in -bound..=bound {
                for x in -bound..=bound {
                    if f.eval(&x.into(), &y.into()) == BigInt::from(k) {
                        naive.push(Solution { x, y, xy_zero: x == 0 || y == 0 });
                    }
                }
            }
            assert_eq!(got, naive, "k = {k}");
        }
    }

    #[test]
    fn conjugate_path_matches() {
        let c = cubic_family(3).unwrap();
        let f = twist_form(&c.omega(), &c.eps0.pow_u(2), "e0^2").unwrap();
        let approx = f.conjugate_product_coefficients(256).unwrap();
        for (a, e) in approx.iter().zip(&f.coeffs) {
            assert!(a.re.contains_int(e) && a.im.contains_zero());
            assert_eq!(a.re.unique_integer().as_ref(), Some(e));
        }
    }

    #[test]
    fn family_report() {
        let c = cubic_family(2).unwrap();
        let units: Vec<UnitEntry> = (0..=2)
            .map(|n| UnitEntry {
                label: format!("n={n}"),
                element: c.eps0.pow_u(n),
            })
            .collect();
        let rep = family_enum(&c.omega(), &units, &[-1, 0, 1, 15], 100).unwrap();
        assert_eq!(rep.cells.len(), 12);
        assert!(rep.cells[1].error.is_some());
        let cell = rep.cells.iter().find(|c| c.unit == "n=1" && c.k == 15).unwrap();
        assert!(cell.solutions.contains(&Solution { x: 22, y: 1, xy_zero: false }));
        assert!(family_enum(&c.omega(), &[], &[1], 10).unwrap().cells.is_empty());
    }
}
