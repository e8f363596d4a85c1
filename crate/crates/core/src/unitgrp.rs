//! Units: membership, logarithmic embedding, exponent recovery, the norm
//! equivalence constant and the two explicit unit families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::approx::{continued_fraction, ConvergentList};
use crate::error::{Error, Result};
use crate::exactnum::{certify, CertifiedReal, Dyadic, Relation, Verdict};
use crate::numfield::{AlgebraicField, FieldElement, FieldOptions};

/// Algebraic integer of norm `+-1`.
pub fn is_unit(x: &FieldElement) -> bool {
    x.is_unit()
}

/// `(log |sigma_j x|)_j` over the real embeddings and one embedding from
/// each complex pair.
pub fn log_embedding(x: &FieldElement, prec: u32) -> Result<Vec<CertifiedReal>> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (r1, r2) = x.field().signature();
    let policy = x.field().policy();
    let ladder: Vec<u32> = std::iter::successors(Some(prec.max(16)), |b| Some(b.saturating_mul(2)))
        .take_while(|&b| b <= policy.max_bits.max(prec))
        .collect();
    let mut last = None;
    for bits in ladder {
        let conj = x.conjugates(bits)?;
        let logs: Result<Vec<CertifiedReal>> = conj[..r1 + r2].iter().map(|c| c.log_abs()).collect();
        match logs {
            Ok(v) => return Ok(v),
            Err(e) => last = Some(e),
        }
    }
    Err(match last {
        Some(Error::Domain(m)) => Error::exhausted(policy.max_bits.max(prec), format!("log embedding: {m}")),
        Some(e) => e,
        None => Error::exhausted(prec, "log embedding"),
    })
}

/// `x_1 + ... + x_{r1} + 2 x_{r1+1} + ... + 2 x_{r1+r2}`.
pub fn hyperplane_sum(field: &AlgebraicField, lambda: &[CertifiedReal]) -> CertifiedReal {
    let (r1, _) = field.signature();
    let p = lambda.first().map_or(64, |x| x.prec());
    let mut s = CertifiedReal::zero(p);
    for (j, v) in lambda.iter().enumerate() {
        s = if j < r1 { s + v } else { s + v.mul_pow2(1) };
    }
    s
}

/// Ball Gauss-Jordan elimination: `(det, inverse)`, or `None` if a pivot
/// cannot be certified nonzero.
fn ball_det_inverse(m: &[Vec<CertifiedReal>]) -> Option<(CertifiedReal, Vec<Vec<CertifiedReal>>)> {
    let n = m.len();
    let p = m.iter().flatten().map(|x| x.prec()).max().unwrap_or(64);
    let mut a: Vec<Vec<CertifiedReal>> = m.to_vec();
    let mut inv: Vec<Vec<CertifiedReal>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { CertifiedReal::one(p) } else { CertifiedReal::zero(p) })
                .collect()
        })
        .collect();
    let mut det = CertifiedReal::one(p);
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !a[r][col].contains_zero())
            .max_by(|&x, &y| a[x][col].mid().abs().cmp(&a[y][col].mid().abs()))?;
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = det.neg_ball();
        }
        let pv = a[col][col].clone();
        det = det * &pv;
        let r = pv.recip().ok()?;
        for c in 0..n {
            a[col][c] = &a[col][c] * &r;
            inv[col][c] = &inv[col][c] * &r;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col].clone();
            if f.is_exact() && f.mid().is_zero() {
                continue;
            }
            for c in 0..n {
                a[row][c] = &a[row][c] - &(&f * &a[col][c]);
                inv[row][c] = &inv[row][c] - &(&f * &inv[col][c]);
            }
        }
    }
    Some((det, inv))
}

fn weight(field: &AlgebraicField, row: usize) -> i64 {
    if field.is_real_embedding(row) {
        1
    } else {
        2
    }
}

/// Independent units together with the rows used for Cramer systems.
#[derive(Clone, Debug)]
pub struct UnitBasis {
    field: AlgebraicField,
    units: Vec<FieldElement>,
    rows: Vec<usize>,
}

/// Exponents `b` with `x = zeta * prod eps_i^{b_i}` and `zeta` a root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector {
    pub exponents: Vec<i64>,
    pub torsion_ok: bool,
    pub torsion: FieldElement,
    pub torsion_order: u32,
}

fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Orders `m` of roots of unity that can lie in a degree-`d` field.
pub fn possible_torsion_orders(d: usize) -> Vec<u32> {
    let d = d as u32;
    (1..=2 * d * d + 2).filter(|&m| d % euler_phi(m) == 0).collect()
}

/// Smallest `m` with `x^m = 1`, tested exactly.
pub fn root_of_unity_order(x: &FieldElement) -> Option<u32> {
    if x.is_zero() || !x.is_algebraic_integer() || !x.norm().abs().is_one() {
        return None;
    }
    possible_torsion_orders(x.field().degree())
        .into_iter()
        .find(|&m| x.pow_u(m as u64).is_one())
}

impl UnitBasis {
    /// `units` must be `r1 + r2 - 1` multiplicatively independent units.
    pub fn new(field: &AlgebraicField, units: Vec<FieldElement>) -> Result<Self> {
        let rank = field.unit_rank();
        if units.len() != rank {
            return Err(Error::invalid(format!(
                "expected {rank} units for a field of unit rank {rank}, got {}",
                units.len()
            )));
        }
        for u in &units {
            if u.field() != field {
                return Err(Error::FieldMismatch);
            }
            if !u.is_unit() {
                return Err(Error::NotAUnit);
            }
        }
        let mut basis = UnitBasis {
            field: field.clone(),
            units,
            rows: Vec::new(),
        };
        if rank == 0 {
            return Ok(basis);
        }
        basis.rows = basis.select_rows().map_err(|e| match e {
            Error::PrecisionExhausted { .. } => Error::DependentUnits,
            e => e,
        })?;
        Ok(basis)
    }

    pub fn field(&self) -> &AlgebraicField {
        &self.field
    }

    pub fn units(&self) -> &[FieldElement] {
        &self.units
    }

    pub fn rank(&self) -> usize {
        self.units.len()
    }

    /// Embedding rows of the selected square system.
    pub fn selected_rows(&self) -> &[usize] {
        &self.rows
    }

    /// Rows are embeddings, columns are units.
    pub fn log_matrix(&self, prec: u32) -> Result<Vec<Vec<CertifiedReal>>> {
        let cols: Vec<Vec<CertifiedReal>> = self
            .units
            .iter()
            .map(|u| log_embedding(u, prec))
            .collect::<Result<_>>()?;
        let (r1, r2) = self.field.signature();
        Ok((0..r1 + r2)
            .map(|j| cols.iter().map(|c| c[j].clone()).collect())
            .collect())
    }

    fn submatrix(m: &[Vec<CertifiedReal>], rows: &[usize]) -> Vec<Vec<CertifiedReal>> {
        rows.iter().map(|&j| m[j].clone()).collect()
    }

    /// Drop the one row whose removal leaves the largest certified `|det|`.
    fn select_rows(&self) -> Result<Vec<usize>> {
        let (r1, r2) = self.field.signature();
        let n = r1 + r2;
        self.field.policy().run("unit log matrix row selection", |bits| {
            let m = self.log_matrix(bits)?;
            let mut best: Option<(Dyadic, Vec<usize>)> = None;
            for drop in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&j| j != drop).collect();
                if let Some((det, _)) = ball_det_inverse(&Self::submatrix(&m, &rows)) {
                    let lower = det.abs().lo();
                    if lower.is_positive() && best.as_ref().map_or(true, |(b, _)| &lower > b) {
                        best = Some((lower, rows));
                    }
                }
            }
            Ok(best.map(|(_, rows)| rows))
        })
    }

    /// Certified determinant of the selected system.
    pub fn regulator_minor(&self, prec: u32) -> Result<CertifiedReal> {
        if self.rank() == 0 {
            return Err(Error::invalid("unit rank is zero"));
        }
        let m = self.log_matrix(prec)?;
        ball_det_inverse(&Self::submatrix(&m, &self.rows))
            .map(|(d, _)| d)
            .ok_or(Error::SingularSystem)
    }

    /// `x = zeta * prod eps_i^{b_i}` with exact integer exponents.
    pub fn recover_exponents(&self, x: &FieldElement) -> Result<ExponentVector> {
        if x.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if !x.is_unit() {
            return Err(Error::NotAUnit);
        }
        let exps: Vec<i64> = if self.rank() == 0 {
            Vec::new()
        } else {
            self.solve_exponents(x)?
        };
        let residual = self.residual(x, &exps)?;
        let order = root_of_unity_order(&residual).ok_or(Error::TorsionCheckFailed)?;
        Ok(ExponentVector {
            exponents: exps,
            torsion_ok: true,
            torsion: residual,
            torsion_order: order,
        })
    }

    fn residual(&self, x: &FieldElement, exps: &[i64]) -> Result<FieldElement> {
        let mut r = x.clone();
        for (u, &b) in self.units.iter().zip(exps) {
            if b != 0 {
                r = r.mul(&u.pow(-b)?)?;
            }
        }
        Ok(r)
    }

    fn solve_exponents(&self, x: &FieldElement) -> Result<Vec<i64>> {
        self.field.policy().run("exponent recovery", |bits| {
            let m = self.log_matrix(bits)?;
            let lam = log_embedding(x, bits)?;
            let Some((_, inv)) = ball_det_inverse(&Self::submatrix(&m, &self.rows)) else {
                return Ok(None);
            };
            let mut out = Vec::with_capacity(self.rank());
            let mut all_narrow = true;
            let mut undecided = false;
            for row in &inv {
                let mut b = CertifiedReal::zero(bits);
                for (k, &j) in self.rows.iter().enumerate() {
                    b = b + &row[k] * &lam[j];
                }
                if b.width() >= Dyadic::pow2(-1) {
                    all_narrow = false;
                }
                match b.unique_integer() {
                    Some(n) if b.width() < Dyadic::one() => {
                        out.push(n.to_i64().ok_or_else(|| Error::invalid("exponent out of range"))?)
                    }
                    _ => undecided = true,
                }
            }
            if !undecided {
                return Ok(Some(out));
            }
            if all_narrow {
                // Narrow balls without an integer: x is outside the group.
                return Err(Error::TorsionCheckFailed);
            }
            Ok(None)
        })
    }

    /// `zeta * prod eps_i^{b_i}`.
    pub fn unit_from_exponents(&self, exps: &[i64], zeta: &FieldElement) -> Result<FieldElement> {
        if exps.len() != self.rank() {
            return Err(Error::invalid("exponent vector length differs from the rank"));
        }
        let mut r = zeta.clone();
        for (u, &b) in self.units.iter().zip(exps) {
            r = r.mul(&u.pow(b)?)?;
        }
        Ok(r)
    }

/// `kappa8_sharp` is attained by some units (cubic `e0^-n`), where a
    /// certified `<=` can never be decided. `kappa8` adds this relative margin.
    pub const KAPPA8_MARGIN_LOG2: i64 = -32;

    /// `(1 + 2^-32) * kappa8_sharp`, a valid constant with strict slack for
    /// every unit of infinite order.
    pub fn kappa8(&self, prec: u32) -> Result<CertifiedReal> {
        let sharp = self.kappa8_sharp(prec)?;
        let bits = sharp.prec();
        let margin = CertifiedReal::one(bits) + CertifiedReal::one(bits).mul_pow2(Self::KAPPA8_MARGIN_LOG2);
        Ok(sharp * margin)
    }

    /// `c_S * ||M_S^{-1}||_inf`, where `c_S` bounds `|log|sigma_j e||` by
    /// `log house(e)` on the selected rows: `max(1, (d - w_j) / w_j)`.
    pub fn kappa8_sharp(&self, prec: u32) -> Result<CertifiedReal> {
        if self.rank() == 0 {
            return Err(Error::invalid("kappa8 is undefined for unit rank 0"));
        }
        let d = self.field.degree() as i64;
        let c = self
            .rows
            .iter()
            .map(|&j| {
                let w = weight(&self.field, j);
                BigRational::new(BigInt::from((d - w).max(w)), BigInt::from(w))
            })
            .max()
            .expect("rank > 0");
        let bits = prec.max(64);
        let m = self.log_matrix(bits)?;
        let (_, inv) = ball_det_inverse(&Self::submatrix(&m, &self.rows)).ok_or(Error::SingularSystem)?;
        let mut norm: Option<CertifiedReal> = None;
        for row in &inv {
            let mut s = CertifiedReal::zero(bits);
            for v in row {
                s = s + v.abs();
            }
            norm = Some(match norm {
                None => s,
                Some(n) => n.max(&s),
            });
        }
        Ok(norm.expect("rank > 0") * CertifiedReal::from_rational(&c, bits))
    }

    /// Certify `max |b_i| <= kappa8 * log house(e)`.
    pub fn lemma_check(&self, e: &FieldElement, exps: &ExponentVector, prec: u32) -> Result<Verdict> {
        let maxb = exps.exponents.iter().map(|b| b.unsigned_abs()).max().unwrap_or(0);
        if maxb == 0 {
            // house(e) >= 1 for any nonzero algebraic integer.
            return Ok(Verdict::Holds);
        }
        let k8 = self.kappa8(prec)?;
        let lh = e.house(prec)?.log()?;
        let lhs = CertifiedReal::from_int(maxb, prec);
        Ok(certify(&lhs, Relation::Le, &(k8 * lh)))
    }
}

/// `X^3 - (D^3 - 1)` and `eps0 = D^2 + D w + w^2 = 1/(D - w)`.
#[derive(Clone, Debug)]
pub struct CubicFamily {
    pub d_param: i64,
    pub field: AlgebraicField,
    pub eps0: FieldElement,
}

/// `X^4 - (D^4 - 1)`, `eps1 = D^2 + w^2`, `eps2 = D^3 + D^2 w + D w^2 + w^3`.
#[derive(Clone, Debug)]
pub struct BiquadraticFamily {
    pub d_param: i64,
    pub field: AlgebraicField,
    pub eps1: FieldElement,
    pub eps2: FieldElement,
}

fn check(v: Verdict, what: &str) -> Result<()> {
    match v {
        Verdict::Holds => Ok(()),
        Verdict::Fails => Err(Error::ConstraintViolation(what.to_string())),
        Verdict::Undecided => Err(Error::exhausted(64, what.to_string())),
    }
}

pub fn cubic_family(d: i64) -> Result<CubicFamily> {
    cubic_family_with(d, FieldOptions::default())
}

/// As [`cubic_family`], with explicit field options (precision ceiling).
pub fn cubic_family_with(d: i64, opts: FieldOptions) -> Result<CubicFamily> {
    if d <= 1 {
        return Err(Error::invalid("D must be greater than 1"));
    }
    let n = BigInt::from(d).pow(3u32) - BigInt::one();
    let field = AlgebraicField::with_options(&[BigInt::one(), BigInt::zero(), BigInt::zero(), -n], opts)?;
    let eps0 = FieldElement::from_i64_coords(&field, &[d * d, d, 1])?;
    if !eps0.is_unit() {
        return Err(Error::ConstraintViolation("eps0 is not a unit".into()));
    }
    let prec = 128;
    let one = CertifiedReal::one(prec);
    let conj = eps0.conjugates(prec)?;
    check(certify(&conj[0].re, Relation::Gt, &one), "eps0 > 1")?;
    for c in &conj[1..] {
        check(certify(&c.abs(), Relation::Lt, &one), "|conjugate of eps0| < 1")?;
    }
    Ok(CubicFamily {
        d_param: d,
        field,
        eps0,
    })
}

pub fn biquadratic_family(d: i64) -> Result<BiquadraticFamily> {
    biquadratic_family_with(d, FieldOptions::default())
}

pub fn biquadratic_family_with(d: i64, opts: FieldOptions) -> Result<BiquadraticFamily> {
    if d <= 1 {
        return Err(Error::invalid("D must be greater than 1"));
    }
    let n = BigInt::from(d).pow(4u32) - BigInt::one();
    let z = BigInt::zero();
    let field = AlgebraicField::with_options(&[BigInt::one(), z.clone(), z.clone(), z, -n], opts)?;
    let eps1 = FieldElement::from_i64_coords(&field, &[d * d, 0, 1])?;
    let eps2 = FieldElement::from_i64_coords(&field, &[d * d * d, d * d, d, 1])?;
    for (u, name) in [(&eps1, "eps1"), (&eps2, "eps2")] {
        if !u.is_unit() {
            return Err(Error::ConstraintViolation(format!("{name} is not a unit")));
        }
        let v = u.identity_real(128)?;
        check(certify(&v, Relation::Gt, &CertifiedReal::one(128)), &format!("{name} > 1"))?;
    }
    // Independence: the basis constructor certifies a nonzero 2x2 minor.
    UnitBasis::new(&field, vec![eps1.clone(), eps2.clone()])?;
    Ok(BiquadraticFamily {
        d_param: d,
        field,
        eps1,
        eps2,
    })
}

impl CubicFamily {
    pub fn basis(&self) -> Result<UnitBasis> {
        UnitBasis::new(&self.field, vec![self.eps0.clone()])
    }

    /// The generator `w`.
    pub fn omega(&self) -> FieldElement {
        FieldElement::generator(&self.field)
    }
}

impl BiquadraticFamily {
    pub fn basis(&self) -> Result<UnitBasis> {
        UnitBasis::new(&self.field, vec![self.eps1.clone(), self.eps2.clone()])
    }

    pub fn omega(&self) -> FieldElement {
        FieldElement::generator(&self.field)
    }
}

/// One accepted member `eps1^a eps2^{-b}` of the bounded sequence.
#[derive(Clone, Debug)]
pub struct SequenceTerm {
    pub a: BigInt,
    pub b: BigInt,
    pub element: FieldElement,
    /// Identity-embedding value, certified in `[1/2, 2]`.
    pub value: CertifiedReal,
    /// `a log eps1 - b log eps2`.
    pub log_value: CertifiedReal,
}

/// A convergent whose unit left the window, or could not be placed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedTerm {
    pub a: String,
    pub b: String,
    pub verdict: Verdict,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct BoundedSequence {
    pub theta: CertifiedReal,
    pub convergents: ConvergentList,
    pub accepted: Vec<SequenceTerm>,
    pub skipped: Vec<SkippedTerm>,
}

/// Units `eps1^{a_n} eps2^{-b_n}` in `[1/2, 2]`, where `a_n / b_n` runs over
/// the convergents of `log eps2 / log eps1`.
pub fn bounded_unit_sequence(
    eps1: &FieldElement,
    eps2: &FieldElement,
    count: usize,
) -> Result<BoundedSequence> {
    let field = eps1.field().clone();
    if eps2.field() != &field {
        return Err(Error::FieldMismatch);
    }
    let policy = field.policy();
    let logs = |bits: u32| -> Result<(CertifiedReal, CertifiedReal)> {
        let l1 = eps1.identity_real(bits)?.log()?;
        let l2 = eps2.identity_real(bits)?.log()?;
        Ok((l1, l2))
    };
    // eps2 > eps1 > 1 and independence.
    let ordered = policy.run("bounded sequence preconditions", |bits| {
        let (l1, l2) = logs(bits)?;
        let zero = CertifiedReal::zero(bits);
        let v = certify(&zero, Relation::Lt, &l1).and(certify(&l1, Relation::Lt, &l2));
        Ok(v.is_decided().then_some(v))
    })?;
    if ordered != Verdict::Holds {
        return Err(Error::invalid("bounded sequence needs eps2 > eps1 > 1"));
    }
    independence_check(eps1, eps2)?;
    let theta_at = |bits: u32| -> Result<CertifiedReal> {
        let (l1, l2) = logs(bits + 32)?;
        Ok(l2.div_ball(&l1)?.with_prec(bits))
    };
    let theta = theta_at(policy.max_bits.min(256))?;
    let mut accepted = Vec::new();
    let mut skipped = Vec::new();
    let mut wanted = count;
    let mut convergents = ConvergentList::default();
    if count == 0 {
        return Ok(BoundedSequence {
            theta,
            convergents,
            accepted,
            skipped,
        });
    }
    // Ask for more convergents until enough land in the window.
    let mut n_conv = count * 3 + 4;
    loop {
        convergents = continued_fraction(&theta_at, n_conv, &policy)?;
        accepted.clear();
        skipped.clear();
        for c in &convergents.convergents {
            let (a, b) = (c.numer().clone(), c.denom().clone());
            let placed = policy.run("bounded sequence window", |bits| {
                let extra = (a.bits() + b.bits()) as u32;
                let (l1, l2) = logs(bits + extra)?;
                let lv = (l1.mul_int(&a) - l2.mul_int(&b)).with_prec(bits);
                let v = lv.exp()?;
                let lo = CertifiedReal::from_ratio(&BigInt::one(), &BigInt::from(2), bits);
                let hi = CertifiedReal::from_int(2, bits);
                let verdict = certify(&lo, Relation::Le, &v).and(certify(&v, Relation::Le, &hi));
                Ok(verdict.is_decided().then_some((verdict, v, lv)))
            });
            match placed {
                Ok((Verdict::Holds, value, log_value)) => {
                    let element = eps1.pow_u(a.to_u64().unwrap_or(0)).mul(
                        &eps2.inverse()?.pow_u(b.to_u64().unwrap_or(0)),
                    )?;
                    accepted.push(SequenceTerm {
                        a: a.clone(),
                        b: b.clone(),
                        element,
                        value,
                        log_value,
                    });
                    if accepted.len() == wanted {
                        break;
                    }
                }
                Ok((verdict, value, _)) => skipped.push(SkippedTerm {
                    a: a.to_string(),
                    b: b.to_string(),
                    verdict,
                    note: format!("value {value:.8} outside [1/2, 2]"),
                }),
                Err(Error::PrecisionExhausted { .. }) => skipped.push(SkippedTerm {
                    a: a.to_string(),
                    b: b.to_string(),
                    verdict: Verdict::Undecided,
                    note: "window membership undecided at the precision ceiling".into(),
                }),
                Err(e) => return Err(e),
            }
        }
        if accepted.len() >= wanted || convergents.terminated || n_conv > 400 {
            break;
        }
        n_conv *= 2;
    }
    wanted = wanted.min(accepted.len());
    accepted.truncate(wanted);
    Ok(BoundedSequence {
        theta,
        convergents,
        accepted,
        skipped,
    })
}

/// Certified nonzero 2x2 minor of the log matrix of `(eps1, eps2)`.
pub fn independence_check(eps1: &FieldElement, eps2: &FieldElement) -> Result<()> {
    let field = eps1.field();
    let (r1, r2) = field.signature();
    let n = r1 + r2;
    if n < 3 {
        return Err(Error::DependentUnits);
    }
    let found = field.policy().run("independence", |bits| {
        let l1 = log_embedding(eps1, bits)?;
        let l2 = log_embedding(eps2, bits)?;
        for i in 0..n {
            for j in (i + 1)..n {
                let det = &l1[i] * &l2[j] - &l1[j] * &l2[i];
                if !det.contains_zero() {
                    return Ok(Some(()));
                }
            }
        }
        Ok(None)
    });
    found.map_err(|e| match e {
        Error::PrecisionExhausted { .. } => Error::DependentUnits,
        e => e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_orders() {
        assert_eq!(possible_torsion_orders(1), vec![1, 2]);
        assert_eq!(possible_torsion_orders(2), vec![1, 2, 3, 4, 6]);
        assert_eq!(possible_torsion_orders(4), vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
    }

    #[test]
    fn membership_examples() {
        let fam = cubic_family(2).unwrap();
        assert!(is_unit(&fam.eps0));
        assert!(!is_unit(&fam.omega()));
        assert!(is_unit(&FieldElement::one(&fam.field)));
    }

    #[test]
    fn log_embedding_examples() {
        let fam = cubic_family(2).unwrap();
        let l = log_embedding(&fam.eps0, 128).unwrap();
        assert!((l[0].to_f64() - 11.48516807556775f64.ln()).abs() < 1e-13);
        assert!((l[1].to_f64() - 0.2950742571415048f64.ln()).abs() < 1e-13);
        assert!(hyperplane_sum(&fam.field, &l).contains(&Dyadic::zero()));
        let one = log_embedding(&FieldElement::one(&fam.field), 64).unwrap();
        assert!(one.iter().all(|x| x.is_exact() && x.mid().is_zero()));
        let q2 = AlgebraicField::from_i64(&[1, 0, -2]).unwrap();
        let two = log_embedding(&FieldElement::from_int(&q2, 2), 64).unwrap();
        assert!(two.iter().all(|x| (x.to_f64() - 2f64.ln()).abs() < 1e-15));
        assert_eq!(log_embedding(&FieldElement::zero(&q2), 64).unwrap_err(), Error::ZeroElement);
    }

    #[test]
    fn family_identities() {
        for d in 2..=20 {
            let c = cubic_family(d).unwrap();
            let dm = FieldElement::from_int(&c.field, d).sub(&c.omega()).unwrap();
            assert!(dm.mul(&c.eps0).unwrap().is_one());
        }
        for d in [2, 3, 5] {
            let b = biquadratic_family(d).unwrap();
            let w = b.omega();
            let dm = FieldElement::from_int(&b.field, d).sub(&w).unwrap();
            assert!(dm.mul(&b.eps2).unwrap().is_one());
            let d2 = FieldElement::from_int(&b.field, d * d).sub(&w.pow_u(2)).unwrap();
            assert!(d2.mul(&b.eps1).unwrap().is_one());
        }
    }

    #[test]
    fn recovery_examples() {
        let b = biquadratic_family(2).unwrap();
        let basis = b.basis().unwrap();
        let x = b.eps1.pow(5).unwrap().mul(&b.eps2.pow(-3).unwrap()).unwrap();
        let ev = basis.recover_exponents(&x).unwrap();
        assert_eq!(ev.exponents, vec![5, -3]);
        assert!(ev.torsion.is_one());
        let one = basis.recover_exponents(&FieldElement::one(&b.field)).unwrap();
        assert_eq!(one.exponents, vec![0, 0]);

        let c = cubic_family(2).unwrap();
        let cb = c.basis().unwrap();
        let y = c.eps0.pow_u(2).neg();
        let ev = cb.recover_exponents(&y).unwrap();
        assert_eq!(ev.exponents, vec![2]);
        assert_eq!(ev.torsion, FieldElement::from_int(&c.field, -1));
        assert_eq!(ev.torsion_order, 2);
        assert_eq!(cb.recover_exponents(&c.omega()).unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn kappa8_cubic() {
        let c = cubic_family(2).unwrap();
        let k = c.basis().unwrap().kappa8_sharp(128).unwrap();
        let expected = 2.0 / 11.48516807556775f64.ln();
        assert!((k.to_f64() - expected).abs() < 1e-12, "{}", k.to_f64());
        let k = c.basis().unwrap().kappa8(128).unwrap();
        assert!((k.to_f64() / expected - 1.0 - 2f64.powi(-32)).abs() < 1e-13);
        let basis = c.basis().unwrap();
        for n in [1i64, 4, 9] {
            let e = c.eps0.pow(n).unwrap();
            let ev = basis.recover_exponents(&e).unwrap();
            assert_eq!(basis.lemma_check(&e, &ev, 128).unwrap(), Verdict::Holds);
        }
        // Negative powers attain the sharp constant: house(e0^-n) = e0^(n/2).
        for n in [-7i64, -1] {
            let e = c.eps0.pow(n).unwrap();
            let ev = basis.recover_exponents(&e).unwrap();
            assert_eq!(basis.lemma_check(&e, &ev, 128).unwrap(), Verdict::Holds);
            let lh = e.house(128).unwrap().log().unwrap() * basis.kappa8_sharp(128).unwrap();
            assert!(lh.contains_int(&BigInt::from(n.abs())));
        }
        let imag = AlgebraicField::from_i64(&[1, 0, 1]).unwrap();
        let b0 = UnitBasis::new(&imag, vec![]).unwrap();
        assert!(b0.kappa8(64).is_err());
        let i = FieldElement::generator(&imag);
        assert_eq!(b0.recover_exponents(&i).unwrap().torsion_order, 4);
    }

    #[test]
    fn bounded_sequence_d2() {
        let b = biquadratic_family(2).unwrap();
        let seq = bounded_unit_sequence(&b.eps1, &b.eps2, 3).unwrap();
        let pairs: Vec<(i64, i64)> = seq
            .accepted
            .iter()
            .map(|t| (t.a.to_i64().unwrap(), t.b.to_i64().unwrap()))
            .collect();
        assert_eq!(pairs, vec![(2, 1), (5, 3), (432, 259)]);
        assert!((seq.theta.to_f64() - 1.6679436).abs() < 1e-6);
        assert_eq!(seq.skipped[0].a, "1");
        let t53 = &seq.accepted[1];
        assert!((t53.value.to_f64() - 0.9921265379).abs() < 1e-9);
        assert!(bounded_unit_sequence(&b.eps1, &b.eps2, 0).unwrap().accepted.is_empty());
    }
}
