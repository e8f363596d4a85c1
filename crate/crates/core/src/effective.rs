//! Effective lower bounds for `|e alpha - p/q|` from a linear form in
//! logarithms. The constants are configuration, never theorem-grade unless
//! the caller supplies proven values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    certify, pi, CertifiedComplex, CertifiedReal, Dyadic, Relation, Verdict,
};
use crate::numfield::FieldElement;
use crate::unitgrp::UnitBasis;

/// Outcome of reducing `|e alpha - p/q|` to a logarithm near zero.
#[derive(Clone, Debug)]
pub enum LogSetup {
    /// `|gamma - 1| >= 1/2`, so `|e alpha - p/q| >= |p| / (2q)` outright.
    Skip {
        gamma: CertifiedComplex,
        distance: CertifiedReal,
        trivial_bound: CertifiedReal,
    },
    Principal {
        gamma: CertifiedComplex,
        /// `|gamma - 1|`.
        distance: CertifiedReal,
        lambda0: CertifiedComplex,
        /// `0 < |lambda0| < 2 |gamma - 1|`.
        bracket: Verdict,
    },
}

fn gamma_element(alpha: &FieldElement, eps: &FieldElement, p: &BigInt, q: &BigInt) -> Result<FieldElement> {
    if p.is_zero() {
        return Err(Error::ZeroP);
    }
    if !q.is_positive() {
        return Err(Error::invalid("q must be positive"));
    }
    let g = eps.mul(alpha)?.scale(&BigRational::new(q.clone(), p.clone()));
    if g.is_one() {
        return Err(Error::ExactEquality);
    }
    Ok(g)
}

/// `gamma = e alpha q / p` and, when `|gamma - 1| < 1/2`, its principal logarithm.
pub fn principal_log_setup(alpha: &FieldElement, eps: &FieldElement, p: &BigInt, q: &BigInt) -> Result<LogSetup> {
    let g = gamma_element(alpha, eps, p, q)?;
    let policy = alpha.field().policy();
    policy.run("principal logarithm setup", |bits| {
        let gamma = g.identity_value(bits)?;
        let one = CertifiedReal::one(bits);
        let half = CertifiedReal::from_ratio(&1.into(), &2.into(), bits);
        let distance = gamma.add_real(&one.neg_ball()).abs();
        match certify(&distance, Relation::Lt, &half) {
            Verdict::Fails => {
                let trivial_bound = CertifiedReal::from_ratio(&p.abs(), &(q * 2), bits);
                Ok(Some(LogSetup::Skip {
                    gamma,
                    distance,
                    trivial_bound,
                }))
            }
            Verdict::Undecided => Ok(None),
            Verdict::Holds => {
                let lambda0 = gamma.log()?;
                let m = lambda0.abs();
                let zero = CertifiedReal::zero(bits);
                let bracket = certify(&zero, Relation::Lt, &m).and(certify(&m, Relation::Lt, &distance.mul_pow2(1)));
                if !bracket.is_decided() {
                    return Ok(None);
                }
                Ok(Some(LogSetup::Principal {
                    gamma,
                    distance,
                    lambda0,
                    bracket,
                }))
            }
        }
    })
}

/// Data of the linear-form lower bound, with `log A_j` and `log B` given
/// directly so that large values stay exact.
#[derive(Clone, Debug)]
pub struct BakerInput {
    pub lambdas: Vec<CertifiedComplex>,
    /// `h(exp(lambda_j))`.
    pub heights: Vec<CertifiedReal>,
    pub b: Vec<BigInt>,
    pub log_a: Vec<CertifiedReal>,
    pub log_b: CertifiedReal,
    pub kappa4: CertifiedReal,
    /// Degree bound of the field generated by the `exp(lambda_j)`; recorded only.
    pub degree_bound: usize,
}

impl BakerInput {
    /// Certify `log A_j >= max(h_j, |lambda_j|, 1)` and `B >= max(|b_j|, e)`.
    pub fn check(&self) -> Result<()> {
        let m = self.lambdas.len();
        if self.heights.len() != m || self.b.len() != m || self.log_a.len() != m {
            return Err(Error::invalid("inconsistent linear form lengths"));
        }
        if m == 0 || self.b.iter().all(Zero::is_zero) {
            return Err(Error::ConstraintViolation("all b_j are zero".into()));
        }
        let need = |v: Verdict, what: String| -> Result<()> {
            if v == Verdict::Holds {
                Ok(())
            } else {
                Err(Error::ConstraintViolation(format!("{what} ({})", v.as_str())))
            }
        };
        for j in 0..m {
            let la = &self.log_a[j];
            let p = la.prec();
            need(certify(la, Relation::Ge, &CertifiedReal::one(p)), format!("log A_{} >= 1", j + 1))?;
            need(certify(la, Relation::Ge, &self.heights[j]), format!("log A_{} >= h", j + 1))?;
            need(certify(la, Relation::Ge, &self.lambdas[j].abs()), format!("log A_{} >= |lambda|", j + 1))?;
        }
        let p = self.log_b.prec();
        need(certify(&self.log_b, Relation::Ge, &CertifiedReal::one(p)), "B >= e".into())?;
        for (j, b) in self.b.iter().enumerate() {
            if b.abs() > BigInt::from(1) {
                let lb = CertifiedReal::from_int(b.abs(), p + 16).log()?;
                need(certify(&self.log_b, Relation::Ge, &lb), format!("B >= |b_{}|", j + 1))?;
            }
        }
        Ok(())
    }
}

/// `exp(-kappa4 (log B) (log A_1) ... (log A_m))`, conditional on the
/// configured `kappa4`.
pub fn baker_bound(input: &BakerInput) -> Result<CertifiedReal> {
    input.check()?;
    if !input.kappa4.is_positive() {
        return Err(Error::ConstraintViolation("kappa4 must be positive".into()));
    }
    let mut e = &input.kappa4 * &input.log_b;
    for la in &input.log_a {
        e = e * la;
    }
    e.neg_ball().exp()
}

/// Configured constants; `None` picks the documented automatic value.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EffectiveConfig {
    pub kappa4: f64,
    pub kappa5: Option<f64>,
    pub kappa6: Option<f64>,
}

pub const DEFAULT_KAPPA4: f64 = 1.0e10;

impl Default for EffectiveConfig {
    fn default() -> Self {
        EffectiveConfig {
            kappa4: DEFAULT_KAPPA4,
            kappa5: None,
            kappa6: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapBranch {
    /// `p = 0`: only the direct distance `|e alpha|` is reported.
    ZeroP,
    /// `|gamma - 1| >= 1/2`.
    Trivial,
    Principal,
}

#[derive(Clone, Debug)]
pub struct EffectiveGapReport {
    pub branch: GapBranch,
    pub p: BigInt,
    pub q: BigInt,
    pub direct_gap: CertifiedReal,
    pub gamma: Option<CertifiedComplex>,
    pub gamma_distance: Option<CertifiedReal>,
    pub lambda0: Option<CertifiedComplex>,
    pub bracket: Option<Verdict>,
    pub exponents: Vec<i64>,
    pub torsion_order: Option<u32>,
    pub unit_logs: Vec<CertifiedComplex>,
    pub lambda_last: Option<CertifiedComplex>,
    /// `|exp(lambda_{r+1})| = |zeta alpha q / p|`.
    pub reconstruction_ok: Option<bool>,
    pub log_a: Vec<CertifiedReal>,
    pub log_b: Option<CertifiedReal>,
    pub kappa4: CertifiedReal,
    pub kappa5: Option<CertifiedReal>,
    pub kappa6: Option<CertifiedReal>,
    /// Lower bound for `|lambda0|`.
    pub baker: Option<CertifiedReal>,
    /// `kappa7` with `|lambda0| >= exp(-kappa7 log B log max(|p|, q, 2))`.
    pub kappa7: Option<CertifiedReal>,
    /// `kappa3` with bound `= log(house(e) + 2)^(-kappa3 log max(|p|, q, 2))`.
    pub kappa3: Option<CertifiedReal>,
    pub lower_bound: Option<CertifiedReal>,
    /// `lower_bound <= direct_gap`.
    pub sanity: Verdict,
}

/// Principal logarithm, with `log|x| + i pi` on the negative real axis.
fn log_branch(z: &CertifiedComplex) -> Result<CertifiedComplex> {
    if z.im.is_exact() && z.im.mid().is_zero() && z.re.is_negative() {
        let p = z.prec();
        return Ok(CertifiedComplex::new(z.re.abs().log()?, pi(p)));
    }
    z.log()
}

fn exact_upper(x: &CertifiedReal) -> CertifiedReal {
    CertifiedReal::exact(x.hi(), x.prec())
}

fn exact_f64(v: f64, prec: u32, name: &str) -> Result<CertifiedReal> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::invalid(format!("{name} must be a positive finite number")));
    }
    Ok(CertifiedReal::exact(Dyadic::from_f64(v), prec))
}

/// Assemble the linear form and the resulting lower bound for
/// `|e alpha - p/q|`, with a sanity comparison against the direct gap.
pub fn effective_gap(
    alpha: &FieldElement,
    eps: &FieldElement,
    p: &BigInt,
    q: &BigInt,
    basis: &UnitBasis,
    config: &EffectiveConfig,
) -> Result<EffectiveGapReport> {
    if alpha.field() != basis.field() || eps.field() != basis.field() {
        return Err(Error::FieldMismatch);
    }
    if !q.is_positive() {
        return Err(Error::invalid("q must be positive"));
    }
    let policy = alpha.field().policy();
    let mut last = None;
    for bits in policy.ladder() {
        match gap_at(alpha, eps, p, q, basis, config, bits + 2 * q.bits() as u32) {
            Ok(r) if r.sanity.is_decided() => return Ok(r),
            Ok(r) => last = Some(r),
            Err(Error::Domain(_)) | Err(Error::PrecisionExhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    last.ok_or_else(|| Error::exhausted(policy.max_bits, "effective gap"))
}

fn gap_at(
    alpha: &FieldElement,
    eps: &FieldElement,
    p: &BigInt,
    q: &BigInt,
    basis: &UnitBasis,
    config: &EffectiveConfig,
    bits: u32,
) -> Result<EffectiveGapReport> {
    let x = eps.mul(alpha)?;
    let pq = CertifiedComplex::from_real(CertifiedReal::from_ratio(p, q, bits));
    let direct_gap = x.identity_value(bits)?.sub(&pq).abs();
    let kappa4 = exact_f64(config.kappa4, bits, "kappa4")?;
    let mut rep = EffectiveGapReport {
        branch: GapBranch::ZeroP,
        p: p.clone(),
        q: q.clone(),
        direct_gap: direct_gap.clone(),
        gamma: None,
        gamma_distance: None,
        lambda0: None,
        bracket: None,
        exponents: Vec::new(),
        torsion_order: None,
        unit_logs: Vec::new(),
        lambda_last: None,
        reconstruction_ok: None,
        log_a: Vec::new(),
        log_b: None,
        kappa4: kappa4.clone(),
        kappa5: None,
        kappa6: None,
        baker: None,
        kappa7: None,
        kappa3: None,
        lower_bound: None,
        sanity: Verdict::Holds,
    };
    if p.is_zero() {
        if direct_gap.contains_zero() {
            rep.sanity = Verdict::Undecided;
        }
        return Ok(rep);
    }
    let g = gamma_element(alpha, eps, p, q)?;
    let one = CertifiedReal::one(bits);
    let gamma = g.identity_value(bits)?;
    let distance = gamma.add_real(&one.neg_ball()).abs();
    rep.gamma = Some(gamma.clone());
    rep.gamma_distance = Some(distance.clone());
    let half = CertifiedReal::from_ratio(&1.into(), &2.into(), bits);
    match certify(&distance, Relation::Lt, &half) {
        Verdict::Fails => {
            rep.branch = GapBranch::Trivial;
            let lb = CertifiedReal::from_ratio(&p.abs(), &(q * 2), bits);
            rep.sanity = certify(&lb, Relation::Le, &direct_gap);
            rep.lower_bound = Some(lb);
            return Ok(rep);
        }
        Verdict::Undecided => return Err(Error::domain("|gamma - 1| against 1/2 undecided")),
        Verdict::Holds => {}
    }
    rep.branch = GapBranch::Principal;
    let lambda0 = gamma.log()?;
    let m0 = lambda0.abs();
    rep.bracket = Some(
        certify(&CertifiedReal::zero(bits), Relation::Lt, &m0).and(certify(&m0, Relation::Lt, &distance.mul_pow2(1))),
    );
    rep.lambda0 = Some(lambda0.clone());

    let ev = basis.recover_exponents(eps)?;
    rep.exponents = ev.exponents.clone();
    rep.torsion_order = Some(ev.torsion_order);
    let mut lambdas = Vec::new();
    let mut heights = Vec::new();
    let mut log_a = Vec::new();
    let mut lambda_last = lambda0.clone();
    for (u, &b) in basis.units().iter().zip(&ev.exponents) {
        let l = log_branch(&u.identity_value(bits)?)?;
        let h = u.height(bits)?;
        let la = exact_upper(&h.max(&l.abs()).max(&one));
        lambda_last = lambda_last.sub(&l.scale(&CertifiedReal::from_int(b, bits)));
        lambdas.push(l.clone());
        heights.push(h);
        log_a.push(la);
        rep.unit_logs.push(l);
    }
    // exp(lambda_{r+1}) = zeta alpha q / p
    let last_elem = ev.torsion.mul(alpha)?.scale(&BigRational::new(q.clone(), p.clone()));
    let target = last_elem.identity_value(bits)?.abs();
    rep.reconstruction_ok = Some(lambda_last.re.exp()?.overlaps(&target));
    rep.lambda_last = Some(lambda_last.clone());

    let big_l = CertifiedReal::from_int(p.abs().max(q.clone()).max(BigInt::from(2)), bits).log()?;
    let kappa5 = match config.kappa5 {
        Some(v) => exact_f64(v, bits, "kappa5")?,
        None => {
            let a_abs = alpha.identity_value(bits)?.abs();
            let la = if a_abs.contains_zero() {
                CertifiedReal::zero(bits)
            } else {
                a_abs.log()?.abs()
            };
            let e = alpha.height(bits)?.max(&la) + pi(bits) + one.clone();
            exact_upper(&e.exp()?)
        }
    };
    let house = eps.house(bits)?;
    let kappa6 = match config.kappa6 {
        Some(v) => exact_f64(v, bits, "kappa6")?,
        None => {
            let four = CertifiedReal::from_int(4, bits);
            if basis.rank() == 0 {
                four
            } else {
                exact_upper(&basis.kappa8(bits)?.max(&four))
            }
        }
    };
    let la_last = exact_upper(&(kappa5.log()? + big_l.clone()));
    lambdas.push(lambda_last);
    heights.push(last_elem.height(bits)?);
    log_a.push(la_last.clone());
    let big_b = &kappa6 * &(house.clone() + one.clone()).log()?;
    let log_b = big_b.log()?;
    let mut b: Vec<BigInt> = ev.exponents.iter().map(|&v| BigInt::from(v)).collect();
    b.push(BigInt::from(1));
    let input = BakerInput {
        lambdas,
        heights,
        b,
        log_a: log_a.clone(),
        log_b: log_b.clone(),
        kappa4: kappa4.clone(),
        degree_bound: alpha.field().degree(),
    };
    let baker = baker_bound(&input)?;
    let mut k7 = kappa4.clone();
    for la in &log_a[..log_a.len() - 1] {
        k7 = k7 * la;
    }
    k7 = (k7 * la_last).div_ball(&big_l)?;
    let lb = CertifiedReal::from_ratio(&p.abs(), &(q * 2), bits) * &baker;
    // bound = log(house + 2)^(-kappa3 L)  <=>  kappa3 = -log(bound) / (L log log(house + 2))
    let lll = (house + CertifiedReal::from_int(2, bits)).log()?.log()?;
    let minus_log_lb = (&(&kappa4 * &log_b) * &log_a.iter().skip(1).fold(log_a[0].clone(), |acc, x| acc * x))
        - CertifiedReal::from_ratio(&p.abs(), &(q * 2), bits).log()?;
    rep.kappa3 = minus_log_lb.div_ball(&(big_l * lll)).ok();
    rep.sanity = certify(&lb, Relation::Le, &direct_gap);
    rep.log_a = log_a;
    rep.log_b = Some(log_b);
    rep.kappa5 = Some(kappa5);
    rep.kappa6 = Some(kappa6);
    rep.baker = Some(baker);
    rep.kappa7 = Some(k7);
    rep.lower_bound = Some(lb);
    Ok(rep)
}

/// Batch over `(p, q)` candidates for one unit, in input order.
pub fn effective_batch(
    alpha: &FieldElement,
    eps: &FieldElement,
    cases: &[(BigInt, BigInt)],
    basis: &UnitBasis,
    config: &EffectiveConfig,
) -> Vec<Result<EffectiveGapReport>> {
    use rayon::prelude::*;
    cases
        .par_iter()
        .map(|(p, q)| effective_gap(alpha, eps, p, q, basis, config))
        .collect()
}
